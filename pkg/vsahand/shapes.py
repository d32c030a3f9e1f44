#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright © 2024 The vsahand developers
#
# Permission is hereby granted, free of charge, to any person obtaining a
# copy of this software and associated documentation files (the "Software"),
# to deal in the Software without restriction, including without limitation
# the rights to use, copy, modify, merge, publish, distribute, sublicense,
# and/or sell copies of the Software, and to permit persons to whom the
# Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
# FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
# DEALINGS IN THE SOFTWARE.

'''2-D object cross sections and the object suite file

Suite files hold one object per line:

  <name> <kind> key=value ...

Kinds are circle (radius_mm), rectangle (width_mm height_mm), ellipse
(a_mm b_mm, stored as a 32-gon) and polygon (vertices_mm = x:y;x:y;...).
Common keys are x_mm, angle_deg, mass_kg and stiffness_N_mm (rigid when
omitted). Objects are placed resting on the hand support. Blank lines and
lines starting with # are ignored.
'''

import io
import math
import shlex

import numpy as np
from scipy import optimize

from .common import *


SHAPE_KINDS = ('circle', 'rectangle', 'ellipse', 'polygon')


def _rotate(pts, angle):
  c, s = math.cos(angle), math.sin(angle)
  rot = np.array([[c, -s], [s, c]])
  return np.asarray(pts, dtype=float).dot(rot.T)


def _point_segment(p, a, b):
  '''Closest point on segment ab to p'''
  ab = b - a
  den = ab.dot(ab)
  u = 0.0 if den == 0.0 else min(max((p - a).dot(ab) / den, 0.0), 1.0)
  return a + u * ab


class ObjectShape(object):
  '''Rigid or compliant planar object'''
  def __init__(self, kind, pose=(0.0, 0.0, 0.0), size=None, stiffness=float('inf'), mass=0.1, name=''):
    if kind not in SHAPE_KINDS:
      raise SpecError(_('Unknown shape kind: {}').format(kind))

    self.kind = kind
    self.pose = tuple(float(v) for v in pose)
    self.size = dict(size or {})
    self.stiffness = float(stiffness)   # N/mm, inf when rigid
    self.mass = float(mass)             # kg
    self.name = name

    if not self.stiffness > 0:
      raise SpecError(_('Object stiffness must be positive or rigid'))
    if self.mass < 0:
      raise SpecError(_('Object mass cannot be negative'))

    self._local = None
    if kind == 'circle':
      if not self.size.get('radius', 0) > 0:
        raise SpecError(_('Circle needs a positive radius'))
    elif kind == 'rectangle':
      w, h = self.size.get('width', 0), self.size.get('height', 0)
      if not (w > 0 and h > 0):
        raise SpecError(_('Rectangle needs positive width and height'))
      self._local = np.array([[-w/2, -h/2], [w/2, -h/2], [w/2, h/2], [-w/2, h/2]])
    elif kind == 'ellipse':
      a, b = self.size.get('a', 0), self.size.get('b', 0)
      if not (a > 0 and b > 0):
        raise SpecError(_('Ellipse needs positive semi-axes'))
      th = np.linspace(0.0, 2*math.pi, 32, endpoint=False)
      self._local = np.column_stack((a * np.cos(th), b * np.sin(th)))
    else:
      verts = np.asarray(self.size.get('vertices', ()), dtype=float)
      if verts.ndim != 2 or len(verts) < 3:
        raise SpecError(_('Polygon needs at least three vertices'))
      verts = verts - verts.mean(axis=0)
      if _signed_area(verts) < 0:
        verts = verts[::-1]
      if not _is_convex(verts):
        raise SpecError(_('Polygon {} is not convex').format(name))
      self._local = verts

  @property
  def rigid(self):
    return math.isinf(self.stiffness)

  @property
  def center(self):
    return np.array(self.pose[:2])

  def vertices(self):
    '''World vertices, counter-clockwise (polygonal kinds only)'''
    return _rotate(self._local, self.pose[2]) + self.center

  def bounds(self):
    '''(x_min, y_min, x_max, y_max)'''
    if self.kind == 'circle':
      r = self.size['radius']
      x, y = self.pose[:2]
      return (x - r, y - r, x + r, y + r)
    v = self.vertices()
    return (v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max())

  def moved(self, dx=0.0, dy=0.0):
    '''Copy translated by (dx, dy)'''
    pose = (self.pose[0] + dx, self.pose[1] + dy, self.pose[2])
    size = dict(self.size)
    if self.kind == 'polygon':
      size['vertices'] = self._local.tolist()
    return ObjectShape(self.kind, pose, size, self.stiffness, self.mass, self.name)

  def resting_on(self, support_y):
    '''Copy placed so its highest point touches a support line at y'''
    return self.moved(dy=support_y - self.bounds()[3])

  def signed_distance(self, p):
    '''Distance from the boundary, negative inside (mm)'''
    p = np.asarray(p, dtype=float)
    if self.kind == 'circle':
      return float(np.linalg.norm(p - self.center) - self.size['radius'])

    v = self.vertices()
    edges = np.roll(v, -1, axis=0) - v
    normals = np.column_stack((edges[:, 1], -edges[:, 0]))
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    depth = np.einsum('ij,ij->i', p - v, normals)
    if np.all(depth <= 0.0):
      return float(depth.max())
    return float(min(np.linalg.norm(p - _point_segment(p, v[i], v[(i+1) % len(v)])) \
      for i in range(len(v))))

  def outward_normal(self, p):
    '''Unit surface normal nearest to p, pointing out of the object'''
    p = np.asarray(p, dtype=float)
    if self.kind == 'circle':
      n = p - self.center
      return n / np.linalg.norm(n)

    v = self.vertices()
    best = None
    for i in range(len(v)):
      a, b = v[i], v[(i+1) % len(v)]
      q = _point_segment(p, a, b)
      d = np.linalg.norm(p - q)
      if best is None or d < best[0] - 1e-12:
        e = b - a
        n = np.array([e[1], -e[0]]) / np.linalg.norm(e)
        best = (d, n)
    return best[1]

  def segment_gap(self, p0, p1):
    '''Smallest signed distance along a segment and where it occurs

    Returns:
      (gap, point). gap < 0 when the segment penetrates the object.
    '''
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)

    if self.kind == 'circle':
      q = _point_segment(self.center, p0, p1)
      return float(np.linalg.norm(q - self.center) - self.size['radius']), q

    v = self.vertices()
    if not _segment_hits_polygon(p0, p1, v):
      # Closest pair lies on a vertex or a segment end
      cands = [(self.signed_distance(p0), p0), (self.signed_distance(p1), p1)]
      for vx in v:
        q = _point_segment(vx, p0, p1)
        cands.append((float(np.linalg.norm(vx - q)), q))
      return min(cands, key=lambda c: c[0])

    # Signed distance is convex along the segment
    f = lambda u: self.signed_distance(p0 + u * (p1 - p0))
    res = optimize.minimize_scalar(f, bounds=(0.0, 1.0), method='bounded', options={'xatol': 1e-10})
    u = float(res.x)
    return f(u), p0 + u * (p1 - p0)

  def support_point(self):
    '''Point resting on the support (highest point of the object)'''
    if self.kind == 'circle':
      return self.center + np.array([0.0, self.size['radius']])
    v = self.vertices()
    top = v[:, 1].max()
    on = v[np.abs(v[:, 1] - top) < 1e-9]
    return on.mean(axis=0)

  def support_patch(self, x_range=None):
    '''Ends of the region resting on the support, clipped to x_range'''
    if self.kind == 'circle':
      return [self.support_point()]
    v = self.vertices()
    top = v[:, 1].max()
    xs = v[np.abs(v[:, 1] - top) < 1e-9, 0]
    lo, hi = xs.min(), xs.max()
    if x_range is not None:
      lo = min(max(lo, x_range[0]), x_range[1])
      hi = min(max(hi, x_range[0]), x_range[1])
    if hi - lo < 1e-9:
      return [np.array([0.5 * (lo + hi), top])]
    return [np.array([lo, top]), np.array([hi, top])]

  def __repr__(self):
    return 'ObjectShape({!r}, {}, pose={})'.format(self.name, self.kind, self.pose)


def _signed_area(v):
  x, y = v[:, 0], v[:, 1]
  return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

def _is_convex(v):
  e = np.roll(v, -1, axis=0) - v
  cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
  return bool(np.all(cross >= -1e-12))

def _segment_hits_polygon(p0, p1, v):
  '''True when a segment touches or enters a convex CCW polygon'''
  # Clip the segment against every edge half-plane
  lo, hi = 0.0, 1.0
  d = p1 - p0
  for i in range(len(v)):
    a, b = v[i], v[(i+1) % len(v)]
    e = b - a
    n = np.array([e[1], -e[0]])
    num = n.dot(a - p0)
    den = n.dot(d)
    if den == 0.0:
      if num < 0.0:
        return False
    elif den > 0.0:
      hi = min(hi, num / den)
    else:
      lo = max(lo, num / den)
    if lo > hi:
      return False
  return True


_SIZE_KEYS = {
  'circle': {'radius_mm': 'radius'},
  'rectangle': {'width_mm': 'width', 'height_mm': 'height'},
  'ellipse': {'a_mm': 'a', 'b_mm': 'b'},
  'polygon': {'vertices_mm': 'vertices'}
}
_COMMON_KEYS = ('x_mm', 'angle_deg', 'mass_kg', 'stiffness_N_mm')


def _parse_vertices(text):
  pts = []
  for pair in text.split(';'):
    x, y = pair.split(':')
    pts.append((float(x), float(y)))
  return pts


def parse_suite(lines, source='<suite>', support_y=None):
  '''Parse object suite lines into ObjectShape instances'''
  objects = []
  for lnum, line in enumerate(lines, 1):
    line = line.strip()
    if not line or line.startswith('#'):
      continue

    try:
      fields = shlex.split(line)
    except ValueError as e:
      raise SuiteError(str(e), source, lnum)

    if len(fields) < 2:
      raise SuiteError(_('Expected "<name> <kind> key=value ..."'), source, lnum)
    name, kind = fields[0], fields[1]
    if kind not in SHAPE_KINDS:
      raise SuiteError(_('Unknown shape kind "{}"').format(kind), source, lnum)

    keys = {}
    for f in fields[2:]:
      if '=' not in f:
        raise SuiteError(_('Malformed field "{}"').format(f), source, lnum)
      k, v = f.split('=', 1)
      if k not in _SIZE_KEYS[kind] and k not in _COMMON_KEYS:
        raise SuiteError(_('Unknown key "{}" for {}').format(k, kind), source, lnum)
      keys[k] = v

    try:
      size = {}
      for k, attr in _SIZE_KEYS[kind].items():
        if k not in keys:
          raise SuiteError(_('Missing key "{}"').format(k), source, lnum)
        size[attr] = _parse_vertices(keys[k]) if attr == 'vertices' else float(keys[k])

      pose = (float(keys.get('x_mm', 0.0)), 0.0, math.radians(float(keys.get('angle_deg', 0.0))))
      obj = ObjectShape(kind, pose, size, float(keys.get('stiffness_N_mm', 'inf')), \
        float(keys.get('mass_kg', 0.1)), name)
    except (ValueError, SpecError) as e:
      raise SuiteError(str(e), source, lnum)

    if support_y is not None:
      obj = obj.resting_on(support_y)
    objects.append(obj)

  return objects


def read_suite(fname, support_y=None):
  '''Read an object suite file'''
  try:
    with io.open(fname, encoding='utf-8') as fh:
      lines = fh.readlines()
  except (IOError, OSError) as e:
    raise SuiteError(_('Cannot read suite: {}').format(e), fname)
  return parse_suite(lines, fname, support_y)
