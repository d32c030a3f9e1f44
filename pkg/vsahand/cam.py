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

'''Expanding contour cam synthesis

A roller riding on the cam stretches a linear spring of rate k. The contour
height y(x) is chosen so that the force needed to push the roller along x is
the quadratic F_app(x) = a*x^2 + b*x + c. Virtual work gives
k*y*dy/dx = F_app, which integrates to

  y^2 = (2a/3k)x^3 + (b/k)x^2 + (2c/k)x + m

with m = 0 so the contour passes through the origin.
'''

import collections
import io

import numpy as np
from scipy import optimize

from .common import *
from .color import verdict


class StiffnessTargets(object):
  '''Joint stiffness bounds and geometry a cam pair must deliver'''
  def __init__(self, s_min, s_max, r_j, delta_x_max, k):
    self.s_min = float(s_min)     # N*mm/rad
    self.s_max = float(s_max)     # N*mm/rad
    self.r_j = float(r_j)         # mm
    self.delta_x_max = float(delta_x_max) # mm
    self.k = float(k)             # N/mm

    self.validate()

  def validate(self):
    if not self.s_min > 0:
      raise SpecError(_('Minimum stiffness must be positive: s_min = {}').format(self.s_min))
    if not self.s_max > self.s_min:
      raise SpecError(_('Maximum stiffness must exceed minimum: s_max = {} <= s_min = {}').format( \
        self.s_max, self.s_min))
    for name in ('r_j', 'delta_x_max', 'k'):
      if not getattr(self, name) > 0:
        raise SpecError(_('{} must be positive').format(name))

  def __repr__(self):
    return 'StiffnessTargets(s_min={}, s_max={}, r_j={}, delta_x_max={}, k={})'.format( \
      self.s_min, self.s_max, self.r_j, self.delta_x_max, self.k)


class QuadraticCoefficients(collections.namedtuple('QuadraticCoefficients', 'a b c')):
  '''F_app(x) = a*x^2 + b*x + c  (N/mm^2, N/mm, N)'''
  __slots__ = ()

  def force(self, x):
    return self.a * x * x + self.b * x + self.c


def derive_coefficients(targets):
  '''Quadratic spring coefficients for a stiffness target set

  Args:
    targets (StiffnessTargets): Stiffness bounds and geometry
  Returns:
    QuadraticCoefficients. c is negative whenever s_max^2 > 2*s_min^2.
  '''
  targets.validate()

  s_min, s_max = targets.s_min, targets.s_max
  rj2 = targets.r_j ** 2
  dx = targets.delta_x_max

  a = (s_max - s_min) / (4.0 * rj2 * dx)
  b = s_min / (2.0 * rj2)
  c = -dx * (s_max**2 - 2.0 * s_min**2) / (8.0 * rj2 * (s_max - s_min))

  return QuadraticCoefficients(a, b, c)


def radicand(coeffs, spring_k, x):
  '''Right hand side of the contour relation (mm^2), m = 0'''
  a, b, c = coeffs
  x = np.asarray(x, dtype=float)
  return x * ((2.0*a/3.0) * x * x + b * x + 2.0*c) / spring_k


def contour_y(coeffs, spring_k, x_con):
  '''Contour height at x_con

  Returns None where the radicand is negative (no real contour).
  '''
  if not spring_k > 0:
    raise SpecError(_('Spring rate must be positive'))

  r = float(radicand(coeffs, spring_k, x_con))
  if r < 0.0:
    return None
  return np.sqrt(r)


def feasible_start(coeffs, spring_k):
  '''Largest real root of the radicand cubic (mm)

  The cubic factors as x*q(x)/k with q(x) = (2a/3)x^2 + b*x + 2c. When c >= 0
  the contour starts at the origin. Otherwise the positive root of q is
  bracketed and bisected.
  '''
  a, b, c = coeffs
  if c >= 0.0:
    return 0.0

  def q(x):
    return (2.0*a/3.0) * x * x + b * x + 2.0*c

  hi = 1.0
  while q(hi) <= 0.0:
    hi *= 2.0
    if hi > 1e9:
      raise SynthesisError(_('Radicand never becomes positive'))

  x_lo = optimize.bisect(q, 0.0, hi, xtol=1e-14, rtol=1e-15, maxiter=500)

  # Land on the nonnegative side of the root
  while q(x_lo) < 0.0:
    x_lo = np.nextafter(x_lo, np.inf)

  return float(x_lo)


class CamProfile(object):
  '''Sampled cam contour over its feasible domain'''
  def __init__(self, coefficients, spring_k, domain, x, y, targets=None):
    self.coefficients = QuadraticCoefficients(*coefficients)
    self.spring_k = float(spring_k)
    self.domain = (float(domain[0]), float(domain[1]))
    self.x = np.asarray(x, dtype=float)
    self.y = np.asarray(y, dtype=float)
    self.m = 0.0
    self.targets = targets

  @property
  def x_lo(self):
    return self.domain[0]

  @property
  def x_hi(self):
    return self.domain[1]

  def __len__(self):
    return len(self.x)

  def radicand(self):
    return radicand(self.coefficients, self.spring_k, self.x)

  def applied_force(self):
    return self.coefficients.force(self.x)

  def metadata(self):
    '''Key/value pairs describing the profile'''
    a, b, c = self.coefficients
    meta = collections.OrderedDict()
    if self.targets is not None:
      meta['s_min_Nmm_rad'] = self.targets.s_min
      meta['s_max_Nmm_rad'] = self.targets.s_max
      meta['r_j_mm'] = self.targets.r_j
      meta['delta_x_max_mm'] = self.targets.delta_x_max
    meta['k_N_mm'] = self.spring_k
    meta['a_N_mm2'] = a
    meta['b_N_mm'] = b
    meta['c_N'] = c
    meta['m_mm2'] = self.m
    meta['x_lo_mm'] = self.x_lo
    meta['x_hi_mm'] = self.x_hi
    meta['dead_zone_mm'] = self.x_lo
    meta['samples'] = len(self)
    return meta

  def write_csv_file(self, fname):
    '''Write contour samples as CSV'''
    rad = self.radicand()
    force = self.applied_force()
    with io.open(fname, 'w', encoding='utf-8') as fh:
      print('x_mm,y_mm,radicand,F_app_N', file=fh)
      for row in zip(self.x, self.y, rad, force):
        print(','.join('{:.9g}'.format(v) for v in row), file=fh)

  def write_metadata_file(self, fname):
    '''Write the coefficient sidecar as key=value lines'''
    with io.open(fname, 'w', encoding='utf-8') as fh:
      for k, v in self.metadata().items():
        print('{}={}'.format(k, v), file=fh)


def synthesize_profile(targets, n_samples=256):
  '''Build a sampled cam contour for a stiffness target set

  Args:
    targets (StiffnessTargets): Stiffness bounds and geometry
    n_samples (int): Number of contour samples, at least 16
  Returns:
    CamProfile over [x_lo, x_lo + delta_x_max].
  '''
  if n_samples < 16:
    raise SpecError(_('At least 16 cam samples are required, got {}').format(n_samples))

  coeffs = derive_coefficients(targets)
  k = targets.k

  if not (coeffs.a >= 0.0 and coeffs.b > 0.0):
    raise SynthesisError(_('Quadratic spring is not increasing: {}').format(coeffs))

  x_lo = feasible_start(coeffs, k)
  x_hi = x_lo + targets.delta_x_max

  x = np.linspace(x_lo, x_hi, n_samples)
  rad = radicand(coeffs, k, x)
  if np.any(rad < 0.0):
    raise SynthesisError(_('No feasible cam interval of length {} mm').format(targets.delta_x_max))

  y = np.sqrt(rad)
  return CamProfile(coeffs, k, (x_lo, x_hi), x, y, targets)


CheckResult = collections.namedtuple('CheckResult', 'name passed max_residual tolerance worst_index')


class ProfileReport(object):
  '''Outcome of all profile checks'''
  def __init__(self, checks):
    self.checks = checks

  @property
  def passed(self):
    return all(c.passed for c in self.checks)

  def __getitem__(self, name):
    for c in self.checks:
      if c.name == name:
        return c
    raise KeyError(name)

  def format(self):
    '''Report lines'''
    lines = []
    for c in self.checks:
      lines.append('  {:<14} {}  max residual {:.3e} (tol {:.1e})'.format(c.name, verdict(c.passed), \
        c.max_residual, c.tolerance))
    return lines


def _worst(residual):
  if len(residual) == 0:
    return 0.0, None
  ix = int(np.argmax(residual))
  return float(residual[ix]), ix


def validate_profile(profile, wv_tolerance=0.005, band=0.01):
  '''Check a profile against the contour relation and virtual work

  Args:
    profile (CamProfile): Profile to check
    wv_tolerance (float): Relative tolerance for the virtual-work identity
    band (float): Fraction of the domain next to y = 0 skipped by the
                  virtual-work check
  Returns:
    ProfileReport with one entry per check. Failures are reported, not raised.
  '''
  x, y = profile.x, profile.y
  coeffs, k = profile.coefficients, profile.spring_k
  rad = profile.radicand()
  span = profile.x_hi - profile.x_lo
  checks = []

  # Monotone samples
  dx = np.diff(x)
  dy = np.diff(y)
  bad = np.concatenate((np.where(dx <= 0.0, 1.0 + np.abs(dx), 0.0), np.maximum(-dy, 0.0)))
  mx, ix = _worst(bad)
  checks.append(CheckResult('monotonic', bool(mx == 0.0 and np.all(y >= 0.0)), mx, 0.0, ix))

  # Radicand nonnegative
  tol = 1e-9 * max(1.0, float(np.max(np.abs(rad))) if len(rad) else 1.0)
  neg = np.maximum(-rad, 0.0)
  mx, ix = _worst(neg)
  checks.append(CheckResult('radicand', mx <= tol, mx, tol, ix))

  # Contour relation at every sample
  resid = np.abs(y * y - rad)
  mx, ix = _worst(resid)
  checks.append(CheckResult('contour', mx <= tol, mx, tol, ix))

  # Virtual work: k*y*dy/dx == F_app away from y = 0
  h = 1e-4 * span
  keep = x >= profile.x_lo + band * span
  xs = x[keep]
  y_plus = np.sqrt(np.maximum(radicand(coeffs, k, xs + h), 0.0))
  y_minus = np.sqrt(np.maximum(radicand(coeffs, k, xs - h), 0.0))
  slope = (y_plus - y_minus) / (2.0 * h)
  f_app = coeffs.force(xs)
  f_vw = k * y[keep] * slope
  rel = np.abs(f_vw - f_app) / np.maximum(np.abs(f_app), 1e-12)
  mx, ix = _worst(rel)
  if ix is not None:
    ix = int(np.flatnonzero(keep)[ix])
  checks.append(CheckResult('virtual_work', mx < wv_tolerance, mx, wv_tolerance, ix))

  return ProfileReport(checks)
