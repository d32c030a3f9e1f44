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


'''Text reports, CSV output and SVG figures

Figures use matplotlib when it is installed (the "plot" extra). Only the
--svg option needs it.
'''

from __future__ import print_function

import collections
import csv
import io
import os

import numpy as np

from .common import *
from . import finger as fg


def underline(s, char='-'):
  '''Insert an underline aligned to a text string'''
  vis_len = len(s.strip())
  return '{}\n{}'.format(s, ' ' * (len(s) - vis_len) + char * vis_len)


def format_table(rows, col_names, indent=0):
  '''Format tabular data with variable width columns
  Returns a list of strings
  '''
  cols = list(zip(col_names, *rows))
  col_size = [max(len(str(i)) for i in col) for col in cols]

  fmt = ' ' * indent + '  '.join('{{:{}}}'.format(w) for w in col_size)
  tbl = [fmt.format(*col_names).rstrip(),
    fmt.format(*['-'*len(c) for c in col_names]).rstrip()
  ]
  for r in rows:
    tbl.append(fmt.format(*['' if i is None else str(i) for i in r]).rstrip())

  return tbl


def build_path(output_dir, fname):
  '''Build a file path located in the output directory'''
  return os.path.normpath(os.path.join(output_dir, os.path.split(fname)[1]))


def create_output_dir(output_dir):
  '''Create output directory if it doesn't exist'''
  try:
    os.makedirs(output_dir)
  except OSError:
    if not os.path.isdir(output_dir):
      raise FatalError(_('Unable to create output directory: {}').format(output_dir))


ReferenceValue = collections.namedtuple('ReferenceValue', 'value unit anchor')

def read_reference(fname=None):
  '''Published reference values keyed by quantity'''
  if fname is None:
    fname = data_path('published_reference.csv')
  ref = collections.OrderedDict()
  with io.open(fname, encoding='utf-8', newline='') as fh:
    for row in csv.DictReader(fh):
      ref[row['quantity']] = ReferenceValue(float(row['value']), row['unit'], row['anchor'])
  return ref


def write_csv(fname, header, rows):
  with io.open(fname, 'w', encoding='utf-8', newline='') as fh:
    w = csv.writer(fh, lineterminator='\n')
    w.writerow(header)
    for r in rows:
      w.writerow(r)


def write_text(fname, lines):
  with io.open(fname, 'w', encoding='utf-8') as fh:
    for l in lines:
      print(l, file=fh)


def _pyplot():
  try:
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt
  except ImportError:
    raise FatalError(_('SVG output needs matplotlib. Try "pip install vsahand[plot]".'))
  return plt


def plot_profile_svg(profile, fname):
  '''Cam contour with the applied force it realizes'''
  plt = _pyplot()
  fig, axes = plt.subplots(1, 2, figsize=(10, 4))
  axes[0].plot(profile.x, profile.y)
  axes[0].set_xlabel('x (mm)')
  axes[0].set_ylabel('y (mm)')
  axes[0].set_title(_('Cam contour'))
  axes[1].plot(profile.x, profile.applied_force())
  axes[1].set_xlabel('x (mm)')
  axes[1].set_ylabel('F (N)')
  axes[1].set_title(_('Applied force'))
  fig.tight_layout()
  fig.savefig(fname, format='svg')
  plt.close(fig)


def plot_trace_svg(trace, fname, title=''):
  '''Reference and estimated joint angle and stiffness'''
  plt = _pyplot()
  t = [r.t for r in trace]
  fig, axes = plt.subplots(2, 1, figsize=(10, 6), sharex=True)
  axes[0].plot(t, [r.theta_ref for r in trace], label=_('reference'))
  axes[0].plot(t, [r.theta_est for r in trace], '--', label=_('estimate'))
  axes[0].set_ylabel('theta (rad)')
  axes[0].legend()
  axes[1].plot(t, [r.s_ref for r in trace])
  axes[1].plot(t, [r.s_est for r in trace], '--')
  axes[1].set_ylabel('S (N*mm/rad)')
  axes[1].set_xlabel('t (s)')
  if title:
    axes[0].set_title(title)
  fig.tight_layout()
  fig.savefig(fname, format='svg')
  plt.close(fig)


def plot_grasp_svg(hand_spec, result, fname):
  '''Final finger and object geometry of one grasp'''
  plt = _pyplot()
  fig, ax = plt.subplots(1, 1, figsize=(6, 6))
  obj = result.object
  if obj.kind == 'circle':
    th = np.linspace(0.0, 2*np.pi, 64)
    r = obj.size['radius']
    ax.fill(obj.pose[0] + r * np.cos(th), obj.pose[1] + r * np.sin(th), alpha=0.3)
  else:
    v = obj.vertices()
    ax.fill(v[:, 0], v[:, 1], alpha=0.3)

  x0, x1, y = hand_spec.support
  ax.plot([x0, x1], [y, y], 'k-', linewidth=3)

  for spec, base, state in zip(hand_spec.fingers, hand_spec.finger_bases, result.finger_states):
    pts = fg.joint_positions(spec, state.joint_angles, base)
    ax.plot(pts[:, 0], pts[:, 1], 'o-')

  for c in result.contacts:
    ax.plot([c.point[0]], [c.point[1]], 'rx')

  ax.set_aspect('equal')
  ax.set_title('{} ({})'.format(obj.name, result.grasp_type))
  fig.savefig(fname, format='svg')
  plt.close(fig)
