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


'''One-time calibration of the finger flexures

Grid search over a joint stiffness scale and a tension stiffening scale
that minimises the worst relative error between the simulated hand
fingertip stiffness and the published low, intermediate and high values.
The best pair is printed as a [finger] block for the config file.

  python -m vsahand.calibrate [--config FILE] [--points N]
'''

from __future__ import print_function

import collections
import sys
from argparse import ArgumentParser

import numpy as np

from .common import *
from .color import *
from . import finger as fg
from . import report
from . import vsa as vsa_model
from .config import load_sim_config


CalibrationResult = collections.namedtuple('CalibrationResult', 'stiffness_scale stiffening_scale worst_error slopes')


def hand_stiffness(config, spec, stiffness, posture=(0.0, 0.0, 0.0)):
  '''Fingertip stiffness of the whole hand at a joint stiffness (N/mm)'''
  params = config.vsa_params()
  tree = config.pulley_tree()
  state = vsa_model.forward(params, *vsa_model.inverse(params, 0.0, stiffness))
  return tree.outputs * fg.fingertip_stiffness(spec, state, posture, share=tree.share)


def level_errors(config, spec, targets):
  slopes = [hand_stiffness(config, spec, s) for s in config.levels().values()]
  return slopes, max(abs(k - t) / t for k, t in zip(slopes, targets))


def calibrate(config, stiffness_scales, stiffening_scales):
  '''Best scale pair over a grid

  The grid scales the configured [finger] values, so the stored scales are
  multiplied by the result.
  '''
  ref = report.read_reference()
  targets = [ref['stiffness_' + n].value for n in config.levels()]
  base = config.finger_spec()

  best = None
  for ks in stiffness_scales:
    for gs in stiffening_scales:
      try:
        spec = base.scaled(ks, gs)
      except SpecError:
        continue
      slopes, worst = level_errors(config, spec, targets)
      if best is None or worst < best.worst_error:
        best = CalibrationResult(ks * config.stiffness_scale, gs * config.stiffening_scale, worst, slopes)

  if best is None:
    raise FatalError(_('No valid finger in the calibration grid'))
  return best


def format_block(result):
  return ['[finger]', 'stiffness_scale = {:.6g}'.format(result.stiffness_scale), \
    'stiffening_scale = {:.6g}'.format(result.stiffening_scale)]


def main(argv=None):
  if argv is None:
    argv = sys.argv[1:]

  parser = ArgumentParser(prog='vsahand.calibrate', description=_('Calibrate the finger flexures'))
  parser.add_argument('-c', '--config', dest='config_file', help=_('Config file'))
  parser.add_argument('-n', '--points', dest='points', type=int, default=41, help=_('Grid points per axis'))
  parser.add_argument('--span', dest='span', type=float, default=4.0, \
    help=_('Grid spans [1/SPAN, SPAN] on a log scale'))
  options = parser.parse_args(argv)

  try:
    config = load_sim_config(options.config_file)
    grid = np.geomspace(1.0 / options.span, options.span, options.points)
    result = calibrate(config, grid, grid)
  except ConfigError as e:
    print(error(_('\nERROR:')), e, file=sys.stderr)
    sys.exit(2)
  except FatalError as e:
    print(error(_('\nERROR:')), e, file=sys.stderr)
    sys.exit(1)

  rows = [(n, '{:.4f}'.format(k)) for n, k in zip(config.levels(), result.slopes)]
  for l in report.format_table(rows, [_('Level'), _('Hand stiffness (N/mm)')], indent=2):
    print(l)
  print(note(_('\nWorst relative error: {:.1%}\n').format(result.worst_error)))
  for l in format_block(result):
    print(l)


if __name__ == '__main__':
  main()
