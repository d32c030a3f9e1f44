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


'''vsahand command line

Design, simulation and verification toolkit for a prosthetic hand driven by
one variable stiffness actuator.

USAGE:

  vsahand [global options] synth-cam [--samples N]
  vsahand [global options] track {position,stiffness,stepped,custom}
  vsahand [global options] characterize {stiffness,position}
  vsahand [global options] grasp [SUITE]
  vsahand [global options] energy
  vsahand [global options] verify

Settings come from the file given with --config, else the file named by the
VSAHAND_CONFIG environment variable, else the built-in defaults (documented
in vsahand/data/default.cfg).

Exit status is 0 on success, 1 when a check or the physics fails and 2 for
configuration or suite file errors.
'''

from __future__ import print_function

import os, sys
from argparse import ArgumentParser

from . import sim
from .common import *
from .color import *
from .config import load_sim_config
from .harness import Harness, TRACK_SCENARIOS, CHARACTERIZE_MODES


def parse_command_line(argv):
  '''Process command line arguments'''
  desc = '''Variable stiffness hand design and simulation toolkit.'''
  parser = ArgumentParser(prog='vsahand', description=desc)

  parser.add_argument('-c', '--config', dest='config_file', help=_('Config file'))
  parser.add_argument('-o', '--out', dest='output_dir', help=_('Output directory'))
  parser.add_argument('-s', '--seed', dest='seed', type=int, help=_('Seed for randomized campaigns'))
  parser.add_argument('--svg', dest='svg', action='store_true', default=False, help=_('Write SVG figures'))
  parser.add_argument('-v', '--version', dest='version', action='store_true', default=False, \
        help=_('Show vsahand version'))
  parser.add_argument('-q', '--quiet', dest='quiet', action='store_true', default=False, \
        help=_('Quiet output'))
  parser.add_argument('-V', '--verbose', dest='verbose', action='store_true', default=False, \
        help=_('Verbose output'))

  sub = parser.add_subparsers(dest='command')

  p = sub.add_parser('synth-cam', help=_('Synthesize and validate the cam profile'))
  p.add_argument('--samples', dest='samples', type=int, help=_('Number of profile samples'))

  p = sub.add_parser('track', help=_('Run a position/stiffness tracking scenario'))
  p.add_argument('scenario', choices=TRACK_SCENARIOS)

  p = sub.add_parser('characterize', help=_('Fingertip stiffness characterization'))
  p.add_argument('mode', choices=CHARACTERIZE_MODES)

  p = sub.add_parser('grasp', help=_('Grasp an object suite'))
  p.add_argument('suite', nargs='?', help=_('Object suite file'))

  sub.add_parser('energy', help=_('Energy of the grasp and modulation scenarios'))
  sub.add_parser('verify', help=_('Oracle and invariant campaigns'))

  options = parser.parse_args(argv)

  if options.version:
    print(_('vsahand version'), sim.__version__)
    sys.exit(0)

  if options.command is None:
    parser.error(_('Missing command'))

  return options


def report_error(*args, **kwargs):
  '''Print an error message'''
  print(error(_('\nERROR:')), *args, file=sys.stderr)
  if 'exit' in kwargs:
    sys.exit(kwargs['exit'])


def build_config(options):
  '''Defaults, then the config file, then command line overrides'''
  config = load_sim_config(options.config_file)
  if options.output_dir is not None:
    config.output_dir = options.output_dir
  if options.seed is not None:
    config.seed = options.seed
  if options.svg:
    config.svg = True
  if options.quiet:
    config.quiet = True
  if options.verbose:
    config.verbose = True
  if getattr(options, 'samples', None) is not None:
    config.cam_samples = options.samples
  return config


def run_command(harness, options):
  cmd = options.command
  if cmd == 'synth-cam':
    return harness.cmd_synth_cam()
  elif cmd == 'track':
    return harness.cmd_track(options.scenario)
  elif cmd == 'characterize':
    return harness.cmd_characterize(options.mode)
  elif cmd == 'grasp':
    return harness.cmd_grasp(options.suite)
  elif cmd == 'energy':
    return harness.cmd_energy()
  return harness.cmd_verify()


def main(argv=None):
  '''Main application code'''
  if argv is None:
    argv = sys.argv[1:]
  options = parse_command_line(argv)

  try:
    config = build_config(options)
  except ConfigError as e:
    report_error(str(e), exit=2)

  def printq(*args, **keys):
    if not config.quiet:
      print(*args, **keys)

  printq(note(_('vsahand {}').format(sim.__version__)))

  harness = Harness(config)
  try:
    ok = run_command(harness, options)
  except ConfigError as e:  # Includes SuiteError
    report_error(str(e), exit=2)
  except FatalError as e:
    report_error(str(e), exit=1)

  sys.exit(0 if ok else 1)


if __name__ == '__main__':
  main()
