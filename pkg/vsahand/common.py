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

'''Shared exceptions and library paths'''

import os
import sys
import gettext


def find_lib_dir():
  '''Get the vsahand library path'''
  # Look relative to installed library
  try:
    lib_dir = os.path.dirname(sys.modules['vsahand'].__file__)
  except KeyError:
    # Look relative to this module
    lib_dir = os.path.dirname(os.path.realpath(__file__))

  return lib_dir

def data_path(fname):
  '''Path to a file shipped in the package data directory'''
  return os.path.join(find_lib_dir(), 'data', fname)


# Configure multilingual strings
gettext.install('vsahand', os.path.join(find_lib_dir(), 'lang'))


class FatalError(Exception):
  pass

class SpecError(FatalError):
  '''A parameter set violates its own invariants'''
  pass

class SynthesisError(FatalError):
  pass

class ConfigError(FatalError):
  '''Configuration file or option error'''
  def __init__(self, msg, source=None, line=None):
    FatalError.__init__(self, msg)
    self.msg = msg
    self.source = source
    self.line = line

  def __str__(self):
    if self.source is None:
      return self.msg

    if self.line is None:
      return '{}: {}'.format(self.source, self.msg)

    return '{}:{}: {}'.format(self.source, self.line, self.msg)

class SuiteError(ConfigError):
  '''Malformed object suite file'''
  pass


class PhysicsError(FatalError):
  '''Quasi-static admissibility violation'''
  pass

class SlackTendonError(PhysicsError):
  pass

class OverTravelError(PhysicsError):
  pass

class UnreachableStiffnessError(PhysicsError):
  pass

class NoEquilibriumError(PhysicsError):
  pass

class SingularPostureError(PhysicsError):
  pass

class SingularSystemError(PhysicsError):
  pass

class CoContractionLimitError(PhysicsError):
  pass

class InfeasibleReferenceError(PhysicsError):
  '''A reference sample cannot be realized by the actuator'''
  def __init__(self, msg, time=None):
    PhysicsError.__init__(self, msg)
    self.msg = msg
    self.time = time

  def __str__(self):
    if self.time is None:
      return self.msg
    return '{} (t = {:.3f} s)'.format(self.msg, self.time)
