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

'''Bowden cable and pulley tree transmission'''

import collections
import math

import numpy as np

from .common import *


# Resistance used to stand in for a blocked finger (N/mm)
BLOCKED_RESISTANCE = 1e6


class PulleyTree(object):
  '''Binary tree of movable pulleys splitting one tendon into 2**depth'''
  def __init__(self, depth=2, radii=None, efficiency=1.0, reduction=1.0):
    self.depth = int(depth)
    if self.depth < 1:
      raise SpecError(_('Pulley tree needs at least one level'))

    self.radii = tuple(float(r) for r in (radii if radii is not None else [10.0] * self.depth))
    if len(self.radii) != self.depth or any(r <= 0 for r in self.radii):
      raise SpecError(_('Pulley tree needs one positive radius per level'))

    self.efficiency = float(efficiency)
    if not 0.0 < self.efficiency <= 1.0:
      raise SpecError(_('Pulley efficiency must be in (0, 1]: {}').format(self.efficiency))

    self.reduction = float(reduction)
    if not self.reduction > 0:
      raise SpecError(_('Pulley tree reduction must be positive'))

  @property
  def outputs(self):
    return 2 ** self.depth

  @property
  def share(self):
    '''Fraction of input tension reaching each output'''
    return self.efficiency ** self.depth / self.outputs


class BowdenStage(object):
  '''Cable in housing with direction dependent friction loss'''
  def __init__(self, efficiency_forward=0.9, efficiency_return=0.9, slack=0.0, compliance=0.0):
    self.efficiency_forward = float(efficiency_forward)
    self.efficiency_return = float(efficiency_return)
    self.slack = float(slack)           # mm
    self.compliance = float(compliance) # mm/N

    for e in (self.efficiency_forward, self.efficiency_return):
      if not 0.0 < e <= 1.0:
        raise SpecError(_('Bowden efficiency must be in (0, 1]: {}').format(e))
    if self.slack < 0 or self.compliance < 0:
      raise SpecError(_('Bowden slack and compliance must be nonnegative'))

  @classmethod
  def from_capstan(cls, mu, wrap_angle, slack=0.0, compliance=0.0):
    '''Stage whose efficiency follows the capstan law exp(-mu*phi)'''
    if mu < 0 or wrap_angle < 0:
      raise SpecError(_('Capstan friction and wrap angle must be nonnegative'))
    eff = math.exp(-mu * wrap_angle)
    return cls(eff, eff, slack, compliance)

  def efficiency(self, direction):
    if direction == 'forward':
      return self.efficiency_forward
    elif direction == 'return':
      return self.efficiency_return
    raise SpecError(_('Unknown Bowden direction: {}').format(direction))


def distribute_tension(tree, input_tension, blocked=None):
  '''Per-output tendon tensions (N)

  Tension split is static so blocked outputs still carry their share.
  '''
  if input_tension < 0:
    raise SpecError(_('Tendon tension cannot be negative: {}').format(input_tension))
  if blocked is not None and len(blocked) != tree.outputs:
    raise SpecError(_('Expected {} blocked flags').format(tree.outputs))

  return np.full(tree.outputs, input_tension * tree.share)


def distribute_displacement(tree, input_disp, output_resistances):
  '''Per-output displacements (mm) for an input tendon displacement

  All outputs carry the same tension t. Each output moves t/k_i and the input
  moves the mean output displacement times the tree reduction.

  Args:
    tree (PulleyTree): Tree topology
    input_disp (float): Input tendon displacement (mm)
    output_resistances (sequence): Linear resistance of each output (N/mm).
                                   inf marks a rigidly blocked output.
  Returns:
    numpy array of output displacements
  '''
  k = np.asarray(output_resistances, dtype=float)
  if k.shape != (tree.outputs,):
    raise SpecError(_('Expected {} output resistances').format(tree.outputs))
  if np.any(k < 0) or np.any(np.isnan(k)):
    raise SpecError(_('Output resistances must be nonnegative'))

  mean_disp = input_disp / tree.reduction
  if input_disp == 0.0:
    return np.zeros(tree.outputs)

  free = k == 0.0
  if np.all(free):
    raise SingularSystemError(_('All outputs are unresisted; displacement split is undetermined'))

  if np.any(free):
    # Unresisted outputs take the whole motion at zero tension
    disp = np.zeros(tree.outputs)
    disp[free] = tree.outputs * mean_disp / np.count_nonzero(free)
    return disp

  compliance = np.where(np.isinf(k), 0.0, 1.0 / np.where(np.isinf(k), 1.0, k))
  mean_compliance = np.mean(compliance)
  if mean_compliance == 0.0:
    raise SingularSystemError(_('All outputs are blocked; input cannot move'))

  tension = mean_disp / mean_compliance
  return tension * compliance


BowdenTransfer = collections.namedtuple('BowdenTransfer', 'disp tension in_slack')

def bowden_transfer(stage, input_disp, input_tension, direction='forward'):
  '''Displacement and tension at the far end of a Bowden stage

  Returns:
    BowdenTransfer(disp, tension, in_slack)
  '''
  if input_tension < 0:
    raise SpecError(_('Tendon tension cannot be negative: {}').format(input_tension))

  tension = input_tension * stage.efficiency(direction)
  in_slack = input_disp < stage.slack
  disp = max(0.0, input_disp - stage.slack) - input_tension * stage.compliance
  return BowdenTransfer(disp, tension, in_slack)


HandTendonState = collections.namedtuple('HandTendonState', \
  'finger_excursion flexion_tension extension_tension cocontraction_stretch length_residual')

def antagonistic_routing(flexion_disp, extension_disp, tensions, delta_x_max=None, mode='antagonistic', \
                         finger_excursion=None):
  '''Map the two VSA tendon sides onto the hand flexion/extension channels

  Each side is an inextensible run from the VSA to the fingers with the
  co-contraction spring in series: flexion take-up = finger excursion +
  stretch and extension take-up = stretch - finger excursion. The length
  residual is the loop closure of both runs against the finger excursion.

  Args:
    flexion_disp (float): Take-up of the flexion side (mm)
    extension_disp (float): Take-up of the extension side (mm)
    tensions (tuple): (flexion, extension) tensions (N)
    delta_x_max (float): Spring travel limit for co-contraction, optional
    mode (str): 'antagonistic' or 'unidirectional'. In unidirectional mode
                only the flexion tendon is driven and the joint springs open
                the fingers.
    finger_excursion (float): Excursion measured at the fingers (mm). Defaults
                              to the one the routing implies.
  Returns:
    HandTendonState
  '''
  t_flex, t_ext = tensions
  if t_flex < 0 or t_ext < 0:
    raise SpecError(_('Tendon tensions cannot be negative'))

  if mode == 'unidirectional':
    x = flexion_disp if finger_excursion is None else finger_excursion
    return HandTendonState(flexion_disp, t_flex, 0.0, 0.0, flexion_disp - x)
  elif mode != 'antagonistic':
    raise SpecError(_('Unknown routing mode: {}').format(mode))

  # Both sides paying out leaves the loop slack
  if flexion_disp + extension_disp < -1e-12:
    raise SlackTendonError(_('Flexion and extension sides both pay out ({:.6g} mm, {:.6g} mm)').format( \
      flexion_disp, extension_disp))

  excursion = 0.5 * (flexion_disp - extension_disp)
  stretch = max(0.5 * (flexion_disp + extension_disp), 0.0)

  if delta_x_max is not None and stretch > delta_x_max * (1.0 + 1e-12):
    raise CoContractionLimitError(_('Co-contraction stretch {:.6g} mm exceeds {} mm').format( \
      stretch, delta_x_max))

  x = excursion if finger_excursion is None else finger_excursion
  flexion_run = flexion_disp - x - stretch
  extension_run = extension_disp + x - stretch
  residual = flexion_run if abs(flexion_run) >= abs(extension_run) else extension_run
  return HandTendonState(excursion, t_flex, t_ext, stretch, residual)
