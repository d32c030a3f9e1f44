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


'''Public interface of the vsahand toolkit'''

__version__ = '1.0.0'

from .common import *
from .cam import StiffnessTargets, CamProfile, derive_coefficients, synthesize_profile, validate_profile
from .vsa import VsaParameters, ActuatorState, forward, inverse, stiffness_range, equilibrium_oracle
from .transmission import PulleyTree, BowdenStage, distribute_tension, distribute_displacement, \
  bowden_transfer, antagonistic_routing
from .finger import FingerSpec, JointSpec, finger_equilibrium, closing_trajectory, fingertip_stiffness
from .shapes import ObjectShape, read_suite
from .hand import HandSpec, TendonCommand, simulate_grasp, lift_capacity, grasp_sweep
from .control import MotorModel, ControllerConfig, ElectricalModel, ReferenceTrajectory, ContactStop, \
  run_tracking, tracking_metrics, energy_estimate
from .config import SimConfig, load_sim_config
from .harness import Harness
