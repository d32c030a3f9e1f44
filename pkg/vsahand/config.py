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


'''Simulation settings and INI file loading'''

from __future__ import print_function

import collections
import io
import math
import os

import configparser

from .common import *
from . import cam
from . import control
from . import finger as fg
from . import hand
from . import transmission as tx
from . import vsa as vsa_model


CONFIG_ENV_VAR = 'VSAHAND_CONFIG'


def _float_list(text):
  return [float(v) for v in str(text).replace(',', ' ').split()]

def _bool(text):
  if isinstance(text, bool):
    return text
  v = str(text).strip().lower()
  if v in ('1', 'yes', 'true', 'on'):
    return True
  if v in ('0', 'no', 'false', 'off'):
    return False
  raise ValueError('not a boolean: {}'.format(text))


# section -> [(key, attribute, type, default)]
SETTINGS = collections.OrderedDict([
  ('vsa', [
    ('s_min_Nmm_rad', 's_min', float, 135.0),
    ('s_max_Nmm_rad', 's_max', float, 545.0),
    ('r_j_mm', 'r_j', float, 10.0),
    ('r_m_mm', 'r_m', float, 10.0),
    ('delta_x_max_mm', 'delta_x_max', float, 20.0),
    ('k_N_mm', 'spring_k', float, 2.0),
    ('motor_limit_rad', 'motor_limit', float, 2.0 * math.pi),
  ]),
  ('cam', [
    ('samples', 'cam_samples', int, 256),
    ('virtual_work_tolerance', 'wv_tolerance', float, 0.005),
    ('boundary_band', 'cam_band', float, 0.01),
  ]),
  ('transmission', [
    ('tree_depth', 'tree_depth', int, 2),
    ('pulley_radius_mm', 'pulley_radius', float, 10.0),
    ('pulley_efficiency', 'pulley_efficiency', float, 1.0),
    ('reduction', 'reduction', float, 1.0),
    ('friction_model', 'friction_model', str, 'constant'),
    ('bowden_efficiency', 'bowden_efficiency', float, 0.9),
    ('bowden_mu', 'bowden_mu', float, 0.1),
    ('bowden_wrap_rad', 'bowden_wrap', float, math.pi),
    ('bowden_slack_mm', 'bowden_slack', float, 0.0),
    ('bowden_compliance_mm_N', 'bowden_compliance', float, 0.0),
    ('routing', 'routing', str, 'antagonistic'),
  ]),
  ('finger', [
    ('mcp_stiffness_Nmm_rad', 'mcp_stiffness', float, 200.0),
    ('pip_stiffness_Nmm_rad', 'pip_stiffness', float, 260.0),
    ('dip_stiffness_Nmm_rad', 'dip_stiffness', float, 320.0),
    ('mcp_preload_Nmm', 'mcp_preload', float, 20.0),
    ('pip_preload_Nmm', 'pip_preload', float, 288.0),
    ('dip_preload_Nmm', 'dip_preload', float, 540.0),
    ('mcp_limit_deg', 'mcp_limit', float, 90.0),
    ('pip_limit_deg', 'pip_limit', float, 90.0),
    ('dip_limit_deg', 'dip_limit', float, 70.0),
    ('mcp_flexion_arm_mm', 'mcp_arm', float, 10.0),
    ('pip_flexion_arm_mm', 'pip_arm', float, 8.0),
    ('dip_flexion_arm_mm', 'dip_arm', float, 6.0),
    ('mcp_extension_arm_mm', 'mcp_ext_arm', float, 5.0),
    ('pip_extension_arm_mm', 'pip_ext_arm', float, 4.0),
    ('dip_extension_arm_mm', 'dip_ext_arm', float, 3.0),
    ('mcp_stiffening_mm', 'mcp_stiffening', float, 400.0),
    ('pip_stiffening_mm', 'pip_stiffening', float, 520.0),
    ('dip_stiffening_mm', 'dip_stiffening', float, 640.0),
    ('proximal_mm', 'proximal_length', float, 45.0),
    ('middle_mm', 'middle_length', float, 25.0),
    ('distal_mm', 'distal_length', float, 20.0),
    ('pad_mu', 'pad_mu', float, 0.8),
    ('stiffness_scale', 'stiffness_scale', float, 1.0),
    ('stiffening_scale', 'stiffening_scale', float, 1.0),
  ]),
  ('hand', [
    ('base_offsets_mm', 'base_offsets', _float_list, [0.0, 2.0, 1.0, -3.0]),
    ('support_x0_mm', 'support_x0', float, 0.0),
    ('support_x1_mm', 'support_x1', float, 100.0),
    ('support_y_mm', 'support_y', float, 60.0),
    ('support_mu', 'support_mu', float, 0.8),
    ('max_tendon_force_N', 'max_tendon_force', float, 160.0),
    ('command_mode', 'command_mode', str, 'tension'),
    ('command_value', 'command_value', float, 160.0),
    ('sweep_steps', 'sweep_steps', int, 200),
    ('grasp_levels', 'grasp_levels', str, 'low high'),
    ('hold_time_s', 'grasp_hold_time', float, 30.0),
  ]),
  ('levels', [
    ('low_Nmm_rad', 'level_low', float, 135.0),
    ('intermediate_Nmm_rad', 'level_intermediate', float, 170.0),
    ('high_Nmm_rad', 'level_high', float, 545.0),
  ]),
  ('motor', [
    ('gear_ratio', 'gear_ratio', float, 100.0),
    ('max_speed_rad_s', 'max_speed', float, 2.0),
    ('max_torque_Nmm', 'max_torque', float, 3000.0),
    ('viscous_friction_Nmm_s_rad', 'viscous_friction', float, 50.0),
    ('rotor_inertia_kg_mm2', 'rotor_inertia', float, 0.1),
  ]),
  ('controller', [
    ('rate_Hz', 'rate', float, 500.0),
    ('kp_Nmm_rad', 'kp', float, 20000.0),
    ('ki_Nmm_rad_s', 'ki', float, 50000.0),
    ('kd_Nmm_s_rad', 'kd', float, 400.0),
    ('integral_limit_rad_s', 'integral_limit', float, 1.0),
  ]),
  ('electrical', [
    ('torque_constant_Nmm_A', 'torque_constant', float, 5.0),
    ('resistance_ohm', 'resistance', float, 12.0),
    ('supply_voltage_V', 'supply_voltage', float, 6.4),
    ('capacity_mAh', 'capacity', float, 1500.0),
  ]),
  ('track', [
    ('position_level', 'position_level', str, 'intermediate'),
    ('position_frequency_Hz', 'position_frequency', float, 0.125),
    ('position_amplitudes_deg', 'position_amplitudes', _float_list, [90.0, 10.0]),
    ('position_durations_s', 'position_durations', _float_list, [16.0, 8.0]),
    ('stiffness_frequency_Hz', 'stiffness_frequency', float, 0.1),
    ('stiffness_duration_s', 'stiffness_duration', float, 16.0),
    ('stepped_step_deg', 'stepped_step', float, 5.0),
    ('stepped_step_time_s', 'stepped_step_time', float, 5.0),
    ('stepped_max_deg', 'stepped_max', float, 25.0),
    ('stepped_duration_s', 'stepped_duration', float, 30.0),
    ('custom_level', 'custom_level', str, 'intermediate'),
    ('custom_amplitude_deg', 'custom_amplitude', float, 30.0),
    ('custom_frequency_Hz', 'custom_frequency', float, 0.25),
    ('custom_duration_s', 'custom_duration', float, 8.0),
  ]),
  ('energy', [
    ('ramp_time_s', 'energy_ramp_time', float, 2.0),
    ('close_time_s', 'energy_close_time', float, 2.0),
    ('hold_time_s', 'energy_hold_time', float, 30.0),
    ('release_time_s', 'energy_release_time', float, 2.0),
    ('theta_cmd_rad', 'energy_theta_cmd', float, 1.5),
    ('power_contact_rad', 'power_contact', float, 0.4),
    ('pinch_contact_rad', 'pinch_contact', float, 0.6),
  ]),
  ('characterize', [
    ('trials', 'trials', int, 10),
    ('force_max_N', 'force_max', float, 2.0),
    ('force_steps', 'force_steps', int, 20),
    ('noise_N', 'force_noise', float, 0.0),
    ('positions_deg', 'positions', _float_list, [0.0, 30.0, 60.0]),
    ('tendon_speed_mm_s', 'tendon_speed', float, 20.0),
    ('min_r_value', 'min_r_value', float, 0.9),
  ]),
  ('verify', [
    ('cases', 'verify_cases', int, 1000),
    ('theta_tolerance_rad', 'theta_tolerance', float, 1e-9),
    ('stiffness_rel_tolerance', 'stiffness_tolerance', float, 1e-3),
    ('roundtrip_tolerance', 'roundtrip_tolerance', float, 1e-9),
    ('work_tolerance', 'work_tolerance', float, 0.005),
    ('grid_points', 'grid_points', int, 25),
    ('coefficient_perturbation', 'perturbation', float, 0.0),
  ]),
  ('run', [
    ('output_dir', 'output_dir', str, '.'),
    ('seed', 'seed', int, 0),
    ('svg', 'svg', _bool, False),
    ('suite', 'suite', str, ''),
    ('quiet', 'quiet', _bool, False),
    ('verbose', 'verbose', _bool, False),
  ]),
])


LEVEL_NAMES = ('low', 'intermediate', 'high')


class SimConfig(object):
  '''Configuration settings for the Harness class'''
  def __init__(self, config=None):
    # Set defaults
    for section, keys in SETTINGS.items():
      for _key, attr, _conv, default in keys:
        setattr(self, attr, list(default) if isinstance(default, list) else default)

    if config is not None:
      self.apply_config(config)

  def apply_config(self, config):
    '''Copy settings from another SimConfig object'''
    for section, keys in SETTINGS.items():
      for _key, attr, _conv, _default in keys:
        v = getattr(config, attr)
        setattr(self, attr, list(v) if isinstance(v, list) else v)

  def load_config(self, fname):
    '''Overlay settings from an INI file

    Unknown sections and keys are rejected.
    '''
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # Keys are case sensitive
    try:
      with io.open(fname, encoding='utf-8') as fh:
        parser.read_file(fh, source=fname)
    except (IOError, OSError) as e:
      raise ConfigError(_('Unable to read config: {}').format(e), fname)
    except configparser.Error as e:
      raise ConfigError(_('Malformed config: {}').format(e), fname, getattr(e, 'lineno', None))

    for section in parser.sections():
      if section not in SETTINGS:
        raise ConfigError(_('Unknown section [{}]').format(section), fname)
      known = dict((k[0], k) for k in SETTINGS[section])
      for key, text in parser.items(section):
        if key not in known:
          raise ConfigError(_('Unknown key "{}" in section [{}]').format(key, section), fname)
        _k, attr, conv, _default = known[key]
        try:
          setattr(self, attr, conv(text))
        except ValueError:
          raise ConfigError(_('Bad value for [{}] {}: "{}"').format(section, key, text), fname)

    return self

  def level(self, name):
    '''Joint stiffness of a named level (N*mm/rad)'''
    if name not in LEVEL_NAMES:
      raise ConfigError(_('Unknown stiffness level: {}').format(name))
    return getattr(self, 'level_' + name)

  def levels(self):
    return collections.OrderedDict((n, self.level(n)) for n in LEVEL_NAMES)

  def grasp_settings(self):
    '''(name, stiffness) pairs for the grasp sweep'''
    return [(n, self.level(n)) for n in self.grasp_levels.split()]

  def stiffness_targets(self):
    return cam.StiffnessTargets(self.s_min, self.s_max, self.r_j, self.delta_x_max, self.spring_k)

  def vsa_params(self):
    lim = (-self.motor_limit, self.motor_limit)
    return vsa_model.VsaParameters.from_targets(self.stiffness_targets(), self.r_m, alpha_limits=lim, \
      beta_limits=lim)

  def pulley_tree(self):
    return tx.PulleyTree(self.tree_depth, [self.pulley_radius] * self.tree_depth, self.pulley_efficiency, \
      self.reduction)

  def bowden_stage(self):
    if self.friction_model == 'constant':
      return tx.BowdenStage(self.bowden_efficiency, self.bowden_efficiency, self.bowden_slack, \
        self.bowden_compliance)
    elif self.friction_model == 'capstan':
      return tx.BowdenStage.from_capstan(self.bowden_mu, self.bowden_wrap, self.bowden_slack, \
        self.bowden_compliance)
    raise ConfigError(_('Unknown friction model: {}').format(self.friction_model))

  def finger_spec(self):
    joints = []
    for name in fg.JOINT_NAMES:
      p = name.lower() + '_'
      g = lambda attr: getattr(self, p + attr)
      joints.append(fg.JointSpec(name, g('stiffness'), g('preload'), math.radians(g('limit')), g('arm'), \
        g('ext_arm'), g('stiffening')))
    spec = fg.FingerSpec(joints, (self.proximal_length, self.middle_length, self.distal_length), self.pad_mu)
    return spec.scaled(self.stiffness_scale, self.stiffening_scale)

  def hand_spec(self):
    if len(self.base_offsets) != 4:
      raise ConfigError(_('base_offsets_mm needs four values'))
    spec = self.finger_spec()
    bases = [(x, 0.0) for x in self.base_offsets]
    return hand.HandSpec([spec] * 4, bases, (self.support_x0, self.support_x1, self.support_y), \
      self.pulley_tree(), self.vsa_params(), self.bowden_stage(), self.max_tendon_force, self.support_mu)

  def tendon_command(self):
    if self.command_mode not in ('tension', 'displacement'):
      raise ConfigError(_('Unknown command mode: {}').format(self.command_mode))
    return hand.TendonCommand(self.command_mode, self.command_value)

  def motor_model(self):
    return control.MotorModel(self.gear_ratio, self.max_speed, self.max_torque, self.viscous_friction, \
      self.rotor_inertia)

  def controller_config(self):
    return control.ControllerConfig(self.rate, self.kp, self.ki, self.kd, self.integral_limit)

  def electrical_model(self):
    return control.ElectricalModel(self.torque_constant, self.resistance, self.supply_voltage, self.capacity)


def default_config_path(path=None):
  '''Config file from the command line, else the environment, else None'''
  if path is not None:
    return path
  return os.environ.get(CONFIG_ENV_VAR) or None


def load_sim_config(path=None):
  '''SimConfig with defaults overlaid by the selected config file'''
  config = SimConfig()
  path = default_config_path(path)
  if path is not None:
    config.load_config(path)
  return config
