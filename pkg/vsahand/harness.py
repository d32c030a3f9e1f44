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


'''Experiment harness

The Harness runs each command against a SimConfig, writes its CSV and log
files into the output directory and reports a summary on the console.
Every command returns True on success. Physics and validation failures
return False or raise FatalError subclasses.
'''

from __future__ import print_function

import collections
import math
import os
import re
import sys

import numpy as np
from scipy import stats

from .common import *
from .color import *
from . import cam
from . import control
from . import finger as fg
from . import hand
from . import report
from . import shapes
from . import transmission as tx
from . import vsa as vsa_model
from .config import SimConfig


TRACK_SCENARIOS = ('position', 'stiffness', 'stepped', 'custom')
CHARACTERIZE_MODES = ('stiffness', 'position')

CHARACTERIZE_CSV_HEADER = ['trial', 'level', 'slope_N_mm', 'r_value', 'target_N_mm', 'rel_error']
ENERGY_CSV_HEADER = ['scenario', 'stiffness', 'energy_mWh', 'published_mWh']
VERIFY_CSV_HEADER = ['check', 'cases', 'max_residual', 'tolerance', 'passed']


_ANSI_CODE = re.compile(r'\x1b\[[0-9;]*m')

VerifyResult = collections.namedtuple('VerifyResult', 'check cases max_residual tolerance passed')


class Harness(object):
  '''Runs the toolkit commands'''

  def __init__(self, config=None):
    # Force creation of config object
    self.config = SimConfig(config)
    self.log = []

  def _print(self, *args, **keys):
    '''Print message to console'''

    if not self.config.quiet:
      flush = False
      if 'flush' in keys:
        flush = keys['flush']
        del keys['flush']

      print(*args, **keys)
      if flush:
        sys.stdout.flush()

  def _report(self, *lines):
    '''Add lines to the command log and echo them'''
    for l in lines:
      self.log.append(l)
      self._print(l)

  def _out(self, fname):
    return report.build_path(self.config.output_dir, fname)

  def _begin(self, title):
    self.log = []
    report.create_output_dir(self.config.output_dir)
    self._report(report.underline(title, '='))

  def _finish(self, log_name):
    fname = self._out(log_name)
    report.write_text(fname, [_ANSI_CODE.sub('', l) for l in self.log])
    self._print(_('  Wrote: {}').format(fname))

  def _reference(self):
    return report.read_reference()

  ## synth-cam

  def cmd_synth_cam(self):
    '''Synthesize and validate the cam profile'''
    cfg = self.config
    self._begin(_('Cam synthesis'))

    targets = cfg.stiffness_targets()
    profile = cam.synthesize_profile(targets, cfg.cam_samples)
    checks = cam.validate_profile(profile, cfg.wv_tolerance, cfg.cam_band)

    rows = [(k, v) for k, v in profile.metadata().items()]
    self._report(*report.format_table(rows, [_('Parameter'), _('Value')], indent=2))
    self._report('')
    self._report(*checks.format())

    profile.write_csv_file(self._out('cam_profile.csv'))
    profile.write_metadata_file(self._out('cam_profile.meta'))
    if cfg.svg:
      report.plot_profile_svg(profile, self._out('cam_profile.svg'))

    self._report('', _('Cam profile: {}').format(verdict(checks.passed)))
    self._finish('synth_cam.log')
    return checks.passed

  ## track

  def tracking_scenario(self, name):
    '''Build a named tracking scenario from the [track] settings'''
    cfg = self.config
    if name == 'position':
      phases = list(zip([math.radians(a) for a in cfg.position_amplitudes], cfg.position_durations))
      return control.position_sinusoid_scenario(cfg.level(cfg.position_level), phases, cfg.position_frequency)
    elif name == 'stiffness':
      return control.stiffness_sinusoid_scenario(cfg.level('intermediate'), cfg.level('high'), \
        cfg.stiffness_frequency, cfg.stiffness_duration)
    elif name == 'stepped':
      return control.stepped_position_scenario(cfg.level('intermediate'), cfg.level('high'), \
        cfg.stiffness_frequency, math.radians(cfg.stepped_step), cfg.stepped_step_time, \
        math.radians(cfg.stepped_max), cfg.stepped_duration)
    elif name == 'custom':
      theta = control.ReferenceTrajectory('sinusoid', 'theta', math.radians(cfg.custom_amplitude), \
        cfg.custom_frequency)
      s = control.ReferenceTrajectory.constant(cfg.level(cfg.custom_level), 'stiffness')
      return control.Scenario('custom', theta, s, None, cfg.custom_duration)
    raise ConfigError(_('Unknown tracking scenario: {}').format(name))

  def cmd_track(self, scenario):
    '''Run a tracking scenario and report RMS errors'''
    cfg = self.config
    sc = self.tracking_scenario(scenario)
    self._begin(_('Tracking scenario {}').format(scenario))

    motor = cfg.motor_model()
    electrical = cfg.electrical_model()
    trace = control.run_scenario(motor, cfg.controller_config(), cfg.vsa_params(), sc, electrical)
    metrics = control.tracking_metrics(trace)

    control.write_trace_csv(trace, self._out('track_{}.csv'.format(scenario)))
    if cfg.svg:
      report.plot_trace_svg(trace, self._out('track_{}.svg'.format(scenario)), scenario)

    rows = [(k, '{:.6g}'.format(v)) for k, v in metrics.items()]
    rows.append(('energy_mWh', '{:.6g}'.format(control.energy_estimate(trace, motor, electrical))))
    self._report(_('  {} samples over {} s').format(len(trace), sc.duration), '')
    self._report(*report.format_table(rows, [_('Metric'), _('Value')], indent=2))

    ok = metrics['rms_error_motor_pct'] < 1.0
    self._report('', _('Motor RMS error below 1%: {}').format(verdict(ok)))
    self._finish('track_{}.log'.format(scenario))
    return ok

  ## characterize

  def fingertip_fit(self, spec, stiffness, posture, rng):
    '''Simulated force ramp against the fingertip and its linear fit

    Returns:
      (slope N/mm, r value) for the whole hand
    '''
    cfg = self.config
    params = cfg.vsa_params()
    tree = cfg.pulley_tree()
    alpha, beta = vsa_model.inverse(params, 0.0, stiffness)
    state = vsa_model.forward(params, alpha, beta)

    k_tip = fg.fingertip_stiffness(spec, state, posture, share=tree.share)
    # The probe spans every finger
    k_hand = tree.outputs * k_tip

    forces = np.linspace(0.0, cfg.force_max, cfg.force_steps + 1)
    disp = forces / k_hand
    if cfg.force_noise > 0:
      forces = forces + rng.normal(0.0, cfg.force_noise, len(forces))
    fit = stats.linregress(disp, forces)
    return fit.slope, fit.rvalue

  def cmd_characterize(self, mode):
    '''Fingertip stiffness at the stiffness levels or at MCP postures'''
    cfg = self.config
    if mode not in CHARACTERIZE_MODES:
      raise ConfigError(_('Unknown characterization mode: {}').format(mode))
    self._begin(_('Characterization: {}').format(mode))

    ref = self._reference()
    spec = cfg.finger_spec()
    rng = np.random.default_rng(cfg.seed)

    if mode == 'stiffness':
      cases = [(name, s, (0.0, 0.0, 0.0), ref['stiffness_' + name].value) for name, s in cfg.levels().items()]
    else:
      s = cfg.level('intermediate')
      cases = []
      for deg in cfg.positions:
        key = 'position_{:g}deg'.format(deg)
        target = ref[key].value if key in ref else float('nan')
        cases.append(('mcp_{:g}deg'.format(deg), s, (math.radians(deg), 0.0, 0.0), target))

    csv_rows = []
    ok = True
    slopes = collections.OrderedDict((c[0], []) for c in cases)
    for trial in range(1, cfg.trials + 1):
      trial_slopes = []
      for name, s, posture, target in cases:
        slope, r = self.fingertip_fit(spec, s, posture, rng)
        rel = (slope - target) / target
        csv_rows.append([trial, name, '{:.9g}'.format(slope), '{:.9g}'.format(r), '{:g}'.format(target), \
          '{:.6g}'.format(rel)])
        slopes[name].append(slope)
        trial_slopes.append(slope)
        if r < cfg.min_r_value:
          ok = False
          self._report(warn(_('  Trial {} {}: fit failed, R = {:.4f}').format(trial, name, r)))

      if mode == 'stiffness' and not all(a < b for a, b in zip(trial_slopes[:-1], trial_slopes[1:])):
        ok = False
        self._report(warn(_('  Trial {}: slopes do not increase with stiffness').format(trial)))

    report.write_csv(self._out('characterize_{}.csv'.format(mode)), CHARACTERIZE_CSV_HEADER, csv_rows)

    rows = []
    for name, s, posture, target in cases:
      mean = float(np.mean(slopes[name]))
      rows.append((name, '{:g}'.format(s), '{:.4f}'.format(mean), '{:g}'.format(target), \
        '{:+.1%}'.format((mean - target) / target)))
    self._report(*report.format_table(rows, [_('Case'), 'S (N*mm/rad)', _('Slope (N/mm)'), _('Target'), \
      _('Error')], indent=2))

    if mode == 'position':
      means = [float(np.mean(v)) for v in slopes.values()]
      spread = (max(means) - min(means)) / min(means)
      self._report('', _('  Spread across postures: {:.2%}').format(spread))
      ok = ok and spread < 0.10

    self._report('', _('  Closing time at {:g} mm/s: {:.3f} s').format(cfg.tendon_speed, \
      fg.closing_time(spec, cfg.tendon_speed)))
    th_rows = [(fg.JOINT_NAMES[i], '{:.2f}'.format(a), '{:.2f}'.format(b)) \
      for i, (a, b) in enumerate(fg.activation_thresholds(spec))]
    self._report('', *report.format_table(th_rows, [_('Joint'), _('Start (N)'), _('Limit (N)')], indent=2))

    self._report('', _('Characterization: {}').format(verdict(ok)))
    self._finish('characterize_{}.log'.format(mode))
    return ok

  ## grasp

  def load_objects(self, suite=None):
    cfg = self.config
    fname = suite or cfg.suite or data_path('objects.suite')
    return shapes.read_suite(fname, cfg.support_y)

  def cmd_grasp(self, suite=None):
    '''Grasp every suite object at every configured stiffness level'''
    cfg = self.config
    objects = self.load_objects(suite)
    self._begin(_('Grasp sweep'))

    hand_spec = cfg.hand_spec()
    motor = cfg.motor_model()
    electrical = cfg.electrical_model()

    def energy(result, s):
      return control.holding_energy(hand_spec.vsa, motor, electrical, s, result.tendon_tension, \
        cfg.grasp_hold_time)

    results = []
    rows = hand.grasp_sweep(hand_spec, objects, cfg.grasp_settings(), cfg.tendon_command(), energy, \
      cfg.sweep_steps, results)
    hand.write_grasp_csv(rows, self._out('grasp.csv'))

    table = []
    for row, (obj, name, res) in zip(rows, results):
      if res is None:
        self._report(error(_('  {} at {}: {}').format(obj.name, name, row.error)))
        table.append((obj.name, name, 'error', '', '', '', ''))
        continue
      table.append((obj.name, name, res.grasp_type, verdict(res.success), res.n_contacts, \
        '{:.1f}'.format(res.tendon_tension), '{:.2f}'.format(res.lift_capacity)))
      if cfg.svg:
        report.plot_grasp_svg(hand_spec, res, self._out('grasp_{}_{}.svg'.format(obj.name, name)))

    self._report(*report.format_table(table, [_('Object'), _('Level'), _('Type'), _('Success'), \
      _('Contacts'), _('Tension (N)'), _('Lift (kg)')], indent=2))

    ok = all(r.error is None for r in rows)
    self._report('', _('  {} trials, {} successful').format(len(rows), sum(1 for r in rows if r.success)))
    self._finish('grasp.log')
    return ok

  ## energy

  def energy_scenarios(self):
    '''Stiffness modulation followed by the grasp x stiffness scenarios'''
    cfg = self.config
    lo, hi = cfg.level('low'), cfg.level('high')
    timing = dict(ramp_time=cfg.energy_ramp_time, close_time=cfg.energy_close_time, \
      hold_time=cfg.energy_hold_time, release_time=cfg.energy_release_time)

    scenarios = [('modulation', 'low->high', control.modulation_scenario(lo, hi, cfg.energy_ramp_time))]
    for grasp, contact in (('power', cfg.power_contact), ('pinch', cfg.pinch_contact)):
      for level in ('low', 'high'):
        name = '{}_{}'.format(grasp, level)
        sc = control.grasp_energy_scenario(name, lo, cfg.level(level), cfg.energy_theta_cmd, contact, **timing)
        scenarios.append((name, level, sc))
    return scenarios

  def cmd_energy(self):
    '''Energy per scenario with the published values alongside'''
    cfg = self.config
    self._begin(_('Energy requirements'))

    ref = self._reference()
    motor = cfg.motor_model()
    ctrl = cfg.controller_config()
    params = cfg.vsa_params()
    electrical = cfg.electrical_model()

    energies = collections.OrderedDict()
    csv_rows = []
    table = []
    for name, level, sc in self.energy_scenarios():
      self._print(_('  Running {}...').format(name), flush=True)
      trace = control.run_scenario(motor, ctrl, params, sc, electrical)
      e = control.energy_estimate(trace, motor, electrical)
      energies[name] = e
      published = ref['energy_' + name].value
      csv_rows.append([name, level, '{:.6f}'.format(e), '{:g}'.format(published)])
      table.append((name, level, '{:.3f}'.format(e), '{:g}'.format(published)))

    report.write_csv(self._out('energy.csv'), ENERGY_CSV_HEADER, csv_rows)
    self._report(*report.format_table(table, [_('Scenario'), _('Stiffness'), _('Energy (mWh)'), \
      _('Published (mWh)')], indent=2))

    checks = [
      (_('power > pinch at low stiffness'), energies['power_low'] > energies['pinch_low']),
      (_('power > pinch at high stiffness'), energies['power_high'] > energies['pinch_high']),
      (_('high > low for power grasps'), energies['power_high'] > energies['power_low']),
      (_('high > low for pinch grasps'), energies['pinch_high'] > energies['pinch_low']),
      (_('modulation is the smallest'), all(energies['modulation'] < v for k, v in energies.items() \
        if k != 'modulation')),
    ]

    # Battery arithmetic on the published high stiffness power grasp
    count = control.battery_grasp_count(ref['energy_power_high'].value, electrical.capacity_mAh, \
      electrical.supply_voltage)
    target = ref['battery_grasps'].value
    checks.append((_('battery count within 15% of {:g}').format(target), abs(count - target) / target <= 0.15))

    self._report('', _('  Battery: {:g} mAh at {:g} V gives {:.1f} grasps of {:g} mWh').format( \
      electrical.capacity_mAh, electrical.supply_voltage, count, ref['energy_power_high'].value))
    if energies['power_high'] > 0:
      sim_count = control.battery_grasp_count(energies['power_high'], electrical.capacity_mAh, \
        electrical.supply_voltage)
      self._report(_('  Simulated high stiffness power grasp: {:.1f} grasps per charge').format(sim_count))

    self._report('')
    for desc, passed in checks:
      self._report('  {:40} {}'.format(desc, verdict(passed)))

    ok = all(p for _d, p in checks)
    self._finish('energy.log')
    return ok

  ## verify

  def _verify_cam(self):
    cfg = self.config
    profile = cam.synthesize_profile(cfg.stiffness_targets(), cfg.cam_samples)
    vw = cam.validate_profile(profile, cfg.wv_tolerance, cfg.cam_band)['virtual_work']
    return VerifyResult('cam_virtual_work', len(profile), vw.max_residual, vw.tolerance, vw.passed)

  def _closed_form_params(self, params):
    '''Parameters for the closed-form maps, optionally perturbed for fault injection'''
    p = self.config.perturbation
    if p == 0.0:
      return params
    a, b, c = params.coefficients
    return vsa_model.VsaParameters((a * (1.0 + p), b, c), params.r_j, params.r_m, params.spring_k, \
      params.delta_x_max, params.alpha_limits, params.beta_limits)

  def _verify_oracle(self, rng):
    cfg = self.config
    params = cfg.vsa_params()
    closed = self._closed_form_params(params)
    sigma_max = 2.0 * params.delta_x_max / params.r_m

    th_err = 0.0
    s_err = 0.0
    cases = 0
    attempts = 0
    while cases < cfg.verify_cases and attempts < 20 * cfg.verify_cases:
      attempts += 1
      sigma = rng.uniform(0.0, sigma_max)
      delta = rng.uniform(-sigma, sigma)
      tau = rng.uniform(-100.0, 100.0)
      alpha, beta = 0.5 * (sigma + delta), 0.5 * (sigma - delta)
      if not vsa_model.is_admissible(params, alpha, beta, tau):
        continue
      try:
        th_o, s_o = vsa_model.equilibrium_oracle(params, alpha, beta, tau)
      except PhysicsError:
        continue
      st = vsa_model.forward(closed, alpha, beta, tau, strict=False)
      th_err = max(th_err, abs(st.theta - th_o))
      s_err = max(s_err, abs(st.stiffness - s_o) / s_o)
      cases += 1

    return [
      VerifyResult('closed_form_theta', cases, th_err, cfg.theta_tolerance, th_err < cfg.theta_tolerance),
      VerifyResult('closed_form_stiffness', cases, s_err, cfg.stiffness_tolerance, \
        s_err < cfg.stiffness_tolerance),
    ]

  def _verify_roundtrip(self):
    cfg = self.config
    params = cfg.vsa_params()
    s_lo, s_hi = vsa_model.stiffness_range(params)
    worst = 0.0
    cases = 0
    for th in np.linspace(-math.pi/2, math.pi/2, cfg.grid_points):
      for s in np.linspace(s_lo, s_hi, cfg.grid_points):
        try:
          alpha, beta = vsa_model.inverse(params, th, s)
        except PhysicsError:
          continue
        st = vsa_model.forward(params, alpha, beta)
        worst = max(worst, abs(st.theta - th), abs(st.stiffness - s) / s)
        cases += 1
    return VerifyResult('inverse_forward_roundtrip', cases, worst, cfg.roundtrip_tolerance, \
      cases > 0 and worst < cfg.roundtrip_tolerance)

  def _verify_transmission(self, rng):
    cfg = self.config
    tree = cfg.pulley_tree()
    # Fault injection skews the reduction the finger excursions are read back with
    reduction = tree.reduction * (1.0 + cfg.perturbation)
    worst = 0.0
    n = 200
    for _i in range(n):
      t = rng.uniform(0.0, cfg.max_tendon_force)
      split = tx.distribute_tension(tree, t)
      worst = max(worst, abs(split.sum() - t * tree.efficiency ** tree.depth))

      u = rng.uniform(0.1, 20.0)
      k = rng.uniform(0.1, 10.0, tree.outputs)
      disp = tx.distribute_displacement(tree, u, k)
      worst = max(worst, abs(tree.reduction * disp.mean() - u))

      flex = rng.uniform(0.0, 10.0)
      ext = rng.uniform(-flex, 10.0)
      st = tx.antagonistic_routing(flex, ext, (t, t), mode=cfg.routing)
      fingers = tx.distribute_displacement(tree, st.finger_excursion, k)
      measured = tx.antagonistic_routing(flex, ext, (t, t), mode=cfg.routing, \
        finger_excursion=reduction * fingers.mean())
      worst = max(worst, abs(measured.length_residual))
    return VerifyResult('transmission_conservation', n, worst, 1e-9, worst < 1e-9)

  def _verify_finger(self):
    cfg = self.config
    spec = cfg.finger_spec()
    t_end = 1.1 * fg.activation_thresholds(spec)[-1][1]
    states, events = fg.closing_trajectory(spec, np.linspace(0.0, t_end, 2001))
    balance = fg.work_balance(spec, states)

    expected = ['MCP_start', 'MCP_limit', 'PIP_start', 'PIP_limit', 'DIP_start', 'DIP_limit']
    labels = [e.label for e in events]
    mismatch = sum(1 for a, b in zip(labels, expected) if a != b) + abs(len(labels) - len(expected))
    if cfg.verbose:
      self._print(_('  Closing events: {}').format(', '.join(labels)))
    return [
      VerifyResult('finger_sequence', len(labels), float(mismatch), 0.0, mismatch == 0),
      VerifyResult('finger_work_balance', len(states), balance.residual, cfg.work_tolerance, \
        balance.residual < cfg.work_tolerance),
    ]

  def _verify_equal_tension(self):
    cfg = self.config
    hand_spec = cfg.hand_spec()
    # Object far out of reach so the fingers close in free space
    obj = shapes.ObjectShape('circle', (1000.0, 0.0, 0.0), {'radius': 10.0}).resting_on(cfg.support_y)
    res = hand.simulate_grasp(hand_spec, obj, hand.TendonCommand('tension', cfg.max_tendon_force), \
      steps=20)
    spread = float(np.ptp(res.finger_tensions))
    return VerifyResult('equal_tension', len(res.finger_tensions), spread, 1e-9, spread <= 1e-9)

  def verify_campaign(self):
    '''Run every verification check with the configured seed'''
    rng = np.random.default_rng(self.config.seed)
    results = [self._verify_cam()]
    results.extend(self._verify_oracle(rng))
    results.append(self._verify_roundtrip())
    results.append(self._verify_transmission(rng))
    results.extend(self._verify_finger())
    results.append(self._verify_equal_tension())
    return results

  def cmd_verify(self):
    '''Oracle equivalence and invariant campaigns'''
    self._begin(_('Verification (seed {})').format(self.config.seed))
    results = self.verify_campaign()

    report.write_csv(self._out('verify.csv'), VERIFY_CSV_HEADER, [[r.check, r.cases, \
      '{:.6e}'.format(r.max_residual), '{:g}'.format(r.tolerance), int(r.passed)] for r in results])

    rows = [(r.check, r.cases, '{:.3e}'.format(r.max_residual), '{:g}'.format(r.tolerance), \
      verdict(r.passed)) for r in results]
    self._report(*report.format_table(rows, [_('Check'), _('Cases'), _('Max residual'), _('Tolerance'), \
      _('Result')], indent=2))

    ok = all(r.passed for r in results)
    self._report('', _('Verification: {}').format(verdict(ok)))
    self._finish('verify.log')
    return ok
