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


'''Two-motor position control of the VSA

Each tick the joint angle and stiffness references go through the inverse
VSA map to motor angle references. Two independent PID loops drive geared
motors modelled as inertia plus viscous friction with torque and speed
limits, integrated with explicit Euler steps at the control rate. The
joint is quasi-static: its angle and the tendon tensions follow from the
actual motor angles.
'''

import collections
import csv
import io
import math

import numpy as np

from .common import *
from . import vsa as vsa_model


class MotorModel(object):
  '''Geared DC motor referred to the output shaft

  Speeds in rad/s, torques in N*mm, rotor inertia in kg*mm^2 on the motor
  side of the gearbox.
  '''
  def __init__(self, gear_ratio=100.0, max_speed=2.0, max_torque=3000.0, viscous_friction=50.0, \
               rotor_inertia=0.1):
    self.gear_ratio = float(gear_ratio)
    self.max_speed = float(max_speed)
    self.max_torque = float(max_torque)
    self.viscous_friction = float(viscous_friction)
    self.rotor_inertia = float(rotor_inertia)

    for name in ('gear_ratio', 'max_speed', 'max_torque', 'viscous_friction', 'rotor_inertia'):
      if not getattr(self, name) > 0:
        raise SpecError(_('Motor {} must be positive').format(name))

  @property
  def inertia(self):
    '''Reflected inertia at the output shaft (N*mm*s^2)'''
    # kg*mm^2 -> N*mm*s^2 is a factor of 1e-3
    return self.rotor_inertia * self.gear_ratio**2 * 1e-3

  def max_tendon_speed(self, r_m):
    '''Tendon speed at full motor speed (mm/s)'''
    return self.max_speed * r_m


def _pair(v):
  if isinstance(v, (tuple, list)):
    if len(v) != 2:
      raise SpecError(_('Expected one gain per motor: {}').format(v))
    return (float(v[0]), float(v[1]))
  return (float(v), float(v))


class ControllerConfig(object):
  '''PID gains per motor and the control rate'''
  def __init__(self, rate=500.0, kp=20000.0, ki=50000.0, kd=400.0, integral_limit=1.0):
    self.rate = float(rate)
    self.kp = _pair(kp)
    self.ki = _pair(ki)
    self.kd = _pair(kd)
    self.integral_limit = float(integral_limit)  # rad*s

    if not self.rate > 0:
      raise SpecError(_('Control rate must be positive'))
    if min(self.kp + self.ki + self.kd) < 0:
      raise SpecError(_('Controller gains cannot be negative'))
    if not self.integral_limit > 0:
      raise SpecError(_('Integral clamp must be positive'))

  @property
  def dt(self):
    return 1.0 / self.rate


class ElectricalModel(object):
  '''Motor winding and battery constants'''
  def __init__(self, torque_constant=5.0, resistance=12.0, supply_voltage=6.4, capacity_mAh=1500.0):
    self.torque_constant = float(torque_constant)  # N*mm/A at the motor shaft
    self.resistance = float(resistance)            # ohm
    self.supply_voltage = float(supply_voltage)    # V, battery nominal
    self.capacity_mAh = float(capacity_mAh)

    if not (self.torque_constant > 0 and self.resistance >= 0 and self.supply_voltage > 0):
      raise SpecError(_('Invalid electrical constants'))

  def power(self, motor, torque, speed):
    '''Electrical power of one motor (W) from output torque and speed'''
    current = torque / (self.torque_constant * motor.gear_ratio)
    # N*mm*rad/s -> W
    mech = torque * speed * 1e-3
    return current * current * self.resistance + max(mech, 0.0)


REFERENCE_KINDS = ('sinusoid', 'step', 'ramp', 'piecewise')

class ReferenceTrajectory(object):
  '''Time function for one reference channel

  sinusoid:  offset + amplitude * sin(2*pi*frequency*t)
  step:      schedule of (time, value); offset before the first step
  ramp:      schedule of (time, value) linearly interpolated, held at the ends
  piecewise: schedule of (start_time, ReferenceTrajectory), each evaluated
             on its local time
  '''
  def __init__(self, kind, channel='theta', amplitude=0.0, frequency=0.0, offset=0.0, schedule=()):
    if kind not in REFERENCE_KINDS:
      raise SpecError(_('Unknown reference kind: {}').format(kind))
    if channel not in ('theta', 'stiffness'):
      raise SpecError(_('Unknown reference channel: {}').format(channel))

    self.kind = kind
    self.channel = channel
    self.amplitude = float(amplitude)
    self.frequency = float(frequency)
    self.offset = float(offset)
    self.schedule = list(schedule)

    if kind in ('step', 'ramp', 'piecewise'):
      if len(self.schedule) == 0:
        raise SpecError(_('A {} reference needs a schedule').format(kind))
      times = [s[0] for s in self.schedule]
      if any(t1 < t0 for t0, t1 in zip(times[:-1], times[1:])):
        raise SpecError(_('Reference schedule times must not decrease'))

  @classmethod
  def constant(cls, value, channel='theta'):
    return cls('sinusoid', channel, offset=value)

  def value(self, t):
    if self.kind == 'sinusoid':
      return self.offset + self.amplitude * math.sin(2.0 * math.pi * self.frequency * t)

    if self.kind == 'step':
      v = self.offset
      for ts, vs in self.schedule:
        if t >= ts:
          v = vs
      return float(v)

    if self.kind == 'ramp':
      times = [s[0] for s in self.schedule]
      values = [s[1] for s in self.schedule]
      return float(np.interp(t, times, values))

    start, sub = self.schedule[0]
    for ts, tr in self.schedule:
      if t >= ts:
        start, sub = ts, tr
    return sub.value(t - start)

  __call__ = value


class ContactStop(object):
  '''Object blocking joint flexion beyond an angle'''
  def __init__(self, theta_contact):
    self.theta_contact = float(theta_contact)

  def __repr__(self):
    return 'ContactStop({})'.format(self.theta_contact)


Scenario = collections.namedtuple('Scenario', 'name theta stiffness load duration')


TraceRecord = collections.namedtuple('TraceRecord', 't theta_ref theta_est s_ref s_est alpha_ref alpha_act ' \
  'beta_ref beta_act tau_load power saturated torques speeds')
TraceRecord.__doc__ = '''One control tick. torques and speeds hold the per-motor values used for energy.'''

TRACE_CSV_HEADER = ['t_s', 'theta_ref_rad', 'theta_est_rad', 'S_ref_Nmm_rad', 'S_est_Nmm_rad', 'alpha_ref', \
  'alpha_act', 'beta_ref', 'beta_act', 'tau_load_Nmm', 'power_W', 'saturated']


def _joint_state(params, alpha, beta, load, t):
  '''Joint angle, tendon tensions and load torque for actual motor angles'''
  if isinstance(load, ContactStop):
    free = vsa_model.forward(params, alpha, beta, 0.0, strict=False).theta
    if free > load.theta_contact:
      f1, f2 = vsa_model.side_tensions(params, alpha, beta, load.theta_contact)
      return load.theta_contact, (f1, f2), params.r_j * (f1 - f2)
    return free, vsa_model.side_tensions(params, alpha, beta, free), 0.0

  tau = load(t) if load is not None else 0.0
  theta = vsa_model.forward(params, alpha, beta, tau, strict=False).theta
  return theta, vsa_model.side_tensions(params, alpha, beta, theta), tau


def reference_series(params, theta_traj, s_traj, load, times):
  '''Motor angle references for every tick

  Raises InfeasibleReferenceError at the first tick outside the admissible
  set of the inverse map.
  '''
  refs = []
  for t in times:
    th, s = theta_traj(t), s_traj(t)
    tau = load(t) if (load is not None and not isinstance(load, ContactStop)) else 0.0
    try:
      alpha, beta = vsa_model.inverse(params, th, s, tau)
    except PhysicsError as e:
      raise InfeasibleReferenceError(str(e), t)
    refs.append((th, s, alpha, beta))
  return refs


def run_tracking(motor, ctrl, params, theta_traj, s_traj, load=None, duration=0.0, electrical=None):
  '''Simulate the closed loop and record a trace

  Args:
    motor (MotorModel): Motor plant, same for both motors
    ctrl (ControllerConfig): Rate and gains
    params (VsaParameters): Actuator constants
    theta_traj (ReferenceTrajectory): Joint angle reference (rad)
    s_traj (ReferenceTrajectory): Joint stiffness reference (N*mm/rad)
    load: None, a callable tau_load(t) in N*mm or a ContactStop
    duration (float): Simulated time (s)
    electrical (ElectricalModel): Used for the power column
  Returns:
    list of TraceRecord
  '''
  if duration < 0:
    raise SpecError(_('Duration cannot be negative'))
  if electrical is None:
    electrical = ElectricalModel()

  dt = ctrl.dt
  n = int(round(duration * ctrl.rate)) + 1
  times = [k * dt for k in range(n)]
  refs = reference_series(params, theta_traj, s_traj, load, times)

  inertia = motor.inertia
  pos = [refs[0][2], refs[0][3]]
  vel = [0.0, 0.0]
  err_prev = [0.0, 0.0]

  # Start with the integrators holding the initial tendon load
  _th, f0, _tau = _joint_state(params, pos[0], pos[1], load, 0.0)
  integ = [0.0, 0.0]
  for i in range(2):
    if ctrl.ki[i] > 0:
      integ[i] = min(max(f0[i] * params.r_m / ctrl.ki[i], -ctrl.integral_limit), ctrl.integral_limit)

  trace = []
  for k, t in enumerate(times):
    th_ref, s_ref, a_ref, b_ref = refs[k]
    theta, tensions, tau_load = _joint_state(params, pos[0], pos[1], load, t)
    est = vsa_model.forward(params, pos[0], pos[1], tau_load, strict=False)

    torques = [0.0, 0.0]
    saturated = False
    for i, ref in enumerate((a_ref, b_ref)):
      err = ref - pos[i]
      integ[i] = min(max(integ[i] + err * dt, -ctrl.integral_limit), ctrl.integral_limit)
      deriv = (err - err_prev[i]) / dt if k > 0 else 0.0
      err_prev[i] = err

      u = ctrl.kp[i] * err + ctrl.ki[i] * integ[i] + ctrl.kd[i] * deriv
      if abs(u) > motor.max_torque:
        u = math.copysign(motor.max_torque, u)
        saturated = True
      torques[i] = u

      acc = (u - motor.viscous_friction * vel[i] - tensions[i] * params.r_m) / inertia
      v = vel[i] + acc * dt
      if abs(v) > motor.max_speed:
        v = math.copysign(motor.max_speed, v)
        saturated = True
      vel[i] = v

    power = sum(electrical.power(motor, u, w) for u, w in zip(torques, vel))
    trace.append(TraceRecord(t, th_ref, est.theta, s_ref, est.stiffness, a_ref, pos[0], b_ref, pos[1], \
      tau_load, power, saturated, tuple(torques), tuple(vel)))

    for i in range(2):
      pos[i] += vel[i] * dt

  return trace


def _normalized_rms(actual, reference, span=None):
  actual = np.asarray(actual, dtype=float)
  reference = np.asarray(reference, dtype=float)
  if span is None:
    span = float(np.ptp(reference))
    if span < 1e-12:
      span = float(np.max(np.abs(reference)))
    if span < 1e-12:
      span = 1.0
  rms = math.sqrt(float(np.mean((actual - reference)**2)))
  return 100.0 * rms / span


def tracking_metrics(trace, ranges=None):
  '''RMS tracking errors in percent of the reference range

  A channel whose reference is constant is normalised by its magnitude,
  or left unnormalised when that is zero.

  Args:
    trace (list of TraceRecord): Simulated trace
    ranges (dict): Optional normalisation spans keyed by "motor", "theta"
                   and "stiffness"
  Returns:
    OrderedDict of metrics
  '''
  if len(trace) == 0:
    raise SpecError(_('Empty trace'))
  if ranges is None:
    ranges = {}

  col = lambda name: [getattr(r, name) for r in trace]
  motor = max(_normalized_rms(col('alpha_act'), col('alpha_ref'), ranges.get('motor')), \
    _normalized_rms(col('beta_act'), col('beta_ref'), ranges.get('motor')))

  metrics = collections.OrderedDict()
  metrics['rms_error_motor_pct'] = motor
  metrics['rms_error_theta_pct'] = _normalized_rms(col('theta_est'), col('theta_ref'), ranges.get('theta'))
  metrics['rms_error_stiffness_pct'] = _normalized_rms(col('s_est'), col('s_ref'), ranges.get('stiffness'))
  metrics['saturation_fraction'] = sum(1 for r in trace if r.saturated) / float(len(trace))
  return metrics


def energy_estimate(trace, motor, electrical):
  '''Electrical energy drawn over a trace (mWh)

  Winding losses plus positive mechanical power of both motors,
  integrated with the trapezoid rule.
  '''
  if len(trace) < 2:
    return 0.0
  t = np.array([r.t for r in trace])
  p = np.array([sum(electrical.power(motor, u, w) for u, w in zip(r.torques, r.speeds)) for r in trace])
  joules = float(np.sum(0.5 * (p[1:] + p[:-1]) * np.diff(t)))
  return joules / 3.6


def holding_energy(params, motor, electrical, stiffness, grasp_tension, duration):
  '''Energy to hold a grasp with the joint blocked (mWh)

  The flexion motor carries the co-contraction tension plus the grasp
  tension; the extension motor carries the co-contraction tension. Only
  winding losses are counted.
  '''
  alpha, beta = vsa_model.inverse(params, 0.0, stiffness)
  cocontraction = vsa_model.forward(params, alpha, beta).cocontraction
  watts = 0.0
  for f in (cocontraction + grasp_tension, cocontraction):
    watts += electrical.power(motor, f * params.r_m, 0.0)
  return watts * duration / 3.6


def battery_grasp_count(energy_mWh, capacity_mAh, nominal_V):
  '''Number of grasps a battery pack supplies'''
  if not energy_mWh > 0:
    raise SpecError(_('Grasp energy must be positive'))
  return capacity_mAh * nominal_V / energy_mWh


def position_sinusoid_scenario(stiffness, phases=((math.pi/2, 16.0), (math.pi/18, 8.0)), frequency=0.125):
  '''Constant stiffness with sinusoidal joint angle phases of (amplitude, duration)'''
  schedule = []
  start = 0.0
  for amp, length in phases:
    schedule.append((start, ReferenceTrajectory('sinusoid', 'theta', amp, frequency)))
    start += length
  theta = ReferenceTrajectory('piecewise', 'theta', schedule=schedule)
  return Scenario('position', theta, ReferenceTrajectory.constant(stiffness, 'stiffness'), None, start)


def stiffness_sinusoid_scenario(s_lo, s_hi, frequency=0.1, duration=16.0, theta=0.0):
  '''Constant joint angle with stiffness swinging between two levels'''
  s = ReferenceTrajectory('sinusoid', 'stiffness', 0.5 * (s_hi - s_lo), frequency, 0.5 * (s_hi + s_lo))
  return Scenario('stiffness', ReferenceTrajectory.constant(theta), s, None, duration)


def stepped_position_scenario(s_lo, s_hi, frequency=0.1, step=math.radians(5), step_time=5.0, \
                              max_angle=math.radians(25), duration=30.0):
  '''Stiffness swinging between two levels while the joint angle steps up'''
  schedule = []
  n = int(round(max_angle / step))
  for i in range(n + 1):
    schedule.append((i * step_time, i * step))
  theta = ReferenceTrajectory('step', 'theta', schedule=schedule)
  s = ReferenceTrajectory('sinusoid', 'stiffness', 0.5 * (s_hi - s_lo), frequency, 0.5 * (s_hi + s_lo))
  return Scenario('stepped', theta, s, None, duration)


def modulation_scenario(s_lo, s_hi, ramp_time=2.0):
  '''Stiffness ramp from low to high with the joint free at zero'''
  s = ReferenceTrajectory('ramp', 'stiffness', schedule=[(0.0, s_lo), (ramp_time, s_hi)])
  return Scenario('modulation', ReferenceTrajectory.constant(0.0), s, None, ramp_time)


def grasp_energy_scenario(name, s_lo, level, theta_cmd, theta_contact, ramp_time=2.0, close_time=2.0, \
                          hold_time=30.0, release_time=2.0):
  '''Set stiffness, close onto an object, hold and release'''
  if level > s_lo and ramp_time > 0:
    t0 = ramp_time
    s = ReferenceTrajectory('ramp', 'stiffness', schedule=[(0.0, s_lo), (ramp_time, level)])
  else:
    t0 = 0.0
    s = ReferenceTrajectory.constant(level, 'stiffness')

  t1 = t0 + close_time
  t2 = t1 + hold_time
  t3 = t2 + release_time
  theta = ReferenceTrajectory('ramp', 'theta', schedule=[(t0, 0.0), (t1, theta_cmd), (t2, theta_cmd), \
    (t3, 0.0)])
  return Scenario(name, theta, s, ContactStop(theta_contact), t3)


def run_scenario(motor, ctrl, params, scenario, electrical=None):
  return run_tracking(motor, ctrl, params, scenario.theta, scenario.stiffness, scenario.load, \
    scenario.duration, electrical)


def write_trace_csv(trace, fname):
  '''Write a trace with the fixed trace columns'''
  with io.open(fname, 'w', encoding='utf-8', newline='') as fh:
    w = csv.writer(fh, lineterminator='\n')
    w.writerow(TRACE_CSV_HEADER)
    for r in trace:
      w.writerow(['{:.6f}'.format(r.t)] + ['{:.12g}'.format(v) for v in (r.theta_ref, r.theta_est, r.s_ref, \
        r.s_est, r.alpha_ref, r.alpha_act, r.beta_ref, r.beta_act, r.tau_load, r.power)] + [int(r.saturated)])
