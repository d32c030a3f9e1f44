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

'''Underactuated compliant finger

Three elastic joints (MCP, PIP, DIP) share one flexion tendon. Joint i stays
at its 0 degree hard stop until the tendon torque exceeds its preload, then
bends as a linear spring until it reaches its limit or its phalanx touches an
obstacle. Stiffness and preload rise from proximal to distal so the joints
close one after another.

Planar kinematics: the finger points along +x from its base and flexion
rotates each phalanx counter-clockwise.
'''

import collections
import math

import numpy as np
from scipy import optimize

from .common import *


JOINT_NAMES = ('MCP', 'PIP', 'DIP')


class JointSpec(collections.namedtuple('JointSpec', \
      'name stiffness preload limit flexion_moment_arm extension_moment_arm tension_stiffening')):
  '''One elastic joint

  stiffness in N*mm/rad, preload in N*mm, limit in rad, moment arms in mm and
  tension_stiffening in N*mm/rad per N of co-contraction tension.
  '''
  __slots__ = ()

  @property
  def start_tension(self):
    '''Flexion tension at which the joint leaves its hard stop'''
    return self.preload / self.flexion_moment_arm

  def angle_at(self, tension, extension_tension=0.0):
    '''Free equilibrium angle at a tendon tension, clamped to [0, limit]'''
    torque = tension * self.flexion_moment_arm - extension_tension * self.extension_moment_arm
    q = (torque - self.preload) / self.stiffness
    return min(max(q, 0.0), self.limit)

  def tension_for(self, angle, extension_tension=0.0):
    '''Flexion tension that holds the joint at an angle'''
    return (self.preload + self.stiffness * angle + extension_tension * self.extension_moment_arm) / \
      self.flexion_moment_arm


class FingerSpec(object):
  '''Joint and link parameters of one finger'''
  def __init__(self, joints, phalanx_lengths, pad_friction_mu=0.8):
    self.joints = tuple(JointSpec(*j) for j in joints)
    self.phalanx_lengths = tuple(float(v) for v in phalanx_lengths)
    self.pad_friction_mu = float(pad_friction_mu)
    self.validate()

  def validate(self):
    if len(self.joints) != 3 or len(self.phalanx_lengths) != 3:
      raise SpecError(_('A finger has three joints and three phalanges'))

    for j in self.joints:
      if not j.stiffness > 0:
        raise SpecError(_('{} stiffness must be positive').format(j.name))
      if j.preload < 0:
        raise SpecError(_('{} preload cannot be negative').format(j.name))
      if not 0.0 < j.limit <= math.pi / 2 + 1e-12:
        raise SpecError(_('{} limit must be in (0, pi/2]').format(j.name))
      if not (j.flexion_moment_arm > 0 and j.extension_moment_arm > 0):
        raise SpecError(_('{} moment arms must be positive').format(j.name))
      if not j.flexion_moment_arm > j.extension_moment_arm:
        raise SpecError(_('{} flexion moment arm must exceed the extension arm').format(j.name))
      if j.tension_stiffening < 0:
        raise SpecError(_('{} tension stiffening cannot be negative').format(j.name))

    k = [j.stiffness for j in self.joints]
    if not k[0] < k[1] < k[2]:
      raise SpecError(_('Joint stiffness must increase from proximal to distal: {}').format(k))

    if any(v <= 0 for v in self.phalanx_lengths):
      raise SpecError(_('Phalanx lengths must be positive'))
    if self.pad_friction_mu < 0:
      raise SpecError(_('Pad friction cannot be negative'))

  @classmethod
  def default(cls):
    '''Calibrated default finger'''
    return cls(default_joints(), (45.0, 25.0, 20.0), 0.8)

  @property
  def flexion_arms(self):
    return np.array([j.flexion_moment_arm for j in self.joints])

  @property
  def limits(self):
    return np.array([j.limit for j in self.joints])

  @property
  def length(self):
    return sum(self.phalanx_lengths)

  def scaled(self, stiffness_scale=1.0, stiffening_scale=1.0):
    '''Copy with joint stiffness and tension stiffening scaled'''
    joints = [j._replace(stiffness=j.stiffness * stiffness_scale, \
              tension_stiffening=j.tension_stiffening * stiffening_scale) for j in self.joints]
    return FingerSpec(joints, self.phalanx_lengths, self.pad_friction_mu)


def default_joints():
  return [
    JointSpec('MCP', 200.0, 20.0, math.pi/2, 10.0, 5.0, 400.0),
    JointSpec('PIP', 260.0, 288.0, math.pi/2, 8.0, 4.0, 520.0),
    JointSpec('DIP', 320.0, 540.0, 7*math.pi/18, 6.0, 3.0, 640.0)
  ]


FingerState = collections.namedtuple('FingerState', \
  'joint_angles contact_flags tendon_tension contact_forces')

ContactConstraint = collections.namedtuple('ContactConstraint', 'phalanx angle distance')
ContactConstraint.__doc__ = '''Phalanx (0-based) touches when its proximal joint reaches angle (rad),
at distance (mm) along the phalanx'''

class FingerEvent(collections.namedtuple('FingerEvent', 'index tension joint kind')):
  __slots__ = ()

  @property
  def label(self):
    return '{}_{}'.format(JOINT_NAMES[self.joint], self.kind)


def activation_thresholds(spec, extension_tension=0.0):
  '''(start, limit) flexion tension of each joint (N)'''
  return [(j.tension_for(0.0, extension_tension), j.tension_for(j.limit, extension_tension)) \
    for j in spec.joints]


def closing_time(spec, tendon_speed):
  '''Time to pull every joint to its limit at a tendon speed (s)'''
  if not tendon_speed > 0:
    raise SpecError(_('Tendon speed must be positive'))
  return tendon_excursion(spec, spec.limits) / tendon_speed


def tendon_excursion(spec, angles):
  '''Flexion tendon take-up for a set of joint angles (mm)'''
  return float(np.dot(spec.flexion_arms, angles))

def spring_energy(spec, angles):
  '''Energy stored in the joint springs (N*mm)'''
  return sum(j.preload * q + 0.5 * j.stiffness * q * q for j, q in zip(spec.joints, angles))


def joint_positions(spec, angles, base=(0.0, 0.0), base_angle=0.0):
  '''Joint origins and fingertip (4 x 2 array, mm)'''
  pts = np.zeros((4, 2))
  pts[0] = base
  phi = base_angle
  for i, (length, q) in enumerate(zip(spec.phalanx_lengths, angles)):
    phi += q
    pts[i+1] = pts[i] + length * np.array([math.cos(phi), math.sin(phi)])
  return pts

def phalanx_angles(angles, base_angle=0.0):
  '''Absolute orientation of each phalanx (rad)'''
  return base_angle + np.cumsum(angles)

def jacobian(spec, angles):
  '''Fingertip position Jacobian (2 x 3)'''
  pts = joint_positions(spec, angles)
  tip = pts[3]
  jac = np.zeros((2, 3))
  for i in range(3):
    r = tip - pts[i]
    jac[:, i] = (-r[1], r[0])
  return jac


def resisting_moment(origin, point, force):
  '''Moment of a contact force about a joint, positive when opposing flexion'''
  r = np.asarray(point) - np.asarray(origin)
  return -(r[0] * force[1] - r[1] * force[0])


STOP_TOLERANCE = 1e-9  # rad

JointBalance = collections.namedtuple('JointBalance', 'forces stop_torques residual')
JointBalance.__doc__ = '''Contact forces (phalanx -> N), hard-stop torques (N*mm, positive
flexing) and the torque left unbalanced at each joint (N*mm)'''


def joint_torques(spec, angles, tension, extension_tension=0.0):
  '''Net flexing torque of the tendons and springs at each joint (N*mm)'''
  return np.array([tension * j.flexion_moment_arm - extension_tension * j.extension_moment_arm \
    - j.preload - j.stiffness * q for j, q in zip(spec.joints, angles)])

def contact_levers(spec, angles, contacts, base=(0.0, 0.0), base_angle=0.0):
  '''Resisting moment of a unit force at each contact about each joint

  A contact on phalanx j loads joints 0..j only.

  Returns:
    (phalanges, 3 x n array)
  '''
  pts = joint_positions(spec, angles, base, base_angle)
  phalanges = sorted(contacts)
  levers = np.zeros((3, len(phalanges)))
  for c, j in enumerate(phalanges):
    point, normal = contacts[j]
    for i in range(j + 1):
      levers[i, c] = resisting_moment(pts[i], point, normal)
  return phalanges, levers

def _stops(spec, angles):
  at_rest = [q <= STOP_TOLERANCE for q in angles]
  at_limit = [q >= j.limit - STOP_TOLERANCE for j, q in zip(spec.joints, angles)]
  return at_rest, at_limit


def joint_torque_residual(spec, angles, tension, contacts, forces, extension_tension=0.0, base=(0.0, 0.0), \
                          base_angle=0.0):
  '''Torque each joint cannot carry with the given contact forces (N*mm)

  A joint on its 0 degree stop absorbs any net extending torque and a joint
  at its limit any net flexing torque.
  '''
  phalanges, levers = contact_levers(spec, angles, contacts, base, base_angle)
  f = np.array([forces[j] for j in phalanges], dtype=float)
  return stop_residual(spec, angles, joint_torques(spec, angles, tension, extension_tension) - levers.dot(f))

def stop_residual(spec, angles, torque):
  '''Net flexing torque per joint left over once the hard stops have pushed back'''
  r = np.array(torque, dtype=float)
  at_rest, at_limit = _stops(spec, angles)
  for i in range(3):
    if at_rest[i]:
      r[i] = max(r[i], 0.0)
    elif at_limit[i]:
      r[i] = min(r[i], 0.0)
  return r


def balance_contact_forces(spec, angles, tension, contacts, extension_tension=0.0, base=(0.0, 0.0), \
                           base_angle=0.0):
  '''Normal forces that hold every joint in torque balance together

  All three joint balances are solved at once by a linear program over the
  non-negative contact forces and the one-sided hard-stop torques. Of the
  solutions the one leaning least on the stops is kept. When no solution
  exists the smallest total unbalanced torque is reported.

  Args:
    contacts (dict): phalanx index -> (point, unit normal). The normal is
                     the direction of the force the object applies to the
                     finger.
  Returns:
    JointBalance
  '''
  phalanges, levers = contact_levers(spec, angles, contacts, base, base_angle)
  tau = joint_torques(spec, angles, tension, extension_tension)
  at_rest, at_limit = _stops(spec, angles)
  n = len(phalanges)
  eye = np.eye(3)

  # Columns: forces, rest stop, limit stop, positive and negative slack
  a_eq = np.hstack((levers, -eye, eye, eye, -eye))
  cost = np.concatenate((np.zeros(n), np.ones(6), 1e3 * np.ones(6)))
  bounds = [(0.0, None)] * n
  bounds += [(0.0, None) if r else (0.0, 0.0) for r in at_rest]
  bounds += [(0.0, None) if l else (0.0, 0.0) for l in at_limit]
  bounds += [(0.0, None)] * 6

  res = optimize.linprog(cost, A_eq=a_eq, b_eq=tau, bounds=bounds, method='highs')
  if res.status != 0:
    raise NoEquilibriumError(_('Joint torque balance failed: {}').format(res.message))

  # Polish the solver tolerance out of the balance, keeping the active set
  x = res.x.copy()
  loaded = np.flatnonzero(x[:n+6] > 1e-12)
  if len(loaded):
    rhs = tau - a_eq.dot(x)
    y = x.copy()
    y[loaded] += np.linalg.lstsq(a_eq[:, loaded], rhs, rcond=None)[0]
    if np.all(y >= 0.0):
      x = y

  forces = dict((j, float(x[c])) for c, j in enumerate(phalanges))
  stops = x[n:n+3] - x[n+3:n+6]
  residual = joint_torque_residual(spec, angles, tension, contacts, forces, extension_tension, base, \
    base_angle)
  return JointBalance(forces, stops, residual)


def solve_contact_forces(spec, angles, tension, contacts, extension_tension=0.0, base=(0.0, 0.0), \
                         base_angle=0.0):
  '''Normal forces at touching phalanges (phalanx -> N)'''
  return balance_contact_forces(spec, angles, tension, contacts, extension_tension, base, base_angle).forces


def finger_equilibrium(spec, tension, obstacles=(), extension_tension=0.0):
  '''Quasi-static finger state at a flexion tendon tension

  Joints move independently until frozen. Tension is swept from zero and a
  contact on phalanx j freezes joints 0..j at the angles they hold when
  joint j reaches the contact angle.

  Args:
    spec (FingerSpec): Finger parameters
    tension (float): Flexion tendon tension (N)
    obstacles (sequence): ContactConstraint per touching phalanx
    extension_tension (float): Extension tendon tension (N)
  Returns:
    FingerState
  '''
  if tension < 0:
    raise SpecError(_('Tendon tension cannot be negative: {}').format(tension))

  frozen = [None, None, None]
  touching = [False, False, False]

  # Order contacts by the tension at which they occur
  events = []
  for ob in obstacles:
    jt = spec.joints[ob.phalanx]
    if ob.angle >= jt.limit:
      continue
    t_c = jt.tension_for(max(ob.angle, 0.0), extension_tension) if ob.angle > 0.0 else 0.0
    events.append((t_c, ob))
  events.sort(key=lambda e: (e[0], e[1].phalanx))

  for t_c, ob in events:
    if t_c > tension:
      break
    if frozen[ob.phalanx] is not None:
      continue
    for i in range(ob.phalanx):
      if frozen[i] is None:
        frozen[i] = spec.joints[i].angle_at(t_c, extension_tension)
    frozen[ob.phalanx] = max(ob.angle, 0.0)
    touching[ob.phalanx] = True

  angles = [f if f is not None else j.angle_at(tension, extension_tension) \
    for f, j in zip(frozen, spec.joints)]

  contact_forces = [0.0, 0.0, 0.0]
  if any(touching):
    pts = joint_positions(spec, angles)
    phis = phalanx_angles(angles)
    contacts = {}
    for ob in obstacles:
      if touching[ob.phalanx]:
        j = ob.phalanx
        direction = np.array([math.cos(phis[j]), math.sin(phis[j])])
        point = pts[j] + ob.distance * direction
        normal = np.array([math.sin(phis[j]), -math.cos(phis[j])])
        contacts[j] = (point, normal)
    for j, f in solve_contact_forces(spec, angles, tension, contacts, extension_tension).items():
      contact_forces[j] = f

  return FingerState(tuple(angles), tuple(touching), tension, tuple(contact_forces))


def closing_trajectory(spec, tension_profile, obstacles=(), extension_tension=0.0):
  '''Sequence of equilibria along a tension profile

  Returns:
    (states, events). Events carry the exact threshold tension of each
    joint start, limit or contact and are ordered by sample then tension.
  '''
  states = []
  events = []
  prev = None
  caps = {ob.phalanx: ob.angle for ob in obstacles}

  for ix, t in enumerate(tension_profile):
    if t < 0:
      raise SpecError(_('Tension profile must be nonnegative'))
    st = finger_equilibrium(spec, t, obstacles, extension_tension)
    new = []
    if prev is not None:
      for i, jt in enumerate(spec.joints):
        q0, q1 = prev.joint_angles[i], st.joint_angles[i]
        if q0 <= 0.0 < q1:
          new.append(FingerEvent(ix, jt.tension_for(0.0, extension_tension), i, 'start'))
        if st.contact_flags[i] and not prev.contact_flags[i]:
          new.append(FingerEvent(ix, jt.tension_for(max(caps[i], 0.0), extension_tension), i, 'contact'))
        elif q0 < jt.limit <= q1 and not st.contact_flags[i]:
          new.append(FingerEvent(ix, jt.tension_for(jt.limit, extension_tension), i, 'limit'))
    new.sort(key=lambda e: (e.tension, e.joint))
    events.extend(new)
    states.append(st)
    prev = st

  return states, events


WorkBalance = collections.namedtuple('WorkBalance', 'tendon_work stored_energy contact_work residual')

def work_balance(spec, states):
  '''Tendon work against stored spring energy over a trajectory (N*mm)

  Obstacles are fixed so contact forces do no work. Tendon work is
  integrated with the trapezoid rule.
  '''
  if len(states) == 0:
    return WorkBalance(0.0, 0.0, 0.0, 0.0)

  work = 0.0
  for s0, s1 in zip(states[:-1], states[1:]):
    du = tendon_excursion(spec, s1.joint_angles) - tendon_excursion(spec, s0.joint_angles)
    work += 0.5 * (s0.tendon_tension + s1.tendon_tension) * du

  stored = spring_energy(spec, states[-1].joint_angles) - spring_energy(spec, states[0].joint_angles)
  contact = 0.0
  scale = max(abs(work), abs(stored), 1e-12)
  return WorkBalance(work, stored, contact, abs(work - stored - contact) / scale)


def fingertip_stiffness(spec, vsa_state, posture, probe_direction=None, share=0.25):
  '''Linearized fingertip stiffness along a probe direction (N/mm)

  Joint-space stiffness is diag(k_i + t*g_i) + kappa*r*r^T where t is the
  co-contraction tension reaching this finger, kappa the reflected tendon
  stiffness share*S/r_j^2 and r the flexion moment arms.

  Args:
    spec (FingerSpec): Finger parameters
    vsa_state (ActuatorState): Actuator state setting tension and stiffness
    posture (sequence): Joint angles (rad)
    probe_direction (sequence): Unit probe direction. Defaults to the
                                flexion-side normal of the distal phalanx.
    share (float): Fraction of the hand tendon reaching this finger
  '''
  q = np.asarray(posture, dtype=float)
  if np.any(q < -1e-12) or np.any(q > spec.limits + 1e-12):
    raise SpecError(_('Posture outside joint limits: {}').format(tuple(q)))

  if probe_direction is None:
    phi = phalanx_angles(q)[2]
    d = np.array([-math.sin(phi), math.cos(phi)])
  else:
    d = np.asarray(probe_direction, dtype=float)
    d = d / np.linalg.norm(d)

  t = share * vsa_state.cocontraction
  kappa = share * vsa_state.tendon_stiffness
  r = spec.flexion_arms
  diag = np.array([j.stiffness + t * j.tension_stiffening for j in spec.joints])
  k_joint = np.diag(diag) + kappa * np.outer(r, r)

  jd = jacobian(spec, q).T.dot(d)
  if np.linalg.norm(jd) < 1e-9 * spec.length:
    raise SingularPostureError(_('Fingertip cannot move along the probe direction'))

  try:
    compliance = float(jd.dot(np.linalg.solve(k_joint, jd)))
  except np.linalg.LinAlgError:
    raise SingularPostureError(_('Joint stiffness matrix is singular'))

  if not compliance > 0:
    raise SingularPostureError(_('Non-positive fingertip compliance'))
  return 1.0 / compliance
