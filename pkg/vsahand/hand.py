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

'''Whole hand quasi-static grasping

Four fingers driven by one tendon through the pulley tree close on a 2-D
object resting against a passive support. Each finger is swept in tension;
a rigid object freezes the joints up to the phalanx that touches it while
the rest keep closing, and a compliant one lets the finger press in.
Contact forces come from the torque balance of all joints at once.
'''

import collections
import csv
import io
import math

import numpy as np
from scipy import optimize

from .common import *
from . import finger as fg
from . import transmission as tx
from . import vsa as vsa_model


GRAVITY = 9.81  # m/s^2


class HandSpec(object):
  '''Four fingers, their bases, the passive support and the drive'''
  def __init__(self, fingers, finger_bases, support, tree, vsa, bowden=None, max_tendon_force=160.0, \
               support_mu=0.8):
    self.fingers = list(fingers)
    self.finger_bases = [tuple(float(v) for v in b) for b in finger_bases]
    self.support = tuple(float(v) for v in support)  # (x0, x1, y) in mm
    self.tree = tree
    self.vsa = vsa
    self.bowden = bowden if bowden is not None else tx.BowdenStage(1.0, 1.0)
    self.max_tendon_force = float(max_tendon_force)
    self.support_mu = float(support_mu)

    if len(self.fingers) != 4 or len(self.finger_bases) != 4:
      raise SpecError(_('A hand has four fingers'))
    if tree.outputs != len(self.fingers):
      raise SpecError(_('Pulley tree has {} outputs for {} fingers').format(tree.outputs, len(self.fingers)))

    x0, x1, y = self.support
    if not x0 < x1:
      raise SpecError(_('Support segment must have positive length'))
    for bx, by in self.finger_bases:
      if not by < y:
        raise SpecError(_('Support must lie on the flexion side of every finger base'))

  @property
  def support_y(self):
    return self.support[2]


TendonCommand = collections.namedtuple('TendonCommand', 'mode value')
TendonCommand.__doc__ = '''Hand tendon command: mode "tension" (N) or "displacement" (mm)'''

Contact = collections.namedtuple('Contact', 'finger phalanx point normal force')
Contact.__doc__ = '''Object contact. normal is the outward object normal; finger and phalanx
are None for the support.'''

_SweepEvent = collections.namedtuple('_SweepEvent', 'tension phalanx point normal angles levers')


class FingerSweep(object):
  '''Contact events of one finger closing on one object

  A rigid contact on phalanx j freezes joints 0..j at the angles they hold
  when it occurs. A compliant contact freezes nothing: the finger settles at
  the minimum of its spring and tendon energy plus a penalty on how far
  each touching phalanx has pressed into the object.
  '''
  def __init__(self, spec, base, shape, t_max, steps=200):
    self.spec = spec
    self.base = np.asarray(base, dtype=float)
    self.shape = shape
    self.events = []
    self._sweep(t_max, steps)

  def _active(self, tension):
    return [ev for ev in self.events if ev.tension <= tension]

  def _angles(self, events, tension):
    joints = self.spec.joints
    if not events:
      return [j.angle_at(tension) for j in joints]
    if not self.shape.rigid:
      return self._settle(events, tension)

    angles = []
    for i, j in enumerate(joints):
      frozen = [ev.angles[i] for ev in events if ev.phalanx >= i]
      angles.append(frozen[0] if frozen else j.angle_at(tension))
    return angles

  def _settle(self, events, tension):
    joints = self.spec.joints
    kc = self.shape.stiffness
    drive = np.array([tension * j.flexion_moment_arm - j.preload for j in joints])
    k = np.array([j.stiffness for j in joints])

    def energy(q):
      v = 0.5 * k.dot(q * q) - drive.dot(q)
      grad = k * q - drive
      for ev in events:
        pen = ev.levers.dot(q - ev.angles)
        if pen > 0.0:
          v += 0.5 * kc * pen * pen
          grad = grad + kc * pen * ev.levers
      return v, grad

    start = np.array([j.angle_at(tension) for j in joints])
    bounds = [(0.0, j.limit) for j in joints]
    res = optimize.minimize(energy, start, jac=True, method='L-BFGS-B', bounds=bounds, \
      options={'ftol': 1e-15, 'gtol': 1e-10, 'maxiter': 1000})
    return [min(max(float(q), 0.0), j.limit) for q, j in zip(res.x, joints)]

  def _gaps(self, events, tension):
    touching = set(ev.phalanx for ev in events)
    frozen = max(touching) if touching and self.shape.rigid else -1
    pts = fg.joint_positions(self.spec, self._angles(events, tension), self.base)
    gaps = []
    for j in range(3):
      if j in touching or j <= frozen:
        continue
      g, p = self.shape.segment_gap(pts[j], pts[j+1])
      gaps.append((g, j, p))
    return gaps

  def _min_gap(self, events, tension):
    gaps = self._gaps(events, tension)
    return min(gaps, key=lambda g: g[0]) if gaps else (float('inf'), None, None)

  def _add_contact(self, tension, phalanx, point):
    angles = np.array(self._angles(self.events, tension))
    normal = self.shape.outward_normal(point)
    _ph, levers = fg.contact_levers(self.spec, angles, {phalanx: (point, normal)}, self.base)
    self.events.append(_SweepEvent(tension, phalanx, np.array(point), normal, angles, levers[:, 0]))

  def _sweep(self, t_max, steps):
    g0, j0, p0 = self._min_gap([], 0.0)
    if g0 < -1e-9:
      raise SpecError(_('Object {} intersects a finger at rest').format(self.shape.name))
    if g0 <= 1e-9 and j0 is not None:
      self._add_contact(0.0, j0, p0)

    if t_max <= 0.0:
      return

    ts = np.linspace(0.0, t_max, steps + 1)
    for t0, t1 in zip(ts[:-1], ts[1:]):
      for _i in range(3):
        events = list(self.events)
        g1, _j1, _p1 = self._min_gap(events, t1)
        if g1 >= 0.0:
          break

        f = lambda t: self._min_gap(events, t)[0]
        if f(t0) <= 1e-9:
          t_c = t0
        else:
          t_c = optimize.brentq(f, t0, t1, xtol=1e-12, maxiter=200)
        _g, j, p = self._min_gap(events, t_c)
        self._add_contact(t_c, j, p)
        t0 = t_c

  def contact_forces(self, events, angles, tension):
    '''Normal force of each touching phalanx (phalanx -> N)'''
    if self.shape.rigid:
      contacts = dict((ev.phalanx, (ev.point, ev.normal)) for ev in events)
      return fg.solve_contact_forces(self.spec, angles, tension, contacts, base=self.base)
    q = np.asarray(angles)
    return dict((ev.phalanx, self.shape.stiffness * max(ev.levers.dot(q - ev.angles), 0.0)) for ev in events)

  def state_at(self, tension):
    '''Finger state and contacts at a finger tendon tension'''
    events = self._active(tension)
    angles = self._angles(events, tension)
    touching = [False, False, False]
    contacts = {}
    for ev in events:
      touching[ev.phalanx] = True
      contacts[ev.phalanx] = (ev.point, ev.normal)

    forces = [0.0, 0.0, 0.0]
    for j, fj in self.contact_forces(events, angles, tension).items():
      forces[j] = fj

    state = fg.FingerState(tuple(angles), tuple(touching), tension, tuple(forces))
    return state, contacts

  def joint_residual(self, tension):
    '''Unbalanced torque at each joint in the settled state (N*mm)'''
    state, contacts = self.state_at(tension)
    if self.shape.rigid:
      forces = dict((j, state.contact_forces[j]) for j in contacts)
      return fg.joint_torque_residual(self.spec, state.joint_angles, tension, contacts, forces, base=self.base)

    # Penalty forces act through the levers taken at contact
    torque = fg.joint_torques(self.spec, state.joint_angles, tension)
    for ev in self._active(tension):
      torque = torque - state.contact_forces[ev.phalanx] * ev.levers
    return fg.stop_residual(self.spec, state.joint_angles, torque)


def classify_grasp(contacts):
  '''power, pinch or none from a contact set'''
  phalanges = [c.phalanx for c in contacts if c.finger is not None]
  if len(phalanges) == 0:
    return 'none'
  if all(p == 2 for p in phalanges):
    return 'pinch'
  return 'power'


def lift_capacity(result, mu=None, support_mu=None):
  '''Heaviest object the contact set can hold by friction (kg)

  Finger contacts hold with the pad coefficient mu, the support contact with
  support_mu. Either defaults to the coefficient the grasp settled with.
  '''
  mu = result.mu if mu is None else mu
  support_mu = result.support_mu if support_mu is None else support_mu
  total = sum((mu if c.finger is not None else support_mu) * c.force for c in result.contacts)
  return total / GRAVITY


FORCE_TOLERANCE = 1e-6        # N
JOINT_TOLERANCE = 1e-3        # N*mm

class GraspResult(object):
  '''Settled grasp'''
  def __init__(self, obj, contacts, tendon_tension, finger_tensions, finger_states, excursion, \
               capped, residual, feasible, mu, support_mu, joint_residual=0.0):
    self.object = obj
    self.contacts = contacts
    self.tendon_tension = tendon_tension    # N at the VSA side
    self.finger_tensions = finger_tensions  # N per finger
    self.finger_states = finger_states
    self.excursion = excursion              # mm at the VSA side
    self.capped = capped
    self.residual = residual                # object wrench residual
    self.feasible = feasible                # friction cone feasible
    self.joint_residual = joint_residual    # worst unbalanced finger joint torque
    self.mu = mu
    self.support_mu = support_mu
    self.grasp_type = classify_grasp(contacts)
    self.lift_capacity = lift_capacity(self)

  @property
  def n_contacts(self):
    return len([c for c in self.contacts if c.finger is not None])

  @property
  def loaded_contacts(self):
    '''Contacts pressing with a positive normal force'''
    return [c for c in self.contacts if c.force > FORCE_TOLERANCE]

  @property
  def success(self):
    loaded = self.loaded_contacts
    if len(loaded) < 2 or not any(c.finger is not None for c in loaded):
      return False
    if not self.feasible or self.joint_residual > JOINT_TOLERANCE:
      return False
    normals = [np.asarray(c.normal) for c in loaded]
    return any(normals[i].dot(normals[j]) < 0.0 \
      for i in range(len(normals)) for j in range(i + 1, len(normals)))

  @property
  def normal_force(self):
    return sum(c.force for c in self.contacts)


def _tangent(n):
  return np.array([-n[1], n[0]])


def object_equilibrium(obj, finger_contacts, support_points, mu_finger, mu_support):
  '''Support reactions and friction forces holding the object in place

  Finger normal forces are known. The support presses at each end of the
  patch the object rests on. Support normal forces and every tangential
  force are chosen by a linear program that keeps them inside their friction
  cones while minimising total friction.

  Returns:
    (support_forces, tangential, residual, feasible)
  '''
  center = obj.center
  n_s = np.array([0.0, 1.0])
  support_points = [np.asarray(p, dtype=float) for p in support_points]
  k = len(support_points)
  nf = len(finger_contacts)
  normals = [np.asarray(c.normal) for c in finger_contacts] + [n_s] * k
  points = [np.asarray(c.point) for c in finger_contacts] + support_points
  m = len(normals)

  def wrench(point, force):
    r = point - center
    return np.array([force[0], force[1], r[0] * force[1] - r[1] * force[0]])

  known = np.zeros(3)
  for c in finger_contacts:
    known += wrench(np.asarray(c.point), -c.force * np.asarray(c.normal))

  # Columns: support normals, then tangential force at each contact
  a_eq = np.zeros((3, k + m))
  for s, p in enumerate(support_points):
    a_eq[:, s] = wrench(p, -n_s)
  for i in range(m):
    a_eq[:, k + i] = wrench(points[i], _tangent(normals[i]))
  b_eq = -known

  # Split tangential forces into positive parts for the LP
  a_lp = np.hstack((a_eq[:, :k], a_eq[:, k:], -a_eq[:, k:]))
  cost = np.concatenate((np.zeros(k), np.ones(2 * m)))
  a_ub = np.zeros((m, k + 2 * m))
  b_ub = np.zeros(m)
  for i in range(m):
    a_ub[i, k + i] = 1.0
    a_ub[i, k + m + i] = 1.0
    if i < nf:
      b_ub[i] = mu_finger * finger_contacts[i].force
    else:
      a_ub[i, i - nf] = -mu_support
  bounds = [(0.0, None)] * (k + 2 * m)

  res = optimize.linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_lp, b_eq=b_eq, bounds=bounds, method='highs')
  if res.status == 0:
    x = np.concatenate((res.x[:k], res.x[k:k+m] - res.x[k+m:]))
    feasible = True
  else:
    x = np.linalg.lstsq(a_eq, b_eq, rcond=None)[0]
    feasible = False

  # Polish the solver tolerance out of the residual
  x = x + np.linalg.lstsq(a_eq, b_eq - a_eq.dot(x), rcond=None)[0]
  residual = float(np.max(np.abs(a_eq.dot(x) - b_eq)))

  support = x[:k]
  tangential = x[k:]
  if np.any(support < -1e-9):
    feasible = False
  if feasible:
    limits = [mu_finger * c.force for c in finger_contacts] + [mu_support * max(f, 0.0) for f in support]
    feasible = all(abs(t) <= lim + 1e-6 for t, lim in zip(tangential, limits))

  return np.maximum(support, 0.0), tangential, residual, feasible


def simulate_grasp(hand, obj, command, stiffness=None, steps=200):
  '''Close the hand on an object and settle

  Args:
    hand (HandSpec): Hand description
    obj (ObjectShape): Object resting on the support
    command (TendonCommand): Tension or displacement command
    stiffness (float): VSA joint stiffness (N*mm/rad). Defaults to the
                       highest reachable value.
    steps (int): Tension steps of the contact sweep
  Returns:
    GraspResult
  '''
  if stiffness is None:
    stiffness = vsa_model.stiffness_range(hand.vsa)[1]

  eta = hand.bowden.efficiency('forward')
  share = hand.tree.share
  cap = hand.max_tendon_force

  if command.mode == 'tension':
    if command.value < 0:
      raise SpecError(_('Tendon tension cannot be negative'))
    t_top = min(command.value, cap)
  elif command.mode == 'displacement':
    k_v = stiffness / hand.vsa.r_j**2
    t_top = min(k_v * max(command.value, 0.0), cap)
  else:
    raise SpecError(_('Unknown tendon command mode: {}').format(command.mode))

  sweeps = [FingerSweep(f, b, obj, t_top * eta * share, steps) for f, b in zip(hand.fingers, hand.finger_bases)]

  def vsa_side_excursion(tension):
    per_finger = tx.distribute_tension(hand.tree, tension * eta)
    exc = [fg.tendon_excursion(f, s.state_at(t)[0].joint_angles) \
      for f, s, t in zip(hand.fingers, sweeps, per_finger)]
    hand_side = hand.tree.reduction * float(np.mean(exc))
    return hand_side + hand.bowden.slack + tension * hand.bowden.compliance

  capped = False
  if command.mode == 'tension':
    tension = t_top
    capped = command.value > cap
  else:
    u = max(command.value, 0.0)
    g = lambda t: t - k_v * (u - vsa_side_excursion(t))
    if u == 0.0:
      tension = 0.0
    elif g(t_top) <= 0.0:
      tension = t_top
      capped = t_top >= cap
    else:
      tension = optimize.brentq(g, 0.0, t_top, xtol=1e-9, maxiter=200)

  per_finger = tx.distribute_tension(hand.tree, tension * eta)
  states = []
  contacts = []
  for i, (s, t) in enumerate(zip(sweeps, per_finger)):
    state, touching = s.state_at(t)
    states.append(state)
    for j in sorted(touching):
      point, normal = touching[j]
      contacts.append(Contact(i, j, tuple(point), tuple(normal), state.contact_forces[j]))

  residual = 0.0
  feasible = False
  mu = hand.fingers[0].pad_friction_mu
  if contacts:
    patch = np.asarray(obj.support_patch(hand.support[:2]))
    f_s, _tang, residual, feasible = object_equilibrium(obj, contacts, patch, mu, hand.support_mu)
    total = float(np.sum(f_s))
    sp = f_s.dot(patch) / total if total > 0.0 else patch.mean(axis=0)
    contacts.append(Contact(None, None, tuple(sp), (0.0, 1.0), total))

  joint_residual = max(float(np.max(np.abs(s.joint_residual(t)))) for s, t in zip(sweeps, per_finger))
  return GraspResult(obj, contacts, tension, per_finger, states, vsa_side_excursion(tension), capped, \
    residual, feasible, mu, hand.support_mu, joint_residual)


GraspRow = collections.namedtuple('GraspRow', \
  'object stiffness_setting grasp_type success n_contacts peak_tension_N energy_mWh error')

GRASP_CSV_HEADER = ['object', 'stiffness_setting', 'grasp_type', 'success', 'n_contacts', 'peak_tension_N', \
  'energy_mWh']


def grasp_sweep(hand, objects, stiffness_settings, command, energy=None, steps=200, results=None):
  '''Simulate every object at every stiffness setting

  Args:
    stiffness_settings (sequence): (name, stiffness) pairs
    energy (callable): energy(result, stiffness) -> mWh, optional
    results (list): Receives (obj, name, GraspResult or None) per trial
  Returns:
    list of GraspRow. A failed trial is recorded with grasp_type "error".
  '''
  rows = []
  for obj in objects:
    for name, s in stiffness_settings:
      try:
        res = simulate_grasp(hand, obj, command, s, steps)
      except FatalError as e:
        rows.append(GraspRow(obj.name, name, 'error', False, 0, 0.0, 0.0, str(e)))
        if results is not None:
          results.append((obj, name, None))
        continue

      e_mwh = energy(res, s) if energy is not None else 0.0
      rows.append(GraspRow(obj.name, name, res.grasp_type, res.success, res.n_contacts, \
        res.tendon_tension, e_mwh, None))
      if results is not None:
        results.append((obj, name, res))
  return rows


def write_grasp_csv(rows, fname):
  '''Write grasp sweep rows as CSV'''
  with io.open(fname, 'w', encoding='utf-8', newline='') as fh:
    w = csv.writer(fh, lineterminator='\n')
    w.writerow(GRASP_CSV_HEADER)
    for r in rows:
      w.writerow([r.object, r.stiffness_setting, r.grasp_type, int(r.success), r.n_contacts, \
        '{:.6f}'.format(r.peak_tension_N), '{:.6f}'.format(r.energy_mWh)])
