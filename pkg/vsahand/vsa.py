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

'''Quasi-static antagonistic VSA

Two motors wind tendons (angles alpha, beta) that pull on a joint pulley of
radius r_j through a pair of quadratic springs. Spring deflections are

  x1 = r_m*alpha - r_j*theta
  x2 = r_m*beta  + r_j*theta

so a positive joint angle relaxes spring 1 and stretches spring 2. Because
x1 + x2 does not depend on theta the torque balance is linear in theta and
the equilibrium angle and stiffness have closed forms.
'''

import collections
import math

from scipy import optimize

from .common import *
from .cam import QuadraticCoefficients, derive_coefficients


_DEFLECTION_TOL = 1e-9  # mm


class VsaParameters(object):
  '''Geometry and spring constants of the antagonistic pair'''
  def __init__(self, coefficients, r_j, r_m, spring_k, delta_x_max, \
               alpha_limits=(-2*math.pi, 2*math.pi), beta_limits=(-2*math.pi, 2*math.pi)):
    self.coefficients = QuadraticCoefficients(*coefficients)
    self.r_j = float(r_j)
    self.r_m = float(r_m)
    self.spring_k = float(spring_k)
    self.delta_x_max = float(delta_x_max)
    self.alpha_limits = tuple(float(v) for v in alpha_limits)
    self.beta_limits = tuple(float(v) for v in beta_limits)

    if not (self.r_j > 0 and self.r_m > 0):
      raise SpecError(_('Pulley radii must be positive'))
    if not self.delta_x_max > 0:
      raise SpecError(_('Spring travel must be positive'))
    if self.coefficients.a < 0 or not self.coefficients.b > 0:
      raise SpecError(_('Spring coefficients must give an increasing force: {}').format(self.coefficients))
    for lim in (self.alpha_limits, self.beta_limits):
      if not lim[0] < lim[1]:
        raise SpecError(_('Motor limits must be an increasing interval: {}').format(lim))

  @classmethod
  def from_targets(cls, targets, r_m, **kwargs):
    '''Build parameters whose springs meet a StiffnessTargets set'''
    return cls(derive_coefficients(targets), targets.r_j, r_m, targets.k, targets.delta_x_max, **kwargs)

  def tension(self, x):
    '''Tendon tension at spring deflection x (N)

    The zero-preload datum sits at the thinnest cam section so a negative c
    is not carried into the tendon. The offset cancels in the torque balance.
    '''
    a, b, c = self.coefficients
    return a * x * x + b * x + max(c, 0.0)

  def __repr__(self):
    return 'VsaParameters(coefficients={}, r_j={}, r_m={}, spring_k={}, delta_x_max={})'.format( \
      tuple(self.coefficients), self.r_j, self.r_m, self.spring_k, self.delta_x_max)


class ActuatorState(collections.namedtuple('ActuatorState', \
      'alpha beta tau_load theta stiffness tensions deflections tendon_stiffness')):
  '''Quasi-static VSA state

  Angles in rad, torque in N*mm, stiffness in N*mm/rad, tensions in N,
  deflections in mm and tendon_stiffness (S / r_j^2) in N/mm.
  '''
  __slots__ = ()

  @property
  def cocontraction(self):
    '''Tension common to both sides'''
    return min(self.tensions)


def _check_deflections(params, x1, x2):
  tol = _DEFLECTION_TOL * max(1.0, params.delta_x_max)
  if x1 < -tol or x2 < -tol:
    raise SlackTendonError(_('Tendon would go slack: x1 = {:.6g} mm, x2 = {:.6g} mm').format(x1, x2))
  if x1 > params.delta_x_max + tol or x2 > params.delta_x_max + tol:
    raise OverTravelError(_('Spring deflection beyond {} mm: x1 = {:.6g} mm, x2 = {:.6g} mm').format( \
      params.delta_x_max, x1, x2))


def forward(params, alpha, beta, tau_load=0.0, strict=True):
  '''Equilibrium angle and stiffness for given motor angles and load

  Args:
    params (VsaParameters): Actuator constants
    alpha (float): Motor 1 angle (rad)
    beta (float): Motor 2 angle (rad)
    tau_load (float): External joint torque (N*mm)
    strict (bool): Raise on slack tendons or spring over-travel
  Returns:
    ActuatorState
  '''
  a, b, _c = params.coefficients
  r_j, r_m = params.r_j, params.r_m

  denom = a * r_m * (alpha + beta) + b
  if denom <= 0.0:
    raise SlackTendonError(_('Co-contraction too low to carry a load: alpha + beta = {:.6g}').format( \
      alpha + beta))

  theta = (r_m / (2.0*r_j)) * (alpha - beta) - tau_load / (2.0 * r_j**2 * denom)
  stiffness = 2.0 * a * r_m * r_j**2 * (alpha + beta) + 2.0 * b * r_j**2

  x1 = r_m * alpha - r_j * theta
  x2 = r_m * beta + r_j * theta

  if strict:
    _check_deflections(params, x1, x2)

  tensions = (params.tension(max(x1, 0.0)), params.tension(max(x2, 0.0)))
  return ActuatorState(alpha, beta, tau_load, theta, stiffness, tensions, (x1, x2), stiffness / r_j**2)


def stiffness_range(params):
  '''Lowest and highest joint stiffness reachable at theta = 0 (N*mm/rad)'''
  a, b, _c = params.coefficients
  r_j, r_m = params.r_j, params.r_m

  sigma_max = 2.0 * params.delta_x_max / r_m
  # Symmetric co-contraction puts alpha = beta = sigma/2
  sigma_max = min(sigma_max, 2.0 * params.alpha_limits[1], 2.0 * params.beta_limits[1])

  s_lo = 2.0 * b * r_j**2
  s_hi = 2.0 * a * r_m * r_j**2 * sigma_max + s_lo
  return (s_lo, s_hi)


def inverse(params, theta_ref, s_ref, tau_load=0.0):
  '''Motor angles realizing a joint angle and stiffness under load

  Returns:
    (alpha, beta) in rad
  '''
  a, b, _c = params.coefficients
  r_j, r_m = params.r_j, params.r_m

  s_lo, s_hi = stiffness_range(params)
  tol = 1e-9 * s_hi
  if not (s_lo - tol <= s_ref <= s_hi + tol):
    raise UnreachableStiffnessError(_('Stiffness {:.6g} N*mm/rad outside [{:.6g}, {:.6g}]').format( \
      s_ref, s_lo, s_hi))

  if a > 0.0:
    sigma = (s_ref - 2.0 * b * r_j**2) / (2.0 * a * r_m * r_j**2)
    sigma = max(sigma, 0.0)
  else:
    sigma = 0.0

  delta = (2.0 * r_j / r_m) * (theta_ref + tau_load / s_ref)
  alpha = 0.5 * (sigma + delta)
  beta = 0.5 * (sigma - delta)

  x1 = r_m * alpha - r_j * theta_ref
  x2 = r_m * beta + r_j * theta_ref
  _check_deflections(params, x1, x2)

  for name, v, lim in (('alpha', alpha, params.alpha_limits), ('beta', beta, params.beta_limits)):
    if not lim[0] <= v <= lim[1]:
      raise OverTravelError(_('Motor angle {} = {:.6g} rad outside [{:.6g}, {:.6g}]').format( \
        name, v, lim[0], lim[1]))

  return (alpha, beta)


def is_admissible(params, alpha, beta, tau_load=0.0):
  '''True when forward() succeeds without slack or over-travel'''
  try:
    forward(params, alpha, beta, tau_load)
  except PhysicsError:
    return False
  return True


def side_tensions(params, alpha, beta, theta):
  '''Physical tendon tensions at an imposed joint angle

  A slack side carries no tension. No travel limit is applied so this can
  serve as a plant model when the joint is blocked.
  '''
  x1 = params.r_m * alpha - params.r_j * theta
  x2 = params.r_m * beta + params.r_j * theta
  f1 = params.tension(x1) if x1 > 0.0 else 0.0
  f2 = params.tension(x2) if x2 > 0.0 else 0.0
  return (f1, f2)


def equilibrium_oracle(params, alpha, beta, tau_load=0.0, spring=None, fd_step=1e-6):
  '''Independent torque-balance solution for audit of forward()

  Args:
    params (VsaParameters): Actuator constants
    alpha (float): Motor 1 angle (rad)
    beta (float): Motor 2 angle (rad)
    tau_load (float): External joint torque (N*mm)
    spring (callable): Force of one spring vs deflection. Defaults to the
                       quadratic in params.
    fd_step (float): Finite difference step for stiffness (rad)
  Returns:
    (theta, stiffness)
  '''
  if spring is None:
    spring = params.tension

  r_j, r_m, dx = params.r_j, params.r_m, params.delta_x_max

  def spring_torque(theta):
    x1 = r_m * alpha - r_j * theta
    x2 = r_m * beta + r_j * theta
    return r_j * (spring(x1) - spring(x2))

  def balance(theta):
    return spring_torque(theta) - tau_load

  # Keep both deflections inside [0, dx]
  th_lo = max((r_m * alpha - dx) / r_j, -r_m * beta / r_j)
  th_hi = min(r_m * alpha / r_j, (dx - r_m * beta) / r_j)

  if th_lo > th_hi:
    raise NoEquilibriumError(_('No admissible joint angle for alpha = {:.6g}, beta = {:.6g}').format( \
      alpha, beta))

  g_lo, g_hi = balance(th_lo), balance(th_hi)
  if g_lo == 0.0:
    theta = th_lo
  elif g_hi == 0.0:
    theta = th_hi
  elif g_lo * g_hi > 0.0:
    raise NoEquilibriumError(_('Torque balance not bracketed for tau_load = {:.6g} N*mm').format(tau_load))
  else:
    theta = optimize.brentq(balance, th_lo, th_hi, xtol=1e-15, rtol=1e-15, maxiter=200)

  stiffness = -(spring_torque(theta + fd_step) - spring_torque(theta - fd_step)) / (2.0 * fd_step)
  return (theta, stiffness)
