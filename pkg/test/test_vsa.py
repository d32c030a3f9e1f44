#!/usr/bin/python
# -*- coding: utf-8 -*-

import math
import unittest

import numpy as np

from vsahand.common import *
from vsahand import cam
from vsahand import vsa
from vsahand.config import SimConfig
from . import RandomSeededTestCase


def default_params():
    return SimConfig().vsa_params()


class TestForward(RandomSeededTestCase):

    def setUp(self):
        RandomSeededTestCase.setUp(self)
        self.params = default_params()

    def test_zero_angles(self):
        st = vsa.forward(self.params, 0.0, 0.0)
        self.assertEqual(st.theta, 0.0)
        self.assertAlmostEqual(st.stiffness, 135.0, places=9)
        self.assertEqual(st.tensions, (0.0, 0.0))

    def test_symmetric_cocontraction(self):
        for a in (0.1, 0.5, 1.5):
            self.assertEqual(vsa.forward(self.params, a, a).theta, 0.0)

    def test_oracle_example(self):
        st = vsa.forward(self.params, 0.8, 0.4, 50.0)
        th, s = vsa.equilibrium_oracle(self.params, 0.8, 0.4, 50.0)
        self.assertLess(abs(st.theta - th), 1e-9)
        self.assertRelativelyEqual(st.stiffness, s, 1e-3)

    def test_oracle_campaign(self):
        self.test_name = 'Oracle equivalence'
        self.trial_count = 1000
        sigma_max = 2.0 * self.params.delta_x_max / self.params.r_m
        done = 0
        while done < self.trial_count:
            sigma = self.rng.uniform(0.0, sigma_max)
            delta = self.rng.uniform(-sigma, sigma)
            tau = self.rng.uniform(-100.0, 100.0)
            alpha, beta = 0.5 * (sigma + delta), 0.5 * (sigma - delta)
            if not vsa.is_admissible(self.params, alpha, beta, tau):
                continue
            done += 1
            self.update_progress(done)

            st = vsa.forward(self.params, alpha, beta, tau)
            th, s = vsa.equilibrium_oracle(self.params, alpha, beta, tau)
            self.assertLess(abs(st.theta - th), 1e-9, 'alpha={} beta={} tau={}'.format(alpha, beta, tau))
            self.assertRelativelyEqual(st.stiffness, s, 1e-3)

    def test_slack_and_overtravel(self):
        self.assertRaises(SlackTendonError, vsa.forward, self.params, 0.0, 0.0, 50.0)
        self.assertRaises(OverTravelError, vsa.forward, self.params, 2.5, 2.5)
        self.assertFalse(vsa.is_admissible(self.params, 2.5, 2.5))

    def test_non_strict(self):
        st = vsa.forward(self.params, 2.5, 2.5, strict=False)
        self.assertEqual(st.theta, 0.0)

    def test_load_sag(self):
        th = [vsa.forward(self.params, 1.0, 1.0, tau).theta for tau in (-50.0, 0.0, 50.0)]
        self.assertGreater(th[0], th[1])
        self.assertGreater(th[1], th[2])

    def test_cocontraction_monotonic(self):
        s = [vsa.forward(self.params, a, a).stiffness for a in np.linspace(0.0, 2.0, 21)]
        self.assertTrue(all(s1 > s0 for s0, s1 in zip(s[:-1], s[1:])))

    def test_tensions_nonnegative(self):
        for _i in range(200):
            alpha, beta = self.rng.uniform(0.0, 2.0, 2)
            if vsa.is_admissible(self.params, alpha, beta):
                st = vsa.forward(self.params, alpha, beta)
                self.assertGreaterEqual(min(st.tensions), 0.0)
                self.assertEqual(st.cocontraction, min(st.tensions))


class TestInverse(RandomSeededTestCase):

    def setUp(self):
        RandomSeededTestCase.setUp(self)
        self.params = default_params()

    def test_minimum_stiffness(self):
        alpha, beta = vsa.inverse(self.params, 0.0, 135.0)
        self.assertAlmostEqual(alpha, 0.0, places=12)
        self.assertAlmostEqual(beta, 0.0, places=12)

    def test_mid_stiffness(self):
        alpha, beta = vsa.inverse(self.params, 0.0, 340.0)
        self.assertAlmostEqual(alpha, 1.0, places=12)
        self.assertAlmostEqual(beta, 1.0, places=12)

    def test_loaded_round_trip(self):
        alpha, beta = vsa.inverse(self.params, 0.3, 340.0, 30.0)
        st = vsa.forward(self.params, alpha, beta, 30.0)
        self.assertLess(abs(st.theta - 0.3), 1e-9)
        self.assertLess(abs(st.stiffness - 340.0), 1e-9 * 340.0)

    def test_round_trip_grid(self):
        s_lo, s_hi = vsa.stiffness_range(self.params)
        count = 0
        for th in np.linspace(-math.pi/2, math.pi/2, 21):
            for s in np.linspace(s_lo, s_hi, 21):
                try:
                    alpha, beta = vsa.inverse(self.params, th, s)
                except PhysicsError:
                    continue
                st = vsa.forward(self.params, alpha, beta)
                self.assertLess(abs(st.theta - th), 1e-9)
                self.assertLess(abs(st.stiffness - s) / s, 1e-9)
                count += 1
        self.assertGreater(count, 100)

    def test_unreachable(self):
        self.assertRaises(UnreachableStiffnessError, vsa.inverse, self.params, 0.0, 100.0)
        self.assertRaises(UnreachableStiffnessError, vsa.inverse, self.params, 0.0, 600.0)

    def test_slack_solution(self):
        # No co-contraction at the minimum so any load slackens one side
        self.assertRaises(SlackTendonError, vsa.inverse, self.params, 0.0, 135.0, 30.0)

    def test_motor_limits(self):
        lim = (-1.0, 1.0)
        p = vsa.VsaParameters(self.params.coefficients, 10.0, 10.0, 2.0, 20.0, lim, lim)
        self.assertRaises(OverTravelError, vsa.inverse, p, 1.2, 200.0)


class TestRange(unittest.TestCase):

    def test_defaults(self):
        s_lo, s_hi = vsa.stiffness_range(default_params())
        self.assertAlmostEqual(s_lo, 135.0, places=9)
        self.assertLess(abs(s_hi - 545.0) / 545.0, 0.01)

    def test_linear_spring(self):
        p = vsa.VsaParameters((0.0, 0.675, 0.0), 10.0, 10.0, 2.0, 20.0)
        s_lo, s_hi = vsa.stiffness_range(p)
        self.assertEqual(s_lo, s_hi)

    def test_half_travel(self):
        p = default_params()
        half = vsa.VsaParameters(p.coefficients, p.r_j, p.r_m, p.spring_k, p.delta_x_max / 2.0)
        s_lo, s_hi = vsa.stiffness_range(p)
        h_lo, h_hi = vsa.stiffness_range(half)
        self.assertAlmostEqual(h_hi - h_lo, 0.5 * (s_hi - s_lo), places=9)


class TestSideTensions(unittest.TestCase):

    def test_slack_side(self):
        p = default_params()
        f1, f2 = vsa.side_tensions(p, 0.2, 0.2, 0.1)
        self.assertGreater(f1, 0.0)
        self.assertGreater(f2, f1)
        # Joint pushed past the flexion side take-up
        f1, f2 = vsa.side_tensions(p, 0.2, 0.2, 0.3)
        self.assertEqual(f1, 0.0)
        self.assertGreater(f2, 0.0)

    def test_oracle_equal_angles(self):
        th, s = vsa.equilibrium_oracle(default_params(), 0.7, 0.7)
        self.assertLess(abs(th), 1e-12)


if __name__ == '__main__':
    unittest.main()
