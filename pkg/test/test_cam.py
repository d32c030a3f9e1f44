#!/usr/bin/python
# -*- coding: utf-8 -*-

import io
import math
import os
import unittest

import numpy as np

from vsahand.common import *
from vsahand import cam
from vsahand import vsa
from . import RandomSeededTestCase, OutputDirTestCase


def default_targets():
    return cam.StiffnessTargets(135.0, 545.0, 10.0, 20.0, 2.0)


class TestCoefficients(RandomSeededTestCase):

    def test_default_coefficients(self):
        c = cam.derive_coefficients(default_targets())
        self.assertAlmostEqual(c.a, 0.05125, places=12)
        self.assertAlmostEqual(c.b, 0.675, places=12)
        self.assertAlmostEqual(c.c, -15.889, places=3)

    def test_r_j_scaling(self):
        c1 = cam.derive_coefficients(default_targets())
        c2 = cam.derive_coefficients(cam.StiffnessTargets(135.0, 545.0, 20.0, 20.0, 2.0))
        for v1, v2 in zip(c1, c2):
            self.assertAlmostEqual(v2, v1 / 4.0, places=12)

    def test_near_linear_limit(self):
        c = cam.derive_coefficients(cam.StiffnessTargets(135.0, 135.0 + 1e-6, 10.0, 20.0, 2.0))
        self.assertLess(c.a, 1e-9)

    def test_invalid_targets(self):
        self.assertRaises(SpecError, cam.StiffnessTargets, 545.0, 135.0, 10.0, 20.0, 2.0)
        self.assertRaises(SpecError, cam.StiffnessTargets, 135.0, 135.0, 10.0, 20.0, 2.0)
        self.assertRaises(SpecError, cam.StiffnessTargets, 135.0, 545.0, 0.0, 20.0, 2.0)
        self.assertRaises(SpecError, cam.StiffnessTargets, 135.0, 545.0, 10.0, -1.0, 2.0)

    def test_stiffness_endpoints(self):
        # Coefficients fed back through the actuator map give the targets
        t = default_targets()
        params = vsa.VsaParameters.from_targets(t, 10.0)
        s_lo, s_hi = vsa.stiffness_range(params)
        self.assertRelativelyEqual(s_lo, t.s_min, 1e-9)
        self.assertRelativelyEqual(s_hi, t.s_max, 1e-9)

        self.test_name = 'Random targets'
        self.trial_count = 50
        for i in range(self.trial_count):
            self.update_progress(i+1)
            s_min = self.rng.uniform(50.0, 300.0)
            s_max = s_min * self.rng.uniform(1.1, 5.0)
            t = cam.StiffnessTargets(s_min, s_max, self.rng.uniform(5.0, 15.0), self.rng.uniform(5.0, 30.0), 2.0)
            params = vsa.VsaParameters.from_targets(t, 10.0)
            s_lo, s_hi = vsa.stiffness_range(params)
            self.assertRelativelyEqual(s_lo, s_min, 1e-9)
            self.assertRelativelyEqual(s_hi, s_max, 1e-9)


class TestContour(unittest.TestCase):

    def setUp(self):
        self.coeffs = cam.derive_coefficients(default_targets())

    def test_origin(self):
        self.assertEqual(cam.contour_y(self.coeffs, 2.0, 0.0), 0.0)

    def test_infeasible_near_origin(self):
        self.assertIsNone(cam.contour_y(self.coeffs, 2.0, 5.0))

    def test_spring_scaling(self):
        x = 30.0
        y1 = cam.contour_y(self.coeffs, 2.0, x)
        y2 = cam.contour_y(self.coeffs, 8.0, x)
        self.assertAlmostEqual(y2, y1 / 2.0, places=12)

    def test_bad_spring(self):
        self.assertRaises(SpecError, cam.contour_y, self.coeffs, 0.0, 1.0)


class TestSynthesis(unittest.TestCase):

    def test_domain(self):
        p = cam.synthesize_profile(default_targets())
        self.assertGreater(p.x_lo, 0.0)
        self.assertAlmostEqual(p.x_hi - p.x_lo, 20.0, places=12)
        self.assertAlmostEqual(p.x_lo, 22.18, places=2)
        self.assertEqual(p.metadata()['x_lo_mm'], p.x_lo)
        self.assertEqual(p.y[0], 0.0)
        self.assertTrue(np.all(p.radicand() >= 0.0))

    def test_sample_count_independent(self):
        p16 = cam.synthesize_profile(default_targets(), 16)
        p1024 = cam.synthesize_profile(default_targets(), 1024)
        self.assertEqual(len(p16), 16)
        self.assertEqual(len(p1024), 1024)
        self.assertLess(abs(p16.x_lo - p1024.x_lo), 1e-9)

    def test_too_few_samples(self):
        self.assertRaises(SpecError, cam.synthesize_profile, default_targets(), 15)

    def test_nonnegative_c(self):
        # s_max^2 < 2*s_min^2
        t = cam.StiffnessTargets(135.0, 180.0, 10.0, 20.0, 2.0)
        self.assertGreaterEqual(cam.derive_coefficients(t).c, 0.0)
        p = cam.synthesize_profile(t)
        self.assertEqual(p.x_lo, 0.0)
        self.assertTrue(cam.validate_profile(p).passed)


class TestValidation(unittest.TestCase):

    def setUp(self):
        self.profile = cam.synthesize_profile(default_targets())

    def test_fresh_profile_passes(self):
        rep = cam.validate_profile(self.profile)
        self.assertTrue(rep.passed, rep.format())
        self.assertLess(rep['virtual_work'].max_residual, 0.005)

    def test_perturbed_sample(self):
        p = self.profile
        y = p.y.copy()
        y[100] += 0.1
        bad = cam.CamProfile(p.coefficients, p.spring_k, p.domain, p.x, y, p.targets)
        rep = cam.validate_profile(bad)
        self.assertFalse(rep['contour'].passed)
        self.assertEqual(rep['contour'].worst_index, 100)
        self.assertFalse(rep.passed)

    def test_truncated_below_start(self):
        p = self.profile
        x = np.linspace(p.x_lo - 2.0, p.x_hi, len(p))
        rad = cam.radicand(p.coefficients, p.spring_k, x)
        y = np.sqrt(np.maximum(rad, 0.0))
        bad = cam.CamProfile(p.coefficients, p.spring_k, (x[0], x[-1]), x, y, p.targets)
        self.assertFalse(cam.validate_profile(bad)['radicand'].passed)

    def test_unknown_check(self):
        rep = cam.validate_profile(self.profile)
        self.assertRaises(KeyError, rep.__getitem__, 'nonesuch')


class TestProfileFiles(OutputDirTestCase):

    def test_csv_and_metadata(self):
        p = cam.synthesize_profile(default_targets(), 64)
        csv_file = os.path.join(self.out_dir, 'cam.csv')
        meta_file = os.path.join(self.out_dir, 'cam.meta')
        p.write_csv_file(csv_file)
        p.write_metadata_file(meta_file)

        with io.open(csv_file, encoding='utf-8') as fh:
            lines = fh.read().splitlines()
        self.assertEqual(lines[0], 'x_mm,y_mm,radicand,F_app_N')
        self.assertEqual(len(lines), 65)

        with io.open(meta_file, encoding='utf-8') as fh:
            keys = [l.split('=')[0] for l in fh.read().splitlines()]
        for k in ('a_N_mm2', 'b_N_mm', 'c_N', 'x_lo_mm', 'x_hi_mm', 'samples'):
            self.assertIn(k, keys)


if __name__ == '__main__':
    unittest.main()
