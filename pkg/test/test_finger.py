#!/usr/bin/python
# -*- coding: utf-8 -*-

import math
import unittest

import numpy as np

from vsahand.common import *
from vsahand import finger as fg
from vsahand import vsa
from vsahand.calibrate import calibrate, hand_stiffness
from vsahand.config import SimConfig
from vsahand.report import read_reference


class TestThresholds(unittest.TestCase):

    def setUp(self):
        self.spec = fg.FingerSpec.default()

    def test_activation(self):
        expect = [(2.0, 33.42), (36.0, 87.05), (90.0, 155.16)]
        for (start, limit), (es, el) in zip(fg.activation_thresholds(self.spec), expect):
            self.assertAlmostEqual(start, es, places=9)
            self.assertAlmostEqual(limit, el, places=2)

    def test_sequential_activation(self):
        th = fg.activation_thresholds(self.spec)
        # Each joint reaches its limit before the next one starts
        for (_s0, l0), (s1, _l1) in zip(th[:-1], th[1:]):
            self.assertLess(l0, s1)

    def test_extension_raises_thresholds(self):
        base = fg.activation_thresholds(self.spec)
        loaded = fg.activation_thresholds(self.spec, extension_tension=10.0)
        for (s0, _), (s1, _) in zip(base, loaded):
            self.assertGreater(s1, s0)

    def test_closing_time(self):
        self.assertAlmostEqual(fg.closing_time(self.spec, 20.0), 1.78, places=2)
        self.assertRaises(SpecError, fg.closing_time, self.spec, 0.0)

    def test_bad_spec(self):
        joints = fg.default_joints()
        joints[0] = joints[0]._replace(stiffness=300.0)
        self.assertRaises(SpecError, fg.FingerSpec, joints, (45.0, 25.0, 20.0))
        joints = fg.default_joints()
        joints[1] = joints[1]._replace(extension_moment_arm=9.0)
        self.assertRaises(SpecError, fg.FingerSpec, joints, (45.0, 25.0, 20.0))
        self.assertRaises(SpecError, fg.FingerSpec, fg.default_joints(), (45.0, 25.0))


class TestEquilibrium(unittest.TestCase):

    def setUp(self):
        self.spec = fg.FingerSpec.default()

    def test_below_threshold(self):
        st = fg.finger_equilibrium(self.spec, 1.0)
        self.assertEqual(st.joint_angles, (0.0, 0.0, 0.0))
        self.assertEqual(st.contact_flags, (False, False, False))

    def test_saturated(self):
        st = fg.finger_equilibrium(self.spec, 500.0)
        for q, lim in zip(st.joint_angles, self.spec.limits):
            self.assertEqual(q, lim)

    def test_mcp_only(self):
        st = fg.finger_equilibrium(self.spec, 12.0)
        self.assertAlmostEqual(st.joint_angles[0], 0.5, places=12)
        self.assertEqual(st.joint_angles[1:], (0.0, 0.0))

    def test_negative_tension(self):
        self.assertRaises(SpecError, fg.finger_equilibrium, self.spec, -1.0)

    def test_contact_freezes_joint(self):
        ob = fg.ContactConstraint(0, 0.5, 20.0)
        st = fg.finger_equilibrium(self.spec, 100.0, [ob])
        self.assertEqual(st.joint_angles[0], 0.5)
        self.assertTrue(st.contact_flags[0])
        self.assertEqual(st.joint_angles[1], self.spec.limits[1])
        # 100 N * 10 mm - 20 N*mm preload - 200 N*mm/rad * 0.5 rad over a 20 mm lever
        self.assertAlmostEqual(st.contact_forces[0], 44.0, places=9)

    def test_distal_contact_freezes_proximal(self):
        ob = fg.ContactConstraint(2, 0.2, 10.0)
        t_c = self.spec.joints[2].tension_for(0.2)
        st = fg.finger_equilibrium(self.spec, t_c + 30.0, [ob])
        self.assertEqual(st.joint_angles[2], 0.2)
        for i in range(2):
            self.assertEqual(st.joint_angles[i], self.spec.joints[i].angle_at(t_c))
        self.assertGreater(st.contact_forces[2], 0.0)


class TestTrajectory(unittest.TestCase):

    def setUp(self):
        self.spec = fg.FingerSpec.default()
        self.profile = np.linspace(0.0, 200.0, 2001)

    def test_event_log(self):
        _states, events = fg.closing_trajectory(self.spec, self.profile)
        labels = [e.label for e in events]
        self.assertEqual(labels, ['MCP_start', 'MCP_limit', 'PIP_start', 'PIP_limit', 'DIP_start', 'DIP_limit'])
        tensions = [e.tension for e in events]
        self.assertEqual(tensions, sorted(tensions))
        self.assertAlmostEqual(tensions[0], 2.0, places=12)
        self.assertAlmostEqual(tensions[4], 90.0, places=12)

    def test_contact_event(self):
        _states, events = fg.closing_trajectory(self.spec, self.profile, [fg.ContactConstraint(1, 0.4, 12.0)])
        labels = [e.label for e in events]
        self.assertIn('PIP_contact', labels)
        self.assertNotIn('PIP_limit', labels)

    def test_work_balance(self):
        states, _events = fg.closing_trajectory(self.spec, self.profile)
        wb = fg.work_balance(self.spec, states)
        self.assertGreater(wb.tendon_work, 0.0)
        self.assertLess(wb.residual, 0.005)

    def test_empty_trajectory(self):
        states, events = fg.closing_trajectory(self.spec, [])
        self.assertEqual((states, events), ([], []))
        self.assertEqual(fg.work_balance(self.spec, states).residual, 0.0)

    def test_excursion(self):
        self.assertAlmostEqual(fg.tendon_excursion(self.spec, (0.1, 0.2, 0.3)), 1.0 + 1.6 + 1.8, places=12)


class TestFingertipStiffness(unittest.TestCase):

    def setUp(self):
        self.config = SimConfig()
        self.spec = self.config.finger_spec()
        self.params = self.config.vsa_params()

    def test_levels(self):
        ref = read_reference()
        slopes = []
        for name, s in self.config.levels().items():
            k = hand_stiffness(self.config, self.spec, s)
            target = ref['stiffness_' + name].value
            self.assertLess(abs(k - target) / target, 0.30, name)
            slopes.append(k)
        self.assertEqual(slopes, sorted(slopes))
        self.assertAlmostEqual(slopes[0], 0.1018, places=4)

    def test_posture_invariance(self):
        s = self.config.level('intermediate')
        ks = [hand_stiffness(self.config, self.spec, s, (math.radians(d), 0.0, 0.0)) for d in (0, 30, 60)]
        spread = (max(ks) - min(ks)) / min(ks)
        self.assertLess(spread, 0.10)

    def test_singular_posture(self):
        state = vsa.forward(self.params, 1.0, 1.0)
        self.assertRaises(SingularPostureError, fg.fingertip_stiffness, self.spec, state, (0.0, 0.0, 0.0), \
            (1.0, 0.0))

    def test_posture_limits(self):
        state = vsa.forward(self.params, 1.0, 1.0)
        self.assertRaises(SpecError, fg.fingertip_stiffness, self.spec, state, (-0.1, 0.0, 0.0))

    def test_calibration_grid(self):
        res = calibrate(self.config, [1.0], [1.0])
        self.assertEqual(res.stiffness_scale, 1.0)
        self.assertEqual(res.stiffening_scale, 1.0)
        self.assertLess(res.worst_error, 0.30)
        self.assertEqual(len(res.slopes), 3)


if __name__ == '__main__':
    unittest.main()
