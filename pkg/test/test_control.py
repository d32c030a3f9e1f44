#!/usr/bin/python
# -*- coding: utf-8 -*-

import io
import math
import os
import shutil
import unittest

import numpy as np

from vsahand.common import *
from vsahand import control
from vsahand import vsa
from vsahand.config import SimConfig
from . import OutputDirTestCase


def _record(t, alpha_ref, alpha_act, theta=0.0, s=300.0, torques=(0.0, 0.0), speeds=(0.0, 0.0)):
    return control.TraceRecord(t, theta, theta, s, s, alpha_ref, alpha_act, alpha_ref, alpha_act, 0.0, 0.0, \
        False, torques, speeds)


class ControlTestCase(unittest.TestCase):

    def setUp(self):
        self.config = SimConfig()
        self.motor = self.config.motor_model()
        self.ctrl = self.config.controller_config()
        self.params = self.config.vsa_params()
        self.electrical = self.config.electrical_model()

    def run_scenario(self, sc):
        return control.run_scenario(self.motor, self.ctrl, self.params, sc, self.electrical)


class TestModels(unittest.TestCase):

    def test_defaults(self):
        motor = control.MotorModel()
        self.assertAlmostEqual(motor.inertia, 1.0, places=12)
        self.assertEqual(motor.max_tendon_speed(10.0), 20.0)
        ctrl = control.ControllerConfig()
        self.assertEqual(ctrl.kp, (20000.0, 20000.0))
        self.assertAlmostEqual(ctrl.dt, 0.002, places=15)

    def test_per_motor_gains(self):
        ctrl = control.ControllerConfig(kp=(1.0, 2.0))
        self.assertEqual(ctrl.kp, (1.0, 2.0))
        self.assertRaises(SpecError, control.ControllerConfig, kp=(1.0, 2.0, 3.0))
        self.assertRaises(SpecError, control.ControllerConfig, rate=0.0)
        self.assertRaises(SpecError, control.ControllerConfig, ki=-1.0)
        self.assertRaises(SpecError, control.MotorModel, max_speed=0.0)

    def test_power(self):
        el = control.ElectricalModel()
        motor = control.MotorModel()
        self.assertEqual(el.power(motor, 0.0, 1.0), 0.0)
        # 500 N*mm at the output is 1 A through 12 ohm
        self.assertAlmostEqual(el.power(motor, 500.0, 0.0), 12.0, places=12)
        # Braking power is not returned to the battery
        self.assertAlmostEqual(el.power(motor, 500.0, -1.0), 12.0, places=12)
        self.assertAlmostEqual(el.power(motor, 500.0, 1.0), 12.5, places=12)


class TestReferences(unittest.TestCase):

    def test_sinusoid(self):
        r = control.ReferenceTrajectory('sinusoid', 'theta', 2.0, 0.25, 1.0)
        self.assertAlmostEqual(r(1.0), 3.0, places=12)
        self.assertEqual(control.ReferenceTrajectory.constant(5.0)(123.0), 5.0)

    def test_step(self):
        r = control.ReferenceTrajectory('step', schedule=[(1.0, 2.0), (3.0, 4.0)], offset=-1.0)
        self.assertEqual([r(t) for t in (0.0, 1.0, 2.9, 3.0, 10.0)], [-1.0, 2.0, 2.0, 4.0, 4.0])

    def test_ramp(self):
        r = control.ReferenceTrajectory('ramp', 'stiffness', schedule=[(0.0, 100.0), (2.0, 300.0)])
        self.assertEqual([r(t) for t in (-1.0, 0.0, 1.0, 2.0, 5.0)], [100.0, 100.0, 200.0, 300.0, 300.0])

    def test_piecewise_local_time(self):
        sub = control.ReferenceTrajectory('ramp', schedule=[(0.0, 0.0), (1.0, 1.0)])
        r = control.ReferenceTrajectory('piecewise', schedule=[(0.0, control.ReferenceTrajectory.constant(7.0)), \
            (10.0, sub)])
        self.assertEqual(r(5.0), 7.0)
        self.assertAlmostEqual(r(10.5), 0.5, places=12)

    def test_bad_references(self):
        self.assertRaises(SpecError, control.ReferenceTrajectory, 'square')
        self.assertRaises(SpecError, control.ReferenceTrajectory, 'sinusoid', 'torque')
        self.assertRaises(SpecError, control.ReferenceTrajectory, 'step')
        self.assertRaises(SpecError, control.ReferenceTrajectory, 'ramp', schedule=[(1.0, 0.0), (0.5, 1.0)])


class TestTracking(ControlTestCase):

    def test_constant_reference(self):
        theta = control.ReferenceTrajectory.constant(0.2)
        s = control.ReferenceTrajectory.constant(300.0, 'stiffness')
        trace = control.run_tracking(self.motor, self.ctrl, self.params, theta, s, duration=1.0)
        self.assertEqual(len(trace), 501)
        for r in trace:
            self.assertLess(abs(r.alpha_act - r.alpha_ref), 1e-9)
            self.assertLess(abs(r.beta_act - r.beta_ref), 1e-9)
            self.assertLess(abs(r.theta_est - 0.2), 1e-9)
        m = control.tracking_metrics(trace)
        self.assertLess(m['rms_error_motor_pct'], 1e-6)
        self.assertEqual(m['saturation_fraction'], 0.0)

    def test_zero_duration(self):
        theta = control.ReferenceTrajectory.constant(0.0)
        s = control.ReferenceTrajectory.constant(300.0, 'stiffness')
        trace = control.run_tracking(self.motor, self.ctrl, self.params, theta, s, duration=0.0)
        self.assertEqual(len(trace), 1)
        self.assertEqual(control.energy_estimate(trace, self.motor, self.electrical), 0.0)
        self.assertRaises(SpecError, control.run_tracking, self.motor, self.ctrl, self.params, theta, s, \
            duration=-1.0)

    def test_position_sinusoid(self):
        sc = control.position_sinusoid_scenario(self.config.level('intermediate'), ((math.pi/2, 8.0),), 0.125)
        m = control.tracking_metrics(self.run_scenario(sc))
        self.assertLess(m['rms_error_motor_pct'], 1.0)

    def test_stiffness_sinusoid(self):
        sc = control.stiffness_sinusoid_scenario(self.config.level('intermediate'), self.config.level('high'), \
            0.1, 10.0)
        m = control.tracking_metrics(self.run_scenario(sc))
        self.assertLess(m['rms_error_motor_pct'], 1.0)

    def test_stepped_position(self):
        sc = control.stepped_position_scenario(self.config.level('intermediate'), self.config.level('high'), \
            0.1, math.radians(5), 5.0, math.radians(10), 15.0)
        trace = self.run_scenario(sc)
        m = control.tracking_metrics(trace)
        self.assertLess(m['rms_error_motor_pct'], 1.0)
        # Steps briefly saturate the motors
        self.assertGreater(m['saturation_fraction'], 0.0)

    def test_infeasible_reference(self):
        theta = control.ReferenceTrajectory.constant(0.0)
        s = control.ReferenceTrajectory('ramp', 'stiffness', schedule=[(0.0, 300.0), (1.0, 1000.0)])
        with self.assertRaises(InfeasibleReferenceError) as cm:
            control.run_tracking(self.motor, self.ctrl, self.params, theta, s, duration=1.0)
        s_hi = vsa.stiffness_range(self.params)[1]
        t_limit = (s_hi - 300.0) / 700.0
        self.assertGreater(cm.exception.time, t_limit - 1e-9)
        self.assertLess(cm.exception.time, t_limit + 2.0 * self.ctrl.dt)

    def test_deterministic(self):
        sc = control.stiffness_sinusoid_scenario(self.config.level('low'), self.config.level('high'), 0.5, 2.0)
        self.assertEqual(self.run_scenario(sc), self.run_scenario(sc))

    def test_contact_stop(self):
        sc = control.grasp_energy_scenario('grasp', self.config.level('low'), self.config.level('high'), 0.5, \
            0.2, ramp_time=0.5, close_time=0.5, hold_time=1.0, release_time=0.5)
        trace = self.run_scenario(sc)
        holding = [r for r in trace if 1.2 <= r.t <= 2.0]
        self.assertTrue(holding)
        for r in holding:
            self.assertGreater(r.tau_load, 0.0)
        self.assertGreater(control.energy_estimate(trace, self.motor, self.electrical), 0.0)


class TestMetrics(unittest.TestCase):

    def test_perfect(self):
        trace = [_record(0.01 * i, 0.1 * i, 0.1 * i) for i in range(11)]
        m = control.tracking_metrics(trace)
        self.assertEqual(list(m.keys()), ['rms_error_motor_pct', 'rms_error_theta_pct', 'rms_error_stiffness_pct', \
            'saturation_fraction'])
        self.assertEqual(m['rms_error_motor_pct'], 0.0)

    def test_offset(self):
        delta = 0.02
        trace = [_record(0.01 * i, 0.1 * i, 0.1 * i + delta) for i in range(11)]
        m = control.tracking_metrics(trace)
        self.assertAlmostEqual(m['rms_error_motor_pct'], 100.0 * delta / 1.0, places=9)
        m = control.tracking_metrics(trace, {'motor': 2.0})
        self.assertAlmostEqual(m['rms_error_motor_pct'], 100.0 * delta / 2.0, places=9)

    def test_constant_reference_normalisation(self):
        trace = [_record(0.01 * i, 0.5, 0.51) for i in range(5)]
        self.assertAlmostEqual(control.tracking_metrics(trace)['rms_error_motor_pct'], 2.0, places=9)
        trace = [_record(0.01 * i, 0.0, 0.01) for i in range(5)]
        self.assertAlmostEqual(control.tracking_metrics(trace)['rms_error_motor_pct'], 1.0, places=9)

    def test_empty(self):
        self.assertRaises(SpecError, control.tracking_metrics, [])


class TestEnergy(ControlTestCase):

    def test_idle(self):
        trace = [_record(0.1 * i, 0.0, 0.0) for i in range(10)]
        self.assertEqual(control.energy_estimate(trace, self.motor, self.electrical), 0.0)

    def test_constant_power(self):
        # 12 W for 3.6 s is 12 mWh
        trace = [_record(0.1 * i, 0.0, 0.0, torques=(500.0, 0.0)) for i in range(37)]
        self.assertAlmostEqual(control.energy_estimate(trace, self.motor, self.electrical), 12.0, places=9)

    def test_holding_order(self):
        low = control.holding_energy(self.params, self.motor, self.electrical, self.config.level('low'), 40.0, 30.0)
        high = control.holding_energy(self.params, self.motor, self.electrical, self.config.level('high'), 40.0, \
            30.0)
        self.assertGreater(low, 0.0)
        self.assertGreater(high, low)

    def test_battery(self):
        self.assertAlmostEqual(control.battery_grasp_count(81.0, 1500.0, 6.4), 118.5, places=1)
        self.assertLess(abs(control.battery_grasp_count(81.0, 1500.0, 6.4) - 120.0) / 120.0, 0.15)
        self.assertRaises(SpecError, control.battery_grasp_count, 0.0, 1500.0, 6.4)


GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')
RECORD_VAR = 'VSAHAND_RECORD_GOLDEN'


class TestGoldenTrace(OutputDirTestCase):
    '''Short stepped run compared byte for byte with the recorded trace

    The trace is recorded into test/golden when it is missing or when
    VSAHAND_RECORD_GOLDEN is set; audit and commit the file after recording.
    '''

    def setUp(self):
        OutputDirTestCase.setUp(self)
        self.config = SimConfig()

    def test_stepped_trace(self):
        cfg = self.config
        sc = control.stepped_position_scenario(cfg.level('intermediate'), cfg.level('high'), 0.1, \
            math.radians(5), 0.2, math.radians(15), 0.6)
        trace = control.run_scenario(cfg.motor_model(), cfg.controller_config(), cfg.vsa_params(), sc, \
            cfg.electrical_model())
        self.assertEqual(len(trace), 301)

        fname = os.path.join(self.out_dir, 'track_stepped.csv')
        control.write_trace_csv(trace, fname)
        with io.open(fname, 'rb') as fh:
            data = fh.read()

        golden = os.path.join(GOLDEN_DIR, 'track_stepped.csv')
        if os.environ.get(RECORD_VAR) or not os.path.exists(golden):
            if not os.path.isdir(GOLDEN_DIR):
                os.makedirs(GOLDEN_DIR)
            shutil.copyfile(fname, golden)
            self.skipTest('Recorded golden trace {}'.format(golden))

        with io.open(golden, 'rb') as fh:
            expected = fh.read()
        self.assertEqual(data.splitlines()[0], expected.splitlines()[0])
        self.assertEqual(len(data.splitlines()), len(expected.splitlines()))
        self.assertTrue(data == expected, 'Trace differs from {}'.format(golden))


if __name__ == '__main__':
    unittest.main()
