#!/usr/bin/python
# -*- coding: utf-8 -*-

import math
import unittest

import numpy as np

from vsahand.common import *
from vsahand import transmission as tx
from . import RandomSeededTestCase


class TestTension(unittest.TestCase):

    def test_equal_split(self):
        split = tx.distribute_tension(tx.PulleyTree(), 100.0)
        self.assertEqual(list(split), [25.0, 25.0, 25.0, 25.0])

    def test_zero(self):
        self.assertEqual(list(tx.distribute_tension(tx.PulleyTree(), 0.0)), [0.0] * 4)

    def test_efficiency(self):
        split = tx.distribute_tension(tx.PulleyTree(efficiency=0.95), 100.0)
        for t in split:
            self.assertAlmostEqual(t, 22.5625, places=12)

    def test_blocked_share(self):
        split = tx.distribute_tension(tx.PulleyTree(), 100.0, [True, False, False, False])
        self.assertEqual(split[0], 25.0)

    def test_negative(self):
        self.assertRaises(SpecError, tx.distribute_tension, tx.PulleyTree(), -1.0)

    def test_bad_tree(self):
        self.assertRaises(SpecError, tx.PulleyTree, 0)
        self.assertRaises(SpecError, tx.PulleyTree, 2, None, 1.5)
        self.assertRaises(SpecError, tx.PulleyTree, 2, [10.0])


class TestDisplacement(RandomSeededTestCase):

    def setUp(self):
        RandomSeededTestCase.setUp(self)
        self.tree = tx.PulleyTree()

    def test_equal_resistance(self):
        disp = tx.distribute_displacement(self.tree, 8.0, [2.0] * 4)
        for d in disp:
            self.assertAlmostEqual(d, 8.0, places=12)

    def test_blocked_output(self):
        disp = tx.distribute_displacement(self.tree, 6.0, [float('inf'), 2.0, 2.0, 2.0])
        self.assertEqual(disp[0], 0.0)
        for d in disp[1:]:
            self.assertAlmostEqual(d, 8.0, places=12)

    def test_large_finite_block(self):
        disp = tx.distribute_displacement(self.tree, 6.0, [tx.BLOCKED_RESISTANCE, 2.0, 2.0, 2.0])
        self.assertLess(disp[0], 1e-4)

    def test_zero_input(self):
        self.assertEqual(list(tx.distribute_displacement(self.tree, 0.0, [1.0, 2.0, 3.0, 4.0])), [0.0] * 4)

    def test_singular(self):
        self.assertRaises(SingularSystemError, tx.distribute_displacement, self.tree, 1.0, [0.0] * 4)
        self.assertRaises(SingularSystemError, tx.distribute_displacement, self.tree, 1.0, [float('inf')] * 4)

    def test_constraint_and_monotonicity(self):
        self.test_name = 'Displacement split'
        self.trial_count = 200
        for i in range(self.trial_count):
            self.update_progress(i+1)
            u = self.rng.uniform(0.1, 20.0)
            k = self.rng.uniform(0.1, 10.0, 4)
            disp = tx.distribute_displacement(self.tree, u, k)
            self.assertLess(abs(disp.mean() - u), 1e-12 * max(1.0, u) * 10)

            # Equal tension across outputs
            tensions = disp * k
            self.assertLess(np.ptp(tensions), 1e-9 * tensions.max())

            stiffer = k.copy()
            stiffer[0] *= 2.0
            self.assertLessEqual(tx.distribute_displacement(self.tree, u, stiffer)[0], disp[0])


class TestBowden(unittest.TestCase):

    def test_ideal(self):
        r = tx.bowden_transfer(tx.BowdenStage(1.0, 1.0), 5.0, 20.0)
        self.assertEqual((r.disp, r.tension, r.in_slack), (5.0, 20.0, False))

    def test_dead_zone(self):
        r = tx.bowden_transfer(tx.BowdenStage(1.0, 1.0, slack=1.0), 0.5, 0.0)
        self.assertEqual(r.disp, 0.0)
        self.assertTrue(r.in_slack)

    def test_compliance(self):
        r = tx.bowden_transfer(tx.BowdenStage(0.9, 0.8, compliance=0.01), 10.0, 100.0)
        self.assertAlmostEqual(r.disp, 9.0, places=12)
        self.assertAlmostEqual(r.tension, 90.0, places=12)
        r = tx.bowden_transfer(tx.BowdenStage(0.9, 0.8), 10.0, 100.0, 'return')
        self.assertAlmostEqual(r.tension, 80.0, places=12)

    def test_capstan(self):
        st = tx.BowdenStage.from_capstan(0.1, math.pi)
        self.assertAlmostEqual(st.efficiency('forward'), math.exp(-0.1 * math.pi), places=12)
        self.assertEqual(st.efficiency('forward'), st.efficiency('return'))

    def test_bad_stage(self):
        self.assertRaises(SpecError, tx.BowdenStage, 0.0)
        self.assertRaises(SpecError, tx.BowdenStage, 0.9, 0.9, -1.0)
        self.assertRaises(SpecError, tx.BowdenStage(1.0, 1.0).efficiency, 'sideways')


class TestRouting(RandomSeededTestCase):

    def test_cocontraction(self):
        st = tx.antagonistic_routing(3.0, 3.0, (10.0, 10.0))
        self.assertEqual(st.finger_excursion, 0.0)
        self.assertEqual(st.cocontraction_stretch, 3.0)

    def test_pure_flexion(self):
        st = tx.antagonistic_routing(4.0, -4.0, (10.0, 0.0))
        self.assertEqual(st.finger_excursion, 4.0)
        self.assertEqual(st.length_residual, 0.0)

    def test_random_conservation(self):
        for _i in range(500):
            f = self.rng.uniform(-10.0, 10.0)
            e = self.rng.uniform(-f, 10.0 + abs(f))
            st = tx.antagonistic_routing(f, e, (1.0, 1.0))
            self.assertLess(abs(st.length_residual), 1e-12)
            self.assertAlmostEqual(st.finger_excursion - st.cocontraction_stretch, -e, places=12)

    def test_measured_excursion_mismatch(self):
        st = tx.antagonistic_routing(6.0, -2.0, (10.0, 0.0), finger_excursion=4.0)
        self.assertEqual(st.length_residual, 0.0)
        # The fingers moved 0.5 mm less than the cable take-up allows
        st = tx.antagonistic_routing(6.0, -2.0, (10.0, 0.0), finger_excursion=3.5)
        self.assertAlmostEqual(abs(st.length_residual), 0.5, places=12)
        st = tx.antagonistic_routing(6.0, 0.0, (10.0, 0.0), mode='unidirectional', finger_excursion=5.0)
        self.assertAlmostEqual(st.length_residual, 1.0, places=12)

    def test_slack_loop(self):
        self.assertRaises(SlackTendonError, tx.antagonistic_routing, -2.0, -1.0, (1.0, 1.0))
        self.assertRaises(SlackTendonError, tx.antagonistic_routing, 3.0, -5.0, (1.0, 1.0))

    def test_limit(self):
        self.assertRaises(CoContractionLimitError, tx.antagonistic_routing, 25.0, 25.0, (1.0, 1.0), 20.0)

    def test_unidirectional(self):
        st = tx.antagonistic_routing(5.0, 0.0, (12.0, 3.0), mode='unidirectional')
        self.assertEqual(st.extension_tension, 0.0)
        self.assertEqual(st.finger_excursion, 5.0)
        self.assertRaises(SpecError, tx.antagonistic_routing, 1.0, 1.0, (1.0, 1.0), mode='diagonal')


if __name__ == '__main__':
    unittest.main()
