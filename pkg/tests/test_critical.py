"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Unit tests for critical exponent estimation in `gdn.critical`.
"""

import unittest

import numpy as np

from gdn import constructions
from gdn import critical
from gdn import errors
from gdn import models
from tests import helpers


class TestEstimateCe(unittest.TestCase):
    """
    Tests the certified critical exponent bracket.
    """

    @classmethod
    def setUpClass(cls):
        cls.profile, cls.epm = critical.profile_matrix(helpers.CYCLE3)

    def test_cycle(self):
        """
        The 3-by-3 cycle construction reaches the bound k(3) = 2.
        """
        self.assertAlmostEqual(self.profile.critical_exponent, 2.0, delta=1e-5)
        lo, hi = self.profile.bracket
        self.assertLessEqual(lo, hi)
        self.assertLessEqual(hi - lo, 2e-6)
        self.assertEqual(self.profile.upper_bound, 2)
        self.assertEqual(self.profile.falsifications, [])
        self.assertEqual(self.profile.cap_violations, [])

    def test_witness(self):
        """
        The last diagonal entry is the one negative up to α = 2.
        """
        intervals = self.profile.entry_intervals(2, 2)
        self.assertAlmostEqual(intervals[-1].start, 1.0, delta=1e-5)
        self.assertAlmostEqual(intervals[-1].end, 2.0, delta=1e-5)
        i, j = self.profile.witness
        self.assertAlmostEqual(self.profile.entry_intervals(i, j)[-1].end, self.profile.critical_exponent)

    def test_window(self):
        """
        The search window runs from the floor to k(n) + 1.
        """
        self.assertEqual(self.profile.window, [1e-9, 3.0])
        self.assertTrue(self.profile.invertible)

    def test_root_counts(self):
        """
        Every entry has a root count and none crosses more often than it changes sign.
        """
        self.assertEqual(len(self.profile.root_counts), 9)
        for i in range(3):
            for j in range(3):
                counts = self.profile.root_counts[models.entry_key(i, j)]
                self.assertLessEqual(counts["crossing"], self.profile.sign_changes[i, j])

    def test_nonnegative_powers(self):
        """
        Matrices whose powers stay nonnegative have critical exponent 0.
        """
        for matrix in (np.diag([3.0, 1.0]), helpers.SYMMETRIC):
            profile = critical.estimate_ce(matrix)
            self.assertIsNone(profile.bracket)
            self.assertEqual(profile.critical_exponent, 0.0)
            self.assertEqual(profile.intervals, {})

    def test_not_gdn(self):
        """
        A matrix that is not GDN is rejected.
        """
        with self.assertRaises(errors.NotGdn):
            critical.estimate_ce(helpers.SWAP)

    def test_workers(self):
        """
        Threaded isolation gives the same bracket.
        """
        profile = critical.estimate_ce(helpers.CYCLE3, workers=2)
        self.assertEqual(profile.bracket, self.profile.bracket)
        self.assertEqual(profile.witness, self.profile.witness)

    def test_serializable(self):
        """
        The profile survives an encode and decode.
        """
        decoded = models.decode(models.encode(self.profile))
        self.assertIsInstance(decoded, models.NegativityProfile)
        self.assertEqual(decoded.witness, self.profile.witness)


class TestPublishedExamples(unittest.TestCase):
    """
    Tests the brackets of the published critical exponent examples.
    """

    @classmethod
    def setUpClass(cls):
        cls.profiles = {name: critical.estimate_ce(constructions.paper_matrix(name)) for name in ("ce4", "ce5", "ce6")}

    def test_brackets(self):
        """
        The brackets of ce4, ce5 and ce6 lie in (3.99, 4], (5.99, 6] and (6.99, 7].
        """
        for name, profile in self.profiles.items():
            lo, hi = constructions.PAPER_EXPECTATIONS[name]["ce_range"]
            start, end = profile.bracket
            self.assertLess(lo, start, name)
            self.assertLessEqual(end, hi, name)
            self.assertLessEqual(end - start, 1e-6 + 1e-12, name)

    def test_sound(self):
        """
        No entry exceeds its root or component bounds.
        """
        for name, profile in self.profiles.items():
            self.assertEqual(profile.falsifications, [], name)
            self.assertEqual(profile.cap_violations, [], name)
            self.assertTrue(all(interval.end <= profile.upper_bound + 1e-6
                                for intervals in profile.intervals.values() for interval in intervals), name)


class TestInvariance(unittest.TestCase):
    """
    Tests that the critical exponent ignores transposition and scaling.
    """

    def test_transpose(self):
        """
        A and its transpose have the same critical exponent.
        """
        for matrix in (np.array(helpers.CYCLE3), constructions.paper_matrix("ce4")):
            self.assertAlmostEqual(critical.estimate_ce(matrix.T).critical_exponent,
                                   critical.estimate_ce(matrix).critical_exponent, delta=2e-6)

    def test_scaling(self):
        """
        A and cA have the same critical exponent for c > 0.
        """
        for matrix in (np.array(helpers.CYCLE3), constructions.paper_matrix("ce4")):
            expected = critical.estimate_ce(matrix).critical_exponent
            for factor in (0.01, 37.0):
                self.assertAlmostEqual(critical.estimate_ce(factor * matrix).critical_exponent, expected, delta=2e-6)


class TestChecks(unittest.TestCase):
    """
    Tests the column escape check, the sampling oracle and soundness.
    """

    @classmethod
    def setUpClass(cls):
        cls.profile, cls.epm = critical.profile_matrix(helpers.CYCLE3)

    def test_column_escape(self):
        """
        Every column of the cycle construction escapes negativity for good.
        """
        report = critical.check_column_escape(self.profile)
        self.assertTrue(report.clean)
        self.assertEqual(len(report.columns), 3)
        self.assertEqual(report.last_negative_window, 1)
        self.assertEqual(report.columns[2]["clean_from"], 2)

    def test_column_escape_violation(self):
        """
        A column negative beyond 1 but never below 1 is reported.
        """
        profile = models.NegativityProfile(n=1, window=[1e-9, 3.0], intervals={
            "0,0": [models.NegativityInterval(start=1.5, end=1.8)],
        })
        report = critical.check_column_escape(profile)
        self.assertFalse(report.clean)
        self.assertIn({"column": 0, "kind": "no_component_below_one"}, report.violations)

    def test_sampling_oracle(self):
        """
        The dense-sampling oracle agrees with the certified intervals.
        """
        discrepancy = critical.sampling_discrepancy(self.profile, self.epm, step=1e-3)
        self.assertEqual(discrepancy["missed"], [])
        self.assertLessEqual(discrepancy["max_endpoint_error"], 2e-3)

    def test_require_sound(self):
        """
        A clean profile is returned as is.
        """
        self.assertIs(critical.require_sound(self.profile), self.profile)

    def test_require_sound_raises(self):
        """
        A profile with a falsification raises with the profile attached.
        """
        profile = models.NegativityProfile(n=3, falsifications=[{"kind": "theorem_upper_bound"}])
        with self.assertRaises(errors.FalsificationFound) as context:
            critical.require_sound(profile)
        self.assertIs(context.exception.report, profile)
