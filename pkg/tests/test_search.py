"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Unit tests for the extremal matrix search in `gdn.search`.
"""

import json
import tempfile
import unittest
import unittest.mock

import numpy as np

from gdn import constants
from gdn import errors
from gdn import models
from gdn import primitivity
from gdn import sampling
from gdn import search
from tests import helpers


class TestConfig(unittest.TestCase):
    """
    Tests search configuration parsing and validation.
    """

    def test_defaults(self):
        """
        Missing fields take their defaults.
        """
        config = search.config_from_dict({"n": 4})
        self.assertEqual(config.n, 4)
        self.assertEqual(config.target, constants.TARGET_MAX_CE)
        self.assertEqual(config.restarts, constants.DEFAULT_RESTARTS)

    def test_invalid(self):
        """
        Bad targets, budgets, ranges and pattern shapes are rejected.
        """
        for data in ({"target": "max_index"}, {"budget": 0}, {"entry_range": [0, 10]},
                     {"n": 3, "pattern": [[1, 1], [1, 1]]}, {"colour": "blue"}):
            with self.assertRaises(errors.PreconditionViolated, msg=str(data)):
                search.config_from_dict(data)

    def test_not_an_object(self):
        """
        The configuration must be a JSON object.
        """
        with self.assertRaises(errors.MatrixFormatError):
            search.config_from_dict([1, 2])

    def test_load(self):
        """
        Configurations are read from JSON files.
        """
        with tempfile.TemporaryDirectory() as directory:
            path = helpers.write_file(directory, "search.json", json.dumps({"n": 5, "seed": 7}))
            config = search.load_config(path)
            self.assertEqual((config.n, config.seed), (5, 7))
            bad = helpers.write_file(directory, "bad.json", "{n: 5")
            with self.assertRaises(errors.MatrixFormatError):
                search.load_config(bad)


class TestSeedPatterns(unittest.TestCase):
    """
    Tests the patterns restarts start from.
    """

    def test_order_three(self):
        """
        For n = 3 two of the cycle patterns coincide.
        """
        patterns = search.seed_patterns(models.SearchConfig(n=3))
        self.assertEqual(patterns, [sampling.cycle_pattern(3), sampling.cycle_pattern(3, [0, 1])])

    def test_published_patterns(self):
        """
        For n = 4 the pattern of the published index example is added.
        """
        patterns = search.seed_patterns(models.SearchConfig(n=4))
        self.assertEqual(len(patterns), 4)
        self.assertEqual(patterns[-1].to_list(), [[0, 0, 1, 0], [0, 1, 1, 1], [0, 0, 0, 1], [1, 1, 0, 1]])

    def test_fixed(self):
        """
        A configured pattern is the only one used.
        """
        config = models.SearchConfig(n=2, pattern=[[1, 1], [0, 1]])
        self.assertEqual([pattern.to_list() for pattern in search.seed_patterns(config)], [[[1, 1], [0, 1]]])


class TestMoves(unittest.TestCase):
    """
    Tests the hill-climbing moves.
    """

    def setUp(self):
        self.matrix = np.array(helpers.CYCLE3)
        self.pattern = primitivity.BoolPattern.from_matrix(self.matrix)

    def test_pattern_preserving(self):
        """
        Perturbations and scalings keep the pattern.
        """
        for move in (constants.MOVE_PERTURB, constants.MOVE_ROW_SCALE, constants.MOVE_COLUMN_SCALE):
            neighbor = search.apply_move(self.matrix, move, sampling.rng_for(0), 0.25)
            self.assertEqual(primitivity.BoolPattern.from_matrix(neighbor), self.pattern, move)

    def test_diagonal_fill(self):
        """
        Filling the diagonal makes the zero diagonal entry positive.
        """
        neighbor = search.apply_move(self.matrix, constants.MOVE_DIAGONAL_FILL, sampling.rng_for(0), 0.25)
        self.assertGreater(neighbor[2, 2], 0.0)
        self.assertEqual(self.matrix[2, 2], 0.0)

    def test_unknown(self):
        """
        Unknown moves are rejected.
        """
        with self.assertRaises(errors.PreconditionViolated):
            search.apply_move(self.matrix, "swap", sampling.rng_for(0), 0.25)


class TestScoring(unittest.TestCase):
    """
    Tests candidate scoring.
    """

    def test_critical_exponent(self):
        """
        The cycle construction scores its critical exponent.
        """
        scored = search.score_candidate(np.array(helpers.CYCLE3), models.SearchConfig(n=3), models.ToleranceConfig())
        self.assertAlmostEqual(scored.score, 2.0, delta=1e-5)
        self.assertEqual(scored.index, 3)

    def test_not_gdn(self):
        """
        A candidate that is not GDN has no score.
        """
        self.assertIsNone(search.score_candidate(np.array(helpers.SWAP), models.SearchConfig(n=2),
                                                 models.ToleranceConfig()))

    def test_falsification(self):
        """
        An index above 2n − 3 for a positive spectrum is a falsification.
        """
        with unittest.mock.patch.object(primitivity, "index_of_primitivity", return_value=99):
            with self.assertRaises(errors.FalsificationFound):
                search.score_candidate(np.array(helpers.SYMMETRIC), models.SearchConfig(n=2),
                                       models.ToleranceConfig())


class TestSearch(unittest.TestCase):
    """
    Tests complete searches.
    """

    def test_order_three(self):
        """
        A short search on n = 3 reaches the bound k(3) = 2 and replays.
        """
        config = models.SearchConfig(n=3, seed=0, budget=40, restarts=2, patience=10)
        record = search.search(config)
        self.assertGreaterEqual(record.score, 1.99)
        self.assertLessEqual(record.score, 2.0 + 1e-6)
        self.assertTrue(all(search.revalidate(record).values()))
        self.assertEqual(record.config.seed, 0)

    def test_deterministic(self):
        """
        The same configuration gives the same record, with or without threads.
        """
        first = search.search(models.SearchConfig(n=3, seed=5, budget=30, restarts=3, patience=5))
        second = search.search(models.SearchConfig(n=3, seed=5, budget=30, restarts=3, patience=5))
        threaded = search.search(models.SearchConfig(n=3, seed=5, budget=30, restarts=3, patience=5, workers=3))
        self.assertEqual(models.encode(first), models.encode(second))
        self.assertEqual(threaded.best, first.best)
        self.assertEqual(threaded.score, first.score)

    def test_start_matrix(self):
        """
        A start matrix is scored first.
        """
        config = models.SearchConfig(n=3, budget=1, restarts=1, start=helpers.CYCLE3)
        record = search.search(config)
        self.assertEqual(record.best, helpers.CYCLE3)
        self.assertEqual(record.iterations, 1)

    def test_index_target(self):
        """
        The index target scores the index of primitivity, within 2n − 3.
        """
        record = search.search(models.SearchConfig(n=4, target=constants.TARGET_MAX_MIP, budget=40, restarts=4,
                                                   patience=5))
        self.assertEqual(record.score, record.index_of_primitivity)
        self.assertGreaterEqual(record.score, 3)
        self.assertLessEqual(record.score, 5)
        self.assertIsNone(record.ce_bracket)

    def test_no_feasible_candidate(self):
        """
        A pure cycle pattern never yields a GDN candidate.
        """
        config = models.SearchConfig(n=3, pattern=helpers.ROTATION, budget=6, restarts=1)
        with self.assertRaises(errors.NoFeasibleCandidate):
            search.search(config)
