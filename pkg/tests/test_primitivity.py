"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Unit tests for the pattern analytics in `gdn.primitivity`.
"""

import unittest

import numpy as np

from gdn import constructions
from gdn import errors
from gdn import primitivity
from tests import helpers

WIELANDT3 = [[0, 1, 0], [0, 0, 1], [1, 1, 0]]
CYCLE_ONE_LOOP = [[1, 1, 0], [0, 0, 1], [1, 0, 0]]
FORKED = [[1, 1, 0], [0, 1, 0], [0, 1, 1]]


class TestBoolPattern(unittest.TestCase):
    """
    Tests the pattern type.
    """

    def test_from_matrix(self):
        """
        The pattern marks the entries above the threshold.
        """
        pattern = primitivity.BoolPattern.from_matrix([[2.0, 1e-13], [0.0, 1.0]], pattern_tol=1e-12)
        self.assertEqual(pattern.to_list(), [[1, 0], [0, 1]])
        self.assertEqual(pattern.diagonal_count(), 2)
        self.assertEqual(str(pattern), "10\n01")

    def test_from_power(self):
        """
        Entries of a power at rounding level are dropped relative to the norm.
        """
        pattern = primitivity.BoolPattern.from_power([[1e6, 1e-9], [0.0, 1.0]])
        self.assertEqual(pattern.to_list(), [[1, 0], [0, 1]])

    def test_equality(self):
        """
        Patterns compare and hash by their bits.
        """
        first = primitivity.as_pattern(np.array(WIELANDT3, dtype=bool))
        second = primitivity.as_pattern(np.array(WIELANDT3, dtype=float) * 7)
        self.assertEqual(first, second)
        self.assertEqual(len({first, second}), 1)

    def test_not_square(self):
        """
        Patterns must be square.
        """
        with self.assertRaises(errors.PreconditionViolated):
            primitivity.BoolPattern([[True, False]])


class TestIndexOfPrimitivity(unittest.TestCase):
    """
    Tests the index of primitivity by boolean powers.
    """

    def test_positive(self):
        """
        A positive matrix has index 1.
        """
        self.assertEqual(primitivity.index_of_primitivity(np.ones((3, 3))), 1)

    def test_wielandt(self):
        """
        The Wielandt pattern of order 3 reaches the bound n² − 2n + 2 = 5.
        """
        self.assertEqual(primitivity.index_of_primitivity(WIELANDT3), 5)

    def test_cycle_with_loop(self):
        """
        A 3-cycle with one loop has index 4, equal to its diagonal support bound.
        """
        self.assertEqual(primitivity.index_of_primitivity(CYCLE_ONE_LOOP), 4)
        self.assertEqual(primitivity.diagonal_support_bound(CYCLE_ONE_LOOP), 4)

    def test_not_primitive(self):
        """
        A permutation and a reducible pattern are not primitive.
        """
        self.assertIsNone(primitivity.index_of_primitivity(helpers.ROTATION))
        self.assertFalse(primitivity.is_primitive(FORKED))

    def test_published_indices(self):
        """
        The published examples have indices 4, 6 and 6.
        """
        for name, expected in (("mip4", 4), ("mip5", 6), ("mip6", 6)):
            self.assertEqual(primitivity.index_of_primitivity(constructions.paper_matrix(name)), expected)


class TestDiagonalSupportBound(unittest.TestCase):
    """
    Tests where the diagonal support bound applies.
    """

    def test_full_diagonal(self):
        """
        With all n diagonal entries the bound is n − 1.
        """
        self.assertEqual(primitivity.diagonal_support_bound(np.ones((4, 4))), 3)

    def test_empty_diagonal(self):
        """
        A pattern without diagonal entries is not covered.
        """
        with self.assertRaises(errors.NotApplicable):
            primitivity.diagonal_support_bound(helpers.ROTATION)

    def test_reducible(self):
        """
        A reducible pattern is not covered.
        """
        with self.assertRaises(errors.NotApplicable):
            primitivity.diagonal_support_bound(FORKED)


class TestReducibility(unittest.TestCase):
    """
    Tests strongly connected blocks and reachability.
    """

    def test_irreducible(self):
        """
        An irreducible pattern is one block in natural order.
        """
        structure = primitivity.reducibility_blocks(WIELANDT3)
        self.assertTrue(structure.irreducible)
        self.assertEqual(structure.blocks, [[0, 1, 2]])

    def test_block_order(self):
        """
        Blocks are ordered so that edges only point forward, ties by smallest index.
        """
        structure = primitivity.reducibility_blocks(FORKED)
        self.assertFalse(structure.irreducible)
        self.assertEqual(structure.blocks, [[0], [2], [1]])
        self.assertEqual(structure.permutation, [0, 2, 1])
        permuted = np.array(FORKED)[np.ix_(structure.permutation, structure.permutation)]
        self.assertFalse(np.tril(permuted, -1).any())

    def test_reachability(self):
        """
        Reachability follows paths of any length and includes the diagonal.
        """
        reach = primitivity.reachability(FORKED)
        self.assertTrue(reach[0, 1])
        self.assertTrue(reach[2, 1])
        self.assertFalse(reach[0, 2])
        self.assertFalse(reach[1, 0])
        self.assertTrue(reach[1, 1])


class TestTraceNecessities(unittest.TestCase):
    """
    Tests the trace and characteristic-polynomial necessities.
    """

    def test_symmetric(self):
        """
        [[2,1],[1,2]] has t₁ = 4, t₂ = 10, c₁ = −4, c₂ = 3.
        """
        report = primitivity.gdn_trace_necessities(helpers.SYMMETRIC)
        self.assertAlmostEqual(report.t1, 4.0)
        self.assertAlmostEqual(report.t2, 10.0)
        self.assertAlmostEqual(report.c1, -4.0)
        self.assertAlmostEqual(report.c2, 3.0)
        np.testing.assert_allclose(report.char_poly, [1.0, -4.0, 3.0])
        self.assertEqual(report.positive_diagonal, 2)
        self.assertTrue(report.holds)

    def test_published(self):
        """
        An invertible published example and a triangular matrix satisfy every necessity.
        """
        for matrix in (constructions.paper_matrix("ce4"), helpers.TRIANGULAR):
            report = primitivity.gdn_trace_necessities(matrix)
            self.assertTrue(report.holds, report.checks)

    def test_singular(self):
        """
        A singular matrix is outside the precondition.
        """
        with self.assertRaises(errors.PreconditionViolated):
            primitivity.gdn_trace_necessities([[1.0, 1.0], [1.0, 1.0]])

    def test_order_one(self):
        """
        Order 1 is outside the precondition.
        """
        with self.assertRaises(errors.PreconditionViolated):
            primitivity.gdn_trace_necessities([[2.0]])

    def test_not_gdn(self):
        """
        A matrix that is not GDN is outside the precondition.
        """
        with self.assertRaises(errors.PreconditionViolated):
            primitivity.gdn_trace_necessities(helpers.SWAP)
