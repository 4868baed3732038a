"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Zero-nonzero pattern analytics: irreducibility, the index of primitivity,
diagonal-support bounds, and the trace necessities a GDN matrix with a
strictly positive spectrum must satisfy.
"""

import heapq
import logging

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from gdn import bounds
from gdn import errors
from gdn import models
from gdn import storage

logger = logging.getLogger(__name__)


class BoolPattern:
    """
    The zero-nonzero pattern of a square matrix.

    Attributes:
        bits (numpy.ndarray): n-by-n booleans, true where the entry exceeds pattern_tol.
    """
    def __init__(self, bits):
        self.bits = np.array(bits, dtype=bool)
        if self.bits.ndim != 2 or self.bits.shape[0] != self.bits.shape[1]:
            raise errors.PreconditionViolated(f"pattern must be square, not {self.bits.shape}")

    @classmethod
    def from_matrix(cls, matrix, pattern_tol=0.0):
        """
        Returns the pattern of entries strictly above pattern_tol.
        """
        return cls(storage.as_matrix(matrix) > pattern_tol)

    @classmethod
    def from_power(cls, matrix, relative_tol=1e-12):
        """
        Returns the pattern of a floating-point power, dropping entries at most
        relative_tol·‖A‖∞.
        """
        matrix = storage.as_matrix(matrix)
        return cls.from_matrix(matrix, relative_tol * np.linalg.norm(matrix, np.inf))

    @property
    def n(self):
        """ The order of the pattern. """
        return self.bits.shape[0]

    def diagonal_count(self):
        """ Returns the number of true diagonal entries. """
        return int(np.count_nonzero(np.diag(self.bits)))

    def to_list(self):
        """ Returns the pattern as nested lists of 0 and 1. """
        return self.bits.astype(int).tolist()

    def __eq__(self, other):
        return isinstance(other, BoolPattern) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __str__(self):
        return "\n".join("".join("1" if bit else "0" for bit in row) for row in self.bits)


def as_pattern(value):
    """
    Returns value as a BoolPattern, converting numeric matrices with pattern_tol 0.
    """
    if isinstance(value, BoolPattern):
        return value
    array = np.asarray(value)
    if array.dtype == bool:
        return BoolPattern(array)
    return BoolPattern.from_matrix(array)


def index_of_primitivity(pattern):
    """
    Computes the least k for which the boolean power P^k is all true.

    Args:
        pattern: A BoolPattern, or a matrix whose positive entries form the pattern.

    Returns:
        int: The index of primitivity, or None when the pattern is not
        primitive. Boolean powering stops at the Wielandt bound n²−2n+2.
    """
    pattern = as_pattern(pattern)
    step = pattern.bits.astype(np.int64)
    current = step.copy()
    for k in range(1, bounds.wielandt_bound(pattern.n) + 1):
        if current.all():
            return k
        current = ((current @ step) > 0).astype(np.int64)
    return None


def reachability(pattern):
    """
    Returns the boolean matrix R with R[i, j] true when j = i or a path leads
    from i to j in the pattern digraph. Entries of every polynomial in A, and
    so of every power A^α, vanish outside R.
    """
    pattern = as_pattern(pattern)
    step = (pattern.bits | np.eye(pattern.n, dtype=bool)).astype(np.int64)
    reach = step.copy()
    for _ in range(pattern.n):
        widened = (reach @ step) > 0
        if np.array_equal(widened, reach > 0):
            break
        reach = widened.astype(np.int64)
    return reach > 0


def is_primitive(pattern):
    """ Returns whether some power of the pattern is all true. """
    return index_of_primitivity(pattern) is not None


def diagonal_support_bound(pattern):
    """
    Returns 2n − d − 1, the index bound for an irreducible pattern with d ≥ 1
    true diagonal entries.

    Raises:
        NotApplicable: If the pattern is reducible or has an all-false diagonal.
    """
    pattern = as_pattern(pattern)
    d = pattern.diagonal_count()
    if d == 0:
        raise errors.NotApplicable("pattern has no positive diagonal entry")
    if not reducibility_blocks(pattern).irreducible:
        raise errors.NotApplicable("pattern is reducible")
    return 2 * pattern.n - d - 1


def reducibility_blocks(matrix):
    """
    Finds the strongly connected components of the pattern digraph and orders
    them so that the permuted matrix is block upper triangular: a nonzero
    entry (i, j) never points from a later block to an earlier one.

    Args:
        matrix: A BoolPattern or a matrix.

    Returns:
        BlockStructure: The blocks as 0-based index lists, ties broken by the
        smallest member index, and the concatenated permutation.
    """
    pattern = as_pattern(matrix)
    n = pattern.n
    count, labels = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(pattern.bits), directed=True, connection="strong")
    if count == 1:
        return models.BlockStructure(n=n, blocks=[list(range(n))], permutation=list(range(n)), irreducible=True)

    members = [[int(i) for i in np.flatnonzero(labels == label)] for label in range(count)]
    successors = [set() for _ in range(count)]
    for i, j in zip(*np.nonzero(pattern.bits)):
        if labels[i] != labels[j]:
            successors[labels[i]].add(labels[j])
    indegree = [0] * count
    for targets in successors:
        for target in targets:
            indegree[target] += 1

    ready = [(members[label][0], label) for label in range(count) if indegree[label] == 0]
    heapq.heapify(ready)
    blocks = []
    while ready:
        _, label = heapq.heappop(ready)
        blocks.append(members[label])
        for target in successors[label]:
            indegree[target] -= 1
            if indegree[target] == 0:
                heapq.heappush(ready, (members[target][0], target))
    permutation = [index for block in blocks for index in block]
    logger.debug("Pattern splits into %s strongly connected blocks", len(blocks))
    return models.BlockStructure(n=n, blocks=blocks, permutation=permutation, irreducible=False)


def gdn_trace_necessities(matrix, tol=None):
    """
    Computes the trace quantities a GDN matrix with a strictly positive
    spectrum must satisfy, and checks each of them.

    With t₁ = Tr(A) and t₂ = Tr(A²), the characteristic polynomial starts
    λⁿ + c₁λⁿ⁻¹ + c₂λⁿ⁻² with c₁ = −t₁ and c₂ = (t₁² − t₂)/2. A positive
    spectrum forces c₁ < 0, c₂ > 0 and strictly alternating coefficients,
    which in turn forces at least two positive diagonal entries and an
    index of primitivity of at most 2n − 3.

    Args:
        matrix: A GDN matrix of order n ≥ 2 with strictly positive eigenvalues.
        tol (ToleranceConfig, optional): The tolerances to use.

    Returns:
        TraceReport: The quantities and a named boolean per check.

    Raises:
        PreconditionViolated: If the matrix is not GDN, n < 2, or an eigenvalue is not positive.
    """
    from gdn import spectral  # pylint: disable=import-outside-toplevel

    tol = tol or models.ToleranceConfig()
    try:
        _, spectral_data = spectral.certify(matrix, tol)
    except errors.NotGdn as error:
        raise errors.PreconditionViolated(f"trace necessities need a GDN matrix: {error}") from error
    matrix = storage.as_matrix(matrix)
    n = matrix.shape[0]
    if n < 2:
        raise errors.PreconditionViolated("trace necessities need n >= 2")
    if not spectral_data.is_invertible(tol):
        raise errors.PreconditionViolated("trace necessities need a strictly positive spectrum")

    t1 = float(np.trace(matrix))
    t2 = float(np.trace(matrix @ matrix))
    c1 = -t1
    c2 = (t1 * t1 - t2) / 2
    positive_diagonal = int(np.count_nonzero(np.diag(matrix) > 0))
    char_poly = [float(value) for value in np.real(np.poly(matrix))]
    index = index_of_primitivity(BoolPattern.from_matrix(matrix))
    mip_bound = bounds.mip_upper_bound(n)
    checks = {
        "c1_negative": c1 < 0,
        "c2_positive": c2 > 0,
        "two_positive_diagonal": positive_diagonal >= 2,
        "char_poly_alternates": all(
            (coefficient > 0) if k % 2 == 0 else (coefficient < 0)
            for k, coefficient in enumerate(char_poly)),
        "index_within_mip_bound": index is None or index <= mip_bound,
    }
    for name, holds in checks.items():
        if not holds:
            logger.error("Trace necessity %s fails for a GDN matrix with positive spectrum", name)
    return models.TraceReport(
        n=n, t1=t1, t2=t2, c1=c1, c2=c2,
        positive_diagonal=positive_diagonal,
        char_poly=char_poly,
        index_of_primitivity=index,
        mip_bound=mip_bound,
        checks=checks,
    )
