"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Random matrix families: doubly nonnegative matrices, generalized doubly
nonnegative ones (including reducible and invertible ones), and entries
sampled on a fixed zero-nonzero pattern. Every sampler takes a
numpy.random.Generator so that streams can be derived from (seed, index).
"""

import logging

import numpy as np

from gdn import constants
from gdn import errors
from gdn import models
from gdn import primitivity
from gdn import spectral

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 1000


def rng_for(seed, *stream):
    """ Returns the generator for the substream (seed, *stream). """
    return np.random.default_rng([int(seed), *(int(value) for value in stream)])


def loguniform(rng, size, entry_range=constants.DEFAULT_ENTRY_RANGE):
    """ Returns samples whose logarithm is uniform on log(entry_range). """
    lo, hi = entry_range
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def cycle_pattern(n, diagonal=None):
    """
    Returns the pattern of the cycle 1 → 2 → … → n → 1 with the given
    diagonal positions, all of them by default.
    """
    bits = np.zeros((n, n), dtype=bool)
    bits[np.arange(n), (np.arange(n) + 1) % n] = True
    diagonal = range(n) if diagonal is None else diagonal
    for index in diagonal:
        bits[index, index] = True
    return primitivity.BoolPattern(bits)


def _graded(bits, rng, entry_range):
    """
    Spreads the diagonal geometrically and keeps the off-diagonal entries
    small enough for the Gershgorin discs to stay apart, which makes the
    spectrum real and simple.
    """
    n = bits.shape[0]
    diagonal = np.flatnonzero(np.diag(bits))
    values = np.sort(loguniform(rng, len(diagonal), entry_range))[::-1]
    values = values[0] * rng.uniform(2.0, 20.0) ** -np.arange(len(diagonal), dtype=float) if len(values) else values
    matrix = np.zeros((n, n))
    matrix[diagonal, diagonal] = rng.permutation(values)
    centers = np.sort(np.diag(matrix))
    gap = np.min(np.diff(centers)) if n > 1 else 1.0
    if gap <= 0:
        gap = centers[-1] if centers[-1] > 0 else 1.0
    off = bits & ~np.eye(n, dtype=bool)
    matrix[off] = gap * rng.uniform(0.05, 0.4, np.count_nonzero(off)) / max(1, n - 1)
    return matrix


def _symmetric(bits, rng, entry_range):
    """
    Samples a symmetric diagonally dominant matrix, which is positive
    semidefinite. Returns None when the pattern cannot carry one.
    """
    n = bits.shape[0]
    if not (np.array_equal(bits, bits.T) and np.diag(bits)[bits.any(axis=1)].all()):
        return None
    upper = np.triu(bits, 1)
    matrix = np.zeros((n, n))
    matrix[upper] = loguniform(rng, np.count_nonzero(upper), entry_range)
    matrix = matrix + matrix.T
    diagonal = np.diag(bits)
    matrix[diagonal, diagonal] = matrix.sum(axis=1)[diagonal] + loguniform(rng, np.count_nonzero(diagonal), entry_range)
    return matrix


def sample_on_pattern(pattern, rng, mode=constants.SAMPLE_LOGUNIFORM, entry_range=constants.DEFAULT_ENTRY_RANGE):
    """
    Samples positive entries exactly on a pattern.

    Args:
        pattern: A BoolPattern or boolean matrix.
        rng (numpy.random.Generator): The random stream.
        mode (str): loguniform, graded (near-triangular with a spread diagonal)
            or symmetric (diagonally dominant); symmetric falls back to
            loguniform on patterns that are not symmetric with a full diagonal.
        entry_range: The (lo, hi) range of the entries.

    Returns:
        numpy.ndarray: A matrix whose positive entries are exactly the pattern.
    """
    bits = primitivity.as_pattern(pattern).bits
    if mode == constants.SAMPLE_GRADED:
        return _graded(bits, rng, entry_range)
    if mode == constants.SAMPLE_SYMMETRIC:
        matrix = _symmetric(bits, rng, entry_range)
        if matrix is not None:
            return matrix
    elif mode != constants.SAMPLE_LOGUNIFORM:
        raise errors.PreconditionViolated(f"unknown sampling mode {mode!r}")
    matrix = np.zeros(bits.shape)
    matrix[bits] = loguniform(rng, np.count_nonzero(bits), entry_range)
    return matrix


def random_dn(n, rng):
    """
    Samples a doubly nonnegative matrix B·Bᵀ + sI with B nonnegative. B is
    dense, sparse or lower bidiagonal, the last giving tridiagonal matrices.
    """
    shape = rng.integers(3)
    factor = rng.uniform(0.0, 1.0, (n, n))
    if shape == 1:
        factor[rng.uniform(size=(n, n)) < 0.5] = 0.0
    elif shape == 2:
        factor = np.tril(np.triu(factor, -1))
    matrix = factor @ factor.T
    matrix = 0.5 * (matrix + matrix.T)
    return matrix + rng.uniform(0.0, 0.1) * np.eye(n)


def _accept(matrix, max_cond, invertible):
    report, spectral_data = spectral.inspect(matrix)
    if not report.is_gdn or report.warnings or spectral_data.cond_S > max_cond:
        return False
    return not invertible or spectral_data.is_invertible()


def random_gdn(n, rng, max_cond=constants.WELL_CONDITIONED, invertible=False):
    """
    Samples a GDN matrix whose eigenvector matrix has condition at most max_cond.

    Candidates come from three families in turn: a diagonal similarity D·A·D⁻¹
    of a DN matrix, a graded sample on a cycle-plus-diagonal pattern, and a
    DN matrix plus a small nonnegative perturbation. Candidates failing the
    GDN validation are discarded.

    Raises:
        NoFeasibleCandidate: If no candidate passes within MAX_ATTEMPTS.
    """
    for attempt in range(MAX_ATTEMPTS):
        family = attempt % 3
        if family == 0:
            scaling = loguniform(rng, n, (0.1, 10.0))
            candidate = (random_dn(n, rng) * scaling[:, None]) / scaling[None, :]
        elif family == 1:
            diagonal = [index for index in range(n) if rng.uniform() < 0.8] or [0]
            pattern = cycle_pattern(n, diagonal).bits[np.ix_(*(2 * [rng.permutation(n)]))]
            candidate = sample_on_pattern(pattern, rng, constants.SAMPLE_GRADED)
        else:
            base = random_dn(n, rng)
            noise = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < 0.5)
            candidate = base + 0.1 * np.linalg.norm(base, np.inf) * rng.uniform() * noise / n
        if _accept(candidate, max_cond, invertible):
            return candidate
    raise errors.NoFeasibleCandidate(f"no GDN matrix of order {n} within {MAX_ATTEMPTS} attempts")


def random_reducible_gdn(n, rng, max_cond=constants.WELL_CONDITIONED):
    """
    Samples a reducible GDN matrix [[A₁, C], [0, A₂]] with GDN diagonal blocks
    and a nonnegative coupling block, conjugated by a random permutation.

    Raises:
        PreconditionViolated: If n < 2.
        NoFeasibleCandidate: If no candidate passes within MAX_ATTEMPTS.
    """
    if n < 2:
        raise errors.PreconditionViolated("a reducible matrix needs n >= 2")
    for _ in range(MAX_ATTEMPTS):
        split = int(rng.integers(1, n))
        matrix = np.zeros((n, n))
        matrix[:split, :split] = random_gdn(split, rng, max_cond)
        matrix[split:, split:] = random_gdn(n - split, rng, max_cond)
        scale = min(np.max(matrix[:split, :split]), np.max(matrix[split:, split:]))
        matrix[:split, split:] = scale * rng.uniform(0.0, 0.5, (split, n - split))
        order = rng.permutation(n)
        candidate = matrix[np.ix_(order, order)]
        if _accept(candidate, max_cond, False):
            return candidate
    raise errors.NoFeasibleCandidate(f"no reducible GDN matrix of order {n} within {MAX_ATTEMPTS} attempts")


def pattern_feasibility(pattern, trials, seed=0, entry_range=constants.DEFAULT_ENTRY_RANGE):
    """
    Samples matrices on a pattern until one is GDN.

    Trial t draws from the substream (seed, t) and cycles through the
    loguniform, graded and symmetric modes. A negative verdict only reports
    that no witness turned up; it never claims infeasibility.

    Args:
        pattern: A BoolPattern or boolean matrix.
        trials (int): The number of samples, ≥ 1.
        seed (int): The base seed.
        entry_range: The (lo, hi) range of the entries.

    Returns:
        FeasibilityVerdict: The witness when found, and the trials used.
    """
    if trials < 1:
        raise errors.PreconditionViolated(f"trials must be at least 1, not {trials}")
    modes = [constants.SAMPLE_LOGUNIFORM, constants.SAMPLE_GRADED, constants.SAMPLE_SYMMETRIC]
    for trial in range(trials):
        candidate = sample_on_pattern(pattern, rng_for(seed, trial), modes[trial % len(modes)], entry_range)
        if spectral.validate_gdn(candidate).is_gdn:
            logger.debug("Pattern feasible after %s trials", trial + 1)
            return models.FeasibilityVerdict(found=True, witness=candidate.tolist(), trials=trial + 1, seed=seed)
    return models.FeasibilityVerdict(found=False, trials=trials, seed=seed)
