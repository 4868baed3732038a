"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Continuous conventional powers A^α = Σ λᵢ^α Pᵢ, the exponential polynomials
of their entries, Hadamard (entrywise) powers, and entry trajectories.
"""

import csv
import io
import logging
import math

import numpy as np
import scipy.linalg

from gdn import bounds
from gdn import constants
from gdn import errors
from gdn import exppoly
from gdn import models
from gdn import primitivity
from gdn import spectral
from gdn import storage

logger = logging.getLogger(__name__)


class EntryPolyMatrix:
    """
    The n-by-n grid of exponential polynomials of A^α: the coefficient of λᵢ
    in entry (j, k) is (Pᵢ)ⱼₖ. Entries no path of the pattern digraph reaches
    are identically zero and get an empty polynomial. Elsewhere a term is
    dropped only when it stays below coeff_zero_tol times the largest term of
    the entry for every α up to the horizon, k(n)+1 by default: a tiny
    coefficient on the largest eigenvalue decides the sign at large α.
    """
    def __init__(self, spectral_data, pattern=None, tol=None, horizon=None):
        tol = tol or models.ToleranceConfig()
        self.spectral_data = spectral_data
        self.n = spectral_data.n
        self.horizon = float(bounds.theorem_upper_bound(self.n) + 1 if horizon is None else horizon)
        reach = (primitivity.reachability(pattern) if pattern is not None
                 else np.ones((self.n, self.n), dtype=bool))
        stacked = np.array(spectral_data.projectors)
        self.polys = [
            [self._entry(stacked[:, j, k], reach[j, k], tol) for k in range(self.n)]
            for j in range(self.n)
        ]

    def _entry(self, coeffs, reachable, tol):
        if not reachable:
            return exppoly.ExpPoly([])
        return exppoly.ExpPoly(zip(coeffs, self.spectral_data.lambdas), coeff_zero_tol=tol.coeff_zero_tol,
                               horizon=self.horizon)

    def __getitem__(self, key):
        i, j = key
        return self.polys[i][j]

    def evaluate(self, alpha):
        """ Returns A^α assembled entry by entry. """
        return np.array([[poly.evaluate(alpha) for poly in row] for row in self.polys])


def entry_polys(spectral_data, matrix=None, tol=None):
    """
    Builds the EntryPolyMatrix of a decomposition. When the matrix is given,
    its pattern marks the entries that are identically zero.
    """
    pattern = primitivity.BoolPattern.from_matrix(matrix) if matrix is not None else None
    return EntryPolyMatrix(spectral_data, pattern, tol)


def power(spectral_data, alpha):
    """
    Computes the conventional power A^α = Σ λᵢ^α Pᵢ, with 0^α = 0.

    Args:
        spectral_data (SpectralData): The decomposition of A.
        alpha (float): The exponent, α > 0.

    Returns:
        numpy.ndarray: The matrix A^α.

    Raises:
        PreconditionViolated: If α ≤ 0.
        NegativeEigenvalue: If A has a negative eigenvalue.
    """
    if not alpha > 0:
        raise errors.PreconditionViolated(f"powers are defined for alpha > 0, not {alpha}")
    if spectral_data.lambdas.min() < 0:
        raise errors.NegativeEigenvalue(f"eigenvalue {spectral_data.lambdas.min():.6g} is negative")
    weights = [value ** alpha if value > 0 else 0.0 for value in spectral_data.lambdas]
    return sum(weight * projector for weight, projector in zip(weights, spectral_data.projectors))


def matrix_power(matrix, alpha, tol=None):
    """
    Certifies a matrix as GDN and returns A^α.

    Raises:
        NotGdn: If the matrix is not GDN.
    """
    _, spectral_data = spectral.certify(matrix, tol)
    return power(spectral_data, alpha)


def integer_power_residual(matrix, spectral_data, k):
    """
    Returns ‖Aᵏ − power(A, k)‖∞ / max(1, ‖Aᵏ‖∞), comparing the spectral
    power against k-fold multiplication.
    """
    expected = np.linalg.matrix_power(storage.as_matrix(matrix), k)
    residual = np.linalg.norm(power(spectral_data, k) - expected, np.inf)
    return float(residual / max(1.0, np.linalg.norm(expected, np.inf)))


def semigroup_residual(spectral_data, alpha, beta):
    """
    Returns ‖A^α·A^β − A^(α+β)‖∞ / ‖A^(α+β)‖∞.
    """
    combined = power(spectral_data, alpha + beta)
    residual = np.linalg.norm(power(spectral_data, alpha) @ power(spectral_data, beta) - combined, np.inf)
    return float(residual / max(np.linalg.norm(combined, np.inf), 1e-300))


def hadamard_power(matrix, alpha):
    """
    Returns the entrywise power (aᵢⱼ^α), with 0^α = 0.

    Raises:
        NegativeEntry: If an entry is negative.
        PreconditionViolated: If α ≤ 0.
    """
    matrix = storage.as_matrix(matrix)
    if not alpha > 0:
        raise errors.PreconditionViolated(f"Hadamard powers are taken for alpha > 0, not {alpha}")
    if matrix.min() < 0:
        raise errors.NegativeEntry(f"entry {matrix.min():.6g} is negative")
    positive = matrix > 0
    return np.where(positive, np.power(matrix, alpha, where=positive, out=np.zeros_like(matrix)), 0.0)


def hadamard_spectrum_trace(matrix, alphas):
    """
    Computes the eigenvalues of the Hadamard powers of a nonnegative matrix.

    Args:
        matrix: An entrywise nonnegative matrix.
        alphas: The exponents to sample.

    Returns:
        list[HadamardSpectrum]: Per exponent, the real parts sorted descending
        and the largest imaginary part.
    """
    spectra = []
    for alpha in alphas:
        balanced, _ = scipy.linalg.matrix_balance(hadamard_power(matrix, alpha))
        values = scipy.linalg.eigvals(balanced)
        spectra.append(models.HadamardSpectrum(
            alpha=float(alpha),
            eigenvalues=sorted(values.real.tolist(), reverse=True),
            max_imag=float(np.max(np.abs(values.imag))),
        ))
    return spectra


def _grid(window, step):
    lo, hi = (float(value) for value in window)
    if not (0 < lo <= hi and step > 0 and math.isfinite(hi)):
        raise errors.WindowInvalid(f"trajectory window must lie in (0, inf) with a positive step, not {window}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def trajectory(epm, entries, window, step):
    """
    Tabulates entries of A^α over a uniform α-grid as CSV.

    Args:
        epm (EntryPolyMatrix): The entry polynomials of A.
        entries (list): The 0-based (i, j) pairs to export.
        window: The pair (lo, hi) with lo > 0.
        step (float): The grid spacing.

    Returns:
        str: CSV text with header `alpha,i,j,value`, values at 17 significant digits.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(constants.TRAJECTORY_HEADER)
    digits = f".{constants.SIGNIFICANT_DIGITS}g"
    for alpha in _grid(window, step):
        for i, j in entries:
            if not (0 <= i < epm.n and 0 <= j < epm.n):
                raise errors.PreconditionViolated(f"entry ({i}, {j}) is outside a {epm.n}x{epm.n} matrix")
            writer.writerow([format(alpha, digits), i, j, format(epm[i, j].evaluate(alpha), digits)])
    return buffer.getvalue()


def block_preservation(matrix, alphas=None, tol=None):
    """
    Measures how far the zero block of a reducible GDN matrix moves under
    continuous powers: the largest lower-left block entry of A^α, permuted to
    block upper triangular form, relative to ‖A^α‖∞.

    Args:
        matrix: A GDN matrix.
        alphas: The exponents to sample; by default the grid of step 0.05 on (0, k(n)].
        tol (ToleranceConfig, optional): The tolerances to use.

    Returns:
        BlockPreservationReport: The blocks and the largest relative ratio.
    """
    _, spectral_data = spectral.certify(matrix, tol)
    matrix = storage.as_matrix(matrix)
    n = matrix.shape[0]
    structure = primitivity.reducibility_blocks(matrix)
    if alphas is None:
        upper = max(bounds.theorem_upper_bound(n), 1)
        alphas = _grid((0.05, upper), 0.05)
    report = models.BlockPreservationReport(n=n, blocks=structure.blocks, alphas=len(alphas))
    if structure.irreducible:
        return report

    block_of = np.empty(n, dtype=int)
    for index, block in enumerate(structure.blocks):
        block_of[block] = index
    lower = block_of[:, None] > block_of[None, :]
    for alpha in alphas:
        powered = power(spectral_data, alpha)
        scale = np.linalg.norm(powered, np.inf)
        ratio = float(np.max(np.abs(powered[lower])) / scale) if scale > 0 else 0.0
        report.max_ratio = max(report.max_ratio, ratio)
    if not report.preserved:
        logger.error("Zero block reached %s of the norm of A^alpha", report.max_ratio)
    return report
