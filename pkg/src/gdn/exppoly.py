"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Exponential polynomials φ(α) = Σ aᵢ λᵢ^α with distinct nonnegative bases:
evaluation, Descartes sign-change bounds, root isolation and the open
intervals on which φ is negative.

Values are computed in normalized form, φ(α) = λ₁^α · Σ aᵢ exp(α(ln λᵢ − ln λ₁)),
so that the sign of φ is available for large α without overflow.
"""

import itertools
import logging
import math

import numpy as np
import scipy.optimize

from gdn import constants
from gdn import errors
from gdn import models

logger = logging.getLogger(__name__)


class ExpPoly:
    """
    A real exponential polynomial Σ aᵢ λᵢ^α.

    Terms with equal bases are combined, then the terms that stay negligible
    over α ∈ [0, horizon] are dropped: |aᵢ|λᵢ^α never exceeds coeff_zero_tol
    times the largest term magnitude at the same α. The tolerance defaults to
    COEFF_ZERO_TOL and the horizon to 0, a plain comparison of coefficients.
    Bases are stored strictly descending.
    """
    def __init__(self, terms, coeff_zero_tol=None, horizon=0.0):
        combined = {}
        for coeff, base in terms:
            coeff, base = float(coeff), float(base)
            if not (math.isfinite(coeff) and math.isfinite(base)) or base < 0:
                raise errors.PreconditionViolated(f"bad term ({coeff}, {base}): bases must be finite and >= 0")
            combined[base] = combined.get(base, 0.0) + coeff
        self.coeff_zero_tol = float(constants.COEFF_ZERO_TOL if coeff_zero_tol is None else coeff_zero_tol)
        self.horizon = float(horizon)
        ordered = sorted(combined.items(), reverse=True)
        bases = np.array([base for base, _ in ordered], dtype=float)
        coeffs = np.array([coeff for _, coeff in ordered], dtype=float)
        kept = ~negligible_terms(coeffs, bases, self.coeff_zero_tol, self.horizon)
        self.bases = bases[kept]
        self.coeffs = coeffs[kept]
        positive = self.bases > 0
        self._coeffs = self.coeffs[positive]
        self._logs = np.log(self.bases[positive])
        self._shifts = self._logs - self._logs[0] if self._logs.size else self._logs

    @property
    def terms(self):
        """ The (coefficient, base) pairs, bases strictly descending. """
        return list(zip(self.coeffs.tolist(), self.bases.tolist()))

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"ExpPoly({self.terms})"

    def has_zero_base(self):
        """ Returns whether a term with base 0 survived coefficient dropping. """
        return bool(self.bases.size) and self.bases[-1] == 0.0

    def scaled(self, alphas):
        """
        Returns g(α) = φ(α)/λ₁^α and its magnitude Σ|aᵢ|exp(α(ln λᵢ − ln λ₁)),
        where λ₁ is the largest positive base. Both are zero when φ has no
        positive base.

        Args:
            alphas: A scalar or array of exponents, all > 0.
        """
        alphas = np.asarray(alphas, dtype=float)
        if not self._coeffs.size:
            return np.zeros_like(alphas), np.zeros_like(alphas)
        exps = np.exp(np.multiply.outer(alphas, self._shifts))
        return exps @ self._coeffs, exps @ np.abs(self._coeffs)

    def sign(self, alpha):
        """ Returns the sign of φ(α) as -1, 0 or 1. """
        value, _ = self.scaled(alpha)
        return int(np.sign(value))

    def evaluate(self, alpha):
        """
        Returns φ(α) for α > 0. Terms with base 0 contribute 0.

        Raises:
            PreconditionViolated: If α ≤ 0.
        """
        if not alpha > 0:
            raise errors.PreconditionViolated(f"exponential polynomials are evaluated at alpha > 0, not {alpha}")
        if not self._coeffs.size:
            return 0.0
        value, _ = self.scaled(alpha)
        return float(np.exp(alpha * self._logs[0]) * value)

    def derivative(self):
        """ Returns dφ/dα = Σ aᵢ ln(λᵢ) λᵢ^α, valid for α > 0. """
        return ExpPoly(
            [(coeff * log, math.exp(log)) for coeff, log in zip(self._coeffs, self._logs)],
            coeff_zero_tol=0.0,
        )

    def sign_changes(self):
        """
        Returns the number of strict sign alternations in the coefficients,
        ordered by decreasing base, the zero base included.
        """
        return _alternations(self.coeffs)

    def descartes_bound(self):
        """
        Returns the Descartes bound on the real roots of φ restricted to its
        positive bases, the function that φ equals for every α > 0.
        """
        return _alternations(self._coeffs)

    def window_bound(self):
        """
        Returns the bound on roots in α > 0. When every base is positive and
        φ(0) = Σ aᵢ vanishes, one of the Descartes roots sits at the origin.
        """
        bound = self.descartes_bound()
        if bound and not self.has_zero_base():
            if abs(self._coeffs.sum()) <= constants.ORIGIN_ROOT_TOL * np.abs(self._coeffs).sum():
                return bound - 1
        return bound


def _alternations(coeffs):
    signs = np.sign(coeffs)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def negligible_terms(coeffs, bases, rel_tol, horizon=0.0):
    """
    Marks the terms whose magnitude |aᵢ|λᵢ^α is at most rel_tol times the
    largest term magnitude at every α in [0, horizon]. A term with base 0
    only counts at α = 0.

    Log-magnitudes are linear in α and their maximum is convex, so a term is
    closest to the maximum at an endpoint or where two terms cross.

    Returns:
        numpy.ndarray: One boolean per term.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    bases = np.asarray(bases, dtype=float)
    magnitudes = np.abs(coeffs)
    negligible = magnitudes == 0
    if rel_tol <= 0 or negligible.all():
        return negligible
    live = ~negligible
    positive = live & (bases > 0)
    levels = np.full(coeffs.shape, -np.inf)
    levels[live] = np.log(magnitudes[live])
    slopes = np.zeros(coeffs.shape)
    slopes[positive] = np.log(bases[positive])
    alphas = [0.0]
    if horizon > 0:
        alphas.append(float(horizon))
        for a, b in itertools.combinations(np.flatnonzero(positive), 2):
            crossing = (levels[b] - levels[a]) / (slopes[a] - slopes[b])
            if 0 < crossing < horizon:
                alphas.append(float(crossing))
    cutoff = math.log(rel_tol)
    for alpha in alphas:
        current = levels if alpha == 0 else np.where(positive, levels + alpha * slopes, -np.inf)
        negligible &= current <= current.max() + cutoff
    return negligible


def evaluate(p, alpha):
    """ Returns p(α) for α > 0. """
    return p.evaluate(alpha)


def sign_changes(p):
    """ Returns the number of sign changes in the coefficients of p. """
    return p.sign_changes()


def _check_window(window, tol):
    try:
        lo, hi = (float(value) for value in window)
    except (TypeError, ValueError) as error:
        raise errors.WindowInvalid(f"window must be a pair of reals, not {window!r}") from error
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
        raise errors.WindowInvalid(f"window must satisfy 0 < lo < hi, not [{lo}, {hi}]")
    if not (isinstance(tol, (int, float)) and tol > 0 and math.isfinite(tol)):
        raise errors.WindowInvalid(f"isolation tolerance must be positive, not {tol!r}")
    return lo, hi


def _bisect(p, lo, hi, lo_sign, tol):
    for _ in range(constants.BISECTION_LIMIT):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        mid_sign = p.sign(mid)
        if mid_sign == 0:
            return models.Root(lo=max(lo, mid - tol / 2), hi=min(hi, mid + tol / 2))
        if mid_sign == lo_sign:
            lo = mid
        else:
            hi = mid
    return models.Root(lo=lo, hi=hi)


def _dip(p, lo, hi, side, tol, touch_tol):
    """
    Examines a same-sign dip of side·φ on [lo, hi]: returns two crossings if
    φ changes sign inside, one touching root if it reaches zero, else nothing.
    """
    result = scipy.optimize.minimize_scalar(
        lambda alpha: side * float(p.scaled(alpha)[0]),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": min(tol / 4, (hi - lo) / 4)},
    )
    lowest = float(result.x)
    value, magnitude = p.scaled(lowest)
    if side * value < 0:
        return [_bisect(p, lo, lowest, side, tol), _bisect(p, lowest, hi, -side, tol)]
    if side * value <= touch_tol * magnitude and _turns(p.derivative(), lo, lowest, hi, side, tol):
        return [models.Root(lo=max(lo, lowest - tol / 2), hi=min(hi, lowest + tol / 2),
                            parity=constants.PARITY_TOUCHING)]
    return []


def _turns(slope, lo, lowest, hi, side, tol):
    """
    Returns whether side·φ′ goes from negative to positive across the
    minimiser, so that the dip is a local minimum and not a boundary effect.
    """
    before = slope.sign(max(lo, lowest - tol))
    after = slope.sign(min(hi, lowest + tol))
    return side * before < 0 < side * after


def _scan(p, lo, hi, step, tol, touch_tol):
    count = max(2, int(math.ceil((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, count)
    values, magnitudes = p.scaled(grid)
    signs = np.sign(values).astype(int)
    signs[np.abs(values) <= touch_tol * magnitudes] = 0
    roots = []

    nonzero = np.flatnonzero(signs)
    for left, right in zip(nonzero[:-1], nonzero[1:]):
        if signs[left] != signs[right]:
            roots.append(_bisect(p, grid[left], grid[right], signs[left], tol))
        elif right - left > 1:
            center = 0.5 * (grid[left + 1] + grid[right - 1])
            roots.append(models.Root(lo=max(grid[left], center - tol / 2), hi=min(grid[right], center + tol / 2),
                                     parity=constants.PARITY_TOUCHING))

    heights = np.abs(values)
    last = count - 1
    for k in nonzero:
        before = heights[k - 1] if k > 0 else math.inf
        after = heights[k + 1] if k < last else math.inf
        if not (heights[k] < before and heights[k] <= after):
            continue
        neighbors = [index for index in (k - 1, k + 1) if 0 <= index <= last]
        if any(signs[index] != signs[k] for index in neighbors):
            continue
        roots.extend(_dip(p, grid[max(k - 1, 0)], grid[min(k + 1, last)], signs[k], tol, touch_tol))
    return _deduplicate(sorted(roots, key=lambda root: root.lo))


def _deduplicate(roots):
    unique = []
    for root in roots:
        if unique and root.lo <= unique[-1].hi:
            if root.parity == constants.PARITY_TOUCHING:
                continue
            if unique[-1].parity == constants.PARITY_TOUCHING:
                unique[-1] = root
                continue
        unique.append(root)
    return unique


def isolate_roots(p, window, tol=constants.ISOLATION_TOL, touch_tol=constants.TOUCH_TOL):
    """
    Brackets every root of p inside the window.

    A uniform grid with step min(0.01, (hi−lo)/1000) detects sign crossings,
    which are bisected to width ≤ tol. Same-sign dips are refined by bounded
    minimization: a dip below zero is a pair of crossings, a dip reaching
    touch_tol·(magnitude of p) is a touching root. When the roots found leave
    room for another pair under the window bound, the scan is repeated once
    on a grid ten times finer.

    Args:
        p (ExpPoly): The polynomial.
        window: The pair (lo, hi) with 0 < lo < hi.
        tol (float): The largest bracket width.
        touch_tol (float): The relative height below which a dip is a root.

    Returns:
        RootIsolation: The roots in increasing order with both root bounds.

    Raises:
        WindowInvalid: If the window or tolerance is malformed.
        IsolationInconclusive: If more roots were found than the Descartes bound allows.
    """
    lo, hi = _check_window(window, tol)
    isolation = models.RootIsolation(
        descartes_bound=p.descartes_bound(),
        window_bound=p.window_bound(),
        window=[lo, hi],
        tol=tol,
    )
    if isolation.descartes_bound == 0:
        return isolation
    step = min(constants.MAX_GRID_STEP, (hi - lo) / constants.GRID_POINTS)
    isolation.roots = _scan(p, lo, hi, step, tol, touch_tol)
    if isolation.window_bound - isolation.count() >= 2:
        logger.debug("Rescanning %s on a finer grid: %s roots found, window bound %s",
                     p, isolation.count(), isolation.window_bound)
        isolation.roots = _scan(p, lo, hi, step / constants.GRID_REFINEMENT, tol, touch_tol)
        isolation.refined = True
    if isolation.count() > isolation.descartes_bound:
        raise errors.IsolationInconclusive(
            f"found {isolation.count()} roots but the Descartes bound is {isolation.descartes_bound}",
            roots=[[root.lo, root.hi] for root in isolation.roots],
        )
    return isolation


def intervals_from_roots(p, isolation):
    """
    Converts isolated roots into the maximal open intervals where p < 0.

    The gaps between consecutive roots have constant sign; each negative gap
    is one interval. A touching root inside a negative region therefore
    splits it into two intervals sharing that endpoint.
    """
    lo, hi = isolation.window
    roots = isolation.roots
    intervals = []
    for k in range(len(roots) + 1):
        left = roots[k - 1] if k > 0 else None
        right = roots[k] if k < len(roots) else None
        gap_lo = left.hi if left else lo
        gap_hi = right.lo if right else hi
        if gap_hi <= gap_lo or p.sign(0.5 * (gap_lo + gap_hi)) >= 0:
            continue
        intervals.append(models.NegativityInterval(
            start=left.midpoint if left else lo,
            end=right.midpoint if right else hi,
            start_bracket=[left.lo, left.hi] if left else None,
            end_bracket=[right.lo, right.hi] if right else None,
            left_edge=left is None,
            right_edge=right is None,
        ))
    return intervals


def negativity_intervals(p, window, tol=constants.ISOLATION_TOL, touch_tol=constants.TOUCH_TOL):
    """
    Returns the maximal open subintervals of the window on which p < 0, with
    endpoints located to within tol. Endpoints on the window boundary are
    flagged as edges.

    Raises:
        WindowInvalid: If the window or tolerance is malformed.
    """
    return intervals_from_roots(p, isolate_roots(p, window, tol, touch_tol))


def sample_negativity(p, window, step):
    """
    Returns the negative runs of p on a uniform grid, as [first, last]
    negative sample pairs. This dense-sampling oracle carries no guarantee.
    """
    lo, hi = _check_window(window, step)
    grid = np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / step)) + 1))
    values, _ = p.scaled(grid)
    negative = values < 0
    runs = []
    start = None
    for index, flag in enumerate(negative):
        if flag and start is None:
            start = index
        elif not flag and start is not None:
            runs.append([float(grid[start]), float(grid[index - 1])])
            start = None
    if start is not None:
        runs.append([float(grid[start]), float(grid[-1])])
    return runs
