"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

The critical exponent of a single GDN matrix: the supremum of all α for which
some entry of A^α is negative, located by isolating the roots of every entry
polynomial inside (0, k(n) + 1]. Beyond k(n) every entry is provably
nonnegative.
"""

import concurrent.futures
import functools
import logging
import math

from gdn import bounds
from gdn import errors
from gdn import exppoly
from gdn import models
from gdn import powers
from gdn import spectral
from gdn import storage

logger = logging.getLogger(__name__)


def _isolate_entry(entry, epm, window, tol, touch_tol):
    poly = epm[entry]
    isolation = exppoly.isolate_roots(poly, window, tol, touch_tol)
    return isolation, exppoly.intervals_from_roots(poly, isolation)


def profile_matrix(matrix, tol=None, tolerances=None, workers=1):
    """
    Computes the negativity profile of a GDN matrix together with the entry
    polynomials it was computed from.

    Returns:
        tuple: The NegativityProfile and the EntryPolyMatrix.
    """
    tolerances = tolerances or models.ToleranceConfig()
    tol = tolerances.isolation_tol if tol is None else tol
    _, spectral_data = spectral.certify(matrix, tolerances)
    matrix = storage.as_matrix(matrix)
    n = matrix.shape[0]
    upper = bounds.theorem_upper_bound(n)
    window = [tolerances.window_floor, upper + 1.0]
    epm = powers.entry_polys(spectral_data, matrix, tolerances)
    profile = models.NegativityProfile(
        n=n,
        window=window,
        tol=tol,
        sign_changes=bounds.sign_change_matrix(epm),
        invertible=spectral_data.is_invertible(tolerances),
        upper_bound=upper,
        tolerances=tolerances,
    )

    entries = [(i, j) for i in range(n) for j in range(n)]
    task = functools.partial(_isolate_entry, epm=epm, window=window, tol=tol, touch_tol=tolerances.touch_tol)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, entries))
    else:
        results = [task(entry) for entry in entries]

    for (i, j), (isolation, intervals) in zip(entries, results):
        _record_entry(profile, i, j, isolation, intervals)
    _record_supremum(profile)
    return profile, epm


def _record_entry(profile, i, j, isolation, intervals):  # pylint: disable=too-many-arguments
    key = models.entry_key(i, j)
    profile.root_counts[key] = {"crossing": isolation.crossings(), "touching": isolation.touching()}
    if intervals:
        profile.intervals[key] = intervals
    if not isolation.saturated():
        profile.unsaturated.append(key)
    if isolation.crossings() > profile.sign_changes[i, j]:
        logger.error("Entry %s crosses zero %s times with only %s sign changes",
                     key, isolation.crossings(), profile.sign_changes[i, j])
        profile.falsifications.append({"kind": "descartes", "entry": [i, j], "crossings": isolation.crossings()})
    if profile.invertible:
        cap = bounds.component_cap(profile.sign_changes[i, j], i == j)
        observed = profile.components_above(i, j)
        if observed > cap:
            logger.error("Entry %s has %s negativity components above 1, cap %s", key, observed, cap)
            profile.cap_violations.append({"entry": [i, j], "components": observed, "cap": cap})


def _record_supremum(profile):
    for key, intervals in profile.intervals.items():
        last = intervals[-1]
        if profile.global_sup is None or last.end > profile.global_sup:
            profile.global_sup = last.end
            profile.witness = list(models.parse_entry_key(key))
            hi = profile.window[1]
            profile.bracket = list(last.end_bracket) if last.end_bracket else [hi, hi]
    if profile.bracket and profile.bracket[0] > profile.upper_bound + profile.tol:
        logger.error("Critical exponent bracket %s exceeds the bound %s for n=%s",
                     profile.bracket, profile.upper_bound, profile.n)
        profile.falsifications.append({
            "kind": "theorem_upper_bound",
            "entry": profile.witness,
            "bracket": profile.bracket,
            "bound": profile.upper_bound,
        })


def estimate_ce(matrix, tol=None, tolerances=None, workers=1):
    """
    Computes the critical exponent of a GDN matrix as a certified bracket.

    Every entry polynomial of A^α is scanned on (0, k(n)+1]; the critical
    exponent is the largest right endpoint of any negativity interval, and
    its bracket is the isolation bracket of that root. An empty profile
    means A^α is nonnegative for all α > 0, a critical exponent of 0.

    Args:
        matrix: A GDN matrix.
        tol (float, optional): The bracket width; defaults to the isolation tolerance.
        tolerances (ToleranceConfig, optional): The tolerances to use.
        workers (int): Threads used for the per-entry isolation.

    Returns:
        NegativityProfile: The intervals per entry, the bracket and every bound check.

    Raises:
        NotGdn: If the matrix is not GDN.
        IsolationInconclusive: If an entry shows more roots than Descartes allows.
    """
    profile, _ = profile_matrix(matrix, tol, tolerances, workers)
    return profile


def check_column_escape(profile, n=None):
    """
    Checks column by column that negativity stops for good once an integer
    window [m, m+1] is free of it, and that any column negative beyond 1 is
    also negative somewhere in (0, 1).

    Args:
        profile (NegativityProfile): A computed profile.
        n (int, optional): The order; defaults to the profile's.

    Returns:
        ColumnEscapeReport: The first clean window per column and any violations.
    """
    n = profile.n if n is None else n
    tol = profile.tol
    report = models.ColumnEscapeReport(n=n)
    horizon = int(math.ceil(profile.window[1])) + 1
    for j in range(n):
        intervals = [interval for i in range(n) for interval in profile.entry_intervals(i, j)]
        negative_windows = [m for m in range(horizon) if any(iv.intersects(m, m + 1, tol) for iv in intervals)]
        clean_from = next(m for m in range(horizon + 1) if m not in negative_windows)
        beyond_one = any(interval.end > 1 + tol for interval in intervals)
        below_one = 0 in negative_windows
        report.columns.append({
            "column": j,
            "clean_from": clean_from,
            "last_negative_window": max(negative_windows) if negative_windows else None,
            "negative_beyond_one": beyond_one,
            "component_below_one": below_one,
        })
        for interval in intervals:
            if interval.end > clean_from + tol:
                report.violations.append({"column": j, "interval": [interval.start, interval.end],
                                          "clean_from": clean_from})
        if beyond_one and not below_one:
            report.violations.append({"column": j, "kind": "no_component_below_one"})
        if negative_windows:
            last = max(negative_windows)
            if report.last_negative_window is None or last > report.last_negative_window:
                report.last_negative_window = last
    for violation in report.violations:
        logger.error("Column escape anomaly: %s", violation)
    report.clean = not report.violations
    return report


def _merge_close(intervals, gap):
    merged = []
    for start, end in intervals:
        if merged and start - merged[-1][1] <= gap:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return merged


def sampling_discrepancy(profile, epm, step=1e-4):
    """
    Compares a profile with the dense-sampling oracle on the same window.

    Every negative run seen on the grid must overlap an interval of the
    profile; the endpoint error of a run is measured against the profile
    interval it overlaps, after joining profile intervals separated by less
    than two grid steps.

    Returns:
        dict: `max_endpoint_error` and the list of `missed` runs as (entry, run).
    """
    worst = 0.0
    missed = []
    for i in range(profile.n):
        for j in range(profile.n):
            runs = exppoly.sample_negativity(epm[i, j], profile.window, step)
            found = _merge_close(
                [(interval.start, interval.end) for interval in profile.entry_intervals(i, j)], 2 * step)
            for first, last in runs:
                overlapping = [interval for interval in found if interval[0] <= last + step and interval[1] >= first - step]
                if not overlapping:
                    missed.append([[i, j], [first, last]])
                    continue
                start, end = overlapping[0][0], overlapping[-1][1]
                worst = max(worst, abs(start - first), abs(end - last))
    return {"max_endpoint_error": worst, "missed": missed}


def require_sound(profile):
    """
    Raises FalsificationFound when the critical exponent exceeds k(n) or an
    entry crosses zero more often than its sign changes allow. Component cap
    violations stay in the profile for the caller to inspect.
    """
    if profile.falsifications:
        raise errors.FalsificationFound(f"profile breaks a proven bound: {profile.falsifications}", profile)
    return profile
