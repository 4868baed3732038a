"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Randomized hill climbing for GDN matrices with a large critical exponent or a
large index of primitivity. Each restart draws from its own substream of
(seed, restart), so results do not depend on how restarts are scheduled.
"""

import collections
import concurrent.futures
import json
import logging

import numpy as np

from gdn import bounds
from gdn import constants
from gdn import constructions
from gdn import critical
from gdn import errors
from gdn import models
from gdn import primitivity
from gdn import sampling
from gdn import spectral

logger = logging.getLogger(__name__)

Scored = collections.namedtuple("Scored", ["score", "bracket", "index"])
Climb = collections.namedtuple("Climb", ["restart", "matrix", "scored", "iterations", "feasible"])


def load_config(path):
    """
    Reads a SearchConfig from a JSON file. Missing fields take their defaults.

    Raises:
        MatrixFormatError: If the file cannot be read or is not a JSON object.
        PreconditionViolated: If a field is unknown or invalid.
    """
    try:
        with open(path, encoding="utf-8") as fd:
            data = json.load(fd)
    except (OSError, json.JSONDecodeError) as error:
        raise errors.MatrixFormatError(f"cannot read search config {path}: {error}") from error
    return config_from_dict(data)


def config_from_dict(data):
    """ Builds and validates a SearchConfig from decoded JSON. """
    if not isinstance(data, dict):
        raise errors.MatrixFormatError("search config must be a JSON object")
    try:
        return models.SearchConfig(**{key: value for key, value in data.items() if key != "_"}).validate()
    except TypeError as error:
        raise errors.PreconditionViolated(f"bad search config: {error}") from error


def seed_patterns(config):
    """
    Returns the patterns restarts draw from: the fixed pattern when one is
    configured, otherwise the cycle with a full diagonal, the cycle missing its
    last diagonal entry, the cycle with two diagonal entries, and the patterns
    of the published matrices of the same order.
    """
    if config.pattern is not None:
        return [primitivity.BoolPattern(np.array(config.pattern, dtype=bool))]
    n = config.n
    patterns = [
        sampling.cycle_pattern(n),
        sampling.cycle_pattern(n, range(n - 1)),
        sampling.cycle_pattern(n, sorted({0, n // 2})),
    ]
    for name in constants.PAPER_MATRIX_NAMES:
        matrix = constructions.paper_matrix(name)
        if matrix.shape[0] == n and not name.startswith("hadamard"):
            patterns.append(primitivity.BoolPattern.from_matrix(matrix))
    unique = []
    for pattern in patterns:
        if pattern not in unique:
            unique.append(pattern)
    return unique


def score_candidate(matrix, config, tolerances):
    """
    Scores a candidate: the lower end of its critical exponent bracket, or its
    index of primitivity.

    Returns:
        Scored: The score with the bracket and index, or None when the
        candidate is not GDN or its roots cannot be isolated.

    Raises:
        FalsificationFound: If the candidate breaks a proven bound.
    """
    report, spectral_data = spectral.inspect(matrix, tolerances)
    if not report.is_gdn:
        return None
    n = matrix.shape[0]
    index = primitivity.index_of_primitivity(primitivity.BoolPattern.from_matrix(matrix))
    if index is not None and n >= 2 and index > bounds.mip_upper_bound(n) and spectral_data.is_invertible(tolerances):
        logger.error("Index of primitivity %s exceeds 2n-3 for n=%s", index, n)
        raise errors.FalsificationFound(f"index of primitivity {index} exceeds {bounds.mip_upper_bound(n)}",
                                        {"matrix": matrix.tolist(), "index": index})
    if config.target == constants.TARGET_MAX_MIP:
        return Scored(float(index or 0), None, index)
    try:
        profile = critical.estimate_ce(matrix, tol=config.ce_tol, tolerances=tolerances)
    except errors.IsolationInconclusive as error:
        logger.debug("Skipping candidate: %s", error)
        return None
    critical.require_sound(profile)
    bracket = profile.bracket
    return Scored(bracket[0] if bracket else 0.0, bracket, index)


def _moves(fixed):
    moves = [constants.MOVE_PERTURB, constants.MOVE_ROW_SCALE, constants.MOVE_COLUMN_SCALE]
    if not fixed:
        moves.append(constants.MOVE_DIAGONAL_FILL)
    return moves


def apply_move(matrix, move, rng, scale):
    """
    Returns a neighbor of the matrix.

    Moves:
        perturb: each positive entry, with probability ½, is multiplied by exp(N(0, scale)).
        row_scale: one or two rows are multiplied by a common factor exp(N(0, scale)).
        column_scale: the same for columns.
        diagonal_fill: a zero diagonal entry becomes a small positive one.
    """
    neighbor = matrix.copy()
    n = matrix.shape[0]
    if move == constants.MOVE_PERTURB:
        chosen = (neighbor > 0) & (rng.uniform(size=neighbor.shape) < 0.5)
        neighbor[chosen] *= np.exp(rng.normal(0.0, scale, np.count_nonzero(chosen)))
    elif move in (constants.MOVE_ROW_SCALE, constants.MOVE_COLUMN_SCALE):
        chosen = rng.choice(n, size=min(n, int(rng.integers(1, 3))), replace=False)
        factor = np.exp(rng.normal(0.0, scale))
        if move == constants.MOVE_ROW_SCALE:
            neighbor[chosen, :] *= factor
        else:
            neighbor[:, chosen] *= factor
    elif move == constants.MOVE_DIAGONAL_FILL:
        empty = np.flatnonzero(np.diag(neighbor) == 0)
        if empty.size:
            index = rng.choice(empty)
            neighbor[index, index] = neighbor[neighbor > 0].min() * rng.uniform(0.01, 1.0)
    else:
        raise errors.PreconditionViolated(f"unknown move {move!r}")
    return neighbor


def climb(config, restart, patterns, budget, tolerances):
    """
    Runs one restart: samples until a GDN candidate appears, then accepts
    strictly improving moves until `patience` moves in a row fail or the
    budget is spent.

    Returns:
        Climb: The best matrix of the restart (None if none was GDN) with its score.
    """
    rng = sampling.rng_for(config.seed, restart)
    fixed = config.pattern is not None
    used = feasible = 0
    current = scored = None
    while used < budget and scored is None:
        if used == 0 and restart == 0 and config.start is not None:
            candidate = np.array(config.start, dtype=float)
        else:
            pattern = patterns[restart % len(patterns)] if used == 0 else patterns[int(rng.integers(len(patterns)))]
            mode = constants.SAMPLE_GRADED if used % 2 == 0 else constants.SAMPLE_LOGUNIFORM
            candidate = sampling.sample_on_pattern(pattern, rng, mode, config.entry_range)
        used += 1
        scored = score_candidate(candidate, config, tolerances)
        if scored is not None:
            current = candidate
            feasible += 1

    stale = 0
    moves = _moves(fixed)
    while current is not None and used < budget and stale < config.patience:
        move = moves[int(rng.integers(len(moves)))]
        neighbor = apply_move(current, move, rng, config.perturb_scale)
        used += 1
        candidate_score = score_candidate(neighbor, config, tolerances)
        if candidate_score is None:
            stale += 1
            continue
        feasible += 1
        if candidate_score.score > scored.score:
            logger.debug("Restart %s: %s raises the score to %s", restart, move, candidate_score.score)
            current, scored, stale = neighbor, candidate_score, 0
        else:
            stale += 1
    return Climb(restart, current, scored, used, feasible)


def revalidate(record, tolerances=None):
    """
    Replays a record from scratch: the matrix must still be GDN, its critical
    exponent bracket must agree with the recorded one, and neither the
    critical exponent nor the index of primitivity may exceed its bound.

    Returns:
        dict: One boolean per check.
    """
    tolerances = tolerances or models.ToleranceConfig()
    matrix = np.array(record.best, dtype=float)
    n = matrix.shape[0]
    config = record.config
    report, spectral_data = spectral.inspect(matrix, tolerances)
    checks = {"gdn": report.is_gdn}
    if not checks["gdn"]:
        return checks
    index = primitivity.index_of_primitivity(primitivity.BoolPattern.from_matrix(matrix))
    checks["index_matches"] = index == record.index_of_primitivity
    checks["index_within_bound"] = (n < 2 or index is None or index <= bounds.mip_upper_bound(n)
                                    or not spectral_data.is_invertible(tolerances))
    if config.target == constants.TARGET_MAX_CE:
        profile = critical.estimate_ce(matrix, tol=config.ce_tol, tolerances=tolerances)
        bracket = profile.bracket or [0.0, 0.0]
        recorded = record.ce_bracket or [0.0, 0.0]
        checks["bracket_matches"] = abs(bracket[0] - recorded[0]) <= config.ce_tol + 1e-12
        checks["ce_within_bound"] = bracket[0] <= bounds.theorem_upper_bound(n) + config.ce_tol
    return checks


def search(config, tolerances=None):
    """
    Searches for an extremal GDN matrix by hill climbing with restarts.

    The budget is split evenly over the restarts. Restarts may run on
    `config.workers` threads; the best record is the highest score, ties
    going to the lowest restart index.

    Args:
        config (SearchConfig): The search configuration.
        tolerances (ToleranceConfig, optional): The tolerances to use.

    Returns:
        SearchRecord: The best matrix, its score and the configuration echo.

    Raises:
        NoFeasibleCandidate: If no candidate in the whole budget was GDN.
        FalsificationFound: If a candidate or the final record breaks a proven bound.
        NumericalFailure: If the final record does not replay.
    """
    config.validate()
    tolerances = tolerances or models.ToleranceConfig()
    patterns = seed_patterns(config)
    budget = max(1, config.budget // config.restarts)
    restarts = range(config.restarts)
    if config.workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.workers) as pool:
            climbs = list(pool.map(lambda restart: climb(config, restart, patterns, budget, tolerances), restarts))
    else:
        climbs = [climb(config, restart, patterns, budget, tolerances) for restart in restarts]

    best = None
    for result in climbs:
        if result.scored is not None and (best is None or result.scored.score > best.scored.score):
            best = result
    if best is None:
        raise errors.NoFeasibleCandidate(f"no GDN candidate of order {config.n} in {config.budget} iterations")
    logger.info("Best score %s found in restart %s", best.scored.score, best.restart)

    record = models.SearchRecord(
        best=best.matrix.tolist(),
        score=best.scored.score,
        ce_bracket=best.scored.bracket,
        index_of_primitivity=best.scored.index,
        iterations=sum(result.iterations for result in climbs),
        feasible=sum(result.feasible for result in climbs),
        seed=config.seed,
        restart=best.restart,
        config=config,
    )
    checks = revalidate(record, tolerances)
    if not (checks.get("index_within_bound", True) and checks.get("ce_within_bound", True)):
        raise errors.FalsificationFound(f"search record breaks a proven bound: {checks}", record)
    if not all(checks.values()):
        raise errors.NumericalFailure(f"search record does not replay: {checks}")
    return record
