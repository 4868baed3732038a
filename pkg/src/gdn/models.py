"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

This module defines the serializable report models produced by the gdn
package, together with the functions that encode them to JSON and decode
them back into live model instances.
"""

import json
import logging
import math
import numbers

import numpy as np

from gdn import constants
from gdn import errors

logger = logging.getLogger(__name__)


def dumps(value):
    """
    Encodes a value as JSON text, writing floats with 17 significant digits.

    Args:
        value: A model, container, numpy array or scalar.

    Returns:
        str: The JSON text.
    """
    if isinstance(value, SerializableDict):
        return encode(value)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return format(value, f".{constants.SIGNIFICANT_DIGITS}g")
        return json.dumps(str(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        return dumps(value.tolist())
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(str(key))}:{dumps(item)}" for key, item in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(dumps(item) for item in value) + "]"
    raise TypeError(f"Cannot encode {type(value).__name__}: {value!r}")


def encode(model):
    """
    Encodes a model object into its JSON string representation.

    Args:
        model (SerializableDict): The model object to be encoded.

    Returns:
        str: The JSON representation, tagged with the model's short class name.
    """
    buffer = []
    model.encode(buffer)
    return "".join(buffer)


def decode(json_string):
    """
    Decodes a JSON string representation of a model object and returns the
    corresponding model instance.

    Args:
        json_string (str): The JSON string representation of the model object.

    Returns:
        object: The model instance, or plain JSON data when no class tag is present.

    Raises:
        json.JSONDecodeError: If the JSON string is corrupt.
    """
    try:
        data = json.loads(json_string)
    except json.JSONDecodeError as error:
        logger.error("Corrupt json at char %s:", error.pos)
        for lineno, line in enumerate(json_string.split("\n")):
            logger.error("%5d %s", lineno + 1, line)
        raise
    return convert(data)


def convert(data):
    """
    Converts decoded JSON data into model instances, recursively. Dictionaries
    carrying a `_` class tag become instances of the tagged class.

    Args:
        data: Decoded JSON data.

    Returns:
        The converted data.
    """
    if isinstance(data, list):
        return [convert(item) for item in data]
    if not isinstance(data, dict):
        return data
    fields = {key: convert(value) for key, value in data.items() if key != "_"}
    if "_" not in data:
        return fields
    clazz = CLASSES[data["_"]]
    return clazz(**fields)


class SerializableDict(dict):
    """
    A dictionary whose attributes are mirrored into its items, so that report
    objects can be used both as plain objects and as JSON-ready mappings.
    """
    def __setattr__(self, name: str, value):
        object.__setattr__(self, name, value)
        if not name.startswith("_"):
            self[name] = value

    def encode(self, buffer: list):
        """
        Encodes the object into JSON and appends it to the provided buffer.

        Args:
            buffer (list): The list to append the encoded fields to.
        """
        buffer.append("{")
        buffer.append(f'"_":"{SHORT_CLASS_NAMES[self.__class__.__name__]}"')
        fields = self.encode_fields()
        if fields:
            buffer.append(",")
            buffer.append(fields)
        buffer.append("}")

    def encode_fields(self):
        """
        Encodes the public fields of the object as comma-separated JSON members.
        """
        data_fields = [
            (key, value)
            for key, value in self.__dict__.items()
            if not key.startswith("_")
        ]
        return ",".join(f"{json.dumps(key)}:{dumps(value)}" for key, value in data_fields)


class ToleranceConfig(SerializableDict):  # pylint: disable=too-many-instance-attributes
    """
    The numerical tolerances used by every operation. Relative tolerances are
    scaled by the spectral radius or the largest entry of the matrix at hand.
    """
    def __init__(self,  # pylint: disable=too-many-arguments
                 entry_tol=constants.ENTRY_TOL,
                 eig_tol=constants.EIG_TOL,
                 merge_tol=constants.MERGE_TOL,
                 imag_tol=constants.IMAG_TOL,
                 isolation_tol=constants.ISOLATION_TOL,
                 touch_tol=constants.TOUCH_TOL,
                 cond_limit=constants.COND_LIMIT,
                 projector_tol=constants.PROJECTOR_TOL,
                 reconstruction_tol=constants.RECONSTRUCTION_TOL,
                 coeff_zero_tol=constants.COEFF_ZERO_TOL,
                 pattern_tol=constants.PATTERN_TOL,
                 window_floor=constants.WINDOW_FLOOR):
        super().__init__()
        self.entry_tol = entry_tol
        self.eig_tol = eig_tol
        self.merge_tol = merge_tol
        self.imag_tol = imag_tol
        self.isolation_tol = isolation_tol
        self.touch_tol = touch_tol
        self.cond_limit = cond_limit
        self.projector_tol = projector_tol
        self.reconstruction_tol = reconstruction_tol
        self.coeff_zero_tol = coeff_zero_tol
        self.pattern_tol = pattern_tol
        self.window_floor = window_floor
        for key, value in self.items():
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise errors.PreconditionViolated(f"tolerance {key} must be a positive real, not {value!r}")

    def override(self, **overrides):
        """
        Returns a copy of this configuration with the given fields replaced.
        Fields passed as None keep their current value.
        """
        fields = dict(self)
        fields.update({key: value for key, value in overrides.items() if value is not None})
        return ToleranceConfig(**fields)


class GdnReport(SerializableDict):  # pylint: disable=too-many-instance-attributes
    """
    The verdict of a GDN validation. `is_gdn` holds exactly when `failures`
    is empty; clamped tolerance violations are listed in `warnings`.
    """
    def __init__(self, is_gdn=False, n=0, min_entry=0.0,  # pylint: disable=too-many-arguments
                 min_eigenvalue_real=0.0, max_eigenvalue_imag_abs=0.0,
                 diag_cond=math.inf, irreducible=False, primitive=False,
                 failures=None, warnings=None, eigenvalues=None, tolerances=None):
        super().__init__()
        self.is_gdn = is_gdn
        self.n = n
        self.min_entry = min_entry
        self.min_eigenvalue_real = min_eigenvalue_real
        self.max_eigenvalue_imag_abs = max_eigenvalue_imag_abs
        self.diag_cond = diag_cond
        self.irreducible = irreducible
        self.primitive = primitive
        self.failures = [] if failures is None else failures
        self.warnings = [] if warnings is None else warnings
        self.eigenvalues = [] if eigenvalues is None else eigenvalues
        self.tolerances = tolerances


class Root(SerializableDict):
    """
    An isolated root of an exponential polynomial: a bracket [lo, hi] and its
    parity, either a sign crossing or a touching (even multiplicity) root.
    """
    def __init__(self, lo=0.0, hi=0.0, parity=constants.PARITY_CROSSING):
        super().__init__()
        self.lo = lo
        self.hi = hi
        self.parity = parity

    @property
    def midpoint(self):
        """ The center of the bracket. """
        return 0.5 * (self.lo + self.hi)

    @property
    def multiplicity(self):
        """ The multiplicity the root contributes to a Descartes count. """
        return 2 if self.parity == constants.PARITY_TOUCHING else 1


class RootIsolation(SerializableDict):
    """
    The roots of an exponential polynomial inside a window, with the Descartes
    bound on all real roots and the (possibly tighter) bound on roots in α > 0.
    """
    def __init__(self, roots=None, descartes_bound=0, window_bound=0,  # pylint: disable=too-many-arguments
                 window=None, tol=constants.ISOLATION_TOL, refined=False):
        super().__init__()
        self.roots = [] if roots is None else roots
        self.descartes_bound = descartes_bound
        self.window_bound = window_bound
        self.window = window
        self.tol = tol
        self.refined = refined

    def crossings(self):
        """ Returns the number of sign crossings. """
        return sum(1 for root in self.roots if root.parity == constants.PARITY_CROSSING)

    def touching(self):
        """ Returns the number of touching roots. """
        return sum(1 for root in self.roots if root.parity == constants.PARITY_TOUCHING)

    def count(self):
        """ Returns the number of roots found, counting touching roots twice. """
        return sum(root.multiplicity for root in self.roots)

    def saturated(self):
        """ Returns whether no further root pair can hide inside the window. """
        return self.window_bound - self.count() < 2


class NegativityInterval(SerializableDict):
    """
    A maximal open interval on which an exponential polynomial is negative.
    Endpoints located by root isolation carry their bracket; endpoints on the
    window boundary are flagged as edges.
    """
    def __init__(self, start=0.0, end=0.0, start_bracket=None, end_bracket=None,  # pylint: disable=too-many-arguments
                 left_edge=False, right_edge=False):
        super().__init__()
        self.start = start
        self.end = end
        self.start_bracket = start_bracket
        self.end_bracket = end_bracket
        self.left_edge = left_edge
        self.right_edge = right_edge

    def intersects(self, lo, hi, tol=0.0):
        """
        Returns whether this interval meets the open interval (lo, hi), ignoring
        overlaps narrower than `tol` at either end.
        """
        return self.start < hi - tol and self.end > lo + tol


def entry_key(i, j):
    """ Returns the JSON key used for matrix entry (i, j). """
    return f"{i},{j}"


def parse_entry_key(key):
    """ Returns the (i, j) pair encoded by `entry_key`. """
    i, j = key.split(",")
    return int(i), int(j)


class NegativityProfile(SerializableDict):  # pylint: disable=too-many-instance-attributes
    """
    All negativity intervals of all entries of A^α inside the search window,
    the critical exponent bracket of the matrix, and the bound checks made
    while computing them.
    """
    def __init__(self, n=0, window=None, tol=constants.CE_TOL,  # pylint: disable=too-many-arguments,too-many-locals
                 intervals=None, global_sup=None, bracket=None, witness=None,
                 sign_changes=None, root_counts=None, invertible=False,
                 upper_bound=None, cap_violations=None, unsaturated=None,
                 falsifications=None, tolerances=None):
        super().__init__()
        self.n = n
        self.window = window
        self.tol = tol
        self.intervals = {} if intervals is None else intervals
        self.global_sup = global_sup
        self.bracket = bracket
        self.witness = witness
        self.sign_changes = sign_changes
        self.root_counts = {} if root_counts is None else root_counts
        self.invertible = invertible
        self.upper_bound = upper_bound
        self.cap_violations = [] if cap_violations is None else cap_violations
        self.unsaturated = [] if unsaturated is None else unsaturated
        self.falsifications = [] if falsifications is None else falsifications
        self.tolerances = tolerances

    def entry_intervals(self, i, j):
        """ Returns the negativity intervals of entry (i, j). """
        return self.intervals.get(entry_key(i, j), [])

    def components_above(self, i, j, threshold=1.0):
        """
        Returns the number of negativity components of entry (i, j) that meet
        (threshold, ∞); for threshold 1 their number is capped by the sign changes.
        """
        return sum(1 for interval in self.entry_intervals(i, j) if interval.end > threshold + self.tol)

    @property
    def critical_exponent(self):
        """ The critical exponent of the matrix; 0 when no entry goes negative. """
        return 0.0 if self.global_sup is None else self.global_sup


class ColumnEscapeReport(SerializableDict):
    """
    The per-column check that once an integer window [m, m+1] is free of
    negativity, the column stays nonnegative for every larger power.
    """
    def __init__(self, n=0, columns=None, violations=None, last_negative_window=None, clean=True):  # pylint: disable=too-many-arguments
        super().__init__()
        self.n = n
        self.columns = [] if columns is None else columns
        self.violations = [] if violations is None else violations
        self.last_negative_window = last_negative_window
        self.clean = clean


class SignChangeMatrix(SerializableDict):
    """
    The sign-change matrix W: w[i][j] counts sign alternations of the
    coefficients of entry (i, j), ordered by decreasing eigenvalue.
    """
    def __init__(self, n=0, w=None):
        super().__init__()
        self.n = n
        self.w = [] if w is None else w

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            return self.w[i][j]
        return super().__getitem__(key)


class TraceReport(SerializableDict):  # pylint: disable=too-many-instance-attributes
    """
    The trace and characteristic-polynomial necessities a GDN matrix with a
    strictly positive spectrum must satisfy.
    """
    def __init__(self, n=0, t1=0.0, t2=0.0, c1=0.0, c2=0.0,  # pylint: disable=too-many-arguments
                 positive_diagonal=0, char_poly=None, index_of_primitivity=None,
                 mip_bound=None, checks=None):
        super().__init__()
        self.n = n
        self.t1 = t1
        self.t2 = t2
        self.c1 = c1
        self.c2 = c2
        self.positive_diagonal = positive_diagonal
        self.char_poly = [] if char_poly is None else char_poly
        self.index_of_primitivity = index_of_primitivity
        self.mip_bound = mip_bound
        self.checks = {} if checks is None else checks

    @property
    def holds(self):
        """ Whether every necessity check passed. """
        return all(self.checks.values())


class BlockStructure(SerializableDict):
    """
    The strongly connected components of a pattern digraph, ordered so that the
    permuted matrix is block upper triangular.
    """
    def __init__(self, n=0, blocks=None, permutation=None, irreducible=True):
        super().__init__()
        self.n = n
        self.blocks = [] if blocks is None else blocks
        self.permutation = [] if permutation is None else permutation
        self.irreducible = irreducible


class Prop44Params(SerializableDict):
    """
    Parameters of the upper-bidiagonal cycle construction: odd order n,
    strictly decreasing positive diagonal d (the last diagonal entry is 0)
    and the coupling eps.
    """
    def __init__(self, n=3, d=None, eps=0.0):
        super().__init__()
        self.n = n
        self.d = [] if d is None else [float(value) for value in d]
        self.eps = float(eps)

    def validate(self):
        """
        Checks the parameter invariants.

        Raises:
            PreconditionViolated: If n is not an odd integer ≥ 3, d is not
                strictly decreasing and positive, or eps is outside (0, min gap / 2).
        """
        if not isinstance(self.n, numbers.Integral) or self.n < 3 or self.n % 2 == 0:
            raise errors.PreconditionViolated(f"n must be an odd integer >= 3, not {self.n!r}")
        if len(self.d) != self.n - 1:
            raise errors.PreconditionViolated(f"d must have {self.n - 1} entries, not {len(self.d)}")
        diagonal = self.d + [0.0]
        gaps = [diagonal[i] - diagonal[i + 1] for i in range(self.n - 1)]
        if min(gaps) <= 0:
            raise errors.PreconditionViolated(f"d must be strictly decreasing and positive: {self.d}")
        if not 0 < self.eps < min(gaps) / 2:
            raise errors.PreconditionViolated(f"eps must lie in (0, {min(gaps) / 2}), not {self.eps}")
        return self


class Prop44Report(SerializableDict):
    """
    The verification clauses of one construction and whether all of them hold.
    """
    def __init__(self, params=None, clauses=None, det=0.0, eigenvalues=None,  # pylint: disable=too-many-arguments
                 nn_powers=None, intervals=None):
        super().__init__()
        self.params = params
        self.clauses = {} if clauses is None else clauses
        self.det = det
        self.eigenvalues = [] if eigenvalues is None else eigenvalues
        self.nn_powers = [] if nn_powers is None else nn_powers
        self.intervals = [] if intervals is None else intervals

    @property
    def passed(self):
        """ Whether every clause holds. """
        return bool(self.clauses) and all(self.clauses.values())


class HadamardSpectrum(SerializableDict):
    """
    The eigenvalues of one Hadamard power, real parts sorted descending, with
    the largest imaginary part as a diagnostic.
    """
    def __init__(self, alpha=1.0, eigenvalues=None, max_imag=0.0):
        super().__init__()
        self.alpha = alpha
        self.eigenvalues = [] if eigenvalues is None else eigenvalues
        self.max_imag = max_imag


class HadamardReport(SerializableDict):
    """
    The outcome of sampling the Hadamard powers of the 3-by-3 example on (1, alpha_max].
    """
    def __init__(self, alpha_max=0.0, samples=0, confirmed=False,  # pylint: disable=too-many-arguments
                 max_min_eigenvalue=None, max_relative_error=0.0, failures=None):
        super().__init__()
        self.alpha_max = alpha_max
        self.samples = samples
        self.confirmed = confirmed
        self.max_min_eigenvalue = max_min_eigenvalue
        self.max_relative_error = max_relative_error
        self.failures = [] if failures is None else failures


class BlockPreservationReport(SerializableDict):
    """
    The largest lower-left block of A^α, relative to ‖A^α‖∞, over a grid of α.
    """
    def __init__(self, n=0, blocks=None, alphas=0, max_ratio=0.0, tol=constants.BLOCK_TOL):  # pylint: disable=too-many-arguments
        super().__init__()
        self.n = n
        self.blocks = [] if blocks is None else blocks
        self.alphas = alphas
        self.max_ratio = max_ratio
        self.tol = tol

    @property
    def preserved(self):
        """ Whether the zero block stayed below tolerance. """
        return self.max_ratio <= self.tol


class SearchConfig(SerializableDict):  # pylint: disable=too-many-instance-attributes
    """
    The configuration of one extremal-matrix search.
    """
    def __init__(self, n=3, target=constants.TARGET_MAX_CE, seed=0,  # pylint: disable=too-many-arguments
                 budget=constants.DEFAULT_BUDGET, pattern=None,
                 entry_range=constants.DEFAULT_ENTRY_RANGE,
                 perturb_scale=constants.DEFAULT_PERTURB_SCALE,
                 restarts=constants.DEFAULT_RESTARTS,
                 patience=constants.DEFAULT_PATIENCE,
                 start=None, ce_tol=constants.CE_TOL, workers=1):
        super().__init__()
        self.n = n
        self.target = target
        self.seed = seed
        self.budget = budget
        self.pattern = pattern
        self.entry_range = list(entry_range)
        self.perturb_scale = perturb_scale
        self.restarts = restarts
        self.patience = patience
        self.start = start
        self.ce_tol = ce_tol
        self.workers = workers

    def validate(self):
        """
        Checks the configuration invariants.

        Raises:
            PreconditionViolated: On a bad target, budget, entry range or pattern shape.
        """
        if self.target not in (constants.TARGET_MAX_CE, constants.TARGET_MAX_MIP):
            raise errors.PreconditionViolated(f"unknown search target {self.target!r}")
        if self.budget < 1 or self.restarts < 1:
            raise errors.PreconditionViolated("budget and restarts must be at least 1")
        lo, hi = self.entry_range
        if not 0 < lo <= hi:
            raise errors.PreconditionViolated(f"entry_range must be positive, not {self.entry_range}")
        for matrix in (self.pattern, self.start):
            if matrix is not None and np.shape(matrix) != (self.n, self.n):
                raise errors.PreconditionViolated(f"pattern and start must be {self.n}x{self.n}")
        return self


class SearchRecord(SerializableDict):  # pylint: disable=too-many-instance-attributes
    """
    The best matrix found by a search, with its score and the configuration that produced it.
    """
    def __init__(self, best=None, score=0.0, ce_bracket=None,  # pylint: disable=too-many-arguments
                 index_of_primitivity=None, iterations=0, feasible=0,
                 seed=0, restart=0, config=None):
        super().__init__()
        self.best = best
        self.score = score
        self.ce_bracket = ce_bracket
        self.index_of_primitivity = index_of_primitivity
        self.iterations = iterations
        self.feasible = feasible
        self.seed = seed
        self.restart = restart
        self.config = config


class FeasibilityVerdict(SerializableDict):
    """
    The outcome of sampling GDN matrices on a pattern. A negative verdict only
    says that none was found within the given number of trials.
    """
    def __init__(self, found=False, witness=None, trials=0, seed=0):
        super().__init__()
        self.found = found
        self.witness = witness
        self.trials = trials
        self.seed = seed


class ClaimResult(SerializableDict):
    """
    The outcome of checking one claim of the acceptance suite.
    """
    def __init__(self, claim="", reference="", passed=False, detail=""):
        super().__init__()
        self.claim = claim
        self.reference = reference
        self.passed = passed
        self.detail = detail


SHORT_CLASS_NAMES = {
    "ToleranceConfig": "t",
    "GdnReport": "g",
    "Root": "r",
    "RootIsolation": "i",
    "NegativityInterval": "v",
    "NegativityProfile": "p",
    "ColumnEscapeReport": "e",
    "SignChangeMatrix": "w",
    "TraceReport": "c",
    "BlockStructure": "b",
    "Prop44Params": "q",
    "Prop44Report": "k",
    "HadamardSpectrum": "h",
    "HadamardReport": "H",
    "BlockPreservationReport": "B",
    "SearchConfig": "s",
    "SearchRecord": "S",
    "FeasibilityVerdict": "f",
    "ClaimResult": "a",
}

CLASSES = {short: globals()[name] for name, short in SHORT_CLASS_NAMES.items()}
