"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

The gdnce command-line interface. It reads matrices from JSON or CSV files,
runs one operation of the gdn package per subcommand and prints the result
on stdout. Diagnostics and errors go to stderr; errors are printed as JSON.

Exit codes: 0 for success or an affirmative verdict, 2 for a negative
verdict, 64 for usage and input errors, 70 for numerical failures.
"""

import argparse
import importlib.metadata
import logging
import sys
import traceback

from gdn import acceptance
from gdn import bounds
from gdn import constants
from gdn import constructions
from gdn import critical
from gdn import errors
from gdn import models
from gdn import powers
from gdn import primitivity
from gdn import sampling
from gdn import search
from gdn import spectral
from gdn import storage

try:
    VERSION = importlib.metadata.version("gdnce")
except importlib.metadata.PackageNotFoundError:
    VERSION = "unknown"

logger = logging.getLogger("gdnce")

USAGE_ERRORS = (
    errors.MatrixFormatError,
    errors.UnknownName,
    errors.PreconditionViolated,
    errors.WindowInvalid,
    errors.NotApplicable,
)
NEGATIVE_VERDICTS = (
    errors.NotGdn,
    errors.NegativeEigenvalue,
    errors.NegativeEntry,
    errors.VerificationFailed,
    errors.NoFeasibleCandidate,
)


class UsageError(errors.GdnError):
    """ The command line could not be parsed. """
    code = "UsageError"


class ArgumentParser(argparse.ArgumentParser):
    """
    An argument parser that raises UsageError instead of exiting, so that
    parse errors are reported like every other error.
    """
    def error(self, message):
        raise UsageError(message)


def exit_code(error):
    """
    Returns the exit code for an exception raised by a command.
    """
    if isinstance(error, USAGE_ERRORS + (UsageError,)):
        return constants.EXIT_USAGE
    if isinstance(error, NEGATIVE_VERDICTS):
        return constants.EXIT_NEGATIVE
    return constants.EXIT_NUMERICAL


def handle_error(error):
    """
    Reports an exception that escaped a command.

    Args:
        error (Exception): The exception that occurred.

    Returns:
        int: The exit code.
    """
    if isinstance(error, errors.GdnError):
        logger.error(error)
        report = error.to_dict()
    else:
        logger.error("Unexpected %s", error.__class__.__name__)
        traceback.print_exc()
        report = {"error": f"{error.__class__.__name__}: {error}", "status": "error", "code": "InternalError"}
    try:
        text = models.dumps(report)
    except TypeError:
        report.pop("details", None)
        text = models.dumps(report)
    print(text, file=sys.stderr)
    return exit_code(error)


def emit(value):
    """ Prints a result on stdout, as JSON unless it already is text. """
    print(value if isinstance(value, str) else models.dumps(value))


def tolerances_from(args):
    """ Returns the ToleranceConfig selected by the global flags. """
    return models.ToleranceConfig().override(
        entry_tol=args.entry_tol,
        eig_tol=args.eig_tol,
        merge_tol=args.merge_tol,
        imag_tol=args.imag_tol,
        isolation_tol=args.isolation_tol,
        touch_tol=args.touch_tol,
        cond_limit=args.cond_limit,
    )


def parse_entry(text):
    """ Parses a 0-based matrix entry written as `i,j`. """
    try:
        i, j = (int(value) for value in text.split(","))
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"entry must be written as i,j, not {text!r}") from error
    return i, j


def cmd_validate(args, tol):
    """ Validates a matrix as GDN. """
    report = spectral.validate_gdn(storage.load_matrix(args.matrix), tol)
    emit(report)
    return constants.EXIT_OK if report.is_gdn else constants.EXIT_NEGATIVE


def cmd_ce(args, tol):
    """ Computes the critical exponent profile of a GDN matrix. """
    profile = critical.estimate_ce(storage.load_matrix(args.matrix), args.tol, tol, args.workers)
    if args.column_escape:
        emit({"profile": profile, "column_escape": critical.check_column_escape(profile)})
    else:
        emit(profile)
    return constants.EXIT_OK


def cmd_power(args, tol):
    """ Prints the conventional or Hadamard power of a matrix. """
    matrix = storage.load_matrix(args.matrix)
    if args.hadamard:
        result = powers.hadamard_power(matrix, args.alpha)
    else:
        result = powers.matrix_power(matrix, args.alpha, tol)
    emit(storage.encode_matrix(result))
    return constants.EXIT_OK


def cmd_trajectory(args, tol):
    """ Prints entries of A^α over an α-grid as CSV. """
    matrix = storage.load_matrix(args.matrix)
    _, spectral_data = spectral.certify(matrix, tol)
    epm = powers.entry_polys(spectral_data, matrix, tol)
    text = powers.trajectory(epm, args.entries, args.window, args.step)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fd:
            fd.write(text)
    else:
        sys.stdout.write(text)
    return constants.EXIT_OK


def cmd_primitivity(args, tol):
    """ Prints the index of primitivity, or a full pattern report. """
    matrix = storage.load_matrix(args.matrix)
    pattern = primitivity.BoolPattern.from_matrix(matrix, tol.pattern_tol)
    index = primitivity.index_of_primitivity(pattern)
    if not args.report:
        emit(index)
        return constants.EXIT_OK if index is not None else constants.EXIT_NEGATIVE
    report = {
        "index_of_primitivity": index,
        "primitive": index is not None,
        "blocks": primitivity.reducibility_blocks(pattern),
        "wielandt_bound": bounds.wielandt_bound(pattern.n),
    }
    try:
        report["diagonal_support_bound"] = primitivity.diagonal_support_bound(pattern)
    except errors.NotApplicable as error:
        logger.info("No diagonal support bound: %s", error)
        report["diagonal_support_bound"] = None
    try:
        report["trace_necessities"] = primitivity.gdn_trace_necessities(matrix, tol)
    except errors.PreconditionViolated as error:
        logger.info("No trace necessities: %s", error)
        report["trace_necessities"] = None
    emit(report)
    return constants.EXIT_OK if index is not None else constants.EXIT_NEGATIVE


def cmd_blocks(args, tol):
    """ Reports the block structure of a GDN matrix and whether powers keep its zero block. """
    report = powers.block_preservation(storage.load_matrix(args.matrix), tol=tol)
    emit(report)
    return constants.EXIT_OK if report.preserved else constants.EXIT_NEGATIVE


def cmd_bounds(args, tol):  # pylint: disable=unused-argument
    """ Prints k(n), or every closed-form bound with --table. """
    emit(bounds.bounds_table(args.n) if args.table else bounds.theorem_upper_bound(args.n))
    return constants.EXIT_OK


def cmd_construct(args, tol):
    """ Prints a constructed or published matrix. """
    if args.family == "paper":
        if not args.name:
            raise UsageError("--family paper needs --name")
        emit(storage.encode_matrix(constructions.paper_matrix(args.name)))
        return constants.EXIT_OK
    if args.d is not None or args.eps is not None:
        if args.d is None or args.eps is None:
            raise UsageError("--d and --eps go together")
        params = models.Prop44Params(n=args.n, d=args.d, eps=args.eps).validate()
    else:
        params = constructions.random_prop44_params(args.n, args.seed)
    if args.report:
        report = constructions.verify_prop44(params, tol)
        emit(report)
        return constants.EXIT_OK if report.passed else constants.EXIT_NEGATIVE
    emit(storage.encode_matrix(constructions.build_prop44(params, tol)))
    return constants.EXIT_OK


def cmd_search(args, tol):
    """ Runs an extremal-matrix search from a JSON configuration. """
    config = search.load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    record = search.search(config, tol)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fd:
            fd.write(models.encode(record))
            fd.write("\n")
    emit(record)
    return constants.EXIT_OK


def cmd_feasibility(args, tol):  # pylint: disable=unused-argument
    """ Samples GDN matrices on the pattern of a matrix file. """
    pattern = primitivity.BoolPattern.from_matrix(storage.load_matrix(args.matrix))
    verdict = sampling.pattern_feasibility(pattern, args.trials, args.seed)
    emit(verdict)
    return constants.EXIT_OK if verdict.found else constants.EXIT_NEGATIVE


def cmd_hadamard(args, tol):  # pylint: disable=unused-argument
    """ Runs the Hadamard power demonstration. """
    report = constructions.hadamard_no_ce_demo(args.alpha_max, args.step)
    emit(report)
    return constants.EXIT_OK if report.confirmed else constants.EXIT_NEGATIVE


def format_claims(results):
    """ Formats claim results as a fixed-width pass/fail table. """
    width = max(len(result.claim) for result in results)
    lines = [f"{'claim'.ljust(width)}  result  detail"]
    for result in results:
        lines.append(f"{result.claim.ljust(width)}  {'PASS' if result.passed else 'FAIL':6}  {result.detail}")
    return "\n".join(lines)


def cmd_verify_paper(args, tol):
    """ Runs the claim suite and prints a pass/fail table. """
    results = acceptance.verify_paper(args.quick, args.seed, tol, args.claim)
    if not results:
        raise UsageError(f"no claim named {args.claim}")
    emit(results if args.json else format_claims(results))
    return constants.EXIT_OK if all(result.passed for result in results) else constants.EXIT_NEGATIVE


def build_parser():
    """
    Builds the argument parser with one subparser per command.
    """
    parser = ArgumentParser(prog="gdnce", description="Critical exponents of generalized doubly nonnegative matrices")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output on stderr")
    for name in ("entry", "eig", "merge", "imag", "isolation", "touch"):
        parser.add_argument(f"--{name}-tol", type=float, help=f"override the {name} tolerance")
    parser.add_argument("--cond-limit", type=float, help="largest accepted eigenvector condition number")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    command = commands.add_parser("validate", help="decide whether a matrix is GDN")
    command.add_argument("matrix", help="JSON or CSV matrix file")
    command.set_defaults(handler=cmd_validate)

    command = commands.add_parser("ce", help="compute the critical exponent and negativity profile")
    command.add_argument("matrix")
    command.add_argument("--tol", type=float, help="bracket width, defaults to the isolation tolerance")
    command.add_argument("--workers", type=int, default=1, help="threads for per-entry root isolation")
    command.add_argument("--column-escape", action="store_true", help="add the per-column escape report")
    command.set_defaults(handler=cmd_ce)

    command = commands.add_parser("power", help="print A^alpha")
    command.add_argument("matrix")
    command.add_argument("--alpha", type=float, required=True)
    command.add_argument("--hadamard", action="store_true", help="entrywise power instead")
    command.set_defaults(handler=cmd_power)

    command = commands.add_parser("trajectory", help="tabulate entries of A^alpha as CSV")
    command.add_argument("matrix")
    command.add_argument("--entries", type=parse_entry, nargs="+", required=True, help="0-based entries as i,j")
    command.add_argument("--window", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    command.add_argument("--step", type=float, default=0.01)
    command.add_argument("--output", help="write the CSV here instead of stdout")
    command.set_defaults(handler=cmd_trajectory)

    command = commands.add_parser("primitivity", help="print the index of primitivity")
    command.add_argument("matrix")
    command.add_argument("--report", action="store_true", help="print blocks, bounds and trace necessities")
    command.set_defaults(handler=cmd_primitivity)

    command = commands.add_parser("blocks", help="check that powers keep the zero block of a reducible matrix")
    command.add_argument("matrix")
    command.set_defaults(handler=cmd_blocks)

    command = commands.add_parser("bounds", help="print the critical exponent bound k(n)")
    command.add_argument("--n", type=int, required=True)
    command.add_argument("--table", action="store_true", help="print every closed-form bound as JSON")
    command.set_defaults(handler=cmd_bounds)

    command = commands.add_parser("construct", help="print a constructed or published matrix")
    command.add_argument("--family", choices=["prop44", "paper"], required=True)
    command.add_argument("--name", choices=constants.PAPER_MATRIX_NAMES)
    command.add_argument("--n", type=int, default=3)
    command.add_argument("--seed", type=int, default=0)
    command.add_argument("--d", type=float, nargs="+", help="the diagonal d_1 > ... > d_(n-1) > 0")
    command.add_argument("--eps", type=float)
    command.add_argument("--report", action="store_true", help="print the verification clauses instead")
    command.set_defaults(handler=cmd_construct)

    command = commands.add_parser("search", help="search for extremal GDN matrices")
    command.add_argument("config", help="JSON search configuration")
    command.add_argument("--seed", type=int, help="override the configured seed")
    command.add_argument("--output", help="also write the record to this file")
    command.set_defaults(handler=cmd_search)

    command = commands.add_parser("feasibility", help="sample GDN matrices on the pattern of a matrix")
    command.add_argument("matrix")
    command.add_argument("--trials", type=int, default=1000)
    command.add_argument("--seed", type=int, default=0)
    command.set_defaults(handler=cmd_feasibility)

    command = commands.add_parser("hadamard", help="show that Hadamard powers have no critical exponent")
    command.add_argument("--alpha-max", type=float, required=True)
    command.add_argument("--step", type=float, default=constants.HADAMARD_DEMO_STEP)
    command.set_defaults(handler=cmd_hadamard)

    command = commands.add_parser("verify-paper", help="replay every published claim")
    command.add_argument("--quick", action="store_true", help="use small corpora")
    command.add_argument("--seed", type=int, default=0)
    command.add_argument("--claim", nargs="+", help="run only these claims")
    command.add_argument("--json", action="store_true", help="print the results as JSON")
    command.set_defaults(handler=cmd_verify_paper)
    return parser


def main(argv=None):
    """
    Parses the command line, runs one command and returns its exit code.
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as error:
        return handle_error(error)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format=constants.LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        return args.handler(args, tolerances_from(args))
    except Exception as error:  # pylint: disable=broad-except
        return handle_error(error)


def run_cli():
    """
    Runs gdnce after `pip install gdnce` and calling `gdnce`.
    """
    sys.exit(main())


if __name__ == "__main__":
    run_cli()
