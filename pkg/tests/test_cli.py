"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Tests the gdnce command-line interface: output formats and exit codes.
"""

import io
import json
import os
import tempfile
import unittest
import unittest.mock

import gdnce
from gdn import constants
from gdn import critical
from gdn import errors
from gdn import models
from gdn import spectral
from tests import helpers


class CliTestCase(unittest.TestCase):
    """
    Runs gdnce with captured stdout and stderr inside a temporary directory.
    """

    def setUp(self):
        self.tempdir = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with
        self.directory = self.tempdir.name

    def tearDown(self):
        self.tempdir.cleanup()

    def matrix(self, name, matrix):
        """ Writes a matrix file and returns its path. """
        return helpers.write_matrix(self.directory, name, matrix)

    def run_cli(self, *argv):
        """ Returns the exit code, stdout and stderr of one invocation. """
        with unittest.mock.patch("sys.stdout", new_callable=io.StringIO) as stdout:
            with unittest.mock.patch("sys.stderr", new_callable=io.StringIO) as stderr:
                code = gdnce.main([str(arg) for arg in argv])
        return code, stdout.getvalue(), stderr.getvalue()

    def error_of(self, stderr):
        """ Returns the JSON error report printed last on stderr. """
        return json.loads(stderr.strip().splitlines()[-1])


class TestUsage(CliTestCase):
    """
    Tests argument errors and exit codes.
    """

    def test_no_command(self):
        """
        A missing command is a usage error.
        """
        code, _, stderr = self.run_cli()
        self.assertEqual(code, constants.EXIT_USAGE)
        self.assertEqual(self.error_of(stderr)["code"], "UsageError")

    def test_unknown_command(self):
        """
        An unknown command is a usage error.
        """
        code, _, _ = self.run_cli("invert", "a.json")
        self.assertEqual(code, constants.EXIT_USAGE)

    def test_missing_file(self):
        """
        A missing matrix file is reported as a format error.
        """
        code, stdout, stderr = self.run_cli("validate", os.path.join(self.directory, "missing.json"))
        self.assertEqual(code, constants.EXIT_USAGE)
        self.assertEqual(stdout, "")
        report = self.error_of(stderr)
        self.assertEqual(report["code"], "MatrixFormatError")
        self.assertEqual(report["status"], "error")

    def test_non_numeric_data(self):
        """
        A JSON file with non-numeric data is a format error, not an internal one.
        """
        path = helpers.write_file(self.directory, "bad.json", '{"n": 2, "data": [1, "x", 0, 1]}')
        code, stdout, stderr = self.run_cli("validate", path)
        self.assertEqual(code, constants.EXIT_USAGE)
        self.assertEqual(stdout, "")
        self.assertEqual(self.error_of(stderr)["code"], "MatrixFormatError")

    def test_bad_entry(self):
        """
        Entries must be written as i,j.
        """
        code, _, _ = self.run_cli("trajectory", self.matrix("a.json", helpers.SYMMETRIC),
                                  "--entries", "0-1", "--window", "1", "2")
        self.assertEqual(code, constants.EXIT_USAGE)

    def test_bad_tolerance(self):
        """
        A non-positive tolerance flag is a usage error.
        """
        code, _, stderr = self.run_cli("--eig-tol", "0", "validate", self.matrix("a.json", helpers.SYMMETRIC))
        self.assertEqual(code, constants.EXIT_USAGE)
        self.assertEqual(self.error_of(stderr)["code"], "PreconditionViolated")

    def test_internal_error(self):
        """
        Unexpected exceptions exit with 70 and an InternalError report.
        """
        with unittest.mock.patch.object(spectral, "validate_gdn", side_effect=RuntimeError("boom")):
            code, _, stderr = self.run_cli("validate", self.matrix("a.json", helpers.SYMMETRIC))
        self.assertEqual(code, constants.EXIT_NUMERICAL)
        self.assertEqual(self.error_of(stderr)["code"], "InternalError")

    def test_falsification(self):
        """
        A falsification exits with 70.
        """
        with unittest.mock.patch.object(critical, "estimate_ce", side_effect=errors.FalsificationFound("bound")):
            code, _, stderr = self.run_cli("ce", self.matrix("a.json", helpers.CYCLE3))
        self.assertEqual(code, constants.EXIT_NUMERICAL)
        self.assertEqual(self.error_of(stderr)["code"], "FalsificationFound")


class TestMatrixCommands(CliTestCase):
    """
    Tests the commands that take a matrix file.
    """

    def test_validate(self):
        """
        validate prints the report and exits 0 for GDN, 2 otherwise.
        """
        code, stdout, _ = self.run_cli("validate", self.matrix("a.json", helpers.SYMMETRIC))
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(json.loads(stdout)["is_gdn"])
        code, stdout, _ = self.run_cli("validate", self.matrix("b.json", helpers.SWAP))
        self.assertEqual(code, constants.EXIT_NEGATIVE)
        self.assertEqual(json.loads(stdout)["failures"], [constants.FAILURE_NEGATIVE_EIGENVALUE])

    def test_validate_csv(self):
        """
        CSV matrix files are accepted.
        """
        path = helpers.write_file(self.directory, "a.csv", "2,1\n1,2\n")
        code, _, _ = self.run_cli("validate", path)
        self.assertEqual(code, constants.EXIT_OK)

    def test_ce(self):
        """
        ce prints the negativity profile.
        """
        code, stdout, _ = self.run_cli("ce", self.matrix("a.json", helpers.CYCLE3))
        self.assertEqual(code, constants.EXIT_OK)
        profile = models.decode(stdout)
        self.assertIsInstance(profile, models.NegativityProfile)
        self.assertAlmostEqual(profile.critical_exponent, 2.0, delta=1e-5)

    def test_ce_column_escape(self):
        """
        --column-escape adds the per-column report.
        """
        code, stdout, _ = self.run_cli("ce", self.matrix("a.json", helpers.CYCLE3), "--column-escape", "--workers", 2)
        self.assertEqual(code, constants.EXIT_OK)
        result = models.decode(stdout)
        self.assertIsInstance(result["column_escape"], models.ColumnEscapeReport)
        self.assertTrue(result["column_escape"].clean)

    def test_ce_not_gdn(self):
        """
        ce on a matrix that is not GDN exits 2.
        """
        code, _, stderr = self.run_cli("ce", self.matrix("a.json", helpers.SWAP))
        self.assertEqual(code, constants.EXIT_NEGATIVE)
        self.assertEqual(self.error_of(stderr)["details"]["failures"], [constants.FAILURE_NEGATIVE_EIGENVALUE])

    def test_power(self):
        """
        power prints A^α in the JSON matrix format.
        """
        code, stdout, _ = self.run_cli("power", self.matrix("a.json", helpers.SYMMETRIC), "--alpha", 2)
        self.assertEqual(code, constants.EXIT_OK)
        document = json.loads(stdout)
        self.assertEqual(document["n"], 2)
        for value, expected in zip(document["data"], [5.0, 4.0, 4.0, 5.0]):
            self.assertAlmostEqual(value, expected)

    def test_hadamard_power(self):
        """
        --hadamard raises the entries one by one.
        """
        code, stdout, _ = self.run_cli("power", self.matrix("a.json", helpers.SYMMETRIC), "--alpha", 2, "--hadamard")
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(stdout.strip(), '{"n":2,"data":[4,1,1,4]}')

    def test_power_not_gdn(self):
        """
        A conventional power of a matrix that is not GDN exits 2.
        """
        code, _, _ = self.run_cli("power", self.matrix("a.json", helpers.SWAP), "--alpha", 0.5)
        self.assertEqual(code, constants.EXIT_NEGATIVE)

    def test_trajectory(self):
        """
        trajectory writes CSV to stdout or to a file.
        """
        path = self.matrix("a.json", helpers.SYMMETRIC)
        code, stdout, _ = self.run_cli("trajectory", path, "--entries", "0,1", "1,1", "--window", 1, 2, "--step", 0.5)
        self.assertEqual(code, constants.EXIT_OK)
        lines = stdout.strip().splitlines()
        self.assertEqual(lines[0], "alpha,i,j,value")
        self.assertEqual(len(lines), 7)
        output = os.path.join(self.directory, "trajectory.csv")
        code, stdout, _ = self.run_cli("trajectory", path, "--entries", "0,1", "--window", 1, 2, "--output", output)
        self.assertEqual(stdout, "")
        with open(output, encoding="utf-8") as fd:
            self.assertEqual(len(fd.read().strip().splitlines()), 102)

    def test_primitivity(self):
        """
        primitivity prints the index, or null and exit 2 for an imprimitive pattern.
        """
        code, stdout, _ = self.run_cli("primitivity", self.matrix("a.json", helpers.SYMMETRIC))
        self.assertEqual((code, stdout.strip()), (constants.EXIT_OK, "1"))
        code, stdout, _ = self.run_cli("primitivity", self.matrix("b.json", helpers.ROTATION))
        self.assertEqual((code, stdout.strip()), (constants.EXIT_NEGATIVE, "null"))

    def test_primitivity_report(self):
        """
        --report adds blocks, bounds and the trace necessities.
        """
        code, stdout, _ = self.run_cli("primitivity", self.matrix("a.json", helpers.CYCLE3), "--report")
        self.assertEqual(code, constants.EXIT_OK)
        report = models.decode(stdout)
        self.assertEqual(report["index_of_primitivity"], 3)
        self.assertEqual(report["diagonal_support_bound"], 3)
        self.assertEqual(report["wielandt_bound"], 5)
        self.assertTrue(report["blocks"].irreducible)
        self.assertTrue(report["trace_necessities"].holds)

    def test_blocks(self):
        """
        blocks reports a preserved zero block.
        """
        code, stdout, _ = self.run_cli("blocks", self.matrix("a.json", helpers.TRIANGULAR))
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(models.decode(stdout).blocks, [[0], [1], [2]])

    def test_feasibility(self):
        """
        feasibility exits 0 with a witness, 2 without one.
        """
        code, stdout, _ = self.run_cli("feasibility", self.matrix("a.json", helpers.SYMMETRIC), "--trials", 10)
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(models.decode(stdout).found)
        code, _, _ = self.run_cli("feasibility", self.matrix("b.json", helpers.ROTATION), "--trials", 3)
        self.assertEqual(code, constants.EXIT_NEGATIVE)


class TestOtherCommands(CliTestCase):
    """
    Tests the commands that do not read a matrix.
    """

    def test_bounds(self):
        """
        bounds prints k(n), or the whole table.
        """
        self.assertEqual(self.run_cli("bounds", "--n", 5)[:2], (constants.EXIT_OK, "7\n"))
        code, stdout, _ = self.run_cli("bounds", "--n", 4, "--table")
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(json.loads(stdout)["mip_upper_bound"], 5)

    def test_bounds_bad_order(self):
        """
        n must be at least 1.
        """
        self.assertEqual(self.run_cli("bounds", "--n", 0)[0], constants.EXIT_USAGE)

    def test_construct_paper(self):
        """
        --family paper prints a published matrix.
        """
        code, stdout, _ = self.run_cli("construct", "--family", "paper", "--name", "mip4")
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(json.loads(stdout)["data"][:4], [0, 0, 2, 0])
        self.assertEqual(self.run_cli("construct", "--family", "paper")[0], constants.EXIT_USAGE)

    def test_construct_cycle(self):
        """
        --family prop44 builds and verifies the cycle construction.
        """
        code, stdout, _ = self.run_cli("construct", "--family", "prop44", "--n", 3, "--d", 2, 1, "--eps", 0.4)
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(json.loads(stdout)["data"], [2, 0.40000000000000002, 0, 0, 1, 0.40000000000000002,
                                                      0.40000000000000002, 0, 0])
        code, stdout, _ = self.run_cli("construct", "--family", "prop44", "--n", 5, "--seed", 2, "--report")
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(models.decode(stdout).passed)

    def test_construct_invalid(self):
        """
        Even orders and a lone --d are usage errors.
        """
        self.assertEqual(self.run_cli("construct", "--family", "prop44", "--n", 4)[0], constants.EXIT_USAGE)
        self.assertEqual(self.run_cli("construct", "--family", "prop44", "--d", 2, 1)[0], constants.EXIT_USAGE)

    def test_search(self):
        """
        search prints the record and writes it to --output.
        """
        config = helpers.write_file(self.directory, "search.json", json.dumps(
            {"n": 3, "budget": 1, "restarts": 1, "start": helpers.CYCLE3}))
        output = os.path.join(self.directory, "record.json")
        code, stdout, _ = self.run_cli("search", config, "--seed", 4, "--output", output)
        self.assertEqual(code, constants.EXIT_OK)
        record = models.decode(stdout)
        self.assertEqual(record.seed, 4)
        self.assertAlmostEqual(record.score, 2.0, delta=1e-5)
        with open(output, encoding="utf-8") as fd:
            self.assertEqual(fd.read().strip(), stdout.strip())

    def test_hadamard(self):
        """
        hadamard confirms the demonstration.
        """
        code, stdout, _ = self.run_cli("hadamard", "--alpha-max", 2, "--step", 0.5)
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(models.decode(stdout).confirmed)

    def test_verify_paper(self):
        """
        verify-paper prints a table, or JSON with --json.
        """
        code, stdout, _ = self.run_cli("verify-paper", "--quick", "--claim", "critical_exponent_bound_table")
        self.assertEqual(code, constants.EXIT_OK)
        self.assertIn("critical_exponent_bound_table  PASS", stdout)
        code, stdout, _ = self.run_cli("verify-paper", "--quick", "--json", "--claim", "hadamard_no_ce")
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(models.decode(stdout)[0].passed)

    def test_verify_paper_unknown_claim(self):
        """
        An unknown claim name is a usage error.
        """
        self.assertEqual(self.run_cli("verify-paper", "--claim", "nothing")[0], constants.EXIT_USAGE)
