"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Exceptions raised by the gdn package. Each carries a short machine-readable
code that the command-line interface reports on stderr.
"""

import numpy as np


class GdnError(ValueError):
    """
    Base class for all errors raised by the gdn package.
    """
    code = "GdnError"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        """
        Returns a JSON-ready description of the error, in the same shape the
        command-line interface prints on stderr.
        """
        return {
            "error": f"{self.__class__.__name__}: {self}",
            "status": "error",
            "code": self.code,
            "details": self.details,
        }


class NotDiagonalizable(GdnError):
    """ The eigenvector matrix is singular or the projectors are not idempotent. """
    code = "NotDiagonalizable"


class ComplexSpectrum(GdnError):
    """ An eigenvalue has an imaginary part above tolerance. """
    code = "ComplexSpectrum"


class NumericalFailure(GdnError, np.linalg.LinAlgError):
    """ The eigensolver or a reconstruction check failed. """
    code = "NumericalFailure"


class WindowInvalid(GdnError):
    """ A root-isolation window is empty, non-positive or has a bad tolerance. """
    code = "WindowInvalid"


class NegativeEigenvalue(GdnError):
    """ A conventional power was requested for a matrix with a negative eigenvalue. """
    code = "NegativeEigenvalue"


class NegativeEntry(GdnError):
    """ A Hadamard power was requested for a matrix with a negative entry. """
    code = "NegativeEntry"


class NotGdn(GdnError):
    """ The input is not a generalized doubly nonnegative matrix. """
    code = "NotGdn"

    def __init__(self, message="", report=None):
        super().__init__(message, failures=list(report.failures) if report else [])
        self.report = report


class IsolationInconclusive(GdnError):
    """ Root isolation found more roots than the Descartes bound allows. """
    code = "IsolationInconclusive"


class NotApplicable(GdnError):
    """ A bound was requested for a pattern it does not cover. """
    code = "NotApplicable"


class PreconditionViolated(GdnError):
    """ An operation was called outside its precondition. """
    code = "PreconditionViolated"


class VerificationFailed(GdnError):
    """ A construction failed one of its self-verification clauses. """
    code = "VerificationFailed"

    def __init__(self, clause, message=""):
        super().__init__(message or clause, clause=clause)
        self.clause = clause


class UnknownName(GdnError):
    """ A named matrix or family does not exist. """
    code = "UnknownName"


class NoFeasibleCandidate(GdnError):
    """ A search exhausted its budget without a single GDN candidate. """
    code = "NoFeasibleCandidate"


class MatrixFormatError(GdnError):
    """ A matrix file could not be parsed. """
    code = "MatrixFormatError"


class FalsificationFound(GdnError):
    """
    A computed quantity exceeds one of the proven bounds. This is either a
    numerical failure or a counterexample; the offending report is attached.
    """
    code = "FalsificationFound"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
