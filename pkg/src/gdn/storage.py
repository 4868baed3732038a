"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

This module reads and writes matrices in the two supported file formats:
JSON, `{"n": <int>, "data": [<n*n floats, row-major>]}`, and plain CSV with
n rows of n comma-separated values.
"""

import io
import json
import logging

import numpy as np

from gdn import errors
from gdn import models

logger = logging.getLogger(__name__)


def as_matrix(data):
    """
    Converts nested sequences or an array into a validated square float matrix.

    Args:
        data: Anything `numpy.asarray` accepts.

    Returns:
        numpy.ndarray: A float64 n-by-n matrix with finite entries, n ≥ 1.

    Raises:
        MatrixFormatError: If the data is not square, empty, or has non-finite entries.
    """
    try:
        matrix = np.array(data, dtype=float)
    except (TypeError, ValueError) as error:
        raise errors.MatrixFormatError(f"not a numeric matrix: {error}") from error
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise errors.MatrixFormatError(f"matrix must be square and non-empty, not {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise errors.MatrixFormatError("matrix entries must be finite")
    return matrix


def parse_matrix(text):
    """
    Parses a matrix from JSON or CSV text. Text starting with `{` is read as JSON.

    Args:
        text (str): The file contents.

    Returns:
        numpy.ndarray: The matrix.

    Raises:
        MatrixFormatError: If the text is malformed.
    """
    stripped = text.strip()
    if not stripped:
        raise errors.MatrixFormatError("empty matrix file")
    if stripped.startswith("{"):
        return parse_json(stripped)
    return parse_csv(stripped)


def parse_json(text):
    """
    Parses the JSON matrix format.
    """
    try:
        document = json.loads(text)
        n = document["n"]
        data = document["data"]
    except (json.JSONDecodeError, KeyError, TypeError) as error:
        raise errors.MatrixFormatError(f"malformed matrix JSON: {error}") from error
    if not isinstance(n, int) or n < 1 or not isinstance(data, list) or len(data) != n * n:
        raise errors.MatrixFormatError(f"matrix JSON needs n >= 1 and n*n data values, got n={n!r}")
    try:
        values = np.reshape(np.array(data, dtype=float), (n, n))
    except (TypeError, ValueError) as error:
        raise errors.MatrixFormatError(f"matrix JSON data must be n*n numbers: {error}") from error
    return as_matrix(values)


def parse_csv(text):
    """
    Parses the CSV matrix format.
    """
    try:
        matrix = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2)
    except ValueError as error:
        raise errors.MatrixFormatError(f"malformed matrix CSV: {error}") from error
    return as_matrix(matrix)


def load_matrix(path):
    """
    Loads a matrix from a JSON or CSV file.

    Args:
        path (str): The file to read.

    Returns:
        numpy.ndarray: The matrix.

    Raises:
        MatrixFormatError: If the file cannot be read or parsed.
    """
    try:
        with open(path, encoding="utf-8") as fd:
            text = fd.read()
    except OSError as error:
        raise errors.MatrixFormatError(f"cannot read {path}: {error}") from error
    logger.debug("Loaded %s bytes from %s", len(text), path)
    return parse_matrix(text)


def encode_matrix(matrix):
    """
    Encodes a matrix in the JSON matrix format, at 17 significant digits.
    """
    matrix = np.asarray(matrix, dtype=float)
    return models.dumps({"n": matrix.shape[0], "data": matrix.ravel()})


def save_matrix(path, matrix):
    """
    Saves a matrix to a file in the JSON matrix format.
    """
    with open(path, "w", encoding="utf-8") as fd:
        fd.write(encode_matrix(matrix))
        fd.write("\n")
