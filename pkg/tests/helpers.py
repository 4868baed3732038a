"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Small matrices with known spectra shared by the test modules, and a helper
that writes matrix files into a temporary directory.
"""

import os

import numpy as np

SYMMETRIC = [[2.0, 1.0], [1.0, 2.0]]
TRIANGULAR = [[3.0, 1.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 1.0]]
JORDAN = [[1.0, 1.0], [0.0, 1.0]]
SWAP = [[0.0, 1.0], [1.0, 0.0]]
ROTATION = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
CYCLE3 = [[2.0, 0.4, 0.0], [0.0, 1.0, 0.4], [0.4, 0.0, 0.0]]


def write_file(directory, name, text):
    """ Writes text to directory/name and returns the path. """
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as fd:
        fd.write(text)
    return path


def write_matrix(directory, name, matrix):
    """ Writes a matrix in the JSON matrix format and returns the path. """
    matrix = np.asarray(matrix, dtype=float)
    values = ",".join(repr(float(value)) for value in matrix.ravel())
    return write_file(directory, name, f'{{"n": {matrix.shape[0]}, "data": [{values}]}}')
