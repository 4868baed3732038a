"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Global constants used by the library modules and the command-line interface.
"""

ENTRY_TOL = 1e-12
EIG_TOL = 1e-9
MERGE_TOL = 1e-8
IMAG_TOL = 1e-8
ISOLATION_TOL = 1e-6
TOUCH_TOL = 1e-10
COND_LIMIT = 1e12
PROJECTOR_TOL = 1e-6
RECONSTRUCTION_TOL = 1e-6
COEFF_ZERO_TOL = 1e-12
PATTERN_TOL = 1e-12
WINDOW_FLOOR = 1e-9
ORIGIN_ROOT_TOL = 1e-8

MAX_GRID_STEP = 0.01
GRID_POINTS = 1000
GRID_REFINEMENT = 10
BISECTION_LIMIT = 200

CE_TOL = 1e-6
WELL_CONDITIONED = 1e6
INTEGER_POWER_TOL = 1e-8
SEMIGROUP_TOL = 1e-6
BLOCK_TOL = 1e-8
HADAMARD_TOL = 1e-8
DET_TOL = 1e-8
SIGNIFICANT_DIGITS = 17

FAILURE_NOT_SQUARE = "NotSquare"
FAILURE_NON_FINITE = "NonFinite"
FAILURE_NEGATIVE_ENTRY = "NegativeEntry"
FAILURE_NOT_DIAGONALIZABLE = "NotDiagonalizable"
FAILURE_COMPLEX_SPECTRUM = "ComplexSpectrum"
FAILURE_NUMERICAL = "NumericalFailure"
FAILURE_NEGATIVE_EIGENVALUE = "NegativeEigenvalue"
WARNING_CLAMPED_ENTRY = "ClampedEntry"
WARNING_CLAMPED_EIGENVALUE = "ClampedEigenvalue"
WARNING_ILL_CONDITIONED = "IllConditioned"

PARITY_CROSSING = "crossing"
PARITY_TOUCHING = "touching"

TARGET_MAX_CE = "max_ce"
TARGET_MAX_MIP = "max_mip"

MOVE_PERTURB = "perturb"
MOVE_ROW_SCALE = "row_scale"
MOVE_COLUMN_SCALE = "column_scale"
MOVE_DIAGONAL_FILL = "diagonal_fill"

SAMPLE_LOGUNIFORM = "loguniform"
SAMPLE_GRADED = "graded"
SAMPLE_SYMMETRIC = "symmetric"

DEFAULT_ENTRY_RANGE = (1.0, 1e4)
DEFAULT_PERTURB_SCALE = 0.25
DEFAULT_RESTARTS = 8
DEFAULT_PATIENCE = 40
DEFAULT_BUDGET = 2000

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_USAGE = 64
EXIT_NUMERICAL = 70

PAPER_MATRIX_NAMES = ["ce4", "ce5", "ce6", "mip4", "mip5", "mip6", "hadamard3", "hadamard3c"]
HADAMARD_DEMO_STEP = 0.1

TRAJECTORY_HEADER = ["alpha", "i", "j", "value"]

LOG_FORMAT = " %(name)s :: %(levelname)-8s :: %(message)s"
