"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.

Eigendecomposition of real matrices into merged spectral projectors, and the
validation of generalized doubly nonnegative (GDN) matrices: entrywise
nonnegative, diagonalizable, with nonnegative real eigenvalues.
"""

import logging

import numpy as np
import scipy.linalg

from gdn import constants
from gdn import errors
from gdn import models
from gdn import primitivity
from gdn import storage

logger = logging.getLogger(__name__)


class SpectralData:
    """
    The merged spectral decomposition A = Σ λᵢ Pᵢ of a diagonalizable matrix.

    Attributes:
        lambdas (numpy.ndarray): Distinct eigenvalues, strictly descending.
        projectors (list[numpy.ndarray]): The spectral projector of each eigenvalue.
        cond_S (float): Condition number of the column-normalized eigenvector matrix.
        rho (float): Spectral radius.
    """
    def __init__(self, lambdas, projectors, cond_S, rho=None):  # pylint: disable=invalid-name
        self.lambdas = np.asarray(lambdas, dtype=float)
        self.projectors = [np.asarray(projector, dtype=float) for projector in projectors]
        self.cond_S = float(cond_S)  # pylint: disable=invalid-name
        self.rho = float(np.max(np.abs(self.lambdas))) if rho is None else float(rho)

    @property
    def n(self):
        """ The order of the decomposed matrix. """
        return self.projectors[0].shape[0]

    def reconstruct(self):
        """ Returns Σ λᵢ Pᵢ. """
        return sum(value * projector for value, projector in zip(self.lambdas, self.projectors))

    def multiplicities(self):
        """ Returns the algebraic multiplicity of each eigenvalue, the trace of its projector. """
        return [int(round(np.trace(projector))) for projector in self.projectors]

    def is_invertible(self, tol=None):
        """
        Returns whether every eigenvalue is positive beyond the eigenvalue tolerance.
        """
        tol = tol or models.ToleranceConfig()
        return bool(self.lambdas.min() > tol.eig_tol * max(self.rho, 1e-300))

    def clamped(self):
        """
        Returns a copy with negative eigenvalues set to 0, merging any that
        then coincide.
        """
        values = np.maximum(self.lambdas, 0.0)
        lambdas, projectors = [], []
        for value, projector in zip(values, self.projectors):
            if lambdas and lambdas[-1] == value:
                projectors[-1] = projectors[-1] + projector
            else:
                lambdas.append(value)
                projectors.append(projector)
        return SpectralData(lambdas, projectors, self.cond_S, self.rho)


def decompose(matrix, tol=None):
    """
    Computes the merged spectral decomposition of a diagonalizable matrix.

    The matrix is balanced before the eigensolve. Eigenvalues closer than
    merge_tol·max(1, ρ) are merged and their projectors summed; imaginary
    parts below imag_tol·ρ are dropped.

    Args:
        matrix: A square real matrix.
        tol (ToleranceConfig, optional): The tolerances to use.

    Returns:
        SpectralData: Eigenvalues strictly descending with their projectors.

    Raises:
        NotDiagonalizable: If the eigenvector matrix is too ill-conditioned or
            the projectors are not idempotent and mutually annihilating.
        ComplexSpectrum: If an eigenvalue has an imaginary part above tolerance.
        NumericalFailure: If the eigensolver fails or the reconstruction is off.
    """
    tol = tol or models.ToleranceConfig()
    matrix = storage.as_matrix(matrix)
    n = matrix.shape[0]
    if not matrix.any():
        return SpectralData([0.0], [np.eye(n)], 1.0, 0.0)
    try:
        balanced, transform = scipy.linalg.matrix_balance(matrix)
        values, vectors = scipy.linalg.eig(balanced)
    except (np.linalg.LinAlgError, ValueError) as error:
        raise errors.NumericalFailure(f"eigensolver failed: {error}") from error
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise errors.NumericalFailure("eigensolver returned non-finite values")

    vectors = transform @ vectors
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    cond = np.linalg.cond(vectors)
    if not np.isfinite(cond) or cond > tol.cond_limit:
        raise errors.NotDiagonalizable(
            f"eigenvector matrix condition {cond:.3g} exceeds {tol.cond_limit:.3g}", cond=float(cond))
    try:
        inverse = np.linalg.inv(vectors)
    except np.linalg.LinAlgError as error:
        raise errors.NotDiagonalizable(f"eigenvector matrix is singular: {error}") from error

    rho = float(np.max(np.abs(values)))
    lambdas, projectors = merge_spectrum(values, vectors, inverse, rho, tol)
    spectral_data = SpectralData(lambdas, projectors, cond, rho)
    check_projectors(spectral_data, tol)
    check_reconstruction(spectral_data, matrix, tol)
    return spectral_data


def merge_spectrum(values, vectors, inverse, rho, tol):
    """
    Groups numerically coincident eigenvalues and sums their rank-one projectors.

    Args:
        values (numpy.ndarray): Complex eigenvalues.
        vectors (numpy.ndarray): Right eigenvectors as columns of S.
        inverse (numpy.ndarray): S⁻¹, whose rows are the left eigenvectors.
        rho (float): Spectral radius.
        tol (ToleranceConfig): The tolerances to use.

    Returns:
        tuple: Real eigenvalues, strictly descending, and their real projectors.

    Raises:
        ComplexSpectrum: If a merged eigenvalue or its projector is not real.
    """
    merge_radius = tol.merge_tol * max(1.0, rho)
    imag_radius = tol.imag_tol * (rho if rho > 0 else 1.0)
    clusters = []
    for index in np.argsort(-values.real, kind="stable"):
        if clusters and abs(values[index] - values[clusters[-1][-1]]) <= merge_radius:
            clusters[-1].append(index)
        else:
            clusters.append([index])

    lambdas, projectors = [], []
    for cluster in clusters:
        value = values[cluster].mean()
        if abs(value.imag) > imag_radius:
            raise errors.ComplexSpectrum(
                f"eigenvalue {value:.6g} has imaginary part above {imag_radius:.3g}", eigenvalue=str(value))
        projector = vectors[:, cluster] @ inverse[cluster, :]
        scale = max(1.0, float(np.max(np.abs(projector.real))))
        if np.max(np.abs(projector.imag)) > tol.projector_tol * scale:
            raise errors.ComplexSpectrum(f"projector of eigenvalue {value.real:.6g} is not real")
        lambdas.append(float(value.real))
        projectors.append(projector.real)
    return lambdas, projectors


def check_projectors(spectral_data, tol):
    """
    Checks Pᵢ·Pⱼ = δᵢⱼ·Pᵢ and Σ Pᵢ = I within the projector tolerance.

    Raises:
        NotDiagonalizable: If a projector identity fails.
    """
    projectors = spectral_data.projectors
    sizes = [max(1.0, float(np.max(np.abs(projector)))) for projector in projectors]
    for i, left in enumerate(projectors):
        for j, right in enumerate(projectors):
            residual = left @ right - (left if i == j else 0.0)
            if np.max(np.abs(residual)) > tol.projector_tol * sizes[i] * sizes[j]:
                raise errors.NotDiagonalizable(f"projectors {i} and {j} fail P_i P_j = delta_ij P_i")
    identity_residual = np.max(np.abs(sum(projectors) - np.eye(spectral_data.n)))
    if identity_residual > tol.projector_tol * max(sizes):
        raise errors.NotDiagonalizable(f"projectors do not sum to the identity ({identity_residual:.3g})")


def check_reconstruction(spectral_data, matrix, tol):
    """
    Checks that Σ λᵢ Pᵢ reproduces the matrix within the reconstruction tolerance.

    Raises:
        NumericalFailure: If the reconstruction is off.
    """
    residual = np.max(np.abs(spectral_data.reconstruct() - matrix))
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if residual > tol.reconstruction_tol * scale:
        raise errors.NumericalFailure(f"spectral reconstruction residual {residual:.3g} too large")


def inspect(matrix, tol=None):
    """
    Validates a matrix as GDN and, when it is, returns its clamped spectral data.

    Args:
        matrix: A square real matrix.
        tol (ToleranceConfig, optional): The tolerances to use.

    Returns:
        tuple: The GdnReport and the SpectralData (None unless the matrix is GDN).
    """
    tol = tol or models.ToleranceConfig()
    report = models.GdnReport(tolerances=tol)
    try:
        matrix = storage.as_matrix(matrix)
    except errors.MatrixFormatError as error:
        report.failures.append(constants.FAILURE_NOT_SQUARE if "square" in str(error) else constants.FAILURE_NON_FINITE)
        return report, None
    report.n = matrix.shape[0]

    entry_scale = max(1.0, float(np.max(np.abs(matrix))))
    report.min_entry = float(matrix.min())
    if report.min_entry < -tol.entry_tol * entry_scale:
        report.failures.append(constants.FAILURE_NEGATIVE_ENTRY)
    elif report.min_entry < 0:
        logger.warning("Clamping entries down to %s to 0", report.min_entry)
        report.warnings.append(constants.WARNING_CLAMPED_ENTRY)
        matrix = np.maximum(matrix, 0.0)

    raw = scipy.linalg.eigvals(matrix)
    report.max_eigenvalue_imag_abs = float(np.max(np.abs(raw.imag)))
    report.min_eigenvalue_real = float(raw.real.min())
    report.eigenvalues = sorted(raw.real.tolist(), reverse=True)

    pattern = primitivity.BoolPattern.from_matrix(matrix)
    report.irreducible = primitivity.reducibility_blocks(pattern).irreducible
    report.primitive = primitivity.index_of_primitivity(pattern) is not None

    spectral_data = None
    try:
        spectral_data = decompose(matrix, tol)
    except errors.NotDiagonalizable as error:
        report.diag_cond = error.details.get("cond", report.diag_cond)
        report.failures.append(constants.FAILURE_NOT_DIAGONALIZABLE)
    except errors.ComplexSpectrum:
        report.failures.append(constants.FAILURE_COMPLEX_SPECTRUM)
    except errors.NumericalFailure:
        report.failures.append(constants.FAILURE_NUMERICAL)

    if spectral_data is not None:
        report.diag_cond = spectral_data.cond_S
        report.min_eigenvalue_real = float(spectral_data.lambdas.min())
        if spectral_data.cond_S > constants.WELL_CONDITIONED:
            report.warnings.append(constants.WARNING_ILL_CONDITIONED)
        floor = -tol.eig_tol * spectral_data.rho
        if report.min_eigenvalue_real < floor:
            report.failures.append(constants.FAILURE_NEGATIVE_EIGENVALUE)
        elif report.min_eigenvalue_real < 0:
            logger.warning("Clamping eigenvalue %s to 0", report.min_eigenvalue_real)
            report.warnings.append(constants.WARNING_CLAMPED_EIGENVALUE)
            spectral_data = spectral_data.clamped()

    report.is_gdn = not report.failures
    return report, spectral_data if report.is_gdn else None


def validate_gdn(matrix, tol=None):
    """
    Decides whether a matrix is generalized doubly nonnegative.

    A matrix is GDN when its smallest entry is at least -entry_tol, it
    decomposes, and its smallest eigenvalue is at least -eig_tol·ρ. Small
    violations inside tolerance are clamped to 0 and reported as warnings.

    Args:
        matrix: A square real matrix.
        tol (ToleranceConfig, optional): The tolerances to use.

    Returns:
        GdnReport: The verdict with all diagnostics; this function never raises
        for a negative verdict.
    """
    report, _ = inspect(matrix, tol)
    return report


def certify(matrix, tol=None):
    """
    Returns the GdnReport and clamped SpectralData of a GDN matrix.

    Raises:
        NotGdn: If the matrix is not GDN.
    """
    report, spectral_data = inspect(matrix, tol)
    if not report.is_gdn:
        raise errors.NotGdn(f"matrix is not GDN: {', '.join(report.failures)}", report)
    return report, spectral_data
