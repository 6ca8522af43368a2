"""
Dense non-Hermitian eigendecomposition and spectral diagnostics.

Covers the ring/open comparison, the imaginary gap, the eigenstate-averaged
mean displacement per sublattice and per-sublattice inverse participation
ratios.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.spatial.distance import directed_hausdorff

from config.settings import SpectralSettings, get_settings
from core.exceptions import EigenNoConvergenceError, ValidationError
from core.logging_manager import log_performance
from models.schemas import BoundaryCondition, LatticeParams
from .model import Hamiltonian, a_indices, b_indices, build_hamiltonian

logger = logging.getLogger(__name__)

SUBLATTICE_WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigenvalues and unit-norm right eigenvectors (columns), sorted by (Re E, Im E).

    Row i of ``eigenvectors`` follows the interleaved site ordering of
    ``simulation.model``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    bc: BoundaryCondition
    n_cells: int
    max_residual: float = 0.0

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class DisplacementPair:
    """Eigenstate-averaged mean cell index on each sublattice."""
    mean_a: float
    mean_b: float


def _spectral_settings(settings: Optional[SpectralSettings]) -> SpectralSettings:
    return settings if settings is not None else get_settings().spectral


def sort_order(eigenvalues: np.ndarray) -> np.ndarray:
    """Lexicographic (Re E, Im E) ordering."""
    return np.lexsort((eigenvalues.imag, eigenvalues.real))


@log_performance()
def eigensystem(H: Hamiltonian, settings: Optional[SpectralSettings] = None) -> Spectrum:
    """
    Full eigendecomposition of a dense complex Hamiltonian.

    Every returned pair satisfies ||H v - E v|| <= residual_tol * ||H||_2.

    Raises:
        ValidationError: the matrix is larger than ``max_dim``
        EigenNoConvergenceError: LAPACK failed or the residual contract is violated
    """
    settings = _spectral_settings(settings)
    matrix = H.matrix
    if matrix.shape[0] > settings.max_dim:
        raise ValidationError(
            f"Hamiltonian dimension {matrix.shape[0]} exceeds max_dim={settings.max_dim}",
            field="dim",
            value=matrix.shape[0]
        )

    try:
        eigenvalues, eigenvectors = scipy.linalg.eig(matrix, check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        raise EigenNoConvergenceError(str(e)) from e

    eigenvectors = eigenvectors / np.linalg.norm(eigenvectors, axis=0)
    order = sort_order(eigenvalues)
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]

    scale = max(np.linalg.norm(matrix, 2), np.finfo(float).tiny)
    residuals = np.linalg.norm(matrix @ eigenvectors - eigenvectors * eigenvalues, axis=0) / scale
    max_residual = float(residuals.max()) if residuals.size else 0.0
    if max_residual > settings.residual_tol:
        raise EigenNoConvergenceError(
            f"eigenpair residual {max_residual:.3e} exceeds {settings.residual_tol:.1e}",
            residual=max_residual
        )

    logger.debug(
        "Eigensystem computed",
        extra={"n_cells": H.n_cells, "bc": H.bc.value, "operation": "eigensystem",
               "max_residual": max_residual}
    )
    return Spectrum(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        bc=H.bc,
        n_cells=H.n_cells,
        max_residual=max_residual
    )


def spectrum(params: LatticeParams, bc: BoundaryCondition,
             settings: Optional[SpectralSettings] = None) -> Spectrum:
    """Shortcut for ``eigensystem(build_hamiltonian(params, bc))``."""
    return eigensystem(build_hamiltonian(params, bc), settings)


def imaginary_gap(spec: Spectrum) -> float:
    """Largest Im E; values near zero mean the spectrum touches the real axis."""
    return float(np.max(spec.eigenvalues.imag))


def mean_displacement(spec: Spectrum) -> DisplacementPair:
    """
    Averaged mean displacement per sublattice.

    Sums n |phi_n|^2 over all 2N eigenstates and divides by N (not 2N).
    """
    n_cells = spec.n_cells
    cells = np.arange(1, n_cells + 1, dtype=float)
    weights = np.abs(spec.eigenvectors) ** 2
    mean_a = cells @ weights[a_indices(n_cells), :].sum(axis=1) / n_cells
    mean_b = cells @ weights[b_indices(n_cells), :].sum(axis=1) / n_cells
    return DisplacementPair(mean_a=float(mean_a), mean_b=float(mean_b))


def spectra_compare(spec_open: Spectrum, spec_ring: Spectrum) -> float:
    """Symmetric Hausdorff distance between two eigenvalue sets in the complex plane."""
    if spec_open.n_cells != spec_ring.n_cells:
        raise ValidationError(
            "Spectra must come from lattices with the same number of cells",
            field="n_cells",
            value=(spec_open.n_cells, spec_ring.n_cells)
        )
    u = np.column_stack([spec_open.eigenvalues.real, spec_open.eigenvalues.imag])
    v = np.column_stack([spec_ring.eigenvalues.real, spec_ring.eigenvalues.imag])
    forward = directed_hausdorff(u, v, seed=0)[0]
    backward = directed_hausdorff(v, u, seed=0)[0]
    return float(max(forward, backward))


def ipr_per_sublattice(spec: Spectrum) -> Tuple[np.ndarray, np.ndarray]:
    """
    Inverse participation ratio of every eigenstate, restricted to each sublattice.

    IPR = sum |phi|^4 / (sum |phi|^2)^2 over the sublattice; states with
    sublattice weight below 1e-12 report 0.
    """
    weights = np.abs(spec.eigenvectors) ** 2

    def _ipr(rows: np.ndarray) -> np.ndarray:
        w = weights[rows, :]
        total = w.sum(axis=0)
        out = np.zeros_like(total)
        mask = total >= SUBLATTICE_WEIGHT_FLOOR
        out[mask] = (w[:, mask] ** 2).sum(axis=0) / total[mask] ** 2
        return out

    return _ipr(a_indices(spec.n_cells)), _ipr(b_indices(spec.n_cells))


def eigenvector_condition(spec: Spectrum) -> float:
    """2-norm condition number of the eigenvector matrix."""
    return float(np.linalg.cond(spec.eigenvectors))
