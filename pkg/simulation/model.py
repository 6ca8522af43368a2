"""
Real-space and Bloch Hamiltonians of the bipartite lossy lattice.

Reading the coupled amplitude equations as i dpsi/dt = H psi, row (n, A) of H
holds t1 at (n, B), +i t2/2 at (n-1, A), -i t2/2 at (n+1, A) and t2/2 at
(n-1, B), (n+1, B); row (n, B) holds t1 at (n, A), -i t2/2 at (n-1, B),
+i t2/2 at (n+1, B), t2/2 at (n-1, A), (n+1, A) and -i gamma_n on the
diagonal.

Sites are interleaved, A_1, B_1, A_2, B_2, ..., so cell n (1-based) owns
indices 2(n-1) and 2(n-1)+1 and the matrix is banded.
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

import numpy as np

from core.exceptions import ValidationError
from core.validation import Validator, ensure_valid
from models.schemas import BoundaryCondition, LatticeParams, UniformLoss

logger = logging.getLogger(__name__)


class Sublattice(IntEnum):
    """Offset of a sublattice inside its unit cell."""
    A = 0
    B = 1


def site_index(n: int, sublattice: Sublattice, n_cells: Optional[int] = None) -> int:
    """Matrix index of site (n, sublattice) for 1-based cell n."""
    if n < 1 or (n_cells is not None and n > n_cells):
        raise ValidationError(f"Cell index {n} out of range", field="n", value=n)
    return 2 * (n - 1) + int(sublattice)


def a_indices(n_cells: int) -> np.ndarray:
    return np.arange(0, 2 * n_cells, 2)


def b_indices(n_cells: int) -> np.ndarray:
    return np.arange(1, 2 * n_cells, 2)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Dense 2N x 2N generator together with the inputs that built it."""

    matrix: np.ndarray
    bc: BoundaryCondition
    params: LatticeParams
    rates: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cells(self) -> int:
        return self.params.n_cells


def checked_rates(params: LatticeParams) -> np.ndarray:
    """Resolve and validate the loss rates of a lattice."""
    rates = params.rates()
    result = Validator.validate_lattice(
        params.t1, params.t2, params.n_cells, rates, params.diagnostic_limits
    )
    return ensure_valid(result, field="params")


def build_hamiltonian(params: LatticeParams, bc: BoundaryCondition = BoundaryCondition.OPEN) -> Hamiltonian:
    """
    Assemble the real-space Hamiltonian.

    Neighbor terms are dropped at the edges of an open chain and wrapped on
    a ring. On rings with N <= 2 the left and right neighbors coincide and
    their terms add, which is what the Bloch matrix predicts.

    Raises:
        ValidationError: nonpositive couplings, N < 1 or invalid rates
    """
    rates = checked_rates(params)
    bc = BoundaryCondition(bc)
    n_cells = params.n_cells
    t1, half = params.t1, params.t2 / 2.0

    H = np.zeros((2 * n_cells, 2 * n_cells), dtype=complex)

    for n in range(1, n_cells + 1):
        a, b = site_index(n, Sublattice.A), site_index(n, Sublattice.B)
        H[a, b] += t1
        H[b, a] += t1
        H[b, b] += -1j * rates[n - 1]

        for step, sign in ((-1, 1.0), (1, -1.0)):
            m = n + step
            if not 1 <= m <= n_cells:
                if bc == BoundaryCondition.OPEN:
                    continue
                m = (m - 1) % n_cells + 1
            am, bm = site_index(m, Sublattice.A), site_index(m, Sublattice.B)
            # A hops with +i t2/2 to the left, -i t2/2 to the right; B the reverse
            H[a, am] += sign * 1j * half
            H[b, bm] += -sign * 1j * half
            H[a, bm] += half
            H[b, am] += half

    logger.debug(
        "Built Hamiltonian",
        extra={"n_cells": n_cells, "bc": bc.value, "operation": "build_hamiltonian"}
    )
    return Hamiltonian(matrix=H, bc=bc, params=params, rates=rates)


def bloch_matrix(params: LatticeParams, k: float) -> np.ndarray:
    """
    2 x 2 Bloch Hamiltonian for a uniform loss rate.

    Substituting psi_n = e^{ikn} (u_A, u_B) gives
    [[t2 sin k, t1 + t2 cos k], [t1 + t2 cos k, -t2 sin k - i gamma]].

    Raises:
        ValidationError: the loss profile is not uniform
    """
    if not isinstance(params.loss, UniformLoss):
        raise ValidationError(
            "Bloch matrix requires a uniform loss profile",
            field="loss",
            value=params.loss.kind
        )
    checked_rates(params)

    t1, t2, gamma = params.t1, params.t2, params.loss.gamma
    s, c = np.sin(k), np.cos(k)
    return np.array(
        [[t2 * s, t1 + t2 * c],
         [t1 + t2 * c, -t2 * s - 1j * gamma]],
        dtype=complex
    )


def ring_momenta(n_cells: int) -> np.ndarray:
    """Momenta k = 2 pi m / N allowed on a ring of N cells."""
    return 2.0 * np.pi * np.arange(n_cells) / n_cells


def bloch_bands(params: LatticeParams, k: np.ndarray) -> np.ndarray:
    """Both Bloch eigenvalues per momentum, shape (len(k), 2), each row sorted by real part."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    blocks = np.stack([bloch_matrix(params, kk) for kk in k])
    bands = np.linalg.eigvals(blocks)
    order = np.argsort(bands.real, axis=1, kind="stable")
    return np.take_along_axis(bands, order, axis=1)
