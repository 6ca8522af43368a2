"""
Quantum walk on the open lossy lattice and its decay distribution.

The walker starts on site A_S and leaks out through the B sites. The
probability of leaving through B_n is P_n = 2 gamma_n * integral of
|psi_n^B(t)|^2 over t >= 0. Three independent evaluations are offered:

- ``decay_distribution_ode``: classical RK4 on dpsi/dt = -i H psi with the
  decay integrals carried as extra RK4 components,
- ``decay_distribution_spectral``: closed-form eigenmode expansion,
- ``decay_distribution_lyapunov``: the continuous Lyapunov equation for the
  time-integrated density matrix.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from config.settings import SpectralSettings, get_settings
from core.exceptions import (
    DimensionMismatchError,
    IllConditionedError,
    NonConvergenceError,
    NonDecayingModeError,
    ValidationError
)
from core.logging_manager import log_performance
from core.validation import Validator, ensure_valid
from models.schemas import BoundaryCondition, DecayMethod, IntegratorConfig, LatticeParams
from .model import Hamiltonian, Sublattice, b_indices, build_hamiltonian, site_index
from .spectral import Spectrum, eigensystem, eigenvector_condition

logger = logging.getLogger(__name__)

RK4_WEIGHTS = np.array([1.0, 2.0, 2.0, 1.0])


@dataclass(frozen=True)
class InitialCondition:
    """Walker placed on A_S: psi_n^A(0) = delta_{n,S}, psi_n^B(0) = 0."""

    start: int

    def __post_init__(self):
        if self.start < 1:
            raise ValidationError("Start cell must be at least 1", field="S", value=self.start)

    def amplitudes(self, n_cells: int) -> np.ndarray:
        ensure_valid(Validator.validate_start_cell(self.start, n_cells), field="S", value=self.start)
        amps = np.zeros(2 * n_cells, dtype=complex)
        amps[site_index(self.start, Sublattice.A)] = 1.0
        return amps


StartCell = Union[int, InitialCondition]


def _as_initial(start: StartCell) -> InitialCondition:
    return start if isinstance(start, InitialCondition) else InitialCondition(int(start))


@dataclass(frozen=True, eq=False)
class WalkerState:
    """Amplitudes at time t plus the running decay integrals 2 gamma_n int |psi_n^B|^2."""

    t: float
    amps: np.ndarray
    accumulated: np.ndarray

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def bookkeeping_error(self) -> float:
        """|norm^2 + sum(accumulated) - 1|."""
        return abs(self.norm_sq + float(self.accumulated.sum()) - 1.0)


@dataclass(frozen=True, eq=False)
class DecayDistribution:
    """Per-cell decay probabilities P_1..P_N of a walk started at S."""

    P: np.ndarray
    S: int
    residual: float
    method: str = DecayMethod.ODE.value
    converged: bool = True
    t_final: Optional[float] = None
    condition: Optional[float] = None

    @property
    def n_cells(self) -> int:
        return self.P.shape[0]

    @property
    def total(self) -> float:
        return float(self.P.sum())


def initial_state(n_cells: int, start: StartCell) -> WalkerState:
    return WalkerState(
        t=0.0,
        amps=_as_initial(start).amplitudes(n_cells),
        accumulated=np.zeros(n_cells)
    )


def _check_dims(H: Hamiltonian, state: WalkerState) -> None:
    if state.amps.shape != (H.dim,):
        raise DimensionMismatchError(H.dim, state.amps.shape[0] if state.amps.ndim else 0, "amps")
    if state.accumulated.shape != (H.n_cells,):
        raise DimensionMismatchError(H.n_cells, state.accumulated.shape[0], "accumulated")


def evolve_step(H: Hamiltonian, state: WalkerState, dt: float) -> WalkerState:
    """
    One classical RK4 step of dpsi/dt = -i H psi together with
    dP_n/dt = 2 gamma_n |psi_n^B|^2, evaluated on the same stages.
    """
    _check_dims(H, state)
    if dt < 0:
        raise ValidationError("Time step must be nonnegative", field="dt", value=dt)

    A = -1j * H.matrix
    b = b_indices(H.n_cells)
    loss = 2.0 * H.rates

    def leak(psi):
        return loss * np.abs(psi[b]) ** 2

    psi = state.amps
    k1 = A @ psi
    s2 = psi + 0.5 * dt * k1
    k2 = A @ s2
    s3 = psi + 0.5 * dt * k2
    k3 = A @ s3
    s4 = psi + dt * k3
    k4 = A @ s4

    amps = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    accumulated = state.accumulated + (dt / 6.0) * (
        leak(psi) + 2.0 * leak(s2) + 2.0 * leak(s3) + leak(s4)
    )
    return WalkerState(t=state.t + dt, amps=amps, accumulated=accumulated)


class RK4Propagator:
    """
    Fixed-step RK4 for a constant Hamiltonian, composed in blocks of 2^k steps.

    With h = dt and A = -iH, one step maps psi to M psi where
    M = I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24, and its stage states are
    S_i psi with S_1 = I, S_2 = I + hA/2, S_3 = I + hA/2 + (hA)^2/4,
    S_4 = I + hA + (hA)^2/2 + (hA)^3/4. The decay integrals grow by
    (h/6) 2 gamma_n sum_i w_i |(S_i psi)_{n,B}|^2, so over a block of K steps
    they grow by a quadratic form in X_K = sum_{j<K} M^j psi psi^+ M^j^+,
    which doubles as X_2K = X_K + M^K X_K M^K^+.
    """

    # Powers of M below this norm send any state under every usable eps_stop
    _NEGLIGIBLE = 1e-200

    def __init__(self, H: Hamiltonian, dt: float):
        if not dt > 0:
            raise ValidationError("Time step must be positive", field="dt", value=dt)
        self.H = H
        self.dt = float(dt)

        dim = H.dim
        eye = np.eye(dim, dtype=complex)
        hA = self.dt * (-1j * H.matrix)
        hA2 = hA @ hA
        hA3 = hA2 @ hA
        hA4 = hA3 @ hA

        self.step_matrix = eye + hA + hA2 / 2.0 + hA3 / 6.0 + hA4 / 24.0
        stages = (
            eye,
            eye + hA / 2.0,
            eye + hA / 2.0 + hA2 / 4.0,
            eye + hA + hA2 / 2.0 + hA3 / 4.0,
        )
        b = b_indices(H.n_cells)
        self._stage_rows = np.vstack([S[b, :] for S in stages])
        self._loss = 2.0 * H.rates
        self._powers: List[np.ndarray] = [self.step_matrix]
        self._exhausted = False

    def _power(self, level: int) -> Optional[np.ndarray]:
        """M^(2^level), or None once the powers have become negligible."""
        while len(self._powers) <= level and not self._exhausted:
            last = self._powers[-1]
            if np.linalg.norm(last, 2) < self._NEGLIGIBLE:
                self._exhausted = True
                break
            self._powers.append(last @ last)
        return self._powers[level] if level < len(self._powers) else None

    def _increment(self, cov: np.ndarray) -> np.ndarray:
        n_cells = self.H.n_cells
        projected = self._stage_rows @ cov
        diag = np.einsum('ij,ij->i', projected, self._stage_rows.conj()).real
        stage_sums = RK4_WEIGHTS @ diag.reshape(4, n_cells)
        return (self.dt / 6.0) * self._loss * stage_sums

    def jump(self, state: WalkerState, level: int) -> WalkerState:
        """Advance by exactly 2^level RK4 steps."""
        _check_dims(self.H, state)
        psi = state.amps
        cov = np.outer(psi, psi.conj())
        for i in range(level):
            P = self._power(i)
            if P is None:
                break
            cov = cov + P @ cov @ P.conj().T
        target = self._power(level)
        amps = target @ psi if target is not None else np.zeros_like(psi)
        return WalkerState(
            t=state.t + (2 ** level) * self.dt,
            amps=amps,
            accumulated=state.accumulated + self._increment(cov)
        )

    def advance(self, state: WalkerState, n_steps: int) -> WalkerState:
        """Advance by exactly n_steps RK4 steps."""
        if n_steps < 0:
            raise ValidationError("Step count must be nonnegative", field="n_steps", value=n_steps)
        level = 0
        while n_steps:
            if n_steps & 1:
                state = self.jump(state, level)
            n_steps >>= 1
            level += 1
        return state

    def run(self, state: WalkerState, eps_stop: float, max_steps: int) -> Tuple[WalkerState, int]:
        """
        Step until the remaining norm^2 drops below eps_stop or max_steps is hit.

        Returns the state at the first step where either holds, and that step
        count. The remaining norm is nonincreasing, so the stopping step is
        found by descending through the 2^k block sizes.
        """
        steps = 0
        if state.norm_sq < eps_stop or max_steps <= 0:
            return state, steps

        top = max(0, int(max_steps).bit_length())
        for level in range(top, -1, -1):
            if steps + 2 ** level >= max_steps:
                continue
            P = self._power(level)
            if P is None:
                continue
            ahead = P @ state.amps
            if float(np.vdot(ahead, ahead).real) >= eps_stop:
                state = self.jump(state, level)
                steps += 2 ** level

        state = self.jump(state, 0)
        return state, steps + 1


def _walk_setup(params: LatticeParams, start: StartCell, cfg: IntegratorConfig):
    H = build_hamiltonian(params, BoundaryCondition.OPEN)
    initial = _as_initial(start)
    state = initial_state(params.n_cells, initial)
    dt = cfg.resolved_dt(H.rates)
    result = Validator.validate_integrator(dt, cfg.t_max, cfg.eps_stop)
    ensure_valid(result, field="integrator")
    for warning in result.warnings:
        logger.warning(warning, extra={"operation": "walk_setup"})
    return H, initial, state, dt


@log_performance()
def decay_distribution_ode(params: LatticeParams, start: StartCell,
                           cfg: Optional[IntegratorConfig] = None) -> DecayDistribution:
    """
    Integrate the open-lattice walk until norm^2 < eps_stop or t >= t_max.

    Raises:
        NonConvergenceError: t_max reached with residual >= eps_stop; the
            partial distribution is attached as ``error.partial``
    """
    cfg = cfg or IntegratorConfig()
    H, initial, state, dt = _walk_setup(params, start, cfg)
    max_steps = int(math.ceil(cfg.t_max / dt))

    propagator = RK4Propagator(H, dt)
    final, steps = propagator.run(state, cfg.eps_stop, max_steps)
    residual = final.norm_sq
    converged = residual < cfg.eps_stop

    dist = DecayDistribution(
        P=final.accumulated.copy(),
        S=initial.start,
        residual=residual,
        method=DecayMethod.ODE.value,
        converged=converged,
        t_final=final.t
    )
    logger.info(
        f"Walk finished after {steps} steps (t={final.t:.4g}), residual {residual:.3e}",
        extra={"n_cells": params.n_cells, "operation": "decay_distribution_ode",
               "dt": dt, "bookkeeping_error": final.bookkeeping_error}
    )

    if not converged:
        raise NonConvergenceError(residual=residual, t=final.t, eps_stop=cfg.eps_stop, partial=dist)
    return dist


def _spectral_settings(settings: Optional[SpectralSettings]) -> SpectralSettings:
    return settings if settings is not None else get_settings().spectral


def decay_distribution_spectral(params: LatticeParams, start: StartCell,
                                spec: Optional[Spectrum] = None,
                                settings: Optional[SpectralSettings] = None) -> DecayDistribution:
    """
    Evaluate the decay integrals through the right-eigenvector expansion.

    With psi(0) = sum_j c_j v_j, each B-site integral is
    sum_{j,k} c_j conj(c_k) v_j conj(v_k) / (i (E_j - conj(E_k))).

    Raises:
        IllConditionedError: eigenvector condition number above the configured bound
        NonDecayingModeError: an overlapping mode has Im E >= -decay_floor
    """
    settings = _spectral_settings(settings)
    H = build_hamiltonian(params, BoundaryCondition.OPEN)
    if spec is None:
        spec = eigensystem(H, settings)
    if spec.n_cells != params.n_cells or spec.bc != BoundaryCondition.OPEN:
        raise ValidationError(
            "Spectral decay needs the open-lattice spectrum of the same lattice",
            field="spec",
            value=f"{spec.bc.value}, N={spec.n_cells}"
        )

    initial = _as_initial(start)
    psi0 = initial.amplitudes(params.n_cells)

    condition = eigenvector_condition(spec)
    if not np.isfinite(condition) or condition > settings.condition_bound:
        raise IllConditionedError(condition=float(condition), bound=settings.condition_bound)

    coeffs = np.linalg.solve(spec.eigenvectors, psi0)
    relevant = np.abs(coeffs) > settings.overlap_floor
    energies = spec.eigenvalues[relevant]
    if energies.size and energies.imag.max() >= -settings.decay_floor:
        raise NonDecayingModeError(max_imag=float(energies.imag.max()), floor=settings.decay_floor)

    weighted = spec.eigenvectors[b_indices(params.n_cells)][:, relevant] * coeffs[relevant]
    kernel = 1.0 / (1j * (energies[:, None] - energies.conj()[None, :]))
    integrals = np.einsum('nj,jk,nk->n', weighted, kernel, weighted.conj()).real
    P = np.clip(2.0 * H.rates * integrals, 0.0, None)

    return DecayDistribution(
        P=P,
        S=initial.start,
        residual=abs(1.0 - float(P.sum())),
        method=DecayMethod.SPECTRAL.value,
        condition=float(condition)
    )


def decay_distribution_lyapunov(params: LatticeParams, start: StartCell,
                                settings: Optional[SpectralSettings] = None) -> DecayDistribution:
    """
    Solve (-iH) X + X (-iH)^+ = -psi(0) psi(0)^+ for X = int rho(t) dt.

    P_n = 2 gamma_n Re X_{(n,B),(n,B)}. The Schur-based solver stays accurate
    where the eigenvector expansion is ill-conditioned.

    Raises:
        NonDecayingModeError: the open spectrum touches or crosses the real axis
    """
    settings = _spectral_settings(settings)
    H = build_hamiltonian(params, BoundaryCondition.OPEN)
    initial = _as_initial(start)
    psi0 = initial.amplitudes(params.n_cells)

    top = float(scipy.linalg.eigvals(H.matrix).imag.max())
    if top >= -settings.decay_floor:
        raise NonDecayingModeError(max_imag=top, floor=settings.decay_floor)

    generator = -1j * H.matrix
    X = scipy.linalg.solve_continuous_lyapunov(generator, -np.outer(psi0, psi0.conj()))
    b = b_indices(params.n_cells)
    P = np.clip(2.0 * H.rates * np.diag(X)[b].real, 0.0, None)

    return DecayDistribution(
        P=P,
        S=initial.start,
        residual=abs(1.0 - float(P.sum())),
        method=DecayMethod.LYAPUNOV.value
    )


def decay_distribution(params: LatticeParams, start: StartCell,
                       method: DecayMethod = DecayMethod.ODE,
                       cfg: Optional[IntegratorConfig] = None,
                       settings: Optional[SpectralSettings] = None) -> DecayDistribution:
    """
    Dispatch to one evaluation path.

    ``auto`` tries the spectral expansion, then the Lyapunov solve when the
    expansion is ill-conditioned, then the RK4 walk.
    """
    method = DecayMethod(method)
    if method == DecayMethod.ODE:
        return decay_distribution_ode(params, start, cfg)
    if method == DecayMethod.SPECTRAL:
        return decay_distribution_spectral(params, start, settings=settings)
    if method == DecayMethod.LYAPUNOV:
        return decay_distribution_lyapunov(params, start, settings)

    try:
        return decay_distribution_spectral(params, start, settings=settings)
    except IllConditionedError as e:
        logger.info(f"Spectral expansion rejected ({e}); trying Lyapunov solve",
                    extra={"operation": "decay_distribution"})
    try:
        return decay_distribution_lyapunov(params, start, settings)
    except (NonDecayingModeError, scipy.linalg.LinAlgError) as e:
        logger.info(f"Lyapunov solve rejected ({e}); integrating the walk",
                    extra={"operation": "decay_distribution"})
    return decay_distribution_ode(params, start, cfg)


def walker_density(params: LatticeParams, start: StartCell, cfg: Optional[IntegratorConfig],
                   times: Sequence[float]) -> np.ndarray:
    """
    Sublattice densities |psi_n^A|^2, |psi_n^B|^2 at the requested times.

    Times are rounded to the nearest multiple of the RK4 step. Returns an
    array of shape (len(times), N, 2).
    """
    times = np.asarray(list(times), dtype=float)
    if times.size and (np.any(times < 0) or np.any(np.diff(times) < 0)):
        raise ValidationError("Snapshot times must be nonnegative and sorted", field="times")

    cfg = cfg or IntegratorConfig()
    H, _, state, dt = _walk_setup(params, start, cfg)
    propagator = RK4Propagator(H, dt)

    out = np.zeros((times.size, params.n_cells, 2))
    done = 0
    for i, t in enumerate(times):
        target = int(round(t / dt))
        state = propagator.advance(state, target - done)
        done = target
        probs = np.abs(state.amps) ** 2
        out[i, :, 0] = probs[0::2]
        out[i, :, 1] = probs[1::2]
    return out
