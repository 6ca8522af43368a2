"""
Pydantic data models for lattice, integrator and run configuration.

This module provides validation and type conversion for every input the
numerics and the command line accept. Numerical results live in the
``simulation`` package as plain dataclasses.
"""

from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator
)


class BoundaryCondition(str, Enum):
    """Open chain or ring (periodic) closure of the lattice."""
    OPEN = "open"
    RING = "ring"


class DecayMethod(str, Enum):
    """Evaluation paths for the decay distribution."""
    ODE = "ode"
    SPECTRAL = "spectral"
    LYAPUNOV = "lyapunov"
    AUTO = "auto"


class ProfileKind(str, Enum):
    """Loss profile families."""
    UNIFORM = "uniform"
    LINEAR = "linear"
    RANDOM = "random"


# Loss profiles
class UniformLoss(BaseModel):
    """gamma_n = gamma for every cell."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal["uniform"] = "uniform"
    gamma: float = Field(..., ge=0, allow_inf_nan=False, description="Loss rate on every B site")

    def rates(self, n_cells: int) -> np.ndarray:
        return np.full(n_cells, float(self.gamma))


class LinearLoss(BaseModel):
    """gamma_n = gamma * n, growing from the left edge."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal["linear"] = "linear"
    gamma: float = Field(..., ge=0, allow_inf_nan=False, description="Loss increment per cell")

    def rates(self, n_cells: int) -> np.ndarray:
        return float(self.gamma) * np.arange(1, n_cells + 1, dtype=float)


class RandomLoss(BaseModel):
    """gamma_n drawn independently and uniformly on (0, gamma_max]."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal["random"] = "random"
    gamma_max: float = Field(..., gt=0, allow_inf_nan=False, description="Upper bound of the draw")
    seed: int = Field(0, ge=0, description="Seed for numpy.random.default_rng")

    def rates(self, n_cells: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        # random() lies in [0, 1); flip it onto (0, 1]
        return float(self.gamma_max) * (1.0 - rng.random(n_cells))


LossProfile = Annotated[Union[UniformLoss, LinearLoss, RandomLoss], Field(discriminator="kind")]


class LatticeParams(BaseModel):
    """Couplings, cell count and loss profile of the bipartite lattice."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    t1: float = Field(..., ge=0, allow_inf_nan=False, description="Intra-cell coupling")
    t2: float = Field(..., gt=0, allow_inf_nan=False, description="Inter-cell coupling")
    n_cells: int = Field(..., ge=1, description="Number of unit cells N")
    loss: LossProfile
    diagnostic_limits: bool = Field(
        False,
        description="Admit gamma_n = 0 (Hermitian limit) and t1 = 0 (broken cell loop)"
    )

    @model_validator(mode='after')
    def validate_limits(self):
        if self.diagnostic_limits:
            return self
        if self.t1 <= 0:
            raise ValueError("t1 must be positive; t1 = 0 requires diagnostic_limits=True")
        if isinstance(self.loss, (UniformLoss, LinearLoss)) and self.loss.gamma <= 0:
            raise ValueError("gamma must be positive; gamma = 0 requires diagnostic_limits=True")
        return self

    def rates(self) -> np.ndarray:
        """Resolved loss rates gamma_1..gamma_N."""
        return self.loss.rates(self.n_cells)

    @property
    def is_uniform(self) -> bool:
        return isinstance(self.loss, UniformLoss)


class IntegratorConfig(BaseModel):
    """Fixed-step RK4 walk settings."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    dt: Optional[float] = Field(None, gt=0, description="Time step; None picks 0.01/max(1, max gamma_n)")
    t_max: float = Field(1.0e4, gt=0, description="Hard time cap")
    eps_stop: float = Field(1.0e-10, gt=0, lt=1, description="Remaining-norm threshold")

    def resolved_dt(self, rates: np.ndarray) -> float:
        if self.dt is not None:
            return float(self.dt)
        gamma_peak = float(np.max(rates)) if len(rates) else 0.0
        return 0.01 / max(1.0, gamma_peak)


class RunConfig(BaseModel):
    """Everything one command-line run needs, after defaults, files and flags are merged."""

    model_config = ConfigDict(frozen=True, extra='forbid', use_enum_values=False)

    t1: float = Field(0.3, ge=0, allow_inf_nan=False)
    t2: float = Field(0.5, gt=0, allow_inf_nan=False)
    n: int = Field(60, ge=1, description="Number of unit cells N")
    s: int = Field(50, ge=1, description="Starting unit cell S")
    profile: ProfileKind = ProfileKind.UNIFORM
    gamma: float = Field(1.0, ge=0, allow_inf_nan=False)
    gamma_max: float = Field(2.0, gt=0, allow_inf_nan=False)
    seed: int = Field(0, ge=0)
    bc: BoundaryCondition = BoundaryCondition.OPEN
    dt: Optional[float] = Field(None, gt=0)
    t_max: float = Field(1.0e4, gt=0)
    eps_stop: float = Field(1.0e-10, gt=0, lt=1)
    method: DecayMethod = DecayMethod.ODE
    diagnostic_limits: bool = False
    out_dir: Path = Path("results")

    @field_validator('dt', mode='before')
    @classmethod
    def empty_dt_means_default(cls, v):
        if isinstance(v, str) and v.strip().lower() in ("", "none", "auto"):
            return None
        return v

    @model_validator(mode='after')
    def validate_start_cell(self):
        if self.s > self.n:
            raise ValueError(f"Start cell s={self.s} must not exceed n={self.n}")
        return self

    def loss_profile(self) -> Union[UniformLoss, LinearLoss, RandomLoss]:
        if self.profile == ProfileKind.UNIFORM:
            return UniformLoss(gamma=self.gamma)
        if self.profile == ProfileKind.LINEAR:
            return LinearLoss(gamma=self.gamma)
        return RandomLoss(gamma_max=self.gamma_max, seed=self.seed)

    def lattice(self) -> LatticeParams:
        return LatticeParams(
            t1=self.t1,
            t2=self.t2,
            n_cells=self.n,
            loss=self.loss_profile(),
            diagnostic_limits=self.diagnostic_limits
        )

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(dt=self.dt, t_max=self.t_max, eps_stop=self.eps_stop)

    def resolved(self) -> Dict[str, Any]:
        """JSON-ready dict of the run, with the time step resolved and random rates echoed."""
        lattice = self.lattice()
        rates = lattice.rates()
        data = {
            "t1": self.t1,
            "t2": self.t2,
            "n": self.n,
            "s": self.s,
            "profile": self.profile.value,
            "gamma": self.gamma,
            "gamma_max": self.gamma_max,
            "seed": self.seed,
            "bc": self.bc.value,
            "dt": self.integrator().resolved_dt(rates),
            "t_max": self.t_max,
            "eps_stop": self.eps_stop,
            "method": self.method.value,
            "diagnostic_limits": self.diagnostic_limits,
        }
        if self.profile == ProfileKind.RANDOM:
            data["gamma_n"] = [float(g) for g in rates]
        return data


class SweepSpec(BaseModel):
    """A one-parameter sweep around a base run."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    parameter: Literal["gamma"] = "gamma"
    values: List[float] = Field(..., min_length=1)
    base: RunConfig

    @field_validator('values')
    @classmethod
    def validate_values(cls, v):
        if any(not np.isfinite(x) for x in v):
            raise ValueError("Sweep values must be finite")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("Sweep values must be strictly increasing")
        return v

    def point_configs(self) -> List[RunConfig]:
        """One RunConfig per sweep value, in input order.

        For random profiles the loss strength is ``gamma_max``, so the sweep
        moves that field instead of ``gamma``.
        """
        field = self.parameter
        if field == "gamma" and self.base.profile == ProfileKind.RANDOM:
            field = "gamma_max"
        data = self.base.model_dump()
        return [RunConfig(**{**data, field: value}) for value in self.values]
