"""
``sweep``: mean displacements and edge-burst metrics across loss strengths.

Points are independent; with ``jobs > 1`` they run on a process pool and
rows are still written in input order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from config.settings import SpectralSettings, Settings, get_settings
from core.error_handler import get_error_handler
from core.exceptions import EdgeBurstError
from models.schemas import BoundaryCondition, RunConfig, SweepSpec
from simulation.dynamics import decay_distribution
from simulation.metrics import edge_burst_metrics
from simulation.spectral import mean_displacement, spectrum
from .common import print_summary, write_csv, write_json

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("gamma", "mean_A", "mean_B", "p1_over_pmin", "p1_over_ps", "edge_fraction")


@dataclass(frozen=True)
class SweepPoint:
    """One sweep row, or the reason it could not be computed."""

    value: float
    columns: Tuple[float, ...]
    error_code: Optional[str] = None
    message: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error_code is not None

    def row(self) -> Tuple[float, ...]:
        return (self.value,) + self.columns


def compute_point(cfg: RunConfig, spectral: SpectralSettings) -> Tuple[float, ...]:
    """mean_A, mean_B and the three edge-burst metrics for one configuration."""
    params = cfg.lattice()
    displacement = mean_displacement(spectrum(params, BoundaryCondition.OPEN, spectral))
    dist = decay_distribution(params, cfg.s, cfg.method, cfg.integrator(), spectral)
    metrics = edge_burst_metrics(dist)
    return (
        displacement.mean_a,
        displacement.mean_b,
        metrics.p1_over_pmin,
        metrics.p1_over_ps,
        metrics.edge_fraction,
    )


def _run_point(task: Tuple[float, RunConfig, SpectralSettings]) -> SweepPoint:
    # Exceptions are flattened here; custom exception signatures do not survive pickling
    value, cfg, spectral = task
    try:
        return SweepPoint(value=value, columns=compute_point(cfg, spectral))
    except EdgeBurstError as e:
        code, message = e.error_code, str(e)
    except Exception as e:
        logger.exception(f"Sweep point {value} failed unexpectedly")
        code, message = type(e).__name__, str(e)
    return SweepPoint(
        value=value,
        columns=(math.nan,) * (len(SWEEP_HEADER) - 1),
        error_code=code,
        message=message
    )


def run_points(spec: SweepSpec, jobs: int, spectral: SpectralSettings) -> List[SweepPoint]:
    tasks = [(value, cfg, spectral) for value, cfg in zip(spec.values, spec.point_configs())]
    if jobs <= 1 or len(tasks) == 1:
        return [_run_point(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as executor:
        return list(executor.map(_run_point, tasks))


def cmd_sweep(spec: SweepSpec, jobs: int = 1, settings: Optional[Settings] = None) -> Dict[str, Any]:
    """
    Write sweep.csv and sweep.json.

    A failed point keeps its row with NaN fields and is listed under
    ``warnings``; the caller decides the exit status from that list.
    """
    settings = settings or get_settings()
    out = spec.base.out_dir
    logger.info(
        f"Sweeping {spec.parameter} over {len(spec.values)} values with {jobs} job(s)",
        extra={"command": "sweep", "profile": spec.base.profile.value, "n_cells": spec.base.n}
    )

    points = run_points(spec, jobs, settings.spectral)

    handler = get_error_handler()
    warnings = []
    for point in points:
        if not point.failed:
            continue
        warning = f"{spec.parameter}={point.value!r}: [{point.error_code}] {point.message}"
        warnings.append(warning)
        handler.error_stats[point.error_code] = handler.error_stats.get(point.error_code, 0) + 1
        logger.warning(warning, extra={"command": "sweep", "gamma": point.value})

    write_csv(out / "sweep.csv", SWEEP_HEADER, (point.row() for point in points))
    payload = {
        "parameter": spec.parameter,
        "values": list(spec.values),
        "warnings": warnings,
        "config": spec.base.resolved(),
    }
    write_json(out / "sweep.json", payload)

    print_summary([point.row() for point in points], headers=SWEEP_HEADER)
    return payload
