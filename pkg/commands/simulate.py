"""
``simulate``: decay distribution of one walk plus its edge-burst metrics.

Writes ``decay.csv``, ``metrics.json`` and, with snapshots, ``density.csv``.
"""

import logging
from typing import Any, Dict, Optional, Sequence

from config.settings import Settings, get_settings
from core.exceptions import DegenerateDistributionError, NonConvergenceError
from core.logging_manager import LogContext, get_logging_manager
from models.schemas import RunConfig
from simulation.dynamics import DecayDistribution, decay_distribution, walker_density
from simulation.metrics import edge_burst_metrics
from .common import print_summary, write_csv, write_json

logger = logging.getLogger(__name__)

METRIC_KEYS = ("p1_over_pmin", "p1_over_ps", "edge_fraction", "pmin_index")


def _metrics_payload(dist: DecayDistribution, cfg: RunConfig, partial: bool) -> Dict[str, Any]:
    try:
        metrics = edge_burst_metrics(dist).to_dict()
    except DegenerateDistributionError as e:
        logger.warning(str(e), extra={"operation": "edge_burst_metrics"})
        metrics = {key: None for key in METRIC_KEYS}
    return {
        **metrics,
        "residual": dist.residual,
        "method": dist.method,
        "converged": dist.converged,
        "partial": partial,
        "config": cfg.resolved(),
    }


def cmd_simulate(cfg: RunConfig, snapshots: Optional[Sequence[float]] = None,
                 settings: Optional[Settings] = None) -> Dict[str, Any]:
    """
    Run one walk and write its artifacts.

    On NonConvergence the partial distribution is still written, with
    ``partial: true`` in metrics.json, and the error is re-raised.
    """
    settings = settings or get_settings()
    params = cfg.lattice()
    rates = params.rates()
    out = cfg.out_dir

    get_logging_manager().log_with_context(
        logger, logging.INFO, "Running walk",
        LogContext(command="simulate", profile=cfg.profile.value, n_cells=cfg.n,
                   gamma=cfg.gamma, bc=cfg.bc.value, operation=cfg.method.value)
    )

    failure: Optional[NonConvergenceError] = None
    try:
        dist = decay_distribution(params, cfg.s, cfg.method, cfg.integrator(), settings.spectral)
    except NonConvergenceError as e:
        failure = e
        dist = e.partial

    write_csv(
        out / "decay.csv",
        ("n", "gamma_n", "P_n"),
        ((n + 1, float(rates[n]), float(dist.P[n])) for n in range(cfg.n))
    )
    payload = _metrics_payload(dist, cfg, partial=failure is not None)
    write_json(out / "metrics.json", payload)

    if snapshots:
        density = walker_density(params, cfg.s, cfg.integrator(), snapshots)
        write_csv(
            out / "density.csv",
            ("t", "n", "density_A", "density_B"),
            ((float(t), n + 1, float(density[i, n, 0]), float(density[i, n, 1]))
             for i, t in enumerate(snapshots) for n in range(cfg.n))
        )

    print_summary([
        ("P_1 / P_min", payload["p1_over_pmin"]),
        ("P_1 / P_S", payload["p1_over_ps"]),
        ("edge fraction", payload["edge_fraction"]),
        ("P_min index", payload["pmin_index"]),
        ("sum P_n", dist.total),
        ("residual", dist.residual),
        ("method", dist.method),
        ("output", str(out)),
    ])

    if failure is not None:
        raise failure
    return payload
