"""
``spectrum``: open and ring spectra with their diagnostics.
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from config.settings import Settings, get_settings
from models.schemas import BoundaryCondition, RunConfig
from simulation.model import bloch_bands
from simulation.spectral import (
    Spectrum,
    imaginary_gap,
    ipr_per_sublattice,
    mean_displacement,
    spectra_compare,
    spectrum
)
from .common import print_summary, write_csv, write_json

logger = logging.getLogger(__name__)

BLOCH_SAMPLES = 512


def _eigen_rows(spec: Spectrum):
    return ((float(e.real), float(e.imag)) for e in spec.eigenvalues)


def cmd_spectrum(cfg: RunConfig, settings: Optional[Settings] = None) -> Dict[str, Any]:
    """Write spectrum_open.csv, spectrum_ring.csv, ipr_open.csv and spectral.json."""
    settings = settings or get_settings()
    params = cfg.lattice()
    out = cfg.out_dir

    spec_open = spectrum(params, BoundaryCondition.OPEN, settings.spectral)
    spec_ring = spectrum(params, BoundaryCondition.RING, settings.spectral)

    write_csv(out / "spectrum_open.csv", ("re", "im"), _eigen_rows(spec_open))
    write_csv(out / "spectrum_ring.csv", ("re", "im"), _eigen_rows(spec_ring))

    ipr_a, ipr_b = ipr_per_sublattice(spec_open)
    write_csv(
        out / "ipr_open.csv",
        ("re", "im", "ipr_A", "ipr_B"),
        ((float(e.real), float(e.imag), float(a), float(b))
         for e, a, b in zip(spec_open.eigenvalues, ipr_a, ipr_b))
    )

    if params.is_uniform:
        k = 2.0 * np.pi * np.arange(BLOCH_SAMPLES) / BLOCH_SAMPLES
        bands = bloch_bands(params, k)
        write_csv(
            out / "spectrum_bloch.csv",
            ("k", "re", "im"),
            ((float(kk), float(e.real), float(e.imag)) for kk, row in zip(k, bands) for e in row)
        )

    displacement = mean_displacement(spec_open)
    payload = {
        "imaginary_gap_open": imaginary_gap(spec_open),
        "imaginary_gap_ring": imaginary_gap(spec_ring),
        "hausdorff_distance": spectra_compare(spec_open, spec_ring),
        "mean_A": displacement.mean_a,
        "mean_B": displacement.mean_b,
    }
    write_json(out / "spectral.json", payload)

    logger.info("Spectra written", extra={"n_cells": cfg.n, "operation": "spectrum"})
    print_summary([
        ("imaginary gap (open)", payload["imaginary_gap_open"]),
        ("imaginary gap (ring)", payload["imaginary_gap_ring"]),
        ("ring/open Hausdorff distance", payload["hausdorff_distance"]),
        ("mean displacement A", payload["mean_A"]),
        ("mean displacement B", payload["mean_B"]),
        ("output", str(out)),
    ])
    return payload
