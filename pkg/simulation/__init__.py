"""
Numerics of the lossy bipartite lattice: Hamiltonians, walks, spectra and edge-burst metrics.
"""

from .model import (
    Hamiltonian,
    Sublattice,
    bloch_bands,
    bloch_matrix,
    build_hamiltonian,
    ring_momenta,
    site_index
)
from .dynamics import (
    DecayDistribution,
    InitialCondition,
    RK4Propagator,
    WalkerState,
    decay_distribution,
    decay_distribution_lyapunov,
    decay_distribution_ode,
    decay_distribution_spectral,
    evolve_step,
    initial_state,
    walker_density
)
from .spectral import (
    DisplacementPair,
    Spectrum,
    eigensystem,
    eigenvector_condition,
    imaginary_gap,
    ipr_per_sublattice,
    mean_displacement,
    spectra_compare,
    spectrum
)
from .metrics import (
    EdgeBurstMetrics,
    edge_burst_metrics,
    edge_burst_present,
    left_right_asymmetry
)

__all__ = [
    # Model
    "Hamiltonian",
    "Sublattice",
    "bloch_bands",
    "bloch_matrix",
    "build_hamiltonian",
    "ring_momenta",
    "site_index",

    # Dynamics
    "DecayDistribution",
    "InitialCondition",
    "RK4Propagator",
    "WalkerState",
    "decay_distribution",
    "decay_distribution_lyapunov",
    "decay_distribution_ode",
    "decay_distribution_spectral",
    "evolve_step",
    "initial_state",
    "walker_density",

    # Spectral
    "DisplacementPair",
    "Spectrum",
    "eigensystem",
    "eigenvector_condition",
    "imaginary_gap",
    "ipr_per_sublattice",
    "mean_displacement",
    "spectra_compare",
    "spectrum",

    # Metrics
    "EdgeBurstMetrics",
    "edge_burst_metrics",
    "edge_burst_present",
    "left_right_asymmetry"
]
