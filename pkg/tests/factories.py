"""
Builders shared across test modules.
"""

from models.schemas import LatticeParams, LinearLoss, RandomLoss, UniformLoss


def make_params(t1=0.3, t2=0.5, n_cells=10, profile="uniform", gamma=1.0, seed=0,
                diagnostic_limits=False) -> LatticeParams:
    """Lattice with the common couplings of the test suite."""
    if profile == "uniform":
        loss = UniformLoss(gamma=gamma)
    elif profile == "linear":
        loss = LinearLoss(gamma=gamma)
    else:
        loss = RandomLoss(gamma_max=gamma, seed=seed)
    return LatticeParams(t1=t1, t2=t2, n_cells=n_cells, loss=loss, diagnostic_limits=diagnostic_limits)
