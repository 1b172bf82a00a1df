"""
Seeded random generators for property sweeps over channels and inputs.
"""

from typing import Sequence, Tuple

import numpy as np
from scipy.stats import ortho_group

from .gaussian import (
    GaussianState,
    SymplecticTransform,
    apply,
    mean_photon_number,
    passive_rotation,
    squeezer_bank,
    thermal_state,
)
from .spectral import SqueezingMatrix
from .state import ChannelParams

MAX_INPUT_SQUEEZING = 0.3


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random orthogonal n x n matrix."""
    if n == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])
    return ortho_group.rvs(dim=n, random_state=rng)


def random_squeezing_matrix(rng: np.random.Generator, n: int, max_abs: float = 0.5) -> SqueezingMatrix:
    """Symmetric Z with entries uniform in [-max_abs, max_abs]."""
    upper = np.triu(rng.uniform(-max_abs, max_abs, size=(n, n)))
    return SqueezingMatrix(n, upper + np.triu(upper, 1).T)


def _symplectic(left: np.ndarray, ds: np.ndarray, right: np.ndarray) -> SymplecticTransform:
    return passive_rotation(left) @ squeezer_bank(ds) @ passive_rotation(right)


def random_symplectic(rng: np.random.Generator, n: int,
                      max_squeezing: float = MAX_INPUT_SQUEEZING) -> SymplecticTransform:
    """Rotation o bounded single-mode squeezers o rotation."""
    ds = rng.uniform(-max_squeezing, max_squeezing, size=n)
    return _symplectic(random_orthogonal(rng, n), ds, random_orthogonal(rng, n))


def random_constrained_input(rng: np.random.Generator, n: int, N: float) -> GaussianState:
    """Mixed, squeezed, correlated and displaced state with at most n N photons."""
    budget = n * N
    left, right = random_orthogonal(rng, n), random_orthogonal(rng, n)
    ds = rng.uniform(-MAX_INPUT_SQUEEZING, MAX_INPUT_SQUEEZING, size=n)
    if budget <= 0:
        ds = np.zeros(n)
    transform = _symplectic(left, ds, right)
    # squeezing alone costs photons; shrink it until the vacuum-level cost fits
    while np.any(ds) and mean_photon_number(apply(transform, thermal_state(n, 0.0))) > budget:
        ds = 0.5 * ds
        if np.max(np.abs(ds)) < 1e-12:
            ds = np.zeros(n)
        transform = _symplectic(left, ds, right)

    spread = 0.5 * float(np.trace(transform.matrix @ transform.matrix.T))
    remaining = max(0.0, budget - mean_photon_number(apply(transform, thermal_state(n, 0.0))))
    thermal = rng.uniform() * remaining / spread
    state = apply(transform, thermal_state(n, thermal))

    remaining = max(0.0, budget - mean_photon_number(state))
    displacement_photons = rng.uniform() * remaining
    direction = rng.normal(size=2 * n)
    direction /= np.linalg.norm(direction)
    mean = np.sqrt(2.0 * displacement_photons) * direction
    return GaussianState(n, mean, state.covariance)


def random_channel(rng: np.random.Generator, n: int, max_squeezing: float = 0.5,
                   max_env_photons: float = 2.0) -> ChannelParams:
    """Channel with uniform eta, M and a random squeezing matrix."""
    return ChannelParams(
        n=n,
        eta=float(rng.uniform(0.0, 1.0)),
        M=float(rng.uniform(0.0, max_env_photons)),
        Z=random_squeezing_matrix(rng, n, max_squeezing),
    )


def random_parameter_point(rng: np.random.Generator, uses: Sequence[int] = tuple(range(1, 17)),
                           max_photons: float = 10.0, max_env_photons: float = 5.0,
                           max_squeezing: float = 0.5) -> Tuple[ChannelParams, float]:
    """Channel plus input budget N drawn over the ranges the bounds are stated for."""
    n = int(rng.choice(uses))
    params = random_channel(rng, n, max_squeezing, max_env_photons)
    return params, float(rng.uniform(0.0, max_photons))
