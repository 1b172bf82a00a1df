"""
Lossy bosonic channel with and without a squeezed (memory) environment.

Input modes occupy global indices 0..n-1 and environment modes n..2n-1; callers
only ever see the n input modes.
"""

from typing import Optional, Tuple

import numpy as np

from .errors import InputValidationError
from .gaussian import (
    GaussianState,
    SymplecticTransform,
    apply,
    partial_trace,
    passive_rotation,
    squeezer_bank,
    tensor,
    thermal_state,
    vacuum_state,
)
from .spectral import SpectralData, SqueezingMatrix, analyze
from .state import ChannelParams


def _relative_deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(a))))


def _check_input(params: ChannelParams, state: GaussianState) -> None:
    if state.num_modes != params.n:
        raise InputValidationError(
            f"Channel acts on {params.n} modes but input has {state.num_modes}"
        )


def global_beam_splitter(params: ChannelParams) -> SymplecticTransform:
    """Couple input k with environment k on a beam splitter of transmissivity eta, for every k."""
    n = params.n
    t, r = np.sqrt(params.eta), np.sqrt(1.0 - params.eta)
    eye = np.eye(n)
    return passive_rotation(np.block([[t * eye, -r * eye], [r * eye, t * eye]]))


def multimode_squeezer(Z: SqueezingMatrix, spec: Optional[SpectralData] = None) -> SymplecticTransform:
    """Squeeze the eigenmodes c_j = sum_k V_kj a_k by d_j."""
    spec = spec if spec is not None else analyze(Z)
    V = spec.eigenvectors
    return passive_rotation(V) @ squeezer_bank(spec.eigenvalues) @ passive_rotation(V.T)


def environment_state(params: ChannelParams) -> GaussianState:
    """Thermal environment after the multi-mode squeezer."""
    return apply(multimode_squeezer(params.Z), thermal_state(params.n, params.M))


def _couple(params: ChannelParams, state: GaussianState, environment: GaussianState) -> GaussianState:
    joint = apply(global_beam_splitter(params), tensor(state, environment))
    return partial_trace(joint, range(params.n))


def apply_memoryless(params: ChannelParams, state: GaussianState) -> GaussianState:
    """Lossy channel with an unsqueezed thermal environment on every use."""
    _check_input(params, state)
    return _couple(params, state, thermal_state(params.n, params.M))


def apply_memory(params: ChannelParams, state: GaussianState) -> GaussianState:
    """Memory channel: the input couples to the squeezed environment, which is then traced out."""
    _check_input(params, state)
    return _couple(params, state, environment_state(params))


def state_at_channel_entry(params: ChannelParams, state: GaussianState) -> GaussianState:
    """Input after undoing the memory squeezer; this is what the memoryless map sees."""
    _check_input(params, state)
    return apply(multimode_squeezer(params.Z).inverse(), state)


def apply_memory_decomposed(params: ChannelParams, state: GaussianState) -> GaussianState:
    """Memory channel as squeezer o memoryless channel o inverse squeezer."""
    _check_input(params, state)
    squeezer = multimode_squeezer(params.Z)
    entry = apply(squeezer.inverse(), state)
    return apply(squeezer, apply_memoryless(params, entry))


def commutation_check(params: ChannelParams) -> float:
    """Relative max deviation between S_U S_sq and S_sq S_U, S_sq squeezing inputs and environment alike."""
    squeezer = multimode_squeezer(params.Z)
    both = squeezer.direct_sum(squeezer).matrix
    coupling = global_beam_splitter(params).matrix
    return _relative_deviation(coupling @ both, both @ coupling)


def output_photon_ceiling(params: ChannelParams, N: float) -> float:
    """Per-use mean photon number at the channel output for inputs with at most N photons per use."""
    if not np.isfinite(N) or N < 0:
        raise InputValidationError(f"Photon budget must be finite and >= 0, got {N!r}")
    spec = params.spectral()
    eta = params.eta
    return float(eta * N + (1.0 - eta) * (spec.s0 * params.M + spec.s1))


def optimal_min_entropy_input(params: ChannelParams) -> GaussianState:
    """Squeezed vacuum whose memory-channel output has entropy n g((1-eta) M)."""
    return apply(multimode_squeezer(params.Z), vacuum_state(params.n))


def decomposition_deviation(params: ChannelParams, state: GaussianState) -> Tuple[float, float]:
    """(mean, covariance) deviations between the direct and decomposed memory channel."""
    direct = apply_memory(params, state)
    decomposed = apply_memory_decomposed(params, state)
    mean_dev = float(np.max(np.abs(direct.mean - decomposed.mean)))
    cov_dev = _relative_deviation(direct.covariance, decomposed.covariance)
    return mean_dev, cov_dev
