"""
Truncated Fock-space oracle for one or two channel uses.

Operators are dense matrices on D**modes levels with mode 0 as the most
significant tensor factor. Unitaries are built with the same Heisenberg action
as their covariance-picture counterparts, and states are evolved as
U^dag rho U, which is what `core.gaussian.apply` computes on moments.

`simulate_channel` never forms the joint input+environment density matrix:
it evolves pure branches (eigencomponents of the input times Fock states of
the thermal environment) and accumulates the reduced output.
"""

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.special import entr, gammaln

from .config import get_settings
from .errors import InputValidationError, TruncationError
from .logger import get_logger
from .spectral import SqueezingMatrix
from .state import ChannelParams

MAX_MODES = 2
MAX_SQUEEZING = 0.2
BRANCH_FLOOR = 1e-12
EIGENVALUE_FLOOR = -1e-10
HERMITIAN_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense operator on `modes` truncated oscillators with `cutoff` levels each."""

    modes: int
    cutoff: int
    matrix: np.ndarray

    def __post_init__(self):
        if isinstance(self.modes, bool) or int(self.modes) != self.modes or self.modes < 1:
            raise InputValidationError(f"Mode count must be a positive integer, got {self.modes!r}")
        if isinstance(self.cutoff, bool) or int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise InputValidationError(f"Cutoff must be a positive integer, got {self.cutoff!r}")
        dim = int(self.cutoff) ** int(self.modes)
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (dim, dim):
            raise InputValidationError(
                f"Operator on {self.modes} modes with cutoff {self.cutoff} must be {dim}x{dim}, got {matrix.shape}"
            )
        object.__setattr__(self, "modes", int(self.modes))
        object.__setattr__(self, "cutoff", int(self.cutoff))
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def dagger(self) -> "FockOperator":
        return FockOperator(self.modes, self.cutoff, self.matrix.conj().T)

    def check_density(self, tail_tolerance: Optional[float] = None) -> None:
        """Raise unless this is Hermitian, positive and of trace >= 1 - tail_tolerance."""
        tolerance = tail_tolerance if tail_tolerance is not None else get_settings().tail_tolerance
        rho = self.matrix
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_ATOL:
            raise InputValidationError("Density matrix is not Hermitian")
        lowest = float(np.min(np.linalg.eigvalsh(rho)))
        if lowest < EIGENVALUE_FLOOR:
            raise InputValidationError(f"Density matrix has negative eigenvalue {lowest:.3e}")
        trace = self.trace()
        if trace < 1.0 - tolerance or trace > 1.0 + tolerance:
            raise InputValidationError(f"Density matrix trace {trace:.9f} is not 1 within {tolerance:.1e}")


def _check_cutoff(cutoff: int) -> int:
    if isinstance(cutoff, bool) or int(cutoff) != cutoff or cutoff < 2:
        raise InputValidationError(f"Fock cutoff must be an integer >= 2, got {cutoff!r}")
    return int(cutoff)


def _check_modes(modes: int) -> int:
    if isinstance(modes, bool) or int(modes) != modes or modes < 1 or modes > MAX_MODES:
        raise InputValidationError(f"Fock oracle supports 1 to {MAX_MODES} modes, got {modes!r}")
    return int(modes)


def default_cutoff(modes: int) -> int:
    """Per-mode cutoff from settings for one or two modes."""
    settings = get_settings()
    return settings.fock_cutoff_single if _check_modes(modes) == 1 else settings.fock_cutoff_pair


def ladder_operator(cutoff: int) -> FockOperator:
    """Annihilation operator with <m|a|m+1> = sqrt(m+1)."""
    cutoff = _check_cutoff(cutoff)
    return FockOperator(1, cutoff, np.diag(np.sqrt(np.arange(1, cutoff)), k=1))


@lru_cache(maxsize=16)
def _mode_ladders(modes: int, cutoff: int) -> Tuple[np.ndarray, ...]:
    """Annihilation operator of every mode embedded in the full space."""
    a = ladder_operator(cutoff).matrix
    eye = np.eye(cutoff)
    ladders = []
    for k in range(modes):
        factors = [a if j == k else eye for j in range(modes)]
        full = factors[0]
        for factor in factors[1:]:
            full = np.kron(full, factor)
        full.setflags(write=False)
        ladders.append(full)
    return tuple(ladders)


def _swap_unitary(cutoff: int) -> np.ndarray:
    # |m, k> -> (-1)^m |k, m>: the eta = 0 limit, a -> -b and b -> a
    dim = cutoff * cutoff
    unitary = np.zeros((dim, dim), dtype=complex)
    for m in range(cutoff):
        for k in range(cutoff):
            unitary[k * cutoff + m, m * cutoff + k] = (-1.0) ** m
    return unitary


def beam_splitter_unitary(eta: float, cutoff: int) -> FockOperator:
    """exp(theta (a^dag b - a b^dag)) with cos(theta) = sqrt(eta)."""
    cutoff = _check_cutoff(cutoff)
    if not np.isfinite(eta) or eta < 0 or eta > 1:
        raise InputValidationError(f"Transmissivity must lie in [0, 1], got {eta!r}")
    if eta == 0:
        return FockOperator(2, cutoff, _swap_unitary(cutoff))
    theta = np.arctan(np.sqrt((1.0 - eta) / eta))
    a, b = _mode_ladders(2, cutoff)
    generator = theta * (a.conj().T @ b - a @ b.conj().T)
    return FockOperator(2, cutoff, scipy.linalg.expm(generator))


def multimode_squeeze_unitary(Z: SqueezingMatrix, cutoff: int) -> FockOperator:
    """exp(sum_kk' Z_kk' (a_k a_k' - a_k^dag a_k'^dag)), the Fock form of the multi-mode squeezer."""
    cutoff = _check_cutoff(cutoff)
    modes = _check_modes(Z.n)
    if Z.max_abs() > MAX_SQUEEZING:
        raise InputValidationError(
            f"Fock oracle squeezing limited to |Z|_max <= {MAX_SQUEEZING}, got {Z.max_abs():.3g}"
        )
    ladders = _mode_ladders(modes, cutoff)
    dim = cutoff ** modes
    generator = np.zeros((dim, dim), dtype=complex)
    for k in range(modes):
        for kp in range(modes):
            xi = Z.entries[k, kp]
            if xi == 0:
                continue
            pair = ladders[k] @ ladders[kp]
            generator += xi * (pair - pair.conj().T)
    return FockOperator(modes, cutoff, scipy.linalg.expm(generator))


def evolve(unitary: FockOperator, rho: FockOperator) -> FockOperator:
    """U^dag rho U."""
    if (unitary.modes, unitary.cutoff) != (rho.modes, rho.cutoff):
        raise InputValidationError("Unitary and state live on different truncated spaces")
    U = unitary.matrix
    return FockOperator(rho.modes, rho.cutoff, U.conj().T @ rho.matrix @ U)


def pure_density(vector: np.ndarray, modes: int, cutoff: int) -> FockOperator:
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    return FockOperator(modes, cutoff, np.outer(vector, vector.conj()))


def _resolve_cutoff(modes: int, cutoff: Optional[int]) -> int:
    return _check_cutoff(cutoff) if cutoff is not None else default_cutoff(modes)


def vacuum_density(modes: int, cutoff: Optional[int] = None) -> FockOperator:
    """Vacuum on `modes` truncated oscillators."""
    modes = _check_modes(modes)
    cutoff = _resolve_cutoff(modes, cutoff)
    vector = np.zeros(cutoff ** modes)
    vector[0] = 1.0
    return pure_density(vector, modes, cutoff)


def _thermal_weights(M: float, cutoff: int) -> np.ndarray:
    if not np.isfinite(M) or M < 0:
        raise InputValidationError(f"Thermal photon number must be finite and >= 0, got {M!r}")
    levels = np.arange(cutoff)
    if M == 0:
        return (levels == 0).astype(float)
    return (1.0 / (M + 1.0)) * (M / (M + 1.0)) ** levels


def thermal_density(modes: int, M: float, cutoff: Optional[int] = None) -> FockOperator:
    """Product of geometric photon distributions with mean M, truncated at the cutoff."""
    modes = _check_modes(modes)
    cutoff = _resolve_cutoff(modes, cutoff)
    weights = _thermal_weights(M, cutoff)
    diagonal = weights
    for _ in range(modes - 1):
        diagonal = np.kron(diagonal, weights)
    return FockOperator(modes, cutoff, np.diag(diagonal).astype(complex))


def coherent_density(alphas: Sequence[complex], cutoff: Optional[int] = None) -> FockOperator:
    """Product of coherent states with Poisson amplitudes, truncated at the cutoff."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    modes = _check_modes(alphas.size)
    cutoff = _resolve_cutoff(modes, cutoff)
    levels = np.arange(cutoff)
    vector = np.ones(1, dtype=complex)
    for alpha in alphas:
        amplitudes = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * gammaln(levels + 1)) * np.power(alpha, levels)
        vector = np.kron(vector, amplitudes)
    return pure_density(vector, modes, cutoff)


def photon_number(rho: FockOperator) -> float:
    """Total mean photon number over all modes."""
    total = sum(a.conj().T @ a for a in _mode_ladders(rho.modes, rho.cutoff))
    return float(np.real(np.trace(rho.matrix @ total)))


def entropy(rho: FockOperator) -> float:
    """Von Neumann entropy in nats from the dense spectrum."""
    eigenvalues = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
    return float(np.sum(entr(eigenvalues)))


def moments(rho: FockOperator) -> Tuple[np.ndarray, np.ndarray]:
    """Quadrature mean and covariance, x-then-p ordering, vacuum covariance I/2."""
    ladders = _mode_ladders(rho.modes, rho.cutoff)
    xs = [(a + a.conj().T) / np.sqrt(2.0) for a in ladders]
    ps = [(a - a.conj().T) / (1j * np.sqrt(2.0)) for a in ladders]
    quadratures = xs + ps
    state = rho.matrix / rho.trace()

    def expectation(op: np.ndarray) -> float:
        return float(np.real(np.trace(state @ op)))

    mean = np.array([expectation(r) for r in quadratures])
    size = len(quadratures)
    covariance = np.zeros((size, size))
    for i in range(size):
        for j in range(i, size):
            anticommutator = quadratures[i] @ quadratures[j] + quadratures[j] @ quadratures[i]
            covariance[i, j] = 0.5 * expectation(anticommutator) - mean[i] * mean[j]
            covariance[j, i] = covariance[i, j]
    return mean, covariance


def subspace_unitarity_error(unitary: FockOperator, max_photons: Optional[int] = None) -> float:
    """max |U^dag U - I| restricted to basis states with at most max_photons per mode (default cutoff // 2)."""
    limit = unitary.cutoff // 2 if max_photons is None else int(max_photons)
    levels = np.indices((unitary.cutoff,) * unitary.modes).reshape(unitary.modes, -1)
    low = np.flatnonzero(np.all(levels <= limit, axis=0))
    columns = unitary.matrix[:, low]
    return float(np.max(np.abs(columns.conj().T @ columns - np.eye(low.size))))


def _pad(rho: FockOperator, cutoff: int) -> FockOperator:
    """Embed rho into a larger per-mode cutoff."""
    modes, old = rho.modes, rho.cutoff
    tensor = rho.matrix.reshape((old,) * (2 * modes))
    padded = np.zeros((cutoff,) * (2 * modes), dtype=complex)
    padded[(slice(0, old),) * (2 * modes)] = tensor
    return FockOperator(modes, cutoff, padded.reshape(cutoff ** modes, cutoff ** modes))


def _simulate(params: ChannelParams, rho: FockOperator) -> Tuple[FockOperator, float]:
    n, D = params.n, rho.cutoff
    coupling = beam_splitter_unitary(params.eta, D).matrix.conj().T.reshape(D, D, D, D)
    if params.Z.is_zero():
        env_states = np.eye(D ** n, dtype=complex)
    else:
        # columns are U_Z^dag |k>
        env_states = multimode_squeeze_unitary(params.Z, D).matrix.conj().T
    env_weights = _thermal_weights(params.M, D)
    for _ in range(n - 1):
        env_weights = np.kron(env_weights, _thermal_weights(params.M, D))

    in_weights, in_vectors = np.linalg.eigh(rho.matrix)

    output = np.zeros((D ** n, D ** n), dtype=complex)
    retained = 0.0
    edge = 0.0
    for p, psi in zip(in_weights, in_vectors.T):
        if p < BRANCH_FLOOR:
            continue
        for k, q in enumerate(env_weights):
            weight = p * q
            if weight < BRANCH_FLOOR:
                continue
            branch = np.multiply.outer(psi, env_states[:, k]).reshape((D,) * (2 * n))
            for mode in range(n):
                branch = np.tensordot(coupling, branch, axes=([2, 3], [mode, n + mode]))
                branch = np.moveaxis(branch, [0, 1], [mode, n + mode])
            probabilities = np.abs(branch) ** 2
            for axis in range(2 * n):
                edge += weight * float(np.sum(np.take(probabilities, D - 1, axis=axis)))
            flat = branch.reshape(D ** n, D ** n)
            output += weight * (flat @ flat.conj().T)
            retained += weight

    output = 0.5 * (output + output.conj().T)
    deficit = max(0.0, 1.0 - retained) + edge
    return FockOperator(n, D, output), deficit


def simulate_channel(params: ChannelParams, rho: FockOperator,
                     tail_tolerance: Optional[float] = None) -> FockOperator:
    """Output density matrix of the memory channel for a truncated input state."""
    n = _check_modes(params.n)
    if rho.modes != n:
        raise InputValidationError(f"Channel acts on {n} modes but input has {rho.modes}")
    tolerance = tail_tolerance if tail_tolerance is not None else get_settings().tail_tolerance
    logger = get_logger()

    start = time.perf_counter()
    output, deficit = _simulate(params, rho)
    if deficit > tolerance:
        retry_cutoff = 2 * rho.cutoff
        logger.log_event("fock_retry", {
            "cutoff": rho.cutoff,
            "retry_cutoff": retry_cutoff,
            "deficit": deficit,
        }, "fock")
        output, deficit = _simulate(params, _pad(rho, retry_cutoff))
        if deficit > tolerance:
            error = TruncationError(deficit, retry_cutoff, tolerance)
            logger.log_error(str(error), "fock", error)
            raise error
    logger.log_performance("fock_simulation_seconds", time.perf_counter() - start, "fock")
    return output
