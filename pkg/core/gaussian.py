"""
Gaussian states and symplectic transformations in the covariance-matrix picture.

Quadratures are ordered x_1..x_m, p_1..p_m with a = (x + i p)/sqrt(2), so the
vacuum has variance 1/2 per quadrature (hbar = 1). A SymplecticTransform stores
the Heisenberg action W r W^dag = S r of a Gaussian unitary W, which is how the
beam-splitter and squeezing relations are written. `apply` evolves the moments
with S (mean -> S mean, covariance -> S cov S^T), i.e. the state W^dag rho W.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.special import xlogy

from .errors import InputValidationError

SYMMETRY_RTOL = 1e-12
SYMPLECTIC_ATOL = 1e-10
UNCERTAINTY_ATOL = 1e-9
PAIRING_TOL = 1e-8
ORTHOGONALITY_ATOL = 1e-10
G_FLOOR = 1e-12

ArrayLike = Union[Sequence[float], np.ndarray]


def _frozen(array: np.ndarray) -> np.ndarray:
    copy = np.array(array, dtype=float, copy=True)
    copy.setflags(write=False)
    return copy


def _check_modes(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise InputValidationError(f"Number of modes must be a positive integer, got {m!r}")
    return int(m)


@lru_cache(maxsize=64)
def _form_matrix(m: int) -> np.ndarray:
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return _frozen(np.block([[zero, eye], [-eye, zero]]))


def g(x):
    """Entropy in nats of a thermal state with mean photon number x: (x+1)ln(x+1) - x ln x."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InputValidationError(f"g(x) requires finite x, got {x!r}")
    if np.any(arr < 0):
        raise InputValidationError(f"g(x) requires x >= 0, got {x!r}")
    # removable singularity at 0
    safe = np.where(arr < G_FLOOR, 0.0, arr)
    value = xlogy(safe + 1.0, safe + 1.0) - xlogy(safe, safe)
    if value.ndim == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class SymplecticForm:
    """Canonical form J = [[0, I], [-I, 0]] for x-then-p ordering."""

    num_modes: int

    def __post_init__(self):
        object.__setattr__(self, "num_modes", _check_modes(self.num_modes))

    @property
    def matrix(self) -> np.ndarray:
        return _form_matrix(self.num_modes)


def symplectic_form(m: int) -> np.ndarray:
    """Return the 2m x 2m symplectic form as a read-only array."""
    return SymplecticForm(m).matrix


def _direct_sum_indices(m1: int, m2: int):
    m = m1 + m2
    first = np.r_[0:m1, m:m + m1]
    second = np.r_[m1:m, m + m1:2 * m]
    return first, second


def _direct_sum_matrix(a: np.ndarray, m1: int, b: np.ndarray, m2: int) -> np.ndarray:
    first, second = _direct_sum_indices(m1, m2)
    out = np.zeros((2 * (m1 + m2), 2 * (m1 + m2)))
    out[np.ix_(first, first)] = a
    out[np.ix_(second, second)] = b
    return out


def symplectic_deviation(matrix: np.ndarray) -> float:
    """Max-abs deviation of S J S^T from J."""
    m = matrix.shape[0] // 2
    form = symplectic_form(m)
    return float(np.max(np.abs(matrix @ form @ matrix.T - form)))


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Real 2m x 2m matrix S with S J S^T = J acting on quadratures."""

    num_modes: int
    matrix: np.ndarray

    def __post_init__(self):
        m = _check_modes(self.num_modes)
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.shape != (2 * m, 2 * m):
            raise InputValidationError(
                f"Transform for {m} modes must be {2 * m}x{2 * m}, got {matrix.shape}"
            )
        if not np.all(np.isfinite(matrix)):
            raise InputValidationError("Transform has non-finite entries")
        deviation = symplectic_deviation(matrix)
        if deviation > SYMPLECTIC_ATOL:
            raise InputValidationError(f"Matrix is not symplectic: |SJS^T - J|_max = {deviation:.3e}")
        object.__setattr__(self, "num_modes", m)
        object.__setattr__(self, "matrix", _frozen(matrix))

    def compose(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Return self o other (other acts first)."""
        if other.num_modes != self.num_modes:
            raise InputValidationError(
                f"Cannot compose transforms on {self.num_modes} and {other.num_modes} modes"
            )
        return SymplecticTransform(self.num_modes, self.matrix @ other.matrix)

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        return self.compose(other)

    def inverse(self) -> "SymplecticTransform":
        """Inverse transform -J S^T J."""
        form = symplectic_form(self.num_modes)
        return SymplecticTransform(self.num_modes, -form @ self.matrix.T @ form)

    def direct_sum(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Transform acting with self on the first modes and other on the following ones."""
        matrix = _direct_sum_matrix(self.matrix, self.num_modes, other.matrix, other.num_modes)
        return SymplecticTransform(self.num_modes + other.num_modes, matrix)

    def deviation(self) -> float:
        return symplectic_deviation(self.matrix)


def identity_transform(m: int) -> SymplecticTransform:
    """Identity on m modes."""
    m = _check_modes(m)
    return SymplecticTransform(m, np.eye(2 * m))


def _check_symmetric(covariance: np.ndarray, what: str = "covariance") -> None:
    scale = max(1.0, float(np.max(np.abs(covariance))))
    asym = float(np.max(np.abs(covariance - covariance.T)))
    if asym > SYMMETRY_RTOL * scale:
        raise InputValidationError(f"{what} is not symmetric: max |C - C^T| = {asym:.3e}")


def symplectic_eigenvalues(covariance: ArrayLike) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, sorted descending.

    Moduli of the eigenvalues of J @ cov come in equal pairs; pairs are matched
    after sorting and one representative per pair is returned.
    """
    cov = np.asarray(covariance, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise InputValidationError(f"Covariance must be a square matrix of even size, got {cov.shape}")
    _check_symmetric(cov)
    m = cov.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(m) @ cov)))[::-1]
    first, second = moduli[0::2], moduli[1::2]
    mismatch = np.abs(first - second)
    if np.any(mismatch > PAIRING_TOL * np.maximum(1.0, first)):
        raise InputValidationError(
            f"Symplectic eigenvalues do not pair up (max mismatch {np.max(mismatch):.3e})"
        )
    return 0.5 * (first + second)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second quadrature moments of an m-mode Gaussian state."""

    num_modes: int
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        m = _check_modes(self.num_modes)
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        if mean.shape != (2 * m,):
            raise InputValidationError(f"Mean for {m} modes must have length {2 * m}, got {mean.shape}")
        if cov.shape != (2 * m, 2 * m):
            raise InputValidationError(f"Covariance for {m} modes must be {2 * m}x{2 * m}, got {cov.shape}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise InputValidationError("State moments must be finite")
        _check_symmetric(cov)
        cov = 0.5 * (cov + cov.T)
        # uncertainty relation: cov + (i/2) J >= 0
        lowest = float(np.min(np.linalg.eigvalsh(cov + 0.5j * symplectic_form(m))))
        if lowest < -UNCERTAINTY_ATOL * max(1.0, float(np.max(np.abs(cov)))):
            raise InputValidationError(
                f"Covariance violates the uncertainty relation (min eigenvalue {lowest:.3e})"
            )
        object.__setattr__(self, "num_modes", m)
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "covariance", _frozen(cov))


def vacuum_state(m: int) -> GaussianState:
    """Vacuum on m modes: zero mean, covariance I/2."""
    m = _check_modes(m)
    return GaussianState(m, np.zeros(2 * m), 0.5 * np.eye(2 * m))


def thermal_state(m: int, M: float) -> GaussianState:
    """Product of m thermal modes with M mean photons each."""
    m = _check_modes(m)
    if not np.isfinite(M) or M < 0:
        raise InputValidationError(f"Thermal photon number must be finite and >= 0, got {M!r}")
    return GaussianState(m, np.zeros(2 * m), (M + 0.5) * np.eye(2 * m))


def coherent_state(alphas: Sequence[complex]) -> GaussianState:
    """Displaced vacuum with amplitudes alpha_k, mean sqrt(2) (Re alpha, Im alpha)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    m = _check_modes(alphas.size)
    mean = np.sqrt(2.0) * np.concatenate([alphas.real, alphas.imag])
    return GaussianState(m, mean, 0.5 * np.eye(2 * m))


def _check_orthogonal(matrix: np.ndarray, what: str) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputValidationError(f"{what} must be square, got {matrix.shape}")
    deviation = float(np.max(np.abs(matrix.T @ matrix - np.eye(matrix.shape[0]))))
    if deviation > ORTHOGONALITY_ATOL:
        raise InputValidationError(f"{what} is not orthogonal: |V^T V - I|_max = {deviation:.3e}")


def passive_rotation(V: ArrayLike) -> SymplecticTransform:
    """Photon-number preserving transform V (+) V on the x- and p-blocks."""
    V = np.asarray(V, dtype=float)
    _check_orthogonal(V, "Rotation matrix")
    n = V.shape[0]
    zero = np.zeros((n, n))
    return SymplecticTransform(n, np.block([[V, zero], [zero, V]]))


def beam_splitter(eta: float) -> SymplecticTransform:
    """Two-mode beam splitter: x_a -> sqrt(eta) x_a - sqrt(1-eta) x_b, x_b -> sqrt(eta) x_b + sqrt(1-eta) x_a."""
    if not np.isfinite(eta) or eta < 0 or eta > 1:
        raise InputValidationError(f"Transmissivity must lie in [0, 1], got {eta!r}")
    t, r = np.sqrt(eta), np.sqrt(1.0 - eta)
    return passive_rotation(np.array([[t, -r], [r, t]]))


def squeezer_bank(ds: ArrayLike) -> SymplecticTransform:
    """Independent single-mode squeezers: x_j -> e^{2 d_j} x_j, p_j -> e^{-2 d_j} p_j."""
    ds = np.atleast_1d(np.asarray(ds, dtype=float))
    if not np.all(np.isfinite(ds)):
        raise InputValidationError(f"Squeezing parameters must be finite, got {ds!r}")
    m = _check_modes(ds.size)
    return SymplecticTransform(m, np.diag(np.concatenate([np.exp(2 * ds), np.exp(-2 * ds)])))


def single_mode_squeezer(d: float) -> SymplecticTransform:
    """Squeezer on one mode, x -> e^{2d} x."""
    return squeezer_bank([d])


def apply(transform: SymplecticTransform, state: GaussianState) -> GaussianState:
    """Push the state's moments through S: mean S r, covariance S V S^T."""
    if transform.num_modes != state.num_modes:
        raise InputValidationError(
            f"Transform acts on {transform.num_modes} modes but state has {state.num_modes}"
        )
    S = transform.matrix
    covariance = S @ state.covariance @ S.T
    return GaussianState(state.num_modes, S @ state.mean, 0.5 * (covariance + covariance.T))


def tensor(s1: GaussianState, s2: GaussianState) -> GaussianState:
    """Product state s1 (x) s2 in global x-then-p ordering."""
    m1, m2 = s1.num_modes, s2.num_modes
    first, second = _direct_sum_indices(m1, m2)
    mean = np.zeros(2 * (m1 + m2))
    mean[first] = s1.mean
    mean[second] = s2.mean
    covariance = _direct_sum_matrix(s1.covariance, m1, s2.covariance, m2)
    return GaussianState(m1 + m2, mean, covariance)


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Reduced state on the modes listed in `keep`, in that order."""
    keep = [int(k) for k in keep]
    m = state.num_modes
    if not keep:
        raise InputValidationError("partial_trace needs at least one mode to keep")
    if len(set(keep)) != len(keep):
        raise InputValidationError(f"Duplicate mode indices in {keep}")
    bad = [k for k in keep if k < 0 or k >= m]
    if bad:
        raise InputValidationError(f"Mode indices {bad} out of range for {m} modes")
    idx = np.array(keep + [m + k for k in keep])
    return GaussianState(len(keep), state.mean[idx], state.covariance[np.ix_(idx, idx)])


def mean_photon_number(state: GaussianState) -> float:
    """Total <a^dag a> summed over modes."""
    total = 0.5 * np.trace(state.covariance) + 0.5 * float(state.mean @ state.mean) - 0.5 * state.num_modes
    return max(float(total), 0.0)


def von_neumann_entropy(state: GaussianState) -> float:
    """Entropy in nats: sum of g(nu_j - 1/2) over the symplectic spectrum."""
    nus = symplectic_eigenvalues(state.covariance)
    if np.min(nus) < 0.5 - UNCERTAINTY_ATOL:
        raise InputValidationError(f"Unphysical symplectic eigenvalue {np.min(nus):.6g} < 1/2")
    return float(np.sum(g(np.clip(nus - 0.5, 0.0, None))))


def purity(state: GaussianState) -> float:
    """Tr rho^2 from the symplectic spectrum."""
    nus = symplectic_eigenvalues(state.covariance)
    return float(np.prod(1.0 / (2.0 * nus)))
