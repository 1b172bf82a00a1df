"""
Squeezing-matrix ingestion and spectral analysis.

The memory of the channel is fixed by a real symmetric n x n matrix Z of
squeezing parameters. Diagonalizing Z = V diag(d) V^T splits the multi-mode
squeezer into independent single-mode squeezers on the modes c_j = sum_k V_kj a_k,
and every photon-number bound is a function of the eigenvalues d_j.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputValidationError, SpectralError, UnsupportedSqueezingError

SYMMETRY_RTOL = 1e-12
INGEST_SYMMETRY_ATOL = 1e-9
TIE_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class SqueezingMatrix:
    """Real symmetric matrix of squeezing parameters xi_{kk'}."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.entries)
        if np.iscomplexobj(raw):
            if np.any(np.imag(raw) != 0):
                raise UnsupportedSqueezingError("complex entries")
            raw = np.real(raw)
        entries = np.asarray(raw, dtype=float)
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InputValidationError(f"Squeezing matrix size must be a positive integer, got {self.n!r}")
        n = int(self.n)
        if entries.shape != (n, n):
            raise InputValidationError(f"Squeezing matrix must be {n}x{n}, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            row, col = np.argwhere(~np.isfinite(entries))[0]
            raise InputValidationError("Squeezing matrix has non-finite entries", f"row {row + 1}, column {col + 1}")
        scale = max(1.0, float(np.max(np.abs(entries))))
        asym = np.abs(entries - entries.T)
        if np.max(asym) > SYMMETRY_RTOL * scale:
            row, col = np.unravel_index(np.argmax(asym), asym.shape)
            raise UnsupportedSqueezingError(
                f"entries ({row + 1},{col + 1})/({col + 1},{row + 1}) differ by {asym[row, col]:.3e}"
            )
        entries = 0.5 * (entries + entries.T)
        entries.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, n: int) -> "SqueezingMatrix":
        """Memoryless channel: no squeezing."""
        return cls(n, np.zeros((n, n)))

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigendecomposition of Z and the scalars entering the capacity bounds."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    d_bar: float
    s0: float
    s1: float
    s2: float

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def reconstruct(self) -> np.ndarray:
        return self.eigenvectors @ np.diag(self.eigenvalues) @ self.eigenvectors.T


def load_squeezing_matrix(source: str) -> SqueezingMatrix:
    """Parse n lines of n whitespace-separated reals; '#' lines are comments."""
    rows = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        row_index = len(rows) + 1
        row = []
        for col, token in enumerate(line.split(), start=1):
            where = f"row {row_index}, column {col} (line {lineno})"
            try:
                value = float(token)
            except ValueError:
                try:
                    complex(token)
                except ValueError:
                    raise InputValidationError(f"Cannot parse {token!r} as a real number", where) from None
                raise UnsupportedSqueezingError(f"complex entry {token!r}", where) from None
            if not np.isfinite(value):
                raise InputValidationError(f"Non-finite entry {token!r}", where)
            row.append(value)
        rows.append(row)

    if not rows:
        raise InputValidationError("Squeezing matrix payload is empty")
    n = len(rows)
    for index, row in enumerate(rows, start=1):
        if len(row) != n:
            raise InputValidationError(
                f"Matrix is not square: expected {n} entries, found {len(row)}", f"row {index}"
            )

    entries = np.array(rows, dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(entries[i, j] - entries[j, i]) > INGEST_SYMMETRY_ATOL:
                raise UnsupportedSqueezingError(
                    f"entries ({i + 1},{j + 1})/({j + 1},{i + 1}) differ: "
                    f"{entries[i, j]!r} vs {entries[j, i]!r}"
                )
    return SqueezingMatrix(n, 0.5 * (entries + entries.T))


def nearest_neighbor_matrix(n: int, xi: float) -> SqueezingMatrix:
    """Tridiagonal Z coupling each use only to the previous one."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InputValidationError(f"Number of channel uses must be a positive integer, got {n!r}")
    if not np.isfinite(xi):
        raise InputValidationError(f"Nearest-neighbour squeezing must be finite, got {xi!r}")
    n = int(n)
    off = np.full(n - 1, float(xi))
    return SqueezingMatrix(n, np.diag(off, 1) + np.diag(off, -1))


def analyze(Z: SqueezingMatrix) -> SpectralData:
    """Diagonalize Z and derive d_bar, s0, s1, s2."""
    try:
        d, V = scipy.linalg.eigh(Z.entries)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectralError(f"Eigendecomposition of {Z.n}x{Z.n} squeezing matrix failed: {exc}") from exc
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(V))):
        raise SpectralError("Eigendecomposition returned non-finite values")

    # descending |d|, ties by descending signed value
    order = np.lexsort((-d, -np.round(np.abs(d), TIE_DECIMALS)))
    d = d[order]
    V = V[:, order]
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    V = V * signs

    d.setflags(write=False)
    V.setflags(write=False)
    return SpectralData(
        eigenvalues=d,
        eigenvectors=V,
        d_bar=float(d[0]),
        s0=float(np.mean(np.cosh(4 * d))),
        s1=float(np.mean(np.sinh(2 * d) ** 2)),
        s2=float(np.mean(np.sinh(4 * np.abs(d))) / 2),
    )


def n_bar(N: float, spec: SpectralData) -> float:
    """Largest per-use photon number entering the memoryless map for inputs with N photons per use."""
    if not np.isfinite(N) or N < 0:
        raise InputValidationError(f"Photon budget must be finite and >= 0, got {N!r}")
    d_bar = spec.d_bar
    return float(N * (np.cosh(4 * d_bar) + np.sinh(4 * abs(d_bar))) + spec.s1 + spec.s2)
