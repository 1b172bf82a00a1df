"""
Gaussian rates and the capacity bounds of the memory channel.

All rates are in nats. Functions return totals over the n uses except
`bounds_report`, which stores per-use values.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputValidationError, InvariantViolation
from .gaussian import g
from .spectral import SpectralData, n_bar
from .state import BoundsReport, ChannelParams

ORDERING_RTOL = 1e-12

__all__ = [
    "g",
    "LowerBound",
    "gaussian_rate",
    "max_entry_photons",
    "encoded_photon_number",
    "min_output_entropy",
    "max_output_entropy",
    "upper_bound_input",
    "upper_bound_output",
    "lower_bound",
    "bounds_report",
]


@dataclass(frozen=True)
class LowerBound:
    rate: float
    feasible: bool
    n_prime: float


def _check_budget(N: float) -> float:
    if isinstance(N, bool) or not np.isfinite(N) or N < 0:
        raise InputValidationError(f"Photon budget must be finite and >= 0, got {N!r}")
    return float(N)


def gaussian_rate(n: int, eta: float, N: float, M: float) -> float:
    """Conjectured capacity of n uses of the memoryless lossy channel."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InputValidationError(f"Number of channel uses must be a positive integer, got {n!r}")
    if not np.isfinite(eta) or eta < 0 or eta > 1:
        raise InputValidationError(f"Transmissivity must lie in [0, 1], got {eta!r}")
    if not np.isfinite(M) or M < 0:
        raise InputValidationError(f"Environment photons must be finite and >= 0, got {M!r}")
    N = _check_budget(N)
    noise = (1.0 - eta) * M
    return float(int(n) * (g(eta * N + noise) - g(noise)))


def max_entry_photons(N: float, spec: SpectralData) -> float:
    """Thermal photons per use at the memoryless entry that keep the input within N: (N - s1)/s0."""
    return (_check_budget(N) - spec.s1) / spec.s0


def encoded_photon_number(spec: SpectralData, n_prime: float) -> float:
    """Per-use photons at the memory-channel input produced by thermal encoding with n_prime at the entry."""
    return spec.s0 * n_prime + spec.s1


def min_output_entropy(params: ChannelParams) -> float:
    """Minimal output entropy n g((1 - eta) M) over all n uses."""
    return float(params.n * g((1.0 - params.eta) * params.M))


def max_output_entropy(params: ChannelParams, N: float, spec: Optional[SpectralData] = None) -> float:
    """n g(N_out): entropy of the thermal state saturating the output photon ceiling."""
    spec = spec if spec is not None else params.spectral()
    N = _check_budget(N)
    eta = params.eta
    n_out = eta * N + (1.0 - eta) * (spec.s0 * params.M + spec.s1)
    return float(params.n * g(n_out))


def upper_bound_input(params: ChannelParams, N: float, spec: Optional[SpectralData] = None) -> float:
    """Upper bound from the photon ceiling at the channel entry, over all n uses."""
    spec = spec if spec is not None else params.spectral()
    return gaussian_rate(params.n, params.eta, n_bar(_check_budget(N), spec), params.M)


def upper_bound_output(params: ChannelParams, N: float, spec: Optional[SpectralData] = None) -> float:
    """Upper bound as maximal minus minimal output entropy, over all n uses."""
    spec = spec if spec is not None else params.spectral()
    return max_output_entropy(params, N, spec) - min_output_entropy(params)


def lower_bound(params: ChannelParams, N: float, spec: Optional[SpectralData] = None) -> LowerBound:
    """Rate of thermal encoding at the memoryless entry; zero when the budget cannot pay for s1."""
    spec = spec if spec is not None else params.spectral()
    n_prime = max_entry_photons(N, spec)
    if n_prime <= 0:
        return LowerBound(rate=0.0, feasible=False, n_prime=n_prime)
    return LowerBound(
        rate=gaussian_rate(params.n, params.eta, n_prime, params.M),
        feasible=True,
        n_prime=n_prime,
    )


def _check_ordering(report: BoundsReport) -> None:
    tol = ORDERING_RTOL * max(1.0, abs(report.baseline))
    violations = []
    if report.lower > report.baseline + tol:
        violations.append(f"lower {report.lower!r} > baseline {report.baseline!r}")
    for name in ("upper_input", "upper_output"):
        upper = getattr(report, name)
        if report.baseline > upper + tol:
            violations.append(f"baseline {report.baseline!r} > {name} {upper!r}")
        if report.lower > upper + tol:
            violations.append(f"lower {report.lower!r} > {name} {upper!r}")
    if violations:
        raise InvariantViolation("; ".join(violations))


def bounds_report(params: ChannelParams, N: float) -> BoundsReport:
    """Capacity sandwich at one parameter point, per channel use."""
    N = _check_budget(N)
    spec = params.spectral()
    n = params.n
    lower = lower_bound(params, N, spec)
    report = BoundsReport(
        n=n,
        eta=params.eta,
        M=params.M,
        N=N,
        d_bar=spec.d_bar,
        s0=spec.s0,
        s1=spec.s1,
        s2=spec.s2,
        n_bar=n_bar(N, spec),
        n_prime=lower.n_prime,
        feasible_lower=lower.feasible,
        baseline=gaussian_rate(n, params.eta, N, params.M) / n,
        lower=lower.rate / n,
        upper_input=upper_bound_input(params, N, spec) / n,
        upper_output=upper_bound_output(params, N, spec) / n,
    )
    _check_ordering(report)
    return report
