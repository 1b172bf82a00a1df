"""
Numerical checks of the memory channel against its decomposition, photon
ceilings and, for one or two uses, the truncated Fock-space oracle.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from . import fock
from .capacity import max_entry_photons
from .channel import (
    apply_memory,
    apply_memory_decomposed,
    commutation_check,
    multimode_squeezer,
    output_photon_ceiling,
    state_at_channel_entry,
)
from .errors import InputValidationError, TruncationError, VerificationFailure
from .gaussian import apply, coherent_state, mean_photon_number, thermal_state, von_neumann_entropy
from .logger import get_logger
from .sampling import random_constrained_input
from .spectral import n_bar
from .state import ChannelParams

MAX_SYMPLECTIC_MODES = 8

THRESHOLDS = {
    "decomposition_mean": 1e-10,
    "decomposition_covariance": 1e-9,
    "commutation": 1e-10,
    "energy_ceiling": 1e-9,
    "n_bar_ceiling": 1e-9,
    "thermal_identity": 1e-9,
    "oracle_mean": 1e-6,
    "oracle_covariance": 1e-5,
    "oracle_photons": 1e-5,
    "oracle_entropy": 1e-4,
}

ORACLE_MAX_SQUEEZING = 0.2
ORACLE_MAX_ENV_PHOTONS = {1: 1.0, 2: 0.5}
ORACLE_AMPLITUDE = 0.3


@dataclass
class CheckResult:
    name: str
    deviation: float
    threshold: float
    skipped: bool = False
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.skipped or self.deviation <= self.threshold


@dataclass
class VerificationSummary:
    n: int
    eta: float
    M: float
    N: float
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def raise_for_failures(self) -> None:
        """Raise VerificationFailure naming every failed check."""
        if not self.passed:
            raise VerificationFailure(self.failed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n, "eta": self.eta, "M": self.M, "N": self.N, "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "deviation": c.deviation, "threshold": c.threshold,
                 "passed": c.passed, "skipped": c.skipped, "detail": c.detail}
                for c in self.checks
            ],
        }


class VerificationSuite:
    """Runs every check for one channel and input budget."""

    def __init__(self, params: ChannelParams, N: float, seed: int = 0, instances: int = 20,
                 inject_perturbation: float = 0.0, oracle: bool = True):
        if params.n > MAX_SYMPLECTIC_MODES:
            raise InputValidationError(
                f"verify supports at most {MAX_SYMPLECTIC_MODES} channel uses, got n={params.n}"
            )
        if not np.isfinite(N) or N < 0:
            raise InputValidationError(f"Photon budget must be finite and >= 0, got {N!r}")
        self.params = params
        self.N = float(N)
        self.seed = seed
        self.instances = instances
        self.inject_perturbation = inject_perturbation
        self.oracle = oracle
        self.logger = get_logger()

    def _inputs(self):
        rng = np.random.default_rng(self.seed)
        return [random_constrained_input(rng, self.params.n, self.N) for _ in range(self.instances)]

    def _record(self, name: str, deviation: float, detail: str = "") -> CheckResult:
        threshold = THRESHOLDS[name]
        result = CheckResult(name, float(deviation), threshold, detail=detail)
        self.logger.log_check(name, result.deviation, threshold, result.passed)
        return result

    def _skip(self, name: str, reason: str) -> CheckResult:
        self.logger.log_event("check_skipped", {"name": name, "reason": reason}, "verification")
        return CheckResult(name, 0.0, THRESHOLDS[name], skipped=True, detail=reason)

    def check_decomposition(self, inputs) -> List[CheckResult]:
        """Direct versus decomposed channel output on each random input."""
        mean_dev, cov_dev = 0.0, 0.0
        for state in inputs:
            direct = apply_memory(self.params, state)
            decomposed = apply_memory_decomposed(self.params, state)
            covariance = decomposed.covariance + self.inject_perturbation
            scale = max(1.0, float(np.max(np.abs(direct.covariance))))
            mean_dev = max(mean_dev, float(np.max(np.abs(direct.mean - decomposed.mean))))
            cov_dev = max(cov_dev, float(np.max(np.abs(direct.covariance - covariance))) / scale)
        return [
            self._record("decomposition_mean", mean_dev),
            self._record("decomposition_covariance", cov_dev),
        ]

    def check_commutation(self) -> CheckResult:
        """The global beam splitter commutes with the multimode squeezer on both arms."""
        return self._record("commutation", commutation_check(self.params))

    def check_energy_ceiling(self, inputs) -> CheckResult:
        """Output photons never exceed the closed-form ceiling."""
        ceiling = self.params.n * output_photon_ceiling(self.params, self.N)
        excess = max(mean_photon_number(apply_memory(self.params, r)) - ceiling for r in inputs)
        return self._record("energy_ceiling", max(0.0, excess), f"ceiling {ceiling:.12g}")

    def check_n_bar_ceiling(self, inputs) -> CheckResult:
        """Photons at the channel entry stay below N-bar."""
        ceiling = self.params.n * n_bar(self.N, self.params.spectral())
        excess = max(mean_photon_number(state_at_channel_entry(self.params, r)) - ceiling for r in inputs)
        return self._record("n_bar_ceiling", max(0.0, excess), f"ceiling {ceiling:.12g}")

    def check_thermal_identity(self) -> CheckResult:
        """Encoded thermal input carries exactly the expected photon number."""
        spec = self.params.spectral()
        n_prime = max_entry_photons(self.N, spec)
        if n_prime <= 0:
            n_prime = self.N
        encoded = apply(multimode_squeezer(self.params.Z, spec), thermal_state(self.params.n, n_prime))
        expected = float(np.sum(np.cosh(4 * spec.eigenvalues)) * n_prime + self.params.n * spec.s1)
        deviation = abs(mean_photon_number(encoded) - expected) / max(1.0, expected)
        return self._record("thermal_identity", deviation, f"N' {n_prime:.12g}")

    def _oracle_skip_reason(self) -> Optional[str]:
        params = self.params
        if params.n > fock.MAX_MODES:
            return f"n={params.n} exceeds the Fock oracle limit"
        if params.Z.max_abs() > ORACLE_MAX_SQUEEZING:
            return f"|Z|_max={params.Z.max_abs():.3g} exceeds {ORACLE_MAX_SQUEEZING}"
        if params.M > ORACLE_MAX_ENV_PHOTONS[params.n]:
            return f"M={params.M:.3g} exceeds {ORACLE_MAX_ENV_PHOTONS[params.n]} for n={params.n}"
        return None

    def check_oracle(self) -> List[CheckResult]:
        """Fock simulation against the covariance simulation for a coherent input."""
        names = ["oracle_mean", "oracle_covariance", "oracle_photons", "oracle_entropy"]
        reason = self._oracle_skip_reason() if self.oracle else "oracle disabled"
        if reason:
            return [self._skip(name, reason) for name in names]

        n = self.params.n
        alphas = [ORACLE_AMPLITUDE] * n
        try:
            output = fock.simulate_channel(self.params, fock.coherent_density(alphas))
        except TruncationError as exc:
            return [self._record(name, exc.deficit, "truncation failure") for name in names]
        gaussian = apply_memory(self.params, coherent_state(alphas))
        mean, covariance = fock.moments(output)
        return [
            self._record("oracle_mean", np.max(np.abs(mean - gaussian.mean))),
            self._record("oracle_covariance", np.max(np.abs(covariance - gaussian.covariance))),
            self._record("oracle_photons", abs(fock.photon_number(output) - mean_photon_number(gaussian))),
            self._record("oracle_entropy", abs(fock.entropy(output) - von_neumann_entropy(gaussian))),
        ]

    def run(self) -> VerificationSummary:
        """Run every check and log each outcome."""
        start = time.perf_counter()
        self.logger.log_event("verification_started", {
            "n": self.params.n, "eta": self.params.eta, "M": self.params.M,
            "N": self.N, "seed": self.seed, "inject_perturbation": self.inject_perturbation,
        }, "verification")

        inputs = self._inputs()
        summary = VerificationSummary(self.params.n, self.params.eta, self.params.M, self.N, self.seed)
        summary.checks.extend(self.check_decomposition(inputs))
        summary.checks.append(self.check_commutation())
        summary.checks.append(self.check_energy_ceiling(inputs))
        summary.checks.append(self.check_n_bar_ceiling(inputs))
        summary.checks.append(self.check_thermal_identity())
        summary.checks.extend(self.check_oracle())

        self.logger.log_event("verification_finished", {"passed": summary.passed, "failed": summary.failed},
                              "verification")
        self.logger.log_performance("verification_seconds", time.perf_counter() - start, "verification")
        return summary
