"""
Value models shared across the channel, bounds and command-line layers.
"""

from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from .spectral import SpectralData, SqueezingMatrix, analyze, nearest_neighbor_matrix

CAPACITY_STATUS = "conjectured"

REPORT_COLUMNS: List[str] = [
    "n", "eta", "M", "N",
    "d_bar", "s0", "s1", "s2", "n_bar", "n_prime",
    "feasible_lower", "baseline", "lower", "upper_input", "upper_output",
    "gap", "tighter_upper", "capacity_status",
]

SWEEPABLE = ("eta", "N", "M", "xi")


class ChannelParams(BaseModel):
    """Lossy channel with a (possibly) squeezed thermal environment over n uses."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(ge=1, description="Number of channel uses (input modes)")
    eta: float = Field(ge=0.0, le=1.0, allow_inf_nan=False, description="Beam-splitter transmissivity")
    M: float = Field(default=0.0, ge=0.0, allow_inf_nan=False, description="Environment mean photons per mode")
    Z: Optional[SqueezingMatrix] = Field(default=None, description="Squeezing matrix; all-zero for memoryless")

    _spectral: Optional[SpectralData] = PrivateAttr(default=None)

    @model_validator(mode="before")
    @classmethod
    def _default_squeezing(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("Z") is None and isinstance(data.get("n"), (int, np.integer)):
            data = dict(data)
            if data["n"] >= 1:
                data["Z"] = SqueezingMatrix.zeros(int(data["n"]))
        return data

    @model_validator(mode="after")
    def _squeezing_matches_uses(self) -> "ChannelParams":
        if self.Z is None or self.Z.n != self.n:
            size = None if self.Z is None else self.Z.n
            raise ValueError(f"Squeezing matrix size {size} does not match n={self.n}")
        return self

    @classmethod
    def memoryless(cls, n: int, eta: float, M: float = 0.0) -> "ChannelParams":
        """Channel with Z = 0."""
        return cls(n=n, eta=eta, M=M, Z=SqueezingMatrix.zeros(n))

    @classmethod
    def nearest_neighbor(cls, n: int, eta: float, M: float, xi: float) -> "ChannelParams":
        """Channel whose environment couples consecutive uses with squeezing xi."""
        return cls(n=n, eta=eta, M=M, Z=nearest_neighbor_matrix(n, xi))

    def spectral(self) -> SpectralData:
        """Eigendecomposition of Z, computed once per parameter set."""
        if self._spectral is None:
            self._spectral = analyze(self.Z)
        return self._spectral


class BoundsReport(BaseModel):
    """Per-use capacity sandwich for one parameter point."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(description="Number of channel uses")
    eta: float = Field(description="Transmissivity")
    M: float = Field(description="Environment mean photons per mode")
    N: float = Field(description="Input photon budget per use")
    d_bar: float = Field(description="Eigenvalue of Z with the largest magnitude")
    s0: float = Field(description="Mean of cosh(4 d_j)")
    s1: float = Field(description="Mean of sinh^2(2 d_j)")
    s2: float = Field(description="Mean of sinh(4|d_j|)/2")
    n_bar: float = Field(description="Per-use photon ceiling at the memoryless channel entry")
    n_prime: float = Field(description="Thermal encoding photons (N - s1)/s0 at the channel entry")
    feasible_lower: bool = Field(description="Whether the thermal encoding fits the budget (n_prime > 0)")
    baseline: float = Field(description="Memoryless Gaussian rate per use")
    lower: float = Field(description="Achievable rate per use")
    upper_input: float = Field(description="Upper bound per use from the input photon ceiling")
    upper_output: float = Field(description="Upper bound per use from the output entropy ceiling")
    capacity_status: str = Field(default=CAPACITY_STATUS, description="Capacity identities used are conjectured")

    @property
    def upper(self) -> float:
        return min(self.upper_input, self.upper_output)

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def tighter_upper(self) -> str:
        if self.upper_input < self.upper_output:
            return "input"
        if self.upper_output < self.upper_input:
            return "output"
        return "equal"

    def to_record(self) -> Dict[str, Any]:
        """Flat record in output column order."""
        values = self.model_dump()
        values["gap"] = self.gap
        values["tighter_upper"] = self.tighter_upper
        return {column: values[column] for column in REPORT_COLUMNS}


class RunConfig(BaseModel):
    """Merged command-line / config-file settings for one invocation."""

    modes: Optional[int] = Field(default=None, ge=1, description="Number of channel uses n; taken from xi_file when omitted")
    eta: Optional[float] = Field(default=None, ge=0.0, le=1.0, allow_inf_nan=False, description="Transmissivity")
    photons: Optional[float] = Field(default=None, ge=0.0, allow_inf_nan=False, description="Input photons per use N")
    env_photons: float = Field(default=0.0, ge=0.0, allow_inf_nan=False, description="Environment photons M")
    xi: Optional[float] = Field(default=None, allow_inf_nan=False, description="Nearest-neighbour squeezing")
    xi_file: Optional[str] = Field(default=None, description="Path to a full squeezing matrix")
    sweep: Optional[str] = Field(default=None, description="param:start:stop:steps")
    format: Literal["csv", "jsonl"] = Field(default="csv", description="Table format")
    out: Optional[str] = Field(default=None, description="Output path; stdout when omitted")
    seed: int = Field(default=0, description="Seed for randomized verification")
    inject_perturbation: float = Field(default=0.0, allow_inf_nan=False, description="Offset added to the decomposed channel output")

    @model_validator(mode="after")
    def _single_squeezing_source(self) -> "RunConfig":
        if self.xi is not None and self.xi_file is not None:
            raise ValueError("xi and xi_file are mutually exclusive")
        return self


class SweepSpec(BaseModel):
    """One-parameter sweep with every other parameter held fixed."""

    parameter: Literal["eta", "N", "M", "xi"] = Field(description="Swept parameter")
    start: float = Field(allow_inf_nan=False)
    stop: float = Field(allow_inf_nan=False)
    steps: int = Field(ge=1, description="Number of intervals; steps + 1 points")
    n: int = Field(default=1, ge=1, description="Number of channel uses")
    fixed: Dict[str, float] = Field(default_factory=dict, description="Values of the non-swept parameters")
    xi_file: Optional[str] = Field(default=None, description="Full squeezing matrix source")

    @model_validator(mode="after")
    def _check_consistency(self) -> "SweepSpec":
        if self.start > self.stop:
            raise ValueError(f"start {self.start} must not exceed stop {self.stop}")
        unknown = set(self.fixed) - set(SWEEPABLE)
        if unknown:
            raise ValueError(f"Unknown fixed parameters {sorted(unknown)}")
        if self.parameter in self.fixed:
            raise ValueError(f"Parameter {self.parameter!r} is both swept and fixed")
        if self.xi_file is not None and (self.parameter == "xi" or "xi" in self.fixed):
            raise ValueError("xi cannot be combined with xi_file")
        for required in ("eta", "N"):
            if required != self.parameter and required not in self.fixed:
                raise ValueError(f"Sweep needs a fixed value for {required!r}")
        return self

    @property
    def z_source(self) -> str:
        if self.parameter == "xi" or "xi" in self.fixed:
            return "nearest_neighbor"
        if self.xi_file is not None:
            return "file"
        return "zero"

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps + 1)

    def point(self, value: float) -> Dict[str, float]:
        """Full parameter set at one swept value."""
        point = {"M": 0.0, **self.fixed}
        point[self.parameter] = float(value)
        return point
