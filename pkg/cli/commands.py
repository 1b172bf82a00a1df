"""
Command implementations behind the report, sweep and verify subcommands.
"""

from typing import Any, Dict, List, Optional, Tuple

from core.capacity import bounds_report
from core.errors import InputValidationError
from core.logger import get_logger
from core.scheduler import SweepScheduler
from core.spectral import SqueezingMatrix
from core.state import RunConfig, SweepSpec, ChannelParams
from core.verification import VerificationSuite, VerificationSummary
from utils.data_utils import read_squeezing_file


def _require(config: RunConfig, *names: str) -> None:
    missing = [name for name in names if getattr(config, name) is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise InputValidationError(f"Missing required setting(s): {flags}")


def _file_matrix(config: RunConfig) -> Optional[SqueezingMatrix]:
    if config.xi_file is None:
        return None
    Z = read_squeezing_file(config.xi_file)
    if config.modes is not None and config.modes != Z.n:
        raise InputValidationError(
            f"--modes {config.modes} does not match the {Z.n}x{Z.n} matrix", config.xi_file
        )
    return Z


def _require_modes_for_xi(config: RunConfig) -> None:
    # n = 1 has no neighbouring pair, so xi would have no effect
    if config.modes is None:
        raise InputValidationError("Nearest-neighbour squeezing needs --modes", "--xi")


def resolve_params(config: RunConfig) -> Tuple[ChannelParams, float]:
    """Channel and input budget for a single-point command."""
    _require(config, "eta", "photons")
    Z = _file_matrix(config)
    if Z is not None:
        params = ChannelParams(n=Z.n, eta=config.eta, M=config.env_photons, Z=Z)
    elif config.xi is not None:
        _require_modes_for_xi(config)
        params = ChannelParams.nearest_neighbor(config.modes, config.eta, config.env_photons, config.xi)
    else:
        params = ChannelParams.memoryless(config.modes or 1, config.eta, config.env_photons)
    return params, config.photons


def run_report(config: RunConfig) -> Dict[str, Any]:
    """Bounds record for a single parameter point."""
    params, N = resolve_params(config)
    record = bounds_report(params, N).to_record()
    get_logger().log_event("report", {"n": params.n, "eta": params.eta, "M": params.M, "N": N}, "cli")
    return record


def parse_sweep(config: RunConfig) -> SweepSpec:
    """Build a SweepSpec from --sweep param:start:stop:steps and the fixed settings."""
    _require(config, "sweep")
    parts = config.sweep.split(":")
    if len(parts) != 4:
        raise InputValidationError(f"Sweep must look like param:start:stop:steps, got {config.sweep!r}")
    parameter, start, stop, steps = parts
    try:
        start_value, stop_value, step_count = float(start), float(stop), int(steps)
    except ValueError:
        raise InputValidationError(f"Cannot parse sweep range in {config.sweep!r}", "--sweep") from None

    fixed = {}
    for key, value in (("eta", config.eta), ("N", config.photons), ("xi", config.xi),
                       ("M", config.env_photons)):
        if value is not None and key != parameter:
            fixed[key] = value

    if parameter == "xi" or config.xi is not None:
        _require_modes_for_xi(config)
    modes = config.modes or 1
    if config.xi_file is not None:
        modes = _file_matrix(config).n
    return SweepSpec(
        parameter=parameter,
        start=start_value,
        stop=stop_value,
        steps=step_count,
        n=modes,
        fixed=fixed,
        xi_file=config.xi_file,
    )


def run_sweep(spec: SweepSpec, scheduler: Optional[SweepScheduler] = None) -> List[Dict[str, Any]]:
    """One record per evenly spaced swept value, in ascending order."""
    file_matrix = read_squeezing_file(spec.xi_file) if spec.z_source == "file" else None

    def evaluate(value: float) -> Dict[str, Any]:
        point = spec.point(value)
        if spec.z_source == "nearest_neighbor":
            params = ChannelParams.nearest_neighbor(spec.n, point["eta"], point["M"], point["xi"])
        elif file_matrix is not None:
            params = ChannelParams(n=spec.n, eta=point["eta"], M=point["M"], Z=file_matrix)
        else:
            params = ChannelParams.memoryless(spec.n, point["eta"], point["M"])
        return bounds_report(params, point["N"]).to_record()

    scheduler = scheduler or SweepScheduler()
    return scheduler.run(list(spec.values()), evaluate)


def verify(config: RunConfig) -> VerificationSummary:
    """Run the verification suite for the configured channel."""
    params, N = resolve_params(config)
    suite = VerificationSuite(params, N, seed=config.seed, inject_perturbation=config.inject_perturbation)
    return suite.run()
