import pytest

from core.errors import InputValidationError, VerificationFailure
from core.sampling import random_squeezing_matrix
from core.spectral import nearest_neighbor_matrix
from core.state import ChannelParams
from core.verification import VerificationSuite


def _by_name(summary):
    return {check.name: check for check in summary.checks}


def test_memoryless_channel_passes_with_tiny_deviations():
    summary = VerificationSuite(ChannelParams.memoryless(3, 0.6, 0.4), 1.0, oracle=False).run()
    assert summary.passed
    checks = _by_name(summary)
    assert checks["decomposition_covariance"].deviation == 0.0
    assert checks["commutation"].deviation == 0.0
    assert checks["oracle_mean"].skipped


def test_random_memory_channel_passes(rng):
    params = ChannelParams(n=4, eta=0.45, M=1.1, Z=random_squeezing_matrix(rng, 4))
    summary = VerificationSuite(params, 1.5, seed=11).run()
    assert summary.passed, summary.failed


def test_oracle_runs_for_two_uses():
    params = ChannelParams(n=2, eta=0.7, M=0.5, Z=nearest_neighbor_matrix(2, 0.1))
    summary = VerificationSuite(params, 1.0, instances=5).run()
    checks = _by_name(summary)
    assert not checks["oracle_covariance"].skipped
    assert summary.passed, summary.failed


def test_oracle_skipped_outside_feasible_range():
    params = ChannelParams(n=1, eta=0.7, M=0.5, Z=nearest_neighbor_matrix(1, 0.0))
    strong = ChannelParams(n=2, eta=0.7, M=0.5, Z=nearest_neighbor_matrix(2, 0.3))
    checks = _by_name(VerificationSuite(strong, 1.0, instances=2).run())
    assert checks["oracle_entropy"].skipped
    assert "exceeds" in checks["oracle_entropy"].detail
    assert not _by_name(VerificationSuite(params, 1.0, instances=2).run())["oracle_mean"].skipped


def test_injected_perturbation_fails_decomposition():
    params = ChannelParams.nearest_neighbor(2, 0.7, 0.5, 0.1)
    summary = VerificationSuite(params, 1.0, instances=3, inject_perturbation=1e-6, oracle=False).run()
    assert not summary.passed
    assert summary.failed == ["decomposition_covariance"]
    with pytest.raises(VerificationFailure):
        summary.raise_for_failures()


def test_summary_dict_shape():
    summary = VerificationSuite(ChannelParams.memoryless(1, 0.5), 0.5, instances=2, oracle=False).run()
    payload = summary.to_dict()
    assert payload["passed"] is True
    assert {check["name"] for check in payload["checks"]} >= {"commutation", "energy_ceiling", "thermal_identity"}


def test_too_many_uses_rejected():
    with pytest.raises(InputValidationError):
        VerificationSuite(ChannelParams.memoryless(9, 0.5), 1.0)
