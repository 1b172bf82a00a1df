import numpy as np
import pytest

from core.capacity import g
from core.channel import (
    apply_memory,
    apply_memory_decomposed,
    apply_memoryless,
    commutation_check,
    decomposition_deviation,
    environment_state,
    global_beam_splitter,
    multimode_squeezer,
    optimal_min_entropy_input,
    output_photon_ceiling,
    state_at_channel_entry,
)
from core.errors import InputValidationError
from core.gaussian import (
    apply,
    beam_splitter,
    coherent_state,
    mean_photon_number,
    partial_trace,
    single_mode_squeezer,
    thermal_state,
    vacuum_state,
    von_neumann_entropy,
)
from core.sampling import random_channel, random_constrained_input
from core.spectral import SqueezingMatrix, analyze, n_bar, nearest_neighbor_matrix
from core.state import ChannelParams


def test_global_beam_splitter_identity_when_lossless():
    params = ChannelParams.memoryless(3, 1.0)
    np.testing.assert_array_equal(global_beam_splitter(params).matrix, np.eye(12))


def test_global_beam_splitter_single_use_matches_pair():
    params = ChannelParams.memoryless(1, 0.4)
    np.testing.assert_allclose(global_beam_splitter(params).matrix, beam_splitter(0.4).matrix)


def test_global_beam_splitter_keeps_pairs_separate():
    S = global_beam_splitter(ChannelParams.memoryless(2, 0.5)).matrix
    # modes: a1=0, a2=1, b1=2, b2=3; a1 never touches b2
    for row in (0, 4):
        for col in (3, 7):
            assert S[row, col] == 0.0


def test_multimode_squeezer_special_cases():
    assert np.array_equal(multimode_squeezer(SqueezingMatrix.zeros(3)).matrix, np.eye(6))
    single = multimode_squeezer(SqueezingMatrix(1, np.array([[0.15]])))
    np.testing.assert_allclose(single.matrix, single_mode_squeezer(0.15).matrix, atol=1e-14)


def test_multimode_squeezer_vacuum_photons():
    state = apply(multimode_squeezer(nearest_neighbor_matrix(2, 0.1)), vacuum_state(2))
    assert mean_photon_number(state) == pytest.approx(0.081072, abs=1e-6)


def test_memoryless_limits(rng):
    state = random_constrained_input(rng, 2, 1.0)
    lossless = apply_memoryless(ChannelParams.memoryless(2, 1.0, 0.7), state)
    np.testing.assert_allclose(lossless.covariance, state.covariance, atol=1e-12)
    np.testing.assert_allclose(lossless.mean, state.mean, atol=1e-12)
    replaced = apply_memoryless(ChannelParams.memoryless(2, 0.0, 0.7), state)
    np.testing.assert_allclose(replaced.covariance, thermal_state(2, 0.7).covariance, atol=1e-12)
    np.testing.assert_allclose(replaced.mean, 0.0, atol=1e-12)


def test_memoryless_vacuum_photons():
    out = apply_memoryless(ChannelParams.memoryless(1, 0.7, 1.0), vacuum_state(1))
    assert mean_photon_number(out) == pytest.approx(0.3, abs=1e-12)


def test_memory_reduces_to_memoryless_exactly(rng):
    params = ChannelParams.memoryless(3, 0.35, 1.2)
    state = random_constrained_input(rng, 3, 2.0)
    direct = apply_memory(params, state)
    plain = apply_memoryless(params, state)
    assert np.array_equal(direct.covariance, plain.covariance)
    assert np.array_equal(direct.mean, plain.mean)


def test_memory_full_replacement_returns_environment(pair_params):
    params = ChannelParams(n=2, eta=0.0, M=pair_params.M, Z=pair_params.Z)
    out = apply_memory(params, coherent_state([0.5, -0.2j]))
    np.testing.assert_allclose(out.covariance, environment_state(params).covariance, atol=1e-12)


def test_memory_vacuum_photons_two_ways(pair_params):
    params = ChannelParams(n=2, eta=0.7, M=0.0, Z=pair_params.Z)
    spec = params.spectral()
    out = apply_memory(params, vacuum_state(2))
    assert mean_photon_number(out) == pytest.approx((1 - 0.7) * 2 * spec.s1, abs=1e-12)


def test_memory_output_photons_general_environment(pair_params):
    spec = pair_params.spectral()
    state = coherent_state([0.4, 0.1 + 0.3j])
    out = apply_memory(pair_params, state)
    expected = 0.7 * mean_photon_number(state) + 0.3 * 2 * (spec.s0 * 0.5 + spec.s1)
    assert mean_photon_number(out) == pytest.approx(expected, abs=1e-12)


def test_decomposed_special_cases(rng):
    state = random_constrained_input(rng, 2, 1.5)
    plain = ChannelParams.memoryless(2, 0.4, 0.3)
    np.testing.assert_allclose(
        apply_memory_decomposed(plain, state).covariance, apply_memoryless(plain, state).covariance, atol=1e-14
    )
    lossless = ChannelParams(n=2, eta=1.0, M=0.3, Z=nearest_neighbor_matrix(2, 0.2))
    np.testing.assert_allclose(apply_memory_decomposed(lossless, state).covariance, state.covariance, atol=1e-10)


def test_decomposition_theorem_random_instances():
    rng = np.random.default_rng(2024)
    for index in range(200):
        n = (1, 2, 4, 8)[index % 4]
        params = random_channel(rng, n)
        state = random_constrained_input(rng, n, float(rng.uniform(0, 2)))
        mean_dev, cov_dev = decomposition_deviation(params, state)
        assert mean_dev < 1e-10
        assert cov_dev < 1e-9
        assert commutation_check(params) < 1e-10


def test_commutation_trivial_cases(pair_params):
    assert commutation_check(ChannelParams.memoryless(3, 0.3)) == 0.0
    for eta in (0.0, 1.0):
        params = ChannelParams(n=2, eta=eta, M=0.0, Z=pair_params.Z)
        assert commutation_check(params) < 1e-15


def test_output_photon_ceiling_reference(pair_params):
    assert output_photon_ceiling(pair_params, 1.0) == pytest.approx(0.874321, abs=1e-6)
    plain = ChannelParams.memoryless(2, 0.7, 0.5)
    assert output_photon_ceiling(plain, 1.0) == pytest.approx(0.85, abs=1e-12)
    lossless = ChannelParams(n=2, eta=1.0, M=0.5, Z=pair_params.Z)
    assert output_photon_ceiling(lossless, 1.3) == pytest.approx(1.3, abs=1e-12)


def test_output_photon_ceiling_rejects_negative(pair_params):
    with pytest.raises(InputValidationError):
        output_photon_ceiling(pair_params, -0.1)


def test_photon_ceilings_hold_for_constrained_inputs():
    rng = np.random.default_rng(99)
    for _ in range(200):
        n = int(rng.choice([1, 2, 4, 8]))
        params = random_channel(rng, n)
        N = float(rng.uniform(0, 3))
        state = random_constrained_input(rng, n, N)
        assert mean_photon_number(state) <= n * N + 1e-9
        out = apply_memory(params, state)
        assert mean_photon_number(out) <= n * output_photon_ceiling(params, N) + 1e-9
        entry = state_at_channel_entry(params, state)
        assert mean_photon_number(entry) <= n * n_bar(N, params.spectral()) + 1e-9


def test_thermal_encoding_photon_identity():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        params = random_channel(rng, n)
        spec = analyze(params.Z)
        n_prime = float(rng.uniform(0, 3))
        encoded = apply(multimode_squeezer(params.Z), thermal_state(n, n_prime))
        expected = float(np.sum(np.cosh(4 * spec.eigenvalues))) * n_prime + n * spec.s1
        assert mean_photon_number(encoded) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_optimal_input_reaches_minimum_entropy(pair_params):
    out = apply_memory(pair_params, optimal_min_entropy_input(pair_params))
    assert von_neumann_entropy(out) == pytest.approx(2 * g(0.3 * 0.5), abs=1e-9)


def test_environment_reduced_mode_photons(pair_params):
    env = environment_state(pair_params)
    single = partial_trace(env, [0])
    spec = pair_params.spectral()
    assert mean_photon_number(env) == pytest.approx(2 * (spec.s0 * 0.5 + spec.s1), abs=1e-12)
    assert mean_photon_number(single) == pytest.approx(spec.s0 * 0.5 + spec.s1, abs=1e-12)


def test_mode_mismatch_rejected(pair_params):
    with pytest.raises(InputValidationError):
        apply_memory(pair_params, vacuum_state(3))
    with pytest.raises(InputValidationError):
        apply_memory_decomposed(pair_params, vacuum_state(1))
    with pytest.raises(InputValidationError):
        apply_memoryless(pair_params, vacuum_state(1))


def test_spectral_data_computed_once(pair_params):
    first = pair_params.spectral()
    assert pair_params.spectral() is first
    assert first.s1 == pytest.approx(0.040536, abs=1e-6)
