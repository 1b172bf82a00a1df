import numpy as np
import pytest

from core.errors import InputValidationError, UnsupportedSqueezingError
from core.sampling import random_squeezing_matrix
from core.spectral import SqueezingMatrix, analyze, load_squeezing_matrix, n_bar, nearest_neighbor_matrix


def test_pair_reference_scalars():
    spec = analyze(nearest_neighbor_matrix(2, 0.1))
    assert spec.d_bar == pytest.approx(0.1, abs=1e-12)
    assert spec.s0 == pytest.approx(1.081072, abs=1e-6)
    assert spec.s1 == pytest.approx(0.040536, abs=1e-6)
    assert spec.s2 == pytest.approx(0.205376, abs=1e-6)
    assert n_bar(1.0, spec) == pytest.approx(1.737737, abs=1e-6)


def test_zero_matrix_is_neutral():
    spec = analyze(SqueezingMatrix.zeros(4))
    assert spec.d_bar == 0.0
    assert spec.s0 == 1.0
    assert spec.s1 == 0.0
    assert spec.s2 == 0.0
    assert n_bar(2.5, spec) == 2.5


def test_eigenvalues_sorted_by_magnitude():
    Z = SqueezingMatrix(3, np.diag([0.1, -0.3, 0.2]))
    spec = analyze(Z)
    np.testing.assert_allclose(spec.eigenvalues, [-0.3, 0.2, 0.1])
    assert spec.d_bar == pytest.approx(-0.3)


def test_tie_prefers_positive_eigenvalue():
    spec = analyze(SqueezingMatrix(2, np.diag([-0.2, 0.2])))
    assert spec.d_bar == pytest.approx(0.2)


def test_eigenvector_sign_convention(rng):
    spec = analyze(random_squeezing_matrix(rng, 5))
    pivots = np.argmax(np.abs(spec.eigenvectors), axis=0)
    assert np.all(spec.eigenvectors[pivots, np.arange(5)] > 0)


def test_spectral_identities_on_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(500):
        n = int(rng.integers(1, 9))
        Z = random_squeezing_matrix(rng, n)
        spec = analyze(Z)
        assert spec.s1 == pytest.approx((spec.s0 - 1) / 2, abs=1e-12)
        N = float(rng.uniform(0, 10))
        assert n_bar(N, spec) >= N
        assert np.max(np.abs(spec.reconstruct() - Z.entries)) < 1e-9
        expected = N * np.exp(4 * abs(spec.d_bar)) + spec.s1 + spec.s2
        assert n_bar(N, spec) == pytest.approx(expected, rel=1e-12)


def test_load_matrix_with_comments():
    Z = load_squeezing_matrix("# pair\n0 0.1\n\n0.1 0\n")
    assert Z.n == 2
    assert Z.entries[0, 1] == 0.1


def test_load_rejects_asymmetric_entries():
    with pytest.raises(UnsupportedSqueezingError, match=r"\(1,2\)/\(2,1\)"):
        load_squeezing_matrix("0 0.1\n0.2 0\n")


def test_load_rejects_complex_entries():
    with pytest.raises(UnsupportedSqueezingError, match="unsupported"):
        load_squeezing_matrix("0 0.1+0.2j\n0.1 0\n")


def test_load_reports_bad_token_location():
    with pytest.raises(InputValidationError, match="row 2, column 1"):
        load_squeezing_matrix("0 0.1\nabc 0\n")


def test_load_rejects_non_square():
    with pytest.raises(InputValidationError, match="not square"):
        load_squeezing_matrix("0 0.1 0.2\n0.1 0\n")


def test_load_rejects_empty():
    with pytest.raises(InputValidationError):
        load_squeezing_matrix("# nothing\n")


def test_matrix_rejects_complex_array():
    with pytest.raises(UnsupportedSqueezingError):
        SqueezingMatrix(1, np.array([[0.1j]]))


def test_matrix_rejects_wrong_shape():
    with pytest.raises(InputValidationError):
        SqueezingMatrix(2, np.zeros((2, 3)))


def test_nearest_neighbor_structure():
    Z = nearest_neighbor_matrix(4, 0.2)
    expected = np.diag([0.2] * 3, 1) + np.diag([0.2] * 3, -1)
    np.testing.assert_array_equal(Z.entries, expected)
    assert nearest_neighbor_matrix(1, 0.3).is_zero()


def test_n_bar_rejects_negative_budget():
    with pytest.raises(InputValidationError):
        n_bar(-1.0, analyze(SqueezingMatrix.zeros(1)))


def test_scalars_invariant_under_relabelling_uses():
    rng = np.random.default_rng(21)
    for _ in range(100):
        n = int(rng.integers(2, 10))
        Z = random_squeezing_matrix(rng, n)
        order = rng.permutation(n)
        base = analyze(Z)
        permuted = analyze(SqueezingMatrix(n, Z.entries[np.ix_(order, order)]))
        for name in ("d_bar", "s0", "s1", "s2"):
            assert getattr(permuted, name) == pytest.approx(getattr(base, name), rel=1e-10, abs=1e-12)


def test_scalars_even_in_squeezing():
    rng = np.random.default_rng(22)
    for _ in range(100):
        n = int(rng.integers(1, 10))
        Z = random_squeezing_matrix(rng, n)
        base, flipped = analyze(Z), analyze(SqueezingMatrix(n, -Z.entries))
        for name in ("s0", "s1", "s2"):
            assert getattr(flipped, name) == pytest.approx(getattr(base, name), rel=1e-10, abs=1e-12)
        assert abs(flipped.d_bar) == pytest.approx(abs(base.d_bar), abs=1e-12)


def test_reconstruction_up_to_sixteen_uses():
    rng = np.random.default_rng(23)
    for n in range(1, 17):
        for _ in range(10):
            Z = random_squeezing_matrix(rng, n)
            spec = analyze(Z)
            assert np.max(np.abs(spec.reconstruct() - Z.entries)) < 1e-9
            np.testing.assert_allclose(spec.eigenvectors.T @ spec.eigenvectors, np.eye(n), atol=1e-10)
