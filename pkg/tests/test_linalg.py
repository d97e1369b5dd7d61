import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slocc224 import linalg
from slocc224.errors import InvalidInput, SamplingError, ShapeError
from slocc224.invariants import magic_T

from conftest import complex_arrays, gaussian, seeds


def test_svd_identity():
    s, _, _ = linalg.svd(np.eye(4))
    np.testing.assert_allclose(s, np.ones(4))


def test_svd_zero_rectangular():
    s, _, _ = linalg.svd(np.zeros((2, 3)))
    np.testing.assert_array_equal(s, [0.0, 0.0])


def test_svd_tiny_singular_value():
    m = np.diag([3.0, 1e-18])
    s, u, v = linalg.svd(m)
    # hand diagonalization: already diagonal, so s is the diagonal in descending order
    assert s[0] == pytest.approx(3.0)
    assert s[1] == pytest.approx(1e-18, rel=1e-6)
    assert np.linalg.norm(u @ np.diag(s) @ v.conj().T - m) <= 1e-10 * np.linalg.norm(m)


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_non_finite_input_rejected(bad):
    m = np.eye(3, dtype=complex)
    m[1, 2] = bad
    with pytest.raises(InvalidInput):
        linalg.svd(m)
    with pytest.raises(InvalidInput):
        linalg.numerical_rank(m)


def test_svd_reconstruction_random(rng):
    for _ in range(1000):
        r, c = rng.integers(1, 9, size=2)
        m = gaussian(rng, r, c)
        s, u, v = linalg.svd(m)
        assert np.all(np.diff(s) <= 0)
        assert np.linalg.norm(u @ np.diag(s) @ v.conj().T - m) <= 1e-10 * np.linalg.norm(m)


@pytest.mark.parametrize(
    "m, rank",
    [(np.eye(4), 4), (np.zeros((3, 3)), 0), (np.diag([1.0, 1e-15]), 1), (np.diag([1.0, 2e-9]), 2)],
)
def test_numerical_rank_examples(m, rank):
    assert linalg.numerical_rank(m) == rank


def test_absolute_floor():
    # everything below 1e-12 is zero regardless of the relative threshold
    assert linalg.numerical_rank(np.diag([1e-13, 1e-14])) == 0


def test_rank_tolerance_override():
    m = np.diag([1.0, 1e-7])
    assert linalg.numerical_rank(m) == 2
    with linalg.rank_tolerance(1e-6):
        assert linalg.current_eps_rel() == 1e-6
        assert linalg.numerical_rank(m) == 1
    assert linalg.numerical_rank(m) == 2


def test_scale_raises_threshold():
    m = np.diag([1e-6, 1e-8])
    assert linalg.numerical_rank(m) == 2
    assert linalg.numerical_rank(m, scale=1e2) == 1
    assert linalg.numerical_rank(m, scale=1e4) == 0


def test_rank_margin_in_decades():
    r, margin = linalg.rank_with_margin(np.diag([1.0, 1e-3, 1e-14]))
    assert r == 2
    # threshold 1e-9: kept 1e-3 sits 6 decades above it, discarded 1e-14 sits 5 below
    assert margin == pytest.approx(5.0)


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_rank_of_product_bounded(seed, ra, rb):
    rng = np.random.default_rng(seed)
    a = gaussian(rng, 5, ra) @ gaussian(rng, ra, 5)
    b = gaussian(rng, 5, rb) @ gaussian(rng, rb, 5)
    r = linalg.numerical_rank(a @ b)
    assert r <= min(linalg.numerical_rank(a), linalg.numerical_rank(b))


def test_det_examples():
    assert linalg.det(np.eye(4)) == pytest.approx(1.0)
    assert linalg.det(np.diag([1, 2, 3, 4])) == pytest.approx(24.0)
    assert abs(linalg.det(magic_T())) == pytest.approx(1.0, abs=1e-12)


def test_magic_T_determinant_by_cofactors():
    # independent route: Leibniz sum over permutations
    from itertools import permutations

    t = magic_T()
    total = 0
    for p in permutations(range(4)):
        sign = np.linalg.det(np.eye(4)[list(p)])
        total += sign * np.prod([t[i, p[i]] for i in range(4)])
    assert linalg.det(t) == pytest.approx(total, abs=1e-12)


def test_det_non_square():
    with pytest.raises(ShapeError):
        linalg.det(np.ones((2, 3)))


@given(complex_arrays((4, 4)), complex_arrays((4, 4)))
def test_det_multiplicative(a, b):
    lhs = linalg.det(a @ b)
    rhs = linalg.det(a) * linalg.det(b)
    # singular draws make rhs vanish; rounding then scales like (||a|| ||b||)^4
    floor = 1e-12 * (np.linalg.norm(a, 2) * np.linalg.norm(b, 2)) ** 4
    assert abs(lhs - rhs) <= 1e-9 * abs(rhs) + floor


def test_kron_examples():
    np.testing.assert_array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(linalg.kron(np.diag([2, 5]), np.eye(2)), np.diag([2, 2, 5, 5]))


@given(seeds)
def test_kron_mixed_product(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (gaussian(rng, 2, 2) for _ in range(4))
    lhs = linalg.kron(a, b) @ linalg.kron(c, d)
    np.testing.assert_allclose(lhs, linalg.kron(a @ c, b @ d), atol=1e-10 * np.linalg.norm(lhs))


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_random_sl_unit_determinant(k):
    for seed in range(50):
        m = linalg.random_sl(k, seed)
        assert abs(linalg.det(m) - 1) <= 1e-10


def test_random_sl_deterministic():
    np.testing.assert_array_equal(linalg.random_sl(4, 7), linalg.random_sl(4, 7))
    assert not np.array_equal(linalg.random_sl(4, 7), linalg.random_sl(4, 8))


def test_random_sl_condition_cap():
    rng = np.random.default_rng(0)
    conds = [linalg.condition_number(linalg.random_sl(4, rng, 100.0)) for _ in range(1000)]
    # recomputed independently from the singular values
    assert max(conds) <= 100.0


def test_random_sl_unreachable_cap():
    with pytest.raises(SamplingError):
        linalg.random_sl(4, 0, condition_cap=1.0001, max_tries=20)


def test_random_unitary_is_unitary(rng):
    u = linalg.random_unitary(4, rng)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
