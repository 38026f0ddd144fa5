"""Tests for the operator-level utilities and Hilbert-Schmidt geometry."""
import numpy as np
import pytest

from gksl_kit.operators import (
    Tolerance,
    dag,
    hermitian_split,
    hs_inner,
    is_positive_semidefinite,
    operator_norm,
    random_density_matrix,
    random_ginibre,
    random_haar_unitary,
    random_hermitian,
    trace_norm,
    traceless_projection,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def test_hs_inner_identity():
    assert hs_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)


def test_hs_inner_pauli_orthogonality():
    assert hs_inner(SIGMA_X, SIGMA_Y) == pytest.approx(0.0)


def test_hs_inner_definiteness():
    a = random_ginibre(3, 3, seed=0)
    val = hs_inner(a, a)
    assert val.imag == pytest.approx(0.0)
    assert val.real == pytest.approx(np.linalg.norm(a) ** 2)
    assert val.real >= 0


def test_hs_inner_conjugate_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = random_ginibre(3, 3, rng)
        b = random_ginibre(3, 3, rng)
        assert hs_inner(a, b) == pytest.approx(np.conj(hs_inner(b, a)))


def test_hs_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        hs_inner(np.eye(2), np.eye(3))


def test_psd_boundary():
    ok, lam_min = is_positive_semidefinite(np.diag([1.0, 0.0]))
    assert ok
    assert lam_min == pytest.approx(0.0)


def test_psd_small_negative_rejected():
    ok, lam_min = is_positive_semidefinite(np.diag([1.0, -1e-3]))
    assert not ok
    assert lam_min == pytest.approx(-1e-3)


def test_psd_rank_one_projector():
    rng = np.random.default_rng(2)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    ok, _ = is_positive_semidefinite(np.outer(v, v.conj()))
    assert ok


def test_psd_rejects_nonhermitian():
    ok, _ = is_positive_semidefinite(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert not ok


def test_psd_nonsquare_raises():
    with pytest.raises(ValueError):
        is_positive_semidefinite(np.ones((2, 3)))


def test_psd_convex_cone():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = random_density_matrix(3, rng)
        b = random_density_matrix(3, rng)
        x, y = rng.uniform(0, 5, size=2)
        ok, _ = is_positive_semidefinite(x * a + y * b)
        assert ok


def test_hermitian_split_hermitian_input():
    h = random_hermitian(3, seed=4)
    m, n = hermitian_split(h)
    assert np.allclose(m, h)
    assert np.allclose(n, 0)


def test_hermitian_split_antihermitian_input():
    h = random_hermitian(3, seed=5)
    m, n = hermitian_split(1j * h)
    assert np.allclose(m, 0, atol=1e-12)
    assert np.allclose(n, h)


def test_hermitian_split_reconstruction():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = random_ginibre(4, 4, rng)
        m, n = hermitian_split(a)
        assert np.allclose(m, dag(m))
        assert np.allclose(n, dag(n))
        assert np.allclose(m + 1j * n, a, atol=1e-12)


def test_traceless_projection_identity():
    assert np.allclose(traceless_projection(np.eye(3)), 0)


def test_traceless_projection_fixed_point():
    a = traceless_projection(random_ginibre(3, 3, seed=7))
    assert np.allclose(traceless_projection(a), a)


def test_traceless_projection_diagonal():
    out = traceless_projection(np.diag([2.0, 0.0]))
    assert np.allclose(out, np.diag([1.0, -1.0]))


def test_traceless_projection_orthogonal_to_identity():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = random_ginibre(4, 4, rng)
        assert abs(hs_inner(np.eye(4), traceless_projection(a))) < 1e-12 * 4


def test_trace_norm_rank_one():
    rng = np.random.default_rng(9)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v /= np.linalg.norm(v)
    w /= np.linalg.norm(w)
    assert trace_norm(np.outer(v, w.conj())) == pytest.approx(1.0)


def test_trace_norm_hermitian():
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0)


def test_trace_norm_monte_carlo_duality():
    # |Tr(B^dag A)| over sampled unit-operator-norm B lower-bounds ||A||_1,
    # and gets within 5% when the polar factor is among the candidates.
    rng = np.random.default_rng(10)
    a = random_ginibre(3, 3, rng)
    t_norm = trace_norm(a)
    best = 0.0
    for _ in range(200):
        b = random_haar_unitary(3, rng)  # unitaries are unit-operator-norm
        best = max(best, abs(np.trace(dag(b) @ a)))
        assert best <= t_norm * (1 + 1e-9)
    u, _, vh = np.linalg.svd(a)
    best = max(best, abs(np.trace(dag(u @ vh) @ a)))
    assert best >= 0.95 * t_norm


def test_trace_norm_submultiplicative_against_operator_norm():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = random_ginibre(3, 3, rng)
        rho = random_ginibre(3, 3, rng)
        assert trace_norm(a @ rho) <= operator_norm(a) * trace_norm(rho) * (1 + 1e-9)


def test_haar_unitary_d1():
    u = random_haar_unitary(1, seed=12)
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_haar_unitary_unitarity():
    for seed in range(5):
        u = random_haar_unitary(5, seed=seed)
        assert np.linalg.norm(dag(u) @ u - np.eye(5)) < 1e-12


def test_haar_unitary_invalid_dim():
    with pytest.raises(ValueError):
        random_haar_unitary(0)


def test_haar_first_moment():
    # mean of U A U^dag over samples approaches (Tr A / d) Id within 3 sigma
    rng = np.random.default_rng(13)
    d = 2
    a = random_ginibre(d, d, rng)
    n = 10_000
    samples = np.empty((n, d, d), dtype=complex)
    for i in range(n):
        u = random_haar_unitary(d, rng)
        samples[i] = u @ a @ dag(u)
    mean = samples.mean(axis=0)
    stderr = np.sqrt((np.var(samples.real, axis=0) + np.var(samples.imag, axis=0)) / n)
    exact = (np.trace(a) / d) * np.eye(d)
    z = np.abs(mean - exact) / np.maximum(stderr, 1e-15)
    assert z.max() < 3.0


def test_haar_left_invariance_statistic():
    # first moment of (VU) A (VU)^dag matches that of U A U^dag for fixed V
    rng = np.random.default_rng(14)
    d = 2
    a = random_hermitian(d, rng)
    v = random_haar_unitary(d, rng)
    n = 4000
    acc_plain = np.zeros((d, d), dtype=complex)
    acc_shift = np.zeros((d, d), dtype=complex)
    for _ in range(n):
        u = random_haar_unitary(d, rng)
        acc_plain += u @ a @ dag(u)
        w = v @ random_haar_unitary(d, rng)
        acc_shift += w @ a @ dag(w)
    assert np.linalg.norm(acc_plain - acc_shift) / n < 0.1


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rtol=-1.0)
    with pytest.raises(ValueError):
        Tolerance(atol=float("nan"))
