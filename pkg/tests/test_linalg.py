import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ionotto import _kernels
from ionotto.linalg import (NotHermitianError, dagger, expi_hermitian, frobenius_norm,
                            hermitian_eig, kron, matmul, partial_trace, trace)
from ionotto.model import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z

from conftest import random_density, random_hermitian

I2 = np.eye(2)


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_sigma_z():
    assert np.array_equal(kron(SIGMA_Z, I2), np.diag([1, 1, -1, -1]))


def test_kron_flip_maps_minus_plus_to_plus_minus():
    # basis |++>, |+->, |-+>, |--> ; hand-expanded s+ (x) s- has one entry at (+-, -+)
    expected = np.zeros((4, 4))
    expected[1, 2] = 1
    m = kron(SIGMA_PLUS, SIGMA_MINUS)
    assert np.array_equal(m, expected)
    minus_plus = np.array([0, 0, 1, 0])
    assert np.array_equal(m @ minus_plus, [0, 1, 0, 0])


def test_kron_index_rule(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    r = kron(a, b)
    for i in range(3):
        for j in range(3):
            for k in range(2):
                for l in range(2):
                    assert abs(r[i * 2 + k, j * 2 + l] - a[i, j] * b[k, l]) <= 1e-15 * abs(a[i, j] * b[k, l]) + 1e-300


def test_kron_bilinear(rng):
    a, b, c = (random_hermitian(rng, 3) for _ in range(3))
    assert np.max(np.abs(kron(a + b, c) - kron(a, c) - kron(b, c))) <= 1e-12


@pytest.mark.parametrize("j", [5.0, 0.3])
def test_eig_2x2(j):
    vals, vecs = hermitian_eig([[0, j], [j, 0]])
    np.testing.assert_allclose(vals, [-j, j], atol=1e-14)


def test_eig_diagonal():
    vals, _ = hermitian_eig(np.diag([20.0, 0, 0, -20.0]))
    assert np.array_equal(vals, [-20, 0, 0, 20])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 16])
def test_eig_matches_lapack(rng, n):
    # numpy's LAPACK eigh is the independent oracle for the Jacobi kernel
    for _ in range(20):
        a = random_hermitian(rng, n, scale=rng.uniform(0.1, 30))
        vals, vecs = hermitian_eig(a)
        np.testing.assert_allclose(vals, np.linalg.eigvalsh(a), atol=1e-12 * max(1, np.abs(a).max()))
        scale = np.linalg.norm(a)
        assert np.all(np.diff(vals) >= 0)
        assert np.linalg.norm(a @ vecs - vecs * vals) <= 1e-10 * scale
        assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(n))) <= 1e-10
        assert np.linalg.norm((vecs * vals) @ vecs.conj().T - a) <= 1e-10 * scale
        assert abs(vals.sum() - np.trace(a).real) <= 1e-10 * max(1, scale)


def test_eig_degenerate_subspace(rng):
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    a = (q * np.array([1, 1, 1, 2, 2, -3.0])) @ q.conj().T
    vals, vecs = hermitian_eig(a)
    np.testing.assert_allclose(vals, [-3, 1, 1, 1, 2, 2], atol=1e-12)
    assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(6))) <= 1e-12


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError) as err:
        hermitian_eig([[0, 1], [0.5, 0]])
    assert err.value.defect == pytest.approx(0.5)


def test_eig_rejects_oversized():
    with pytest.raises(ValueError, match="exceeds"):
        hermitian_eig(np.eye(65))


def test_eig_rejects_non_square():
    with pytest.raises(ValueError, match="square"):
        hermitian_eig(np.zeros((2, 3)))


def test_expi_zero_is_identity():
    np.testing.assert_array_equal(expi_hermitian(np.zeros((4, 4)), 2.7), np.eye(4))


def test_expi_sigma_z_pi():
    np.testing.assert_allclose(expi_hermitian(SIGMA_Z, np.pi), -np.eye(2), atol=1e-15)


def test_expi_inverse_and_unitary(rng):
    for n in (2, 4, 8):
        h = random_hermitian(rng, n, 5)
        u = expi_hermitian(h, 0.7)
        np.testing.assert_allclose(u @ expi_hermitian(h, -0.7), np.eye(n), atol=1e-10)
        assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-10


def test_expi_against_taylor_series(rng):
    h = random_hermitian(rng, 4, 0.3)
    series = np.eye(4, dtype=complex)
    term = np.eye(4, dtype=complex)
    for k in range(1, 40):
        term = term @ (-1j * h * 1.3) / k
        series += term
    np.testing.assert_allclose(expi_hermitian(h, 1.3), series, atol=1e-12)


def test_partial_trace_product(rng):
    ra, rb = random_density(rng, 4), random_density(rng, 2)
    np.testing.assert_allclose(partial_trace(kron(ra, 3 * rb), 4, 2), 3 * ra, atol=1e-13)
    np.testing.assert_allclose(partial_trace(kron(3 * rb, ra), 4, 2, drop_last=False),
                               3 * ra, atol=1e-13)


def test_partial_trace_bell_pair():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(partial_trace(np.outer(phi, phi), 2, 2), np.eye(2) / 2,
                               atol=1e-15)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        partial_trace(np.eye(8), 3, 2)


def test_partial_trace_linear_and_trace_preserving(rng):
    r1, r2 = random_density(rng, 8), random_density(rng, 8)
    pt = partial_trace(0.3 * r1 + 0.7 * r2, 4, 2)
    np.testing.assert_allclose(pt, 0.3 * partial_trace(r1, 4, 2) + 0.7 * partial_trace(r2, 4, 2),
                               atol=1e-14)
    assert abs(np.trace(pt) - 1) <= 1e-12
    assert np.max(np.abs(pt - pt.conj().T)) <= 1e-14


def test_plumbing(rng):
    a, b = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)), rng.normal(size=(8, 8))
    np.testing.assert_array_equal(dagger(dagger(a)), a)
    assert trace(np.eye(8)) == 8
    assert abs(trace(matmul(a, b)) - trace(matmul(b, a))) <= 1e-12
    assert frobenius_norm(np.eye(4)) == pytest.approx(2.0)
    assert abs(trace(random_hermitian(rng, 8)).imag) <= 1e-12
    with pytest.raises(ValueError, match="mismatch"):
        matmul(np.eye(2), np.eye(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_reconstruction_property(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n, 10)
    vals, vecs = hermitian_eig(a)
    assert np.linalg.norm((vecs * vals) @ vecs.conj().T - a) <= 1e-10 * np.linalg.norm(a)


def test_numpy_and_jit_kernels_agree(rng):
    if _kernels.jacobi_eigh_jit is None:
        pytest.skip("numba unavailable")
    for n in (2, 5, 8):
        a = random_hermitian(rng, n)
        w1, v1, _ = _kernels.jacobi_eigh_jit(a)
        w2, v2, _ = _kernels.jacobi_eigh_numpy(a)
        np.testing.assert_allclose(w1, w2, atol=1e-13)
        # rotation orders differ, so compare eigenvectors up to phase
        np.testing.assert_allclose(np.abs(np.sum(v1.conj() * v2, axis=0)), 1, atol=1e-12)


@pytest.mark.parametrize("n", [1, 3, 7, 8, 11])
def test_numpy_kernel_odd_and_even_sizes(rng, n):
    a = random_hermitian(rng, n, 4)
    w, v, _ = _kernels.jacobi_eigh_numpy(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-12)
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-12


def test_round_robin_covers_every_pair_once():
    for n in (2, 5, 8):
        seen = [tuple(pq) for p, q in _kernels._round_robin(n) for pq in zip(p, q)]
        assert sorted(seen) == [(i, j) for i in range(n) for j in range(i + 1, n)]
