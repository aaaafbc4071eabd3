import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distilldyn import linalg
from distilldyn.errors import ConvergenceError, DimensionError, ValidationError

from conftest import random_complex, random_density, random_hermitian


def test_matmul_identity_and_diagonal():
    x = np.array([[1 + 2j, 3], [4j, -5]])
    assert np.array_equal(linalg.matmul(np.eye(2), x), x)
    q = np.exp(-0.3)
    d = np.diag([1, q])
    assert np.allclose(linalg.matmul(d, d), np.diag([1, q * q]), atol=0, rtol=1e-15)


def test_matmul_phase_damping_second_operator():
    # hand product: diag(0, s) . diag(0, s) = diag(0, s^2), s^2 = 1 - e^{-2 gamma t}
    gt = 0.7
    s = np.sqrt(1 - np.exp(-2 * gt))
    a2 = np.diag([0, s])
    out = linalg.matmul(linalg.dagger(a2), a2)
    assert out == pytest.approx(np.diag([0, 1 - np.exp(-2 * gt)]), abs=1e-15)


def test_matmul_dimension_error():
    with pytest.raises(DimensionError):
        linalg.matmul(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        linalg.as_matrix(np.ones((2, 3)))


def test_dagger(rng):
    x = random_complex(rng, 4)
    assert np.array_equal(linalg.dagger(np.eye(3)), np.eye(3))
    assert np.array_equal(linalg.dagger(linalg.dagger(x)), x)
    a2 = np.array([[0, -0.4], [0, 0]])
    assert np.array_equal(linalg.dagger(a2), np.array([[0, 0], [-0.4, 0]]))


def test_kron_examples():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    x = 0.25
    assert np.array_equal(linalg.kron(np.diag([1, x]), np.eye(2)), np.diag([1, 1, x, x]))
    ga, gb, t = 0.3, 0.8, 1.7
    a1a = np.diag([1, np.exp(-ga * t)])
    a1b = np.diag([1, np.exp(-gb * t)])
    expected = np.diag([1, np.exp(-gb * t), np.exp(-ga * t), np.exp(-(ga + gb) * t)])
    assert linalg.kron(a1a, a1b) == pytest.approx(expected, abs=1e-15)


def test_kron_index_convention():
    a = np.arange(4).reshape(2, 2)
    b = np.arange(9).reshape(3, 3) + 10
    k = linalg.kron(a, b)
    for i in range(2):
        for j in range(3):
            for p in range(2):
                for q in range(3):
                    assert k[i * 3 + j, p * 3 + q] == a[i, p] * b[j, q]


def test_partial_trace_examples():
    d = 3
    v = np.zeros(d * d)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    proj = np.outer(v, v)
    assert linalg.partial_trace(proj, d, d, "B") == pytest.approx(np.eye(d) / d, abs=1e-15)

    rng = np.random.default_rng(1)
    ra, rb = random_density(rng, 2), random_density(rng, 3)
    assert linalg.partial_trace(np.kron(ra, rb), 2, 3, "B") == pytest.approx(ra, abs=1e-14)
    assert linalg.partial_trace(np.kron(ra, rb), 2, 3, "A") == pytest.approx(rb, abs=1e-14)

    # one-sided dephased singlet: two diagonal 2x2 blocks summed by hand
    q = np.exp(-0.4)
    rho = np.zeros((4, 4))
    rho[1, 1] = rho[2, 2] = 0.5
    rho[1, 2] = rho[2, 1] = 0.5 * q
    assert linalg.partial_trace(rho, 2, 2) == pytest.approx(np.diag([0.5, 0.5]), abs=1e-15)


def test_partial_trace_dimension_error():
    with pytest.raises(DimensionError):
        linalg.partial_trace(np.eye(6), 2, 2)
    with pytest.raises(ValueError):
        linalg.partial_trace(np.eye(4), 2, 2, which="C")


def test_partial_transpose_examples(rng):
    ra, rb = random_density(rng, 2), random_density(rng, 3)
    pt = linalg.partial_transpose(np.kron(ra, rb), 2, 3)
    assert pt == pytest.approx(np.kron(ra, rb.T), abs=1e-15)
    x = random_complex(rng, 6)
    twice = linalg.partial_transpose(linalg.partial_transpose(x, 2, 3), 2, 3)
    assert np.array_equal(twice, x)


def test_partial_transpose_singlet_spectrum():
    v = np.array([0, 1, -1, 0]) / np.sqrt(2)
    pt = linalg.partial_transpose(np.outer(v, v), 2, 2)
    # brute force: PT moves the -1/2 coherences to the |00>,|11> corner
    expected = np.array([
        [0, 0, 0, -0.5],
        [0, 0.5, 0, 0],
        [0, 0, 0.5, 0],
        [-0.5, 0, 0, 0],
    ])
    assert pt == pytest.approx(expected, abs=1e-15)
    vals = linalg.hermitian_eigenvalues(pt).eigenvalues
    assert vals == pytest.approx([-0.5, 0.5, 0.5, 0.5], abs=1e-12)


def test_eigenvalues_examples():
    assert linalg.hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])).eigenvalues == pytest.approx([1, 2, 3])
    sx = np.array([[0, 1], [1, 0]])
    assert linalg.hermitian_eigenvalues(sx).eigenvalues == pytest.approx([-1, 1], abs=1e-14)
    sy = np.array([[0, -1j], [1j, 0]])
    assert linalg.hermitian_eigenvalues(sy).eigenvalues == pytest.approx([-1, 1], abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 16, 30])
def test_eigenvalues_match_lapack(n):
    rng = np.random.default_rng(n)
    h = random_hermitian(rng, n)
    res = linalg.hermitian_eigenvalues(h)
    ref = np.linalg.eigvalsh(h)
    scale = np.linalg.norm(h)
    assert np.max(np.abs(res.eigenvalues - ref)) <= 1e-12 * scale
    assert np.all(np.diff(res.eigenvalues) >= 0)
    assert res.offdiag_residual <= linalg.DEFAULT_EIG_TOL


def test_eigenvalues_degenerate_spectrum():
    rng = np.random.default_rng(5)
    u, _ = np.linalg.qr(random_complex(rng, 6))
    h = u @ np.diag([1, 1, 1, -2, -2, 0.5]) @ u.conj().T
    vals = linalg.hermitian_eigenvalues(h).eigenvalues
    assert vals == pytest.approx([-2, -2, 0.5, 1, 1, 1], abs=1e-12)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(ValidationError):
        linalg.hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        linalg.hermitian_eigenvalues(np.eye(2), tol=0)


def test_eigen_sweep_cap_raises():
    rng = np.random.default_rng(3)
    h = random_hermitian(rng, 12)
    emb = np.block([[h.real, -h.imag], [h.imag, h.real]])
    with pytest.raises(ConvergenceError) as info:
        linalg.jacobi_symmetric(emb, tol=1e-12, max_sweeps=1)
    assert info.value.residual > 1e-12


def test_zero_matrix_spectrum():
    res = linalg.hermitian_eigenvalues(np.zeros((3, 3)))
    assert np.array_equal(res.eigenvalues, np.zeros(3))


dims = st.integers(min_value=1, max_value=4)


@settings(max_examples=40, deadline=None)
@given(da=dims, db=dims, seed=st.integers(0, 2**32 - 1))
def test_kron_and_partial_trace_properties(da, db, seed):
    rng = np.random.default_rng(seed)
    a, b = random_complex(rng, da), random_complex(rng, db)
    k = linalg.kron(a, b)
    tr = np.trace(a) * np.trace(b)
    assert abs(np.trace(k) - tr) <= 1e-12 * max(1.0, abs(tr))
    assert np.allclose(linalg.partial_trace(k, da, db, "B"), a * np.trace(b), atol=1e-12 * max(1, np.abs(k).max()))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_dagger_reverses_products(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_complex(rng, n), random_complex(rng, n)
    lhs = linalg.dagger(linalg.matmul(a, b))
    rhs = linalg.matmul(linalg.dagger(b), linalg.dagger(a))
    assert np.allclose(lhs, rhs, atol=1e-12 * max(1, np.abs(lhs).max()), rtol=0)


@settings(max_examples=40, deadline=None)
@given(da=st.integers(1, 4), db=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
def test_partial_transpose_preserves_trace_and_hermiticity(da, db, seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, da * db)
    pt = linalg.partial_transpose(h, da, db)
    assert np.trace(pt) == np.trace(h)
    assert np.array_equal(pt, pt.conj().T)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 2**32 - 1))
def test_eigenvalue_trace_and_frobenius_identities(n, seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, n)
    vals = linalg.hermitian_eigenvalues(h).eigenvalues
    scale = max(1.0, np.linalg.norm(h))
    assert abs(vals.sum() - np.trace(h).real) <= 1e-10 * n * scale
    assert abs(np.sum(vals**2) - np.linalg.norm(h) ** 2) <= 1e-10 * n * scale**2
