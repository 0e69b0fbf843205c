import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from olsmub.gfield import FieldSpec, dual_basis
from olsmub.qmub.linalg import is_hermitian, is_unitary, jacobi_eigh, phase_normalize
from olsmub.qmub.weyl import (
    WeylIndex,
    index_from_field,
    root_of_unity,
    symmetric_weyl_op,
    symplectic,
    weyl_op,
    weyl_x,
    weyl_z,
)

TAU = 1e-10


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
def test_jacobi_matches_numpy(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        h = random_hermitian(rng, n)
        w, v = jacobi_eigh(h)
        assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-10)
        assert np.abs(h @ v - v * w).max() < 1e-10
        assert is_unitary(v)


def test_jacobi_degenerate_and_diagonal():
    rng = np.random.default_rng(3)
    q = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    w, v = jacobi_eigh(q @ np.diag([1.0, 1, 2, 2]) @ q.conj().T)
    assert np.allclose(w, [1, 1, 2, 2])
    w, v = jacobi_eigh(np.diag([3.0, -1.0]))
    assert w.tolist() == [-1.0, 3.0]


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0, 1], [0, 0]], dtype=complex))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_jacobi_property(n, seed):
    h = random_hermitian(np.random.default_rng(seed), n)
    w, v = jacobi_eigh(h)
    assert np.abs(v.conj().T @ h @ v - np.diag(w)).max() < 1e-9


def test_phase_normalize():
    v = np.array([0.1, -0.7j, 0.7j]) * np.exp(0.3j)
    out = phase_normalize(v)
    assert abs(out[1].imag) < 1e-15 and out[1].real > 0


def test_qubit_paulis():
    assert np.allclose(weyl_z(2), np.diag([1, -1]))
    assert np.allclose(weyl_x(2), [[0, 1], [1, 0]])


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 7])
def test_commutation_relation(d):
    z, x = weyl_z(d), weyl_x(d)
    assert np.abs(z @ x - root_of_unity(d) * x @ z).max() < TAU
    assert is_unitary(z) and is_unitary(x)


def test_x_cubed_is_identity():
    x = weyl_x(3)
    assert np.abs(x @ x @ x - np.eye(3)).max() < TAU


def test_d_too_small():
    with pytest.raises(ValueError):
        weyl_z(1)


def test_identity_index():
    assert np.allclose(weyl_op(WeylIndex.prime(5, 0, 0)), np.eye(5))


def test_d3_traces():
    s01 = weyl_op(WeylIndex.prime(3, 0, 1))
    s12 = weyl_op(WeylIndex.prime(3, 1, 2))
    assert abs(np.trace(s01.conj().T @ s01) - 3) < TAU
    assert abs(np.trace(s01.conj().T @ s12)) < TAU


@pytest.mark.parametrize("d", [2, 3, 5])
def test_prime_trace_orthogonality(d):
    ops = [weyl_op(WeylIndex.prime(d, m, n)) for m in range(d) for n in range(d)]
    gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
    assert np.abs(gram - d * np.eye(d * d)).max() < TAU


@pytest.mark.parametrize("q", [4, 8, 9])
def test_prime_power_trace_orthogonality(q):
    pair = dual_basis(FieldSpec.of_order(q))
    ops = [weyl_op(index_from_field(m, n, pair)) for m in range(q) for n in range(q)]
    gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
    assert np.abs(gram - q * np.eye(q * q)).max() < 1e-9


def test_d4_tensor_form():
    sx, sz = weyl_x(2), weyl_z(2)
    assert np.allclose(weyl_op(WeylIndex(2, (1, 0), (0, 1))), np.kron(sx, sz))


def test_symplectic_matches_commutation():
    for (m, n), (m2, n2) in itertools.product(itertools.product(range(3), repeat=2), repeat=2):
        a, b = WeylIndex.prime(3, m, n), WeylIndex.prime(3, m2, n2)
        ua, ub = weyl_op(a), weyl_op(b)
        commute = np.abs(ua @ ub - ub @ ua).max() < TAU
        assert commute == (symplectic(a, b) == 0)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_symmetric_ops_are_hermitian_or_unitary(p):
    for m, n in itertools.product(range(p), repeat=2):
        u = symmetric_weyl_op(WeylIndex.prime(p, m, n))
        assert is_unitary(u)
        if p == 2:
            assert is_hermitian(u)


def test_index_range_checked():
    with pytest.raises(ValueError):
        WeylIndex(3, (3,), (0,))
    with pytest.raises(ValueError):
        WeylIndex(2, (1, 0), (1,))
