import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from olsmub.gfield import (
    DegenerateBasis,
    FieldError,
    FieldSpec,
    decompose_m,
    decompose_n,
    dual_basis,
    field_add,
    field_mul,
    field_trace,
    is_irreducible,
)

GF4 = FieldSpec(2, 2)
GF8 = FieldSpec(2, 3, (1, 1, 0, 1))  # x^3 + x + 1
GF9 = FieldSpec(3, 2)
FIELDS = [GF4, GF8, GF9, FieldSpec(2, 3), FieldSpec(5, 1)]


def test_default_polynomials():
    assert GF4.irreducible == (1, 1, 1)
    assert GF9.irreducible == (1, 0, 1)
    # low-degree-first comparison prefers x^3 + x^2 + 1 over x^3 + x + 1
    assert FieldSpec(2, 3).irreducible == (1, 0, 1, 1)
    assert FieldSpec(7, 1).irreducible == (0, 1)


def test_rejects_bad_parameters():
    with pytest.raises(FieldError):
        FieldSpec(4, 1)
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(FieldError):
        FieldSpec.of_order(6)


def test_irreducibility_trial_division():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([0, 1, 1], 2)
    assert is_irreducible([1, 1, 0, 0, 1], 2)  # x^4 + x + 1
    assert not is_irreducible([1, 0, 1, 0, 1], 2)  # (x^2 + x + 1)^2


def test_gf4_examples():
    w, one, zero = GF4.element(2), GF4.element(1), GF4.element(0)
    assert field_add(w, one).index == 3
    assert field_mul(w, w).index == 3
    assert field_mul(w, GF4.element(3)).index == 1
    assert field_trace(zero) == 0
    assert field_trace(w) == 1


def test_gf9_addition_cancels():
    a = GF9.element(GF9.index([1, 1]))  # x + 1
    b = GF9.element(GF9.index([2, 2]))  # 2x + 2
    assert field_add(a, b).index == 0


def test_mismatched_fields_raise():
    with pytest.raises(FieldError):
        field_add(GF4.element(1), GF9.element(1))


@pytest.mark.parametrize("spec", FIELDS, ids=lambda s: f"GF{s.d}")
def test_field_axioms_exhaustive(spec):
    d = spec.d
    A, M = spec.add_table, spec.mul_table
    r = np.arange(d)
    assert (A[:, 0] == r).all() and (M[:, 1] == r).all()
    assert (A == A.T).all() and (M == M.T).all()
    for a, b, c in itertools.product(range(d), repeat=3):
        assert A[A[a, b], c] == A[a, A[b, c]]
        assert M[M[a, b], c] == M[a, M[b, c]]
        assert M[a, A[b, c]] == A[M[a, b], M[a, c]]
    for a in range(d):
        assert A[a, spec.neg(a)] == 0
        if a:
            assert M[a, spec.inv(a)] == 1


@pytest.mark.parametrize("spec", FIELDS, ids=lambda s: f"GF{s.d}")
def test_trace_linearity(spec):
    for x, y in itertools.product(range(spec.d), repeat=2):
        assert spec.trace(spec.add(x, y)) == (spec.trace(x) + spec.trace(y)) % spec.p
    for k in range(spec.p):
        for x in range(spec.d):
            assert spec.trace(spec.mul(spec.embed(k), x)) == k * spec.trace(x) % spec.p


def test_prime_field_trace_is_identity():
    gf = FieldSpec(7, 1)
    assert [gf.trace(a) for a in range(7)] == list(range(7))


def test_gf4_dual_basis():
    pair = dual_basis(GF4, (2, 1))
    assert pair.dual == (1, 3)


def test_prime_field_dual():
    assert dual_basis(FieldSpec(5, 1), (1,)).dual == (1,)


@pytest.mark.parametrize("spec", FIELDS, ids=lambda s: f"GF{s.d}")
def test_dual_relation(spec):
    pair = dual_basis(spec)
    for i, e in enumerate(pair.basis):
        for j, f in enumerate(pair.dual):
            assert spec.trace(spec.mul(e, f)) == int(i == j)


def test_gf8_polynomial_basis_dual():
    pair = dual_basis(GF8, (1, 2, 4))
    for i, e in enumerate(pair.basis):
        for j, f in enumerate(pair.dual):
            assert GF8.trace(GF8.mul(e, f)) == int(i == j)


def test_degenerate_basis():
    with pytest.raises(DegenerateBasis):
        dual_basis(GF4, (3, 3))
    with pytest.raises(DegenerateBasis):
        dual_basis(GF9, (1, 2))  # 2 = 2 * 1


def test_gf4_decompositions():
    pair = dual_basis(GF4, (2, 1))
    assert [decompose_m(m, pair) for m in range(4)] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [decompose_n(n, pair) for n in range(4)] == [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.mark.parametrize("spec", [GF4, GF8, GF9], ids=lambda s: f"GF{s.d}")
def test_bilinear_identity_and_roundtrip(spec):
    pair = dual_basis(spec)
    p = spec.p
    for m in range(spec.d):
        mv = pair.decompose_m(m)
        assert pair.compose_m(mv) == m
        assert pair.compose_n(pair.decompose_n(m)) == m
        for n in range(spec.d):
            nv = pair.decompose_n(n)
            assert spec.trace(spec.mul(m, n)) == sum(a * b for a, b in zip(mv, nv)) % p


@given(st.integers(0, 8), st.integers(0, 8))
def test_index_roundtrip(a, b):
    assert GF9.index(GF9.coeffs(a)) == a
    x, y = GF9.element(a), GF9.element(b)
    assert (x - y) + y == x
