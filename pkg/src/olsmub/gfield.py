"""Arithmetic in GF(p^r) with explicit irreducible polynomial, trace and dual bases.

Elements are identified with integers ``0..d-1`` through the base-p encoding of
their polynomial coefficients (constant term is the least significant digit).
For GF(4) this gives ``{0, 1, w, w+1} -> {0, 1, 2, 3}`` with ``w`` a root of
``x^2 + x + 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np


class FieldError(ValueError):
    """Invalid field parameters or mixing of elements from different fields."""


class DegenerateBasis(FieldError):
    """The proposed field basis is linearly dependent over the prime field."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation as ``{p: exponent}``."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(d: int) -> tuple[int, int] | None:
    """Return ``(p, r)`` with ``d == p**r``, or None if d is not a prime power."""
    if d < 2:
        return None
    fac = factorize(d)
    if len(fac) != 1:
        return None
    ((p, r),) = fac.items()
    return p, r


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists with constant term first


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    m = _trim([x % p for x in m])
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        q = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - q * c) % p
        _trim(a)
    return a


def _monic_polys(deg: int, p: int):
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg//2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for g in _monic_polys(k, p):
            if not _poly_mod(poly, g, p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r (low degree compared first)."""
    for cand in _monic_polys(r, p):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^r) realised as F_p[x] / (irreducible)."""

    p: int
    r: int
    irreducible: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.r < 1:
            raise FieldError("extension degree must be >= 1")
        if not self.irreducible:
            object.__setattr__(self, "irreducible", smallest_irreducible(self.p, self.r))
        poly = tuple(int(c) % self.p for c in self.irreducible)
        if len(poly) != self.r + 1 or poly[-1] != 1:
            raise FieldError(f"irreducible must be monic of degree {self.r}: {self.irreducible}")
        if not is_irreducible(poly, self.p):
            raise FieldError(f"{self.irreducible} is reducible over F_{self.p}")
        object.__setattr__(self, "irreducible", poly)

    @classmethod
    def of_order(cls, d: int, irreducible: Sequence[int] | None = None) -> "FieldSpec":
        pr = prime_power(d)
        if pr is None:
            raise FieldError(f"{d} is not a prime power")
        return cls(pr[0], pr[1], tuple(irreducible) if irreducible else ())

    @property
    def d(self) -> int:
        return self.p**self.r

    # index <-> coefficient vectors
    def coeffs(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.d:
            raise FieldError(f"index {index} outside GF({self.d})")
        out = []
        for _ in range(self.r):
            index, c = divmod(index, self.p)
            out.append(c)
        return tuple(out)

    def index(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.r or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"bad coefficient vector {coeffs!r} for GF({self.d})")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _mul_coeffs(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = _poly_mod(prod, self.irreducible, self.p)
        return tuple(red + [0] * (self.r - len(red)))

    @cached_property
    def add_table(self) -> np.ndarray:
        d, p = self.d, self.p
        t = np.empty((d, d), dtype=np.int64)
        cs = [self.coeffs(i) for i in range(d)]
        for i in range(d):
            for j in range(d):
                t[i, j] = self.index([(x + y) % p for x, y in zip(cs[i], cs[j])])
        return t

    @cached_property
    def mul_table(self) -> np.ndarray:
        d = self.d
        t = np.empty((d, d), dtype=np.int64)
        cs = [self.coeffs(i) for i in range(d)]
        for i in range(d):
            for j in range(i, d):
                t[i, j] = t[j, i] = self.index(self._mul_coeffs(cs[i], cs[j]))
        return t

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return self.index([(-c) % self.p for c in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def power(self, a: int, e: int) -> int:
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.power(a, self.d - 2)

    def trace(self, a: int) -> int:
        """Field trace a + a^p + ... + a^(p^(r-1)), returned as an integer of F_p."""
        acc, t = a, a
        for _ in range(self.r - 1):
            t = self.power(t, self.p)
            acc = self.add(acc, t)
        c = self.coeffs(acc)
        if any(c[1:]):
            raise FieldError("trace left the prime field")  # pragma: no cover
        return c[0]

    def embed(self, k: int) -> int:
        """The prime-field integer k as a field element."""
        return k % self.p

    def element(self, index: int) -> "FieldElement":
        return FieldElement(self, index)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, i) for i in range(self.d)]

    def polynomial_basis(self) -> tuple[int, ...]:
        return tuple(self.p**i for i in range(self.r))

    def default_basis(self) -> tuple[int, ...]:
        # GF(4): (w, 1), the basis used by the reference bit tables
        if (self.p, self.r) == (2, 2) and self.irreducible == (1, 1, 1):
            return (2, 1)
        return self.polynomial_basis()

    def __str__(self) -> str:
        return f"GF({self.d}) = F_{self.p}[x]/({format_poly(self.irreducible)})"


def format_poly(coeffs: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(reversed(terms)) or "0"


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.spec.d:
            raise FieldError(f"index {self.index} outside GF({self.spec.d})")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs(self.index)

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldError("elements belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.add(self.index, other.index))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.index, other.index))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg(self.index))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __int__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return f"FieldElement(GF({self.spec.d}), {self.index})"


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_trace(a: FieldElement) -> int:
    return a.spec.trace(a.index)


# ---------------------------------------------------------------------------
# linear algebra over F_p


def solve_mod_p(m: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray:
    """Solve ``m @ x = rhs (mod p)`` for square m by Gauss-Jordan elimination.

    Raises DegenerateBasis when m is singular mod p.
    """
    n = m.shape[0]
    aug = np.concatenate([np.asarray(m, dtype=np.int64) % p, np.asarray(rhs, dtype=np.int64).reshape(n, -1) % p], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r, col] % p), None)
        if piv is None:
            raise DegenerateBasis("matrix is singular over F_p")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), -1, p) % p
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    sol = aug[:, n:]
    return sol[:, 0] if np.ndim(rhs) == 1 else sol


def rank_mod_p(m: np.ndarray, p: int) -> int:
    a = np.asarray(m, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if a[r, col]), None)
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        a[rank] = a[rank] * pow(int(a[rank, col]), -1, p) % p
        for r in range(rows):
            if r != rank and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
    return rank


@dataclass(frozen=True)
class FieldBasisPair:
    """A basis ``e`` of GF(p^r) over F_p together with its trace-dual ``dual``."""

    spec: FieldSpec
    basis: tuple[int, ...]
    dual: tuple[int, ...]

    def decompose_m(self, m: int) -> tuple[int, ...]:
        """Coordinates of m in the basis e: ``m_i = tr(m * dual_i)``."""
        return tuple(self.spec.trace(self.spec.mul(m, e)) for e in self.dual)

    def decompose_n(self, n: int) -> tuple[int, ...]:
        """Coordinates of n in the dual basis: ``n_i = tr(n * e_i)``."""
        return tuple(self.spec.trace(self.spec.mul(n, e)) for e in self.basis)

    def compose_m(self, vec: Sequence[int]) -> int:
        return _combine(self.spec, vec, self.basis)

    def compose_n(self, vec: Sequence[int]) -> int:
        return _combine(self.spec, vec, self.dual)


def _combine(spec: FieldSpec, vec: Sequence[int], elems: Sequence[int]) -> int:
    acc = 0
    for c, e in zip(vec, elems):
        acc = spec.add(acc, spec.mul(spec.embed(c), e))
    return acc


def dual_basis(spec: FieldSpec, basis: Sequence[int | FieldElement] | None = None) -> FieldBasisPair:
    """Compute the unique basis dual to ``basis`` under the trace form.

    With ``basis=None`` the field's default basis is used.
    """
    if basis is None:
        basis = spec.default_basis()
    e = tuple(int(b) for b in basis)
    if len(e) != spec.r:
        raise DegenerateBasis(f"a basis of GF({spec.d}) has {spec.r} elements, got {len(e)}")
    if rank_mod_p(np.array([spec.coeffs(x) for x in e]), spec.p) < spec.r:
        raise DegenerateBasis(f"{e} is linearly dependent over F_{spec.p}")
    # tr(e_i * x) is linear in the coefficients of x
    powers = spec.polynomial_basis()
    m = np.array([[spec.trace(spec.mul(ei, xk)) for xk in powers] for ei in e], dtype=np.int64)
    sol = solve_mod_p(m, np.eye(spec.r, dtype=np.int64), spec.p)
    dual = tuple(spec.index([int(c) for c in sol[:, j]]) for j in range(spec.r))
    return FieldBasisPair(spec, e, dual)


def decompose_m(m: int | FieldElement, pair: FieldBasisPair) -> tuple[int, ...]:
    return pair.decompose_m(int(m))


def decompose_n(n: int | FieldElement, pair: FieldBasisPair) -> tuple[int, ...]:
    return pair.decompose_n(int(n))


def field_tables(spec: FieldSpec) -> dict:
    return {
        "d": spec.d,
        "p": spec.p,
        "r": spec.r,
        "irreducible": list(spec.irreducible),
        "add": spec.add_table.tolist(),
        "mul": spec.mul_table.tolist(),
        "trace": [spec.trace(a) for a in range(spec.d)],
    }
