"""Weyl-Schwinger operators for prime and prime-power dimensions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from ..gfield import FieldBasisPair


def root_of_unity(d: int) -> complex:
    return np.exp(2j * np.pi / d)


@lru_cache(maxsize=None)
def _z(d: int) -> np.ndarray:
    z = np.diag(root_of_unity(d) ** np.arange(d))
    z.setflags(write=False)
    return z


@lru_cache(maxsize=None)
def _x(d: int) -> np.ndarray:
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)  # |k> -> |k+1>
    x.setflags(write=False)
    return x


def weyl_z(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError("d must be >= 2")
    return _z(d).copy()


def weyl_x(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError("d must be >= 2")
    return _x(d).copy()


def xz_power(d: int, m: int, n: int) -> np.ndarray:
    """X^m Z^n in dimension d, built directly: column k has entry eta^(n k) in row k+m."""
    eta = root_of_unity(d)
    out = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    out[(k + m) % d, k] = eta ** ((n * k) % d)
    return out


@dataclass(frozen=True)
class WeylIndex:
    """Exponent vectors of ``X_p^m1 Z_p^n1 (x) ... (x) X_p^mr Z_p^nr``."""

    p: int
    m: tuple[int, ...]
    n: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != len(self.n):
            raise ValueError("m and n must have equal length")
        if any(not 0 <= x < self.p for x in self.m + self.n):
            raise ValueError(f"components must lie in 0..{self.p - 1}")

    @classmethod
    def prime(cls, d: int, m: int, n: int) -> "WeylIndex":
        return cls(d, (m % d,), (n % d,))

    @property
    def d(self) -> int:
        return self.p ** len(self.m)

    def is_identity(self) -> bool:
        return not any(self.m) and not any(self.n)


def index_from_field(m: int, n: int, pair: FieldBasisPair) -> WeylIndex:
    """Decompose field elements m (basis e) and n (dual basis) into a WeylIndex."""
    return WeylIndex(pair.spec.p, pair.decompose_m(m), pair.decompose_n(n))


def weyl_op(idx: WeylIndex) -> np.ndarray:
    factors = [xz_power(idx.p, mi, ni) for mi, ni in zip(idx.m, idx.n)]
    return reduce(np.kron, factors)


def symplectic(a: WeylIndex, b: WeylIndex) -> int:
    """``m.n' - m'.n (mod p)``; zero iff the two operators commute."""
    return (np.dot(a.m, b.n) - np.dot(b.m, a.n)) % a.p


def symmetric_weyl_op(idx: WeylIndex) -> np.ndarray:
    """Phase-symmetrised displacement operator.

    Odd p: each factor is ``eta^(-m n / 2) X^m Z^n`` (1/2 taken mod p), which
    restricts to a group homomorphism on every commuting line.
    Even p: each factor is ``exp(i pi m n / p) X^m Z^n``; for p = 2 this is
    ``i^(m n) X^m Z^n``, the Hermitian Pauli.
    """
    p = idx.p
    factors = []
    for mi, ni in zip(idx.m, idx.n):
        base = xz_power(p, mi, ni)
        if p % 2 == 0:
            factors.append(base * np.exp(1j * np.pi * ((mi * ni) % (2 * p)) / p))
        else:
            half = pow(2, -1, p)
            factors.append(base * root_of_unity(p) ** ((-mi * ni * half) % p))
    return reduce(np.kron, factors)


def displacement(m: int, n: int, d: int, pair: FieldBasisPair | None = None) -> np.ndarray:
    """The device unitary encoding the pair (m, n)."""
    if pair is None:
        return xz_power(d, m, n)
    return weyl_op(index_from_field(m, n, pair))
