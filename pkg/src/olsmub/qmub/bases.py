"""Orthonormal bases, MUB construction from nets, certification and tensor products.

Bases in a :class:`MubSet` built by :func:`mubs_for` are aligned with the net:
basis k belongs to net row k and its vector j to cell j of that row. The
alignment comes from the shifting experiment. A reference vector is fixed
for cell 0 and the vector of cell j is the reference displaced by any pair
``(m, n)`` written in cell j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..gfield import FieldBasisPair, FieldSpec, dual_basis, is_prime, prime_power
from ..nets import NetDesign, net_for
from .linalg import TOL, dagger, jacobi_eigh, normalize_columns, phase_normalize
from .weyl import (
    WeylIndex,
    displacement,
    index_from_field,
    root_of_unity,
    symmetric_weyl_op,
    symplectic,
    weyl_op,
    weyl_x,
    weyl_z,
    xz_power,
)


class NotPrimePower(ValueError):
    pass


class NotCommuting(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Basis:
    """Orthonormal basis stored as the columns of ``vectors``."""

    vectors: np.ndarray
    label: str = ""

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.vectors[:, j]

    def projector(self, j: int) -> np.ndarray:
        v = self.vectors[:, j]
        return np.outer(v, v.conj())

    def gram_deviation(self) -> float:
        return float(np.abs(dagger(self.vectors) @ self.vectors - np.eye(self.d)).max())


@dataclass(frozen=True)
class MubCertificate:
    d: int
    n_bases: int
    max_overlap_deviation: float
    max_gram_deviation: float
    tol: float

    @property
    def certified(self) -> bool:
        return self.max_overlap_deviation <= self.tol and self.max_gram_deviation <= self.tol

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "n_bases": self.n_bases,
            "max_overlap_deviation": self.max_overlap_deviation,
            "max_gram_deviation": self.max_gram_deviation,
            "tol": self.tol,
            "certified": self.certified,
        }


@dataclass
class MubSet:
    d: int
    bases: list[Basis]
    certificate: MubCertificate | None = None
    net: NetDesign | None = None
    pair: FieldBasisPair | None = None
    route: str = ""

    def __len__(self):
        return len(self.bases)

    def projector(self, m: int, j: int) -> np.ndarray:
        return self.bases[m].projector(j)


def verify_mub(mubs: MubSet | Sequence[Basis], tol: float = TOL) -> MubCertificate:
    """Max over inter-basis pairs of ``| |<i|j>|^2 - 1/d |`` and max Gram deviation."""
    bases = mubs.bases if isinstance(mubs, MubSet) else list(mubs)
    if not bases:
        raise ValueError("no bases to verify")
    d = bases[0].d
    if any(b.d != d for b in bases):
        raise ValueError("bases of different dimension")
    gram = max(b.gram_deviation() for b in bases)
    overlap = 0.0
    for a, b in itertools.combinations(bases, 2):
        ov = np.abs(dagger(a.vectors) @ b.vectors) ** 2
        overlap = max(overlap, float(np.abs(ov - 1 / d).max()))
    cert = MubCertificate(d, len(bases), overlap, gram, tol)
    if isinstance(mubs, MubSet):
        mubs.certificate = cert
    return cert


# ---------------------------------------------------------------------------
# closed forms


def _closed_form_vectors(d: int, a: int) -> np.ndarray:
    """Eigenvectors of X Z^a; column j, and Z maps column j to column j-1.

    Odd d: ``eta^(-j k - a s_k)/sqrt(d)`` with ``s_k = k + ... + (d-1)``.
    Even d: that expression is not an eigenvector (X Z^a has eigenvalues
    whose d-th power is (-1)^a), so the phases are
    ``eta^(-j k) exp(i pi a k (k - d) / d)`` instead.
    """
    k = np.arange(d)
    j = np.arange(d)[None, :]
    if d % 2:
        s = (d * (d - 1) - k * (k - 1)) // 2
        phase = np.exp(-2j * np.pi * ((j * k[:, None] + a * s[:, None]) % d) / d)
    else:
        phase = np.exp(-2j * np.pi * ((j * k[:, None]) % d) / d) * np.exp(1j * np.pi * a * (k * (k - d) % (2 * d)) / d)[:, None]
    return phase / np.sqrt(d)


def eigenbasis_closed_form(d: int, a: int) -> Basis:
    if not is_prime(d):
        raise ValueError(f"{d} is not prime")
    if not 1 <= a < d:
        raise ValueError("a must lie in 1..d-1")
    return Basis(normalize_columns(_closed_form_vectors(d, a)), f"XZ^{a}")


def z_eigenbasis(d: int) -> Basis:
    return Basis(np.eye(d, dtype=complex), "Z")


def x_eigenbasis(d: int) -> Basis:
    """Column c is Z^c |+>, so Z shifts c -> c+1."""
    k = np.arange(d)
    return Basis(np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d), "X")


def standard_triple(d: int) -> MubSet:
    """Eigenbases of Z, X and XZ; unbiased in every dimension d >= 2."""
    xz = Basis(normalize_columns(_closed_form_vectors(d, 1)), "XZ")
    mubs = MubSet(d, [z_eigenbasis(d), x_eigenbasis(d), xz], route="triple")
    verify_mub(mubs)
    return mubs


# ---------------------------------------------------------------------------
# commuting classes and joint diagonalization


def _field_pair(d: int, basis=None, spec: FieldSpec | None = None) -> FieldBasisPair:
    spec = spec or FieldSpec.of_order(d)
    return dual_basis(spec, basis)


def commuting_classes_from_net(net: NetDesign, pair: FieldBasisPair | None = None) -> list[list[WeylIndex]]:
    """One class per row, read from the cell containing label 0 (b = 0).

    Labels decode as (m, n) = divmod(label, d). With ``pair`` given, m and n
    are field elements decomposed in the basis and its dual; otherwise they
    are exponents mod d.
    """
    d = net.d
    classes = []
    for r, row in enumerate(net.rows):
        cell = next(c for c in row if 0 in c)
        cls = []
        for label in cell:
            m, n = divmod(label, d)
            cls.append(index_from_field(m, n, pair) if pair else WeylIndex.prime(d, m, n))
        for a, b in itertools.combinations(cls, 2):
            if symplectic(a, b):
                raise ConstructionError(f"row {r}: operators {a} and {b} do not commute")
        classes.append(cls)
    return classes


_JOINT_SEED = 20080101


def joint_eigenbasis(ops: Sequence[np.ndarray], seed: int = _JOINT_SEED, tol: float = TOL) -> Basis:
    """Orthonormal basis diagonalizing every operator in a commuting family.

    Diagonalizes a Hermitian combination with fixed pseudo-random weights;
    eigenvalue clusters closer than 1e-7 are split by a second combination
    restricted to the cluster.
    """
    ops = [np.asarray(o, dtype=complex) for o in ops]
    d = ops[0].shape[0]
    for a, b in itertools.combinations(ops, 2):
        if np.abs(a @ b - b @ a).max() > tol:
            raise NotCommuting("operators do not commute")
    rng = np.random.default_rng(seed)

    def combo():
        c1, c2 = rng.normal(size=len(ops)), rng.normal(size=len(ops))
        return sum(x * (o + dagger(o)) + 1j * y * (o - dagger(o)) for x, y, o in zip(c1, c2, ops))

    w, v = jacobi_eigh(combo())
    h2 = combo()
    start = 0
    for end in range(1, d + 1):
        if end == d or w[end] - w[end - 1] > 1e-7:
            if end - start > 1:
                sub = v[:, start:end]
                _, u = jacobi_eigh(dagger(sub) @ h2 @ sub)
                v[:, start:end] = sub @ u
            start = end
    v = normalize_columns(v)
    for o in ops:
        conj = dagger(v) @ o @ v
        if np.abs(conj - np.diag(np.diag(conj))).max() > 1e-8:
            raise ConstructionError("joint diagonalization failed to split a degenerate cluster")
    return Basis(v)


def reference_column(basis: Basis, cls: Sequence[WeylIndex]) -> int:
    """Pick the joint eigenvector assigned to the cell through the origin.

    Scores each vector by ``sum_l <v|D_l|v>`` over the non-identity members
    of the class, D_l being the phase-symmetrised displacement operators, and
    takes the largest magnitude (ties: larger score, then lower index).
    For odd p this is the common +1 eigenvector of the symmetric operators.
    For p = 2 with two qubits it is the vector on which all three Hermitian
    Paulis of the line share one eigenvalue.
    """
    mats = [symmetric_weyl_op(idx) for idx in cls if not idx.is_identity()]
    if not mats:
        return 0
    scores = np.array([sum(np.vdot(v, m @ v).real for m in mats) for v in basis.vectors.T])
    scores = np.round(scores, 8)
    best = max(range(len(scores)), key=lambda j: (abs(scores[j]), scores[j], -j))
    return best


def _aligned_from_reference(net: NetDesign, row: int, ref: np.ndarray, pair) -> np.ndarray:
    d = net.d
    cols = []
    for cell in net.rows[row]:
        m, n = divmod(cell[0], d)
        cols.append(displacement(m, n, d, pair) @ ref)
    return normalize_columns(np.column_stack(cols))


def mubs_from_net(net: NetDesign, pair: FieldBasisPair | None = None, seed: int = _JOINT_SEED) -> MubSet:
    """Joint-diagonalization route: one basis per net row, aligned cell by cell."""
    classes = commuting_classes_from_net(net, pair)
    bases = []
    for r, cls in enumerate(classes):
        joint = joint_eigenbasis([weyl_op(i) for i in cls], seed)
        ref = joint.vectors[:, reference_column(joint, cls)]
        bases.append(Basis(_aligned_from_reference(net, r, ref, pair), f"row{r}"))
    mubs = MubSet(net.d, bases, net=net, pair=pair, route="joint")
    verify_mub(mubs)
    return mubs


def mubs_closed_form(d: int) -> MubSet:
    """Prime d: Z, X and X Z^a eigenbases aligned with the generated net."""
    net = net_for(d)
    bases = [z_eigenbasis(d), x_eigenbasis(d)]
    for a in range(1, d):
        cf = eigenbasis_closed_form(d, a)
        # Z^b moves |j>_a to |j-b>_a, so cell b holds |-b>_a
        bases.append(Basis(cf.vectors[:, (-np.arange(d)) % d], cf.label))
    mubs = MubSet(d, bases, net=net, route="closed-form")
    verify_mub(mubs)
    return mubs


def mubs_for(d: int, basis: Sequence[int] | None = None, spec: FieldSpec | None = None, route: str = "auto") -> MubSet:
    """Complete set of d+1 MUBs for a prime power d, aligned with ``net_for(d)``.

    ``route`` is "closed-form" (primes only), "joint", or "auto" (closed form
    for primes, joint diagonalization otherwise). ``basis`` selects the field
    basis used to decompose labels for prime powers.
    """
    if d < 2 or prime_power(d) is None:
        raise NotPrimePower(f"{d} is not a prime power; use mub_tensor_product for composite d")
    if route == "auto":
        route = "closed-form" if is_prime(d) and basis is None and spec is None else "joint"
    if route == "closed-form":
        return mubs_closed_form(d)
    if route != "joint":
        raise ValueError(f"unknown route {route!r}")
    spec = spec or FieldSpec.of_order(d)
    pair = dual_basis(spec, basis)
    return mubs_from_net(net_for(d, spec), pair)


def mub_tensor_product(a: MubSet, b: MubSet) -> MubSet:
    """Pair bases in order: ``|x>_k (x) |y>_k`` for k < min(len(a), len(b))."""
    k = min(len(a), len(b))
    bases = [Basis(np.kron(a.bases[i].vectors, b.bases[i].vectors), f"{a.bases[i].label}x{b.bases[i].label}") for i in range(k)]
    out = MubSet(a.d * b.d, bases, route="tensor")
    verify_mub(out)
    return out


def trivial_mubs(n_bases: int) -> MubSet:
    return MubSet(1, [Basis(np.ones((1, 1), dtype=complex), "1") for _ in range(n_bases)], route="trivial")


def mubs_macneish(d: int) -> MubSet:
    """Tensor products of complete prime-power sets: min_i(p_i^r_i + 1) bases."""
    from ..gfield import factorize

    parts = [mubs_for(p**r) for p, r in sorted(factorize(d).items())]
    out = parts[0]
    for part in parts[1:]:
        out = mub_tensor_product(out, part)
    return out


# ---------------------------------------------------------------------------
# serialization


def mubs_to_json(mubs: MubSet) -> dict:
    cert = mubs.certificate or verify_mub(mubs)
    return {
        "d": mubs.d,
        "route": mubs.route,
        "bases": [
            {"label": b.label, "vectors": [[[float(z.real), float(z.imag)] for z in b.vectors[:, j]] for j in range(b.d)]}
            for b in mubs.bases
        ],
        "certification": cert.as_dict(),
    }


def mubs_from_json(obj: dict) -> MubSet:
    d = int(obj["d"])
    bases = []
    for entry in obj["bases"]:
        vecs = np.array([[complex(re, im) for re, im in vec] for vec in entry["vectors"]], dtype=complex)
        if vecs.shape != (d, d):
            raise ValueError(f"basis {entry.get('label')!r} has shape {vecs.shape}, expected ({d}, {d})")
        bases.append(Basis(vecs.T.copy(), entry.get("label", "")))
    return MubSet(d, bases, route=obj.get("route", "external"))
