"""Epistemic states over a net: overlaps, operator reconstruction, purity test, sampling."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable

import numpy as np

from ..nets import NetDesign
from ..qmub.bases import MubSet
from ..qmub.linalg import TOL, is_hermitian

EPS = 1e-8


class IncompleteNet(ValueError):
    pass


@dataclass(frozen=True)
class EpistemicState:
    d: int
    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        if len(labels) != self.d or len(set(labels)) != self.d:
            raise ValueError(f"an epistemic state holds exactly {self.d} distinct labels")
        if any(not 0 <= x < self.d * self.d for x in labels):
            raise ValueError(f"labels must lie in 0..{self.d * self.d - 1}")
        object.__setattr__(self, "labels", tuple(sorted(labels)))

    @classmethod
    def of(cls, d: int, labels: Iterable[int]) -> "EpistemicState":
        return cls(d, tuple(labels))

    @classmethod
    def from_cell(cls, net: NetDesign, row: int, col: int) -> "EpistemicState":
        return cls(net.d, net.rows[row][col])


def count_epistemic(d: int) -> int:
    if d < 2:
        raise ValueError("d must be >= 2")
    return comb(d * d, d)


def count_epistemic_nested(d: int) -> int:
    """Count by d nested ascending loops; loop k runs up to ``D + k`` with ``D = d^2 - d + 1``."""
    top = d * d - d + 1

    def rec(depth: int, lo: int) -> int:
        if depth == d:
            return 1
        return sum(rec(depth + 1, i + 1) for i in range(lo, top + depth + 1))

    return rec(0, 1)


def _require_complete(net: NetDesign):
    if not net.complete:
        raise IncompleteNet(f"net has {net.n_rows} rows; {net.d + 1} required")


def overlap_profile(e: EpistemicState, net: NetDesign) -> list[list[Fraction]]:
    """``profile[m][j] = |e & cell(m, j)| / d`` as exact fractions."""
    _require_complete(net)
    if e.d != net.d:
        raise ValueError("dimension mismatch")
    s = set(e.labels)
    return [[Fraction(len(s.intersection(cell)), net.d) for cell in row] for row in net.rows]


@dataclass(frozen=True)
class ReconstructedOperator:
    matrix: np.ndarray
    state: EpistemicState
    t1: float
    t2: float
    t3: float


def _traces(o: np.ndarray) -> tuple[float, float, float]:
    o2 = o @ o
    return float(np.trace(o).real), float(np.trace(o2).real), float(np.sum(o2 * o.T).real)


def reconstruct_operator(e: EpistemicState, mubs: MubSet, net: NetDesign) -> ReconstructedOperator:
    """``O = -1 + sum_m sum_j p_j^(m) |j>_m<j|`` for basis m aligned with net row m."""
    profile = overlap_profile(e, net)
    d = net.d
    if mubs.d != d or len(mubs.bases) != net.n_rows:
        raise ValueError("MUB set is not aligned with the net")
    o = -np.eye(d, dtype=complex)
    for basis, row in zip(mubs.bases, profile):
        for j, p in enumerate(row):
            if p:
                o = o + float(p) * basis.projector(j)
    return ReconstructedOperator(o, e, *_traces(o))


def profile_operator(profile, mubs: MubSet) -> np.ndarray:
    """Same formula for an arbitrary (possibly formal) overlap profile."""
    d = mubs.d
    o = -np.eye(d, dtype=complex)
    for basis, row in zip(mubs.bases, profile):
        for j, p in enumerate(row):
            o = o + float(p) * basis.projector(j)
    return o


class Verdict(enum.Enum):
    PURE_QUANTUM = "PureQuantum"
    NOT_QUANTUM = "NotQuantum"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    t2: float
    t3: float
    min_eigenvalue: float

    @property
    def quantum(self) -> bool:
        return self.verdict is Verdict.PURE_QUANTUM


def classify_quantum(op: ReconstructedOperator | np.ndarray, eps: float = EPS) -> Classification:
    """Pure-state test: ``|Tr O^2 - 1| <= eps`` and ``|Tr O^3 - 1| <= eps``, eigenvalues >= -eps."""
    m = op.matrix if isinstance(op, ReconstructedOperator) else np.asarray(op, dtype=complex)
    if not is_hermitian(m, TOL * 100):
        raise ValueError("operator is not Hermitian")
    t1, t2, t3 = _traces(m)
    if abs(t1 - 1) > 1e-9:
        raise ValueError(f"trace {t1} differs from 1")
    floor = float(np.linalg.eigvalsh(m).min())
    pure = abs(t2 - 1) <= eps and abs(t3 - 1) <= eps and floor >= -eps
    return Classification(Verdict.PURE_QUANTUM if pure else Verdict.NOT_QUANTUM, t2, t3, floor)


@dataclass
class MeasurementResult:
    row: int
    exact: list[Fraction]
    counts: list[int]
    trials: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "row": self.row,
            "exact": [f"{p.numerator}/{p.denominator}" for p in self.exact],
            "counts": self.counts,
            "trials": self.trials,
            "seed": self.seed,
        }


def simulate_measurement(e: EpistemicState, row: int, net: NetDesign, trials: int = 1000, seed: int = 0) -> MeasurementResult:
    """Draw the ontic state uniformly from ``e`` and report which cell of ``row`` holds it."""
    if not 0 <= row < net.n_rows:
        raise ValueError(f"row must lie in 0..{net.n_rows - 1}")
    where = net.cell_index()[row]
    exact = [Fraction(sum(1 for x in e.labels if where[x] == j), net.d) for j in range(net.d)]
    rng = np.random.default_rng(seed)
    draws = rng.choice(np.asarray(e.labels), size=trials)
    counts = np.bincount(where[draws], minlength=net.d)
    return MeasurementResult(row, exact, counts.tolist(), trials, seed)
