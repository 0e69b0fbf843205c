"""Unitary operator basis built from a MUB set, Latin operators and the shifting check."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..nets import NetDesign, column_function
from .bases import Basis, MubSet
from .linalg import dagger
from .weyl import displacement, root_of_unity


def s_operator(basis: Basis, xi: int) -> np.ndarray:
    """``sum_j eta^(j xi) |j><j|`` in the given basis."""
    d = basis.d
    phases = root_of_unity(d) ** ((np.arange(d) * xi) % d)
    v = basis.vectors
    return (v * phases) @ dagger(v)


def s_family(mubs: MubSet) -> list[np.ndarray]:
    """Identity followed by every ``S_m^xi`` with xi in 1..d-1; d^2 operators for a complete set."""
    out = [np.eye(mubs.d, dtype=complex)]
    for b in mubs.bases:
        out.extend(s_operator(b, xi) for xi in range(1, mubs.d))
    return out


def expand_operator(h: np.ndarray, mubs: MubSet) -> np.ndarray:
    """Rebuild ``h`` from its trace coefficients over the S family (complete sets only)."""
    fam = s_family(mubs)
    d = mubs.d
    return sum(np.trace(dagger(s) @ h) / d * s for s in fam)


def latin_operator(mubs: MubSet, tup) -> np.ndarray:
    """``1 + sum_m sum_{xi=1}^{d-1} eta^(n_m xi) S_m^xi``.

    Summing the phases over xi collapses each row to ``d |-n_m><-n_m| - 1``,
    so this equals ``d sum_m P_{m,-n_m} - d`` for a complete set.
    """
    d = mubs.d
    if len(tup) != len(mubs.bases):
        raise ValueError(f"tuple has {len(tup)} entries for {len(mubs.bases)} bases")
    eta = root_of_unity(d)
    out = np.eye(d, dtype=complex)
    for b, n in zip(mubs.bases, tup):
        for xi in range(1, d):
            out = out + eta ** ((n * xi) % d) * s_operator(b, xi)
    return out


def coincidences(t1, t2) -> int:
    return sum(int(a == b) for a, b in zip(t1, t2))


def tuples_from_net(net: NetDesign) -> list[tuple[int, ...]]:
    """For each label b, the column holding b in every row."""
    idx = net.cell_index()
    return [tuple(int(x) for x in idx[:, b]) for b in range(net.d * net.d)]


def tuple_coincidence_report(net: NetDesign) -> dict:
    """Largest pairwise coincidence count k among the net's tuples; 1 for a valid net."""
    tups = tuples_from_net(net)
    worst = max(coincidences(a, b) for i, a in enumerate(tups) for b in tups[i + 1 :])
    return {"n_tuples": len(tups), "complete": net.complete, "max_k": worst, "ok": net.complete and worst == 1}


@dataclass
class ShiftingReport:
    d: int
    max_deviation: float
    table: list[list[list[int]]]
    matches_net: bool

    @property
    def ok(self) -> bool:
        return self.matches_net

    def as_dict(self) -> dict:
        return {"d": self.d, "max_deviation": self.max_deviation, "table": self.table, "matches_net": self.matches_net}


def verify_shifting(net: NetDesign, mubs: MubSet, pair=None) -> ShiftingReport:
    """Check ``|<j + F_a(m,n)| U_mn |j>| = 1`` everywhere and rebuild the table by simulation.

    The rebuild prepares vector 0 of each basis, applies ``U_mn`` and records
    the most likely outcome as the cell of label ``m d + n``.
    """
    d = net.d
    if len(mubs.bases) != net.n_rows:
        raise ValueError("MUB set and net differ in row count")
    # cells are indexed by field elements when a basis pair is in use
    add = (lambda x, y: pair.spec.add(x, y)) if pair is not None else (lambda x, y: (x + y) % d)
    dev = 0.0
    rows = []
    for a, basis in enumerate(mubs.bases):
        f = column_function(net, a)
        v = basis.vectors
        cells: list[list[int]] = [[] for _ in range(d)]
        for m in range(d):
            for n in range(d):
                u = displacement(m, n, d, pair)
                amp = dagger(v) @ u @ v  # amp[i, j] = <i|U|j>
                shift = f(m, n)
                for j in range(d):
                    dev = max(dev, abs(abs(amp[add(j, shift), j]) - 1))
                probs = np.abs(amp[:, 0]) ** 2
                cells[int(np.argmax(probs))].append(m * d + n)
        rows.append(cells)
    return ShiftingReport(d, dev, rows, rows == net.as_lists())
