"""Exhaustive census of epistemic states that reconstruct to pure quantum states.

Every d-subset e of the d^2 labels gives ``O = (1/d) sum_{a in e} A_a`` with
``A_a = sum_m P_{m, cell_m(a)} - 1``. A backend scans the subsets and keeps
those whose ``Tr O^2`` and ``Tr O^3`` fall within a widened window of 1. The
survivors are re-classified here from the explicit matrix, so both backends
produce identical counts.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice

import numpy as np

from ..nets import NetDesign
from ..qmub.bases import MubSet, mubs_for
from . import _fallback
from .states import EPS, count_epistemic

try:  # compiled kernel, built from _kernel.pyx
    from . import _kernel
except ImportError:  # pragma: no cover - depends on build
    _kernel = None

DEFAULT_MAX_D = 5
WINDOW_FACTOR = 10.0


class BudgetExceeded(RuntimeError):
    pass


def available_backends() -> list[str]:
    return (["compiled"] if _kernel is not None else []) + ["python"]


def default_backend() -> str:
    forced = os.environ.get("OLSMUB_BACKEND", "").strip().lower()
    if forced:
        if forced not in available_backends():
            raise RuntimeError(f"backend {forced!r} requested but unavailable")
        return forced
    return available_backends()[0]


BACKEND = default_backend()


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("OLSMUB_THREADS", "1")))
    except ValueError:
        return 1


def phase_point_operators(mubs: MubSet, net: NetDesign) -> np.ndarray:
    """``A[a] = sum_m P_{m, cell_m(a)} - 1`` for every label a; shape (d^2, d, d)."""
    d = net.d
    where = net.cell_index()
    proj = np.array([[b.projector(j) for j in range(d)] for b in mubs.bases])
    out = proj[np.arange(net.n_rows)[:, None], where].sum(axis=0)
    return out - np.eye(d)[None]


def trace_tables(a_ops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``G[a,b] = Tr(A_a A_b)`` and ``R[a,b,c] = Re Tr(A_a A_b A_c)`` as real arrays."""
    g = np.einsum("aij,bji->ab", a_ops, a_ops).real
    ab = np.einsum("aij,bjk->abik", a_ops, a_ops)
    r = np.einsum("abik,cki->abc", ab, a_ops).real
    return np.ascontiguousarray(g), np.ascontiguousarray(r)


@dataclass
class CensusResult:
    d: int
    E: int
    Q: int
    elapsed: float
    chunks: int
    backend: str
    threads: int
    mixed: int | None = None
    audited: int = 0
    candidates: int = 0
    quantum_states: list[tuple[int, ...]] = field(default_factory=list, repr=False)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.Q, self.E)

    @property
    def throughput(self) -> float:
        return self.E / self.elapsed if self.elapsed > 0 else float("inf")

    def as_dict(self) -> dict:
        r = self.ratio
        out = {
            "d": self.d,
            "E": self.E,
            "Q": self.Q,
            "ratio": f"{r.numerator}/{r.denominator}",
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "chunks": self.chunks,
            "backend": self.backend,
            "threads": self.threads,
            "throughput_per_s": round(self.throughput, 1),
        }
        if self.mixed is not None:
            out["mixed_psd"] = self.mixed
        if self.audited:
            out["audited"] = self.audited
        return out


def _compensated_traces(o: np.ndarray) -> tuple[float, float]:
    o2 = o @ o
    t2 = math.fsum((o * o.T).real.ravel())
    t3 = math.fsum((o2 * o.T).real.ravel())
    return t2, t3


def _confirm(a_ops: np.ndarray, combo, d: int, eps: float, audit: bool) -> tuple[bool, bool]:
    """Exact re-check of one candidate. Returns (quantum, audited)."""
    o = a_ops[list(combo)].sum(axis=0) / d
    o2 = o @ o
    t2 = float(np.trace(o2).real)
    t3 = float(np.sum(o2 * o.T).real)
    audited = False
    if audit and (eps / 10 <= abs(t2 - 1) <= eps * 10 or eps / 10 <= abs(t3 - 1) <= eps * 10):
        t2, t3 = _compensated_traces(o)
        audited = True
    ok = abs(t2 - 1) <= eps and abs(t3 - 1) <= eps
    if ok:
        ok = float(np.linalg.eigvalsh((o + o.conj().T) / 2).min()) >= -eps
    return ok, audited


def count_mixed_psd(a_ops: np.ndarray, d: int, eps: float = EPS) -> int:
    """Subsets whose operator is positive semidefinite but not a pure projector."""
    n = a_ops.shape[0]
    total = 0
    it = combinations(range(n), d)
    while True:
        block = np.asarray(list(islice(it, 20000)), dtype=np.intp)
        if block.size == 0:
            return total
        o = a_ops[block].sum(axis=1) / d
        w = np.linalg.eigvalsh(o)
        psd = w.min(axis=1) >= -eps
        pure = np.abs(w[:, -1] - 1) <= eps
        total += int(np.count_nonzero(psd & ~pure))


def census(
    d: int,
    mubs: MubSet | None = None,
    net: NetDesign | None = None,
    *,
    threads: int | None = None,
    backend: str | None = None,
    eps: float = EPS,
    allow_large: bool = False,
    report_mixed: bool = False,
    audit: bool = False,
    keep_states: bool = False,
) -> CensusResult:
    """Count the pure-quantum epistemic states of the aligned (mubs, net) pair.

    Work is split into chunks by the smallest label of the subset, one chunk
    per label; chunks run on a thread pool and merge by addition, so the
    result does not depend on ``threads``.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if d > DEFAULT_MAX_D and not allow_large:
        raise BudgetExceeded(f"census for d={d} exceeds the default budget (d <= {DEFAULT_MAX_D}); use --allow-large (allow_large=True)")
    if mubs is None:
        mubs = mubs_for(d)
    if net is None:
        net = mubs.net
    if net is None or net.d != d or mubs.d != d:
        raise ValueError("mubs and net must both have dimension d")
    if not net.complete or len(mubs.bases) != net.n_rows:
        raise ValueError("census needs a complete net and one basis per row")
    backend = backend or BACKEND
    if backend not in available_backends():
        raise RuntimeError(f"backend {backend!r} unavailable")
    threads = threads or default_threads()

    t0 = time.perf_counter()
    a_ops = phase_point_operators(mubs, net)
    n = d * d
    window = eps * WINDOW_FACTOR
    firsts = list(range(n - d + 1))

    if backend == "compiled":
        g, r = trace_tables(a_ops)

        def run(first):
            cap = 4096
            while True:
                leaves, cand, overflow = _kernel.scan_chunk(g, r, d, first, window, cap)
                if not overflow:
                    return leaves, [tuple(int(x) for x in row) for row in cand]
                cap = overflow
    else:

        def run(first):
            return _fallback.scan_chunk(a_ops, d, first, window)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, firsts))
    else:
        parts = [run(f) for f in firsts]

    leaves = sum(p[0] for p in parts)
    expected = count_epistemic(d)
    if leaves != expected:  # pragma: no cover - enumeration invariant
        raise AssertionError(f"scanned {leaves} subsets, expected {expected}")

    quantum: list[tuple[int, ...]] = []
    audited = 0
    n_cand = 0
    for _, cands in parts:
        for combo in cands:
            n_cand += 1
            ok, was_audited = _confirm(a_ops, combo, d, eps, audit)
            audited += was_audited
            if ok:
                quantum.append(combo)
    mixed = count_mixed_psd(a_ops, d, eps) if report_mixed else None
    elapsed = time.perf_counter() - t0
    return CensusResult(
        d, expected, len(quantum), elapsed, len(firsts), backend, threads, mixed, audited, n_cand,
        quantum if keep_states else [],
    )
