"""End-to-end checks of the reference tables and counts, keyed by what they check."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import reference_nets as ref
from .gfield import FieldBasisPair, FieldSpec, dual_basis
from .hvm.census import census
from .hvm.states import EpistemicState, classify_quantum, reconstruct_operator
from .nets import NetDesign, net_for, verify_net
from .qmub.bases import mubs_for, mubs_from_net, mubs_macneish
from .qmub.operators import coincidences, latin_operator, tuples_from_net, verify_shifting
from .squares import Square, find_orthogonal_mate, is_latin, are_orthogonal

TOL = 1e-10


@dataclass
class CheckResult:
    key: str
    ok: bool
    detail: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.key:<18} {self.elapsed * 1000:9.1f} ms  {self.detail}"


def field_axioms_hold(spec: FieldSpec) -> bool:
    d = spec.d
    a, m = spec.add_table, spec.mul_table
    if not ((a == a.T).all() and (m == m.T).all()):
        return False
    if not ((a[:, 0] == np.arange(d)).all() and (m[:, 1] == np.arange(d)).all()):
        return False
    for x, y, z in itertools.product(range(d), repeat=3):
        if a[a[x, y], z] != a[x, a[y, z]] or m[m[x, y], z] != m[x, m[y, z]]:
            return False
        if m[x, a[y, z]] != a[m[x, y], m[x, z]]:
            return False
    return all(a[x, spec.neg(x)] == 0 for x in range(d)) and all(m[x, spec.inv(x)] == 1 for x in range(1, d))


def bilinear_identity_holds(pair: FieldBasisPair) -> bool:
    """``tr(m n) = sum_i m_i n_i (mod p)`` for every pair of field elements."""
    spec = pair.spec
    for x, y in itertools.product(range(spec.d), repeat=2):
        lhs = spec.trace(spec.mul(x, y))
        rhs = sum(u * v for u, v in zip(pair.decompose_m(x), pair.decompose_n(y))) % spec.p
        if lhs != rhs:
            return False
    return True


def bit_table(net: NetDesign, pair: FieldBasisPair) -> list[tuple[str, str]]:
    """Write each label mn as stacked bit pairs: (m1 n1) above (m2 n2)."""
    d = net.d
    out = []
    for row in net.rows:
        upper, lower = [], []
        for cell in row:
            u, lo = [], []
            for label in cell:
                m, n = divmod(label, d)
                mv, nv = pair.decompose_m(m), pair.decompose_n(n)
                u.append(f"{mv[0]}{nv[0]}")
                lo.append(f"{mv[1]}{nv[1]}")
            upper.append(" ".join(u))
            lower.append(" ".join(lo))
        out.append((" | ".join(upper), " | ".join(lower)))
    return out


def _timed(key: str, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(key, bool(ok), detail, time.perf_counter() - t0)


def check_net(d: int, table) -> tuple[bool, dict]:
    net = net_for(d)
    same = [list(r) for r in net.rows] == ref.labels(table, d)
    return same and bool(verify_net(net)), {"rows": net.n_rows, "matches_table": same}


def check_net_d4(pair: FieldBasisPair | None = None) -> tuple[bool, dict]:
    ok, detail = check_net(4, ref.NET_D4)
    pair = pair or dual_basis(FieldSpec.of_order(4))
    bits = bit_table(net_for(4), pair) == ref.NET_D4_BITS
    detail["bit_table_matches"] = bits
    return ok and bits, detail


def check_incomplete_net() -> tuple[bool, dict]:
    net = NetDesign.from_cells(4, ref.labels(ref.NET_D4_INCOMPLETE, 4))
    valid = bool(verify_net(net))
    mubs = mubs_from_net(net)
    cert = mubs.certificate
    return valid and net.n_rows == 3 and cert.certified, {"rows": net.n_rows, "bases": len(mubs), "max_dev": cert.max_overlap_deviation}


def check_mub_sets() -> tuple[bool, dict]:
    worst, ok = 0.0, True
    for d in (2, 3, 4, 5, 7, 8, 9):
        m = mubs_for(d)
        c = m.certificate
        worst = max(worst, c.max_overlap_deviation, c.max_gram_deviation)
        ok &= len(m) == d + 1 and c.max_overlap_deviation < TOL and c.max_gram_deviation < TOL
    return ok, {"max_deviation": worst}


CENSUS_EXPECTED = {2: (6, 6), 3: (84, 12), 4: (1820, 32), 5: (53130, 30)}


def check_census(threads: int = 1) -> tuple[bool, dict]:
    got = {}
    for d, want in CENSUS_EXPECTED.items():
        r = census(d, threads=threads)
        got[d] = f"{r.Q}/{r.E} -> {r.ratio}"
        if (r.E, r.Q) != want:
            return False, got
    return True, got


def check_projectors() -> tuple[bool, dict]:
    worst, ok = 0.0, True
    for d in (2, 3, 4, 5):
        m = mubs_for(d)
        net = m.net
        for r, row in enumerate(net.rows):
            for j, cell in enumerate(row):
                op = reconstruct_operator(EpistemicState(d, cell), m, net)
                worst = max(worst, float(np.abs(op.matrix - m.projector(r, j)).max()))
                ok &= classify_quantum(op).quantum
    return ok and worst < 1e-9, {"max_deviation": worst}


def check_latin_operator(pairs: int = 1000, seed: int = 7) -> tuple[bool, dict]:
    rng = np.random.default_rng(seed)
    worst_law, worst_net, ok = 0.0, 0.0, True
    for d in (2, 3, 4, 5):
        m = mubs_for(d)
        for _ in range(pairs):
            t1, t2 = rng.integers(0, d, d + 1), rng.integers(0, d, d + 1)
            b1, b2 = latin_operator(m, t1), latin_operator(m, t2)
            err = abs(np.trace(b1.conj().T @ b2) - d * d * (coincidences(t1, t2) - 1))
            worst_law = max(worst_law, err / d**3)
        bs = [latin_operator(m, t) for t in tuples_from_net(m.net)]
        for a, b in itertools.combinations(bs, 2):
            worst_net = max(worst_net, abs(np.trace(a.conj().T @ b)) / d**2)
    ok = worst_law < 1e-8 and worst_net < 1e-8
    return ok, {"law_rel_err": worst_law, "net_rel_trace": worst_net, "seed": seed}


def check_shifting() -> tuple[bool, dict]:
    worst, ok = 0.0, True
    for d in (2, 3, 5, 7):
        m = mubs_for(d)
        rep = verify_shifting(m.net, m)
        worst = max(worst, rep.max_deviation)
        ok &= rep.matches_net and rep.max_deviation < TOL
    return ok, {"max_deviation": worst}


def check_macneish() -> tuple[bool, dict]:
    m6, m12 = mubs_macneish(6), mubs_macneish(12)
    ok = all(
        c.max_overlap_deviation < TOL and c.max_gram_deviation < TOL for c in (m6.certificate, m12.certificate)
    )
    return ok and len(m6) == 3 and len(m12) == 4, {"d6": len(m6), "d12": len(m12)}


def check_mate_search() -> tuple[bool, dict]:
    z6 = Square([[(i + j) % 6 for j in range(6)] for i in range(6)])
    z3 = Square([[(i + j) % 3 for j in range(3)] for i in range(3)])
    r6, r3 = find_orthogonal_mate(z6), find_orthogonal_mate(z3)
    ok = not r6.found and r6.transversal_count == 0 and r3.found and is_latin(r3.mate) and are_orthogonal(z3, r3.mate)
    return ok, {"z6_transversals": r6.transversal_count, "z3_mate": r3.mate.tolist() if r3.found else None}


def check_field() -> tuple[bool, dict]:
    specs = [FieldSpec.of_order(q) for q in (4, 8, 9)]
    axioms = all(field_axioms_hold(s) for s in specs)
    gf4 = dual_basis(specs[0], (2, 1)).dual == (1, 3)
    bilinear = all(bilinear_identity_holds(dual_basis(s)) for s in specs)
    return axioms and gf4 and bilinear, {"axioms": axioms, "gf4_dual": gf4, "bilinear": bilinear}


def registry(threads: int = 1, pair: FieldBasisPair | None = None) -> dict[str, Callable[[], tuple[bool, dict]]]:
    return {
        "net-d2": lambda: check_net(2, ref.NET_D2),
        "net-d3": lambda: check_net(3, ref.NET_D3),
        "net-d4": lambda: check_net_d4(pair),
        "incomplete-net-d4": check_incomplete_net,
        "mub-sets": check_mub_sets,
        "census": lambda: check_census(threads),
        "projectors": check_projectors,
        "latin-operator": check_latin_operator,
        "shifting": check_shifting,
        "macneish": check_macneish,
        "mate-search": check_mate_search,
        "field": check_field,
    }


def run_all(only: list[str] | None = None, threads: int = 1, pair: FieldBasisPair | None = None) -> list[CheckResult]:
    checks = registry(threads, pair)
    if only:
        unknown = [k for k in only if k not in checks]
        if unknown:
            raise KeyError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(checks)}")
        checks = {k: checks[k] for k in only}
    return [_timed(k, fn) for k, fn in checks.items()]
