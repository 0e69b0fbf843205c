import itertools
from fractions import Fraction

import numpy as np
import pytest

from olsmub.hvm import census as census_mod
from olsmub.hvm.census import (
    BudgetExceeded,
    available_backends,
    census,
    phase_point_operators,
    trace_tables,
)
from olsmub.hvm.states import EpistemicState, classify_quantum, reconstruct_operator
from olsmub.qmub.bases import mubs_for

EXPECTED = {2: (6, 6), 3: (84, 12), 4: (1820, 32), 5: (53130, 30)}


def brute_force_q(d):
    m = mubs_for(d)
    return sum(
        classify_quantum(reconstruct_operator(EpistemicState(d, c), m, m.net)).quantum
        for c in itertools.combinations(range(d * d), d)
    )


@pytest.mark.parametrize("d", [2, 3, 4])
def test_brute_force_oracle(d):
    assert brute_force_q(d) == EXPECTED[d][1]


@pytest.mark.parametrize("backend", available_backends())
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_census_counts(d, backend):
    r = census(d, backend=backend)
    assert (r.E, r.Q) == EXPECTED[d]


def test_ratios():
    assert census(3).ratio == Fraction(1, 7)
    assert census(4).ratio == Fraction(8, 455)
    assert census(5).ratio == Fraction(1, 1771)


@pytest.mark.parametrize("backend", available_backends())
def test_thread_count_does_not_change_result(backend):
    one = census(4, backend=backend, threads=1, keep_states=True)
    many = census(4, backend=backend, threads=4, keep_states=True)
    assert (one.Q, one.E) == (many.Q, many.E)
    assert sorted(one.quantum_states) == sorted(many.quantum_states)


def test_backends_find_same_states():
    states = {b: sorted(census(5, backend=b, keep_states=True).quantum_states) for b in available_backends()}
    assert len({tuple(v) for v in states.values()}) == 1


@pytest.mark.parametrize("d", [3, 4, 5])
def test_net_cells_among_quantum_states(d):
    r = census(d, keep_states=True)
    cells = {tuple(c) for row in mubs_for(d).net.rows for c in row}
    assert cells <= set(r.quantum_states)
    assert r.Q >= d * (d + 1)


def test_compiled_backend_built():
    assert "compiled" in available_backends(), "the compiled census kernel did not build"


def test_kernel_matches_direct_traces():
    if "compiled" not in available_backends():
        pytest.skip("compiled kernel unavailable")
    from olsmub.hvm import _kernel

    d = 3
    m = mubs_for(d)
    a = phase_point_operators(m, m.net)
    g, r = trace_tables(a)
    # a window of 10 accepts every subset, exposing all leaves
    leaves, cand, overflow = _kernel.scan_chunk(g, r, d, 0, 10.0, 10_000)
    assert leaves == len(cand) == 28 and overflow == 0
    assert [tuple(c) for c in cand] == list(itertools.combinations(range(d * d), d))[:28]
    _, small, overflow = _kernel.scan_chunk(g, r, d, 0, 10.0, 5)
    assert overflow == 28 and len(small) == 5


def test_trace_tables_symmetry():
    m = mubs_for(3)
    g, r = trace_tables(phase_point_operators(m, m.net))
    assert np.allclose(g, g.T)
    assert np.allclose(r, r.transpose(1, 2, 0)) and np.allclose(r, r.transpose(1, 0, 2))


def test_phase_point_operators_sum():
    d = 3
    m = mubs_for(d)
    a = phase_point_operators(m, m.net)
    assert np.allclose(a.sum(axis=0), d * np.eye(d))
    assert np.allclose([np.trace(x) for x in a], 1)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        census(7)


def test_report_mixed_and_audit():
    r = census(3, report_mixed=True, audit=True)
    assert r.mixed == 0 and r.Q == 12
    assert r.as_dict()["mixed_psd"] == 0


def test_result_json():
    out = census(2).as_dict()
    assert out["ratio"] == "1/1" and out["E"] == 6 and "elapsed_ms" in out


def test_backend_env_override(monkeypatch):
    monkeypatch.setenv("OLSMUB_BACKEND", "python")
    assert census_mod.default_backend() == "python"
    monkeypatch.setenv("OLSMUB_BACKEND", "nonexistent")
    with pytest.raises(RuntimeError):
        census_mod.default_backend()


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("OLSMUB_THREADS", "3")
    assert census_mod.default_threads() == 3
    monkeypatch.setenv("OLSMUB_THREADS", "x")
    assert census_mod.default_threads() == 1


@pytest.mark.slow
def test_d7_census_with_threads():
    r = census(7, threads=4, allow_large=True)
    assert r.E == 85900584 and r.Q >= 7 * 8


def test_import_falls_back_without_kernel():
    code = (
        "import sys; sys.modules['olsmub.hvm._kernel'] = None\n"
        "from olsmub.hvm.census import available_backends, census, BACKEND\n"
        "assert available_backends() == ['python'] and BACKEND == 'python'\n"
        "assert census(3).Q == 12\n"
    )
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
