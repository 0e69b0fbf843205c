import itertools

import pytest

from olsmub import reference_nets as ref
from olsmub.squares import generate_ols, standardize, OlsSet, Square
from olsmub.nets import (
    NetDesign,
    NetError,
    column_function,
    functions_orthogonal,
    net_for,
    net_from_ols,
    net_to_json,
    reassemble_squares,
    render_questions,
    render_text,
    verify_net,
)


def as_rows(net):
    return [list(row) for row in net.rows]


@pytest.mark.parametrize(
    "d,table", [(2, ref.NET_D2), (3, ref.NET_D3), (4, ref.NET_D4)], ids=["d2", "d3", "d4"]
)
def test_net_reproduces_reference_table(d, table):
    assert as_rows(net_for(d)) == ref.labels(table, d)


def test_questions():
    assert render_questions(net_for(2)) == ref.QUESTIONS_D2
    assert render_questions(net_for(3)) == ref.QUESTIONS_D3
    assert render_questions(net_for(4))[2:] == ["n = m ⊕ b?", "n = 2⊙m ⊕ b?", "n = 3⊙m ⊕ b?"]


def test_single_row_question():
    net = NetDesign.from_cells(2, [[(0, 1), (2, 3)]])
    assert len(render_questions(net)) == 1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 7, 8, 9])
def test_generated_nets_valid(d):
    net = net_for(d)
    assert net.n_rows == d + 1
    assert verify_net(net)


def test_reference_tables_verify():
    assert verify_net(NetDesign.from_cells(3, ref.labels(ref.NET_D3, 3)))
    inc = NetDesign.from_cells(4, ref.labels(ref.NET_D4_INCOMPLETE, 4))
    assert inc.n_rows == 3 and verify_net(inc)


def test_corrupted_net_reports_witness():
    rows = ref.labels(ref.NET_D3, 3)
    # swap one label between two cells of the third row
    c0, c1 = list(rows[2][0]), list(rows[2][1])
    c0[1], c1[1] = c1[1], c0[1]
    rows[2][0], rows[2][1] = tuple(c0), tuple(c1)
    check = verify_net(NetDesign.from_cells(3, rows))
    assert not check
    r, c, r2, c2, pair = check.witness
    assert r != r2
    assert set(pair) <= set(NetDesign.from_cells(3, rows).rows[r][c])


def test_non_partition_rejected():
    rows = ref.labels(ref.NET_D2, 2)
    rows[1][0] = (0, 0)
    assert not verify_net(NetDesign.from_cells(2, rows))


def test_rejects_nonstandard_or_uncertified():
    ols = generate_ols(3)
    with pytest.raises(NetError):
        net_from_ols(OlsSet(3, ols.squares, certified=False))
    shifted = Square((ols.squares[0].grid + 1) % 3)
    with pytest.raises(NetError):
        net_from_ols(OlsSet(3, [shifted], certified=True))
    assert verify_net(net_from_ols(standardize(OlsSet(3, [shifted], certified=True))))


def test_column_function_coordinate_and_slopes():
    net2 = net_for(2)
    f = column_function(net2, 0)
    assert all(f(m, n) == m for m in range(2) for n in range(2))
    net3 = net_for(3)
    for row, a in [(2, 1), (3, 2)]:
        f = column_function(net3, row)
        assert all(f(m, n) == (n - a * m) % 3 for m in range(3) for n in range(3))


@pytest.mark.parametrize("d", [3, 4, 5, 8])
def test_column_functions_pairwise_orthogonal(d):
    net = net_for(d)
    fs = [column_function(net, a) for a in range(net.n_rows)]
    for f, g in itertools.permutations(fs, 2):
        assert functions_orthogonal(f, g)


@pytest.mark.parametrize("d", [3, 4, 5, 7, 9])
def test_reassembly_inverts_construction(d):
    ols = standardize(generate_ols(d))
    back = reassemble_squares(net_from_ols(ols))
    assert [s.tolist() for s in back] == [s.tolist() for s in ols.squares]


def test_text_rendering_d3():
    text = render_text(net_for(3))
    lines = text.splitlines()
    assert lines[2].startswith("00 01 02 | 10 11 12 | 20 21 22")
    assert lines[5].startswith("00 12 21 | 01 10 22 | 02 11 20") and lines[5].endswith("n = 2m + b?")


def test_json_shape():
    js = net_to_json(net_for(2))
    assert js == {"d": 2, "rows": [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]], "questions": ref.QUESTIONS_D2}


def test_d6_three_row_net():
    net = net_for(6)
    assert net.n_rows == 3 and verify_net(net)
