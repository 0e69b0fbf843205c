"""Net designs built from OLS sets, their verification and column functions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .squares import OlsSet, Square, coordinate_squares, generate_ols, is_standard, standardize


class NetError(ValueError):
    pass


@dataclass(frozen=True)
class RowTag:
    """Provenance of a net row: a coordinate square or the square with a given slope."""

    kind: str  # "coord-m", "coord-n" or "square"
    slope: int | None = None
    field: bool = False


COORD_M = RowTag("coord-m")
COORD_N = RowTag("coord-n")


@dataclass(frozen=True)
class NetDesign:
    d: int
    rows: tuple[tuple[tuple[int, ...], ...], ...]
    row_tags: tuple[RowTag, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(tuple(sorted(int(x) for x in cell)) for cell in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not self.row_tags:
            object.__setattr__(self, "row_tags", tuple(RowTag("square") for _ in rows))
        if len(self.row_tags) != len(rows):
            raise NetError("one tag per row required")

    @classmethod
    def from_cells(cls, d: int, rows: Sequence[Sequence[Sequence[int]]], tags=()) -> "NetDesign":
        return cls(d, tuple(tuple(tuple(c) for c in r) for r in rows), tuple(tags))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def complete(self) -> bool:
        return self.n_rows == self.d + 1

    def cell_index(self) -> np.ndarray:
        """Array ``[row, label] -> cell`` holding the column of each label in each row."""
        out = np.full((self.n_rows, self.d * self.d), -1, dtype=np.int64)
        for r, row in enumerate(self.rows):
            for c, cell in enumerate(row):
                out[r, list(cell)] = c
        return out

    def as_lists(self) -> list[list[list[int]]]:
        return [[list(cell) for cell in row] for row in self.rows]


def augment(ols: OlsSet) -> tuple[list[Square], list[RowTag]]:
    """Prepend the coordinate squares ``A_ij = j`` and ``A_ij = i``."""
    a_j, a_i = coordinate_squares(ols.order)
    tags = [COORD_M, COORD_N] + [RowTag("square", s, ols.field is not None) for s in ols.slopes]
    return [a_j, a_i] + list(ols.squares), tags


def net_from_ols(ols: OlsSet) -> NetDesign:
    """Net construction from a standardized, certified OLS set.

    Square rows become cells of one table row. The row from ``A_ij = j``
    is relabelled ``A_ij -> i*d + j``; every other entry ``B_ij`` at
    position j of cell i becomes ``j*d + B_ij``.
    """
    if not ols.certified:
        raise NetError("OLS set is not certified")
    if not all(is_standard(s) for s in ols.squares):
        raise NetError("OLS set is not in standard form; call standardize() first")
    d = ols.order
    squares, tags = augment(ols)
    j = np.arange(d)
    rows = [[tuple(i * d + j) for i in range(d)]]
    for sq in squares[1:]:
        rows.append([tuple(j * d + sq.grid[i]) for i in range(d)])
    return NetDesign.from_cells(d, rows, tags)


def net_for(d: int, spec=None) -> NetDesign:
    """Generate, standardize and convert the default OLS set of order d."""
    return net_from_ols(standardize(generate_ols(d, spec)))


@dataclass(frozen=True)
class NetCheck:
    ok: bool
    witness: tuple | None = None  # (row, cell, row', cell', pair)
    reason: str = ""

    def __bool__(self):
        return self.ok


def _check_partition(net: NetDesign) -> NetCheck | None:
    d = net.d
    full = set(range(d * d))
    for r, row in enumerate(net.rows):
        if len(row) != d or any(len(cell) != d for cell in row):
            return NetCheck(False, (r, None, None, None, None), f"row {r} is not d cells of d labels")
        seen = [x for cell in row for x in cell]
        if set(seen) != full or len(seen) != d * d:
            return NetCheck(False, (r, None, None, None, None), f"row {r} does not partition 0..{d * d - 1}")
    return None


def verify_net(net: NetDesign) -> NetCheck:
    """Check the net property in both of its equivalent forms.

    Form 1: no two labels share a cell in two different rows.
    Form 2: cells from different rows meet in exactly one label.
    The first violation in row-major scan order is reported.
    """
    bad = _check_partition(net)
    if bad is not None:
        return bad
    if net.n_rows > net.d + 1:
        return NetCheck(False, None, f"{net.n_rows} rows exceed d+1")

    first = None
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    for r, row in enumerate(net.rows):
        for c, cell in enumerate(row):
            for pair in itertools.combinations(cell, 2):
                if pair in owner:
                    r0, c0 = owner[pair]
                    first = (r0, c0, r, c, pair)
                    break
                owner[pair] = (r, c)
            if first:
                break
        if first:
            break

    second = None
    sets = [[set(cell) for cell in row] for row in net.rows]
    for r, r2 in itertools.combinations(range(net.n_rows), 2):
        for c, c2 in itertools.product(range(net.d), repeat=2):
            common = sets[r][c] & sets[r2][c2]
            if len(common) != 1:
                second = (r, c, r2, c2, tuple(sorted(common))[:2] or None)
                break
        if second:
            break

    if (first is None) != (second is None):  # pragma: no cover - equivalent for partitions
        raise AssertionError(f"net property forms disagree: {first} vs {second}")
    if first is None:
        return NetCheck(True)
    return NetCheck(False, first, "labels %s share cell %d of row %d and cell %d of row %d" % (first[4], first[1], first[0], first[3], first[2]))


@dataclass(frozen=True)
class ColumnFunction:
    row: int
    table: np.ndarray  # table[m, n] = column of row containing label m*d + n

    def __call__(self, m: int, n: int) -> int:
        return int(self.table[m, n])


def column_function(net: NetDesign, a: int) -> ColumnFunction:
    d = net.d
    idx = net.cell_index()[a]
    if (idx < 0).any():
        raise NetError(f"row {a} does not cover every label")
    table = idx.reshape(d, d)
    table.setflags(write=False)
    counts = np.bincount(table.ravel(), minlength=d)
    if not (counts == d).all():
        raise NetError(f"level sets of row {a} have sizes {counts.tolist()}")
    return ColumnFunction(a, table)


def functions_orthogonal(f: ColumnFunction, g: ColumnFunction) -> bool:
    """On every level set of f, g takes each value exactly once."""
    d = f.table.shape[0]
    for v in range(d):
        vals = g.table[f.table == v]
        if sorted(vals.tolist()) != list(range(d)):
            return False
    return True


def reassemble_squares(net: NetDesign) -> list[Square]:
    """Invert the relabelling: recover the Latin squares from the non-coordinate rows."""
    d = net.d
    out = []
    for row, tag in zip(net.rows, net.row_tags):
        if tag.kind != "square":
            continue
        grid = np.empty((d, d), dtype=np.int64)
        for i, cell in enumerate(row):
            for label in cell:
                j, b = divmod(label, d)
                grid[i, j] = b
        out.append(Square(grid))
    return out


def _slope_text(tag: RowTag) -> str:
    if tag.slope == 1:
        return "m"
    return f"{tag.slope}⊙m" if tag.field else f"{tag.slope}m"


def render_questions(net: NetDesign) -> list[str]:
    out = []
    for k, tag in enumerate(net.row_tags):
        if tag.kind == "coord-m":
            out.append("m = b?")
        elif tag.kind == "coord-n":
            out.append("n = b?")
        elif tag.slope is None:
            out.append(f"row {k}: b?")
        elif net.d == 2:
            out.append("m + n = b?")
        elif tag.field:
            out.append(f"n = {_slope_text(tag)} ⊕ b?")
        else:
            out.append(f"n = {_slope_text(tag)} + b?")
    return out


def label_text(label: int, d: int) -> str:
    m, n = divmod(label, d)
    return f"{m}{n}" if d <= 10 else f"{m}.{n}"


def render_text(net: NetDesign) -> str:
    """Aligned table: cells separated by '|', one question per row."""
    d = net.d
    width = len(label_text(d * d - 1, d))
    cell_w = d * (width + 1) - 1
    header = " | ".join(f"b={b}".center(cell_w) for b in range(d))
    rule = "=" * len(header)
    lines = [header, rule]
    for row, q in zip(net.rows, render_questions(net)):
        body = " | ".join(" ".join(label_text(x, d).rjust(width) for x in cell) for cell in row)
        lines.append(f"{body}   {q}")
    lines.append(rule)
    return "\n".join(lines)


def net_to_json(net: NetDesign) -> dict:
    return {"d": net.d, "rows": net.as_lists(), "questions": render_questions(net)}
