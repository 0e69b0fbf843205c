"""Latin squares, orthogonality, complete OLS sets and orthogonal-mate search.

Square orientation: a generated square for slope ``a`` stores ``n = a*m + b``
at ``grid[b, m]``, so each square row is one answer ``b`` and its positions run
over ``m``.  This is the orientation under which the five-step net construction
in :mod:`olsmub.nets` writes the pair ``(m, n)`` as label ``m*d + n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .gfield import FieldSpec, factorize, is_prime, prime_power


class InvalidSquare(ValueError):
    pass


class NotPrime(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Mate search ran past its node budget. ``stats`` holds partial counts."""

    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats


class Square:
    """A d x d array over the symbols 0..d-1 (not necessarily Latin)."""

    __slots__ = ("grid",)

    def __init__(self, grid):
        g = np.array(grid, dtype=np.int64)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise InvalidSquare(f"expected a non-empty square array, got shape {g.shape}")
        d = g.shape[0]
        if g.min() < 0 or g.max() >= d:
            raise InvalidSquare(f"entries must lie in 0..{d - 1}")
        g.setflags(write=False)
        self.grid = g

    @property
    def order(self) -> int:
        return self.grid.shape[0]

    def __eq__(self, other):
        return isinstance(other, Square) and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash(self.grid.tobytes())

    def __repr__(self):
        return f"Square({self.grid.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.grid.tolist()

    def text(self) -> str:
        w = len(str(self.order - 1))
        return "\n".join(" ".join(f"{x:>{w}}" for x in row) for row in self.grid)


def is_latin(s: Square | Sequence[Sequence[int]]) -> bool:
    s = s if isinstance(s, Square) else Square(s)
    full = np.arange(s.order)
    g = s.grid
    return bool((np.sort(g, axis=1) == full).all() and (np.sort(g, axis=0) == full[:, None]).all())


def are_orthogonal(a: Square, b: Square) -> bool:
    if a.order != b.order:
        raise InvalidSquare(f"order mismatch: {a.order} vs {b.order}")
    d = a.order
    pairs = a.grid * d + b.grid
    return len(np.unique(pairs)) == d * d


def coordinate_squares(d: int) -> tuple[Square, Square]:
    """The two orthogonal non-Latin squares ``A_ij = j`` and ``A_ij = i``."""
    idx = np.arange(d)
    return Square(np.tile(idx, (d, 1))), Square(np.tile(idx[:, None], (1, d)))


@dataclass
class OlsSet:
    """Mutually orthogonal Latin squares of one order.

    ``slopes`` records, per square, the multiplier ``a`` of the generating
    rule ``n = a*m + b`` when known (None for squares from other sources).
    ``field`` is set for prime-power constructions.
    """

    order: int
    squares: list[Square]
    certified: bool = False
    slopes: list[int | None] = field(default_factory=list)
    field: FieldSpec | None = None

    def __post_init__(self):
        if not self.slopes:
            self.slopes = [None] * len(self.squares)
        if len(self.slopes) != len(self.squares):
            raise ValueError("one slope tag per square required")

    def __len__(self):
        return len(self.squares)


def certify(squares: Iterable[Square], **tags) -> OlsSet:
    """Check Latinness and all pairwise orthogonality; return a certified set."""
    squares = list(squares)
    if not squares:
        raise InvalidSquare("empty square set")
    d = squares[0].order
    for s in squares:
        if s.order != d:
            raise InvalidSquare("squares of different orders")
        if not is_latin(s):
            raise InvalidSquare(f"not a Latin square:\n{s.text()}")
    for i in range(len(squares)):
        for j in range(i + 1, len(squares)):
            if not are_orthogonal(squares[i], squares[j]):
                raise InvalidSquare(f"squares {i} and {j} are not orthogonal")
    if len(squares) > max(d - 1, 1):
        raise InvalidSquare(f"{len(squares)} squares exceed the maximum d-1 = {d - 1}")
    return OlsSet(d, squares, True, **tags)


def generate_ols_prime(d: int) -> OlsSet:
    """Complete set ``n = a*m + b (mod d)`` for a = 1..d-1."""
    if not is_prime(d):
        raise NotPrime(f"{d} is not prime")
    b = np.arange(d)[:, None]
    m = np.arange(d)[None, :]
    squares = [Square((a * m + b) % d) for a in range(1, d)]
    return certify(squares, slopes=list(range(1, d)))


def generate_ols_prime_power(spec: FieldSpec) -> OlsSet:
    """Complete set ``n = a*m + b`` with field arithmetic, a ranging over nonzero elements."""
    d = spec.d
    A, M = spec.add_table, spec.mul_table
    squares = []
    for a in range(1, d):
        grid = np.empty((d, d), dtype=np.int64)
        for b in range(d):
            grid[b] = A[M[a, np.arange(d)], b]
        squares.append(Square(grid))
    return certify(squares, slopes=list(range(1, d)), field=spec)


def generate_ols(d: int, spec: FieldSpec | None = None) -> OlsSet:
    if spec is not None:
        if spec.d != d:
            raise ValueError(f"field order {spec.d} does not match d={d}")
        return generate_ols_prime_power(spec)
    if is_prime(d):
        return generate_ols_prime(d)
    if prime_power(d):
        return generate_ols_prime_power(FieldSpec.of_order(d))
    return macneish_ols(d)


def is_standard(s: Square) -> bool:
    return bool((s.grid[:, 0] == np.arange(s.order)).all())


def standardize(ols: OlsSet) -> OlsSet:
    """Relabel symbols of each square so that its first column reads 0..d-1."""
    out = []
    for s in ols.squares:
        relabel = np.empty(s.order, dtype=np.int64)
        relabel[s.grid[:, 0]] = np.arange(s.order)
        out.append(Square(relabel[s.grid]))
    return certify(out, slopes=list(ols.slopes), field=ols.field)


def macneish_product(a: Square, b: Square) -> Square:
    """Direct product: entry at ((i,k),(j,l)) is ``a_ij * d2 + b_kl``, rows indexed i*d2 + k."""
    d1, d2 = a.order, b.order
    g = a.grid[:, None, :, None] * d2 + b.grid[None, :, None, :]
    return Square(g.reshape(d1 * d2, d1 * d2))


def macneish_bound(d: int) -> int:
    """``min_i(p_i^r_i) - 1`` over the prime-power factors of d."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return min(p**r for p, r in factorize(d).items()) - 1


def macneish_ols(d: int) -> OlsSet:
    """OLSs of order d from direct products of complete prime-power sets."""
    bound = macneish_bound(d)
    factor_sets = [generate_ols(p**r).squares for p, r in sorted(factorize(d).items())]
    squares = []
    for k in range(bound):
        sq = factor_sets[0][k]
        for fs in factor_sets[1:]:
            sq = macneish_product(sq, fs[k])
        squares.append(sq)
    return certify(squares)


# ---------------------------------------------------------------------------
# orthogonal mate search


@dataclass
class MateSearch:
    """Outcome of :func:`find_orthogonal_mate`. ``mate`` is None when no mate exists."""

    square: Square
    mate: Square | None
    transversal_count: int
    nodes: int

    @property
    def found(self) -> bool:
        return self.mate is not None


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0

    def tick(self, stats):
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceeded(f"mate search exceeded {self.limit} nodes", stats())


def transversals(s: Square, budget: int | None = None) -> list[tuple[int, ...]]:
    """All transversals as tuples ``cols`` where cell (i, cols[i]) is chosen in row i."""
    found: list[tuple[int, ...]] = []
    _enumerate_transversals(s, found, _Budget(budget or math.inf), lambda: {})
    return found


def _enumerate_transversals(s: Square, found: list, budget: _Budget, stats) -> None:
    d = s.order
    g = s.grid.tolist()
    cols: list[int] = []
    used_col = [False] * d
    used_sym = [False] * d

    def dfs(i):
        budget.tick(stats)
        if i == d:
            found.append(tuple(cols))
            return
        row = g[i]
        for j in range(d):
            if not used_col[j] and not used_sym[row[j]]:
                used_col[j] = used_sym[row[j]] = True
                cols.append(j)
                dfs(i + 1)
                cols.pop()
                used_col[j] = used_sym[row[j]] = False

    dfs(0)


def find_orthogonal_mate(s: Square, budget: int = 10**7) -> MateSearch:
    """Search for a Latin square orthogonal to ``s``.

    Enumerates every transversal, then looks for d pairwise disjoint ones with
    an exact-cover search (column with fewest candidates first, ties to the
    lowest cell index). Transversal k receives symbol k in the mate. A result
    with ``mate=None`` is exhaustive.
    """
    if not is_latin(s):
        raise InvalidSquare("mate search needs a Latin square")
    d = s.order
    if d > 10:
        raise ValueError("mate search is limited to order <= 10")
    tick = _Budget(budget)
    trans: list[tuple[int, ...]] = []

    def stats():
        return {"transversals": len(trans), "nodes": tick.nodes}

    _enumerate_transversals(s, trans, tick, stats)

    # exact cover: universe = d*d cells, subsets = transversals
    covers: dict[int, set[int]] = {c: set() for c in range(d * d)}
    cells_of = []
    for t_idx, cols in enumerate(trans):
        cells = [i * d + j for i, j in enumerate(cols)]
        cells_of.append(cells)
        for c in cells:
            covers[c].add(t_idx)

    chosen: list[int] = []

    def select(t_idx):
        removed = []
        for c in cells_of[t_idx]:
            for other in covers[c]:
                for c2 in cells_of[other]:
                    if c2 != c:
                        covers[c2].discard(other)
            removed.append((c, covers.pop(c)))
        return removed

    def deselect(t_idx, removed):
        for c, rows in reversed(removed):
            covers[c] = rows
            for other in rows:
                for c2 in cells_of[other]:
                    if c2 != c:
                        covers[c2].add(other)

    def search():
        tick.tick(stats)
        if not covers:
            return True
        c = min(covers, key=lambda k: (len(covers[k]), k))
        for t_idx in sorted(covers[c]):
            chosen.append(t_idx)
            removed = select(t_idx)
            if search():
                return True
            deselect(t_idx, removed)
            chosen.pop()
        return False

    mate = None
    if trans and search():
        grid = np.empty((d, d), dtype=np.int64)
        for sym, t_idx in enumerate(chosen):
            for i, j in enumerate(trans[t_idx]):
                grid[i, j] = sym
        mate = Square(grid)
    return MateSearch(s, mate, len(trans), tick.nodes)


# ---------------------------------------------------------------------------
# square files: first line d, then d whitespace-separated rows


def parse_square(text: str) -> Square:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InvalidSquare("empty square file")
    try:
        d = int(lines[0][0])
        rows = [[int(x) for x in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise InvalidSquare(f"non-integer entry: {exc}") from None
    if len(rows) != d or any(len(r) != d for r in rows):
        raise InvalidSquare(f"expected {d} rows of {d} entries")
    return Square(rows)


def read_square(path: str | Path) -> Square:
    return parse_square(Path(path).read_text())


def format_square_file(s: Square) -> str:
    return f"{s.order}\n{s.text()}\n"
