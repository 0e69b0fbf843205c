"""Pure numpy census backend: batched traces over blocks of combinations."""
from __future__ import annotations

import itertools

import numpy as np

BLOCK = 20000


def scan_chunk(a_ops: np.ndarray, d: int, first: int, window: float, prefix: tuple[int, ...] = ()):
    """Scan every d-subset whose smallest elements are ``(first,) + prefix``.

    Returns ``(leaves, candidates)`` where candidates lists the subsets with
    ``|t2 - 1|`` and ``|t3 - 1|`` both within ``window``.
    """
    n = a_ops.shape[0]
    head = (first,) + tuple(prefix)
    rest = d - len(head)
    start = head[-1] + 1
    leaves = 0
    found: list[tuple[int, ...]] = []
    it = itertools.combinations(range(start, n), rest)
    head_sum = a_ops[list(head)].sum(axis=0)
    while True:
        block = list(itertools.islice(it, BLOCK))
        if not block:
            break
        idx = np.asarray(block, dtype=np.intp).reshape(len(block), rest)
        o = (head_sum + a_ops[idx].sum(axis=1)) / d
        o2 = o @ o
        t2 = np.trace(o2, axis1=1, axis2=2).real
        t3 = np.einsum("bij,bji->b", o2, o).real
        hit = np.nonzero((np.abs(t2 - 1) <= window) & (np.abs(t3 - 1) <= window))[0]
        found.extend(head + tuple(int(x) for x in idx[k]) for k in hit)
        leaves += len(block)
    return leaves, found
