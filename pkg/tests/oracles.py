"""Independent reference computations used by the property and acceptance tests."""

from __future__ import annotations

import itertools

import numpy as np

from dimgroup.disconnection import ClopenInterval, XPoint

ORACLE_DEPTH = 12


def preimage_sum(m, f, p, n):
    """Sum of ``f`` over the n-fold preimages of the doubled point ``p``."""
    if n == 0:
        return f(p)
    total = 0
    for i, b in enumerate(m.branches):
        lo, hi = m.branch_image(i)
        if ClopenInterval(lo, hi).contains(p):
            side = p.side if b.increasing else p.side.flip()
            total += preimage_sum(m, f, XPoint(b.inverse(p.coordinate), side), n - 1)
    return total


def zero_one_matrices(n):
    """All n x n zero-one matrices without a zero row."""
    rows = [r for r in itertools.product((0, 1), repeat=n) if any(r)]
    return [tuple(m) for m in itertools.product(rows, repeat=n)]


def powers(a, count=ORACLE_DEPTH + 4):
    m = np.array(a, dtype=np.int64)
    out = [np.identity(len(a), dtype=np.int64)]
    for _ in range(count):
        out.append(out[-1] @ m)
    return np.stack(out)


def oracle_equal(pw, x, y):
    """Some common stage ``j <= ORACLE_DEPTH`` past both levels where the vectors agree."""
    (v, k), (w, l) = x, y
    span = ORACLE_DEPTH + 1
    left = np.array(v, dtype=np.int64) @ pw[l : l + span]
    right = np.array(w, dtype=np.int64) @ pw[k : k + span]
    return bool((left == right).all(axis=1).any())


def oracle_positive(pw, v):
    iterates = np.array(v, dtype=np.int64) @ pw[: ORACLE_DEPTH + 1]
    return bool((iterates >= 0).all(axis=1).any())
