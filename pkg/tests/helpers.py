"""Naive reference implementations used as test oracles."""

import itertools

import numpy as np

from centext.abelian import AbelianGroup


def add(A, x, y):
    return A.reduce([a + b for a, b in zip(x, y)])


def naive_first_violation(A, B, fn):
    """First failing normalisation pair or cocycle-identity triple, by loops."""
    elems = list(A.elements())
    zero = A.coords(0)
    for x in elems:
        for y in elems:
            if (x == zero or y == zero) and any(fn(x, y)):
                return ("normalization", (x, y))
    for x, y, z in itertools.product(elems, repeat=3):
        lhs = B.reduce([a + b for a, b in zip(fn(x, y), fn(add(A, x, y), z))])
        rhs = B.reduce([a + b for a, b in zip(fn(y, z), fn(x, add(A, y, z)))])
        if lhs != rhs:
            return ("cocycle identity", (x, y, z))
    return None


def table_fn(gamma):
    return lambda x, y: gamma.value(x, y)


def all_normalized_tables(A, B):
    """Every normalised table A×A → B (only for tiny groups)."""
    n = A.order
    cells = [(x, y) for x in range(1, n) for y in range(1, n)]
    belems = list(B.elements())
    for choice in itertools.product(belems, repeat=len(cells)):
        T = np.zeros((n, n, B.rank), dtype=np.int64)
        for (x, y), v in zip(cells, choice):
            T[x, y] = v
        yield T


def naive_coboundary_tables(A, B):
    """Set of all coboundary tables, by enumerating every cochain."""
    n = A.order
    out = set()
    belems = list(B.elements())
    for hv in itertools.product(belems, repeat=n - 1):
        h = [B.coords(0)] + list(hv)
        T = np.zeros((n, n, B.rank), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                s = int(A.add_table[x, y])
                T[x, y] = B.reduce([a + b - c for a, b, c in zip(h[x], h[y], h[s])])
        out.add(T.tobytes())
    return out


SMALL = [AbelianGroup(f) for f in [(2,), (3,), (4,), (2, 2)]]
