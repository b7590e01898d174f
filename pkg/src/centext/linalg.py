"""
Exact integer linear algebra.

Matrices are lists of lists of Python ints (arbitrary precision).  The
workhorse is a deterministic Smith normal form; congruence solving, integer
kernels and quotient-group types are all built on it.  A vectorised
column reduction over Z/p^k (numpy) handles the large cocycle systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm, prod
from typing import Optional, Sequence

import numpy as np

IntMatrix = list  # list[list[int]], row-major


def zeros(m: int, n: int) -> IntMatrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> IntMatrix:
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = 1
    return M


def as_matrix(M, ncols: Optional[int] = None) -> IntMatrix:
    rows = [[int(v) for v in row] for row in M]
    if ncols is not None:
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
    elif rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
    return rows


def shape(M: IntMatrix, ncols: Optional[int] = None) -> tuple[int, int]:
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    return m, n


def matmul(A: IntMatrix, B: IntMatrix, inner: Optional[int] = None) -> IntMatrix:
    m = len(A)
    k = len(A[0]) if m else (inner if inner is not None else len(B))
    n = len(B[0]) if B else 0
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    Oi[j] += a * Bt[j]
    return out


def matvec(A: IntMatrix, x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: IntMatrix, ncols: Optional[int] = None) -> IntMatrix:
    m, n = shape(A, ncols)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def determinant(A: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    """U·M·V = D with U, V unimodular.

    ``rhs`` holds any attached columns after the row operations, i.e. U·b.
    Matrices that were not requested are ``None``.
    """

    D: IntMatrix
    diagonal: list
    rank: int
    U: Optional[IntMatrix]
    V: Optional[IntMatrix]
    U_inv: Optional[IntMatrix]
    V_inv: Optional[IntMatrix]
    rhs: list


class _Reducer:
    def __init__(self, M, ncols, track_u, track_v, track_inv, rhs):
        self.a = [list(map(int, row)) for row in M]
        self.m = len(self.a)
        self.n = len(self.a[0]) if self.m else ncols
        self.U = identity(self.m) if track_u else None
        self.Ui = identity(self.m) if (track_u and track_inv) else None
        self.V = identity(self.n) if track_v else None
        self.Vi = identity(self.n) if (track_v and track_inv) else None
        # attached columns, stored as columns for cheap row operations
        self.rhs = [list(map(int, col)) for col in rhs]
        for col in self.rhs:
            if len(col) != self.m:
                raise ValueError("attached column has wrong length")

    # row_i += c * row_t
    def add_row(self, i, t, c):
        if not c:
            return
        ai, at = self.a[i], self.a[t]
        for j in range(self.n):
            if at[j]:
                ai[j] += c * at[j]
        if self.U is not None:
            ui, ut = self.U[i], self.U[t]
            for j in range(self.m):
                if ut[j]:
                    ui[j] += c * ut[j]
        if self.Ui is not None:
            # right-multiply by the inverse elementary matrix: col_t -= c col_i
            for row in self.Ui:
                if row[i]:
                    row[t] -= c * row[i]
        for col in self.rhs:
            if col[t]:
                col[i] += c * col[t]

    def swap_rows(self, i, t):
        if i == t:
            return
        self.a[i], self.a[t] = self.a[t], self.a[i]
        if self.U is not None:
            self.U[i], self.U[t] = self.U[t], self.U[i]
        if self.Ui is not None:
            for row in self.Ui:
                row[i], row[t] = row[t], row[i]
        for col in self.rhs:
            col[i], col[t] = col[t], col[i]

    def negate_row(self, i):
        self.a[i] = [-v for v in self.a[i]]
        if self.U is not None:
            self.U[i] = [-v for v in self.U[i]]
        if self.Ui is not None:
            for row in self.Ui:
                row[i] = -row[i]
        for col in self.rhs:
            col[i] = -col[i]

    # col_j += c * col_t
    def add_col(self, j, t, c):
        if not c:
            return
        for row in self.a:
            if row[t]:
                row[j] += c * row[t]
        if self.V is not None:
            for row in self.V:
                if row[t]:
                    row[j] += c * row[t]
        if self.Vi is not None:
            vt, vj = self.Vi[t], self.Vi[j]
            for k in range(self.n):
                if vj[k]:
                    vt[k] -= c * vj[k]

    def swap_cols(self, j, t):
        if j == t:
            return
        for row in self.a:
            row[j], row[t] = row[t], row[j]
        if self.V is not None:
            for row in self.V:
                row[j], row[t] = row[t], row[j]
        if self.Vi is not None:
            self.Vi[j], self.Vi[t] = self.Vi[t], self.Vi[j]

    def pivot(self, t):
        """Smallest nonzero |entry| in the trailing block, row-major tie-break."""
        best = None
        pos = None
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                v = row[j]
                if v:
                    av = abs(v)
                    if best is None or av < best:
                        best, pos = av, (i, j)
                        if av == 1:
                            return pos
        return pos

    def run(self):
        a = self.a
        t = 0
        while t < min(self.m, self.n):
            pos = self.pivot(t)
            if pos is None:
                break
            while True:
                i, j = pos
                self.swap_rows(t, i)
                self.swap_cols(t, j)
                p = a[t][t]
                clean = True
                for i in range(t + 1, self.m):
                    v = a[i][t]
                    if v:
                        self.add_row(i, t, -(v // p))
                        if a[i][t]:
                            clean = False
                for j in range(t + 1, self.n):
                    v = a[t][j]
                    if v:
                        self.add_col(j, t, -(v // p))
                        if a[t][j]:
                            clean = False
                if not clean:
                    pos = self.pivot(t)
                    continue
                # divisibility chain: fold an offending row into the pivot row
                bad = None
                for i in range(t + 1, self.m):
                    row = a[i]
                    for j in range(t + 1, self.n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self.add_row(t, bad, 1)
                pos = self.pivot(t)
            if a[t][t] < 0:
                self.negate_row(t)
            t += 1
        return t


def _smith(M, ncols=None, track_u=True, track_v=True, track_inv=False, rhs=()) -> SmithForm:
    red = _Reducer(M, ncols, track_u, track_v, track_inv, rhs)
    rank = red.run()
    diag = [red.a[i][i] for i in range(min(red.m, red.n))]
    return SmithForm(red.a, diag, rank, red.U, red.V, red.Ui, red.Vi, red.rhs)


def smith_normal_form(M, ncols: Optional[int] = None):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form.

    Pivoting is deterministic (smallest nonzero absolute value, first in
    row-major order), so repeated calls give identical transforms.
    ``ncols`` is only needed for matrices with zero rows.
    """
    sf = _smith(M, ncols)
    return sf.U, sf.D, sf.V


def smith_form(M, ncols=None, *, track_u=True, track_v=True, inverses=False, rhs=()) -> SmithForm:
    return _smith(M, ncols, track_u, track_v, inverses, rhs)


def invariant_factors(M, ncols: Optional[int] = None) -> list[int]:
    return _smith(M, ncols, False, False).diagonal


def is_smith_normal_form(D: IntMatrix) -> bool:
    m, n = shape(D)
    for i in range(m):
        for j in range(n):
            if i != j and D[i][j]:
                return False
    diag = [D[i][i] for i in range(min(m, n))]
    for i, d in enumerate(diag):
        if d < 0:
            return False
        if i + 1 < len(diag):
            nxt = diag[i + 1]
            if d == 0 and nxt != 0:
                return False
            if d and nxt % d:
                return False
    return True


# ---------------------------------------------------------------------------
# congruences


def _inv_mod(a: int, n: int) -> int:
    if n == 1:
        return 0
    return pow(a % n, -1, n)


def _solve_diagonal(sf: SmithForm, n: int, b_t: list, modulus: int) -> Optional[list]:
    """Solve D z ≡ b_t (mod modulus), free coordinates zero, return V z."""
    m = len(b_t)
    z = [0] * n
    for i in range(m):
        bi = b_t[i]
        d = sf.diagonal[i] if i < sf.rank else 0
        if d == 0:
            if (bi % modulus if modulus else bi) != 0:
                return None
            continue
        if modulus == 0:
            if bi % d:
                return None
            z[i] = bi // d
        else:
            g = gcd(d, modulus)
            if bi % g:
                return None
            mg = modulus // g
            z[i] = ((bi // g) * _inv_mod(d // g, mg)) % mg if mg > 1 else 0
    x = matvec(sf.V, z) if n else []
    if modulus:
        x = [v % modulus for v in x]
    return x


def solve_congruences(M, target_moduli: Sequence[int], b: Sequence[int],
                      ncols: Optional[int] = None) -> Optional[list]:
    """Find an integer vector x with M·x ≡ b (row i taken mod target_moduli[i]).

    A modulus of 0 means the row must hold exactly over Z.  Returns ``None``
    when no solution exists.  The returned solution is deterministic: the
    free Smith coordinates are set to zero and every determined coordinate
    takes its least nonnegative value; with all moduli positive the result
    is finally reduced into [0, lcm(moduli)).
    """
    M = [list(map(int, row)) for row in M]
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    moduli = [int(e) for e in target_moduli]
    b = [int(v) for v in b]
    if len(moduli) != m or len(b) != m:
        raise ValueError("dimension mismatch between M, moduli and b")
    if any(e < 0 for e in moduli):
        raise ValueError("moduli must be nonnegative")
    if m == 0:
        return [0] * n
    if all(e > 0 for e in moduli):
        N = lcm(*moduli)
        rows = [[v * (N // e) for v in row] for row, e in zip(M, moduli)]
        rhs = [v * (N // e) for v, e in zip(b, moduli)]
        if n == 0:
            return [] if all(v % N == 0 for v in rhs) else None
        sf = _smith(rows, n, track_u=False, rhs=[rhs])
        return _solve_diagonal(sf, n, sf.rhs[0], N)
    # mixed exact / modular rows: add a slack column per modular row
    extra = [i for i, e in enumerate(moduli) if e > 0]
    rows = [row + [moduli[i] if i == r else 0 for r in extra] for i, row in enumerate(M)]
    width = n + len(extra)
    if width == 0:
        return [] if all(v == 0 for v in b) else None
    sf = _smith(rows, width, track_u=False, rhs=[b])
    y = _solve_diagonal(sf, width, sf.rhs[0], 0)
    if y is None:
        return None
    return y[:n]


def count_solutions(M, modulus: int, ncols: Optional[int] = None) -> int:
    """Number of x in (Z/modulus)^n with M·x ≡ 0 (mod modulus)."""
    M = [list(map(int, row)) for row in M]
    n = len(M[0]) if M else (ncols or 0)
    if not M:
        return modulus ** n
    sf = _smith(M, n, track_u=False, track_v=False)
    count = 1
    for i in range(n):
        d = sf.diagonal[i] if i < sf.rank else 0
        count *= gcd(d, modulus)
    return count


def integer_kernel(M, ncols: Optional[int] = None) -> IntMatrix:
    """Basis of {x in Z^n : M x = 0}, returned as columns of an n×r matrix."""
    M = [list(map(int, row)) for row in M]
    n = len(M[0]) if M else (ncols or 0)
    if not M:
        return identity(n)
    sf = _smith(M, n, track_u=False)
    return [[sf.V[i][j] for j in range(sf.rank, n)] for i in range(n)]


def quotient_invariants(relations, ngens: int) -> list[int]:
    """Invariant factors (without 1s) of Z^ngens / column span of ``relations``.

    A 0 factor signals a free summand.
    """
    rel = [list(map(int, row)) for row in relations]
    if ngens == 0:
        return []
    ncols = len(rel[0]) if rel else 0
    if ncols == 0:
        return [0] * ngens
    sf = _smith(rel, ncols, track_u=False, track_v=False)
    diag = list(sf.diagonal[: sf.rank]) + [0] * (ngens - sf.rank)
    return [d for d in diag if d != 1]


# ---------------------------------------------------------------------------
# prime powers and column reduction over Z/p^k


def prime_power_parts(n: int) -> list[tuple[int, int]]:
    """Factor n as [(p, k), ...] by trial division, primes increasing."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def crt_idempotent(e: int, q: int) -> int:
    """The u mod e with u ≡ 1 (mod q), u ≡ 0 (mod e/q), for q ∥ e."""
    r = e // q
    return (r * _inv_mod(r, q)) % e if q > 1 else 0


@dataclass
class LocalColumnForm:
    """P·R·Q = diag(p^v_0, ..., p^v_{t-1}, 0, ...) over Z/p^k.

    ``valuations`` has one entry per column; free columns get k.
    Q and Q_inv are numpy arrays reduced mod p^k.
    """

    p: int
    k: int
    valuations: list
    Q: np.ndarray
    Q_inv: np.ndarray


def _dtype_for(q: int):
    return np.int64 if q < (1 << 31) else object


def _valuation_array(A: np.ndarray, p: int, k: int) -> np.ndarray:
    v = np.zeros(A.shape, dtype=np.int64)
    pk = 1
    for _ in range(k):
        pk *= p
        v += (A % pk == 0)
    return v


def local_column_reduce(R, p: int, k: int, ncols: Optional[int] = None) -> LocalColumnForm:
    """Diagonalise an integer matrix over the local ring Z/p^k.

    Pivot rule: least p-valuation in the trailing block, first in row-major
    order.  Only the column transform is recorded, which is all that is
    needed to describe the kernel.
    """
    q = p ** k
    dt = _dtype_for(q)
    A = np.array(R, dtype=dt) if len(R) else np.zeros((0, ncols or 0), dtype=dt)
    if A.ndim == 1:
        A = A.reshape(0, ncols or 0)
    A %= q
    m, n = A.shape
    Q = np.eye(n, dtype=dt)
    Qi = np.eye(n, dtype=dt)
    vals = []
    t = 0
    while t < min(m, n):
        sub = A[t:, t:]
        if not sub.any():
            break
        val = _valuation_array(sub, p, k)
        flat = int(np.argmin(val))
        i, j = divmod(flat, sub.shape[1])
        i += t
        j += t
        v = int(val[i - t, j - t])
        if i != t:
            A[[t, i]] = A[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            Q[:, [t, j]] = Q[:, [j, t]]
            Qi[[t, j]] = Qi[[j, t]]
        pv = p ** v
        unit = int(A[t, t]) // pv
        A[t] = (A[t] * _inv_mod(unit, q)) % q
        c = A[t + 1:, t] // pv
        if c.any():
            A[t + 1:] = (A[t + 1:] - np.outer(c, A[t])) % q
        r = A[t, t + 1:] // pv
        if r.any():
            Q[:, t + 1:] = (Q[:, t + 1:] - np.outer(Q[:, t], r)) % q
            Qi[t] = (Qi[t] + r @ Qi[t + 1:]) % q
            A[t, t + 1:] = 0
        vals.append(v)
        t += 1
    vals += [k] * (n - t)
    return LocalColumnForm(p, k, vals, Q % q, Qi % q)


# ---------------------------------------------------------------------------
# subgroups of finite abelian groups


def subgroup_invariants(generators, moduli: Sequence[int]) -> list[int]:
    """Invariant factors of the subgroup of ⊕Z/moduli spanned by ``generators``.

    ``generators`` is a list of coordinate vectors.  The subgroup is
    Z^g / K with K = {y : Σ y_t·gen_t ≡ 0}, computed as an integer kernel.
    """
    gens = [list(map(int, g)) for g in generators]
    m = len(moduli)
    g = len(gens)
    if g == 0 or m == 0:
        return []
    # columns: the generators, then the moduli relations with a sign flip
    M = [[gens[t][r] for t in range(g)] + [-moduli[r] if s == r else 0 for s in range(m)]
         for r in range(m)]
    K = integer_kernel(M, g + m)
    K_y = [row for row in K[:g]]
    return quotient_invariants(K_y, g)


def order_of_type(factors: Sequence[int]) -> int:
    return prod(factors) if factors else 1
