"""
Factor sets of central extensions as dense tables.

Everything is written additively: a cocycle is a normalised map
γ: A×A → B with γ(x,y) + γ(x+y,z) = γ(y,z) + γ(x,y+z).  Tables are numpy
arrays of shape (|A|, |A|, rank B) holding reduced B-coordinates, indexed
by the lexicographic element order of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .abelian import AbelianGroup, as_group, hom_matrix_array, hom_space, is_homomorphism, tensor_square
from .errors import CapacityError, GroupMismatchError, InvalidInputError, StructuralError, VerificationError

#: Largest |A| for which dense tables are built.
MAX_TABLE_ORDER = 4096
#: Largest cyclic modulus of B allowed in int64 tables.
MAX_COEFFICIENT_MODULUS = 1 << 40


def _check_groups(A: AbelianGroup, B: AbelianGroup, limit: Optional[int] = None):
    limit = MAX_TABLE_ORDER if limit is None else limit
    if A.order > limit:
        raise CapacityError(f"|A| = {A.order} exceeds the table bound {limit}")
    if any(e > MAX_COEFFICIENT_MODULUS for e in B.factors):
        raise CapacityError("coefficient modulus too large for dense tables")


def _moduli(B: AbelianGroup) -> np.ndarray:
    return np.array(B.factors, dtype=np.int64)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Cocycle:
    """A table A×A → B.  Construction reduces entries but does not validate
    the cocycle axioms; use :func:`validate_cocycle` for that."""

    group_a: AbelianGroup
    group_b: AbelianGroup
    table: np.ndarray

    def __post_init__(self):
        A, B = as_group(self.group_a), as_group(self.group_b)
        _check_groups(A, B)
        n, m = A.order, B.rank
        try:
            t = np.array(self.table, dtype=np.int64)
        except (ValueError, TypeError) as exc:
            raise StructuralError(f"cocycle table is not a dense integer array: {exc}") from None
        if m == 0 and t.size == 0:
            t = np.zeros((n, n, 0), dtype=np.int64)
        if t.shape != (n, n, m):
            raise StructuralError(f"table shape {t.shape} does not match |A|x|A|xrank(B) = {(n, n, m)}")
        if m:
            t = t % _moduli(B)
        object.__setattr__(self, "group_a", A)
        object.__setattr__(self, "group_b", B)
        object.__setattr__(self, "table", _freeze(t))

    @classmethod
    def zero(cls, A, B) -> "Cocycle":
        A, B = as_group(A), as_group(B)
        return cls(A, B, np.zeros((A.order, A.order, B.rank), dtype=np.int64))

    @classmethod
    def from_function(cls, A, B, fn) -> "Cocycle":
        """Tabulate ``fn(x_coords, y_coords) -> B coords``."""
        A, B = as_group(A), as_group(B)
        elems = list(A.elements())
        t = np.zeros((A.order, A.order, B.rank), dtype=np.int64)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                t[i, j] = B.reduce(fn(x, y))
        return cls(A, B, t)

    def value(self, x: Sequence[int], y: Sequence[int]) -> tuple:
        A = self.group_a
        return tuple(int(v) for v in self.table[A.index(x), A.index(y)])

    def _same(self, other: "Cocycle"):
        if not isinstance(other, Cocycle) or other.group_a != self.group_a or other.group_b != self.group_b:
            raise GroupMismatchError("cocycles over different groups")

    def __eq__(self, other):
        if not isinstance(other, Cocycle):
            return NotImplemented
        return (self.group_a == other.group_a and self.group_b == other.group_b
                and np.array_equal(self.table, other.table))

    __hash__ = None

    def __add__(self, other: "Cocycle") -> "Cocycle":
        self._same(other)
        return Cocycle(self.group_a, self.group_b, self.table + other.table)

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        self._same(other)
        return Cocycle(self.group_a, self.group_b, self.table - other.table)

    def __neg__(self) -> "Cocycle":
        return Cocycle(self.group_a, self.group_b, -self.table)

    def __rmul__(self, k: int) -> "Cocycle":
        return Cocycle(self.group_a, self.group_b, int(k) * self.table)

    def is_zero(self) -> bool:
        return not self.table.any()

    def is_symmetric(self) -> bool:
        return np.array_equal(self.table, self.table.transpose(1, 0, 2))

    @property
    def index_table(self) -> np.ndarray:
        """(|A| × |A|) table of B-element indices."""
        return self.group_b.indices_of(self.table) if self.group_b.rank else np.zeros(self.table.shape[:2], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class CochainMap:
    """A set map h: A → B stored as an (|A| × rank B) array."""

    group_a: AbelianGroup
    group_b: AbelianGroup
    values: np.ndarray

    def __post_init__(self):
        A, B = as_group(self.group_a), as_group(self.group_b)
        v = np.array(self.values, dtype=np.int64).reshape(A.order, B.rank)
        if B.rank:
            v = v % _moduli(B)
        object.__setattr__(self, "group_a", A)
        object.__setattr__(self, "group_b", B)
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def zero(cls, A, B) -> "CochainMap":
        A, B = as_group(A), as_group(B)
        return cls(A, B, np.zeros((A.order, B.rank), dtype=np.int64))

    def value(self, x: Sequence[int]) -> tuple:
        return tuple(int(v) for v in self.values[self.group_a.index(x)])

    def __eq__(self, other):
        if not isinstance(other, CochainMap):
            return NotImplemented
        return (self.group_a == other.group_a and self.group_b == other.group_b
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __add__(self, other):
        return CochainMap(self.group_a, self.group_b, self.values + other.values)

    def __neg__(self):
        return CochainMap(self.group_a, self.group_b, -self.values)


@dataclass(frozen=True, eq=False)
class BilinearMatrix:
    """Bilinear map A×A → B given by its values on canonical generator pairs.

    ``entries[i, j]`` holds the B-coordinates of β(g_i, g_j).
    """

    group_a: AbelianGroup
    group_b: AbelianGroup
    entries: np.ndarray

    def __post_init__(self):
        A, B = as_group(self.group_a), as_group(self.group_b)
        k, m = A.rank, B.rank
        try:
            e = np.array(self.entries, dtype=np.int64)
        except (ValueError, TypeError) as exc:
            raise StructuralError(f"bilinear entries malformed: {exc}") from None
        if e.size == 0:
            e = np.zeros((k, k, m), dtype=np.int64)
        if e.shape != (k, k, m):
            raise StructuralError(f"entries shape {e.shape}, expected {(k, k, m)}")
        if m:
            e = e % _moduli(B)
        for i, di in enumerate(A.factors):
            for j, dj in enumerate(A.factors):
                for r, er in enumerate(B.factors):
                    if (di * int(e[i, j, r])) % er or (dj * int(e[i, j, r])) % er:
                        raise InvalidInputError(
                            f"entry ({i},{j}) is not annihilated by the generator orders {di}, {dj}")
        object.__setattr__(self, "group_a", A)
        object.__setattr__(self, "group_b", B)
        object.__setattr__(self, "entries", _freeze(e))

    @classmethod
    def zero(cls, A, B) -> "BilinearMatrix":
        A, B = as_group(A), as_group(B)
        return cls(A, B, np.zeros((A.rank, A.rank, B.rank), dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, BilinearMatrix):
            return NotImplemented
        return (self.group_a == other.group_a and self.group_b == other.group_b
                and np.array_equal(self.entries, other.entries))

    __hash__ = None

    def __add__(self, other):
        return BilinearMatrix(self.group_a, self.group_b, self.entries + other.entries)

    def __sub__(self, other):
        return BilinearMatrix(self.group_a, self.group_b, self.entries - other.entries)

    def __rmul__(self, k: int):
        return BilinearMatrix(self.group_a, self.group_b, int(k) * self.entries)

    def transpose(self) -> "BilinearMatrix":
        return BilinearMatrix(self.group_a, self.group_b, self.entries.transpose(1, 0, 2))

    def value(self, x: Sequence[int], y: Sequence[int]) -> tuple:
        acc = np.einsum("i,j,ijm->m", np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64), self.entries)
        return self.group_b.reduce(acc.tolist())

    def to_cocycle(self) -> Cocycle:
        return bilinear_to_cocycle(self)

    def is_alternating(self, exhaustive: bool = True) -> bool:
        """α(x,x) = 0 for all x.

        On generators this is α_ii = 0 and α_ij = -α_ji; with ``exhaustive``
        the diagonal of the expanded table is checked as well.
        """
        E = self.entries
        mod = _moduli(self.group_b)
        k = self.group_a.rank
        for i in range(k):
            if E[i, i].any():
                return False
        if self.group_b.rank and ((E + E.transpose(1, 0, 2)) % mod).any():
            return False
        if exhaustive and self.group_a.order <= MAX_TABLE_ORDER:
            T = _expand(self.group_a, self.group_b, E)
            n = self.group_a.order
            if T[np.arange(n), np.arange(n)].any():
                return False
        return True


def _expand(A: AbelianGroup, B: AbelianGroup, E: np.ndarray) -> np.ndarray:
    C = A.coord_array
    n = A.order
    if B.rank == 0 or A.rank == 0:
        return np.zeros((n, n, B.rank), dtype=np.int64)
    # sum over i of x_i * (sum over j of y_j E_ij) keeps intermediates small
    mod = _moduli(B)
    right = np.einsum("yj,ijm->iym", C, E) % mod
    return np.einsum("xi,iym->xym", C, right) % mod


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class CocycleReport:
    normalized: bool
    cocycle_identity: bool
    axiom: Optional[str] = None
    violation: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.normalized and self.cocycle_identity

    def __bool__(self):
        return self.ok


def validate_cocycle(gamma: Cocycle) -> CocycleReport:
    """Check normalisation and the cocycle identity exhaustively.

    On failure the report carries the axiom name and the first violating
    pair/triple (as coordinate tuples) in lexicographic order.
    """
    A, B = gamma.group_a, gamma.group_b
    T = gamma.table
    n = A.order
    if B.rank == 0:
        return CocycleReport(True, True)
    mod = _moduli(B)
    # (e, y) comes before (x, e) for x != e in lexicographic order
    bad = np.nonzero(T[0].any(axis=1))[0]
    if len(bad):
        return CocycleReport(False, True, "normalization", (A.coords(0), A.coords(int(bad[0]))))
    bad = np.nonzero(T[:, 0].any(axis=1))[0]
    if len(bad):
        return CocycleReport(False, True, "normalization", (A.coords(int(bad[0])), A.coords(0)))
    add = A.add_table
    for x in range(n):
        # defect[y, z] = γ(x,y) + γ(x+y,z) - γ(y,z) - γ(x,y+z)
        d = T[x][:, None, :] + T[add[x]] - T - T[x][add]
        d %= mod
        hit = d.any(axis=2)
        if hit.any():
            y, z = divmod(int(np.argmax(hit.ravel())), n)
            return CocycleReport(True, False, "cocycle identity", (A.coords(x), A.coords(y), A.coords(z)))
    return CocycleReport(True, True)


def require_valid(gamma: Cocycle):
    rep = validate_cocycle(gamma)
    if not rep.ok:
        raise InvalidInputError(f"not a cocycle: {rep.axiom} fails at {rep.violation}")


# ---------------------------------------------------------------------------
# constructions


def carry_cocycle(n: int, m: int) -> Cocycle:
    """Factor set of 0 → Z/m → Z/nm → Z/n → 0 with transversal 0, ..., n-1.

    γ(x, y) = floor((x + y) / n) mod m.
    """
    if n < 1 or m < 1:
        raise InvalidInputError("carry_cocycle needs positive moduli")
    x = np.arange(n)
    t = ((x[:, None] + x[None, :]) // n) % m
    return Cocycle(AbelianGroup((n,)), AbelianGroup((m,)), t[:, :, None])


def coboundary(h: CochainMap) -> Cocycle:
    """∂h(x, y) = h(x) + h(y) - h(x + y)."""
    A, B = h.group_a, h.group_b
    if h.values[0].any():
        raise InvalidInputError("a cochain must vanish at the identity")
    v = h.values
    t = v[:, None, :] + v[None, :, :] - v[A.add_table]
    return Cocycle(A, B, t)


def _coboundary_rows(A: AbelianGroup) -> list:
    """Matrix of ∂ restricted to nonidentity pairs / nonidentity elements."""
    n = A.order
    add = A.add_table
    rows = []
    for x in range(1, n):
        for y in range(1, n):
            row = [0] * (n - 1)
            row[x - 1] += 1
            row[y - 1] += 1
            s = int(add[x, y])
            if s:
                row[s - 1] -= 1
            rows.append(row)
    return rows


def solve_coboundaries(A: AbelianGroup, B: AbelianGroup, tables: Sequence[np.ndarray]) -> list:
    """For each (|A|, |A|, rank B) table η, a cochain h with ∂h = η, or None.

    One Smith reduction of the coboundary matrix serves every table and
    every coordinate of B; witnesses follow the deterministic rule of
    :func:`linalg.solve_congruences`.
    """
    n, m = A.order, B.rank
    out = []
    if n == 1 or m == 0:
        for T in tables:
            out.append(CochainMap.zero(A, B) if not np.asarray(T).any() else None)
        return out
    rows = _coboundary_rows(A)
    rhs = []
    for T in tables:
        for r in range(m):
            rhs.append([int(v) for v in np.asarray(T)[1:, 1:, r].ravel()])
    sf = linalg.smith_form(rows, n - 1, track_u=False, rhs=rhs)
    for a, T in enumerate(tables):
        vals = np.zeros((n, m), dtype=np.int64)
        ok = True
        for r, e in enumerate(B.factors):
            x = linalg._solve_diagonal(sf, n - 1, sf.rhs[a * m + r], e)
            if x is None:
                ok = False
                break
            vals[1:, r] = x
        out.append(CochainMap(A, B, vals) if ok else None)
    return out


def cohomologous(gamma1: Cocycle, gamma2: Cocycle) -> Optional[CochainMap]:
    """A witness h with γ1 - γ2 = ∂h, or None if the classes differ."""
    gamma1._same(gamma2)
    return solve_coboundaries(gamma1.group_a, gamma1.group_b, [(gamma1 - gamma2).table])[0]


def is_coboundary(gamma: Cocycle) -> bool:
    return solve_coboundaries(gamma.group_a, gamma.group_b, [gamma.table])[0] is not None


def bilinear_to_cocycle(beta: BilinearMatrix) -> Cocycle:
    """Expand β(Σk_i g_i, Σl_j g_j) = Σ k_i l_j β(g_i, g_j) to a full table."""
    return Cocycle(beta.group_a, beta.group_b, _expand(beta.group_a, beta.group_b, beta.entries))


def _generator_values(A: AbelianGroup, T: np.ndarray) -> np.ndarray:
    gens = [A.index(g) for g in A.generators()]
    return T[np.ix_(gens, gens)] if gens else np.zeros((0, 0, T.shape[2]), dtype=np.int64)


def _bilinear_from_table(A: AbelianGroup, B: AbelianGroup, T: np.ndarray) -> Optional[BilinearMatrix]:
    E = _generator_values(A, T)
    try:
        beta = BilinearMatrix(A, B, E)
    except InvalidInputError:
        return None
    if not np.array_equal(_expand(A, B, beta.entries), T):
        return None
    return beta


def is_bilinear(gamma: Cocycle) -> Optional[BilinearMatrix]:
    """The generator matrix of γ if γ is bilinear, else None.

    Every entry of the table is compared with the bilinear expansion of
    its generator values, so the whole distributive law is checked.
    """
    return _bilinear_from_table(gamma.group_a, gamma.group_b, gamma.table)


def bilinearity_violation(gamma: Cocycle) -> Optional[tuple]:
    """First failure of a distributive law, in lexicographic order.

    Returns ``("left", x, x2, y)`` meaning γ(x+x2, y) ≠ γ(x,y) + γ(x2,y), or
    ``("right", x, y, y2)`` for the second argument; None if bilinear.
    """
    A, B = gamma.group_a, gamma.group_b
    if B.rank == 0:
        return None
    T = gamma.table
    mod = _moduli(B)
    add = A.add_table
    n = A.order
    for x in range(n):
        left = (T[add[x]] - T[x][None, :, :] - T) % mod
        hit = left.any(axis=2)
        if hit.any():
            x2, y = divmod(int(np.argmax(hit.ravel())), n)
            return ("left", A.coords(x), A.coords(x2), A.coords(y))
        right = (T[x][add] - T[x][:, None, :] - T[x][None, :, :]) % mod
        hit = right.any(axis=2)
        if hit.any():
            y, y2 = divmod(int(np.argmax(hit.ravel())), n)
            return ("right", A.coords(x), A.coords(y), A.coords(y2))
    return None


def commutator_table(gamma: Cocycle) -> np.ndarray:
    T = gamma.table
    D = T - T.transpose(1, 0, 2)
    return D % _moduli(gamma.group_b) if gamma.group_b.rank else D


def commutator_pairing(gamma: Cocycle) -> BilinearMatrix:
    """α(x, y) = γ(x, y) - γ(y, x), verified bilinear and alternating."""
    A, B = gamma.group_a, gamma.group_b
    alpha = _bilinear_from_table(A, B, commutator_table(gamma))
    if alpha is None or not alpha.is_alternating(exhaustive=False):
        raise VerificationError("commutator pairing of a cocycle is not alternating bilinear")
    return alpha


def pullback(psi, gamma: Cocycle, source) -> Cocycle:
    """(ψ*γ)(x, y) = γ(ψx, ψy) for a homomorphism ψ: source → A."""
    src = as_group(source)
    A = gamma.group_a
    if not is_homomorphism(psi, src, A):
        raise InvalidInputError("psi is not a well-defined homomorphism into A")
    idx = hom_matrix_array(psi, src, A)
    return Cocycle(src, gamma.group_b, gamma.table[np.ix_(idx, idx)])


def pushforward(phi, gamma: Cocycle, target) -> Cocycle:
    """(φ∘γ)(x, y) = φ(γ(x, y)) for a homomorphism φ: B → target."""
    tgt = as_group(target)
    B = gamma.group_b
    if not is_homomorphism(phi, B, tgt):
        raise InvalidInputError("phi is not a well-defined homomorphism out of B")
    n = gamma.group_a.order
    if tgt.rank == 0:
        return Cocycle(gamma.group_a, tgt, np.zeros((n, n, 0), dtype=np.int64))
    P = np.array([[phi[r][s] % e for s in range(B.rank)] for r, e in enumerate(tgt.factors)],
                 dtype=np.int64).reshape(tgt.rank, B.rank)
    return Cocycle(gamma.group_a, tgt, gamma.table @ P.T)


def push_cochain(phi, h: CochainMap, target) -> CochainMap:
    tgt = as_group(target)
    if tgt.rank == 0:
        return CochainMap.zero(h.group_a, tgt)
    P = np.array([[phi[r][s] % e for s in range(h.group_b.rank)] for r, e in enumerate(tgt.factors)],
                 dtype=np.int64).reshape(tgt.rank, h.group_b.rank)
    return CochainMap(h.group_a, tgt, h.values @ P.T)


def pull_cochain(psi, h: CochainMap, source) -> CochainMap:
    src = as_group(source)
    idx = hom_matrix_array(psi, src, h.group_a)
    return CochainMap(src, h.group_b, h.values[idx])


def bilinear_basis(A, B):
    """Hom(A⊗A, B) as ``(group, [BilinearMatrix, ...])``, one per generator."""
    A, B = as_group(A), as_group(B)
    ts = tensor_square(A)
    H, mats = hom_space(ts.group, B)
    basis = []
    for M in mats:
        E = np.zeros((A.rank, A.rank, B.rank), dtype=np.int64)
        for i in range(A.rank):
            for j in range(A.rank):
                E[i, j] = B.reduce(linalg.matvec(M, ts.table[i][j])) if B.rank else ()
        basis.append(BilinearMatrix(A, B, E))
    return H, basis
