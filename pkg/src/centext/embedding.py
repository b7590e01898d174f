"""
Embedding a class-two central extension into a twisted product A ×_β̃ L.

Pipeline: commutator pairing α → universal triple (C, i_B, β) → divisible
target L = (ℚ/ℤ)^k with j: B → L → factor map χ: C → L with χ∘i_B = j →
β̃ = χ∘β → a function f: G → L with

    f(x + y) = f(x) + f(y) + β̃(π x, π y),    f∘i = j,

so that g ↦ (π g, f(g)) is an injective homomorphism G → A ×_β̃ L.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, lcm
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .abelian import AbelianGroup, as_group, is_homomorphism, subgroup_type
from .cocycle import BilinearMatrix, commutator_pairing
from .errors import InvalidInputError, VerificationError
from .qz import QZVector, common_denominator, from_scaled, to_scaled_array
from .twisted import ExtensionGroup

IntMatrix = list


# ---------------------------------------------------------------------------
# universal triple


@dataclass(frozen=True, eq=False)
class UniversalTriple:
    """(C, i_B, β) with β(x,y) - β(y,x) = i_B(α(x,y)).

    C is presented on generators b_s (one per B factor) and β_ij; ``to_c``
    maps generator vectors to canonical C-coordinates and ``lift`` sends
    each canonical generator of C back to a generator vector.
    """

    group_a: AbelianGroup
    group_b: AbelianGroup
    alpha: BilinearMatrix
    c_group: AbelianGroup
    i_b: IntMatrix
    beta: tuple
    to_c: IntMatrix
    lift: IntMatrix
    relations: tuple

    @property
    def ngens(self) -> int:
        return self.group_b.rank + self.group_a.rank ** 2

    def beta_index(self, i: int, j: int) -> int:
        return self.group_b.rank + i * self.group_a.rank + j

    def beta_value(self, x: Sequence[int], y: Sequence[int]) -> tuple:
        k = self.group_a.rank
        acc = [0] * self.c_group.rank
        for i in range(k):
            for j in range(k):
                c = x[i] * y[j]
                if c:
                    acc = [a + c * v for a, v in zip(acc, self.beta[i][j])]
        return self.c_group.reduce(acc)

    def apply_i_b(self, b: Sequence[int]) -> tuple:
        return self.c_group.reduce(linalg.matvec(self.i_b, b)) if self.c_group.rank else ()

    def _coords(self, vec) -> tuple:
        if not self.c_group.rank:
            return ()
        return self.c_group.reduce(linalg.matvec(self.to_c, vec))


def _section_on_generators(A: AbelianGroup, B: AbelianGroup, alpha: BilinearMatrix) -> IntMatrix:
    """ψ(b_s) = e_s, ψ(β_ij) = α_ij for i < j, ψ(β_ij) = 0 otherwise.

    This is the strict upper triangle of α; then ψβ(x,y) - ψβ(y,x) = α(x,y).
    """
    k, m = A.rank, B.rank
    ngens = m + k * k
    P = linalg.zeros(m, ngens)
    for s in range(m):
        P[s][s] = 1
    for i in range(k):
        for j in range(i + 1, k):
            for s in range(m):
                P[s][m + i * k + j] = int(alpha.entries[i, j, s])
    return P


def universal_triple(A, B, alpha: BilinearMatrix) -> UniversalTriple:
    A, B = as_group(A), as_group(B)
    if alpha.group_a != A or alpha.group_b != B:
        raise InvalidInputError("alpha is not a map A×A → B for the given groups")
    if not alpha.is_alternating():
        raise InvalidInputError("alpha is not alternating")
    k, m = A.rank, B.rank
    ngens = m + k * k
    rels = []
    for s, e in enumerate(B.factors):
        col = [0] * ngens
        col[s] = e
        rels.append(col)
    for i, di in enumerate(A.factors):
        for j, dj in enumerate(A.factors):
            for d in sorted({di, dj}):
                col = [0] * ngens
                col[m + i * k + j] = d
                rels.append(col)
    for i in range(k):
        for j in range(i + 1, k):
            col = [0] * ngens
            col[m + i * k + j] += 1
            col[m + j * k + i] -= 1
            for s in range(m):
                col[s] -= int(alpha.entries[i, j, s])
            rels.append(col)
    if ngens == 0:
        C = AbelianGroup(())
        return UniversalTriple(A, B, alpha, C, [], (), [], [], ())
    R = linalg.transpose(rels, ngens) if rels else linalg.zeros(ngens, 0)
    sf = linalg.smith_form(R, len(rels), track_v=False, inverses=True)
    diag = [sf.diagonal[i] if i < sf.rank else 0 for i in range(ngens)]
    if any(d == 0 for d in diag):
        raise VerificationError("universal group came out infinite")
    keep = [i for i, d in enumerate(diag) if d != 1]
    C = AbelianGroup(tuple(diag[i] for i in keep))
    to_c = [[sf.U[i][t] % diag[i] for t in range(ngens)] for i in keep]
    lift = [[sf.U_inv[t][i] for i in keep] for t in range(ngens)]

    def coords(vec):
        return C.reduce(linalg.matvec(to_c, vec)) if C.rank else ()

    units = [[1 if t == u else 0 for t in range(ngens)] for u in range(ngens)]
    i_b = [[coords(units[s])[r] for s in range(m)] for r in range(C.rank)]
    beta = tuple(tuple(coords(units[m + i * k + j]) for j in range(k)) for i in range(k))
    T = UniversalTriple(A, B, alpha, C, i_b, beta, to_c, lift, tuple(tuple(r) for r in rels))
    _check_triple(T)
    return T


def section_map(T: UniversalTriple) -> IntMatrix:
    """ψ: C → B with ψ∘i_B = id_B, as a matrix on canonical C-coordinates."""
    A, B, C = T.group_a, T.group_b, T.c_group
    P = _section_on_generators(A, B, T.alpha)
    if not C.rank or not B.rank:
        return linalg.zeros(B.rank, C.rank)
    psi = linalg.matmul(P, T.lift, T.ngens)
    return [[v % e for v in row] for row, e in zip(psi, B.factors)]


def _check_triple(T: UniversalTriple):
    A, B, C = T.group_a, T.group_b, T.c_group
    k = A.rank
    # injectivity by the order of i_B(B)
    images = [tuple(row[s] for row in T.i_b) for s in range(B.rank)]
    img = subgroup_type(C, images) if C.rank else AbelianGroup(())
    if img.order != B.order:
        raise VerificationError("i_B is not injective")
    # injectivity through an explicit section
    psi = section_map(T)
    if not is_homomorphism(psi, C, B):
        raise VerificationError("section C → B is ill-defined")
    for s in range(B.rank):
        back = B.reduce(linalg.matvec(psi, [row[s] for row in T.i_b])) if C.rank else (0,) * B.rank
        if back != tuple(1 if t == s else 0 for t in range(B.rank)):
            raise VerificationError("section does not split i_B")
    # β(g_i,g_j) - β(g_j,g_i) = i_B(α_ij)
    for i in range(k):
        for j in range(k):
            lhs = C.reduce([a - b for a, b in zip(T.beta[i][j], T.beta[j][i])])
            if lhs != T.apply_i_b(T.alpha.entries[i, j].tolist()):
                raise VerificationError("triple diagram does not commute")


def verify_universal_property(T: UniversalTriple, c_prime, beta_prime, phi_prime) -> IntMatrix:
    """The unique ψ: C → C' with ψ∘i_B = φ' and ψ∘β = β'.

    ``beta_prime`` is a k×k array of C'-coordinates and ``phi_prime`` a
    matrix B → C'.  Raises InvalidInputError if the candidate diagram does
    not commute and VerificationError if ψ is missing or not unique.
    """
    A, B, C = T.group_a, T.group_b, T.c_group
    C2 = as_group(c_prime)
    k, m = A.rank, B.rank
    if not is_homomorphism(phi_prime, B, C2):
        raise InvalidInputError("phi' is not a homomorphism B → C'")
    bp = BilinearMatrix(A, C2, np.array(beta_prime, dtype=np.int64).reshape(k, k, C2.rank))
    for i in range(k):
        for j in range(k):
            lhs = C2.reduce((bp.entries[i, j] - bp.entries[j, i]).tolist())
            rhs = C2.reduce(linalg.matvec(phi_prime, T.alpha.entries[i, j].tolist())) if C2.rank else ()
            if lhs != rhs:
                raise InvalidInputError(f"candidate diagram does not commute at ({i},{j})")
    nC = C.rank
    psi = linalg.zeros(C2.rank, nC)
    for r, e in enumerate(C2.factors):
        rows, rhs = [], []
        for s in range(m):
            rows.append([T.i_b[t][s] for t in range(nC)])
            rhs.append(phi_prime[r][s])
        for i in range(k):
            for j in range(k):
                rows.append(list(T.beta[i][j]))
                rhs.append(int(bp.entries[i, j, r]))
        for t, c in enumerate(C.factors):
            rows.append([c if u == t else 0 for u in range(nC)])
            rhs.append(0)
        sol = linalg.solve_congruences(rows, [e] * len(rows), rhs, nC)
        if sol is None:
            raise VerificationError("no factoring map exists")
        if nC and linalg.count_solutions(rows, e, nC) != 1:
            raise VerificationError("factoring map is not unique")
        psi[r] = [v % e for v in sol]
    return psi


# ---------------------------------------------------------------------------
# divisible target and factor map


@dataclass(frozen=True)
class DivisibleTarget:
    """L = (ℚ/ℤ)^k with j(e_i) = 1/d_i in coordinate i."""

    group_b: AbelianGroup
    l_rank: int
    j_gens: tuple

    def j(self, b: Sequence[int]) -> QZVector:
        acc = QZVector.zero(self.l_rank)
        for c, v in zip(b, self.j_gens):
            acc = acc + int(c) * v
        return acc


def divisible_target(B) -> DivisibleTarget:
    B = as_group(B)
    k = B.rank
    return DivisibleTarget(B, k, tuple(QZVector.unit(k, i, d) for i, d in enumerate(B.factors)))


@dataclass(frozen=True)
class FactorMap:
    """χ: C → L given on canonical generators of C."""

    c_group: AbelianGroup
    l_rank: int
    gens: tuple
    route: str

    def apply(self, c: Sequence[int]) -> QZVector:
        acc = QZVector.zero(self.l_rank)
        for x, v in zip(c, self.gens):
            acc = acc + int(x) * v
        return acc


def _chi_by_section(T: UniversalTriple, L: DivisibleTarget) -> tuple:
    psi = section_map(T)
    return tuple(L.j([row[t] for row in psi]) for t in range(T.c_group.rank))


def _chi_by_solve(T: UniversalTriple, L: DivisibleTarget) -> tuple:
    """Solve χ∘i_B = j with χ(c_t) ∈ (1/exp C)ℤ/ℤ, free Smith coordinates 0."""
    C, B = T.c_group, T.group_b
    nC = C.rank
    E = C.exponent
    cols = [[0] * L.l_rank for _ in range(nC)]
    for q, eq in enumerate(B.factors):
        rows, rhs = [], []
        for s in range(B.rank):
            rows.append([T.i_b[t][s] for t in range(nC)])
            rhs.append(E // eq if s == q else 0)
        for t, c in enumerate(C.factors):
            rows.append([c if u == t else 0 for u in range(nC)])
            rhs.append(0)
        sol = linalg.solve_congruences(rows, [E] * len(rows), rhs, nC)
        if sol is None:
            raise VerificationError("j does not extend over C")
        for t in range(nC):
            cols[t][q] = sol[t]
    return tuple(QZVector(Fraction(v, E) for v in cols[t]) for t in range(nC))


def factor_map(T: UniversalTriple, L: DivisibleTarget, route: str = "section") -> FactorMap:
    """χ: C → L with χ∘i_B = j.

    ``route="section"`` composes j with the splitting C → B; ``"solve"``
    solves the congruences for χ directly.  Both are verified.
    """
    if route == "section":
        gens = _chi_by_section(T, L)
    elif route == "solve":
        gens = _chi_by_solve(T, L)
    else:
        raise InvalidInputError(f"unknown factor-map route {route!r}")
    chi = FactorMap(T.c_group, L.l_rank, gens, route)
    for t, d in enumerate(T.c_group.factors):
        if not (d * gens[t]).is_zero():
            raise VerificationError("χ is not well defined on C")
    for s in range(T.group_b.rank):
        unit = [1 if u == s else 0 for u in range(T.group_b.rank)]
        if chi.apply(T.apply_i_b(unit)) != L.j(unit):
            raise VerificationError("χ∘i_B ≠ j")
    return chi


# ---------------------------------------------------------------------------
# bilinear maps into L


class BilinearQZ:
    """Bilinear map A×A → (ℚ/ℤ)^l from its generator values."""

    def __init__(self, group_a: AbelianGroup, l_rank: int, entries):
        self.group_a = as_group(group_a)
        self.l_rank = l_rank
        k = self.group_a.rank
        self.entries = tuple(tuple(entries[i][j] for j in range(k)) for i in range(k))
        for i, di in enumerate(self.group_a.factors):
            for j, dj in enumerate(self.group_a.factors):
                v = self.entries[i][j]
                if not (di * v).is_zero() or not (dj * v).is_zero():
                    raise InvalidInputError("bilinear entries not annihilated by generator orders")

    @classmethod
    def zero(cls, A, l_rank: int) -> "BilinearQZ":
        A = as_group(A)
        return cls(A, l_rank, [[QZVector.zero(l_rank)] * A.rank for _ in range(A.rank)])

    @property
    def denominator(self) -> int:
        return common_denominator(v for row in self.entries for v in row)

    def value(self, x: Sequence[int], y: Sequence[int]) -> QZVector:
        acc = QZVector.zero(self.l_rank)
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                if xi and yj:
                    acc = acc + (xi * yj) * self.entries[i][j]
        return acc

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.entries for v in row)

    def is_symmetric(self) -> bool:
        k = self.group_a.rank
        return all(self.entries[i][j] == self.entries[j][i] for i in range(k) for j in range(k))

    def scaled_table(self, N: int) -> np.ndarray:
        """(|A|, |A|, l) integer table of N·β̃(x, y) mod N."""
        A = self.group_a
        k, n = A.rank, A.order
        if not k or not self.l_rank:
            return np.zeros((n, n, self.l_rank), dtype=np.int64)
        E = np.array([[self.entries[i][j].scaled(N) for j in range(k)] for i in range(k)],
                     dtype=np.int64).reshape(k, k, self.l_rank)
        Cc = A.coord_array
        right = np.einsum("yj,ijm->iym", Cc, E) % N
        return np.einsum("xi,iym->xym", Cc, right) % N

    def __eq__(self, other):
        return (isinstance(other, BilinearQZ) and self.group_a == other.group_a
                and self.entries == other.entries)

    __hash__ = None

    def __repr__(self):
        return f"BilinearQZ({[[str(v) for v in row] for row in self.entries]})"


def beta_tilde(T: UniversalTriple, chi: FactorMap) -> BilinearQZ:
    k = T.group_a.rank
    return BilinearQZ(T.group_a, chi.l_rank, [[chi.apply(T.beta[i][j]) for j in range(k)] for i in range(k)])


# ---------------------------------------------------------------------------
# extending f generator by generator


def extension_value(f_target: Optional[QZVector], n0: Optional[int], b_gg: QZVector) -> QZVector:
    """Value of f on a new element g.

    ``n0`` is the least n ≥ 1 with n·g already in the domain (None when no
    multiple lies there, only possible for infinite groups) and
    ``f_target`` is f(n0·g).  Returns 0 in the first case and otherwise
    the canonical n0-th root of f(n0·g) - C(n0, 2)·β̃(g, g).
    """
    if n0 is None:
        return QZVector.zero(b_gg.rank)
    return (f_target - comb(n0, 2) * b_gg).root(n0)


@dataclass(frozen=True)
class ExtensionStep:
    element: int
    n0: int
    order: int
    value: QZVector


def _power_value(a: int, fg: QZVector, b_gg: QZVector) -> QZVector:
    return a * fg + comb(a, 2) * b_gg


def extend_f(G: ExtensionGroup, bt: BilinearQZ, L: DivisibleTarget):
    """Build f on all of G, seeded by f(i(b)) = j(b).

    Elements are processed in the order ℓ(g_1), ..., ℓ(g_k), then any
    ℓ(a) not yet covered in lexicographic order.  Returns the list of
    f-values (by element index) and the list of extension steps.
    """
    A, B = G.base_a, G.fiber_b
    nb = B.order
    n = G.order
    _check_seed(G, bt, L)
    bt_cache = {}

    def bval(ia: int, ib: int) -> QZVector:
        key = (ia, ib)
        if key not in bt_cache:
            bt_cache[key] = bt.value(A.coords(ia), A.coords(ib))
        return bt_cache[key]

    def mul(x: int, y: int) -> int:
        return int(G.mul_idx(x, y))

    f: list = [None] * n
    in_h = np.zeros(n, dtype=bool)
    for ib in range(nb):
        f[ib] = L.j(B.coords(ib))
        in_h[ib] = True
    domain = list(range(nb))
    order = [A.index(g) * nb for g in A.generators()]
    order += [ia * nb for ia in range(A.order)]
    steps = []
    for g in order:
        if in_h[g]:
            continue
        ga = g // nb
        pw = [0, g]
        while pw[-1] != 0:
            pw.append(mul(pw[-1], g))
        pw.pop()
        og = len(pw)
        n0 = next(a for a in range(1, og + 1) if in_h[pw[a % og]])
        b_gg = bval(ga, ga)
        fg = extension_value(f[pw[n0 % og]], n0, b_gg)
        # seam: f_V agrees with f_U on multiples of n0
        for a in range(0, og, n0):
            if _power_value(a, fg, b_gg) != f[pw[a]]:
                raise VerificationError(f"seam disagreement at {a}·g")
        # torsion: f_V((og + a)g) = f_V(a g)
        for a in range(og):
            if _power_value(og + a, fg, b_gg) != _power_value(a, fg, b_gg):
                raise VerificationError("power values are not periodic in the order of g")
        new = []
        for u in domain:
            ua = u // nb
            for a in range(1, n0):
                v = pw[a]
                w = mul(u, v)
                f[w] = f[u] + _power_value(a, fg, b_gg) + bval(ua, v // nb)
                new.append((w, u, a))
        # second decomposition w = (u - n0 g) + (a + n0) g
        g_neg = int(G.inv_idx(pw[n0 % og]))
        for w, u, a in new:
            u2 = mul(u, g_neg)
            v2 = pw[(a + n0) % og]
            alt = f[u2] + _power_value(a + n0, fg, b_gg) + bval(u2 // nb, v2 // nb)
            if alt != f[w]:
                raise VerificationError("combined map is not well defined")
        for w, _, _ in new:
            in_h[w] = True
        domain.extend(w for w, _, _ in new)
        steps.append(ExtensionStep(g, n0, og, fg))
    if not in_h.all():
        raise VerificationError("extension did not reach all of G")
    return f, steps


def _check_seed(G: ExtensionGroup, bt: BilinearQZ, L: DivisibleTarget):
    """f([x, y]) = β̃(x, y) - β̃(y, x) on the seed i(B)."""
    A = G.base_a
    for x in A.generators():
        for y in A.generators():
            _, c = G.commutator(G.ell(x), G.ell(y))
            if L.j(c) != bt.value(x, y) - bt.value(y, x):
                raise InvalidInputError(f"seed violates commutator compatibility at ({x}, {y})")


# ---------------------------------------------------------------------------
# the full pipeline


@dataclass(eq=False)
class EmbeddingResult:
    source: ExtensionGroup
    triple: UniversalTriple
    target: DivisibleTarget
    chi: FactorMap
    beta_tilde: BilinearQZ
    f: list
    steps: list
    checks: dict = field(default_factory=dict)

    @property
    def l_rank(self) -> int:
        return self.target.l_rank

    def j(self, b) -> QZVector:
        return self.target.j(b)

    def phi(self, g) -> tuple:
        idx = g if isinstance(g, (int, np.integer)) else self.source.index(g)
        a, _ = self.source.element(idx)
        return (a, self.f[int(idx)])

    def f_of(self, g) -> QZVector:
        return self.f[self.source.index(g)]

    @cached_property
    def h(self) -> list:
        """x ↦ f(ℓ(x)) for x in A, by element index."""
        nb = self.source.fiber_b.order
        return [self.f[ia * nb] for ia in range(self.source.base_a.order)]

    @cached_property
    def denominator(self) -> int:
        d = lcm(common_denominator(self.f), self.beta_tilde.denominator)
        return lcm(d, common_denominator(self.target.j_gens))

    @cached_property
    def image_of_f(self) -> AbelianGroup:
        """Isomorphism type of the subgroup of L generated by all f-values."""
        N = self.denominator
        k = self.l_rank
        if not k:
            return AbelianGroup(())
        F = np.unique(to_scaled_array(self.f, N, k), axis=0)
        return subgroup_type(AbelianGroup((N,) * k), [list(map(int, r)) for r in F])

    def target_is_abelian(self) -> bool:
        return self.beta_tilde.is_symmetric()

    def verify(self) -> dict:
        self.checks = verify_embedding(self)
        return self.checks


def verify_embedding(E: EmbeddingResult) -> dict:
    """Exhaustive checks of the embedding's defining identities."""
    G = E.source
    A, B = G.base_a, G.fiber_b
    nb = B.order
    k = E.l_rank
    N = E.denominator
    F = to_scaled_array(E.f, N, k)
    BT = E.beta_tilde.scaled_table(N)
    g = G.all_indices
    ga = g // nb
    out = {}

    ok = True
    for x in range(G.order):
        xs = np.full(G.order, x, dtype=np.int64)
        lhs = F[G.mul_idx(xs, g)]
        rhs = (F[x][None, :] + F + BT[x // nb, ga]) % N
        if not np.array_equal(lhs, rhs):
            ok = False
            break
    out["additivity"] = ok

    seed = all(E.f[ib] == E.target.j(B.coords(ib)) for ib in range(nb))
    out["restriction_to_B"] = seed and len({E.f[ib] for ib in range(nb)}) == nb

    ok = True
    diag = BT[ga, ga]
    cur = np.zeros(G.order, dtype=np.int64)
    for m in range(0, int(G.element_orders.max()) + 1):
        expect = (m * F + comb(m, 2) * diag) % N
        if not np.array_equal(F[cur], expect):
            ok = False
            break
        cur = G.mul_idx(cur, g)
    out["power_formula"] = ok

    ok = True
    for x in range(G.order):
        xs = np.full(G.order, x, dtype=np.int64)
        c = G.commutators_with(x)  # [g, x] for all g
        expect = (BT[ga, x // nb] - BT[x // nb, ga]) % N
        if not np.array_equal(F[c], expect):
            ok = False
            break
    out["commutator_formula"] = ok

    pairs = {(int(a), tuple(row)) for a, row in zip(ga, F.tolist())}
    out["phi_injective"] = len(pairs) == G.order
    out["phi_homomorphism"] = out["additivity"]  # π is a homomorphism by construction
    out["diagram"] = all(E.phi(ib)[0] == A.coords(0) and E.phi(ib)[1] == E.target.j(B.coords(ib))
                         for ib in range(nb))

    # ∂h = j∘γ - β̃ over A×A
    H = F[np.arange(A.order) * nb]
    dh = (H[:, None, :] + H[None, :, :] - H[A.add_table]) % N
    J = np.array([e.scaled(N) for e in E.target.j_gens], dtype=np.int64).reshape(B.rank, k)
    jg = (G.gamma.table @ J) % N if B.rank else np.zeros_like(dh)
    out["coboundary_witness"] = bool(np.array_equal(dh, (jg - BT) % N))
    if not all(out.values()):
        failed = [name for name, v in out.items() if not v]
        raise VerificationError(f"embedding checks failed: {failed}")
    return out


def embed(G: ExtensionGroup, route: str = "section", verify: bool = True) -> EmbeddingResult:
    """Run the whole pipeline on G and verify every invariant."""
    A, B = G.base_a, G.fiber_b
    alpha = commutator_pairing(G.gamma)
    T = universal_triple(A, B, alpha)
    L = divisible_target(B)
    chi = factor_map(T, L, route)
    bt = beta_tilde(T, chi)
    f, steps = extend_f(G, bt, L)
    res = EmbeddingResult(G, T, L, chi, bt, f, steps)
    if verify:
        res.verify()
    return res
