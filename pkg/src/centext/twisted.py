"""
The group G built from extension data (A, B, γ).

Elements are pairs (a, b) of coordinate tuples with
(a, b)·(a', b') = (a + a', b + b' + γ(a, a')).  Internally an element is the
index ``ia * |B| + ib`` so whole-group checks can be vectorised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, gcd, lcm, prod
from typing import Optional

import numpy as np

from . import linalg
from .abelian import AbelianGroup, as_group, subgroup_type, type_from_order_histogram
from .cocycle import (
    BilinearMatrix,
    CochainMap,
    Cocycle,
    _coboundary_rows,
    bilinear_basis,
    bilinear_to_cocycle,
    cohomologous,
    commutator_table,
    is_bilinear,
    validate_cocycle,
)
from .errors import CapacityError, InvalidInputError, VerificationError

#: Largest |G| for which groups are built and checked exhaustively.
MAX_GROUP_ORDER = 4096
#: Largest |Hom(A⊗A, B)| enumerated by the twisted-product search.
MAX_BILINEAR_CANDIDATES = 3 ** 9
#: Literal triple-product associativity is run up to this |G|.
LITERAL_ASSOCIATIVITY_ORDER = 64


class ExtensionGroup:
    """Central extension 0 → B → G → A → 0 with factor set γ."""

    def __init__(self, gamma: Cocycle, *, check: bool = True, max_order: Optional[int] = None):
        limit = MAX_GROUP_ORDER if max_order is None else max_order
        self.gamma = gamma
        self.base_a = gamma.group_a
        self.fiber_b = gamma.group_b
        self.order = self.base_a.order * self.fiber_b.order
        if self.order > limit:
            raise CapacityError(f"|G| = {self.order} exceeds the bound {limit}")
        if check:
            rep = validate_cocycle(gamma)
            if not rep.ok:
                raise InvalidInputError(f"not a cocycle: {rep.axiom} fails at {rep.violation}")

    def __repr__(self):
        return f"ExtensionGroup(A={self.base_a}, B={self.fiber_b}, |G|={self.order})"

    # -- index plumbing ---------------------------------------------------

    @cached_property
    def _gamma_idx(self) -> np.ndarray:
        return self.gamma.index_table

    @cached_property
    def _b_add(self) -> np.ndarray:
        return self.fiber_b.add_table

    def index(self, g) -> int:
        a, b = g
        return self.base_a.index(a) * self.fiber_b.order + self.fiber_b.index(b)

    def element(self, idx: int) -> tuple:
        ia, ib = divmod(int(idx), self.fiber_b.order)
        return (self.base_a.coords(ia), self.fiber_b.coords(ib))

    def elements(self):
        for ia in range(self.base_a.order):
            a = self.base_a.coords(ia)
            for b in self.fiber_b.elements():
                yield (a, b)

    def _split(self, idx):
        return np.divmod(np.asarray(idx, dtype=np.int64), self.fiber_b.order)

    def mul_idx(self, g, h):
        """Vectorised product on element indices."""
        ga, gb = self._split(g)
        ha, hb = self._split(h)
        a = self.base_a.add_table[ga, ha]
        b = self._b_add[self._b_add[gb, hb], self._gamma_idx[ga, ha]]
        return a * self.fiber_b.order + b

    def inv_idx(self, g):
        ga, gb = self._split(g)
        na = self.base_a.neg_index[ga]
        nb = self.fiber_b.neg_index
        b = nb[self._b_add[gb, self._gamma_idx[ga, na]]]
        return na * self.fiber_b.order + b

    # -- group operations -------------------------------------------------

    @property
    def identity(self) -> tuple:
        return (self.base_a.coords(0), self.fiber_b.coords(0))

    def mul(self, g, h) -> tuple:
        (a, b), (a2, b2) = g, h
        A, B = self.base_a, self.fiber_b
        c = self.gamma.value(a, a2)
        return (A.reduce([x + y for x, y in zip(a, a2)]),
                B.reduce([x + y + z for x, y, z in zip(b, b2, c)]))

    def inv(self, g) -> tuple:
        a, b = g
        A, B = self.base_a, self.fiber_b
        na = A.reduce([-x for x in a])
        c = self.gamma.value(a, na)
        return (na, B.reduce([-x - z for x, z in zip(b, c)]))

    def i(self, b) -> tuple:
        return (self.base_a.coords(0), self.fiber_b.reduce(b))

    def pi(self, g) -> tuple:
        return tuple(g[0])

    def ell(self, a) -> tuple:
        return (self.base_a.reduce(a), self.fiber_b.coords(0))

    def power(self, g, n: int) -> tuple:
        """g^n via (na, nb + Σ_{t=1}^{n-1} γ(ta, a)); negative n uses g^{-1}.

        When γ is bilinear the closed form nb + C(n,2)γ(a,a) is used and
        compared with the partial sums.
        """
        if n < 0:
            return self.power(self.inv(g), -n)
        a, b = g
        A, B = self.base_a, self.fiber_b
        acc = [n * x for x in b]
        ta = A.reduce([0] * A.rank)
        for _ in range(1, n):
            ta = A.reduce([x + y for x, y in zip(ta, a)])
            acc = [s + v for s, v in zip(acc, self.gamma.value(ta, a))]
        result = (A.reduce([n * x for x in a]), B.reduce(acc))
        if self.bilinear is not None:
            caa = self.gamma.value(a, a)
            closed = B.reduce([n * x + comb(n, 2) * c for x, c in zip(b, caa)])
            if closed != result[1]:
                raise VerificationError("closed power form disagrees with partial sums")
        return result

    def commutator(self, g, h) -> tuple:
        """g^{-1} h^{-1} g h, cross-checked against (e, γ(a,a') - γ(a',a))."""
        direct = self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))
        c1, c2 = self.gamma.value(g[0], h[0]), self.gamma.value(h[0], g[0])
        formula = self.i([x - y for x, y in zip(c1, c2)])
        if direct != formula:
            raise VerificationError("commutator formula disagrees with direct product")
        return direct

    @cached_property
    def bilinear(self) -> Optional[BilinearMatrix]:
        return is_bilinear(self.gamma)

    # -- whole-group data -------------------------------------------------

    @cached_property
    def all_indices(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def element_orders(self) -> np.ndarray:
        g = self.all_indices
        orders = np.zeros(self.order, dtype=np.int64)
        cur = g.copy()
        k = 1
        bound = self.base_a.exponent * self.fiber_b.exponent
        while True:
            done = (cur == 0) & (orders == 0)
            orders[done] = k
            if (orders > 0).all():
                return orders
            if k > bound:
                raise VerificationError("element order exceeds exp(A)·exp(B)")
            cur = self.mul_idx(cur, g)
            k += 1

    def is_abelian(self) -> bool:
        """Brute force: gh = hg for every pair."""
        g = self.all_indices
        for x in range(self.order):
            xs = np.full(self.order, x, dtype=np.int64)
            if not np.array_equal(self.mul_idx(xs, g), self.mul_idx(g, xs)):
                return False
        return True

    def generator_indices(self) -> list:
        """ℓ of A's generators followed by i of B's generators."""
        gens = [self.index(self.ell(g)) for g in self.base_a.generators()]
        gens += [self.index(self.i(e)) for e in self.fiber_b.generators()]
        return gens

    def commutators_with(self, h: int) -> np.ndarray:
        g = self.all_indices
        hs = np.full(self.order, h, dtype=np.int64)
        left = self.mul_idx(self.inv_idx(g), self.inv_idx(hs))
        return self.mul_idx(left, self.mul_idx(g, hs))


@dataclass(frozen=True)
class StructureReport:
    order: int
    exponent: int
    order_histogram: dict
    center_order: int
    derived_subgroup: AbelianGroup
    abelianization: AbelianGroup
    nilpotency_class: int
    abelian: bool
    abelian_type: Optional[AbelianGroup] = None

    def as_dict(self) -> dict:
        out = {
            "order": self.order,
            "exponent": self.exponent,
            "order_histogram": {str(k): v for k, v in sorted(self.order_histogram.items())},
            "center_order": self.center_order,
            "derived_subgroup": list(self.derived_subgroup.factors),
            "abelianization": list(self.abelianization.factors),
            "nilpotency_class": self.nilpotency_class,
            "abelian": self.abelian,
        }
        if self.abelian_type is not None:
            out["abelian_type"] = list(self.abelian_type.factors)
        return out


def build_extension(A, B, gamma: Cocycle, **kw) -> ExtensionGroup:
    A, B = as_group(A), as_group(B)
    if gamma.group_a != A or gamma.group_b != B:
        raise InvalidInputError("cocycle groups do not match the given A and B")
    return ExtensionGroup(gamma, **kw)


def _abelianization(G: ExtensionGroup) -> AbelianGroup:
    """Abelianise the presentation on generators ℓ(g_i), i(e_r).

    Relations: e_r·i(e_r) = 0, d_i·ℓ(g_i) = i(B-part of ℓ(g_i)^{d_i}),
    and [ℓ(g_i), ℓ(g_j)] = i(α_ij) becomes i(α_ij) = 0.
    """
    A, B = G.base_a, G.fiber_b
    k, m = A.rank, B.rank
    ngens = k + m
    rels = []
    for r, e in enumerate(B.factors):
        col = [0] * ngens
        col[k + r] = e
        rels.append(col)
    gens = A.generators()
    for i, (g, d) in enumerate(zip(gens, A.factors)):
        _, b = G.power(G.ell(g), d)
        col = [0] * ngens
        col[i] = d
        for r in range(m):
            col[k + r] = -b[r]
        rels.append(col)
    for g in gens:
        for h in gens:
            _, b = G.commutator(G.ell(g), G.ell(h))
            if any(b):
                rels.append([0] * k + list(b))
    if not rels:
        return AbelianGroup(())
    M = linalg.transpose(rels, ngens)
    inv = linalg.quotient_invariants(M, ngens)
    if any(d == 0 for d in inv):
        raise VerificationError("abelianization of a finite group came out infinite")
    return AbelianGroup(tuple(inv)) if inv else AbelianGroup(())


def structure_report(G: ExtensionGroup) -> StructureReport:
    """Invariant fingerprint of G, computed by brute force on its elements."""
    orders = G.element_orders
    vals, counts = np.unique(orders, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(vals, counts)}
    exponent = lcm(*hist.keys())
    # center: elements commuting with a generating set
    central = np.ones(G.order, dtype=bool)
    comm_vals = set()
    for h in G.generator_indices():
        c = G.commutators_with(h)
        central &= c == 0
    # derived subgroup: all commutators [g, h]; they lie in i(B)
    gens_b = []
    for h in range(G.order):
        c = np.unique(G.commutators_with(h))
        comm_vals.update(int(v) for v in c)
    for v in sorted(comm_vals):
        ia, ib = divmod(v, G.fiber_b.order)
        if ia != 0:
            raise VerificationError("a commutator lies outside i(B)")
        gens_b.append(G.fiber_b.coords(ib))
    derived = subgroup_type(G.fiber_b, gens_b) if G.fiber_b.rank else AbelianGroup(())
    ab = _abelianization(G)
    if ab.order * derived.order != G.order:
        raise VerificationError("|G^ab|·|G'| ≠ |G|")
    abelian = derived.order == 1
    if G.order == 1:
        ncls = 0
    elif abelian:
        ncls = 1
    else:
        # commutators sit in i(B), which is central
        if not central[[G.index(G.i(b)) for b in gens_b]].all():
            raise VerificationError("derived subgroup not central")
        ncls = 2
    return StructureReport(
        order=G.order,
        exponent=exponent,
        order_histogram=hist,
        center_order=int(central.sum()),
        derived_subgroup=derived,
        abelianization=ab,
        nilpotency_class=ncls,
        abelian=abelian,
        abelian_type=type_from_order_histogram(hist) if abelian else None,
    )


# ---------------------------------------------------------------------------
# axioms and the Schreier correspondence


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    failures: tuple = ()


def verify_group_axioms(G: ExtensionGroup, literal_limit: int = LITERAL_ASSOCIATIVITY_ORDER) -> AxiomReport:
    """Exhaustive check of the extension's group axioms and structure maps.

    Associativity of G reduces to the cocycle identity on A³ because the
    B-coordinate enters additively; groups up to ``literal_limit`` are also
    checked on all triples of G.
    """
    fails = []
    A, B = G.base_a, G.fiber_b
    nb = B.order
    g = G.all_indices
    rep = validate_cocycle(G.gamma)
    if not rep.ok:
        fails.append(f"associativity: {rep.axiom} at {rep.violation}")
    if G.order <= literal_limit:
        for x in range(G.order):
            xs = np.full(G.order, x, dtype=np.int64)
            xy = G.mul_idx(xs, g)
            lhs = G.mul_idx(xy[:, None], g[None, :])
            rhs = G.mul_idx(xs[:, None], G.mul_idx(g[:, None], g[None, :]))
            if not np.array_equal(lhs, rhs):
                fails.append("literal associativity")
                break
    zero = np.zeros(G.order, dtype=np.int64)
    if not (np.array_equal(G.mul_idx(zero, g), g) and np.array_equal(G.mul_idx(g, zero), g)):
        fails.append("identity")
    inv = G.inv_idx(g)
    if not ((G.mul_idx(g, inv) == 0).all() and (G.mul_idx(inv, g) == 0).all()):
        fails.append("inverses")
    # i(B) is central and i is an injective homomorphism
    ib = np.arange(nb, dtype=np.int64)
    for b in range(nb):
        bs = np.full(G.order, b, dtype=np.int64)
        if not np.array_equal(G.mul_idx(bs, g), G.mul_idx(g, bs)):
            fails.append("centrality of i(B)")
            break
    if nb and not np.array_equal(G.mul_idx(ib[:, None], ib[None, :]), B.add_table):
        fails.append("i is a homomorphism")
    # π is a homomorphism with kernel i(B)
    ga = g // nb
    for x in range(G.order):
        xs = np.full(G.order, x, dtype=np.int64)
        if not np.array_equal(G.mul_idx(xs, g) // nb, A.add_table[x // nb, ga]):
            fails.append("π is a homomorphism")
            break
    if set(np.nonzero(ga == 0)[0].tolist()) != set(ib.tolist()):
        fails.append("kernel of π")
    # ℓ(x)ℓ(y) = ℓ(x+y)·i(γ(x,y)) and π∘ℓ = id
    la = np.arange(A.order, dtype=np.int64) * nb
    if not np.array_equal(la // nb, np.arange(A.order)):
        fails.append("π∘ℓ = id")
    lhs = G.mul_idx(la[:, None], la[None, :])
    rhs = G.mul_idx(la[A.add_table], G._gamma_idx)
    if not np.array_equal(lhs, rhs):
        fails.append("transversal relation")
    return AxiomReport(not fails, tuple(fails))


def equivalence_map(G1: ExtensionGroup, G2: ExtensionGroup, h: CochainMap) -> np.ndarray:
    """Index table of (a, b) ↦ (a, b + h(a)), given γ1 - γ2 = ∂h.

    The result maps G1 to G2: with ∂h = γ1 - γ2 the product rule gives
    θ(g)θ(g') = θ(gg').
    """
    if G1.base_a != G2.base_a or G1.fiber_b != G2.fiber_b:
        raise InvalidInputError("extensions over different groups")
    B = G1.fiber_b
    nb = B.order
    hidx = B.indices_of(h.values) if B.rank else np.zeros(G1.base_a.order, dtype=np.int64)
    ia, ib = np.divmod(G1.all_indices, nb)
    return ia * nb + B.add_table[ib, hidx[ia]]


def verify_equivalence(G1: ExtensionGroup, G2: ExtensionGroup, theta: np.ndarray) -> bool:
    """θ is a bijective homomorphism G1 → G2 commuting with i and π."""
    nb = G1.fiber_b.order
    g = G1.all_indices
    if len(np.unique(theta)) != G1.order:
        return False
    for x in range(G1.order):
        xs = np.full(G1.order, x, dtype=np.int64)
        if not np.array_equal(theta[G1.mul_idx(xs, g)], G2.mul_idx(theta[xs], theta[g])):
            return False
    ib = np.arange(nb)
    return bool(np.array_equal(theta[ib], ib) and np.array_equal(theta // nb, g // nb))


# ---------------------------------------------------------------------------
# twisted-product membership


@dataclass(frozen=True)
class TwistedRepresentative:
    """γ = δ + ∂h with δ bilinear."""

    delta: BilinearMatrix
    witness: CochainMap


def _solve_route(gamma: Cocycle, basis) -> Optional[np.ndarray]:
    """One congruence system in the unknowns (t_u, h_r(x))."""
    A, B = gamma.group_a, gamma.group_b
    n, m, s = A.order, B.rank, len(basis)
    cob = _coboundary_rows(A)
    nh = n - 1
    width = s + m * nh
    rows, moduli, rhs = [], [], []
    tables = [bilinear_to_cocycle(b).table for b in basis]
    for r, e in enumerate(B.factors):
        for p, (x, y) in enumerate(itertools.product(range(1, n), repeat=2)):
            row = [0] * width
            for u in range(s):
                row[u] = int(tables[u][x, y, r])
            row[s + r * nh: s + (r + 1) * nh] = cob[p]
            rows.append(row)
            moduli.append(e)
            rhs.append(int(gamma.table[x, y, r]))
    if not rows:
        return np.zeros(s, dtype=np.int64)
    sol = linalg.solve_congruences(rows, moduli, rhs, width)
    return None if sol is None else np.array(sol[:s], dtype=np.int64)


def _enumeration_route(gamma: Cocycle, H: AbelianGroup, basis) -> Optional[np.ndarray]:
    """Try every δ in Hom(A⊗A, B); first hit in lexicographic order."""
    A, B = gamma.group_a, gamma.group_b
    n, s = A.order, len(basis)
    if s == 0:
        return np.zeros(0, dtype=np.int64) if gamma.is_zero() or _is_cob(gamma) else None
    cob = _coboundary_rows(A)
    tables = [bilinear_to_cocycle(b).table for b in basis]
    rhs = []
    for r in range(B.rank):
        rhs.append([int(v) for v in gamma.table[1:, 1:, r].ravel()])
        for u in range(s):
            rhs.append([int(v) for v in tables[u][1:, 1:, r].ravel()])
    sf = linalg.smith_form(cob, n - 1, track_u=False, track_v=False, rhs=rhs)
    cands = np.array(list(itertools.product(*[range(d) for d in H.factors])), dtype=np.int64)
    ok = np.ones(len(cands), dtype=bool)
    nrows = len(cob)
    for r, e in enumerate(B.factors):
        base = r * (s + 1)
        mods = np.array([gcd(sf.diagonal[i], e) if i < sf.rank else e for i in range(nrows)], dtype=object)
        mods = mods.astype(np.int64)
        gv = np.array([sf.rhs[base][i] % int(mods[i]) for i in range(nrows)], dtype=np.int64)
        bv = np.array([[sf.rhs[base + 1 + u][i] % int(mods[i]) for i in range(nrows)]
                       for u in range(s)], dtype=np.int64)
        # γ - Σ t_u β_u must satisfy every row congruence
        resid = (gv[None, :] - (cands % e) @ bv) % mods[None, :]
        ok &= ~resid.any(axis=1)
    hits = np.nonzero(ok)[0]
    return cands[hits[0]] if len(hits) else None


def _is_cob(gamma: Cocycle) -> bool:
    return cohomologous(gamma, Cocycle.zero(gamma.group_a, gamma.group_b)) is not None


def _combine(A, B, basis, t) -> BilinearMatrix:
    E = np.zeros((A.rank, A.rank, B.rank), dtype=np.int64)
    for c, b in zip(t, basis):
        E = E + int(c) * b.entries
    return BilinearMatrix(A, B, E)


def is_twisted_product_class(G, max_candidates: Optional[int] = None) -> Optional[TwistedRepresentative]:
    """A bilinear δ and a cochain h with γ = δ + ∂h, or None.

    Two independent decisions are made, a single linear solve over the
    unknowns (δ, h) and an enumeration of Hom(A⊗A, B); they must agree.
    """
    gamma = G.gamma if isinstance(G, ExtensionGroup) else G
    A, B = gamma.group_a, gamma.group_b
    cap = MAX_BILINEAR_CANDIDATES if max_candidates is None else max_candidates
    H, basis = bilinear_basis(A, B)
    if H.order > cap:
        raise CapacityError(f"{H.order} bilinear candidates exceed the bound {cap}")
    t_solve = _solve_route(gamma, basis)
    t_enum = _enumeration_route(gamma, H, basis)
    if (t_solve is None) != (t_enum is None):
        raise VerificationError("twisted-product routes disagree")
    if t_enum is None:
        return None
    delta = _combine(A, B, basis, t_enum)
    h = cohomologous(gamma, bilinear_to_cocycle(delta))
    if h is None:
        raise VerificationError("enumerated bilinear candidate is not cohomologous")
    return TwistedRepresentative(delta, h)
