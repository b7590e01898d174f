"""
Z², B² and H² of a finite abelian group with coefficients in a finite
abelian group, by linear algebra on the full cocycle table.

The coefficient group splits as ⊕_r ⊕_q Z/q over its factors e_r and the
prime powers q ∥ e_r, and H² splits the same way.  Each local piece is
handled over Z/q: the cocycle identity is column-reduced over the local
ring to get Z², coboundaries are written in Z²-coordinates, and the
quotient is read off a Smith form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .abelian import AbelianGroup, CanonicalForm, as_group, canonicalize, ext_space, is_homomorphism, subgroup_type
from .cocycle import (
    BilinearMatrix,
    CochainMap,
    Cocycle,
    _coboundary_rows,
    bilinear_basis,
    bilinear_to_cocycle,
    commutator_table,
    pushforward,
    solve_coboundaries,
    validate_cocycle,
)
from .errors import CapacityError, GroupMismatchError, InvalidInputError, VerificationError
from .qz import QZVector, common_denominator

#: Default bound on |A| for the full H² computation.
MAX_H2_ORDER = 16


def cocycle_identity_matrix(A: AbelianGroup) -> np.ndarray:
    """Rows: nonidentity triples (x, y, z); columns: nonidentity pairs.

    Row (x,y,z) encodes γ(x,y) + γ(x+y,z) - γ(y,z) - γ(x,y+z); terms with an
    identity argument vanish under normalisation.
    """
    n = A.order
    m = n - 1
    if m == 0:
        return np.zeros((0, 0), dtype=np.int64)
    add = A.add_table
    x, y, z = np.meshgrid(np.arange(1, n), np.arange(1, n), np.arange(1, n), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    R = np.zeros((m ** 3, m * m), dtype=np.int64)
    rows = np.arange(m ** 3)

    def put(a, b, sign):
        live = (a != 0) & (b != 0)
        np.add.at(R, (rows[live], (a[live] - 1) * m + (b[live] - 1)), sign)

    put(x, y, 1)
    put(add[x, y], z, 1)
    put(y, z, -1)
    put(x, add[y, z], -1)
    return R


@dataclass
class _LocalPiece:
    """H² data for one coefficient prime power q = p^k of factor r."""

    r: int
    p: int
    k: int
    q: int
    idempotent: int
    support: list  # Z² coordinates with positive valuation
    valuations: list
    Q: np.ndarray
    Q_inv: np.ndarray
    U: list
    kept: list
    orders: list  # H² invariants of this piece
    reps: list  # cocycle vectors mod q, one per kept invariant

    def z2_coords(self, vec: np.ndarray) -> list:
        z = (self.Q_inv @ (vec % self.q)) % self.q
        out = []
        for i in self.support:
            s = self.p ** (self.k - self.valuations[i])
            if int(z[i]) % s:
                raise InvalidInputError("table does not satisfy the cocycle identity")
            out.append((int(z[i]) // s) % (self.p ** self.valuations[i]))
        for i, v in enumerate(self.valuations):
            if v == 0 and int(z[i]) % self.q:
                raise InvalidInputError("table does not satisfy the cocycle identity")
        return out

    def project(self, vec: np.ndarray) -> list:
        w = self.z2_coords(vec)
        uw = linalg.matvec(self.U, w) if w else []
        return [uw[i] % d for i, d in zip(self.kept, self.orders)]


@dataclass(eq=False)
class H2Description:
    """H²(A, B) with representatives and a class projector."""

    group_a: AbelianGroup
    group_b: AbelianGroup
    abstract: AbelianGroup
    representatives: list
    z2_order: int
    b2_order: int
    pieces: list = field(repr=False, default_factory=list)
    canonical: Optional[CanonicalForm] = field(repr=False, default=None)

    @property
    def order(self) -> int:
        return self.abstract.order

    def project(self, gamma: Cocycle) -> tuple:
        """Coordinates of the class of γ in ``abstract``."""
        if gamma.group_a != self.group_a or gamma.group_b != self.group_b:
            raise GroupMismatchError("cocycle over different groups")
        if gamma.table[0].any() or gamma.table[:, 0].any():
            raise InvalidInputError("cocycle is not normalised")
        raw = []
        for pc in self.pieces:
            vec = gamma.table[1:, 1:, pc.r].ravel()
            raw.extend(pc.project(vec))
        return self.canonical.forward(raw) if self.abstract.rank else ()

    def representative(self, coords: Sequence[int]) -> Cocycle:
        """The cocycle Σ c_t · rep_t."""
        T = np.zeros((self.group_a.order, self.group_a.order, self.group_b.rank), dtype=np.int64)
        for c, rep in zip(coords, self.representatives):
            T = T + int(c) * rep.table
        return Cocycle(self.group_a, self.group_b, T)

    def classes(self):
        """All classes as coordinate tuples, in lexicographic order."""
        return self.abstract.elements()

    def cohomologous(self, g1: Cocycle, g2: Cocycle) -> bool:
        return self.project(g1) == self.project(g2)


def _local_piece(A: AbelianGroup, R: np.ndarray, cob: np.ndarray, r: int, e: int, p: int, k: int) -> _LocalPiece:
    q = p ** k
    m = A.order - 1
    if R.shape[0]:
        lf = linalg.local_column_reduce(R, p, k)
        vals, Q, Qi = lf.valuations, lf.Q, lf.Q_inv
    else:
        vals = [k] * (m * m)
        Q = np.eye(m * m, dtype=np.int64)
        Qi = Q.copy()
    support = [i for i, v in enumerate(vals) if v > 0]
    # coboundaries ∂e_x in Z²-coordinates
    Zc = (Qi @ (cob % q)) % q if cob.size else np.zeros((m * m, 0), dtype=np.int64)
    Wp = []
    for i in support:
        s = p ** (k - vals[i])
        row = Zc[i]
        if (row % s).any():
            raise VerificationError("coboundary outside the cocycle kernel")
        Wp.append([int(v) // s % (p ** vals[i]) for v in row])
    nsup = len(support)
    M = [Wp[t] + [p ** vals[support[t]] if u == t else 0 for u in range(nsup)] for t in range(nsup)]
    if nsup:
        sf = linalg.smith_form(M, len(M[0]), track_v=False, inverses=True)
        diag = [sf.diagonal[i] if i < sf.rank else 0 for i in range(nsup)]
        U, Ui = sf.U, sf.U_inv
    else:
        diag, U, Ui = [], [], []
    if any(d == 0 for d in diag):
        raise VerificationError("local H² came out infinite")
    kept = [i for i, d in enumerate(diag) if d != 1]
    reps = []
    for i in kept:
        w = [Ui[t][i] for t in range(nsup)]
        z = np.zeros(m * m, dtype=np.int64)
        for t, idx in enumerate(support):
            z[idx] = (w[t] % (p ** vals[idx])) * p ** (k - vals[idx])
        reps.append((Q @ z) % q)
    return _LocalPiece(r, p, k, q, linalg.crt_idempotent(e, q), support, vals, Q, Qi, U, kept,
                       [diag[i] for i in kept], reps)


def z2_b2_h2(A, B, max_order: Optional[int] = None) -> H2Description:
    """H²(A, B) with representative cocycles and a projector."""
    A, B = as_group(A), as_group(B)
    limit = MAX_H2_ORDER if max_order is None else max_order
    if A.order > limit:
        raise CapacityError(f"|A| = {A.order} exceeds the H² bound {limit}")
    n = A.order
    m = n - 1
    R = cocycle_identity_matrix(A)
    cob = np.array(_coboundary_rows(A), dtype=np.int64).reshape(m * m, m) if m else np.zeros((0, 0), dtype=np.int64)
    pieces = []
    z2 = 1
    for r, e in enumerate(B.factors):
        for p, k in linalg.prime_power_parts(e):
            pc = _local_piece(A, R, cob, r, e, p, k)
            z2 *= p ** sum(pc.valuations) if m else 1
            pieces.append(pc)
    raw_orders = [d for pc in pieces for d in pc.orders]
    cf = canonicalize(raw_orders)
    h2 = cf.group
    # raw representatives as full tables
    raw_reps = []
    for pc in pieces:
        for vec in pc.reps:
            T = np.zeros((n, n, B.rank), dtype=np.int64)
            T[1:, 1:, pc.r] = (vec.reshape(m, m) * pc.idempotent) % B.factors[pc.r]
            raw_reps.append(T)
    reps = []
    for t in range(h2.rank):
        T = np.zeros((n, n, B.rank), dtype=np.int64)
        for s, Traw in enumerate(raw_reps):
            c = cf.from_canonical[s][t]
            if c:
                T = T + c * Traw
        reps.append(Cocycle(A, B, T))
    H = H2Description(A, B, h2, reps, z2, z2 // h2.order, pieces, cf)
    for t, rep in enumerate(reps):
        if not validate_cocycle(rep).ok:
            raise VerificationError("representative is not a cocycle")
        unit = tuple(1 if s == t else 0 for s in range(h2.rank))
        if H.project(rep) != unit:
            raise VerificationError("representative does not project to its generator")
    return H


# ---------------------------------------------------------------------------
# bilinear classes


@dataclass(eq=False)
class BilinearSubgroup:
    """Subgroup of H² generated by the classes of bilinear cocycles."""

    parent: H2Description
    generators: list  # projected coordinates of a Hom(A⊗A, B) basis
    basis: list  # the BilinearMatrix basis itself
    group: AbelianGroup

    @property
    def order(self) -> int:
        return self.group.order

    def _solve(self, coords: Sequence[int]):
        H = self.parent.abstract
        if not H.rank:
            return []
        s = len(self.generators)
        rows = [[g[i] for g in self.generators] for i in range(H.rank)]
        if s == 0:
            return [] if not any(c % d for c, d in zip(coords, H.factors)) else None
        return linalg.solve_congruences(rows, list(H.factors), list(coords), s)

    def contains(self, coords: Sequence[int]) -> bool:
        return self._solve(coords) is not None

    def bilinear_representative(self, coords: Sequence[int]) -> Optional[BilinearMatrix]:
        """A bilinear map in the class with the given coordinates, or None."""
        y = self._solve(coords)
        if y is None:
            return None
        A, B = self.parent.group_a, self.parent.group_b
        E = np.zeros((A.rank, A.rank, B.rank), dtype=np.int64)
        for c, b in zip(y, self.basis):
            E = E + int(c) * b.entries
        return BilinearMatrix(A, B, E)

    def elements(self) -> list:
        H = self.parent.abstract
        return [c for c in H.elements() if self.contains(c)]


def h2_bil(A, B, H: Optional[H2Description] = None) -> BilinearSubgroup:
    A, B = as_group(A), as_group(B)
    H = z2_b2_h2(A, B) if H is None else H
    _, basis = bilinear_basis(A, B)
    gens = [H.project(bilinear_to_cocycle(b)) for b in basis]
    group = subgroup_type(H.abstract, gens) if H.abstract.rank else AbelianGroup(())
    return BilinearSubgroup(H, gens, basis, group)


# ---------------------------------------------------------------------------
# induced maps


def induced_on_classes(phi, H: H2Description, target: H2Description):
    """Matrix of φ*: H²(A, B) → H²(A, B') on abstract coordinates."""
    if H.group_a != target.group_a:
        raise GroupMismatchError("H² descriptions over different A")
    B, B2 = H.group_b, target.group_b
    if not is_homomorphism(phi, B, B2):
        raise InvalidInputError("phi is not a homomorphism between the coefficient groups")
    A = H.group_a
    # coboundaries go to coboundaries
    for ia in range(1, A.order):
        for r in range(B.rank):
            vals = np.zeros((A.order, B.rank), dtype=np.int64)
            vals[ia, r] = 1
            eta = _coboundary_of(A, B, vals)
            if any(target.project(pushforward(phi, eta, B2))):
                raise VerificationError("induced map sends a coboundary to a nonzero class")
    cols = [target.project(pushforward(phi, rep, B2)) for rep in H.representatives]
    M = [[cols[t][s] for t in range(len(cols))] for s in range(target.abstract.rank)]
    if not is_homomorphism(M, H.abstract, target.abstract):
        raise VerificationError("induced map is not a homomorphism of abstract groups")
    return M


def _coboundary_of(A, B, vals) -> Cocycle:
    t = vals[:, None, :] + vals[None, :, :] - vals[A.add_table]
    return Cocycle(A, B, t)


# ---------------------------------------------------------------------------
# deciding coboundaries with values in (ℚ/ℤ)^l


def witness_denominator_bound(A: AbelianGroup, m0: int) -> int:
    """If ∂h = η with N·η = 0 (N = m0), then m0·exp(A)·h = 0.

    m0·h has zero coboundary, so it is a homomorphism A → ℚ/ℤ and is killed
    by exp(A).  Witness searches over (1/(m0·exp A))ℤ/ℤ are complete.
    """
    return m0 * A.exponent


def solve_coboundary_qz(A: AbelianGroup, eta) -> Optional[list]:
    """A witness h: A → (ℚ/ℤ)^l with ∂h = η, or None.

    ``eta`` is an (|A| × |A|) nested list of QZVector.  The search runs in
    the finite stand-in (1/N)ℤ/ℤ with N from :func:`witness_denominator_bound`.
    """
    n = A.order
    flat = [v for row in eta for v in row]
    if not flat:
        return []
    l = flat[0].rank
    m0 = common_denominator(flat)
    N = witness_denominator_bound(A, m0)
    T = np.array([[eta[x][y].scaled(N) for y in range(n)] for x in range(n)], dtype=np.int64).reshape(n, n, l)
    if T[0].any() or T[:, 0].any():
        return None
    L_N = AbelianGroup((N,) * l) if l else AbelianGroup(())
    h = solve_coboundaries(A, L_N, [T])[0]
    if h is None:
        return None
    return [QZVector(Fraction(int(v), N) for v in h.values[x]) for x in range(n)]


def qz_table_of_bilinear(bt) -> list:
    """Full (|A| × |A|) table of QZVector values of a BilinearQZ."""
    A = bt.group_a
    elems = list(A.elements())
    return [[bt.value(x, y) for y in elems] for x in elems]


def qz_table_of_cocycle(gamma: Cocycle, j) -> list:
    """j∘γ as an (|A| × |A|) table of QZVector."""
    A, B = gamma.group_a, gamma.group_b
    n = A.order
    return [[j(gamma.table[x, y].tolist()) for y in range(n)] for x in range(n)]


# ---------------------------------------------------------------------------
# kernel of j* versus Ext


@dataclass(frozen=True)
class ClassVerdict:
    coords: tuple
    related_over_l: bool  # j∘γ ∼ β̃ over L
    beta_trivial: bool  # β̃ ∼ 0 over L
    abelian: bool  # the extension group is abelian (brute force)
    symmetric: bool  # zero commutator pairing

    @property
    def ok(self) -> bool:
        return self.related_over_l and self.beta_trivial == self.abelian == self.symmetric


@dataclass(frozen=True)
class JStarReport:
    group_a: AbelianGroup
    group_b: AbelianGroup
    h2: AbelianGroup
    ext_order: int
    verdicts: tuple

    @property
    def symmetric_count(self) -> int:
        return sum(v.symmetric for v in self.verdicts)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts) and self.symmetric_count == self.ext_order


def class_verdict(gamma: Cocycle, coords: tuple = ()) -> ClassVerdict:
    """Run the embedding pipeline on one cocycle and collect the verdicts."""
    from .embedding import embed
    from .twisted import ExtensionGroup

    G = ExtensionGroup(gamma)
    E = embed(G)
    A = gamma.group_a
    bt_table = qz_table_of_bilinear(E.beta_tilde)
    jg = qz_table_of_cocycle(gamma, E.target.j)
    diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(jg, bt_table)]
    related = solve_coboundary_qz(A, diff) is not None
    trivial = solve_coboundary_qz(A, bt_table) is not None
    symmetric = not commutator_table(gamma).any()
    return ClassVerdict(tuple(coords), related, trivial, G.is_abelian(), symmetric)


def kernel_jstar_equals_ext(A, B, H: Optional[H2Description] = None) -> JStarReport:
    """Check, class by class, that j∘γ ∼ β̃ over L and that β̃ ∼ 0 exactly
    for the abelian extensions, which make up Ext(A, B)."""
    A, B = as_group(A), as_group(B)
    H = z2_b2_h2(A, B) if H is None else H
    verdicts = tuple(class_verdict(H.representative(c), c) for c in H.classes())
    return JStarReport(A, B, H.abstract, ext_space(A, B).order, verdicts)
