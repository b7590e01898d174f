"""
Finite abelian groups presented as direct sums of cyclic groups.

A group is the tuple of its cyclic moduli; elements are coordinate tuples.
Elements are enumerated in lexicographic order (last coordinate fastest),
which fixes the row-major layout of every dense table in the package.
Homomorphisms ⊕Z/d_i → ⊕Z/e_r are integer matrices whose column i is the
image of the i-th generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, lcm, prod
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import GroupMismatchError, InvalidInputError


@dataclass(frozen=True)
class AbelianGroup:
    factors: tuple

    def __post_init__(self):
        facs = tuple(int(d) for d in self.factors)
        for d in facs:
            if d < 1:
                raise InvalidInputError(f"cyclic modulus must be >= 1, got {d}")
        object.__setattr__(self, "factors", facs)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls((n,))

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(())

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return lcm(*self.factors) if self.factors else 1

    @property
    def is_canonical(self) -> bool:
        f = self.factors
        return all(d >= 2 for d in f) and all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.factors)

    # -- coordinates ---------------------------------------------------------

    @cached_property
    def strides(self) -> tuple:
        s = []
        acc = 1
        for d in reversed(self.factors):
            s.append(acc)
            acc *= d
        return tuple(reversed(s))

    def reduce(self, coords: Sequence[int]) -> tuple:
        if len(coords) != self.rank:
            raise InvalidInputError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(int(c) % d for c, d in zip(coords, self.factors))

    def index(self, coords: Sequence[int]) -> int:
        return sum((int(c) % d) * s for c, d, s in zip(coords, self.factors, self.strides))

    def coords(self, index: int) -> tuple:
        return tuple((index // s) % d for d, s in zip(self.factors, self.strides))

    def elements(self) -> Iterator[tuple]:
        return product(*(range(d) for d in self.factors))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.reduce(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> list:
        return [tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)]

    @cached_property
    def coord_array(self) -> np.ndarray:
        """All elements as an (order × rank) array, row i = coords(i)."""
        n = self.order
        idx = np.arange(n, dtype=np.int64)
        cols = [(idx // s) % d for d, s in zip(self.factors, self.strides)]
        if not cols:
            return np.zeros((n, 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    @cached_property
    def add_table(self) -> np.ndarray:
        """(order × order) index table of x + y."""
        C = self.coord_array
        n = self.order
        out = np.zeros((n, n), dtype=np.int64)
        for i, (d, s) in enumerate(zip(self.factors, self.strides)):
            out += ((C[:, None, i] + C[None, :, i]) % d) * s
        return out

    @cached_property
    def neg_index(self) -> np.ndarray:
        C = self.coord_array
        out = np.zeros(self.order, dtype=np.int64)
        for i, (d, s) in enumerate(zip(self.factors, self.strides)):
            out += ((-C[:, i]) % d) * s
        return out

    def indices_of(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised index of an (... × rank) array of (unreduced) coordinates."""
        out = np.zeros(coords.shape[:-1], dtype=np.int64)
        for i, (d, s) in enumerate(zip(self.factors, self.strides)):
            out += (coords[..., i] % d) * s
        return out

    def order_of(self, coords: Sequence[int]) -> int:
        return lcm(*(d // gcd(d, int(c)) for c, d in zip(coords, self.factors))) if self.factors else 1


@dataclass(frozen=True)
class GroupElement:
    parent: AbelianGroup
    coords: tuple

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.parent != self.parent:
            raise GroupMismatchError("elements belong to different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(self.parent, self.parent.reduce([a + b for a, b in zip(self.coords, other.coords)]))

    def __neg__(self):
        return GroupElement(self.parent, self.parent.reduce([-a for a in self.coords]))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n: int):
        return GroupElement(self.parent, self.parent.reduce([n * a for a in self.coords]))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        return self.parent.order_of(self.coords)

    @property
    def index(self) -> int:
        return self.parent.index(self.coords)


def add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def neg(x: GroupElement) -> GroupElement:
    return -x


def zero(G: AbelianGroup) -> GroupElement:
    return G.zero()


def element_order(x: GroupElement) -> int:
    return x.order()


def as_group(G) -> AbelianGroup:
    if isinstance(G, AbelianGroup):
        return G
    return AbelianGroup(tuple(G))


# ---------------------------------------------------------------------------
# canonical form


@dataclass(frozen=True)
class CanonicalForm:
    """Invariant-factor form of ``source`` with coordinate changes both ways.

    ``to_canonical`` maps source coordinates to canonical coordinates and
    ``from_canonical`` goes back; both are homomorphism matrices.
    """

    source: AbelianGroup
    group: AbelianGroup
    to_canonical: list
    from_canonical: list

    def forward(self, coords: Sequence[int]) -> tuple:
        return self.group.reduce(linalg.matvec(self.to_canonical, coords)) if self.group.rank else ()

    def backward(self, coords: Sequence[int]) -> tuple:
        return self.source.reduce(linalg.matvec(self.from_canonical, coords)) if self.source.rank else ()


def canonicalize(factors) -> CanonicalForm:
    """Bring ⊕Z/d_i into invariant-factor form d_1 | d_2 | ... (all ≥ 2).

    Uses the Smith form U·diag(d)·V = D: the coordinate map x ↦ U·x sends
    Z^k/diag(d) onto Z^k/D, so rows of U (resp. columns of U^{-1}) at the
    nonunit diagonal positions give the two coordinate changes.
    """
    src = as_group(factors)
    k = src.rank
    if k == 0:
        return CanonicalForm(src, src, [], [])
    diag = [[src.factors[i] if i == j else 0 for j in range(k)] for i in range(k)]
    sf = linalg.smith_form(diag, k, inverses=True)
    keep = [i for i, d in enumerate(sf.diagonal) if d != 1]
    group = AbelianGroup(tuple(sf.diagonal[i] for i in keep))
    to_c = [[sf.U[i][j] % group.factors[r] for j in range(k)] for r, i in enumerate(keep)]
    from_c = [[sf.U_inv[j][i] % src.factors[j] for i in keep] for j in range(k)]
    return CanonicalForm(src, group, to_c, from_c)


def is_homomorphism(M, source: AbelianGroup, target: AbelianGroup) -> bool:
    """Well-definedness: d_i·(column i) ≡ 0 in the target."""
    if len(M) != target.rank:
        return False
    for row in M:
        if len(row) != source.rank:
            return False
    for i, d in enumerate(source.factors):
        for r, e in enumerate(target.factors):
            if (d * M[r][i]) % e:
                return False
    return True


def apply_hom(M, x: Sequence[int], target: AbelianGroup) -> tuple:
    if not target.rank:
        return ()
    return target.reduce(linalg.matvec(M, x))


def hom_matrix_array(M, source: AbelianGroup, target: AbelianGroup) -> np.ndarray:
    """Index table: source element index -> target element index."""
    if target.rank == 0:
        return np.zeros(source.order, dtype=np.int64)
    Mt = np.array([[M[r][i] % e for i in range(source.rank)] for r, e in enumerate(target.factors)],
                  dtype=np.int64).reshape(target.rank, source.rank)
    return target.indices_of(source.coord_array @ Mt.T)


# ---------------------------------------------------------------------------
# Hom, tensor square, Ext


def _canonical_basis(raw_factors, raw_basis):
    """Canonicalise a raw cyclic decomposition and recombine its basis.

    ``raw_basis`` holds one integer vector (flattened object) per raw
    cyclic summand; returns the canonical group and its generators.
    """
    cf = canonicalize(raw_factors)
    basis = []
    for t in range(cf.group.rank):
        vec = [0] * len(raw_basis[0]) if raw_basis else []
        for r in range(len(raw_factors)):
            c = cf.from_canonical[r][t]
            if c:
                vec = [v + c * w for v, w in zip(vec, raw_basis[r])]
        basis.append(vec)
    return cf, basis


def hom_space(A, B):
    """Hom(A, B) ≅ ⊕_{i,r} Z/gcd(d_i, e_r) with one generator matrix each.

    Returns ``(group, basis)`` where ``group`` is canonical and ``basis[t]``
    is the homomorphism matrix of its t-th generator.
    """
    A, B = as_group(A), as_group(B)
    raw_f, raw_b = [], []
    for i, d in enumerate(A.factors):
        for r, e in enumerate(B.factors):
            g = gcd(d, e)
            if g == 1:
                continue
            vec = [0] * (B.rank * A.rank)
            vec[r * A.rank + i] = e // g
            raw_f.append(g)
            raw_b.append(vec)
    if not raw_f:
        return AbelianGroup(()), []
    cf, basis = _canonical_basis(raw_f, raw_b)
    mats = []
    for vec in basis:
        M = [[vec[r * A.rank + i] % B.factors[r] for i in range(A.rank)] for r in range(B.rank)]
        mats.append(M)
    return cf.group, mats


@dataclass(frozen=True)
class TensorSquare:
    """A⊗A together with the universal bilinear map on generator pairs.

    ``table[i][j]`` is the coordinate vector of g_i ⊗ g_j in ``group``.
    """

    base: AbelianGroup
    group: AbelianGroup
    table: tuple

    def image(self, x: Sequence[int], y: Sequence[int]) -> tuple:
        k = self.base.rank
        acc = [0] * self.group.rank
        for i in range(k):
            if not x[i]:
                continue
            for j in range(k):
                if y[j]:
                    c = x[i] * y[j]
                    acc = [a + c * t for a, t in zip(acc, self.table[i][j])]
        return self.group.reduce(acc)


def tensor_square(A) -> TensorSquare:
    A = as_group(A)
    k = A.rank
    raw_f, raw_b, pairs = [], [], []
    for i in range(k):
        for j in range(k):
            g = gcd(A.factors[i], A.factors[j])
            if g == 1:
                continue
            raw_f.append(g)
            pairs.append((i, j))
    if not raw_f:
        empty = tuple(tuple(() for _ in range(k)) for _ in range(k))
        return TensorSquare(A, AbelianGroup(()), empty)
    cf = canonicalize(raw_f)
    table = [[(0,) * cf.group.rank for _ in range(k)] for _ in range(k)]
    for r, (i, j) in enumerate(pairs):
        unit = [1 if s == r else 0 for s in range(len(raw_f))]
        table[i][j] = cf.forward(unit)
    return TensorSquare(A, cf.group, tuple(tuple(row) for row in table))


def ext_space(A, B) -> AbelianGroup:
    """Ext(A, B) ≅ ⊕_{i,r} Z/gcd(d_i, e_r) for finite cyclic decompositions."""
    A, B = as_group(A), as_group(B)
    raw = [gcd(d, e) for d in A.factors for e in B.factors]
    return canonicalize([g for g in raw if g > 1]).group


def subgroup_type(group: AbelianGroup, generators) -> AbelianGroup:
    """Isomorphism type (canonical) of the subgroup spanned by ``generators``."""
    facs = linalg.subgroup_invariants([list(g) for g in generators], group.factors)
    return canonicalize(facs).group


def type_from_order_histogram(histogram: dict) -> AbelianGroup:
    """Recover an abelian group from its element-order histogram.

    For each prime p, n_i = #{x : p^i x = 0} and the number of cyclic
    p-factors of order ≥ p^i is log_p(n_i / n_{i-1}).
    """
    total = sum(histogram.values())
    primes = [p for p, _ in linalg.prime_power_parts(total)]
    factors = []
    for p in primes:
        counts = [1]
        i = 1
        while True:
            pi = p ** i
            n_i = sum(c for o, c in histogram.items() if pi % o == 0)
            counts.append(n_i)
            if n_i == counts[-2]:
                break
            i += 1
        ranks = []
        for i in range(1, len(counts)):
            ratio = counts[i] // counts[i - 1]
            r = 0
            while ratio > 1:
                ratio //= p
                r += 1
            ranks.append(r)
        # ranks[i-1] = number of cyclic factors of order >= p^i
        for i in range(len(ranks)):
            nxt = ranks[i + 1] if i + 1 < len(ranks) else 0
            factors += [p ** (i + 1)] * (ranks[i] - nxt)
    return canonicalize(factors).group
