"""
Property suite run by ``centext check``.

Each check returns a :class:`CheckResult`; randomised checks use a fixed
seed so reports are reproducible.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

import numpy as np

from . import linalg, serialize
from .abelian import AbelianGroup, canonicalize, ext_space
from .catalog import commutator_power_cocycle, cyclic_carry
from .cocycle import (
    CochainMap,
    Cocycle,
    bilinear_basis,
    bilinear_to_cocycle,
    coboundary,
    cohomologous,
    commutator_pairing,
    validate_cocycle,
)
from .cohomology import h2_bil, kernel_jstar_equals_ext, witness_denominator_bound, z2_b2_h2
from .embedding import embed
from .qz import QZVector
from .twisted import ExtensionGroup, equivalence_map, verify_equivalence, verify_group_axioms

SMALL_GROUPS = [(1,), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2), (9,), (3, 3)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


def _random_matrix(rng, max_dim=5, bound=9):
    m, n = int(rng.integers(1, max_dim + 1)), int(rng.integers(1, max_dim + 1))
    return rng.integers(-bound, bound + 1, size=(m, n)).tolist(), n


def check_smith(count: int = 1000, seed: int = 0) -> str:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        M, n = _random_matrix(rng)
        U, D, V = linalg.smith_normal_form(M, n)
        if linalg.matmul(linalg.matmul(U, M), V) != D:
            return f"U·M·V ≠ D for {M}"
        if not linalg.is_smith_normal_form(D):
            return f"not in Smith form: {D}"
        if abs(linalg.determinant(U)) != 1 or abs(linalg.determinant(V)) != 1:
            return f"non-unimodular transform for {M}"
    return ""


def check_solve(count: int = 1000, seed: int = 1) -> str:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        M, n = _random_matrix(rng, 4, 6)
        m = len(M)
        moduli = rng.integers(1, 10, size=m).tolist()
        b = rng.integers(0, 10, size=m).tolist()
        sol = linalg.solve_congruences(M, moduli, b, n)
        if sol is not None:
            if any((sum(r * x for r, x in zip(row, sol)) - bi) % e for row, bi, e in zip(M, b, moduli)):
                return f"bad solution for {M}, {moduli}, {b}"
        else:
            N = int(np.lcm.reduce(moduli))
            if N ** n <= 4096:
                for x in itertools.product(range(N), repeat=n):
                    if not any((sum(r * v for r, v in zip(row, x)) - bi) % e for row, bi, e in zip(M, b, moduli)):
                        return f"missed solution {x} for {M}, {moduli}, {b}"
    return ""


def check_canonicalize() -> str:
    for facs in [(2, 3), (4, 2), (6, 4), (2, 2, 4, 3), (12, 18), (1, 5)]:
        cf = canonicalize(facs)
        src = AbelianGroup(facs)
        seen = set()
        for x in src.elements():
            y = cf.forward(x)
            if cf.backward(y) != x:
                return f"round trip fails on {facs} at {x}"
            seen.add(y)
        if len(seen) != src.order:
            return f"not bijective on {facs}"
    return ""


def check_coboundaries(seed: int = 2) -> str:
    rng = np.random.default_rng(seed)
    for A, B in itertools.product([(2,), (4,), (2, 2), (6,)], [(2,), (3,), (2, 2)]):
        A, B = AbelianGroup(A), AbelianGroup(B)
        for _ in range(3):
            vals = rng.integers(0, 12, size=(A.order, B.rank))
            vals[0] = 0
            eta = coboundary(CochainMap(A, B, vals))
            if not validate_cocycle(eta).ok:
                return f"coboundary invalid over {A}, {B}"
            if cohomologous(eta, Cocycle.zero(A, B)) is None:
                return f"coboundary not recognised over {A}, {B}"
    return ""


def check_h2_formula() -> str:
    for a, b in itertools.product(SMALL_GROUPS, SMALL_GROUPS):
        A, B = AbelianGroup(a), AbelianGroup(b)
        lam = [gcd(a[i], a[j]) for i in range(len(a)) for j in range(i + 1, len(a))]
        expect = ext_space(A, B).order * prod(gcd(l, e) for l in lam for e in b)
        got = z2_b2_h2(A, B).order
        if got != expect:
            return f"|H²({A}, {B})| = {got}, expected {expect}"
    return ""


def check_projector_homomorphism(seed: int = 3) -> str:
    rng = np.random.default_rng(seed)
    for a, b in [((2, 2), (2,)), ((4,), (4,)), ((2, 2), (2, 2)), ((3, 3), (3,))]:
        H = z2_b2_h2(a, b)
        for _ in range(5):
            c1 = [int(rng.integers(0, d)) for d in H.abstract.factors]
            c2 = [int(rng.integers(0, d)) for d in H.abstract.factors]
            g1, g2 = H.representative(c1), H.representative(c2)
            lhs = H.project(g1 + g2)
            rhs = H.abstract.reduce([x + y for x, y in zip(H.project(g1), H.project(g2))])
            if lhs != rhs:
                return f"projector not additive over {a}, {b}"
    return ""


def check_ext_consistency() -> str:
    for a, b in itertools.product([(2,), (4,), (2, 2), (3,)], [(2,), (4,), (2, 2), (3,)]):
        H = z2_b2_h2(a, b)
        sym = 0
        for c in H.classes():
            if not commutator_pairing(H.representative(c)).entries.any():
                sym += 1
        if sym != ext_space(a, b).order:
            return f"symmetric classes {sym} ≠ |Ext| over {a}, {b}"
    return ""


def check_bilinear_subgroup() -> str:
    for a, b in [((2, 2), (2,)), ((3,), (3,)), ((2, 4), (2,)), ((2, 2), (4,))]:
        S = h2_bil(a, b)
        for c in S.elements():
            beta = S.bilinear_representative(c)
            if beta is None or S.parent.project(beta.to_cocycle()) != tuple(c):
                return f"class {c} over {a}, {b} lacks a bilinear representative"
    return ""


def check_schreier(seed: int = 4) -> str:
    rng = np.random.default_rng(seed)
    for a, b in [((2, 2), (2,)), ((4,), (2,)), ((2,), (4,)), ((3,), (3,)), ((2, 2), (4,))]:
        H = z2_b2_h2(a, b)
        A, B = H.group_a, H.group_b
        for c in H.classes():
            g1 = H.representative(c)
            vals = rng.integers(0, 8, size=(A.order, B.rank))
            vals[0] = 0
            g2 = g1 + coboundary(CochainMap(A, B, vals))
            h = cohomologous(g1, g2)
            G1, G2 = ExtensionGroup(g1), ExtensionGroup(g2)
            if G1.order > 256:
                continue
            if not verify_equivalence(G1, G2, equivalence_map(G1, G2, h)):
                return f"Schreier map fails over {a}, {b} class {c}"
    return ""


def check_group_axioms() -> str:
    for gamma in [cyclic_carry(3), cyclic_carry(2), commutator_power_cocycle(2), commutator_power_cocycle(3)]:
        rep = verify_group_axioms(ExtensionGroup(gamma))
        if not rep.ok:
            return f"group axioms fail: {rep.failures}"
    return ""


def check_embeddings() -> str:
    cases = [cyclic_carry(2), cyclic_carry(3), commutator_power_cocycle(2), commutator_power_cocycle(3)]
    for a, b in [((2, 2), (2,)), ((2, 4), (2,)), ((2, 2), (2, 2))]:
        _, basis = bilinear_basis(a, b)
        cases.extend(x.to_cocycle() for x in basis)
    for gamma in cases:
        E = embed(ExtensionGroup(gamma))
        if not all(E.checks.values()):
            return f"embedding check failed: {E.checks}"
    return ""


def check_jstar() -> str:
    groups = [(2,), (3,), (4,), (2, 2)]
    for a, b in itertools.product(groups, groups):
        rep = kernel_jstar_equals_ext(a, b)
        if not rep.ok:
            bad = [v for v in rep.verdicts if not v.ok]
            return f"j* check fails over {a}, {b}: {bad[:1]}"
    return ""


def check_denominator_bound(seed: int = 5) -> str:
    """m0·exp(A)·h = 0 whenever ∂h has denominators dividing m0."""
    rng = np.random.default_rng(seed)
    for a in [(2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)]:
        A = AbelianGroup(a)
        for _ in range(5):
            dens = rng.integers(1, 40, size=A.order)
            h = [Fraction(int(rng.integers(0, d)), int(d)) for d in dens]
            h[0] = Fraction(0)
            m0 = 1
            for x in range(A.order):
                for y in range(A.order):
                    v = (h[x] + h[y] - h[int(A.add_table[x, y])]) % 1
                    m0 = int(np.lcm(m0, v.denominator))
            N = witness_denominator_bound(A, m0)
            if any((N * v) % 1 for v in h):
                return f"bound fails on {a}"
    return ""


def check_round_trip() -> str:
    objs = [
        (serialize.group_to_json, serialize.group_from_json, AbelianGroup((2, 4))),
        (serialize.cocycle_to_json, serialize.cocycle_from_json, commutator_power_cocycle(2)),
        (serialize.bilinear_to_json, serialize.bilinear_from_json, bilinear_basis((2, 2), (2,))[1][1]),
        (serialize.embedding_to_json, serialize.embedding_from_json, embed(ExtensionGroup(cyclic_carry(3)))),
    ]
    for to, frm, x in objs:
        s1 = serialize.dumps(to(x))
        s2 = serialize.dumps(to(frm(serialize.loads(s1))))
        if s1 != s2:
            return f"round trip changed {type(x).__name__}"
    return ""


ALL_CHECKS = [
    ("smith normal form on random matrices", check_smith),
    ("congruence solver on random systems", check_solve),
    ("canonical decomposition round trip", check_canonicalize),
    ("coboundaries are cohomologically trivial", check_coboundaries),
    ("|H²| equals |Ext|·|Hom(Λ²A, B)|", check_h2_formula),
    ("class projector is additive", check_projector_homomorphism),
    ("symmetric classes form Ext", check_ext_consistency),
    ("bilinear subgroup has bilinear representatives", check_bilinear_subgroup),
    ("cohomologous cocycles give isomorphic extensions", check_schreier),
    ("extension group axioms", check_group_axioms),
    ("embedding invariants", check_embeddings),
    ("j* kernel equals Ext", check_jstar),
    ("witness denominator bound", check_denominator_bound),
    ("serialization round trip", check_round_trip),
]


def run_all(names=None) -> list:
    out = []
    for name, fn in ALL_CHECKS:
        if names and name not in names:
            continue
        t = time.perf_counter()
        try:
            detail = fn()
        except Exception as exc:  # a crash is a failed property
            detail = f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, not detail, detail, time.perf_counter() - t))
    return out
