import itertools
from fractions import Fraction
from math import gcd, prod

import numpy as np
import pytest

from centext.abelian import AbelianGroup
from centext.catalog import commutator_power_cocycle, cyclic_carry
from centext.cocycle import BilinearMatrix, Cocycle, bilinear_basis, commutator_pairing
from centext.cohomology import qz_table_of_bilinear, solve_coboundary_qz
from centext.embedding import (
    BilinearQZ,
    beta_tilde,
    divisible_target,
    embed,
    extend_f,
    extension_value,
    factor_map,
    section_map,
    universal_triple,
    verify_universal_property,
)
from centext.errors import InvalidInputError
from centext.qz import QZVector
from centext.twisted import ExtensionGroup


def q(*xs):
    return QZVector([Fraction(x) for x in xs])


def alt(a, b, pairs):
    """Alternating map with α(g_i, g_j) = v = -α(g_j, g_i) for (i, j, v) in pairs."""
    A, B = AbelianGroup(a), AbelianGroup(b)
    E = np.zeros((A.rank, A.rank, B.rank), dtype=np.int64)
    for i, j, v in pairs:
        E[i, j] = v
        E[j, i] = [-x for x in v]
    return BilinearMatrix(A, B, E % np.array(B.factors, dtype=np.int64) if B.rank else E)


def expected_c_order(a, b):
    """|C| = |B|·|A⊗A| / |Λ²A| for the presentation of the universal group."""
    tensor = prod(gcd(x, y) for x in a for y in a)
    wedge = prod(gcd(a[i], a[j]) for i in range(len(a)) for j in range(i + 1, len(a)))
    return prod(b) * tensor // wedge


ALPHAS = [
    ((2,), (2,), []),
    ((3,), (3,), []),
    ((5,), (5,), []),
    ((3, 3, 3), (3,), [(0, 1, [1])]),
    ((2, 2), (2,), [(0, 1, [1])]),
    ((2, 4), (4,), [(0, 1, [2])]),
    ((2, 2), (2, 2), [(0, 1, [1, 1])]),
    ((4, 4), (2,), [(0, 1, [1])]),
    ((2, 2, 2), (2,), [(0, 1, [1]), (1, 2, [1])]),
    ((2, 2), (), []),
    ((2, 4), (), []),
    ((), (3,), []),
]


@pytest.mark.parametrize("a,b,pairs", ALPHAS)
def test_universal_triple_invariants(a, b, pairs):
    alpha = alt(a, b, pairs)
    T = universal_triple(a, b, alpha)
    C = T.c_group
    assert C.order == expected_c_order(a, b)
    A = AbelianGroup(a)
    for x in A.elements():
        for y in A.elements():
            lhs = C.reduce([u - v for u, v in zip(T.beta_value(x, y), T.beta_value(y, x))])
            assert lhs == T.apply_i_b(alpha.value(x, y))
    # i_B injective
    B = AbelianGroup(b)
    assert len({T.apply_i_b(v) for v in B.elements()}) == B.order


def test_universal_triple_examples():
    for p in (2, 3, 5):
        T = universal_triple((p,), (p,), alt((p,), (p,), []))
        assert T.c_group.factors == (p, p)
        # i_B(1) and β(g, g) are independent
        span = {T.c_group.reduce([s * u + t * v for u, v in zip(T.apply_i_b([1]), T.beta[0][0])])
                for s in range(p) for t in range(p)}
        assert len(span) == p * p
    T = universal_triple((3, 3, 3), (3,), alt((3, 3, 3), (3,), [(0, 1, [1])]))
    assert T.c_group.factors == (3,) * 7
    C = T.c_group
    assert T.apply_i_b([1]) == C.reduce([u - v for u, v in zip(T.beta[0][1], T.beta[1][0])])
    assert T.beta[0][2] == T.beta[2][0] and T.beta[1][2] == T.beta[2][1]
    T = universal_triple((2, 4), (), alt((2, 4), (), []))
    assert T.c_group.order == 16 and T.beta[0][1] == T.beta[1][0]


def test_universal_triple_rejects_non_alternating():
    A = AbelianGroup((3,))
    with pytest.raises(InvalidInputError):
        universal_triple(A, A, BilinearMatrix(A, A, [[[1]]]))


def test_universal_property_self_and_section():
    for a, b, pairs in ALPHAS:
        alpha = alt(a, b, pairs)
        T = universal_triple(a, b, alpha)
        C = T.c_group
        ident = [[int(r == c) for c in range(C.rank)] for r in range(C.rank)]
        beta = [[list(T.beta[i][j]) for j in range(len(a))] for i in range(len(a))]
        assert verify_universal_property(T, C, beta, T.i_b) == ident
        # the section: C' = B, β'(g_i, g_j) = α_ij for i < j and 0 otherwise
        B = AbelianGroup(b)
        k = len(a)
        upper = [[alpha.entries[i, j].tolist() if i < j else [0] * B.rank for j in range(k)] for i in range(k)]
        idB = [[int(r == c) for c in range(B.rank)] for r in range(B.rank)]
        psi = verify_universal_property(T, B, upper, idB)
        assert psi == section_map(T)
        for v in B.elements():
            iv = T.apply_i_b(v)
            assert B.reduce([sum(r * x for r, x in zip(row, iv)) for row in psi]) == v


def test_transposed_section_has_wrong_sign():
    """β'(x, y) = Σ_{i<j} y_i x_j α(g_i, g_j) antisymmetrises to -α, not α."""
    a, b = (4, 4), (4,)
    alpha = alt(a, b, [(0, 1, [1])])
    T = universal_triple(a, b, alpha)
    lower = [[[0], [0]], [[1], [0]]]
    with pytest.raises(InvalidInputError):
        verify_universal_property(T, AbelianGroup(b), lower, [[1]])
    psi = verify_universal_property(T, AbelianGroup(b), lower, [[3]])
    # it splits -i_B instead of i_B
    for v in range(4):
        iv = T.apply_i_b([v])
        assert sum(r * x for r, x in zip(psi[0], iv)) % 4 == (-v) % 4


def test_universal_property_trivial_target():
    a, b = (2, 2), (2,)
    T = universal_triple(a, b, alt(a, b, [(0, 1, [1])]))
    with pytest.raises(InvalidInputError):
        verify_universal_property(T, AbelianGroup(()), [[[], []], [[], []]], [[]])


def test_divisible_target():
    L = divisible_target((3,))
    assert (L.l_rank, L.j_gens) == (1, (q(Fraction(1, 3)),))
    L = divisible_target(())
    assert L.l_rank == 0 and L.j([]) == QZVector([])
    L = divisible_target((2, 4))
    assert L.j_gens == (q(Fraction(1, 2), 0), q(0, Fraction(1, 4)))
    assert L.j((1, 3)) == q(Fraction(1, 2), Fraction(3, 4))
    for v in AbelianGroup((2, 4)).elements():
        assert L.j(v).is_zero() == (not any(v))


def test_factor_map_examples():
    p = 3
    G = ExtensionGroup(commutator_power_cocycle(p))
    T = universal_triple(G.base_a, G.fiber_b, commutator_pairing(G.gamma))
    L = divisible_target(G.fiber_b)
    for route in ("section", "solve"):
        bt = beta_tilde(T, factor_map(T, L, route))
        for i, j in itertools.product(range(3), repeat=2):
            assert bt.entries[i][j] == (q(Fraction(1, p)) if (i, j) == (0, 1) else q(0))
    G = ExtensionGroup(cyclic_carry(p))
    T = universal_triple(G.base_a, G.fiber_b, commutator_pairing(G.gamma))
    chi = factor_map(T, divisible_target(G.fiber_b))
    assert beta_tilde(T, chi).is_zero()
    assert chi.apply(T.apply_i_b([1])) == q(Fraction(1, p))
    # A trivial: C = B and χ = j
    T = universal_triple((), (2, 4), alt((), (2, 4), []))
    L = divisible_target((2, 4))
    chi = factor_map(T, L)
    assert T.c_group.order == 8
    for v in AbelianGroup((2, 4)).elements():
        assert chi.apply(T.apply_i_b(v)) == L.j(v)
    with pytest.raises(InvalidInputError):
        factor_map(T, L, route="guess")


@pytest.mark.parametrize("a,b,pairs", ALPHAS)
def test_factor_routes_differ_by_coboundary(a, b, pairs):
    T = universal_triple(a, b, alt(a, b, pairs))
    L = divisible_target(b)
    b1 = beta_tilde(T, factor_map(T, L, "section"))
    b2 = beta_tilde(T, factor_map(T, L, "solve"))
    diff = BilinearQZ(T.group_a, L.l_rank,
                      [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(b1.entries, b2.entries)])
    assert diff.is_symmetric()
    assert solve_coboundary_qz(T.group_a, qz_table_of_bilinear(diff)) is not None


def test_extend_f_golden_values():
    p = 3
    G = ExtensionGroup(commutator_power_cocycle(p))
    E = embed(G)
    x, y, z = AbelianGroup((p, p, p)).generators()
    assert E.f_of(G.ell(x)) == q(0)
    assert E.f_of(G.ell(y)) == q(0)
    assert E.f_of(G.ell(z)) == q(Fraction(1, 9))
    assert E.image_of_f.factors == (9,)
    G = ExtensionGroup(cyclic_carry(p))
    E = embed(G)
    assert E.f_of(G.ell((1,))) == q(Fraction(1, 9))
    assert E.phi(G.ell((1,))) == ((1,), q(Fraction(1, 9)))
    assert E.target_is_abelian()


def test_direct_sum_case():
    A, B = AbelianGroup((2, 2)), AbelianGroup((3,))
    G = ExtensionGroup(Cocycle.zero(A, B))
    E = embed(G)
    assert E.beta_tilde.is_zero()
    for idx in G.all_indices:
        a, b = G.element(int(idx))
        assert E.phi(int(idx)) == (a, E.j(b))


def test_case_without_root():
    assert extension_value(None, None, q(Fraction(1, 2))) == q(0)
    assert extension_value(q(Fraction(1, 3)), 3, q(0)) == q(Fraction(1, 9))
    # f(2g) = 2 f(g) + β̃(g, g) is solved for f(g)
    v = extension_value(q(Fraction(1, 2)), 2, q(Fraction(1, 4)))
    assert 2 * v + q(Fraction(1, 4)) == q(Fraction(1, 2))


def test_seed_violation_is_reported():
    G = ExtensionGroup(commutator_power_cocycle(3))
    with pytest.raises(InvalidInputError):
        extend_f(G, BilinearQZ.zero(G.base_a, 1), divisible_target(G.fiber_b))


def embedding_cases():
    out = [cyclic_carry(2), cyclic_carry(3), cyclic_carry(4), commutator_power_cocycle(2),
           commutator_power_cocycle(3)]
    for a, b in [((2, 2), (2,)), ((2, 4), (2,)), ((2, 2), (2, 2)), ((3, 3), (3,))]:
        _, basis = bilinear_basis(a, b)
        out.extend(x.to_cocycle() for x in basis)
    return out


@pytest.mark.parametrize("gamma", embedding_cases(), ids=lambda g: f"{g.group_a.factors}-{g.group_b.factors}")
def test_embedding_from_first_principles(gamma):
    """Check φ, f and h with plain QZVector arithmetic, independent of the verifier."""
    G = ExtensionGroup(gamma)
    E = embed(G)
    A = G.base_a
    bt = E.beta_tilde
    n = G.order
    coords = [G.element(i) for i in range(n)]
    # every element through every two-factor decomposition
    for w in range(n):
        for u in range(n):
            v = int(G.mul_idx(G.inv_idx(u), w))
            assert E.f[w] == E.f[u] + E.f[v] + bt.value(coords[u][0], coords[v][0])
    # φ is an injective homomorphism into A ×_β̃ L
    images = set()
    for u in range(n):
        images.add(E.phi(u))
        for v in range(min(n, 40)):
            (a1, l1), (a2, l2) = E.phi(u), E.phi(v)
            prod_ = (A.reduce([x + y for x, y in zip(a1, a2)]), l1 + l2 + bt.value(a1, a2))
            assert prod_ == E.phi(int(G.mul_idx(u, v)))
    assert len(images) == n
    # ∂h = j∘γ - β̃
    elems = list(A.elements())
    for x, ax in enumerate(elems):
        for y, ay in enumerate(elems):
            s = int(A.add_table[x, y])
            lhs = E.h[x] + E.h[y] - E.h[s]
            assert lhs == E.j(gamma.table[x, y].tolist()) - bt.value(ax, ay)


def test_l_depends_only_on_b():
    B = (3,)
    seen = set()
    for gamma in [cyclic_carry(3), commutator_power_cocycle(3), Cocycle.zero((2, 2), B),
                  bilinear_basis((3, 3), B)[1][1].to_cocycle()]:
        E = embed(ExtensionGroup(gamma))
        seen.add((E.l_rank, E.target.j_gens))
    assert seen == {(1, (q(Fraction(1, 3)),))}


def test_both_routes_embed():
    for gamma in embedding_cases()[:6]:
        G = ExtensionGroup(gamma)
        E1, E2 = embed(G, "section"), embed(G, "solve")
        assert all(E1.checks.values()) and all(E2.checks.values())
