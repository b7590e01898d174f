import itertools
from math import comb

import numpy as np
import pytest

from centext.abelian import AbelianGroup
from centext.catalog import commutator_power_cocycle, cyclic_carry, square_form
from centext.cocycle import (
    BilinearMatrix,
    CochainMap,
    Cocycle,
    bilinear_basis,
    coboundary,
    cohomologous,
    commutator_pairing,
)
from centext.cohomology import z2_b2_h2
from centext.errors import CapacityError, InvalidInputError
from centext.twisted import (
    ExtensionGroup,
    build_extension,
    equivalence_map,
    is_twisted_product_class,
    structure_report,
    verify_equivalence,
    verify_group_axioms,
)

Z3 = AbelianGroup((3,))


def literal_power(G, g, n):
    out = G.identity
    for _ in range(n):
        out = G.mul(out, g)
    return out


def test_direct_sum():
    A, B = AbelianGroup((3,)), AbelianGroup((3,))
    G = build_extension(A, B, Cocycle.zero(A, B))
    st = structure_report(G)
    assert st.abelian and st.exponent == 3 and st.abelian_type.factors == (3, 3)


def test_carry_extension_is_cyclic():
    for p in (2, 3, 5):
        st = structure_report(ExtensionGroup(cyclic_carry(p)))
        assert st.abelian and st.exponent == p * p and st.abelian_type.factors == (p * p,)


def test_square_form_has_exponent_p():
    for p in (3, 5):
        G = ExtensionGroup(square_form(p).to_cocycle())
        assert all(G.power(g, p) == G.identity for g in G.elements())
        assert structure_report(G).exponent == p


def test_invalid_cocycle_rejected():
    T = np.ones((3, 3, 1), dtype=np.int64)
    with pytest.raises(InvalidInputError):
        ExtensionGroup(Cocycle(Z3, Z3, T))


def test_capacity_bound():
    with pytest.raises(CapacityError):
        ExtensionGroup(cyclic_carry(3), max_order=5)


def test_power_examples():
    G = ExtensionGroup(cyclic_carry(3))
    g = ((1,), (0,))
    assert G.power(g, 0) == G.identity
    assert G.power(g, 3) == ((0,), (1,))
    assert literal_power(G, g, 3) == ((0,), (1,))


@pytest.mark.parametrize("gamma", [cyclic_carry(3), commutator_power_cocycle(2), square_form(5).to_cocycle()])
def test_power_matches_repeated_multiplication(gamma):
    G = ExtensionGroup(gamma)
    for g in G.elements():
        for n in range(0, 10):
            assert G.power(g, n) == literal_power(G, g, n)
        assert G.mul(G.power(g, -2), G.power(g, 2)) == G.identity


def test_power_closed_form_for_bilinear():
    beta = square_form(3)
    G = ExtensionGroup(beta.to_cocycle())
    for (a,), (b,) in G.elements():
        for n in range(7):
            expect = ((n * a) % 3,), ((n * b + comb(n, 2) * a * a) % 3,)
            assert G.power(((a,), (b,)), n) == expect


def test_commutators():
    G = ExtensionGroup(commutator_power_cocycle(3))
    for g in G.elements():
        assert G.commutator(g, g) == G.identity
    A = AbelianGroup((3, 3))
    E = np.zeros((2, 2, 1), dtype=np.int64)
    E[0, 1, 0] = 1
    H = ExtensionGroup(BilinearMatrix(A, Z3, E).to_cocycle())
    assert H.commutator(H.ell((1, 0)), H.ell((0, 1))) == ((0, 0), (1,))
    S = ExtensionGroup(cyclic_carry(3))
    assert all(S.commutator(g, h) == S.identity for g in S.elements() for h in S.elements())


def test_commutators_lie_in_b():
    G = ExtensionGroup(commutator_power_cocycle(2))
    for g, h in itertools.product(G.elements(), repeat=2):
        c = G.commutator(g, h)
        assert c[0] == (0, 0, 0)


@pytest.mark.parametrize("gamma", [
    cyclic_carry(3), commutator_power_cocycle(2), commutator_power_cocycle(3), square_form(3).to_cocycle(),
])
def test_group_axioms(gamma):
    rep = verify_group_axioms(ExtensionGroup(gamma))
    assert rep.ok, rep.failures


def test_transversal_recovers_cocycle():
    gamma = commutator_power_cocycle(3)
    G = ExtensionGroup(gamma)
    A = G.base_a
    for x, y in itertools.product(A.elements(), repeat=2):
        s = A.reduce([a + b for a, b in zip(x, y)])
        lhs = G.mul(G.ell(x), G.ell(y))
        rhs = G.mul(G.ell(s), G.i(gamma.value(x, y)))
        assert lhs == rhs
        assert G.pi(G.ell(x)) == x


def test_commutator_power_structure():
    st = structure_report(ExtensionGroup(commutator_power_cocycle(3)))
    assert st.order == 81 and st.exponent == 9 and st.nilpotency_class == 2
    assert st.derived_subgroup.factors == (3,)


def test_abelian_iff_symmetric_iff_zero_pairing():
    for a, b in [((2,), (2,)), ((2, 2), (2,)), ((4,), (2,)), ((2, 2), (4,)), ((3, 3), (3,)), ((2, 4), (2,))]:
        H = z2_b2_h2(a, b)
        for c in H.classes():
            g = H.representative(c)
            G = ExtensionGroup(g)
            if G.order > 1024:
                continue
            zero_pairing = not commutator_pairing(g).entries.any()
            assert G.is_abelian() == zero_pairing == g.is_symmetric()


def test_schreier_isomorphisms():
    rng = np.random.default_rng(3)
    for a, b in [((2, 2), (2,)), ((4,), (4,)), ((3,), (3,)), ((2, 2), (2, 2)), ((2, 4), (2,)), ((8,), (2,))]:
        H = z2_b2_h2(a, b)
        A, B = H.group_a, H.group_b
        for c in H.classes():
            g1 = H.representative(c)
            vals = rng.integers(0, 9, size=(A.order, B.rank))
            vals[0] = 0
            g2 = g1 + coboundary(CochainMap(A, B, vals))
            h = cohomologous(g1, g2)
            G1, G2 = ExtensionGroup(g1), ExtensionGroup(g2)
            assert G1.order <= 256
            assert verify_equivalence(G1, G2, equivalence_map(G1, G2, h))


def test_twisted_product_class():
    beta = square_form(3)
    rep = is_twisted_product_class(ExtensionGroup(beta.to_cocycle()))
    assert rep is not None
    assert beta.to_cocycle() - rep.delta.to_cocycle() == coboundary(rep.witness)
    assert is_twisted_product_class(ExtensionGroup(cyclic_carry(3))) is None
    assert is_twisted_product_class(ExtensionGroup(commutator_power_cocycle(3))) is None


def test_twisted_product_cap():
    with pytest.raises(CapacityError):
        is_twisted_product_class(commutator_power_cocycle(3), max_candidates=10)


def test_shifted_bilinear_is_found():
    rng = np.random.default_rng(8)
    A, B = AbelianGroup((2, 2)), AbelianGroup((2,))
    for beta in bilinear_basis(A, B)[1]:
        vals = rng.integers(0, 2, size=(4, 1))
        vals[0] = 0
        g = beta.to_cocycle() + coboundary(CochainMap(A, B, vals))
        rep = is_twisted_product_class(g)
        assert rep is not None and cohomologous(g, rep.delta.to_cocycle()) is not None
