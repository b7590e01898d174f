import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from centext import linalg


def small_matrices(max_dim=5, bound=20):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def test_smith_of_small_example():
    U, D, V = linalg.smith_normal_form([[2, 4], [6, 8]])
    assert D == [[2, 0], [0, 4]]
    assert linalg.matmul(linalg.matmul(U, [[2, 4], [6, 8]]), V) == D


def test_smith_of_zero_and_empty():
    U, D, V = linalg.smith_normal_form([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]
    assert linalg.invariant_factors([], 3) == []


def test_smith_is_deterministic():
    M = [[6, 4, 2], [3, 9, 12], [0, 5, 7]]
    assert linalg.smith_normal_form(M) == linalg.smith_normal_form(M)


@settings(max_examples=200, deadline=None)
@given(small_matrices())
def test_smith_matches_sympy_and_is_unimodular(M):
    sf = linalg.smith_form(M, inverses=True)
    n = len(M[0])
    assert linalg.matmul(linalg.matmul(sf.U, M), sf.V) == sf.D
    assert linalg.is_smith_normal_form(sf.D)
    assert abs(linalg.determinant(sf.U)) == 1 and abs(linalg.determinant(sf.V)) == 1
    assert linalg.matmul(sf.U, sf.U_inv) == linalg.identity(len(M))
    assert linalg.matmul(sf.V, sf.V_inv) == linalg.identity(n)
    ours = [d for d in sf.diagonal if d]
    theirs = [abs(int(d)) for d in sympy_invariants(Matrix(M), domain=ZZ) if d]
    assert ours == theirs


def test_thousand_random_matrices():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        m, n = rng.integers(1, 6, size=2)
        M = rng.integers(-9, 10, size=(m, n)).tolist()
        U, D, V = linalg.smith_normal_form(M)
        assert linalg.matmul(linalg.matmul(U, M), V) == D
        assert linalg.is_smith_normal_form(D)


def brute_solve(M, moduli, b, n, N):
    for x in itertools.product(range(N), repeat=n):
        if all((sum(r * v for r, v in zip(row, x)) - bi) % e == 0 for row, bi, e in zip(M, b, moduli)):
            return x
    return None


@pytest.mark.parametrize("M,moduli,b,expected", [
    ([[2]], [4], [1], None),
    ([[3]], [4], [1], [3]),
    ([[2]], [4], [2], [1]),
])
def test_solve_small_cases(M, moduli, b, expected):
    assert linalg.solve_congruences(M, moduli, b) == expected


def test_solve_underdetermined():
    sol = linalg.solve_congruences([[1, 1]], [5], [3])
    assert (sol[0] + sol[1] - 3) % 5 == 0


def test_solve_against_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        m, n = rng.integers(1, 4, size=2)
        M = rng.integers(-5, 6, size=(m, n)).tolist()
        moduli = rng.integers(1, 7, size=m).tolist()
        b = rng.integers(0, 7, size=m).tolist()
        N = int(np.lcm.reduce(moduli))
        sol = linalg.solve_congruences(M, moduli, b, n)
        brute = brute_solve(M, moduli, b, n, N)
        assert (sol is None) == (brute is None)
        if sol is not None:
            assert all((sum(r * v for r, v in zip(row, sol)) - bi) % e == 0
                       for row, bi, e in zip(M, b, moduli))


def test_solve_exact_rows():
    # x + 2y = 7 over Z, x ≡ 1 mod 3
    sol = linalg.solve_congruences([[1, 2], [1, 0]], [0, 3], [7, 1])
    assert sol[0] + 2 * sol[1] == 7 and sol[0] % 3 == 1


def test_count_solutions():
    assert linalg.count_solutions([[2]], 4) == 2
    assert linalg.count_solutions([[1, 1]], 3) == 3
    assert linalg.count_solutions([[0, 0]], 2) == 4


def test_integer_kernel():
    K = linalg.integer_kernel([[1, 1, 1]])
    assert len(K) == 3 and len(K[0]) == 2
    for j in range(2):
        assert sum(K[i][j] for i in range(3)) == 0


def test_quotient_invariants():
    assert linalg.quotient_invariants([[2, 0], [0, 4]], 2) == [2, 4]
    assert linalg.quotient_invariants([[6]], 1) == [6]
    assert linalg.quotient_invariants([[1]], 1) == []
    assert linalg.quotient_invariants([], 2) == [0, 0]


def test_subgroup_invariants():
    assert linalg.subgroup_invariants([[1]], [2]) == [2]
    assert linalg.subgroup_invariants([[1, 0], [0, 1]], [2, 2]) == [2, 2]
    assert linalg.subgroup_invariants([[2]], [8]) == [4]


def test_prime_power_parts_and_idempotent():
    assert linalg.prime_power_parts(360) == [(2, 3), (3, 2), (5, 1)]
    u = linalg.crt_idempotent(12, 4)
    assert u % 4 == 1 and u % 3 == 0


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (5, 1)])
def test_local_column_reduce_describes_the_kernel(p, k):
    rng = np.random.default_rng(p * 10 + k)
    q = p ** k
    for _ in range(20):
        m, n = rng.integers(1, 5, size=2)
        R = rng.integers(0, q, size=(m, n))
        lf = linalg.local_column_reduce(R.tolist(), p, k)
        assert ((lf.Q @ lf.Q_inv) % q == np.eye(n, dtype=np.int64)).all()
        kernel = 1
        for v in lf.valuations:
            kernel *= p ** v
        brute = sum(1 for x in itertools.product(range(q), repeat=n) if not ((R @ np.array(x)) % q).any())
        assert kernel == brute
