import numpy as np
import pytest

import mackeykit.linalg as la
from mackeykit.fields import gf_make

from oracles import rational_det, rational_rank


def rand_int_matrix(rng, m, n, lo=-9, hi=9):
    A = la.zeros(m, n)
    for i in range(m):
        for j in range(n):
            A[i, j] = int(rng.integers(lo, hi + 1))
    return A


# --- Smith normal form -------------------------------------------------------


@pytest.mark.parametrize("shape", [(1, 1), (2, 3), (3, 2), (4, 4), (5, 3), (3, 6)])
def test_smith_form_properties(shape):
    rng = np.random.default_rng(20_000 + shape[0] * 10 + shape[1])
    for _ in range(8):
        A = rand_int_matrix(rng, *shape)
        S = la.smith_normal_form(A)
        # defining identity
        assert la.mat_eq(la.mmul_chain(S.U, A, S.V), S.D)
        # unimodularity via an independent determinant (fraction elimination)
        assert abs(rational_det(S.U)) == 1
        assert abs(rational_det(S.V)) == 1
        # tracked inverses really are inverses
        assert la.mat_eq(la.mmul(S.U, S.Uinv), la.eye(shape[0]))
        assert la.mat_eq(la.mmul(S.V, S.Vinv), la.eye(shape[1]))
        # diagonal, nonnegative, divisibility chain
        d = S.diagonal
        for i in range(shape[0]):
            for j in range(shape[1]):
                if i != j:
                    assert S.D[i, j] == 0
        assert all(x >= 0 for x in d)
        for a, b in zip(d, d[1:]):
            if a != 0:
                assert b % a == 0
            else:
                assert b == 0


def test_smith_form_known():
    A = la.mat([[2, 0], [0, 3]])
    S = la.smith_normal_form(A)
    assert S.diagonal == [1, 6]
    assert S.nonunit_invariants() == [6]

    B = la.mat([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    # d1 = gcd(entries) = 2, d1*d2 = gcd(2x2 minors) = 4, d1*d2*d3 = |det| = 624
    assert la.smith_normal_form(B).diagonal == [2, 2, 156]


def test_smith_deterministic():
    A = la.mat([[4, 6], [6, 4]])
    S1 = la.smith_normal_form(A)
    S2 = la.smith_normal_form(A)
    assert la.mat_eq(S1.U, S2.U) and la.mat_eq(S1.V, S2.V)


def test_int_rank_matches_rational_oracle():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        A = rand_int_matrix(rng, m, n, -4, 4)
        assert la.int_rank(A) == rational_rank(A)


def test_bareiss_det_matches_rational_oracle():
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        A = rand_int_matrix(rng, n, n, -6, 6)
        assert la.bareiss_det(A) == rational_det(A)


# --- integer solving and lattices --------------------------------------------


def test_solve_int_roundtrip():
    rng = np.random.default_rng(9)
    for _ in range(15):
        m, n, k = int(rng.integers(1, 5)), int(rng.integers(1, 5)), int(rng.integers(1, 4))
        A = rand_int_matrix(rng, m, n)
        X = rand_int_matrix(rng, n, k)
        B = la.mmul(A, X)
        X2 = la.solve_int(A, B)
        assert X2 is not None
        assert la.mat_eq(la.mmul(A, X2), B)


def test_solve_int_unsolvable():
    A = la.mat([[2]])
    B = la.mat([[1]])
    assert la.solve_int(A, B) is None


def test_nullspace_int():
    rng = np.random.default_rng(10)
    for _ in range(15):
        m, n = int(rng.integers(1, 5)), int(rng.integers(2, 6))
        A = rand_int_matrix(rng, m, n, -3, 3)
        N = la.nullspace_int(A)
        if N.shape[1]:
            assert la.is_zero_mat(la.mmul(A, N))
        # rank-nullity over Q
        assert N.shape[1] == n - rational_rank(A)
        assert rational_rank(N) == N.shape[1] if N.shape[1] else True


def test_lattice_ops():
    rng = np.random.default_rng(11)
    A = rand_int_matrix(rng, 4, 6, -5, 5)
    L = la.column_lattice_basis(A)
    # mutual containment
    assert la.lattice_contains(L, A)
    assert la.lattice_contains(A, L)
    assert la.lattice_equal(A, L)
    # unimodular column ops do not change the lattice
    U = la.mat([[1, 1, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 2], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])
    assert la.lattice_equal(A, la.mmul(A, U))
    # strict sublattice
    assert not la.lattice_contains(la.scalar_mul(2, A), A) or la.is_zero_mat(A)


# --- field linear algebra ----------------------------------------------------


@pytest.mark.parametrize("p,k", [(2, 1), (5, 1), (2, 2), (3, 2)])
def test_field_solve_and_nullspace(p, k):
    F = gf_make(p, k)
    rng = np.random.default_rng(100 * p + k)
    elems = list(F.elements())
    for _ in range(10):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        A = la.zeros(m, n)
        for i in range(m):
            for j in range(n):
                A[i, j] = elems[int(rng.integers(0, len(elems)))]
        X = la.zeros(n, 2)
        for i in range(n):
            for j in range(2):
                X[i, j] = elems[int(rng.integers(0, len(elems)))]
        B = la.mmul(A, X, base=F)
        X2 = la.solve(A, B, F)
        assert X2 is not None
        assert la.mat_eq(la.mmul(A, X2, base=F), B)
        N = la.nullspace(A, F)
        assert la.rank(A, F) + N.shape[1] == n
        if N.shape[1]:
            assert la.is_zero_mat(la.mmul(A, N, base=F))


def test_inv_field():
    F = gf_make(7, 1)
    rng = np.random.default_rng(77)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        A = la.zeros(n, n)
        for i in range(n):
            for j in range(n):
                A[i, j] = F.embed(int(rng.integers(0, 7)))
        if la.rank(A, F) < n:
            continue
        Ai = la.inv_field(A, F)
        assert la.mat_eq(la.mmul(A, Ai, base=F), la._field_eye(n, F))


def test_mmul_fast_path_matches_generic():
    # the vectorized prime-field product must agree with plain object dot
    F = gf_make(5, 1)
    rng = np.random.default_rng(55)
    A = la.zeros(3, 4)
    B = la.zeros(4, 2)
    for M in (A, B):
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                M[i, j] = F.embed(int(rng.integers(0, 5)))
    fast = la.mmul(A, B, base=F)
    slow = np.dot(A, B)
    assert la.mat_eq(fast, slow)


def test_solve_inconsistent_field():
    F = gf_make(2, 1)
    A = la.mat([[F.zero]])
    B = la.mat([[F.one]])
    assert la.solve(A, B, F) is None
