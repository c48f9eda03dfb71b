import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cochain.errors import BaseMismatch, NotAComplex, NotSurjective
from cochain.exactmod import (
    ElementaryDivisors,
    FPModule,
    IntegersMod,
    PrimeField,
    Z,
    complex_from_dense,
    hom_modules,
    homology_at,
    is_split_surjection,
    smith_normal_form,
    tensor_modules,
)

import oracles


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def diag(D):
    return [D[i][i] for i in range(min(len(D), len(D[0])))]


# --- Smith normal form -------------------------------------------------------


def test_snf_identity():
    I = [[int(i == j) for j in range(3)] for i in range(3)]
    _, D, _ = smith_normal_form(I)
    assert D == I


def test_snf_2x2_example():
    A = [[2, 4], [6, 8]]
    U, D, V = smith_normal_form(A)
    assert D == [[2, 0], [0, 4]]
    # independent check: d1 = gcd of entries, d1 d2 = |det|
    assert D[0][0] == oracles.gcd_of_entries(A)
    assert D[0][0] * D[1][1] == abs(oracles.det(A))
    assert matmul(matmul(U, A), V) == D


def test_snf_zero():
    _, D, _ = smith_normal_form([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_snf_round_trip_property(A):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(oracles.det(U)) == 1 and abs(oracles.det(V)) == 1
    d = diag(D)
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # zeros come last
    assert d == nz + [0] * (len(d) - len(nz))
    if len(A) == len(A[0]):
        prod = 1
        for x in d:
            prod *= x
        assert prod == abs(oracles.det(A))


# --- tensor and Hom ----------------------------------------------------------


def test_tensor_examples():
    Z2, Z3 = FPModule.cyclic(Z, 2), FPModule.cyclic(Z, 3)
    assert tensor_modules(Z2, Z2).divisors() == ElementaryDivisors((2,))
    assert tensor_modules(Z2, Z3).divisors().is_zero
    assert tensor_modules(FPModule.free(Z, 2), FPModule.free(Z, 3)).divisors() == ElementaryDivisors((0,) * 6)


def test_hom_examples():
    Z2 = FPModule.cyclic(Z, 2)
    assert hom_modules(Z2, Z2).divisors() == ElementaryDivisors((2,))
    assert hom_modules(Z2, FPModule.free(Z, 1)).divisors().is_zero
    B = FPModule.diagonal(Z, [2, 6])
    assert hom_modules(FPModule.free(Z, 3), B).divisors() == ElementaryDivisors((2, 2, 2, 6, 6, 6))


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        tensor_modules(FPModule.cyclic(Z, 2), FPModule.free(PrimeField(2), 1))


orders_m = st.sampled_from([4, 6, 8, 9, 12]).flatmap(
    lambda m: st.tuples(
        st.just(m),
        st.lists(st.sampled_from([d for d in range(2, m + 1) if m % d == 0]), min_size=1, max_size=2),
        st.lists(st.sampled_from([d for d in range(2, m + 1) if m % d == 0]), min_size=1, max_size=2),
    )
)


@given(orders_m)
def test_tensor_hom_brute_force(data):
    m, a, b = data
    oa = 1
    for x in a + b:
        oa *= x
    if oa > 64 * 64:
        return
    base = IntegersMod(m)
    A, B = FPModule.diagonal(base, a), FPModule.diagonal(base, b)
    assert tensor_modules(A, B).divisors().order == oracles.tensor_order(a, b)
    assert hom_modules(A, B).divisors().order == oracles.hom_order(a, b)


# --- split surjections -------------------------------------------------------


def test_split_surjection_examples():
    assert is_split_surjection([[1]], FPModule.free(Z, 1), FPModule.cyclic(Z, 2)) == (False, None)
    ok, U = is_split_surjection([[1, 0]], FPModule.free(Z, 2), FPModule.free(Z, 1))
    assert ok and matmul([[1, 0]], U) == [[1]]
    F2 = PrimeField(2)
    for f in ([[1, 0]], [[0, 1]], [[1, 1]]):
        ok, U = is_split_surjection(f, FPModule.free(F2, 2), FPModule.free(F2, 1))
        assert ok and matmul(f, U)[0][0] % 2 == 1


def test_not_surjective():
    with pytest.raises(NotSurjective):
        is_split_surjection([[2]], FPModule.free(Z, 1), FPModule.free(Z, 1))


# --- homology ----------------------------------------------------------------


def test_homology_times_two():
    C = complex_from_dense(Z, {0: FPModule.free(Z, 1), 1: FPModule.free(Z, 1)}, {0: [[2]]})
    assert homology_at(C, 1) == ElementaryDivisors((2,))
    assert homology_at(C, 0).is_zero


def test_not_a_complex():
    F = FPModule.free(Z, 1)
    C = complex_from_dense(Z, {0: F, 1: F, 2: F}, {0: [[1]], 1: [[1]]})
    with pytest.raises(NotAComplex):
        homology_at(C, 1)


def random_unimodular(n, rng):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
    return U


def inverse_unimodular(U):
    n = len(U)
    A = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(U)]
    # fraction-free elimination works since det = +-1; use rationals to keep it simple
    from fractions import Fraction

    A = [[Fraction(x) for x in row] for row in A]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c])
        A[c], A[piv] = A[piv], A[c]
        A[c] = [x / A[c][c] for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = [[int(x) for x in row[n:]] for row in A]
    assert all(x.denominator == 1 for row in A for x in row[n:])
    return out


@given(st.integers(0, 10_000))
def test_homology_invariant_under_base_change(seed):
    rng = random.Random(seed)
    # 0 -> Z^2 -> Z^3 -> Z^2 -> 0 with d1 d0 = 0
    d0 = [[2, 0], [0, 3], [0, 0]]
    d1 = [[0, 0, 5], [0, 0, 0]]
    mods = {k: FPModule.free(Z, n) for k, n in ((0, 2), (1, 3), (2, 2))}
    C = complex_from_dense(Z, mods, {0: d0, 1: d1})
    before = [homology_at(C, k) for k in range(3)]
    P = [random_unimodular(n, rng) for n in (2, 3, 2)]
    Pi = [inverse_unimodular(U) for U in P]
    e0 = matmul(matmul(P[1], d0), Pi[0])
    e1 = matmul(matmul(P[2], d1), Pi[1])
    C2 = complex_from_dense(Z, mods, {0: e0, 1: e1})
    after = [homology_at(C2, k) for k in range(3)]
    assert before == after
    assert before == [ElementaryDivisors(()), ElementaryDivisors((6,)), ElementaryDivisors((5, 0))]
