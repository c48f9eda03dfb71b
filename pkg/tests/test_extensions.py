import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cochain.algebra import (
    Bimodule,
    StructureAlgebra,
    cyclic_ring,
    dual_numbers,
    ground_algebra,
    trivial_bimodule,
    upper_triangular,
)
from cochain.errors import NoSolution, NoSplitting, NotACocycle, PeifferViolation
from cochain.exactmod import FPModule, IntegersMod, PrimeField
from cochain.extensions import (
    AbelianExtension,
    boundary_extensions_isomorphic,
    choose_sections,
    crossed_from_3cocycle,
    crossed_to_3cocycle,
    delta_extension,
    extension_to_2cocycle,
    free_crossed_bimodule,
    pullback_crossed,
    semidirect_from_2cocycle,
    solve_coboundary,
    trivial_crossed,
    truncated_free_algebra,
    validate_crossed,
)
from cochain.hochschild import Cochain, HochschildComplex, bar_coboundary, hochschild_cohomology
from cochain.suites import random_cochain

import oracles

F2, F3 = PrimeField(2), PrimeField(3)


def cases():
    out = []
    for F in (F2, F3):
        D = dual_numbers(F)
        out.append((f"D{F.modulus}-regular", D, D.regular_bimodule()))
        out.append((f"D{F.modulus}-trivial", D, trivial_bimodule(D, [1, 0])))
    U = upper_triangular(F2)
    out.append(("UT2(F2)", U, U.regular_bimodule()))
    return out


CASES = [pytest.param(R, M, id=n) for n, R, M in cases()]


def is_coboundary(R, M, f):
    HC = HochschildComplex(R, M, f.n)
    return HC.complex.group(f.n).is_coboundary(HC.to_vector(f))


def random_class(R, M, n, rng, reps):
    f = bar_coboundary(random_cochain(R, M, n - 1, rng))
    for rep in reps:
        f = f + rep.scale(rng.randrange(R.base.modulus))
    return f


# --- abelian extensions ------------------------------------------------------------


def test_zero_cocycle_gives_trivial_extension():
    D = dual_numbers(F2)
    M = D.regular_bimodule()
    X = semidirect_from_2cocycle(D, M, Cochain(D, M, 2, {}))
    # (m, r)(n, s) = (ms + rn, rs): the M.M block vanishes and R multiplies as in D
    for a, b in product(range(2), repeat=2):
        assert X.E.mult[a][b] == (0, 0, 0, 0)
        assert X.E.mult[2 + a][2 + b][2:] == D.mult[a][b]
    assert extension_to_2cocycle(X).is_zero()


def test_coboundary_extension_is_trivial_by_change_of_section():
    D = dual_numbers(F3)
    M = D.regular_bimodule()
    g = random_cochain(D, M, 1, random.Random(4))
    X = semidirect_from_2cocycle(D, M, bar_coboundary(g))
    T = semidirect_from_2cocycle(D, M, Cochain(D, M, 2, {}))
    # phi(m, r) = (m + g(r), r) in the sign convention of E: phi(m, r) = (m - g(r), r)
    n = X.E.dim
    phi = [[int(i == j) for j in range(n)] for i in range(n)]
    for r in range(D.dim):
        for k, v in enumerate(g(r)):
            phi[k][M.dim + r] = -v
    def apply(v):
        return X.E.reduce([sum(phi[i][j] * v[j] for j in range(n)) for i in range(n)])
    for i in range(n):
        for j in range(n):
            assert T.E.mul(apply(X.E.basis_vector(i)), apply(X.E.basis_vector(j))) == apply(X.E.mult[i][j])


def test_not_a_cocycle():
    D = dual_numbers(F2)
    M = D.regular_bimodule()
    with pytest.raises(NotACocycle):
        semidirect_from_2cocycle(D, M, Cochain(D, M, 2, {(1, 0): (1, 0)}))


def test_z4_over_z_has_no_splitting():
    R = cyclic_ring(2)
    X = AbelianExtension(R, R.regular_bimodule(), cyclic_ring(4), [[2]], [[1]]).validate()
    with pytest.raises(NoSplitting):
        extension_to_2cocycle(X)


def test_z4_over_z4_has_no_splitting():
    K = IntegersMod(4)
    R = StructureAlgebra(K, ["1"], [[[1]]], [1], [2])
    X = AbelianExtension(R, R.regular_bimodule(), ground_algebra(K), [[2]], [[1]]).validate()
    # no additive section Z/2 -> Z/4 exists: enumerate all of them
    assert [s for s in range(4) if (2 * s) % 4 == 0 and s % 2 == 1] == []
    with pytest.raises(NoSplitting):
        extension_to_2cocycle(X)
    # and every 2-cocycle on R gives an extension killed by 2
    M = R.regular_bimodule()
    for c in range(2):
        f = Cochain(R, M, 2, {(0, 0): (c,)})
        E = semidirect_from_2cocycle(R, M, f).E
        assert all(o == 2 for o in E.orders)


@pytest.mark.parametrize("R,M", CASES)
def test_two_cocycle_round_trip(R, M):
    rng = random.Random(11)
    reps = hochschild_cohomology(R, M, 2).representatives[2]
    for _ in range(5):
        f = random_class(R, M, 2, rng, reps)
        g = extension_to_2cocycle(semidirect_from_2cocycle(R, M, f))
        assert is_coboundary(R, M, f - g)


@given(st.integers(0, 10 ** 6))
def test_two_cocycle_round_trip_property(seed):
    R = dual_numbers(F3)
    M = R.regular_bimodule()
    rng = random.Random(seed)
    reps = hochschild_cohomology(R, M, 2).representatives[2]
    f = random_class(R, M, 2, rng, reps)
    g = extension_to_2cocycle(semidirect_from_2cocycle(R, M, f))
    assert is_coboundary(R, M, f - g)


# --- crossed bimodules -----------------------------------------------------------


def test_zero_boundary_is_crossed():
    D = dual_numbers(F2)
    X = validate_crossed(D, D.regular_bimodule(), [[0, 0], [0, 0]])
    assert all(not any(s) for row in X.star for s in row)


def test_multiplication_by_p_is_crossed():
    K = IntegersMod(4)
    C0 = ground_algebra(K)
    X = validate_crossed(C0, C0.regular_bimodule(), [[2]])
    assert X.star[0][0] == (2,)


def test_corrupted_action_violates_peiffer():
    D = dual_numbers(F2)
    # right action of x replaced by zero: still a bimodule, no longer compatible with d = id
    C1 = Bimodule(D, FPModule.diagonal(F2, [2, 2]), D.regular_bimodule().left,
                  [[[1, 0], [0, 1]], [[0, 0], [0, 0]]])
    with pytest.raises(PeifferViolation):
        validate_crossed(D, C1, [[1, 0], [0, 1]])


def test_free_crossed_examples():
    k = ground_algebra(F2)
    assert free_crossed_bimodule(k, []).C1.dim == 0
    X = free_crossed_bimodule(k, [(1,)])
    assert X.C1.dim == 1 and X.boundary == [[1]]


def _peiffer_rank_oracle(C, images, p):
    nC, nV = C.dim, len(images)
    idx = [(a, v, b) for a in range(nC) for v in range(nV) for b in range(nC)]
    pos = {t: i for i, t in enumerate(idx)}
    N = len(idx)

    def mul(u, v):
        out = [0] * nC
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                for k, c in enumerate(C.mult[i][j]):
                    out[k] += a * b * c
        return [x % p for x in out]

    def e(i):
        return [int(k == i) for k in range(nC)]

    def bd(t):
        a, v, b = t
        return mul(mul(e(a), list(images[v])), e(b))

    rows = []
    for t in idx:
        for t2 in idx:
            row = [0] * N
            # d(t) . t2
            for r, c in enumerate(bd(t)):
                if c:
                    for k, c2 in enumerate(C.mult[r][t2[0]]):
                        row[pos[(k, t2[1], t2[2])]] += c * c2
            # - t . d(t2)
            for r, c in enumerate(bd(t2)):
                if c:
                    for k, c2 in enumerate(C.mult[t[2]][r]):
                        row[pos[(t[0], t[1], k)]] -= c * c2
            rows.append(row)
    return oracles.rank_mod_p(rows, p), N


def test_free_crossed_peiffer_rank():
    C = truncated_free_algebra(F2, 1, 2)
    images = [C.basis_vector(1)]
    X = free_crossed_bimodule(C, images)
    rank, N = _peiffer_rank_oracle(C, images, 2)
    assert (X.relation_rank, X.presentation_rank) == (rank, N)
    assert X.C1.dim == N - rank


# --- crossed extensions and 3-cocycles ----------------------------------------------


def test_trivial_crossed_has_zero_class():
    D = dual_numbers(F2)
    M = trivial_bimodule(D, [1, 0])
    assert is_coboundary(D, M, crossed_to_3cocycle(trivial_crossed(D, M)))


@pytest.mark.parametrize("R,M", CASES)
def test_three_cocycle_round_trip_and_sections(R, M):
    rng = random.Random(5)
    reps = hochschild_cohomology(R, M, 3).representatives[3]
    for _ in range(3):
        f = random_class(R, M, 3, rng, reps)
        Y = crossed_from_3cocycle(R, M, f)
        g = crossed_to_3cocycle(Y)
        g2 = crossed_to_3cocycle(Y, choose_sections(Y, random.Random(rng.random())))
        assert is_coboundary(R, M, f - g)
        assert is_coboundary(R, M, g - g2)


def test_coboundary_gives_zero_class_and_solvable_g():
    D = dual_numbers(F2)
    M = trivial_bimodule(D, [1, 0])
    h = random_cochain(D, M, 2, random.Random(2))
    Y = crossed_from_3cocycle(D, M, bar_coboundary(h))
    f = crossed_to_3cocycle(Y)
    g = solve_coboundary(f)
    assert g is not None and (bar_coboundary(g) - f).is_zero()


def test_pullback_identity_and_free_cover():
    D = dual_numbers(F2)
    M = trivial_bimodule(D, [1, 0])
    rep = hochschild_cohomology(D, M, 3).representatives[3][0]
    Y = crossed_from_3cocycle(D, M, rep)
    C0 = Y.C0
    I = [[int(i == j) for j in range(C0.dim)] for i in range(C0.dim)]
    Yi, _ = pullback_crossed(Y, C0, I)
    assert Yi.C1.dim == Y.C1.dim
    assert is_coboundary(D, M, crossed_to_3cocycle(Y) - crossed_to_3cocycle(Yi))
    # a truncated free algebra covering C0 (its radical cubes to zero)
    P0 = truncated_free_algebra(F2, 2, 2)
    rad = [i for i in range(C0.dim) if i != C0.unit_index()]
    words = [()] + [w for L in (1, 2) for w in product(range(2), repeat=L)]
    cols = []
    for w in words:
        v = C0.unit
        for g in w:
            v = C0.mul(v, C0.basis_vector(rad[g]))
        cols.append(v)
    f = [[cols[j][i] for j in range(len(words))] for i in range(C0.dim)]
    Yp, (to_C1, f_back) = pullback_crossed(Y, P0, f)
    assert f_back == f
    a, b = crossed_to_3cocycle(Y), crossed_to_3cocycle(Yp)
    assert is_coboundary(D, M, a - b)
    assert not is_coboundary(D, M, a)


# --- the obstruction: delta_extension ----------------------------------------------


@pytest.mark.parametrize("R,M", CASES)
def test_delta_extension_exists_iff_class_vanishes(R, M):
    rng = random.Random(9)
    reps = hochschild_cohomology(R, M, 3).representatives[3]
    h = random_cochain(R, M, 2, rng)
    B = delta_extension(crossed_from_3cocycle(R, M, bar_coboundary(h)))
    S = B.S
    # exhaustive associativity, independently of the constructor
    e = [S.basis_vector(i) for i in range(S.dim)]
    for i, j, k in product(range(S.dim), repeat=3):
        assert S.mul(S.mul(e[i], e[j]), e[k]) == S.mul(e[i], S.mul(e[j], e[k]))
    if reps:
        Y = crossed_from_3cocycle(R, M, reps[0])
        with pytest.raises(NoSolution):
            delta_extension(Y)


def _cocycles(R, M):
    HC = HochschildComplex(R, M, 2)
    p = R.base.modulus
    out = []
    for vals in product(range(p), repeat=HC.complex.module(2).ngens):
        c = HC.from_vector(2, list(vals))
        if bar_coboundary(c).is_zero():
            out.append(c)
    return out, HC


@pytest.mark.parametrize("p", [2, 3])
def test_twisting_is_free_on_classes(p):
    D = dual_numbers(PrimeField(p))
    M = trivial_bimodule(D, [1, 0])
    Y = trivial_crossed(D, M)
    cocycles, HC = _cocycles(D, M)
    Ss = [delta_extension(Y, twist=c) for c in cocycles]
    for c1, S1 in zip(cocycles, Ss):
        for c2, S2 in zip(cocycles, Ss):
            same = HC.complex.group(2).is_coboundary(HC.to_vector(c1 - c2))
            assert boundary_extensions_isomorphic(S1, S2, M, Y.incl) == same
