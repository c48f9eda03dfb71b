"""The bicomplex over a ground algebra, alpha, and the pair / triple dictionaries."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cochain.algebra import (
    cyclic_ring,
    dual_numbers,
    ground_algebra,
    product_algebra,
    trivial_bimodule,
    upper_triangular,
)
from cochain.bicomplex import (
    Bicomplex,
    BicomplexSpec,
    Triple,
    alpha_map,
    check_pair,
    check_triple,
    crossed_to_triple,
    extension_to_pair,
    is_coboundary,
    pair_to_extension,
    pair_vector,
    same_class,
    total_cohomology,
    triple_vector,
)
from cochain.chainalg import der_cohomology, killing_cycles_resolution
from cochain.errors import GroundNotOverField, NotAPair
from cochain.exactmod import PrimeField, solve_in
from cochain.extensions import CrossedExtension, crossed_from_3cocycle, crossed_to_3cocycle, validate_crossed
from cochain.hochschild import hochschild_cohomology

F2, F3 = PrimeField(2), PrimeField(3)
k2 = ground_algebra(F2)


def over_k(R, M, n=4):
    return BicomplexSpec(ground_algebra(R.base), R, M, [[x] for x in R.unit], n)


def eps_spec(n=4):
    K = dual_numbers(F2)
    R = ground_algebra(F2)
    return BicomplexSpec(K, R, R.regular_bimodule(), [[1, 0]], n)


def _pair_of(B, v):
    f = {key[1]: m for key, m in B.component(2, v, 0).items() if any(m)}
    g = {(key[0][0][0], key[1][0]): m for key, m in B.component(2, v, 1).items() if any(m)}
    return f, g


# ---------------------------------------------------------------------------
# total cohomology


def test_dual_numbers_trivial_coefficients():
    D = dual_numbers(F2)
    M = trivial_bimodule(D, [1, 0])
    got = total_cohomology(over_k(D, M, 5)).dims()
    assert got == [1] * 6
    assert got == oracles.bar_dims(D, M, 5)


@pytest.mark.parametrize("R", [dual_numbers(F2), dual_numbers(F3), upper_triangular(F2)], ids=["D2", "D3", "UT2"])
def test_ground_field_agrees_with_bar(R):
    M = R.regular_bimodule()
    assert total_cohomology(over_k(R, M, 3)).dims() == oracles.bar_dims(R, M, 3)


def test_projective_over_ground_algebra():
    P = product_algebra(F2, 2)
    spec = BicomplexSpec(P, P, P.regular_bimodule(), [[1, 0], [0, 1]], 3)
    # R = K is projective over K: H^0 = K, nothing above
    assert total_cohomology(spec).dims() == [2, 0, 0, 0]


def test_eps_ground_agrees_with_killing_cycles():
    spec = eps_spec(4)
    Q, _ = killing_cycles_resolution(spec.R, 4, ground=(spec.K, spec.kmap))
    assert total_cohomology(spec).dims() == der_cohomology(Q, spec.M, 4).dims() == [1, 0, 1, 1, 1]


@pytest.mark.parametrize("spec", [over_k(dual_numbers(F2), dual_numbers(F2).regular_bimodule(), 3),
                                  eps_spec(3),
                                  BicomplexSpec(product_algebra(F2, 2), product_algebra(F2, 2),
                                                product_algebra(F2, 2).regular_bimodule(), [[1, 0], [0, 1]], 3)],
                         ids=["k", "eps", "KxK"])
def test_total_differential_squares_to_zero(spec):
    B = Bicomplex(spec)
    assert B.check_square_zero()
    for n in range(spec.n_max):
        d0 = B.complex.d(n).to_dense()
        d1 = B.complex.d(n + 1).to_dense()
        if d0 and d1 and d0[0] and d1[0]:
            prod = [[sum(a * b for a, b in zip(row, col)) % 2 for col in zip(*d0)] for row in d1]
            assert not any(any(r) for r in prod)


@pytest.mark.parametrize("spec", [eps_spec(2), over_k(upper_triangular(F2), upper_triangular(F2).regular_bimodule(), 2)],
                         ids=["eps", "UT2"])
def test_low_degrees_match_relative_hochschild(spec):
    reps = alpha_map(spec)
    assert reps[0].isomorphism and reps[1].isomorphism


def test_rejects_non_field():
    R = cyclic_ring(2)
    with pytest.raises(GroundNotOverField):
        BicomplexSpec(ground_algebra(R.base), R, R.regular_bimodule(), [[1]], 2)


# ---------------------------------------------------------------------------
# alpha


@pytest.mark.parametrize("R", [dual_numbers(F2), product_algebra(F2, 2)], ids=["D2", "F2xF2"])
def test_alpha_iso_over_prime_field(R):
    assert all(r.isomorphism for r in alpha_map(over_k(R, R.regular_bimodule(), 3)))


def test_alpha_iso_when_projective():
    P = product_algebra(F2, 2)
    spec = BicomplexSpec(P, P, P.regular_bimodule(), [[1, 0], [0, 1]], 4)
    assert all(r.isomorphism for r in alpha_map(spec))


def test_alpha_two_for_eps():
    a2 = alpha_map(eps_spec(3))[2]
    assert a2.injective and not a2.surjective
    assert a2.target_dim > a2.source_dim


# ---------------------------------------------------------------------------
# pairs


def _pair_spec():
    K = dual_numbers(F2)
    R = product_algebra(F2, 2)
    return BicomplexSpec(K, R, R.regular_bimodule(), [[1, 0], [1, 0]], 3)


def test_zero_pair_gives_trivial_extension():
    spec = _pair_spec()
    X = pair_to_extension(spec, {}, {})
    f, g = extension_to_pair(X)
    B = Bicomplex(spec)
    assert is_coboundary(B, 2, pair_vector(B, f, g))


def test_coboundary_pair_gives_trivial_class():
    spec = _pair_spec()
    B = Bicomplex(spec)
    rng = random.Random(3)
    h = [rng.randrange(2) for _ in range(B.size(1))]
    v = [x % 2 for x in B.complex.d(1).apply(h)]
    f, g = _pair_of(B, v)
    X = pair_to_extension(spec, f, g)
    f2, g2 = extension_to_pair(X)
    assert is_coboundary(B, 2, pair_vector(B, f2, g2))


def test_bad_pair_rejected():
    spec = _pair_spec()
    with pytest.raises(NotAPair):
        check_pair(spec, {(0, 1): [1, 0]}, {})


@settings(max_examples=20)
@given(st.integers(0, 2 ** 16))
def test_pair_round_trip(seed):
    spec = _pair_spec()
    B = Bicomplex(spec)
    grp = B.complex.group(2)
    rng = random.Random(seed)
    h = [rng.randrange(2) for _ in range(B.size(1))]
    v = B.complex.d(1).apply(h)
    for rep in grp.representatives:
        if rng.randrange(2):
            v = [a + b for a, b in zip(v, rep)]
    v = [x % 2 for x in v]
    f, g = _pair_of(B, v)
    X = pair_to_extension(spec, f, g)
    f2, g2 = extension_to_pair(X)
    assert same_class(B, 2, pair_vector(B, f, g), pair_vector(B, f2, g2))


# ---------------------------------------------------------------------------
# triples


def _eps_crossed():
    """0 -> F2 -> K --eps--> K -> F2 -> 0 for K = F2[eps]/eps^2."""
    K = dual_numbers(F2)
    R = ground_algebra(F2)
    X = validate_crossed(K, K.regular_bimodule(), [[0, 0], [1, 0]])
    return CrossedExtension(R, R.regular_bimodule(), X, [[0], [1]], [[1, 0]]).validate()


def test_eps_triple_is_nonzero_class():
    spec = eps_spec(3)
    B = Bicomplex(spec)
    Y = _eps_crossed()
    T = crossed_to_triple(spec, Y, [[1, 0], [0, 1]])
    assert check_triple(B, T)
    assert not is_coboundary(B, 3, triple_vector(B, T))


def test_eps_triple_section_independent():
    spec = eps_spec(3)
    B = Bicomplex(spec)
    Y = _eps_crossed()
    T1 = crossed_to_triple(spec, Y, [[1, 0], [0, 1]])
    T2 = crossed_to_triple(spec, Y, [[1, 0], [0, 1]], sections=[[1, 1]])
    assert check_triple(B, T2)
    assert same_class(B, 3, triple_vector(B, T1), triple_vector(B, T2))


def _trivial_dual():
    D = dual_numbers(F2)
    return D, trivial_bimodule(D, [1, 0])


def test_ground_field_triple_is_hochschild_cocycle():
    D, M = _trivial_dual()
    spec = over_k(D, M, 3)
    B = Bicomplex(spec)
    res = hochschild_cohomology(D, M, 3)
    Y = crossed_from_3cocycle(D, M, res.representatives[3][0])
    T = crossed_to_triple(spec, Y, [[x] for x in Y.C0.unit])
    assert check_triple(B, T)
    f = crossed_to_3cocycle(Y)
    fdict = {}
    for t in ((r, s, u) for r in range(D.dim) for s in range(D.dim) for u in range(D.dim)):
        val = M.reduce(f.evaluate([D.basis_vector(i) for i in t]))
        if any(val):
            fdict[t] = val
    assert same_class(B, 3, triple_vector(B, T), triple_vector(B, Triple(fdict, {}, {})))
    assert not is_coboundary(B, 3, triple_vector(B, T))


@settings(max_examples=10)
@given(st.integers(0, 2 ** 16))
def test_ground_field_triple_section_change(seed):
    D, M = _trivial_dual()
    spec = over_k(D, M, 3)
    B = Bicomplex(spec)
    res = hochschild_cohomology(D, M, 3)
    Y = crossed_from_3cocycle(D, M, res.representatives[3][0])
    phi = [[x] for x in Y.C0.unit]
    rng = random.Random(seed)
    P = [Y.C0.reduce(solve_in(Y.pi, list(D.basis_vector(r)), D.module)) for r in range(D.dim)]
    # shift each section value by the boundary of a random element of C1
    alt = []
    for r in range(D.dim):
        c = [rng.randrange(2) for _ in range(Y.C1.dim)]
        alt.append(Y.C0.reduce([a + b for a, b in zip(P[r], oracles.apply(Y.X.boundary, c))]))
    T1 = crossed_to_triple(spec, Y, phi)
    T2 = crossed_to_triple(spec, Y, phi, sections=alt)
    assert check_triple(B, T1) and check_triple(B, T2)
    assert same_class(B, 3, triple_vector(B, T1), triple_vector(B, T2))
