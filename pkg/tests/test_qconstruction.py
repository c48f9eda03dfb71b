"""The Q-construction through degree 2 and the V_* comparison."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cochain.algebra import StructureAlgebra, cyclic_ring
from cochain.exactmod import Z
from cochain.qconstruction import (
    FiniteAbelianGroup,
    build_q,
    gamma,
    q2_killed,
    q_low_homology,
    v_complex,
    v_complex_compare,
)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ranks_against_enumeration(n):
    Q = build_q(n)
    assert Q.ranks == (n - 1, (n - 1) ** 2, len(oracles.q2_surviving_tuples(n)))


def test_q2_rank_for_z2():
    # surviving 4-tuples over Z/2: 1111, 1110, 1101, 1011, 0111, 0110
    assert build_q(2).ranks == (1, 1, 6)
    assert sorted(t for t in oracles.q2_surviving_tuples(2)) == sorted(
        [(1, 1, 1, 1), (1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 1), (0, 1, 1, 0)])


@pytest.mark.parametrize("A", [2, 3, 4, (2, 2)], ids=str)
def test_d1_d2_is_zero(A):
    Q = build_q(A)
    for row in Q.d1:
        for col in zip(*Q.d2):
            assert sum(a * b for a, b in zip(row, col)) == 0


def test_ring_unit():
    Q = build_q(cyclic_ring(2))
    X = Q.algebra
    one = X.basis_vector(0, 0)
    assert X.mul(0, one, 0, one) == one
    X.validate()


@pytest.mark.parametrize("n", [3, 4])
def test_ring_structure_is_valid(n):
    build_q(cyclic_ring(n)).algebra.validate()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_low_homology(n):
    h0, h1 = q_low_homology(n)
    assert h0.divisors == (n,)
    assert h1.is_zero


@pytest.mark.parametrize("A", [2, 3, 4, 6, (2, 2)], ids=str)
def test_low_homology_against_ranks(A):
    """Over F_p: dim H_0 = dim H_1 = dim (A / pA), from plain ranks."""
    Q = build_q(A)
    orders = (A,) if isinstance(A, int) else A
    n0, n1, _ = Q.ranks
    for p in (2, 3, 5, 10007):
        expected = sum(1 for o in orders if o % p == 0)
        r1 = oracles.rank_mod_p(Q.d1, p)
        r2 = oracles.rank_mod_p(Q.d2, p)
        assert n0 - r1 == expected
        assert n1 - r1 - r2 == expected


def test_gamma():
    assert not any(gamma(build_q(2), 0))
    v = gamma(build_q(2), 1)
    assert sum(v) == 1
    assert not any(oracles.apply(build_q(2).d2, v))
    Q4 = build_q(4)
    assert not any(oracles.apply(Q4.d2, gamma(Q4, 2)))


@given(st.integers(0, 10 ** 6))
def test_boundaries_respect_relations(seed):
    """d2 of a killed tuple, expanded by the formula, reduces to zero."""
    rng = random.Random(seed)
    G = FiniteAbelianGroup((rng.choice([2, 3, 4]),))
    Q = build_q(G)
    els = G.elements()
    z = G.zero
    t = [rng.choice(els) for _ in range(4)]
    pat = rng.choice([(2, 3), (0, 1), (1, 3), (0, 2), (1, 2)])
    for i in pat:
        t[i] = z
    t = tuple(t)
    assert q2_killed(t, z)
    a, b, c, d = t
    add = G.add
    combo = {}
    for s, k in (((a, b), 1), ((c, d), 1), ((add(a, c), add(b, d)), -1),
                 ((a, c), -1), ((b, d), -1), ((add(a, b), add(c, d)), 1)):
        combo[s] = combo.get(s, 0) + k
    assert not any(Q.vec(1, combo))


@given(st.integers(0, 10 ** 6))
def test_boundary_well_defined_on_random_elements(seed):
    """Adding killed tuples to a Q_2 element does not change its boundary."""
    rng = random.Random(seed)
    G = FiniteAbelianGroup((3,))
    Q = build_q(G)
    els = G.elements()

    def d2(combo):
        out = {}
        for t, c in combo.items():
            a, b, cc, d = t
            for s, k in (((a, b), 1), ((cc, d), 1), ((G.add(a, cc), G.add(b, d)), -1),
                         ((a, cc), -1), ((b, d), -1), ((G.add(a, b), G.add(cc, d)), 1)):
                out[s] = out.get(s, 0) + c * k
        return Q.vec(1, out)

    x = {tuple(rng.choice(els) for _ in range(4)): rng.randrange(-3, 4) for _ in range(3)}
    y = dict(x)
    for _ in range(3):
        t = [rng.choice(els) for _ in range(4)]
        t[0] = t[2] = G.zero
        y[tuple(t)] = y.get(tuple(t), 0) + rng.randrange(1, 4)
    reduced = Q.vec(2, x)
    assert d2(x) == d2(y) == oracles.apply(Q.d2, reduced)


@pytest.mark.parametrize("n", [2, 4])
def test_v_complex_matches_shukla(n):
    R = cyclic_ring(n)
    rep = v_complex_compare(R, R.regular_bimodule(), 2)
    assert rep.all_equal
    assert rep.rows[2][1].divisors == (n,)


def test_v_complex_low_degrees_for_product_ring():
    R = StructureAlgebra(Z, ["e0", "e1"], [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1], [2, 2])
    rep = v_complex_compare(R, R.regular_bimodule(), 1)
    assert rep.all_equal
    assert rep.rows[0][1].divisors == (2, 2)


def test_v_complex_degrees():
    V = v_complex(cyclic_ring(2), 3)
    assert V.algebra.dim(0) == 1
    assert V.algebra.homology(0).divisors == (2,)
    assert V.algebra.homology(1).is_zero
