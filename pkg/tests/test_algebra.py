from itertools import permutations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cochain.algebra import (
    Bimodule,
    StructureAlgebra,
    cyclic_ring,
    dual_numbers,
    ground_algebra,
    induced_bimodule,
    matrix_algebra,
    mu_is_split,
    opposite_enveloping,
    parse_algebra,
    parse_bimodule,
    print_algebra,
    print_bimodule,
    product_algebra,
    tensor_algebras,
    tensor_bimodules,
    trivial_bimodule,
    unit_first,
    upper_triangular,
)
from cochain.errors import NoUnit, NotAssociative, ParseError
from cochain.exactmod import IntegersMod, PrimeField, Z

F2, F3 = PrimeField(2), PrimeField(3)


def hand_associative(mult, p):
    """Exhaustive triple check on structure constants, independent of validate()."""
    n = len(mult)

    def mul(u, v):
        out = [0] * n
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                if a and b:
                    for k, c in enumerate(mult[i][j]):
                        out[k] = (out[k] + a * b * c) % p
        return out

    e = [[int(i == j) for j in range(n)] for i in range(n)]
    return all(mul(mul(e[i], e[j]), e[k]) == mul(e[i], mul(e[j], e[k])) for i, j, k in product(range(n), repeat=3))


def zoo():
    D2 = dual_numbers(F2)
    return [
        D2,
        dual_numbers(F3),
        product_algebra(F2, 2),
        upper_triangular(F2),
        matrix_algebra(F2),
        cyclic_ring(4),
        cyclic_ring(3, IntegersMod(9)),
        tensor_algebras(D2, D2),
        ground_algebra(Z),
    ]


def test_dual_numbers_valid():
    R = dual_numbers(F2)
    assert R.dim == 2 and R.mul([0, 1], [0, 1]) == (0, 0)


def test_matrix_units_valid():
    R = matrix_algebra(F2)
    e = lambda i: R.basis_vector(i)  # noqa: E731
    # e12 e21 = e11, e21 e12 = e22
    assert R.mul(e(1), e(2)) == e(0)
    assert R.mul(e(2), e(1)) == e(3)
    assert R.mul(e(1), e(1)) == R.zero()


def test_x_squared_is_one_plus_x():
    mult = [[[1, 0], [0, 1]], [[0, 1], [1, 1]]]
    assert hand_associative(mult, 2)
    R = StructureAlgebra(F2, ["1", "x"], mult, [1, 0])
    assert R.cardinality() == 4 and R.is_commutative()


def test_not_associative():
    # a a = b, a b = 0, b a = a breaks (aa)a = a(aa)
    mult = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
            [[0, 0, 1], [0, 1, 0], [0, 0, 0]]]
    assert not hand_associative(mult, 2)
    with pytest.raises(NotAssociative):
        StructureAlgebra(F2, ["1", "a", "b"], mult, [1, 0, 0])


def test_no_unit():
    with pytest.raises(NoUnit):
        StructureAlgebra(F2, ["x"], [[[0]]], [0])


@pytest.mark.parametrize("R", zoo(), ids=lambda R: f"{R.base}-dim{R.dim}")
def test_parse_print_round_trip(R):
    text = print_algebra(R)
    R2 = parse_algebra(text)
    assert R2 == R
    assert print_algebra(R2) == text
    M = R.regular_bimodule()
    mt = print_bimodule(M)
    M2 = parse_bimodule(mt, R2)
    assert M2 == M and print_bimodule(M2) == mt


@pytest.mark.parametrize("R", zoo(), ids=lambda R: f"{R.base}-dim{R.dim}")
def test_unit_actions_identity_and_enveloping_round_trip(R):
    M = R.regular_bimodule()
    u = R.unit_index()
    if u is not None:
        I = [[int(i == j) for j in range(M.dim)] for i in range(M.dim)]
        assert M._red(M.left[u]) == M._red(I) and M._red(M.right[u]) == M._red(I)
    back = Bimodule.from_enveloping_action(R, M.carrier, M.to_enveloping_action())
    assert back == M


@pytest.mark.parametrize("bad,line", [
    ("algebra v1\nbase F2\nbasis 1 x\nunit 1 0\nmult 1 1 = 1 0\nmult x y = 0 0\n", 6),
    ("algebra v1\nbase F2\nbasis 1 x\nunit 1\n", 4),
    ("algebra v1\nbase F2\nbasis 1\nunit 1\nmult 1 1 = z\n", 5),
    ("algebra v1\nbase F2\nbasis 1\nunit 1\ncolour red\n", 5),
])
def test_parse_errors_carry_position(bad, line):
    with pytest.raises(ParseError) as e:
        parse_algebra(bad)
    assert e.value.line == line and e.value.column is not None


def test_induced_bimodule_examples():
    R = ground_algebra(F2)
    ind = induced_bimodule(R, R.regular_bimodule())
    assert ind.bimodule.dim == 1
    assert ind.bimodule.left[0] == ((1,),) or ind.bimodule._red(ind.bimodule.left[0]) == [[1]]
    D = dual_numbers(F2)
    ind = induced_bimodule(D, D.regular_bimodule())
    assert ind.bimodule.dim == 4


def _split_cases():
    for name, R in (("D2", dual_numbers(F2)), ("D3", dual_numbers(F3)),
                    ("F2xF2", product_algebra(F2, 2)), ("UT2(F3)", upper_triangular(F3))):
        yield pytest.param(R, R.regular_bimodule(), id=f"{name}-regular")
    for name, R in (("D2", dual_numbers(F2)), ("D3", dual_numbers(F3))):
        yield pytest.param(R, trivial_bimodule(R, [1, 0]), id=f"{name}-trivial")


@pytest.mark.parametrize("R,M", list(_split_cases()))
def test_mu_is_split_monomorphism(R, M):
    assert mu_is_split(induced_bimodule(R, M), M)


def test_opposite_and_enveloping():
    for R in (dual_numbers(F2), product_algebra(F3, 2)):
        Rop, Re, _ = opposite_enveloping(R)
        assert Rop.mult == R.mult
        assert Re.dim == R.dim ** 2
    M2 = matrix_algebra(F2)
    M2op, Re, _ = opposite_enveloping(M2)
    assert Re.dim == 16
    assert M2op.mult != M2.mult
    # search basis permutations for an isomorphism M2^op -> M2
    found = None
    for perm in permutations(range(4)):
        P = lambda v: [v[perm.index(k)] for k in range(4)]  # noqa: E731
        if all(list(M2.mul(P(M2op.basis_vector(i)), P(M2op.basis_vector(j)))) == P(M2op.mult[i][j])
               for i in range(4) for j in range(4)) and P(list(M2op.unit)) == list(M2.unit):
            found = perm
            break
    # transpose swaps e12 and e21 (basis order e11, e12, e21, e22)
    assert found == (0, 2, 1, 3)


def test_unit_first():
    R = product_algebra(F2, 2)
    assert R.unit_index() is None
    U = unit_first(R)
    assert U.unit_index() == 0 and U.cardinality() == R.cardinality()


def test_tensor_algebra_and_bimodule():
    D = dual_numbers(F2)
    DD = tensor_algebras(D, D)
    assert DD.dim == 4 and DD.is_commutative()
    N = tensor_bimodules(D.regular_bimodule(), D.regular_bimodule(), DD)
    assert N.dim == 4


# --- property: round trip on tensor/product combinations ---------------------

base_algebras = st.sampled_from([dual_numbers(F2), product_algebra(F2, 2), upper_triangular(F2), ground_algebra(F2)])


@given(base_algebras, base_algebras)
def test_round_trip_property(A, B):
    R = tensor_algebras(A, B)
    assert parse_algebra(print_algebra(R)) == R
    M = tensor_bimodules(A.regular_bimodule(), B.regular_bimodule(), R)
    assert parse_bimodule(print_bimodule(M), R) == M
