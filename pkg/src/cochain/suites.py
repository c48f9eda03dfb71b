"""Invariant batteries behind ``cochain verify``.

Each battery takes a seeded ``random.Random`` and yields ``Check`` records.
Random inputs are drawn smallest first, so the first failing input of a
battery is also the smallest one it tried; its algebra and bimodule are
attached to the record for the repro dump.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    Bimodule,
    StructureAlgebra,
    cyclic_ring,
    dual_numbers,
    ground_algebra,
    print_algebra,
    print_bimodule,
    product_algebra,
    tensor_algebras,
    tensor_bimodules,
    unit_first,
    upper_triangular,
)
from .errors import CochainError
from .exactmod import FPModule, IntegersMod, PrimeField, Z
from .hochschild import Cochain, HochschildComplex, bar_coboundary, derivations, hochschild_cohomology

SUITES = ("complexes", "extensions", "kunneth", "sigma", "qlow", "bicomplex")


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""
    inputs: dict = field(default_factory=dict)  # file name -> text, dumped on failure


def _inputs(R: StructureAlgebra, M: Bimodule | None = None) -> dict:
    out = {"algebra.alg": print_algebra(R)}
    if M is not None:
        out["module.bim"] = print_bimodule(M)
    return out


def _run(suite, name, fn, inputs=None):
    try:
        ok, detail = fn()
    except CochainError as e:
        ok, detail = False, f"{type(e).__name__}: {e}"
    return Check(suite, name, bool(ok), detail, inputs or {})


def small_algebras():
    F2, F3 = PrimeField(2), PrimeField(3)
    return [
        ("F2[x]/x^2", dual_numbers(F2)),
        ("F3[x]/x^2", dual_numbers(F3)),
        ("F2xF2", product_algebra(F2, 2)),
        ("UT2(F2)", upper_triangular(F2)),
        ("Z/4 over Z", cyclic_ring(4, Z)),
    ]


def random_cochain(R, M, n, rng, normalized=True):
    u = R.unit_index() if normalized else None
    mods = [o or 7 for o in M.orders]

    def fn(*t):
        if u is not None and u in t:
            return [0] * M.dim
        return [rng.randrange(o) for o in mods]

    return Cochain.from_function(R, M, n, fn)


# ---------------------------------------------------------------------------
# batteries


def complexes(rng):
    from .chainalg import (
        chain_hochschild_total,
        der_cohomology,
        disc,
        exterior,
        exterior_divided_power,
        extend_bound,
        killing_cycles_resolution,
    )

    for name, R in small_algebras():
        M = R.regular_bimodule()

        def dd(R=R, M=M):
            for n in (1, 2):
                for _ in range(3):
                    f = random_cochain(R, M, n, rng, normalized=False)
                    if not bar_coboundary(bar_coboundary(f)).is_zero():
                        return False, f"d d f != 0 in degree {n}"
            return True, "d d = 0 on random 1- and 2-cochains"

        yield _run("complexes", f"dd=0 {name}", dd, _inputs(R, M))

        def norm(R=R, M=M):
            a = hochschild_cohomology(R, M, 3, representatives=False).divisors()
            b = hochschild_cohomology(R, M, 3, representatives=False, normalized=False).divisors()
            return a == b, f"normalized {a} vs unnormalized {b}"

        yield _run("complexes", f"normalized=unnormalized {name}", norm, _inputs(R, M))

        def der(R=R, M=M):
            r = derivations(R, M)
            return r.exact, f"0 -> H0 -> M -> Der -> H1 -> 0 exact: {r.exact}"

        yield _run("complexes", f"derivation sequence {name}", der, _inputs(R, M))

    def chain_algebras():
        for A in (exterior(2), exterior_divided_power(2, 4), exterior_divided_power(3, 4), disc(1), disc(2)):
            A.validate()
        return True, "d d = 0 and Leibniz on the standard chain algebras"

    yield _run("complexes", "standard chain algebras", chain_algebras)

    def weak_equivalence():
        R = cyclic_ring(2, Z)
        M = R.regular_bimodule()
        a = chain_hochschild_total(extend_bound(exterior(2), 6), M, 5, [[1]]).divisors()
        Q, _ = killing_cycles_resolution(R, 5)
        b = der_cohomology(Q, M, 5).divisors()
        return a == b, f"Lambda(x): {a}; killing cycles: {b}"

    yield _run("complexes", "resolution independence Z/2", weak_equivalence)


def extensions(rng):
    from .extensions import (
        crossed_from_3cocycle,
        crossed_to_3cocycle,
        extension_to_2cocycle,
        semidirect_from_2cocycle,
    )

    for name, R in small_algebras()[:4]:
        R = unit_first(R)
        for M in (R.regular_bimodule(),):
            res = hochschild_cohomology(R, M, 3)
            HC2 = HochschildComplex(R, M, 2, normalized=False)
            HC3 = HochschildComplex(R, M, 3, normalized=False)

            def two(R=R, M=M, res=res, HC2=HC2):
                for _ in range(5):
                    f = bar_coboundary(random_cochain(R, M, 1, rng))
                    for rep in res.representatives[2]:
                        f = f + rep.scale(rng.randrange(R.base.modulus))
                    X = semidirect_from_2cocycle(R, M, f)
                    g = extension_to_2cocycle(X)
                    if not HC2.complex.group(2).is_coboundary(HC2.to_vector(f - g)):
                        return False, "2-cocycle changed class"
                return True, "5 random 2-cocycles round-trip"

            yield _run("extensions", f"2-cocycle round trip {name}", two, _inputs(R, M))

            def three(R=R, M=M, res=res, HC3=HC3):
                for _ in range(3):
                    f = bar_coboundary(random_cochain(R, M, 2, rng))
                    for rep in res.representatives[3]:
                        f = f + rep.scale(rng.randrange(R.base.modulus))
                    Y = crossed_from_3cocycle(R, M, f)
                    g1 = crossed_to_3cocycle(Y)
                    g2 = crossed_to_3cocycle(Y, rng=random.Random(rng.random()))
                    grp = HC3.complex.group(3)
                    if not grp.is_coboundary(HC3.to_vector(f - g1)):
                        return False, "3-cocycle changed class"
                    if not grp.is_coboundary(HC3.to_vector(g1 - g2)):
                        return False, "class depends on the sections"
                return True, "3 random crossed extensions round-trip"

            yield _run("extensions", f"3-cocycle round trip {name}", three, _inputs(R, M))


def kunneth(rng):
    from .chainalg import chain_hochschild_total, concentrated, exterior, extend_bound, tensor_chain_algebras

    F2 = PrimeField(2)
    D, P = dual_numbers(F2), product_algebra(F2, 2)
    for (na, A), (nb, B) in ((("D", D), ("D", D)), (("D", D), ("P", P)), (("P", P), ("UT", upper_triangular(F2)))):
        def plain(A=A, B=B):
            AB = tensor_algebras(A, B)
            MN = tensor_bimodules(A.regular_bimodule(), B.regular_bimodule(), AB)
            h = hochschild_cohomology(AB, MN, 3, representatives=False).dims()
            a = hochschild_cohomology(A, A.regular_bimodule(), 3, representatives=False).dims()
            b = hochschild_cohomology(B, B.regular_bimodule(), 3, representatives=False).dims()
            k = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(4)]
            return h == k, f"H(A(x)B) {h}, Kunneth sum {k}"

        yield _run("kunneth", f"{na}(x){nb}", plain)

    def graded():
        L = extend_bound(exterior(2, F2), 5)
        M = ground_algebra(F2).regular_bimodule()
        a = chain_hochschild_total(L, M, 4, [[1]]).dims()
        b = chain_hochschild_total(tensor_chain_algebras(L, L, 5), M, 4, [[1]]).dims()
        k = [sum(a[i] * a[n - i] for i in range(n + 1)) for n in range(5)]
        ok1 = b == k
        DD = concentrated(D, 5)
        c = chain_hochschild_total(DD, D.regular_bimodule(), 4, [[1, 0], [0, 1]]).dims()
        LD = tensor_chain_algebras(L, DD, 5)
        d = chain_hochschild_total(LD, tensor_bimodules(M, D.regular_bimodule()), 4, [[1, 0], [0, 1]]).dims()
        k2 = [sum(a[i] * c[n - i] for i in range(n + 1)) for n in range(5)]
        return ok1 and d == k2, f"L(x)L {b} vs {k}; L(x)D {d} vs {k2}"

    yield _run("kunneth", "graded Lambda(x) over F2", graded)


def d3_fixture(p: int):
    """A Z/p^2 crossed extension of F_p by F_p that comes from Z by reduction mod p.

    Over Z: 0 -> F_p m -> Z v (+) F_p m -> Z -> F_p -> 0 with v -> p.  Reducing
    mod p gives C1 = F_p v (+) F_p m -> C0 = Z/p^2.  Also returns the ring
    S = Z/p^2 (+) F_p m with v -> p that witnesses its vanishing."""
    from .extensions import CrossedExtension, validate_crossed
    from .shukla import WitnessDiagram, check_witness

    base = IntegersMod(p * p)
    C0 = ground_algebra(base)
    C1 = Bimodule(C0, FPModule.diagonal(base, [p, p]), [[[1, 0], [0, 1]]], [[[1, 0], [0, 1]]])
    X = validate_crossed(C0, C1, [[p, 0]])
    A = StructureAlgebra(base, ["1"], [[[1]]], [1], [p])
    M = A.regular_bimodule()
    Y = CrossedExtension(A, M, X, [[0], [1]], [[1]]).validate()
    S = StructureAlgebra(base, ["1", "m"], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0], [p * p, p])
    W = check_witness(Y, WitnessDiagram(S, [[p, 0], [0, 1]], [[1, 0]], [[1, 0]]))
    return Y, W


def sigma(rng):
    from .shukla import ShuklaQuery, canonical_class_sigma, e_invariant, kernel_witness_unit_check, shukla_cohomology

    for p in (2, 3):
        def e_sigma(p=p):
            sc = canonical_class_sigma(ground_algebra(PrimeField(p)))
            e = e_invariant(sc.ext)
            return tuple(e) == (1,), f"e((sigma)_F{p}) = {tuple(e)}, unit order of S = {sc.witness.unit_order()}"

        yield _run("sigma", f"e((sigma)_F{p}) = 1", e_sigma)

        def e_d3(p=p):
            Y, W = d3_fixture(p)
            e = e_invariant(Y)
            return not any(e) and kernel_witness_unit_check(Y, W), f"e = {tuple(e)} on the reduction fixture"

        yield _run("sigma", f"e vanishes on d3 image p={p}", e_d3)

        def splitting(p=p):
            A = StructureAlgebra(IntegersMod(p * p), ["1"], [[[1]]], [1], [p])
            over_p2 = shukla_cohomology(ShuklaQuery(A, A.regular_bimodule(), 3))[3].dimension
            Az = cyclic_ring(p, Z)
            over_z = shukla_cohomology(ShuklaQuery(Az, Az.regular_bimodule(), 3))[3].dimension
            return over_p2 == over_z + 1, f"dim Shukla^3 over Z/p^2 = {over_p2}, over Z = {over_z}, H0 = 1"

        yield _run("sigma", f"Shukla^3 splitting p={p}", splitting)


def qlow(rng):
    from .qconstruction import build_q, gamma, q_low_homology, v_complex_compare

    for n in (2, 3, 4):
        def low(n=n):
            Q = build_q(cyclic_ring(n))
            h0, h1 = q_low_homology(Q)
            cyc = all(gamma(Q, (a,)) is not None for a in range(n))
            return h0.divisors == (n,) and h1.is_zero and cyc, f"H0 = {h0}, H1 = {h1}, gamma cycles: {cyc}"

        yield _run("qlow", f"H_<=1(Q(Z/{n}))", low)
    for n in (2, 4):
        def vcmp(n=n):
            R = cyclic_ring(n)
            rep = v_complex_compare(R, R.regular_bimodule(), 2)
            return rep.all_equal, "; ".join(f"{k}: {a} vs {b}" for k, a, b, _ in rep.rows)

        yield _run("qlow", f"V_*(Z/{n}) vs Shukla", vcmp)


def bicomplex(rng):
    from .bicomplex import Bicomplex, BicomplexSpec, alpha_map, total_cohomology

    F2 = PrimeField(2)
    k = ground_algebra(F2)
    for name, R in (("F2[x]/x^2", dual_numbers(F2)), ("F2xF2", product_algebra(F2, 2))):
        M = R.regular_bimodule()
        spec = BicomplexSpec(k, R, M, [[x] for x in R.unit], 3)

        def agree(spec=spec, R=R, M=M):
            a = total_cohomology(spec).dims()
            b = hochschild_cohomology(R, M, 3, representatives=False).dims()
            return a == b, f"bicomplex {a} vs bar {b}"

        yield _run("bicomplex", f"K = k agreement {name}", agree, _inputs(R, M))

        def square(spec=spec):
            return Bicomplex(spec).check_square_zero(), "D o D = 0"

        yield _run("bicomplex", f"D^2 = 0 {name}", square)

        def alpha(spec=spec):
            reps = alpha_map(spec)
            return all(r.isomorphism for r in reps), "alpha iso for K = k"

        yield _run("bicomplex", f"alpha iso {name}", alpha)


BATTERIES = {
    "complexes": complexes,
    "extensions": extensions,
    "kunneth": kunneth,
    "sigma": sigma,
    "qlow": qlow,
    "bicomplex": bicomplex,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        if n not in BATTERIES:
            raise KeyError(n)
        rng = random.Random(f"{seed}:{n}")
        out.extend(BATTERIES[n](rng))
    return out


__all__ = ["Check", "SUITES", "run_suite", "d3_fixture", "small_algebras", "random_cochain"]
