"""Shukla cohomology: strategy selection, the comparison with Hochschild
cohomology, the e-invariant over Z/p^2 and the canonical class (sigma)_A.

Shukla^n(R, M) is computed as the cohomology of a degreewise projective
resolution R_* -> R.  Available resolutions:

* ``hochschild``: R itself, when R is projective over the ground ring;
* ``builtin``: A0 (x) Lambda(x), dx = n, when R is Z/n-free with structure
  constants that lift to an associative Z-algebra A0; and
  A0 (x) Lambda(x) (x) Gamma(y) over Z/p^2 for F_p-algebras;
* ``killing-cycles``: the quasi-free resolution of a quotient of the ground
  ring, evaluated through the derivation complex;
* ``user``: a caller supplied chain algebra with augmentation;
* ``bicomplex``: delegated to the bicomplex module (ground algebra over a field).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd

from .algebra import Bimodule, StructureAlgebra, unit_first_bimodule
from .chainalg import (
    ChainAlgebra,
    ChainHochschildComplex,
    concentrated,
    der_cohomology,
    disc,
    exterior,
    exterior_divided_power,
    killing_cycles_resolution,
    lifted_algebra,
    tensor_chain_algebras,
)
from .config import check, current_budget
from .errors import (
    CochainError,
    GroundNotOverField,
    NoPreimage,
    NoSolution,
    StrategyUnavailable,
)
from .exactmod import (
    BaseRing,
    FPModule,
    IntegersMod,
    Z,
    integer_kernel,
    lattice_basis,
    sequence_is_exact,
    smith_normal_form,
    solve_in,
    solve_integer,
)
from .extensions import CrossedExtension, _col, mat_vec, validate_crossed
from .hochschild import CohomologyResult, HochschildComplex

STRATEGIES = ("auto", "hochschild", "builtin", "killing-cycles", "user", "bicomplex")


@dataclass
class ShuklaQuery:
    """A Shukla cohomology job.

    ``ground`` is None (the base ring of R) or a commutative algebra K with
    ``kmap`` the matrix of K -> R.  ``resolution`` is a pair
    (chain algebra, eps matrix A_0 -> R) for the ``user`` strategy."""

    R: StructureAlgebra
    M: Bimodule
    n_max: int
    strategy: str = "auto"
    ground: StructureAlgebra | None = None
    kmap: list | None = None
    resolution: tuple | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise StrategyUnavailable(f"unknown strategy {self.strategy!r}", witness=STRATEGIES)
        if self.ground is None and self.R.ground is not None:
            self.ground, self.kmap = self.R.ground
        if self.strategy == "bicomplex":
            if self.ground is None and not self.R.base.is_field:
                raise GroundNotOverField("the bicomplex needs a ground algebra over a field")
            if self.ground is not None and not self.ground.base.is_field:
                raise GroundNotOverField("the ground algebra must live over a prime field",
                                         witness=str(self.ground.base))


def is_projective(R: StructureAlgebra) -> bool:
    """Is the underlying module of R projective over its base ring?"""
    m = R.base.modulus
    if m == 0:
        return all(o == 0 for o in R.orders)
    return all(gcd(o, m // o) == 1 for o in R.orders)


def _uniform_order(R: StructureAlgebra):
    os_ = set(R.orders)
    return os_.pop() if len(os_) == 1 else None


def naive_lift(R: StructureAlgebra, base: BaseRing) -> StructureAlgebra:
    """R's structure constants read over ``base`` as a free algebra.

    Raises NotAssociative / NoUnit when the lift is not an algebra."""
    return StructureAlgebra(base, R.basis, R.mult, R.unit)


def builtin_resolution(R: StructureAlgebra, bound: int):
    """(chain algebra, eps) for the known patterns, or None."""
    n = _uniform_order(R)
    base = R.base
    if n is None or n in (0, 1):
        return None
    try:
        if base.modulus == 0:
            A0 = naive_lift(R, Z)
            A = lifted_algebra(A0, exterior(n, Z), bound)
            name = "builtin:lifted-exterior"
        elif base.kind == "Zmod" and base.modulus == n * n and _is_prime(n):
            A0 = naive_lift(R, base)
            B = exterior_divided_power(n, bound)
            A = tensor_chain_algebras(concentrated(A0, bound), B, bound)
            name = "builtin:lifted-exterior-divided-power"
        else:
            return None
    except CochainError:
        return None
    eps = [[int(i == j) for j in range(R.dim)] for i in range(R.dim)]
    return A, eps, name


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def choose_strategy(q: ShuklaQuery) -> str:
    if q.strategy != "auto":
        return q.strategy
    if q.ground is not None:
        K, kmap = q.ground, q.kmap
        if _is_quotient(K, kmap, q.R):
            return "killing-cycles"
        return "bicomplex"
    if is_projective(q.R):
        return "hochschild"
    if builtin_resolution(q.R, 1) is not None:
        return "builtin"
    return "killing-cycles"


def _is_quotient(K, kmap, R) -> bool:
    return all(solve_in(kmap, R.basis_vector(r), R.module) is not None for r in range(R.dim))


def shukla_cohomology(q: ShuklaQuery) -> CohomologyResult:
    """Shukla^n(R / ground, M) for n <= n_max."""
    budget = current_budget()
    check("Shukla degree bound", q.n_max, max(budget.n_max, 8))
    if q.R.unit_index() is None and q.ground is None and q.strategy != "user":
        # the total complexes want the unit as a basis vector; the groups do not care
        M = unit_first_bimodule(q.M)
        q = replace(q, R=M.algebra, M=M)
    strategy = choose_strategy(q)
    n = q.n_max
    if strategy == "hochschild":
        if q.ground is not None:
            raise StrategyUnavailable("plain Hochschild needs the base ring as ground")
        if not is_projective(q.R):
            raise StrategyUnavailable("R is not projective over the ground ring")
        HC = HochschildComplex(q.R, q.M, n)
        groups = {k: HC.complex.group(k).divisors for k in range(n + 1)}
        return CohomologyResult(groups, HC, strategy="hochschild")
    if strategy == "builtin":
        found = builtin_resolution(q.R, n + 1)
        if found is None:
            raise StrategyUnavailable("no builtin resolution for this input")
        A, eps, name = found
        res = _total(A, eps, q.M, n)
        res.strategy = name
        return res
    if strategy == "user":
        if q.resolution is None:
            raise StrategyUnavailable("the user strategy needs a resolution")
        A, eps = q.resolution
        res = _total(A, eps, q.M, n)
        res.strategy = "user"
        return res
    if strategy == "killing-cycles":
        ground = None if q.ground is None else (q.ground, q.kmap)
        Qf, _ = killing_cycles_resolution(q.R, max(n, 1), ground)
        res = der_cohomology(Qf, q.M, n)
        res.strategy = "killing-cycles"
        return res
    if strategy == "bicomplex":
        from .bicomplex import BicomplexSpec, total_cohomology

        K = q.ground
        kmap = q.kmap
        if K is None:
            from .algebra import ground_algebra

            K = ground_algebra(q.R.base)
            kmap = [[x] for x in q.R.unit]
        res = total_cohomology(BicomplexSpec(K, q.R, q.M, kmap, n))
        res.strategy = "bicomplex"
        return res
    raise StrategyUnavailable(f"unknown strategy {strategy!r}")


def _total(A: ChainAlgebra, eps, M: Bimodule, n: int) -> CohomologyResult:
    T = ChainHochschildComplex(A, M, n, eps)
    return CohomologyResult({k: T.complex.group(k).divisors for k in range(n + 1)}, T)


# ---------------------------------------------------------------------------
# comparison H^n -> Shukla^n


@dataclass
class MapReport:
    """Induced map between finitely generated groups in one degree."""

    degree: int
    matrix: list  # rows: target generators, columns: source generators
    source: tuple
    target: tuple
    injective: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


def classify_map(mat, src, tgt):
    """(injective, surjective) for the map  (+) Z/src_j -> (+) Z/tgt_i  given by mat."""
    k, m = len(src), len(tgt)
    if m == 0:
        return k == 0 or all(s == 1 for s in src), True
    if k == 0:
        return True, all(t == 1 for t in tgt)
    big = [list(mat[i]) + [tgt[j] if j == i else 0 for j in range(m)] for i in range(m)]
    _, D, _ = smith_normal_form(big)
    diag = [D[i][i] if i < len(D[0]) else 0 for i in range(m)]
    surjective = all(abs(d) == 1 for d in diag)
    injective = True
    for v in integer_kernel(big, k + m):
        x = v[:k]
        for xi, s in zip(x, src):
            if (s == 0 and xi) or (s and xi % s):
                injective = False
    return injective, surjective


def comparison_map(R: StructureAlgebra, M: Bimodule, n_max: int, resolution=None) -> list[MapReport]:
    """Maps H^n(R, M) -> Shukla^n(R, M) for n <= n_max.

    A normalized Hochschild cocycle f goes to f o eps^{(x)n} in the
    bidegree (n, 0) part of the total complex of the resolution.  The
    default resolution is the builtin one, or R (x) D(2) for projective R."""
    if resolution is None:
        if R.unit_index() is None:
            M = unit_first_bimodule(M)
            R = M.algebra
        found = builtin_resolution(R, n_max + 1)
        if found is None:
            if not is_projective(R):
                raise StrategyUnavailable("no resolution with explicit augmentation available")
            b = n_max + 1
            A = tensor_chain_algebras(concentrated(R, b), disc(2, R.base, b), b)
            eps = [[int(i == j) for j in range(R.dim)] for i in range(R.dim)]
        else:
            A, eps, _ = found
    else:
        A, eps = resolution
    HC = HochschildComplex(R, M, n_max, normalized=True)
    T = ChainHochschildComplex(A, M, n_max, eps)
    md = M.dim
    eps_cols = [R.reduce([eps[r][a] for r in range(R.dim)]) for a in range(A.dim(0))]
    out = []
    for n in range(n_max + 1):
        src = HC.complex.group(n)
        tgt = T.complex.group(n)
        cols = []
        for v in src.representatives:
            f = HC.from_vector(n, v)
            w = [0] * (len(T.tuples[n]) * md)
            for i, t in enumerate(T.tuples[n]):
                if any(k for k, _ in t):
                    continue
                val = f.evaluate([eps_cols[a] for _, a in t])
                w[i * md:(i + 1) * md] = list(val)
            cols.append(tgt.coordinates(w))
        m = len(tgt.representative_orders)
        mat = [[c[i] for c in cols] for i in range(m)]
        s_ord = tuple(src.representative_orders)
        t_ord = tuple(tgt.representative_orders)
        inj, sur = classify_map(mat, s_ord, t_ord)
        out.append(MapReport(n, mat, s_ord, t_ord, inj, sur))
    return out


# ---------------------------------------------------------------------------
# the e-invariant


def _prime_of(base: BaseRing) -> int:
    m = base.modulus
    p = round(m ** 0.5)
    if base.kind != "Zmod" or p * p != m or not _is_prime(p):
        raise StrategyUnavailable("the e-invariant needs the ground ring Z/p^2", witness=str(base))
    return p


def e_invariant(Y: CrossedExtension, check_choices: bool = True):
    """e(Y) = p P in M, where d(P) = p 1 in C0.

    With ``check_choices`` the value is recomputed for P + m over a basis
    of M and checked to be central (an element of H^0(A, M))."""
    C0, C1, M, A = Y.C0, Y.C1, Y.M, Y.R
    p = _prime_of(C0.base)
    target = C0.scale(p, C0.unit)
    P = solve_in(Y.X.boundary, list(target), C0.module)
    if P is None:
        raise NoPreimage("p 1 is not a boundary; the sequence is not exact", witness=target)

    def value(P):
        pP = C1.reduce([p * x for x in P])
        m = solve_in(Y.incl, list(pP), C1.carrier)
        if m is None:
            raise NoPreimage("p P is not in the image of M", witness=pP)
        return M.reduce(m)

    e = value(P)
    if check_choices:
        for a in range(M.dim):
            alt = [x + y for x, y in zip(P, _col(Y.incl, a))]
            if value(alt) != e:
                raise NoSolution("e depends on the choice of preimage", witness=a)
        for r in range(A.dim):
            er = A.basis_vector(r)
            if M.act_left(er, e) != M.act_right(e, er):
                raise NoSolution("e is not central", witness=r)
    return e


# ---------------------------------------------------------------------------
# the canonical class (sigma)_A


@dataclass
class SigmaClass:
    """(sigma)_A together with the data of its construction.

    ``elements`` lists the non-zero elements of A (basis of Z/p^2[A]);
    ``lattice`` is a basis of R(A) in Z[A]; ``witness`` the algebra
    S = Z[A]/p^2 R(A) with its maps."""

    ext: CrossedExtension
    p: int
    elements: list
    lattice: list
    witness: "WitnessDiagram"


def _as_zp2(A: StructureAlgebra, p: int) -> StructureAlgebra:
    """A over Z/p^2 with every basis element of order p."""
    return StructureAlgebra(IntegersMod(p * p), A.basis, A.mult, A.unit, [p] * A.dim)


def canonical_class_sigma(A: StructureAlgebra) -> SigmaClass:
    """0 -> A -> R(A)/p^2 R(A) -> Z/p^2[A] -> A -> 0 for a finite F_p-algebra A."""
    base = A.base
    if base.kind == "Zmod" and set(A.orders) == {round(base.modulus ** 0.5)}:
        p = round(base.modulus ** 0.5)
    elif base.is_field:
        p = base.modulus
    else:
        raise StrategyUnavailable("A must be an F_p-algebra", witness=str(base))
    size = p ** A.dim
    check("|A| for the canonical class", size, current_budget().sigma_order)
    from itertools import product as _prod

    elems = [tuple(t) for t in _prod(range(p), repeat=A.dim) if any(t)]
    index = {e: i for i, e in enumerate(elems)}
    N = len(elems)

    def red(v):
        return tuple(x % p for x in v)

    def times(a, b):
        return red(A.mul(a, b))

    # Z[A] structure constants
    zmult = [[[0] * N for _ in range(N)] for _ in range(N)]
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            c = times(a, b)
            if any(c):
                zmult[i][j][index[c]] = 1
    unit = red(A.unit)
    zunit = [int(i == index[unit]) for i in range(N)]
    # eta: Z[A] -> A, R(A) = ker eta
    eta = [[elems[j][k] for j in range(N)] for k in range(A.dim)]
    big = [list(eta[k]) + [p if t == k else 0 for t in range(A.dim)] for k in range(A.dim)]
    ker = [v[:N] for v in integer_kernel(big, N + A.dim)]
    L = lattice_basis(ker, N)
    check("rank of R(A)", len(L), N)

    Lmat = [[L[j][i] for j in range(N)] for i in range(N)]

    def coords(x):
        c = solve_integer(Lmat, N, list(x))
        if c is None:
            raise NoSolution("element is not in R(A)", witness=tuple(x))
        return c

    def zmul(u, v):
        out = [0] * N
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        for k, c in enumerate(zmult[i][j]):
                            if c:
                                out[k] += a * b * c
        return out

    q = p * p
    K = IntegersMod(q)
    C0 = StructureAlgebra(K, [f"[{''.join(map(str, e))}]" for e in elems], zmult, zunit)
    # C1 = R(A)/p^2 R(A) on the lattice basis, acted on by multiplication
    left, right = [], []
    for i in range(N):
        e = [int(k == i) for k in range(N)]
        Lm = [[0] * N for _ in range(N)]
        Rm = [[0] * N for _ in range(N)]
        for j in range(N):
            lc = coords(zmul(e, L[j]))
            rc = coords(zmul(L[j], e))
            for k in range(N):
                Lm[k][j] = lc[k]
                Rm[k][j] = rc[k]
        left.append(Lm)
        right.append(Rm)
    C1 = Bimodule(C0, FPModule.diagonal(K, [q] * N), left, right)
    boundary = [[L[j][i] for j in range(N)] for i in range(N)]
    X = validate_crossed(C0, C1, boundary)
    Ap = _as_zp2(A, p)
    Mbi = Ap.regular_bimodule()
    # i(x) = sum_j p<jx, x> = p (p[x])  (the sum telescopes)
    incl_cols = []
    for k in range(A.dim):
        x = tuple(int(t == k) for t in range(A.dim))
        px = [0] * N
        px[index[x]] = p
        incl_cols.append([(p * c) % q for c in coords(px)])
    incl = [[incl_cols[k][i] for k in range(A.dim)] for i in range(N)]
    pi = [[elems[j][k] for j in range(N)] for k in range(A.dim)]
    ext = CrossedExtension(Ap, Mbi, X, incl, pi).validate()
    W = _sigma_witness(ext, elems, zmult, zunit, L, p)
    return SigmaClass(ext, p, elems, L, W)


# ---------------------------------------------------------------------------
# witness diagrams  0 -> C1 -> S -> A -> 0  over  0 -> M -> C1 -> C0 -> A -> 0


@dataclass
class WitnessDiagram:
    """A ring S with mu: C1 -> S, sig: S -> A and xi: S -> C0 (dense matrices)."""

    S: StructureAlgebra
    mu: list
    xi: list
    sig: list

    def unit_order(self) -> int:
        """Additive order of 1_S."""
        k = 1
        while any(self.S.scale(k, self.S.unit)):
            k += 1
            if k > 10 ** 6:
                raise NoSolution("unit of S has infinite order")
        return k


def check_witness(Y: CrossedExtension, W: WitnessDiagram) -> WitnessDiagram:
    """Validate the diagram: rings maps, exactness and commutativity."""
    S, C0, C1, A = W.S, Y.C0, Y.C1, Y.R
    mods = [FPModule.diagonal(Z, list(o)) for o in (C1.orders, S.orders, A.orders)]
    hs = sequence_is_exact(mods, [W.mu, W.sig])
    if any(not h.is_zero for h in hs):
        raise NoSolution("0 -> C1 -> S -> A -> 0 is not exact", witness=[str(h) for h in hs])
    for name, F, T in (("xi", W.xi, C0), ("sigma", W.sig, A)):
        if T.reduce(mat_vec(F, S.unit)) != T.unit:
            raise NoSolution(f"{name} is not unital")
        for i in range(S.dim):
            for j in range(S.dim):
                lhs = T.reduce(mat_vec(F, S.mult[i][j]))
                rhs = T.mul(T.reduce(_col(F, i)), T.reduce(_col(F, j)))
                if lhs != rhs:
                    raise NoSolution(f"{name} is not multiplicative", witness=(i, j))
    for c in range(C1.dim):
        lhs = C0.reduce(mat_vec(W.xi, S.reduce(_col(W.mu, c))))
        if lhs != C0.reduce(_col(Y.X.boundary, c)):
            raise NoSolution("xi o mu differs from the boundary", witness=c)
    for s in range(S.dim):
        lhs = A.reduce(mat_vec(Y.pi, C0.reduce(_col(W.xi, s))))
        if lhs != A.reduce(_col(W.sig, s)):
            raise NoSolution("pi o xi differs from sigma", witness=s)
    # mu is a bimodule map when S acts on C1 through xi
    for s in range(S.dim):
        es = S.basis_vector(s)
        x0 = C0.reduce(_col(W.xi, s))
        for c in range(C1.dim):
            ec = C1.reduce([int(k == c) for k in range(C1.dim)])
            mc = S.reduce(_col(W.mu, c))
            if S.mul(es, mc) != S.reduce(mat_vec(W.mu, C1.act_left(x0, ec))):
                raise NoSolution("mu is not a left module map", witness=(s, c))
            if S.mul(mc, es) != S.reduce(mat_vec(W.mu, C1.act_right(ec, x0))):
                raise NoSolution("mu is not a right module map", witness=(s, c))
    return W


def _sigma_witness(Y, elems, zmult, zunit, L, p) -> WitnessDiagram:
    """S = Z[A]/p^2 R(A), presented through the Smith form of p^2 L."""
    N = len(elems)
    q = p * p
    rel = [[q * L[j][i] for j in range(N)] for i in range(N)]
    U, D, V = smith_normal_form(rel)
    Uinv = _inverse_unimodular(U)
    keep = [i for i in range(N) if abs(D[i][i]) != 1]
    orders = [abs(D[i][i]) for i in keep]

    def to_s(x):
        y = [sum(U[i][k] * x[k] for k in range(N)) for i in range(N)]
        return [y[i] for i in keep]

    def from_s(i):
        return [Uinv[k][keep[i]] for k in range(N)]

    def zmul(u, v):
        out = [0] * N
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        for k, c in enumerate(zmult[i][j]):
                            if c:
                                out[k] += a * b * c
        return out

    n = len(keep)
    mult = [[to_s(zmul(from_s(i), from_s(j))) for j in range(n)] for i in range(n)]
    S = StructureAlgebra(Z, [f"s{i}" for i in range(n)], mult, to_s(zunit), orders)
    mu = [[0] * N for _ in range(n)]
    for j in range(N):
        v = to_s(L[j])
        for i in range(n):
            mu[i][j] = v[i]
    xi = [[0] * n for _ in range(N)]
    sig = [[0] * n for _ in range(Y.R.dim)]
    for i in range(n):
        x = from_s(i)
        for k in range(N):
            xi[k][i] = x[k] % q
        for k in range(Y.R.dim):
            sig[k][i] = sum(elems[j][k] * x[j] for j in range(N)) % p
    return check_witness(Y, WitnessDiagram(S, mu, xi, sig))


def _inverse_unimodular(U):
    n = len(U)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_integer(U, n, e)
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def kernel_witness_unit_check(Y: CrossedExtension, W: WitnessDiagram) -> bool:
    """For Y in the kernel of (b, e): the witness ring S satisfies p^2 1_S = 0."""
    check_witness(Y, W)
    p = _prime_of(Y.C0.base)
    return not any(W.S.scale(p * p, W.S.unit))
