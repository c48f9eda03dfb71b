"""The Q-construction through degree 2 and the two-term complex V_*(R).

Q_0(A) is free on [a] with [0] = 0, Q_1(A) free on [a,b] with
[a,0] = [0,a] = 0, and Q_2(A) free on [a,b,c,d] modulo

    [a,b,0,0] = [0,0,c,d] = [a,0,c,0] = [0,b,0,d] = [a,0,0,d] = 0.

    d[a,b]     = [a] + [b] - [a+b]
    d[a,b,c,d] = [a,b] + [c,d] - [a+c,b+d] - [a,c] - [b,d] + [a+b,c+d]

For a ring the products [x][y,z] = [xy,xz] and [x,y][u,v] = [xu,xv,yu,yv]
make Q_{<=2} a chain algebra.  Q_3 is not built, so H_2 is not computed;
gamma(a) = [0,a,a,0] is provided as a cycle constructor only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .algebra import Bimodule, StructureAlgebra
from .chainalg import ChainAlgebra, chain_hochschild_total, extend_bound
from .config import check, current_budget
from .errors import NotAComplex
from .exactmod import (
    Z,
    ElementaryDivisors,
    FPModule,
    complex_from_dense,
    integer_kernel,
    lattice_basis,
    smith_normal_form,
    solve_integer,
)


@dataclass
class FiniteAbelianGroup:
    """Z/o_1 x ... x Z/o_k with elements as tuples."""

    orders: tuple

    def elements(self):
        return [tuple(t) for t in product(*(range(o) for o in self.orders))]

    def add(self, a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, self.orders))

    def neg(self, a):
        return tuple((-x) % o for x, o in zip(a, self.orders))

    @property
    def zero(self):
        return (0,) * len(self.orders)

    @property
    def order(self):
        out = 1
        for o in self.orders:
            out *= o
        return out


def _group_of(A):
    if isinstance(A, StructureAlgebra):
        if any(o == 0 for o in A.orders):
            raise ValueError("the ring must be finite")
        return FiniteAbelianGroup(tuple(A.orders)), A
    if isinstance(A, FiniteAbelianGroup):
        return A, None
    if isinstance(A, int):
        return FiniteAbelianGroup((A,)), None
    return FiniteAbelianGroup(tuple(A)), None


# zero patterns of the five Q_2 relations, as positions that must vanish
Q2_ZERO_PATTERNS = ((2, 3), (0, 1), (1, 3), (0, 2), (1, 2))


def q2_killed(t, zero) -> bool:
    return any(all(t[i] == zero for i in pat) for pat in Q2_ZERO_PATTERNS)


@dataclass
class QComplex:
    group: FiniteAbelianGroup
    ring: StructureAlgebra | None
    Q0: list
    Q1: list
    Q2: list
    d1: list  # len(Q0) x len(Q1)
    d2: list  # len(Q1) x len(Q2)
    algebra: ChainAlgebra | None = None
    index: dict = field(default_factory=dict)

    @property
    def ranks(self):
        return len(self.Q0), len(self.Q1), len(self.Q2)

    def vec(self, k, combo: dict):
        """Dense vector of a combination {generator tuple: coefficient} (killed ones dropped)."""
        idx = self.index[k]
        v = [0] * len(idx)
        for t, c in combo.items():
            if t in idx:
                v[idx[t]] += c
        return v


def _reduced_basis(tuples, killed, n_all):
    """Quotient of the free module on ``tuples`` by the relations e_t, t killed.

    The rank comes from the Smith form of the relation matrix; the basis
    is the list of surviving tuples."""
    rel_cols = [[int(i == j) for i in range(n_all)] for j, t in enumerate(tuples) if killed(t)]
    rank = 0
    if rel_cols:
        A = [[c[i] for c in rel_cols] for i in range(n_all)]
        _, D, _ = smith_normal_form(A)
        rank = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
    keep = [t for t in tuples if not killed(t)]
    if len(keep) != n_all - rank:
        raise NotAComplex("relation span does not match the surviving generators")
    return keep


def build_q(A) -> QComplex:
    """Q_0, Q_1, Q_2 with boundaries; for a finite ring also the products."""
    G, R = _group_of(A)
    check("|A| for the Q-construction", G.order, current_budget().q_order)
    els = G.elements()
    z = G.zero
    nz = [a for a in els if a != z]
    Q0 = [(a,) for a in nz]
    pairs = list(product(els, repeat=2))
    Q1 = _reduced_basis(pairs, lambda t: z in t, len(pairs))
    quads = list(product(els, repeat=4))
    Q2 = _reduced_basis(quads, lambda t: q2_killed(t, z), len(quads))
    index = {0: {t: i for i, t in enumerate(Q0)},
             1: {t: i for i, t in enumerate(Q1)},
             2: {t: i for i, t in enumerate(Q2)}}
    add = G.add
    d1 = [[0] * len(Q1) for _ in Q0]
    for j, (a, b) in enumerate(Q1):
        for t, c in (((a,), 1), ((b,), 1), ((add(a, b),), -1)):
            if t in index[0]:
                d1[index[0][t]][j] += c
    d2 = [[0] * len(Q2) for _ in Q1]
    for j, t in enumerate(Q2):
        for s, c in _d2_terms(t, add):
            if s in index[1]:
                d2[index[1][s]][j] += c
    Q = QComplex(G, R, Q0, Q1, Q2, d1, d2, index=index)
    _check_q(Q)
    if R is not None:
        Q.algebra = _q_ring(Q, R)
    return Q


def _d2_terms(t, add):
    a, b, c, d = t
    return [((a, b), 1), ((c, d), 1), ((add(a, c), add(b, d)), -1),
            ((a, c), -1), ((b, d), -1), ((add(a, b), add(c, d)), 1)]


def _check_q(Q: QComplex):
    """d1 d2 = 0, and boundaries of killed generators reduce to zero."""
    G = Q.group
    z = G.zero
    for j in range(len(Q.Q2)):
        for i in range(len(Q.Q0)):
            if sum(Q.d1[i][k] * Q.d2[k][j] for k in range(len(Q.Q1))):
                raise NotAComplex("d1 d2 != 0", witness=Q.Q2[j])
    for a in G.elements():
        for t in ((a, z), (z, a)):
            v = Q.vec(0, {(a,): 1, (z,): 1})
            w = Q.vec(0, {(G.add(*t),): 1})
            if any(x - y for x, y in zip(v, w)):
                raise NotAComplex("d1 does not respect [a,0] = [0,a] = 0", witness=t)
    for t in product(G.elements(), repeat=4):
        if q2_killed(t, z):
            combo = {}
            for s, c in _d2_terms(t, G.add):
                combo[s] = combo.get(s, 0) + c
            if any(Q.vec(1, combo)):
                raise NotAComplex("d2 does not respect the Q_2 relations", witness=t)


def _q_ring(Q: QComplex, R: StructureAlgebra) -> ChainAlgebra:
    def mul(x, y):
        return tuple(R.mul(x, y))

    basis = [[_name(t) for t in Q.Q0], [_name(t) for t in Q.Q1], [_name(t) for t in Q.Q2]]
    mult = {}

    def put(i, j, a, b, deg, t):
        v = [0] * len(basis[deg])
        if t in Q.index[deg]:
            v[Q.index[deg][t]] = 1
        mult.setdefault((i, j), {})[(a, b)] = v

    for a, (x,) in enumerate(Q.Q0):
        for b, (y,) in enumerate(Q.Q0):
            put(0, 0, a, b, 0, (mul(x, y),))
        for b, (y, w) in enumerate(Q.Q1):
            put(0, 1, a, b, 1, (mul(x, y), mul(x, w)))
            put(1, 0, b, a, 1, (mul(y, x), mul(w, x)))
        for b, t in enumerate(Q.Q2):
            put(0, 2, a, b, 2, tuple(mul(x, s) for s in t))
            put(2, 0, b, a, 2, tuple(mul(s, x) for s in t))
    for a, (x, y) in enumerate(Q.Q1):
        for b, (u, v) in enumerate(Q.Q1):
            put(1, 1, a, b, 2, (mul(x, u), mul(x, v), mul(y, u), mul(y, v)))
    unit = [0] * len(Q.Q0)
    unit[Q.index[0][(tuple(R.unit),)]] = 1
    return ChainAlgebra(Z, basis, mult, {1: Q.d1, 2: Q.d2}, unit, bound=2)


def _name(t):
    return "[" + ",".join("".join(map(str, a)) for a in t) + "]"


def _ensure_q(Q):
    return Q if isinstance(Q, QComplex) else build_q(Q)


def q_low_homology(Q):
    """(H_0, H_1) of Q_*(A) as elementary divisors; accepts A or a built QComplex."""
    Q = _ensure_q(Q)
    C = _as_cochain(Q)
    return C.group(2).divisors, C.group(1).divisors


def _as_cochain(Q: QComplex):
    mods = {0: FPModule.free(Z, len(Q.Q2)), 1: FPModule.free(Z, len(Q.Q1)), 2: FPModule.free(Z, len(Q.Q0))}
    return complex_from_dense(Z, mods, {0: Q.d2, 1: Q.d1})


def gamma(Q, a) -> list:
    """The chain [0,a,a,0] in Q_2 (zero when a = 0); asserts d2 gamma(a) = 0."""
    Q = _ensure_q(Q)
    if isinstance(a, int):
        a = (a,)
    z = Q.group.zero
    a = tuple(a)
    v = Q.vec(2, {(z, a, a, z): 1})
    bd = [sum(row[j] * v[j] for j in range(len(v))) for row in Q.d2]
    if any(bd):
        raise NotAComplex("gamma(a) is not a cycle", witness=a)
    return v


# ---------------------------------------------------------------------------
# V_*(R) = (Ker eps -> Q_0(R))


@dataclass
class VComplex:
    R: StructureAlgebra
    algebra: ChainAlgebra
    eps: list  # R.dim x rank Q_0
    lattice: list  # basis of Ker eps inside Q_0


def v_complex(R: StructureAlgebra, bound: int = 3) -> VComplex:
    G, _ = _group_of(R)
    check("|R| for V_*(R)", G.order, current_budget().q_order)
    els = [a for a in R.elements() if any(a)]
    N = len(els)
    idx = {a: i for i, a in enumerate(els)}
    E = [[els[j][k] for j in range(N)] for k in range(R.dim)]
    big = [list(E[k]) + [R.orders[k] if t == k else 0 for t in range(R.dim)] for k in range(R.dim)]
    L = lattice_basis([v[:N] for v in integer_kernel(big, N + R.dim)], N)
    Lmat = [[L[j][i] for j in range(N)] for i in range(N)]

    def coords(x):
        c = solve_integer(Lmat, N, list(x))
        if c is None:
            raise NotAComplex("product left the kernel of eps", witness=tuple(x))
        return c

    def zmul(u, v):
        out = [0] * N
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        c = R.mul(els[i], els[j])
                        if any(c):
                            out[idx[c]] += a * b
        return out

    m00, m01, m10 = {}, {}, {}
    for a in range(N):
        ea = [int(k == a) for k in range(N)]
        for b in range(N):
            m00[(a, b)] = zmul(ea, [int(k == b) for k in range(N)])
        for j in range(N):
            m01[(a, j)] = coords(zmul(ea, L[j]))
            m10[(j, a)] = coords(zmul(L[j], ea))
    unit = [0] * N
    unit[idx[tuple(R.unit)]] = 1
    basis = [[f"[{''.join(map(str, a))}]" for a in els], [f"v{j}" for j in range(N)]]
    V = ChainAlgebra(Z, basis, {(0, 0): m00, (0, 1): m01, (1, 0): m10}, {1: Lmat}, unit, bound=1)
    V = extend_bound(V, bound)
    return VComplex(R, V, E, L)


@dataclass
class VReport:
    rows: list  # (n, V-side divisors, Shukla divisors, equal)

    @property
    def all_equal(self):
        return all(r[3] for r in self.rows)


def v_complex_compare(R: StructureAlgebra, M: Bimodule, n_max: int = 2) -> VReport:
    """Degree <= n_max cohomology of V_*(R) against Shukla^n(R/Z, M)."""
    from .shukla import ShuklaQuery, shukla_cohomology

    Vc = v_complex(R, n_max + 1)
    left = chain_hochschild_total(Vc.algebra, M, n_max, Vc.eps)
    right = shukla_cohomology(ShuklaQuery(R, M, n_max))
    rows = []
    for n in range(n_max + 1):
        a, b = left[n], right[n]
        rows.append((n, a, b, a == b))
    return VReport(rows)


__all__ = [
    "FiniteAbelianGroup",
    "QComplex",
    "build_q",
    "q_low_homology",
    "gamma",
    "VComplex",
    "v_complex",
    "v_complex_compare",
    "VReport",
    "ElementaryDivisors",
]
