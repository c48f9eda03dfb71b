"""The bicomplex K^{pq}(K, R, M) for an algebra K over a prime field k.

K^{pq} = Hom_k(K^{(x)pq} (x) R^{(x)q}, M).  A cochain of bidegree (p, q)
is evaluated on a p x q matrix of K-basis indices ``a`` (rows i = 1..p,
columns j = 1..q) and a q-tuple ``r`` of R-basis indices.

Horizontally K^{*q} is the Hochschild complex of K^{(x)q} (rows are the
arguments) with coefficients in C^q(R, M); vertically K^{p*} is the
Hochschild complex of K^{(x)p} (x) R (columns are the arguments) with
coefficients in M, carrying an extra sign (-1)^p.  With that sign built
into the vertical differential, d and delta anticommute and the total
differential is D = d + delta.

The subcomplex Kbar keeps M in bidegree (0, 0) and drops the rest of
row q = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .algebra import Bimodule, StructureAlgebra
from .config import check, current_budget
from .errors import GroundNotOverField, NotAPair, NoSolution
from .exactmod import (
    CochainComplexSpec,
    FPModule,
    SparseMatrix,
    nullspace_mod_p,
    rank_mod_p,
    solve_in,
)
from .extensions import AbelianExtension, CrossedExtension, mat_vec
from .hochschild import CohomologyResult


@dataclass
class BicomplexSpec:
    """Input of the bicomplex: K over k, R over K (kmap: K -> R), M over R."""

    K: StructureAlgebra
    R: StructureAlgebra
    M: Bimodule
    kmap: list  # R.dim x K.dim
    n_max: int = 5

    def __post_init__(self):
        for A in (self.K, self.R):
            if not A.base.is_field:
                raise GroundNotOverField("the bicomplex needs algebras over a prime field",
                                         witness=str(A.base))
        if self.K.base != self.R.base:
            raise GroundNotOverField("K and R must share the prime field")
        if not self.K.is_commutative():
            raise GroundNotOverField("the ground algebra must be commutative")
        # K -> R is a unital algebra map with central image
        R = self.R
        if self.to_r(self.K.unit) != R.unit:
            raise NoSolution("K -> R is not unital")
        for a in range(self.K.dim):
            ra = self.to_r(self.K.basis_vector(a))
            for b in range(self.K.dim):
                if self.to_r(self.K.mult[a][b]) != R.mul(ra, self.to_r(self.K.basis_vector(b))):
                    raise NoSolution("K -> R is not multiplicative", witness=(a, b))
            for r in range(R.dim):
                er = R.basis_vector(r)
                if R.mul(ra, er) != R.mul(er, ra):
                    raise NoSolution("image of K is not central", witness=(a, r))

    def to_r(self, v):
        return self.R.reduce(mat_vec(self.kmap, v))


# ---------------------------------------------------------------------------
# sparse multilinear helpers


def _sp(v):
    return [(i, c) for i, c in enumerate(v) if c]


def _expand(factors):
    """Tensor product of sparse vectors: list of (index tuple, coefficient)."""
    out = [((), 1)]
    for f in factors:
        out = [(t + (i,), c * x) for t, c in out for i, x in f]
    return out


class Bicomplex:
    """Total complex of Kbar^{**}(K, R, M) in degrees 0..n_max+1."""

    def __init__(self, spec: BicomplexSpec):
        self.spec = spec
        K, R, M = spec.K, spec.R, spec.M
        self.p = K.base.modulus
        budget = current_budget()
        n_max = spec.n_max
        check("bicomplex degree", n_max, budget.bicomplex_n_max)
        self.cells = {}
        for n in range(n_max + 2):
            for p in range(n + 1):
                q = n - p
                if not self.in_kbar(p, q):
                    continue
                size = K.dim ** (p * q) * R.dim ** q * M.dim
                check(f"bicomplex bidegree ({p},{q})", size, budget.bicomplex_cells)
                self.cells[(p, q)] = [
                    (tuple(tuple(a[i * q:(i + 1) * q]) for i in range(p)), r)
                    for a in product(range(K.dim), repeat=p * q)
                    for r in product(range(R.dim), repeat=q)
                ]
        # offsets inside each total degree
        self.offset, self.index = {}, {}
        for n in range(n_max + 2):
            off = 0
            for p in range(n + 1):
                cell = self.cells.get((p, n - p))
                if cell is None:
                    continue
                self.offset[(p, n - p)] = off
                self.index[(p, n - p)] = {g: i for i, g in enumerate(cell)}
                off += len(cell) * M.dim
            self.offset[("total", n)] = off
        # products in K and R, actions of K through R
        self.kprod = [[_sp(K.mult[a][b]) for b in range(K.dim)] for a in range(K.dim)]
        self.rprod = [[_sp(R.mult[r][s]) for s in range(R.dim)] for r in range(R.dim)]
        self.k_on_r = [[_sp(R.mul(spec.to_r(K.basis_vector(a)), R.basis_vector(r))) for r in range(R.dim)]
                       for a in range(K.dim)]
        self.k_in_r = [spec.to_r(K.basis_vector(a)) for a in range(K.dim)]
        modules = {n: FPModule.diagonal(K.base, list(M.orders) * (self.offset[("total", n)] // max(M.dim, 1)))
                   for n in range(n_max + 2)}
        maps = {n: self._matrix(n) for n in range(n_max + 1)}
        self.complex = CochainComplexSpec(K.base, modules, maps)

    @staticmethod
    def in_kbar(p, q):
        return q >= 1 or (p, q) == (0, 0)

    def size(self, n):
        return self.offset[("total", n)]

    # -- evaluation of one component on a generator ------------------------
    def _kprod_row(self, row):
        """Product of the K entries of a row, as a sparse K-vector."""
        K = self.spec.K
        v = K.unit
        for a in row:
            v = K.mul(v, K.basis_vector(a))
        return v

    def _r_elem(self, kvec, r):
        """kvec . e_r in R (dense)."""
        R = self.spec.R
        out = R.mul(self.spec.to_r(kvec), R.basis_vector(r))
        return out

    def terms_d(self, A, r):
        """(Df) at the generator (A, r) of bidegree (p+1, q), from f of bidegree (p, q).

        Returns (list of (source key, coefficient, left R-element or None))."""
        p1, q = len(A), len(r)
        p = p1 - 1
        out = []
        # row 0 product acting on the left
        prod0 = self._kprod_row(A[0]) if q else self.spec.K.unit
        out.append(((A[1:], r), 1, ("L", self.spec.to_r(prod0))))
        for i in range(p):
            sign = -1 if (i + 1) % 2 else 1
            facs = [self.kprod[A[i][j]][A[i + 1][j]] for j in range(q)]
            for t, c in _expand(facs):
                newA = A[:i] + (t,) + A[i + 2:]
                out.append(((newA, r), sign * c, None))
        sign = -1 if (p + 1) % 2 else 1
        facs = [self.k_on_r[A[p][j]][r[j]] for j in range(q)]
        for t, c in _expand(facs):
            out.append(((A[:p], t), sign * c, None))
        return out

    def terms_delta(self, A, r):
        """(delta f) at (A, r) of bidegree (p, q+1), f of bidegree (p, q)."""
        p, q1 = len(A), len(r)
        q = q1 - 1
        out = []
        col = lambda j: [A[i][j] for i in range(p)]  # noqa: E731
        drop = lambda j: tuple(tuple(row[:j] + row[j + 1:]) for row in A)  # noqa: E731
        # (-1)^p (a_10..a_p0 r_0) f(rest)
        kv = self.spec.K.unit
        for a in col(0):
            kv = self.spec.K.mul(kv, self.spec.K.basis_vector(a))
        left = self._r_elem(kv, r[0])
        out.append(((drop(0), r[1:]), -1 if p % 2 else 1, ("L", left)))
        for i in range(q):
            sign = -1 if (i + p + 1) % 2 else 1
            facs = [self.kprod[A[j][i]][A[j][i + 1]] for j in range(p)]
            for t, c in _expand(facs):
                for s, x in self.rprod[r[i]][r[i + 1]]:
                    newA = tuple(tuple(row[:i]) + (t[j],) + tuple(row[i + 2:]) for j, row in enumerate(A))
                    out.append(((newA, r[:i] + (s,) + r[i + 2:]), sign * c * x, None))
        kv = self.spec.K.unit
        for a in col(q):
            kv = self.spec.K.mul(kv, self.spec.K.basis_vector(a))
        right = self._r_elem(kv, r[q])
        sign = -1 if (q + p + 1) % 2 else 1
        out.append(((drop(q), r[:q]), sign, ("R", right)))
        return out

    def _matrix(self, n) -> SparseMatrix:
        M = self.spec.M
        md = M.dim
        ent = {}
        for p in range(n + 2):
            q = n + 1 - p
            cell = self.cells.get((p, q))
            if cell is None:
                continue
            base_row = self.offset[(p, q)]
            jobs = []
            if p >= 1 and self.in_kbar(p - 1, q):
                jobs.append(((p - 1, q), self.terms_d))
            if q >= 1 and self.in_kbar(p, q - 1):
                jobs.append(((p, q - 1), self.terms_delta))
            for g_i, (A, r) in enumerate(cell):
                row0 = base_row + g_i * md
                for src, fn in jobs:
                    idx = self.index[src]
                    col_base = self.offset[src]
                    for key, c, act in fn(A, r):
                        if not c:
                            continue
                        j = idx[key]
                        c0 = col_base + j * md
                        if act is None:
                            for k in range(md):
                                ent[(row0 + k, c0 + k)] = ent.get((row0 + k, c0 + k), 0) + c
                        else:
                            mat = M._combo(M.left if act[0] == "L" else M.right, act[1])
                            for k in range(md):
                                for l in range(md):
                                    if mat[k][l]:
                                        key2 = (row0 + k, c0 + l)
                                        ent[key2] = ent.get(key2, 0) + c * mat[k][l]
        pm = self.p
        ent = {k: v % pm for k, v in ent.items() if v % pm}
        return SparseMatrix(self.size(n + 1), self.size(n), ent)

    # -- vectors <-> cochain components ------------------------------------
    def vector(self, n, components: dict):
        """Total-degree-n vector from {(p, q): {(A, r): M-vector}}."""
        md = self.spec.M.dim
        v = [0] * self.size(n)
        for (p, q), vals in components.items():
            if (p, q) not in self.index:
                continue
            base = self.offset[(p, q)]
            idx = self.index[(p, q)]
            for key, m in vals.items():
                i = base + idx[key] * md
                for k, x in enumerate(m):
                    v[i + k] = (v[i + k] + x) % self.p
        return v

    def component(self, n, v, p):
        q = n - p
        md = self.spec.M.dim
        base = self.offset[(p, q)]
        return {key: tuple(v[base + i * md: base + (i + 1) * md]) for i, key in enumerate(self.cells[(p, q)])}

    def check_square_zero(self):
        for n in range(self.spec.n_max):
            prod = self.complex.d(n + 1) @ self.complex.d(n)
            if not prod.is_zero(self.p):
                raise NoSolution("D o D is not zero", witness=n)
        return True


def total_cohomology(spec: BicomplexSpec) -> CohomologyResult:
    """H^n(Kbar(K, R, M)) for n <= n_max."""
    B = Bicomplex(spec)
    groups = {n: B.complex.group(n).divisors for n in range(spec.n_max + 1)}
    return CohomologyResult(groups, B, strategy="bicomplex")


# ---------------------------------------------------------------------------
# relative Hochschild complex and alpha


@dataclass
class AlphaReport:
    degree: int
    rank: int
    source_dim: int
    target_dim: int

    @property
    def injective(self):
        return self.rank == self.source_dim

    @property
    def surjective(self):
        return self.rank == self.target_dim

    @property
    def isomorphism(self):
        return self.injective and self.surjective


def relative_cochains(B: Bicomplex, n: int) -> list[list[int]]:
    """Basis (in K^{0n} coordinates) of the K-multilinear n-cochains: ker(d: K^{0n} -> K^{1n})."""
    if n == 0:
        return [[int(i == j) for i in range(B.spec.M.dim)] for j in range(B.spec.M.dim)]
    src = (0, n)
    tgt = (1, n)
    md = B.spec.M.dim
    ns = len(B.cells[src]) * md
    ent = {}
    for g_i, (A, r) in enumerate(B.cells[tgt]):
        for key, c, act in B.terms_d(A, r):
            j = B.index[src][key]
            if act is None:
                for k in range(md):
                    ent[(g_i * md + k, j * md + k)] = ent.get((g_i * md + k, j * md + k), 0) + c
            else:
                mat = B.spec.M._combo(B.spec.M.left, act[1])
                for k in range(md):
                    for l in range(md):
                        if mat[k][l]:
                            ent[(g_i * md + k, j * md + l)] = ent.get((g_i * md + k, j * md + l), 0) + c * mat[k][l]
    p = B.p
    D = SparseMatrix(len(B.cells[tgt]) * md, ns, {k: v % p for k, v in ent.items() if v % p})
    return [[v.get(i, 0) for i in range(ns)] for v in nullspace_mod_p(D, p)]


def _embed(B: Bicomplex, n, vec_0n):
    """Place a K^{0n} vector into the total degree n."""
    v = [0] * B.size(n)
    base = B.offset[(0, n)]
    v[base:base + len(vec_0n)] = vec_0n
    return v


def alpha_map(spec: BicomplexSpec) -> list[AlphaReport]:
    """Rank of alpha^n: H^n(R/K, M) -> H^n(Kbar) for n <= n_max.

    H^n(R/K, M) is computed as the cohomology of the subcomplex of
    K-multilinear cochains; its image is read in the total complex."""
    B = Bicomplex(spec)
    p = B.p
    n_max = spec.n_max
    bases = {n: relative_cochains(B, n) for n in range(n_max + 1)}
    reports = []
    for n in range(n_max + 1):
        # relative cocycles: combinations of bases[n] killed by delta
        Zn = _relative_cocycles(B, n, bases[n])
        # relative coboundaries: delta of bases[n-1], expressed in K^{0n}
        Bn = [B.complex.d(n - 1).apply(_embed(B, n - 1, v)) for v in bases.get(n - 1, [])] if n else []
        rank_z = _rank(Zn, p)
        rank_b = _rank(Bn, p)
        src_dim = rank_z - rank_b
        tgt = B.complex.group(n)
        tgt_dim = tgt.divisors.dimension
        # image of alpha: classes of Zn in H^n(Kbar); rank of span(Zn + im D) - rank(im D)
        imD = [B.complex.d(n - 1).column(j) for j in range(B.size(n - 1))] if n else []
        r_all = _rank([_embed(B, n, z) for z in Zn] + imD, p)
        r_im = _rank(imD, p)
        reports.append(AlphaReport(n, r_all - r_im, src_dim, tgt_dim))
    return reports


def _relative_cocycles(B, n, basis):
    if not basis:
        return []
    p = B.p
    cols = [B.complex.d(n).apply(_embed(B, n, v)) for v in basis]
    A = SparseMatrix.from_columns(B.size(n + 1), cols)
    out = []
    for comb in nullspace_mod_p(A, p):
        v = [0] * len(basis[0])
        for j, c in comb.items():
            for i, x in enumerate(basis[j]):
                v[i] = (v[i] + c * x) % p
        out.append(v)
    return out


def _rank(vecs, p):
    vecs = [v for v in vecs if any(x % p for x in v)]
    if not vecs:
        return 0
    return rank_mod_p(SparseMatrix.from_columns(len(vecs[0]), vecs), p)


# ---------------------------------------------------------------------------
# pairs (f, g) and K-algebra extensions


@dataclass
class KExtension:
    """An abelian extension with the K-action on E (one matrix per K-basis vector)."""

    ext: AbelianExtension
    action: list
    spec: BicomplexSpec

    def validate(self):
        E, K = self.ext.E, self.spec.K
        for a in range(K.dim):
            T = self.action[a]
            for i in range(E.dim):
                for j in range(E.dim):
                    x, y = E.basis_vector(i), E.basis_vector(j)
                    xy = E.reduce(E.mult[i][j])
                    lhs = E.reduce(mat_vec(T, xy))
                    if lhs != E.mul(E.reduce(mat_vec(T, x)), y) or lhs != E.mul(x, E.reduce(mat_vec(T, y))):
                        raise NotAPair("K does not act by bimodule endomorphisms", witness=(a, i, j))
            for b in range(K.dim):
                ab = K.mult[a][b]
                Tab = [[sum(c * self.action[t][r][s] for t, c in enumerate(ab)) for s in range(E.dim)]
                       for r in range(E.dim)]
                comp = [[sum(T[r][u] * self.action[b][u][s] for u in range(E.dim)) for s in range(E.dim)]
                        for r in range(E.dim)]
                mod = K.base.modulus
                if any((Tab[r][s] - comp[r][s]) % mod for r in range(E.dim) for s in range(E.dim)):
                    raise NotAPair("K-action is not associative", witness=(a, b))
        unit = [[sum(c * self.action[t][r][s] for t, c in enumerate(K.unit)) for s in range(E.dim)]
                for r in range(E.dim)]
        for r in range(E.dim):
            for s in range(E.dim):
                if (unit[r][s] - int(r == s)) % K.base.modulus:
                    raise NotAPair("the unit of K does not act as the identity")
        # the projection is K-linear
        for a in range(K.dim):
            for i in range(E.dim):
                lhs = self.ext.R.reduce(mat_vec(self.ext.proj, mat_vec(self.action[a], E.basis_vector(i))))
                rhs = self.ext.R.mul(self.spec.to_r(K.basis_vector(a)),
                                     self.ext.R.reduce(mat_vec(self.ext.proj, E.basis_vector(i))))
                if lhs != rhs:
                    raise NotAPair("projection is not K-linear", witness=(a, i))
        return self


def _pair_terms(spec: BicomplexSpec, f: dict, g: dict):
    """Residuals of the three pair relations, first failure returned."""
    K, R, M = spec.K, spec.R, spec.M
    zero = (0,) * M.dim

    def F(r, s):
        return f.get((r, s), zero)

    def G(a, r):
        return g.get((a, r), zero)

    def Fv(x, y):
        out = [0] * M.dim
        for i, c in enumerate(x):
            for j, d in enumerate(y):
                if c and d:
                    for k, v in enumerate(F(i, j)):
                        out[k] += c * d * v
        return M.reduce(out)

    def Gv(kv, x):
        out = [0] * M.dim
        for i, c in enumerate(kv):
            for j, d in enumerate(x):
                if c and d:
                    for k, v in enumerate(G(i, j)):
                        out[k] += c * d * v
        return M.reduce(out)

    def add(*vs):
        return M.reduce([sum(t) for t in zip(*vs)])

    def neg(v):
        return M.reduce([-x for x in v])

    def kr(a, r):
        return R.mul(spec.to_r(a), r)

    Kb = [K.basis_vector(a) for a in range(K.dim)]
    Rb = [R.basis_vector(r) for r in range(R.dim)]
    # a g(b, r) - g(ab, r) + g(a, br) = 0
    for a, b, r in product(range(K.dim), range(K.dim), range(R.dim)):
        v = add(M.act_left(spec.to_r(Kb[a]), G(b, r)), neg(Gv(K.mult[a][b], Rb[r])), Gv(Kb[a], kr(Kb[b], Rb[r])))
        if any(v):
            raise NotAPair("a g(b,r) - g(ab,r) + g(a,br) != 0", witness=(a, b, r))
    # ab f(r,s) - f(ar,bs) = ar g(b,s) - g(ab,rs) + g(a,r) bs
    for a, b, r, s in product(range(K.dim), range(K.dim), range(R.dim), range(R.dim)):
        ab = spec.to_r(K.mult[a][b])
        lhs = add(M.act_left(ab, F(r, s)), neg(Fv(kr(Kb[a], Rb[r]), kr(Kb[b], Rb[s]))))
        rhs = add(M.act_left(kr(Kb[a], Rb[r]), G(b, s)), neg(Gv(K.mult[a][b], R.mult[r][s])),
                  M.act_right(G(a, r), kr(Kb[b], Rb[s])))
        if lhs != rhs:
            raise NotAPair("ab f(r,s) - f(ar,bs) != ar g(b,s) - g(ab,rs) + g(a,r) bs", witness=(a, b, r, s))
    # Hochschild cocycle condition on f
    for r, s, t in product(range(R.dim), repeat=3):
        v = add(M.act_left(Rb[r], F(s, t)), neg(Fv(R.mult[r][s], Rb[t])), Fv(Rb[r], R.mult[s][t]),
                neg(M.act_right(F(r, s), Rb[t])))
        if any(v):
            raise NotAPair("f is not a Hochschild cocycle", witness=(r, s, t))


def check_pair(spec: BicomplexSpec, f: dict, g: dict):
    _pair_terms(spec, f, g)


def pair_to_extension(spec: BicomplexSpec, f: dict, g: dict) -> KExtension:
    """S = M (+) R with a(m, r) = (am + g(a, r), ar) and
    (m, r)(n, s) = (ms + rn + f(r, s), rs)."""
    check_pair(spec, f, g)
    from .hochschild import Cochain
    from .extensions import semidirect_from_2cocycle

    R, M, K = spec.R, spec.M, spec.K
    fc = Cochain(R, M, 2, dict(f)).clean()
    X = semidirect_from_2cocycle(R, M, fc)
    dm, dr = M.dim, R.dim
    n = dm + dr
    action = []
    for a in range(K.dim):
        T = [[0] * n for _ in range(n)]
        La = M._combo(M.left, spec.to_r(K.basis_vector(a)))
        for i in range(dm):
            for k in range(dm):
                T[k][i] = La[k][i]
        for r in range(dr):
            ar = R.mul(spec.to_r(K.basis_vector(a)), R.basis_vector(r))
            gv = g.get((a, r), (0,) * dm)
            for k in range(dm):
                T[k][dm + r] = gv[k]
            for k in range(dr):
                T[dm + k][dm + r] = ar[k]
        action.append(T)
    return KExtension(X, action, spec).validate()


def extension_to_pair(Xk: KExtension, section=None):
    """(f, g) from a k-linear section h: f = h(r)h(s) - h(rs), g = a h(r) - h(ar)."""
    X, spec = Xk.ext, Xk.spec
    R, E, M, K = X.R, X.E, X.M, spec.K
    if section is None:
        section = []
        for r in range(R.dim):
            x = solve_in(X.proj, list(R.basis_vector(r)), R.module)
            section.append(E.reduce(x))
    h = section

    def h_of(v):
        out = [0] * E.dim
        for i, c in enumerate(v):
            if c:
                for k, x in enumerate(h[i]):
                    out[k] += c * x
        return E.reduce(out)

    def back(e):
        m = solve_in(X.incl, list(e), E.module)
        if m is None:
            raise NoSolution("value not in M", witness=e)
        return M.reduce(m)

    f, g = {}, {}
    for r, s in product(range(R.dim), repeat=2):
        v = E.sub(E.mul(h[r], h[s]), h_of(R.mult[r][s]))
        m = back(v)
        if any(m):
            f[(r, s)] = m
    for a, r in product(range(K.dim), range(R.dim)):
        ah = E.reduce(mat_vec(Xk.action[a], h[r]))
        ar = R.mul(spec.to_r(K.basis_vector(a)), R.basis_vector(r))
        m = back(E.sub(ah, h_of(ar)))
        if any(m):
            g[(a, r)] = m
    return f, g


def pair_vector(B: Bicomplex, f: dict, g: dict):
    """The total-degree-2 vector of (f, g): f in K^{02}, g in K^{11}."""
    comps = {
        (0, 2): {((), (r, s)): v for (r, s), v in f.items()},
        (1, 1): {(((a,),), (r,)): v for (a, r), v in g.items()},
    }
    return B.vector(2, comps)


def same_class(B: Bicomplex, n, u, v) -> bool:
    grp = B.complex.group(n)
    diff = [(x - y) % B.p for x, y in zip(u, v)]
    return grp.is_cocycle(diff) and grp.is_coboundary(diff)


# ---------------------------------------------------------------------------
# crossed extensions of K-algebras and triples (f, g, h)


@dataclass
class Triple:
    f: dict  # (r, s, t) -> M
    g: dict  # (a, b, r, s) -> M
    h: dict  # (a, b, r) -> M
    m: dict = field(default_factory=dict)  # (r, s) -> C1
    n: dict = field(default_factory=dict)  # (a, r) -> C1


def crossed_to_triple(spec: BicomplexSpec, Y: CrossedExtension, phi0, sections=None) -> Triple:
    """(f, g, h) of a crossed extension of K-algebras.

    ``phi0`` is the matrix of K -> C0; K acts on C1 through C0.  With
    k-linear sections p of pi and q of the boundary onto its image,
    m(r,s) = q(p(r)p(s) - p(rs)), n(a,r) = q(a p(r) - p(ar)) and

      f(r,s,t)   = p(r)m(s,t) - m(rs,t) + m(r,st) - m(r,s)p(t)
      g(a,b,r,s) = ab m(r,s) - m(ar,bs) - p(ar) n(b,s) + n(ab,rs) - n(a,r) b p(s)
      h(a,b,r)   = a n(b,r) - n(ab,r) + n(a,br)

    With these signs (f, g, h) is a cocycle for D = d + delta."""
    K, R = spec.K, spec.R
    C0, C1, M = Y.C0, Y.C1, Y.M
    if sections is None:
        P = []
        for r in range(R.dim):
            x = solve_in(Y.pi, list(R.basis_vector(r)), R.module)
            if x is None:
                raise NoSolution("pi is not onto", witness=r)
            P.append(C0.reduce(x))
        u = R.unit_index()
        if u is not None:
            P[u] = C0.unit
    else:
        P = [C0.reduce(x) for x in sections]

    def p_of(v):
        out = [0] * C0.dim
        for i, c in enumerate(v):
            if c:
                for k, x in enumerate(P[i]):
                    out[k] += c * x
        return C0.reduce(out)

    def lift(v):
        if not any(v):
            return (0,) * C1.dim
        x = solve_in(Y.X.boundary, list(v), C0.module)
        if x is None:
            raise NoSolution("value is not a boundary", witness=v)
        return C1.reduce(x)

    def phi(a):
        return C0.reduce(mat_vec(phi0, a))

    Kb = [K.basis_vector(a) for a in range(K.dim)]
    Rb = [R.basis_vector(r) for r in range(R.dim)]
    m = {(r, s): lift(C0.sub(C0.mul(P[r], P[s]), p_of(R.mult[r][s])))
         for r, s in product(range(R.dim), repeat=2)}
    n = {}
    for a, r in product(range(K.dim), range(R.dim)):
        ar = R.mul(spec.to_r(Kb[a]), Rb[r])
        n[(a, r)] = lift(C0.sub(C0.mul(phi(Kb[a]), P[r]), p_of(ar)))

    def bil(table, x, y):
        out = [0] * C1.dim
        for i, c in enumerate(x):
            for j, d in enumerate(y):
                if c and d:
                    for k, v in enumerate(table[(i, j)]):
                        out[k] += c * d * v
        return C1.reduce(out)

    def add(*vs):
        return C1.reduce([sum(t) for t in zip(*vs)])

    def neg(v):
        return C1.reduce([-x for x in v])

    def back(v):
        x = solve_in(Y.incl, list(v), C1.carrier)
        if x is None:
            raise NoSolution("value does not lie in M", witness=v)
        return M.reduce(x)

    def kr(a, r):
        return R.mul(spec.to_r(a), r)

    f, g, h = {}, {}, {}
    for r, s, t in product(range(R.dim), repeat=3):
        v = add(C1.act_left(P[r], m[(s, t)]), neg(bil(m, R.mult[r][s], Rb[t])),
                bil(m, Rb[r], R.mult[s][t]), neg(C1.act_right(m[(r, s)], P[t])))
        x = back(v)
        if any(x):
            f[(r, s, t)] = x
    for a, b, r, s in product(range(K.dim), range(K.dim), range(R.dim), range(R.dim)):
        ab = phi(K.mult[a][b])
        v = add(C1.act_left(ab, m[(r, s)]),
                neg(bil(m, kr(Kb[a], Rb[r]), kr(Kb[b], Rb[s]))),
                neg(C1.act_left(p_of(kr(Kb[a], Rb[r])), n[(b, s)])),
                bil(n, K.mult[a][b], R.mult[r][s]),
                neg(C1.act_right(n[(a, r)], C0.mul(phi(Kb[b]), P[s]))))
        x = back(v)
        if any(x):
            g[(a, b, r, s)] = x
    for a, b, r in product(range(K.dim), range(K.dim), range(R.dim)):
        v = add(C1.act_left(phi(Kb[a]), n[(b, r)]), neg(bil(n, K.mult[a][b], Rb[r])),
                bil(n, Kb[a], kr(Kb[b], Rb[r])))
        x = back(v)
        if any(x):
            h[(a, b, r)] = x
    return Triple(f, g, h, m, n)


def triple_vector(B: Bicomplex, T: Triple):
    """Total-degree-3 vector: f in K^{03}, g in K^{12}, h in K^{21}."""
    comps = {
        (0, 3): {((), (r, s, t)): v for (r, s, t), v in T.f.items()},
        (1, 2): {(((a, b),), (r, s)): v for (a, b, r, s), v in T.g.items()},
        (2, 1): {(((a,), (b,)), (r,)): v for (a, b, r), v in T.h.items()},
    }
    return B.vector(3, comps)


def check_triple(B: Bicomplex, T: Triple) -> bool:
    """All four Z^3 relations, i.e. D(f, g, h) = 0 in total degree 4."""
    v = triple_vector(B, T)
    return not any(x % B.p for x in B.complex.d(3).apply(v))


def is_coboundary(B: Bicomplex, n, v) -> bool:
    grp = B.complex.group(n)
    return grp.is_coboundary(v)
