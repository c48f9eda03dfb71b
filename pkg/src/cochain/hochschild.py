"""Hochschild cochains of a StructureAlgebra with coefficients in a bimodule.

Cochains are functions on tuples of basis indices.  The coboundary is

    d(f)(r1..r_{n+1}) = r1 f(r2..r_{n+1})
                        + sum_{i=1..n} (-1)^i f(r1..r_i r_{i+1}..r_{n+1})
                        + (-1)^{n+1} f(r1..rn) r_{n+1}.

By default the complex is normalized (cochains vanish as soon as one
argument is the unit basis vector); this needs the unit to be a basis
vector and is checked against the full complex in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .algebra import Bimodule, StructureAlgebra, induced_bimodule, unit_first_bimodule
from .config import check, current_budget
from .errors import CoefficientsNotAlgebra
from .exactmod import (
    CochainComplexSpec,
    ElementaryDivisors,
    FPModule,
    SparseMatrix,
    integer_kernel,
    lattice_basis,
    nullspace_mod_p,
    rank_mod_p,
)


@dataclass
class Cochain:
    """An n-cochain: ``values[(i1..in)]`` is f(e_i1, .., e_in) in M."""

    R: StructureAlgebra
    M: Bimodule
    n: int
    values: dict = field(default_factory=dict)

    def __call__(self, *args):
        return self.values.get(tuple(args), (0,) * self.M.dim)

    def evaluate(self, elems):
        """f on arbitrary algebra elements (multilinear extension)."""
        out = [0] * self.M.dim
        for t, v in self.values.items():
            c = 1
            for pos, i in enumerate(t):
                c *= elems[pos][i]
                if not c:
                    break
            if c:
                for k, x in enumerate(v):
                    out[k] += c * x
        return self.M.reduce(out)

    def clean(self) -> "Cochain":
        vals = {}
        for t, v in self.values.items():
            v = self.M.reduce(v)
            if any(v):
                vals[t] = v
        return Cochain(self.R, self.M, self.n, vals)

    def __add__(self, other):
        vals = dict(self.values)
        for t, v in other.values.items():
            vals[t] = tuple(a + b for a, b in zip(vals.get(t, (0,) * self.M.dim), v))
        return Cochain(self.R, self.M, self.n, vals).clean()

    def __neg__(self):
        return Cochain(self.R, self.M, self.n, {t: tuple(-x for x in v) for t, v in self.values.items()}).clean()

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Cochain(self.R, self.M, self.n, {t: tuple(c * x for x in v) for t, v in self.values.items()}).clean()

    def is_zero(self) -> bool:
        return not self.clean().values

    def is_normalized(self) -> bool:
        u = self.R.unit_index()
        return all(u not in t for t, v in self.clean().values.items())

    @classmethod
    def from_function(cls, R, M, n, fn):
        vals = {t: tuple(fn(*t)) for t in product(range(R.dim), repeat=n)}
        return cls(R, M, n, vals).clean()


def _vadd(acc, v, c=1):
    for k, x in enumerate(v):
        acc[k] += c * x


def bar_coboundary(f: Cochain) -> Cochain:
    """The Hochschild coboundary evaluated directly from the formula."""
    R, M, n = f.R, f.M, f.n
    out = {}
    for t in product(range(R.dim), repeat=n + 1):
        acc = [0] * M.dim
        _vadd(acc, M.act_left(R.basis_vector(t[0]), f(*t[1:])))
        for i in range(1, n + 1):
            for k, c in R.sparse_product(t[i - 1], t[i]):
                _vadd(acc, f(*(t[: i - 1] + (k,) + t[i + 1:])), (-1) ** i * c)
        _vadd(acc, M.act_right(f(*t[:n]), R.basis_vector(t[n])), (-1) ** (n + 1))
        acc = M.reduce(acc)
        if any(acc):
            out[t] = acc
    return Cochain(R, M, n + 1, out)


def cup_product(f: Cochain, g: Cochain) -> Cochain:
    """``(f u g)(r1..r_{n+m}) = f(r1..rn) g(r_{n+1}..r_{n+m})`` for M = R."""
    R = f.R
    for h in (f, g):
        if h.M != R.regular_bimodule():
            raise CoefficientsNotAlgebra("cup product needs coefficients in the algebra itself")
    vals = {}
    for s, a in f.clean().values.items():
        for t, b in g.clean().values.items():
            v = R.mul(a, b)
            if any(v):
                vals[s + t] = v
    return Cochain(R, f.M, f.n + g.n, vals)


# ---------------------------------------------------------------------------
# the complex as matrices


def _hom_component(a: int, b: int):
    """(order, scale) of Hom(Z/a, Z/b) generated by 1 -> scale (0 = Z).

    Returns None when the component vanishes."""
    if b == 0:
        return (0, 1) if a == 0 else None
    g = gcd(a, b)
    if g == 1:
        return None
    return g, b // g


class HochschildComplex:
    """Matrices of the (normalized) Hochschild complex in degrees 0..n_max+1."""

    def __init__(self, R: StructureAlgebra, M: Bimodule, n_max: int, normalized: bool | None = None):
        if normalized is None:
            normalized = R.unit_index() is not None
        if normalized and R.unit_index() is None:
            raise ValueError("normalized cochains need the unit as a basis vector")
        self.R, self.M, self.n_max, self.normalized = R, M, n_max, normalized
        budget = current_budget()
        u = R.unit_index() if normalized else None
        letters = [i for i in range(R.dim) if i != u]
        self.tensors, self.index, self.gens, self.gen_index = {}, {}, {}, {}
        for n in range(n_max + 2):
            check(f"cochains of degree {n}", len(letters) ** n * M.dim, budget.columns)
            ts = list(product(letters, repeat=n))
            self.tensors[n] = ts
            self.index[n] = {t: i for i, t in enumerate(ts)}
            gens, gidx = [], {}
            for ti, t in enumerate(ts):
                a = 0
                for i in t:
                    a = gcd(a, R.orders[i])
                for j, b in enumerate(M.orders):
                    comp = _hom_component(a, b)
                    if comp is None:
                        continue
                    gidx[(ti, j)] = len(gens)
                    gens.append((ti, j, comp[0], comp[1]))
            self.gens[n], self.gen_index[n] = gens, gidx
        modules = {n: FPModule.diagonal(R.base, [g[2] for g in self.gens[n]]) for n in self.gens}
        maps = {n: self._matrix(n) for n in range(n_max + 1)}
        self.complex = CochainComplexSpec(R.base, modules, maps)

    def _matrix(self, n: int) -> SparseMatrix:
        R, M = self.R, self.M
        index = self.index[n]
        acc: dict = {}

        def add(ti, jr, src, jc, c):
            key = (ti, jr, src, jc)
            acc[key] = acc.get(key, 0) + c

        for ti, t in enumerate(self.tensors[n + 1]):
            src = index.get(t[1:])
            if src is not None:
                L = M.left[t[0]]
                for jr in range(M.dim):
                    for jc, x in enumerate(L[jr]):
                        if x:
                            add(ti, jr, src, jc, x)
            for i in range(1, n + 1):
                sign = -1 if i % 2 else 1
                for k, c in R.sparse_product(t[i - 1], t[i]):
                    src = index.get(t[: i - 1] + (k,) + t[i + 1:])
                    if src is None:
                        continue
                    for j in range(M.dim):
                        add(ti, j, src, j, sign * c)
            src = index.get(t[:n])
            if src is not None:
                Rm = M.right[t[n]]
                sign = -1 if (n + 1) % 2 else 1
                for jr in range(M.dim):
                    for jc, x in enumerate(Rm[jr]):
                        if x:
                            add(ti, jr, src, jc, sign * x)
        tg, sg = self.gen_index[n + 1], self.gen_index[n]
        tgt_gens, src_gens = self.gens[n + 1], self.gens[n]
        entries = {}
        for (ti, jr, src, jc), c in acc.items():
            col = sg.get((src, jc))
            row = tg.get((ti, jr))
            if col is None or row is None:
                continue
            _, _, g, s = tgt_gens[row]
            val = c * src_gens[col][3]
            b = M.orders[jr]
            if b:
                val %= b
                if val % s:
                    raise ArithmeticError("coboundary does not respect torsion")
                val = (val // s) % g
            if val:
                entries[(row, col)] = val
        return SparseMatrix(len(tgt_gens), len(src_gens), entries)

    # -- conversion ---------------------------------------------------------
    def to_vector(self, f: Cochain) -> list[int]:
        n = f.n
        v = [0] * len(self.gens[n])
        f = f.clean()
        if self.normalized and not f.is_normalized():
            raise ValueError("cochain is not normalized")
        for gi, (ti, j, g, s) in enumerate(self.gens[n]):
            x = f(*self.tensors[n][ti])[j]
            b = self.M.orders[j]
            if b:
                x %= b
                if x % s:
                    raise ValueError("cochain value violates torsion")
                x = (x // s) % g
            v[gi] = x
        return v

    def from_vector(self, n: int, v) -> Cochain:
        vals = {}
        for gi, (ti, j, g, s) in enumerate(self.gens[n]):
            if v[gi]:
                t = self.tensors[n][ti]
                cur = list(vals.get(t, (0,) * self.M.dim))
                cur[j] += v[gi] * s
                vals[t] = tuple(cur)
        return Cochain(self.R, self.M, n, vals).clean()

    def normalize_class(self, f: Cochain) -> Cochain:
        """A normalized cocycle cohomologous to the given cocycle.

        Degrees <= 2 are handled explicitly: f - d(h) with h(r) = f(1, r)
        (n = 2) or the unit value (n = 1 derivations already vanish on 1).
        """
        if f.is_normalized() or not self.normalized:
            return f
        u = self.R.unit_index()
        if f.n == 1:
            # a 1-cocycle satisfies f(1) = 0 automatically; non-cocycles are
            # projected by dropping unit arguments
            return Cochain(f.R, f.M, 1, {t: v for t, v in f.values.items() if u not in t}).clean()
        if f.n == 2:
            h = Cochain(f.R, f.M, 1, {(i,): f(u, i) for i in range(self.R.dim)}).clean()
            g = f - bar_coboundary(h)
            return g
        raise NotImplementedError("normalization implemented in degrees <= 2")


@dataclass
class CohomologyResult:
    """Per-degree groups plus the complex they were computed from."""

    groups: dict
    source: object = None
    representatives: dict = field(default_factory=dict)
    strategy: str = "hochschild"

    def dims(self) -> list[int]:
        return [self.groups[n].dimension for n in sorted(self.groups)]

    def divisors(self) -> list[tuple]:
        return [self.groups[n].divisors for n in sorted(self.groups)]

    def __getitem__(self, n: int) -> ElementaryDivisors:
        return self.groups[n]


def hochschild_cohomology(R: StructureAlgebra, M: Bimodule, n_max: int, representatives: bool = True,
                          normalized: bool | None = None) -> CohomologyResult:
    """H^n(R, M) for 0 <= n <= n_max."""
    HC = HochschildComplex(R, M, n_max, normalized)
    groups, reps = {}, {}
    for n in range(n_max + 1):
        grp = HC.complex.group(n)
        groups[n] = grp.divisors
        if representatives:
            reps[n] = [HC.from_vector(n, v) for v in grp.representatives]
    return CohomologyResult(groups, HC, reps)


# ---------------------------------------------------------------------------
# derivations


@dataclass
class DerivationReport:
    der_basis: list  # derivations as 1-cochains spanning Der(R, M)
    inner_basis: list  # ad_m for a spanning set of M
    der: ElementaryDivisors
    h0: ElementaryDivisors
    h1: ElementaryDivisors
    exact: bool


def _leibniz_system(R: StructureAlgebra, M: Bimodule):
    """Rows expressing D(e_i e_j) - e_i D(e_j) - D(e_i) e_j = 0.

    Unknowns are D(e_i)_k at position i * dim M + k."""
    d = M.dim
    rows = []
    for i in range(R.dim):
        for j in range(R.dim):
            block = [[0] * (R.dim * d) for _ in range(d)]
            for k, c in R.sparse_product(i, j):
                for r in range(d):
                    block[r][k * d + r] += c
            for r in range(d):
                for s in range(d):
                    block[r][j * d + s] -= M.left[i][r][s]
                    block[r][i * d + s] -= M.right[j][r][s]
            rows.extend(block)
    return rows


def derivations(R: StructureAlgebra, M: Bimodule) -> DerivationReport:
    """Der(R, M) by solving the Leibniz system, with inner derivations
    ``ad_m(r) = r m - m r`` and the check of 0 -> H0 -> M -> Der -> H1 -> 0."""
    d = M.dim
    HC = HochschildComplex(R, M, 1, normalized=False)
    p = M.carrier.uniform_prime()
    if p is not None and all(o == p for o in R.orders):
        nvar = R.dim * d
        rows = _leibniz_system(R, M)
        sol = nullspace_mod_p(SparseMatrix.from_dense(rows, nvar), p)
        der_vecs = [[v.get(i, 0) for i in range(nvar)] for v in sol]
        der_basis = [
            Cochain(R, M, 1, {(i,): tuple(v[i * d:(i + 1) * d]) for i in range(R.dim)}).clean()
            for v in der_vecs
        ]
    else:
        # torsion present: solve d^1 x = 0 in C^2 on generator coordinates
        C = HC.complex
        g1 = C.module(1).ngens
        rel2 = C.module(2).full_relations()
        block = [row + [c[i] for c in rel2] for i, row in enumerate(C.d(1).to_dense())]
        ker = integer_kernel(block, g1 + len(rel2)) if block else [
            [int(i == j) for i in range(g1)] for j in range(g1)]
        der_basis = [HC.from_vector(1, v) for v in lattice_basis([v[:g1] for v in ker], g1)]
    inner = []
    for k in range(d):
        m = tuple(int(t == k) for t in range(d))
        inner.append(
            Cochain(R, M, 1, {(i,): M.reduce(tuple(a - b for a, b in zip(
                M.act_left(R.basis_vector(i), m), M.act_right(m, R.basis_vector(i)))))
                for i in range(R.dim)}).clean()
        )
    h0 = HC.complex.group(0).divisors
    h1 = HC.complex.group(1).divisors
    # Der as a module: its lattice modulo the torsion of M
    der_mod = _span_module(R, M, [HC.to_vector(D) for D in der_basis], HC)
    inner_mod = _span_module(R, M, [HC.to_vector(D) for D in inner], HC)
    exact = _check_exact(M, h0, inner_mod, der_mod, h1)
    return DerivationReport(der_basis, inner, der_mod, h0, h1, exact)


def _span_module(R, M, vecs, HC) -> ElementaryDivisors:
    """Divisors of the submodule of C^1 spanned by vecs."""
    mod = HC.complex.module(1)
    p = mod.uniform_prime()
    if p is not None:
        r = rank_mod_p(SparseMatrix.from_columns(mod.ngens, vecs), p) if vecs else 0
        return ElementaryDivisors((p,) * r)
    from .exactmod import subquotient

    rels = mod.full_relations()
    gens = vecs + rels
    # span / (span cap relations): present span + rels modulo rels
    sq, _ = subquotient(R.base, gens, rels, mod.ngens)
    return sq.divisors()


def _check_exact(M, h0, inner, der, h1) -> bool:
    """Order bookkeeping for 0 -> H0 -> M -> Der -> H1 -> 0."""
    Mo = M.carrier.divisors().order
    if Mo == float("inf") or der.order == float("inf"):
        # free parts: compare ranks
        def rk(e):
            return sum(1 for x in e.divisors if x == 0)

        return rk(M.carrier.divisors()) - rk(h0) == rk(inner) and rk(der) - rk(inner) == rk(h1)
    return Mo == h0.order * inner.order and der.order == inner.order * h1.order


# ---------------------------------------------------------------------------
# dimension shifting


@dataclass
class ShiftReport:
    N: Bimodule
    rows: list  # (i, H^{i+1}(R,M), H^i(R,N), equal)

    @property
    def all_equal(self) -> bool:
        return all(r[3] for r in self.rows)


def dimension_shift(R: StructureAlgebra, M: Bimodule, n_max: int = 3) -> ShiftReport:
    """N = coker(mu: M -> Hom(R, M)) and the comparison
    H^{i+1}(R, M) vs H^i(R, N) for 0 < i < n_max."""
    if R.unit_index() is None:
        M = unit_first_bimodule(M)
        R = M.algebra
    ind = induced_bimodule(R, M)
    N = ind.cokernel
    HM = hochschild_cohomology(R, M, n_max, representatives=False)
    rows = []
    if N.dim == 0:
        for i in range(1, n_max):
            rows.append((i, HM[i + 1], ElementaryDivisors(()), HM[i + 1].is_zero))
        return ShiftReport(N, rows)
    HN = hochschild_cohomology(R, N, n_max - 1, representatives=False)
    for i in range(1, n_max):
        rows.append((i, HM[i + 1], HN[i], HM[i + 1] == HN[i]))
    return ShiftReport(N, rows)
