"""Non-negatively graded chain algebras with a finite basis in each degree.

Homogeneous elements are coordinate vectors in a fixed degree.  Products
and differentials follow the Leibniz rule d(xy) = d(x)y + (-1)^|x| x d(y).
Degrees above ``bound`` are treated as zero.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from math import comb, gcd
from pathlib import Path

from .algebra import Bimodule, StructureAlgebra, ground_algebra
from .config import check, current_budget
from .errors import (
    BaseMismatch, BudgetExceeded, InsufficientDegreeBound, LiftFailure, NotAcyclicFibration,
    NotAComplex, NotAssociative, NotQuasiFree, ParseError, StrategyUnavailable, UnknownKind,
)
from .exactmod import (
    BaseRing, CochainComplexSpec, FPModule, SparseMatrix, Z, _SNF, homology_at, module_kernel,
    solve_in,
)
from .hochschild import CohomologyResult


def _red(v, orders):
    return [(x % o) if o else x for x, o in zip(v, orders)]


class ChainAlgebra:
    """Chain algebra given by per-degree bases, product tables and differentials.

    ``mult`` maps ``(i, j)`` to a dict ``{(a, b): vector in degree i+j}``;
    missing entries are zero.  ``d[k]`` is the dense matrix of the
    differential ``A_k -> A_{k-1}`` (rows indexed by degree k-1).
    """

    def __init__(self, base: BaseRing, basis, mult, d, unit, orders=None, bound=None,
                 quasi_free=None, validate=True, check_assoc=True):
        self.base = base
        self.bound = len(basis) - 1 if bound is None else bound
        self.basis = [tuple(b) for b in basis] + [()] * (self.bound + 1 - len(basis))
        if orders is None:
            orders = [[base.modulus] * len(b) for b in self.basis]
        self.orders = [tuple(gcd(o, base.modulus) if base.modulus else o for o in os_)
                       for os_ in list(orders) + [()] * (self.bound + 1 - len(orders))]
        self._mult = {}
        for (i, j), table in mult.items():
            if i + j > self.bound:
                continue
            store = {}
            for ab, v in table.items():
                v = _red(v, self.orders[i + j])
                sp = tuple((k, c) for k, c in enumerate(v) if c)
                if sp:
                    store[ab] = sp
            self._mult[(i, j)] = store
        self.d = {}
        for k in range(1, self.bound + 1):
            m = d.get(k)
            if m is None:
                m = [[0] * self.dim(k) for _ in range(self.dim(k - 1))]
            self.d[k] = [_red_row(row, o) for row, o in zip(m, self.orders[k - 1])]
        self.unit = tuple(_red(unit, self.orders[0]))
        self.quasi_free = quasi_free
        if validate:
            self.validate(check_assoc)

    # -- basic data ---------------------------------------------------------
    def dim(self, k: int) -> int:
        return len(self.basis[k]) if 0 <= k <= self.bound else 0

    def dims(self) -> list[int]:
        return [self.dim(k) for k in range(self.bound + 1)]

    def module(self, k: int) -> FPModule:
        return FPModule.diagonal(self.base, self.orders[k] if 0 <= k <= self.bound else ())

    def reduce(self, k: int, v):
        return _red(v, self.orders[k]) if 0 <= k <= self.bound else []

    def basis_vector(self, k: int, i: int):
        return [int(t == i) for t in range(self.dim(k))]

    def is_free(self) -> bool:
        return all(o == self.base.modulus for os_ in self.orders for o in os_)

    def unit_index(self):
        for i in range(self.dim(0)):
            if list(self.unit) == self.basis_vector(0, i):
                return i
        return None

    def basis_product(self, i, a, j, b):
        """Sparse product of basis elements as a tuple of (index, coefficient)."""
        if i + j > self.bound:
            return ()
        return self._mult.get((i, j), {}).get((a, b), ())

    def mul(self, i, u, j, v):
        out = [0] * self.dim(i + j)
        if i + j > self.bound:
            return out
        table = self._mult.get((i, j), {})
        for a, x in enumerate(u):
            if x:
                for b, y in enumerate(v):
                    if y:
                        for k, c in table.get((a, b), ()):
                            out[k] += x * y * c
        return self.reduce(i + j, out)

    def boundary(self, k, v):
        if k <= 0:
            return []
        D = self.d[k]
        return self.reduce(k - 1, [sum(r[j] * v[j] for j in range(len(v))) for r in D])

    def degree0(self) -> StructureAlgebra:
        n = self.dim(0)
        mult = [[[0] * n for _ in range(n)] for _ in range(n)]
        for (a, b), sp in self._mult.get((0, 0), {}).items():
            for k, c in sp:
                mult[a][b][k] = c
        return StructureAlgebra(self.base, self.basis[0], mult, self.unit, self.orders[0])

    # -- homology -----------------------------------------------------------
    def as_complex(self) -> CochainComplexSpec:
        """The underlying chain complex, placed in cochain degree -k."""
        mods = {-k: self.module(k) for k in range(self.bound + 1)}
        maps = {-k: SparseMatrix.from_dense(self.d[k], self.dim(k)) if self.dim(k - 1)
                else SparseMatrix(0, self.dim(k)) for k in range(1, self.bound + 1)}
        return CochainComplexSpec(self.base, mods, maps)

    def homology(self, k: int):
        return homology_at(self.as_complex(), -k)

    # -- validation ---------------------------------------------------------
    def validate(self, check_assoc=True):
        self.degree0()
        for k in range(2, self.bound + 1):
            for j in range(self.dim(k)):
                v = self.boundary(k - 1, self.boundary(k, self.basis_vector(k, j)))
                if any(v):
                    raise NotAComplex(f"d d != 0 on basis element {self.basis[k][j]}", witness=(k, j))
        for k in range(self.bound + 1):
            for a in range(self.dim(k)):
                e = self.basis_vector(k, a)
                if self.mul(0, self.unit, k, e) != self.reduce(k, e) or self.mul(k, e, 0, self.unit) != self.reduce(k, e):
                    raise NotAssociative("unit does not act as identity", witness=(k, a))
        for i in range(self.bound + 1):
            for j in range(self.bound + 1 - i):
                for a in range(self.dim(i)):
                    x = self.basis_vector(i, a)
                    dx = self.boundary(i, x)
                    for b in range(self.dim(j)):
                        y = self.basis_vector(j, b)
                        lhs = self.boundary(i + j, self.mul(i, x, j, y))
                        s = -1 if i % 2 else 1
                        r1 = self.mul(i - 1, dx, j, y) if i else [0] * len(lhs)
                        r2 = self.mul(i, x, j - 1, self.boundary(j, y)) if j else [0] * len(lhs)
                        rhs = self.reduce(i + j - 1, [u + s * w for u, w in zip(r1, r2)]) if i + j else []
                        if lhs != rhs:
                            raise NotAComplex("Leibniz rule fails", witness=((i, a), (j, b)))
        if check_assoc:
            for i in range(self.bound + 1):
                for j in range(self.bound + 1 - i):
                    for k in range(self.bound + 1 - i - j):
                        for a, b, c in product(range(self.dim(i)), range(self.dim(j)), range(self.dim(k))):
                            x, y, z = self.basis_vector(i, a), self.basis_vector(j, b), self.basis_vector(k, c)
                            if self.mul(i + j, self.mul(i, x, j, y), k, z) != self.mul(i, x, j + k, self.mul(j, y, k, z)):
                                raise NotAssociative("product is not associative", witness=((i, a), (j, b), (k, c)))
        return self

    def __repr__(self):
        return f"ChainAlgebra({self.base}, dims={self.dims()})"


def _red_row(row, o):
    return [(x % o) if o else x for x in row]


def concentrated(R: StructureAlgebra, bound: int = 0) -> ChainAlgebra:
    """R viewed as a chain algebra concentrated in degree 0."""
    table = {(a, b): list(R.mult[a][b]) for a in range(R.dim) for b in range(R.dim)}
    return ChainAlgebra(R.base, [R.basis], {(0, 0): table}, {}, R.unit, [R.orders], bound=bound)


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMap:
    source: ChainAlgebra
    target: ChainAlgebra
    mats: dict  # degree -> dense matrix target.dim(k) x source.dim(k)

    def apply(self, k, v):
        M = self.mats.get(k)
        if M is None or not self.target.dim(k):
            return [0] * self.target.dim(k)
        return self.target.reduce(k, [sum(r[j] * v[j] for j in range(len(v))) for r in M])

    def validate(self):
        S, T = self.source, self.target
        top = min(S.bound, T.bound)
        if self.apply(0, list(S.unit)) != list(T.unit):
            raise NotAssociative("chain map is not unital")
        for k in range(top + 1):
            for a in range(S.dim(k)):
                e = S.basis_vector(k, a)
                if k and self.apply(k - 1, S.boundary(k, e)) != T.boundary(k, self.apply(k, e)):
                    raise NotAComplex("map does not commute with the differential", witness=(k, a))
                for j in range(top + 1 - k):
                    for b in range(S.dim(j)):
                        f = S.basis_vector(j, b)
                        lhs = self.apply(k + j, S.mul(k, e, j, f))
                        rhs = T.mul(k, self.apply(k, e), j, self.apply(j, f))
                        if lhs != rhs:
                            raise NotAssociative("map is not multiplicative", witness=((k, a), (j, b)))
        return self


# ---------------------------------------------------------------------------
# quasi-free algebras


class QuasiFree:
    """Free graded algebra over a commutative ground algebra K on generators
    with prescribed boundaries.

    Generators are ``(name, degree, boundary)`` where the boundary is a dict
    ``{word: K-vector}`` and words are tuples of generator indices.  Words
    longer than ``max_length`` are dropped (required when there are
    generators in degree 0).  ``augmentation`` optionally records
    ``(R, k_map, images)``: an algebra R, the matrix of K -> R and the images
    in R of the degree-0 generators.
    """

    def __init__(self, K: StructureAlgebra, gens=(), max_length=None, augmentation=None):
        self.K = K
        self.gens = []
        self.max_length = max_length
        self.augmentation = augmentation
        self._words = {}
        for g in gens:
            self.add_generator(*g)

    @property
    def base(self):
        return self.K.base

    def degree(self, i):
        return self.gens[i][1]

    def generators_in(self, n):
        return [i for i, g in enumerate(self.gens) if g[1] == n]

    def add_generator(self, name, degree, boundary):
        bd = {}
        for w, c in (boundary or {}).items():
            c = (c,) if isinstance(c, int) else tuple(c)
            c = self.K.reduce(c)
            if any(c):
                bd[tuple(w)] = c
        for w in bd:
            if sum(self.degree(i) for i in w) != degree - 1:
                raise NotAComplex(f"boundary of {name} has wrong degree", witness=w)
        self.gens.append((name, degree, bd))
        self._words = {}
        bb = self.boundary_element(bd)
        if bb:
            raise NotAComplex(f"d d != 0 on generator {name}", witness=name)
        return len(self.gens) - 1

    def _length_cap(self, k):
        if self.max_length is not None:
            return self.max_length
        if any(g[1] == 0 for g in self.gens):
            raise BudgetExceeded("degree-0 generators make the algebra infinite; set max_length")
        return k

    def words(self, k):
        if k not in self._words:
            cap = self._length_cap(k)
            out = []

            def rec(prefix, left):
                if left == 0:
                    out.append(prefix)
                if len(prefix) == cap:
                    return
                for i, g in enumerate(self.gens):
                    if g[1] <= left and (g[1] > 0 or len(prefix) < cap):
                        rec(prefix + (i,), left - g[1])

            rec((), k)
            self._words[k] = sorted(set(out), key=lambda w: (len(w), w))
        return self._words[k]

    # elements are dicts word -> K-vector
    def _add_into(self, acc, w, c, sign=1):
        if self.max_length is not None and len(w) > self.max_length:
            return
        cur = acc.get(w, (0,) * self.K.dim)
        new = self.K.reduce(tuple(a + sign * b for a, b in zip(cur, c)))
        if any(new):
            acc[w] = new
        else:
            acc.pop(w, None)

    def boundary_element(self, elem):
        out = {}
        for w, c in elem.items():
            pre = 0
            for pos, g in enumerate(w):
                sign = -1 if pre % 2 else 1
                for w2, c2 in self.gens[g][2].items():
                    self._add_into(out, w[:pos] + w2 + w[pos + 1:], self.K.mul(c, c2), sign)
                pre += self.gens[g][1]
        return out

    def to_chain_algebra(self, bound: int) -> ChainAlgebra:
        K = self.K
        kd = K.dim
        words = [self.words(k) for k in range(bound + 1)]
        total = sum(len(w) for w in words) * kd
        check("quasi-free basis", total, current_budget().columns)
        index = [{w: i for i, w in enumerate(ws)} for ws in words]
        basis = [[self.word_name(w) + ("" if kd == 1 else f"*{K.basis[b]}") for w in ws for b in range(kd)]
                 for ws in words]
        orders = [[K.orders[b] for _ in ws for b in range(kd)] for ws in words]
        mult = {}
        for i in range(bound + 1):
            for j in range(bound + 1 - i):
                table = {}
                for wa, ia in index[i].items():
                    for wb, ib in index[j].items():
                        w = wa + wb
                        if self.max_length is not None and len(w) > self.max_length:
                            continue
                        iw = index[i + j][w]
                        for a in range(kd):
                            for b in range(kd):
                                v = [0] * (len(words[i + j]) * kd)
                                for c, x in K.sparse_product(a, b):
                                    v[iw * kd + c] += x
                                table[(ia * kd + a, ib * kd + b)] = v
                mult[(i, j)] = table
        d = {}
        for k in range(1, bound + 1):
            rows, cols = len(words[k - 1]) * kd, len(words[k]) * kd
            D = [[0] * cols for _ in range(rows)]
            for w, iw in index[k].items():
                for a in range(kd):
                    img = self.boundary_element({w: K.basis_vector(a)})
                    for w2, c in img.items():
                        for t, x in enumerate(c):
                            D[index[k - 1][w2] * kd + t][iw * kd + a] += x
            d[k] = D
        unit = list(K.unit)
        return ChainAlgebra(self.base, basis, mult, d, unit, orders, bound, quasi_free=self, check_assoc=False)

    def word_name(self, w):
        return "*".join(self.gens[i][0] for i in w) or "1"

    def element_from_vector(self, A: ChainAlgebra, k, v):
        """Convert a coordinate vector of A (built by to_chain_algebra) to a dict."""
        kd = self.K.dim
        out = {}
        for iw, w in enumerate(self.words(k)):
            c = tuple(v[iw * kd + t] for t in range(kd))
            c = self.K.reduce(c)
            if any(c):
                out[w] = c
        return out

    # -- textual cache format -------------------------------------------------
    def dumps(self) -> str:
        lines = ["resolution v1", f"max_length {self.max_length if self.max_length is not None else '-'}"]
        for name, deg, bd in self.gens:
            terms = " ; ".join(f"[{','.join(map(str, c))}]@{'.'.join(map(str, w))}" for w, c in bd.items())
            lines.append(f"gen {name} {deg} : {terms}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, K: StructureAlgebra, augmentation=None) -> "QuasiFree":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0].strip() != "resolution v1":
            raise ParseError("expected header 'resolution v1'", line=1, column=1)
        ml = lines[1].split()
        if len(ml) != 2 or ml[0] != "max_length":
            raise ParseError("expected 'max_length'", line=2, column=1)
        Q = cls(K, max_length=None if ml[1] == "-" else int(ml[1]), augmentation=augmentation)
        for n, ln in enumerate(lines[2:], start=3):
            head, _, rest = ln.partition(":")
            parts = head.split()
            if len(parts) != 3 or parts[0] != "gen":
                raise ParseError("expected 'gen <name> <degree> :'", line=n, column=1)
            bd = {}
            for term in filter(None, (t.strip() for t in rest.split(";"))):
                try:
                    cpart, wpart = term.split("@")
                    c = tuple(int(x) for x in cpart.strip("[]").split(","))
                    w = tuple(int(x) for x in wpart.split(".")) if wpart else ()
                except ValueError:
                    raise ParseError(f"bad term {term!r}", line=n, column=ln.find(term) + 1) from None
                bd[w] = c
            Q.add_generator(parts[1], int(parts[2]), bd)
        return Q


def quasi_free(base: BaseRing, gens, max_length=None) -> QuasiFree:
    """Quasi-free algebra over a base ring; boundary coefficients are integers."""
    return QuasiFree(ground_algebra(base), gens, max_length)


# ---------------------------------------------------------------------------
# standard algebras


def exterior(n: int, base: BaseRing = Z) -> ChainAlgebra:
    """Lambda(x) with |x| = 1 and d(x) = n."""
    mult = {(0, 0): {(0, 0): [1]}, (0, 1): {(0, 0): [1]}, (1, 0): {(0, 0): [1]}}
    return ChainAlgebra(base, [["1"], ["x"]], mult, {1: [[n]]}, [1])


def exterior_divided_power(p: int, bound: int) -> ChainAlgebra:
    """Lambda(x) (x) Gamma(y) over Z/p^2 with d(x) = p, d(y) = p x.

    Basis in degree k: x^e y^[j] with e + 2j = k."""
    base = BaseRing("Zmod", p * p)
    basis, idx = [], {}
    for k in range(bound + 1):
        names = []
        for e in (0, 1):
            if (k - e) % 2 == 0 and k - e >= 0:
                j = (k - e) // 2
                idx[(e, j)] = (k, len(names))
                names.append(("x" if e else "") + (f"y[{j}]" if j else "") or "1")
        basis.append(names)
    mult = {}
    for (e1, j1), (k1, a) in idx.items():
        for (e2, j2), (k2, b) in idx.items():
            if k1 + k2 > bound or e1 + e2 > 1:
                continue
            k, c = idx[(e1 + e2, j1 + j2)]
            v = [0] * len(basis[k])
            v[c] = comb(j1 + j2, j1)
            mult.setdefault((k1, k2), {})[(a, b)] = v
    d = {}
    for k in range(1, bound + 1):
        D = [[0] * len(basis[k]) for _ in range(len(basis[k - 1]))]
        for (e, j), (kk, a) in idx.items():
            if kk != k:
                continue
            if e == 1:  # d(x y^[j]) = p y^[j]
                D[idx[(0, j)][1]][a] = p
            else:  # d(y^[j]) = p x y^[j-1]
                D[idx[(1, j - 1)][1]][a] = p
        d[k] = D
    return ChainAlgebra(base, basis, mult, d, [1], bound=bound)


def disc(n: int, base: BaseRing = Z, bound: int | None = None, max_length: int | None = None) -> ChainAlgebra:
    """D(n): free on x (degree n) and dx (degree n-1) with d(x) = dx."""
    if n < 1:
        raise UnknownKind("Disc needs n >= 1")
    if n == 1 and max_length is None:
        max_length = 3
    Q = quasi_free(base, [("dx", n - 1, {}), ("x", n, {(0,): 1})], max_length)
    return Q.to_chain_algebra(bound if bound is not None else 2 * n + 1)


def sphere(n: int, base: BaseRing = Z, bound: int | None = None) -> ChainAlgebra:
    """S(n): free on x in degree n with d(x) = 0."""
    if n < 1:
        raise UnknownKind("Sphere needs n >= 1")
    Q = quasi_free(base, [("x", n, {})])
    return Q.to_chain_algebra(bound if bound is not None else 2 * n + 1)


def lifted_algebra(A0: StructureAlgebra, B: ChainAlgebra, bound: int | None = None) -> ChainAlgebra:
    """A0 (x) B with A0 in degree 0 (A0 over the base of B)."""
    bound = B.bound if bound is None else bound
    return tensor_chain_algebras(concentrated(A0, bound), B, bound)


def standard_chain_algebra(kind: str, params, degree_bound: int, base: BaseRing | None = None) -> ChainAlgebra:
    kinds = {
        "Exterior": lambda: exterior(params, base or Z),
        "ExteriorTensorDividedPower": lambda: exterior_divided_power(params, degree_bound),
        "Disc": lambda: disc(params, base or Z, degree_bound),
        "Sphere": lambda: sphere(params, base or Z, degree_bound),
        "LiftedAlgebra": lambda: lifted_algebra(params[0], exterior(params[1], params[0].base), degree_bound),
    }
    if kind not in kinds:
        raise UnknownKind(f"unknown chain algebra kind {kind!r}", witness=sorted(kinds))
    A = kinds[kind]()
    if A.bound < degree_bound:
        A = extend_bound(A, degree_bound)
    return A


def extend_bound(A: ChainAlgebra, bound: int) -> ChainAlgebra:
    """Same algebra with zero components up to a larger bound."""
    mult = {(i, j): {ab: _sparse_to_vec(sp, A.dim(i + j)) for ab, sp in t.items()} for (i, j), t in A._mult.items()}
    return ChainAlgebra(A.base, A.basis, mult, A.d, A.unit, A.orders, bound, A.quasi_free, validate=False)


def _sparse_to_vec(sp, n):
    v = [0] * n
    for k, c in sp:
        v[k] = c
    return v


def tensor_chain_algebras(A: ChainAlgebra, B: ChainAlgebra, degree_bound: int | None = None) -> ChainAlgebra:
    """A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'."""
    if A.base != B.base:
        raise BaseMismatch("tensor factors have different base rings", witness=(str(A.base), str(B.base)))
    N = degree_bound if degree_bound is not None else A.bound + B.bound
    N = min(N, A.bound + B.bound) if degree_bound is None else N
    idx, basis, orders = [], [], []
    for k in range(N + 1):
        pos, names, ords = {}, [], []
        for i in range(k + 1):
            j = k - i
            for a in range(A.dim(i)):
                for b in range(B.dim(j)):
                    pos[(i, a, j, b)] = len(names)
                    names.append(f"{A.basis[i][a]}|{B.basis[j][b]}")
                    ords.append(gcd(A.orders[i][a], B.orders[j][b]))
        idx.append(pos)
        basis.append(names)
        orders.append(ords)
    mult = {}
    for k1 in range(N + 1):
        for k2 in range(N + 1 - k1):
            table = {}
            for (i, a, j, b), s in idx[k1].items():
                for (i2, a2, j2, b2), t in idx[k2].items():
                    sign = -1 if (j * i2) % 2 else 1
                    v = [0] * len(basis[k1 + k2])
                    for ka, ca in A.basis_product(i, a, i2, a2):
                        for kb, cb in B.basis_product(j, b, j2, b2):
                            v[idx[k1 + k2][(i + i2, ka, j + j2, kb)]] += sign * ca * cb
                    table[(s, t)] = v
            mult[(k1, k2)] = table
    d = {}
    for k in range(1, N + 1):
        D = [[0] * len(basis[k]) for _ in range(len(basis[k - 1]))]
        for (i, a, j, b), s in idx[k].items():
            if i:
                for r in range(A.dim(i - 1)):
                    c = A.d[i][r][a]
                    if c:
                        D[idx[k - 1][(i - 1, r, j, b)]][s] += c
            if j:
                sign = -1 if i % 2 else 1
                for r in range(B.dim(j - 1)):
                    c = B.d[j][r][b]
                    if c:
                        D[idx[k - 1][(i, a, j - 1, r)]][s] += sign * c
        d[k] = D
    unit = [0] * len(basis[0])
    for a, x in enumerate(A.unit):
        for b, y in enumerate(B.unit):
            if x and y:
                unit[idx[0][(0, a, 0, b)]] += x * y
    return ChainAlgebra(A.base, basis, mult, d, unit, orders, N)


# ---------------------------------------------------------------------------
# truncation


@dataclass
class Truncation:
    algebra: ChainAlgebra
    projection: dict  # degree -> dense matrix (identity below the top)


def truncate(X: ChainAlgebra, m: int) -> ChainAlgebra:
    """tau_{<=m} X: degree m replaced by X_m / d(X_{m+1}), zero above."""
    if X.quasi_free is not None and X.bound < m + 1:
        raise InsufficientDegreeBound(f"need the algebra through degree {m + 1}", witness=(X.bound, m))
    if X.bound <= m:
        return X
    if all(X.dim(k) == 0 for k in range(m + 1, X.bound + 1)):
        return _cut(X, m)
    n = X.dim(m)
    rels = [list(c) for c in zip(*X.d[m + 1])] if X.dim(m + 1) else []
    rels += [[o * int(i == j) for i in range(n)] for j, o in enumerate(X.orders[m]) if o]
    A = [[c[i] for c in rels] for i in range(n)] if rels else [[] for _ in range(n)]
    s = _SNF(A, n, len(rels)) if rels else None
    keep, ords = [], []
    for i in range(n):
        dv = (s.diag[i] if i < s.rank else 0) if s else 0
        if dv != 1:
            keep.append(i)
            ords.append(dv)
    U = s.U if s else [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = s.Uinv if s else U

    def proj(v):
        y = [sum(U[i][j] * v[j] for j in range(n)) for i in keep]
        return [(x % o) if o else x for x, o in zip(y, ords)]

    lift = [[Uinv[r][i] for r in range(n)] for i in keep]
    basis = [list(X.basis[k]) for k in range(m)] + [[f"[{i}]" for i in range(len(keep))]]
    orders = [list(X.orders[k]) for k in range(m)] + [ords]
    mult = {}
    for (i, j), t in X._mult.items():
        if i + j > m:
            continue
        table = {}
        if i + j < m:
            table = {ab: _sparse_to_vec(sp, X.dim(i + j)) for ab, sp in t.items()}
        else:
            # products landing in the top degree; top-degree factors go through lifts
            na = X.dim(i) if i < m else len(keep)
            nb = X.dim(j) if j < m else len(keep)
            for a in range(na):
                for b in range(nb):
                    x = X.basis_vector(i, a) if i < m else lift[a]
                    y = X.basis_vector(j, b) if j < m else lift[b]
                    table[(a, b)] = proj(X.mul(i, x, j, y))
        mult[(i, j)] = table
    d = {k: X.d[k] for k in range(1, m)}
    if m >= 1:
        d[m] = [[sum(X.d[m][r][t] * lift[c][t] for t in range(n)) for c in range(len(keep))]
                for r in range(X.dim(m - 1))]
    return ChainAlgebra(X.base, basis, mult, d, X.unit if m else proj(list(X.unit)), orders, m, check_assoc=False)


def _cut(X: ChainAlgebra, m: int) -> ChainAlgebra:
    mult = {(i, j): {ab: _sparse_to_vec(sp, X.dim(i + j)) for ab, sp in t.items()}
            for (i, j), t in X._mult.items() if i + j <= m}
    return ChainAlgebra(X.base, X.basis[: m + 1], mult, {k: X.d[k] for k in range(1, m + 1)}, X.unit,
                        X.orders[: m + 1], m, X.quasi_free, validate=False)


def truncation_to_crossed(X: ChainAlgebra):
    """The crossed bimodule X_1 -> X_0 of a chain algebra concentrated in degrees <= 1."""
    from .extensions import validate_crossed

    C0 = X.degree0()
    n1 = X.dim(1)
    left, right = [], []
    for r in range(C0.dim):
        e = X.basis_vector(0, r)
        left.append([list(c) for c in zip(*[X.mul(0, e, 1, X.basis_vector(1, i)) for i in range(n1)])] or [])
        right.append([list(c) for c in zip(*[X.mul(1, X.basis_vector(1, i), 0, e) for i in range(n1)])] or [])
    C1 = Bimodule(C0, FPModule.diagonal(X.base, X.orders[1]), left, right)
    return validate_crossed(C0, C1, X.d[1] if n1 else [[] for _ in range(C0.dim)])


# ---------------------------------------------------------------------------
# derivation complex


def _k_to_r(aug, c):
    R, kmap, _ = aug
    return R.reduce([sum(kmap[r][t] * c[t] for t in range(len(c))) for r in range(R.dim)])


def _eps_word(Q: QuasiFree, w, aug):
    R, _, images = aug
    out = R.unit
    for g in w:
        if Q.degree(g) != 0:
            return None
        out = R.mul(out, images[g])
    return out


def der_complex(A, M: Bimodule, n_max: int | None = None, augmented: bool = False) -> CochainComplexSpec:
    """Der(|A|, M) for a quasi-free A.

    Degree n is Hom_K(V_n, M) = M^{#generators of degree n}; the differential
    is f -> f o d with f extended as a derivation (vanishing on products of
    two positive-degree elements).  With ``augmented`` the complex is shifted
    up by one and M is placed in degree 0 with m -> (g -> g m - m g)."""
    Q = A.quasi_free if isinstance(A, ChainAlgebra) else A
    if not isinstance(Q, QuasiFree):
        raise NotQuasiFree("the derivation complex needs a quasi-free algebra")
    aug = Q.augmentation
    if aug is None:
        if Q.K.dim != 1:
            raise NotQuasiFree("no augmentation recorded for the ground algebra")
        R = M.algebra
        aug = (R, [[x] for x in R.unit], {})
    R = aug[0]
    if M.algebra != R:
        raise BaseMismatch("bimodule is not over the augmentation target")
    top = max((g[1] for g in Q.gens), default=0)
    top = top if n_max is None else min(top, n_max + 1)
    md = M.dim
    gens = {n: Q.generators_in(n) for n in range(top + 1)}
    shift = 1 if augmented else 0
    modules, maps = {}, {}
    for n in range(top + 1):
        modules[n + shift] = FPModule.diagonal(M.carrier.base, list(M.orders) * len(gens[n]))
    if augmented:
        modules[0] = M.carrier
        ad = {}
        for a, g in enumerate(gens[0]):
            img = aug[2][g]
            L = M._combo(M.left, img)
            Rm = M._combo(M.right, img)
            for j in range(md):
                for r in range(md):
                    v = L[r][j] - Rm[r][j]
                    if v:
                        ad[(a * md + r, j)] = v
        maps[0] = SparseMatrix(len(gens[0]) * md, md, ad)
    for n in range(top):
        src, tgt = gens[n], gens[n + 1]
        pos = {g: i for i, g in enumerate(src)}
        ent = {}
        for row_g, x in enumerate(tgt):
            for w, c in Q.gens[x][2].items():
                positive = [i for i, g in enumerate(w) if Q.degree(g) > 0]
                if len(positive) > 1:
                    continue
                places = positive if positive else range(len(w))
                for i in places:
                    pre = _eps_word(Q, w[:i], aug)
                    post = _eps_word(Q, w[i + 1:], aug)
                    if pre is None or post is None or w[i] not in pos:
                        continue
                    left = R.mul(_k_to_r(aug, c), pre)
                    L = M._combo(M.left, left)
                    Rm = M._combo(M.right, post)
                    col_g = pos[w[i]]
                    for j in range(md):
                        for r in range(md):
                            v = sum(L[r][t] * Rm[t][j] for t in range(md))
                            if v:
                                key = (row_g * md + r, col_g * md + j)
                                ent[key] = ent.get(key, 0) + v
        maps[n + shift] = SparseMatrix(len(tgt) * md, len(src) * md, ent)
    return CochainComplexSpec(M.carrier.base, modules, maps)


def der_cohomology(A, M: Bimodule, n_max: int) -> CohomologyResult:
    """Shukla-style groups H^n(M -> Der) for n <= n_max."""
    C = der_complex(A, M, n_max, augmented=True)
    return CohomologyResult({n: C.group(n).divisors for n in range(n_max + 1)}, C)


# ---------------------------------------------------------------------------
# naive Hochschild total complex


class ChainHochschildComplex:
    """Total complex of normalized cochains on a degreewise free chain algebra.

    C^{q,k} = Hom((Abar^{(x)q})_k, M) sits in total degree q + k with
    D = d + (-1)^q delta, d the Hochschild coboundary and delta f = f o d.
    M is a bimodule over ``S`` with ``eps: A_0 -> S`` (matrix) killing the
    image of the differential."""

    def __init__(self, A: ChainAlgebra, M: Bimodule, n_max: int, eps=None):
        if not A.is_free():
            raise StrategyUnavailable("the total complex needs a degreewise free chain algebra")
        u = A.unit_index()
        if u is None:
            raise StrategyUnavailable("the unit must be a basis vector")
        S = M.algebra
        if eps is None:
            eps = [[int(i == j) for j in range(A.dim(0))] for i in range(A.dim(0))]
        self.A, self.M, self.eps, self.u = A, M, eps, u
        if A.bound < n_max + 1:
            raise InsufficientDegreeBound("chain algebra must be known through degree n_max + 1",
                                          witness=(A.bound, n_max))
        self._L = [M._combo(M.left, self._eps(a)) for a in range(A.dim(0))]
        self._R = [M._combo(M.right, self._eps(a)) for a in range(A.dim(0))]
        for b in range(A.dim(1)):
            img = S.reduce([sum(eps[r][t] * A.d[1][t][b] for t in range(A.dim(0))) for r in range(S.dim)])
            if M._combo(M.left, img) != M._red([[0] * M.dim] * M.dim) or \
                    M._combo(M.right, img) != M._red([[0] * M.dim] * M.dim):
                raise BaseMismatch("image of the differential must act by zero", witness=b)
        self.bar = {k: [(k, i) for i in range(A.dim(k)) if not (k == 0 and i == u)] for k in range(A.bound + 1)}
        self.n_max = n_max
        budget = current_budget()
        self.tuples, self.index = {}, {}
        for n in range(n_max + 2):
            ts = []
            for q in range(n + 1):
                ts.extend(self._tuples(q, n - q))
            check(f"total complex degree {n}", len(ts) * M.dim, budget.columns)
            self.tuples[n] = ts
            self.index[n] = {t: i for i, t in enumerate(ts)}
        modules = {n: FPModule.diagonal(A.base, list(M.orders) * len(self.tuples[n])) for n in range(n_max + 2)}
        maps = {n: self._matrix(n) for n in range(n_max + 1)}
        self.complex = CochainComplexSpec(A.base, modules, maps)

    def _eps(self, a):
        S = self.M.algebra
        return S.reduce([self.eps[r][a] for r in range(S.dim)])

    def _tuples(self, q, k):
        if q == 0:
            return [()] if k == 0 else []
        out = []
        for d0 in range(k + 1):
            for e in self.bar.get(d0, []):
                for rest in self._tuples(q - 1, k - d0):
                    out.append((e,) + rest)
        return out

    def _drop_unit(self, k, sp):
        return [(i, c) for i, c in sp if not (k == 0 and i == self.u)]

    def _row_terms(self, s):
        """Linear expression of (Df)(s) as a list of (source tuple, scalar or (L, R) matrix)."""
        A = self.A
        Q = len(s)
        terms = []
        # Hochschild part from q = Q - 1
        q = Q - 1
        if q >= 0:
            if s[0][0] == 0:
                terms.append((s[1:], ("L", s[0][1])))
            for i in range(q):
                (k1, a), (k2, b) = s[i], s[i + 1]
                sign = -1 if (i + 1) % 2 else 1
                for c, x in self._drop_unit(k1 + k2, A.basis_product(k1, a, k2, b)):
                    terms.append((s[:i] + ((k1 + k2, c),) + s[i + 2:], sign * x))
            if s[-1][0] == 0:
                terms.append((s[:-1], ("R", s[-1][1], -1 if (q + 1) % 2 else 1)))
        # vertical part (-1)^Q f o d
        pre = 0
        outer = -1 if Q % 2 else 1
        for i, (k, a) in enumerate(s):
            if k > 0:
                sign = outer * (-1 if pre % 2 else 1)
                col = [A.d[k][r][a] for r in range(A.dim(k - 1))]
                for r, x in self._drop_unit(k - 1, [(r, x) for r, x in enumerate(col) if x]):
                    terms.append((s[:i] + ((k - 1, r),) + s[i + 1:], sign * x))
            pre += k
        return terms

    def _matrix(self, n) -> SparseMatrix:
        md = self.M.dim
        ent = {}
        src = self.index[n]
        for row, s in enumerate(self.tuples[n + 1]):
            for t, coef in self._row_terms(s):
                col = src.get(t)
                if col is None:
                    continue
                if isinstance(coef, tuple):
                    if coef[0] == "L":
                        mat, sg = self._L[coef[1]], 1
                    else:
                        mat, sg = self._R[coef[1]], coef[2]
                    for r in range(md):
                        for j in range(md):
                            if mat[r][j]:
                                key = (row * md + r, col * md + j)
                                ent[key] = ent.get(key, 0) + sg * mat[r][j]
                else:
                    for r in range(md):
                        key = (row * md + r, col * md + r)
                        ent[key] = ent.get(key, 0) + coef
        return SparseMatrix(len(self.tuples[n + 1]) * md, len(self.tuples[n]) * md,
                            {k: v for k, v in ent.items() if v})


def chain_hochschild_total(A: ChainAlgebra, M: Bimodule, n_max: int, eps=None) -> CohomologyResult:
    T = ChainHochschildComplex(A, M, n_max, eps)
    return CohomologyResult({n: T.complex.group(n).divisors for n in range(n_max + 1)}, T)


# ---------------------------------------------------------------------------
# lifting along acyclic fibrations


def _stack(*mats):
    out = []
    for m in mats:
        out.extend(list(r) for r in m)
    return out


def _matrix_of(F: ChainMap, k):
    S, T = F.source, F.target
    return [list(r) for r in zip(*[F.apply(k, S.basis_vector(k, a)) for a in range(S.dim(k))])] \
        if S.dim(k) else [[] for _ in range(T.dim(k))]


def check_acyclic_fibration(p: ChainMap, bound: int):
    X, Y = p.source, p.target
    for k in range(1, bound + 1):
        P = _matrix_of(p, k)
        for b in range(Y.dim(k)):
            if solve_in(P, Y.basis_vector(k, b), Y.module(k)) is None:
                raise NotAcyclicFibration("map is not surjective in positive degrees", witness=(k, b))
    for k in range(bound):
        P = _matrix_of(p, k)
        if k:
            A = _stack(X.d[k], P)
            tgt = FPModule.diagonal(X.base, list(X.orders[k - 1]) + list(Y.orders[k]))
        else:
            A, tgt = P, Y.module(0)
        cycles = module_kernel(A, X.module(k), tgt)
        P1 = _matrix_of(p, k + 1)
        ker1 = module_kernel(P1, X.module(k + 1), Y.module(k + 1))
        bds = [X.boundary(k + 1, v) for v in ker1]
        Bm = [[b[i] for b in bds] for i in range(X.dim(k))] if bds else [[] for _ in range(X.dim(k))]
        for z in cycles:
            if solve_in(Bm, z, X.module(k)) is None:
                raise NotAcyclicFibration("kernel is not acyclic", witness=(k, tuple(z)))


def lift_quasi_free(A: ChainAlgebra, p: ChainMap, g: ChainMap, check_fibration: bool = True) -> ChainMap:
    """f: A -> X with p o f = g, built generator by generator."""
    Q = A.quasi_free
    if not isinstance(Q, QuasiFree):
        raise NotQuasiFree("source of the lift must be quasi-free")
    if Q.K.dim != 1:
        raise StrategyUnavailable("lifting is implemented over base rings")
    X, Y = p.source, p.target
    bound = A.bound
    if X.bound < bound or Y.bound < bound:
        X = extend_bound(X, max(bound, X.bound))
        Y = extend_bound(Y, max(bound, Y.bound))
        p = ChainMap(X, Y, p.mats)
    if check_fibration:
        check_acyclic_fibration(p, min(bound, max(X.bound, Y.bound)))
    images = {}

    def f_word(w):
        deg = 0
        out = list(X.unit)
        for gi in w:
            dg = Q.degree(gi)
            out = X.mul(deg, out, dg, images[gi])
            deg += dg
        return deg, out

    def f_elem(elem, k):
        out = [0] * X.dim(k)
        for w, c in elem.items():
            _, v = f_word(w)
            out = [a + c[0] * b for a, b in zip(out, v)]
        return X.reduce(k, out)

    for gi in sorted(range(len(Q.gens)), key=Q.degree):
        name, n, bd = Q.gens[gi]
        iw = Q.words(n).index((gi,))
        target = g.apply(n, A.basis_vector(n, iw))
        P = _matrix_of(p, n)
        y = solve_in(P, target, Y.module(n))
        if y is None:
            raise LiftFailure("no preimage under p", witness=name)
        if len(y) < X.dim(n):
            y = [0] * X.dim(n)  # empty P: solve_in knows no column count
        y = X.reduce(n, y)
        if n == 0:
            images[gi] = y
            continue
        c = [a - b for a, b in zip(f_elem(bd, n - 1), X.boundary(n, y))]
        A_ = _stack(X.d[n], P)
        tgt = FPModule.diagonal(X.base, list(X.orders[n - 1]) + list(Y.orders[n]))
        z = solve_in(A_, c + [0] * Y.dim(n), tgt)
        if z is None:
            raise LiftFailure("correction term is not a boundary in the kernel", witness=name)
        images[gi] = X.reduce(n, [a + b for a, b in zip(y, z)])
    mats = {}
    for k in range(bound + 1):
        cols = []
        for w in Q.words(k):
            cols.append(f_word(w)[1] if X.dim(k) else [])
        mats[k] = [list(r) for r in zip(*cols)] if cols and X.dim(k) else [[0] * len(cols) for _ in range(X.dim(k))]
    F = ChainMap(A, X, mats).validate()
    F.generator_images = images
    return F


# ---------------------------------------------------------------------------
# killing cycles


def _closure(K: StructureAlgebra, X: ChainAlgebra, k, z):
    return [X.mul(0, K.basis_vector(b) if X.dim(0) == K.dim else X.basis_vector(0, b), k, z) for b in range(K.dim)]


def killing_cycles_resolution(R: StructureAlgebra, degree_bound: int, ground=None):
    """Quasi-free resolution of R over its base ring (or over ``ground``,
    a pair (K, k_map) with k_map the matrix of K -> R).

    Only the case where K -> R is onto is supported: all generators sit in
    positive degrees.  Returns (QuasiFree, ChainMap to R) with generators
    through ``degree_bound``."""
    if ground is None:
        K = ground_algebra(R.base)
        kmap = [[x] for x in R.unit]
    else:
        K, kmap = ground
    for r in range(R.dim):
        if solve_in(kmap, R.basis_vector(r), R.module) is None:
            raise StrategyUnavailable("killing cycles needs R to be a quotient of the ground ring",
                                      witness=R.basis[r])
    Q = QuasiFree(K, augmentation=(R, kmap, {}))
    counter = [0]

    def add(deg, vec, X):
        elem = Q.element_from_vector(X, deg - 1, vec) if X is not None else _k_elem(vec)
        Q.add_generator(f"g{deg}_{counter[0]}", deg, elem)
        counter[0] += 1

    def _k_elem(vec):
        c = K.reduce(vec)
        return {(): c} if any(c) else {}

    # degree 1: kill the kernel of K -> R
    span = []
    for z in module_kernel(kmap, K.module, R.module):
        if _in_span(span, z, K.module):
            continue
        add(1, z, None)
        span.extend(K.mul(K.basis_vector(b), z) for b in range(K.dim))
    for n in range(1, degree_bound):
        X = Q.to_chain_algebra(n + 1)
        cycles = module_kernel(X.d[n], X.module(n), X.module(n - 1))
        span = [list(c) for c in zip(*X.d[n + 1])] if X.dim(n + 1) else []
        for z in cycles:
            if _in_span(span, z, X.module(n)):
                continue
            add(n + 1, z, X)
            span.extend(_closure(K, X, n, z))
    X = Q.to_chain_algebra(degree_bound)
    target = concentrated(R, degree_bound)
    aug = ChainMap(X, target, {0: [list(r) for r in kmap]})
    return Q, aug.validate()


def _in_span(vecs, z, module):
    if not vecs:
        return module.contains(z)
    A = [[v[i] for v in vecs] for i in range(module.ngens)]
    return solve_in(A, z, module) is not None


def cache_dir():
    d = os.environ.get("COCHAIN_CACHE")
    return Path(d) if d else None


def cached_resolution(R: StructureAlgebra, degree_bound: int, directory=None):
    """killing_cycles_resolution with an on-disk textual cache keyed by
    (algebra fingerprint, bound).  Only used for base-ring grounds."""
    directory = Path(directory) if directory else cache_dir()
    if directory is None:
        return killing_cycles_resolution(R, degree_bound)
    path = directory / f"{R.fingerprint()}-{degree_bound}.res"
    K = ground_algebra(R.base)
    kmap = [[x] for x in R.unit]
    if path.exists():
        Q = QuasiFree.loads(path.read_text(), K, augmentation=(R, kmap, {}))
        X = Q.to_chain_algebra(degree_bound)
        return Q, ChainMap(X, concentrated(R, degree_bound), {0: [list(r) for r in kmap]}).validate()
    Q, aug = killing_cycles_resolution(R, degree_bound)
    directory.mkdir(parents=True, exist_ok=True)
    path.write_text(Q.dumps())
    return Q, aug


# ---------------------------------------------------------------------------
# extensions viewed as chain algebras


def extension_chain_algebra(X, bound: int = 1) -> ChainAlgebra:
    """E_*: E in degree 0, M in degree 1, d the inclusion, M M = 0."""
    E, M, R = X.E, X.M, X.R
    n0, n1 = E.dim, M.dim
    mult = {(0, 0): {(a, b): list(E.mult[a][b]) for a in range(n0) for b in range(n0)}}
    t01, t10 = {}, {}
    for a in range(n0):
        r = R.reduce([sum(X.proj[i][t] * int(t == a) for t in range(n0)) for i in range(R.dim)])
        for b in range(n1):
            m = [int(k == b) for k in range(n1)]
            t01[(a, b)] = list(M.act_left(r, m))
            t10[(b, a)] = list(M.act_right(m, r))
    mult[(0, 1)], mult[(1, 0)] = t01, t10
    d = {1: [list(r) for r in X.incl]}
    return ChainAlgebra(E.base, [E.basis, [f"m{i}" for i in range(n1)]], mult, d, E.unit,
                        [E.orders, M.orders], bound)


def crossed_chain_algebra(Y, bound: int = 2) -> ChainAlgebra:
    """C_*: C0, C1, C2 = M with d2 the inclusion; C1 C1 -> C2 is zero."""
    C0, C1, M, R = Y.C0, Y.C1, Y.M, Y.R
    n0, n1, n2 = C0.dim, C1.dim, M.dim
    mult = {(0, 0): {(a, b): list(C0.mult[a][b]) for a in range(n0) for b in range(n0)}}
    t01, t10, t02, t20 = {}, {}, {}, {}
    for a in range(n0):
        e = C0.basis_vector(a)
        r = R.reduce([Y.pi[i][a] for i in range(R.dim)])
        for b in range(n1):
            c = [int(k == b) for k in range(n1)]
            t01[(a, b)] = list(C1.act_left(e, c))
            t10[(b, a)] = list(C1.act_right(c, e))
        for b in range(n2):
            m = [int(k == b) for k in range(n2)]
            t02[(a, b)] = list(M.act_left(r, m))
            t20[(b, a)] = list(M.act_right(m, r))
    mult.update({(0, 1): t01, (1, 0): t10, (0, 2): t02, (2, 0): t20})
    d = {1: [list(r) for r in Y.X.boundary], 2: [list(r) for r in Y.incl]}
    return ChainAlgebra(C0.base, [C0.basis, [f"c{i}" for i in range(n1)], [f"m{i}" for i in range(n2)]],
                        mult, d, C0.unit, [C0.orders, C1.orders, M.orders], bound)
