"""Exact linear algebra over Z, Z/m and F_p.

Integer matrices are handled with Python integers (arbitrary precision).
Finitely presented modules are quotients ``Z^g / im(R)``; a module over
``Z/m`` carries the extra relations ``m * e_i`` implicitly.

Two engines compute homology:

* a field engine (bitset rows for p = 2, dense numpy for odd p) used when
  every module involved is a vector space over the same F_p;
* an integer engine built on Smith normal form with transforms, used
  otherwise.

>>> smith_normal_form([[2, 4], [6, 8]])[1]
[[2, 0], [0, 4]]
>>> tensor_modules(FPModule.cyclic(Z, 2), FPModule.cyclic(Z, 3)).divisors()
ElementaryDivisors(divisors=())
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import BaseMismatch, NotAComplex, NotSurjective

# ---------------------------------------------------------------------------
# base rings


@dataclass(frozen=True)
class BaseRing:
    """``Integers``, ``IntegersMod(m)`` or ``PrimeField(p)``."""

    kind: str
    m: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Zmod", "Fp"):
            raise ValueError(f"unknown base ring kind {self.kind!r}")
        if self.kind == "Zmod" and self.m < 2:
            raise ValueError("IntegersMod needs m >= 2")
        if self.kind == "Fp" and not _is_prime(self.m):
            raise ValueError(f"{self.m} is not prime")

    @property
    def modulus(self) -> int:
        """Characteristic: 0 for Z, otherwise m."""
        return self.m

    @property
    def is_field(self) -> bool:
        return self.kind == "Fp" or (self.kind == "Zmod" and _is_prime(self.m))

    def reduce(self, x: int) -> int:
        return x % self.m if self.m else x

    def __str__(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Fp":
            return f"F{self.m}"
        return f"Z/{self.m}"

    @staticmethod
    def parse(text: str) -> "BaseRing":
        t = text.strip().replace(" ", "")
        if t in ("Z", "ZZ", "Integers"):
            return Z
        for prefix in ("GF(", "F(", "Fp("):
            if t.startswith(prefix) and t.endswith(")"):
                return PrimeField(int(t[len(prefix):-1]))
        if t.startswith("F") and t[1:].isdigit():
            return PrimeField(int(t[1:]))
        if t.startswith("Z/") and t[2:].isdigit():
            return IntegersMod(int(t[2:]))
        raise ValueError(f"cannot parse base ring {text!r}")


def IntegersMod(m: int) -> BaseRing:
    return BaseRing("Zmod", m)


def PrimeField(p: int) -> BaseRing:
    return BaseRing("Fp", p)


Z = BaseRing("Z", 0)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def xgcd(a: int, b: int):
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Coordinate-list integer matrix ``{(row, col): value}``."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        e = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    e[(i, j)] = int(v)
        return cls(nrows, ncols, e)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[Sequence[int]]):
        e = {}
        for j, c in enumerate(cols):
            for i, v in enumerate(c):
                if v:
                    e[(i, j)] = int(v)
        return cls(nrows, len(cols), e)

    @classmethod
    def identity(cls, n: int, scale: int = 1):
        return cls(n, n, {(i, i): scale for i in range(n)})

    @classmethod
    def zero(cls, nrows: int, ncols: int):
        return cls(nrows, ncols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def rows(self) -> list[dict]:
        out = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def columns(self) -> list[dict]:
        out = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def column(self, j: int) -> list[int]:
        c = [0] * self.nrows
        for (i, jj), v in self.entries.items():
            if jj == j:
                c[i] = v
        return c

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ocols = {}
        for (i, j), v in other.entries.items():
            ocols.setdefault(i, []).append((j, v))
        e: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in ocols.get(k, ()):
                e[(i, j)] = e.get((i, j), 0) + a * b
        return SparseMatrix(self.nrows, other.ncols, e)

    def apply(self, vec: Sequence[int]) -> list[int]:
        out = [0] * self.nrows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def reduced(self, m: int) -> "SparseMatrix":
        if not m:
            return self
        return SparseMatrix(self.nrows, self.ncols, {k: v % m for k, v in self.entries.items()})

    def is_zero(self, m: int = 0) -> bool:
        if m:
            return all(v % m == 0 for v in self.entries.values())
        return not self.entries

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row mismatch")
        e = dict(self.entries)
        for (i, j), v in other.entries.items():
            e[(i, j + self.ncols)] = v
        return SparseMatrix(self.nrows, self.ncols + other.ncols, e)

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"


def as_dense(A) -> list[list[int]]:
    if isinstance(A, SparseMatrix):
        return A.to_dense()
    if isinstance(A, np.ndarray):
        return [[int(x) for x in row] for row in A]
    return [list(map(int, row)) for row in A]


# ---------------------------------------------------------------------------
# Smith normal form over Z


class _SNF:
    """Smith normal form with optional transforms: ``U A V = D``.

    Uinv and Vinv are maintained alongside so that images and solutions can
    be read off without inverting anything afterwards.
    """

    def __init__(self, A: list[list[int]], nrows: int, ncols: int, transforms: bool = True):
        self.nrows, self.ncols = nrows, ncols
        M = [list(r) for r in A]
        self.T = transforms
        if transforms:
            self.U = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
            self.Uinv = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
            self.V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
            self.Vinv = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        self.M = M
        self._run()

    # 2x2 unimodular operations ---------------------------------------------
    def _rows(self, i, k, a, b, c, d):
        """rows (i, k) <- [[a, b], [c, d]] (rows i, k)."""
        M = self.M
        ri, rk = M[i], M[k]
        M[i] = [a * x + b * y for x, y in zip(ri, rk)]
        M[k] = [c * x + d * y for x, y in zip(ri, rk)]
        if self.T:
            ui, uk = self.U[i], self.U[k]
            self.U[i] = [a * x + b * y for x, y in zip(ui, uk)]
            self.U[k] = [c * x + d * y for x, y in zip(ui, uk)]
            det = a * d - b * c
            ia, ib, ic, id_ = d * det, -b * det, -c * det, a * det
            for row in self.Uinv:
                x, y = row[i], row[k]
                row[i] = x * ia + y * ic
                row[k] = x * ib + y * id_

    def _cols(self, j, k, a, b, c, d):
        """cols (j, k) <- (cols j, k) [[a, b], [c, d]]."""
        for row in self.M:
            x, y = row[j], row[k]
            row[j] = a * x + c * y
            row[k] = b * x + d * y
        if self.T:
            for row in self.V:
                x, y = row[j], row[k]
                row[j] = a * x + c * y
                row[k] = b * x + d * y
            det = a * d - b * c
            ia, ib, ic, id_ = d * det, -b * det, -c * det, a * det
            vj, vk = self.Vinv[j], self.Vinv[k]
            self.Vinv[j] = [ia * x + ib * y for x, y in zip(vj, vk)]
            self.Vinv[k] = [ic * x + id_ * y for x, y in zip(vj, vk)]

    def _run(self):
        M = self.M
        nr, nc = self.nrows, self.ncols
        t = 0
        self.diag = []
        while t < min(nr, nc):
            best = None
            for i in range(t, nr):
                row = M[i]
                for j in range(t, nc):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                self._rows(t, i, 0, 1, 1, 0)
            if j != t:
                self._cols(t, j, 0, 1, 1, 0)
            while True:
                for i in range(t + 1, nr):
                    b = M[i][t]
                    if not b:
                        continue
                    a = M[t][t]
                    if b % a == 0:
                        self._rows(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, s, u = xgcd(a, b)
                        self._rows(t, i, s, u, -(b // g), a // g)
                for j in range(t + 1, nc):
                    b = M[t][j]
                    if not b:
                        continue
                    a = M[t][t]
                    if b % a == 0:
                        self._cols(t, j, 1, -(b // a), 0, 1)
                    else:
                        g, s, u = xgcd(a, b)
                        self._cols(t, j, s, -(b // g), u, a // g)
                if all(not M[i][t] for i in range(t + 1, nr)):
                    a = M[t][t]
                    bad = None
                    for i in range(t + 1, nr):
                        row = M[i]
                        for j in range(t + 1, nc):
                            if row[j] % a:
                                bad = i
                                break
                        if bad is not None:
                            break
                    if bad is None:
                        break
                    self._rows(t, bad, 1, 1, 0, 1)
            if M[t][t] < 0:
                self._negate_row(t)
            self.diag.append(M[t][t])
            t += 1
        self.rank = t

    def _negate_row(self, i):
        self.M[i] = [-x for x in self.M[i]]
        if self.T:
            self.U[i] = [-x for x in self.U[i]]
            for row in self.Uinv:
                row[i] = -row[i]


def smith_normal_form(A, base: BaseRing | None = None):
    """Return ``(U, D, V)`` with ``D = U A V`` diagonal, d1 | d2 | ...

    Over ``Z/m`` the matrix is lifted to Z, the normal form computed there
    and all three matrices reduced mod m; U and V stay invertible mod m.
    """
    rows = as_dense(A)
    nr = len(rows)
    nc = len(rows[0]) if nr else (A.ncols if isinstance(A, SparseMatrix) else 0)
    s = _SNF(rows, nr, nc)
    U, D, V = s.U, s.M, s.V
    if base is not None and base.modulus:
        m = base.modulus
        U = [[x % m for x in r] for r in U]
        D = [[x % m for x in r] for r in D]
        V = [[x % m for x in r] for r in V]
    return U, D, V


def _matmul(A, B):
    if not A:
        return []
    n = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else []
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] if Bt else [0] * n for row in A]


def integer_kernel(A: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis (list of vectors) of the integer kernel of A."""
    nr = len(A)
    if nr == 0:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    s = _SNF(A, nr, ncols)
    return [[s.V[i][j] for i in range(ncols)] for j in range(s.rank, ncols)]


def lattice_basis(cols: list[list[int]], dim: int) -> list[list[int]]:
    """Basis of the lattice spanned by the given vectors in Z^dim."""
    if not cols:
        return []
    A = [[c[i] for c in cols] for i in range(dim)]
    s = _SNF(A, dim, len(cols))
    return [[s.Uinv[i][j] * s.diag[j] for i in range(dim)] for j in range(s.rank)]


def solve_integer(A: list[list[int]], ncols: int, b: list[int]):
    """Integer x with A x = b, or None."""
    nr = len(A)
    if nr == 0:
        return [0] * ncols
    s = _SNF(A, nr, ncols)
    return _solve_with(s, b)


def _solve_with(s: _SNF, b: list[int]):
    c = [sum(u * x for u, x in zip(row, b)) for row in s.U]
    y = [0] * s.ncols
    for i in range(s.nrows):
        if i < s.rank:
            q, r = divmod(c[i], s.diag[i])
            if r:
                return None
            y[i] = q
        elif c[i]:
            return None
    return [sum(s.V[i][j] * y[j] for j in range(s.ncols)) for i in range(s.ncols)]


def _invariant_factors(values: Iterable[int]) -> tuple[int, ...]:
    """Normalise a list of cyclic orders (0 = Z) into a divisibility chain."""
    vals = [abs(v) for v in values if abs(v) != 1]
    finite = [v for v in vals if v]
    nfree = len(vals) - len(finite)
    # prime-power decomposition, then recombine
    pp: dict[int, list[int]] = {}
    for v in finite:
        n, d = v, 2
        while d * d <= n:
            if n % d == 0:
                e = 1
                while n % d == 0:
                    n //= d
                    e *= d
                pp.setdefault(d, []).append(e)
            d += 1
        if n > 1:
            pp.setdefault(n, []).append(n)
    k = max((len(l) for l in pp.values()), default=0)
    chain = [1] * k
    for p, l in pp.items():
        l.sort()
        for i, e in enumerate(l):
            chain[k - len(l) + i] *= e
    return tuple(chain) + (0,) * nfree


# ---------------------------------------------------------------------------
# field engine


def _bit_rows(A: SparseMatrix) -> list[int]:
    rows = [0] * A.nrows
    for (i, j), v in A.entries.items():
        if v & 1:
            rows[i] ^= 1 << j
    return rows


def rank_mod_p(A: SparseMatrix, p: int) -> int:
    if not A.entries:
        return 0
    if p == 2:
        basis: dict[int, int] = {}
        for r in _bit_rows(A):
            while r:
                h = r.bit_length() - 1
                b = basis.get(h)
                if b is None:
                    basis[h] = r
                    break
                r ^= b
        return len(basis)
    return len(_rref_numpy(_dense_mod(A, p), p)[1])


def _dense_mod(A: SparseMatrix, p: int) -> np.ndarray:
    D = np.zeros((A.nrows, A.ncols), dtype=np.int64)
    for (i, j), v in A.entries.items():
        D[i, j] = v % p
    return D


def _rref_numpy(D: np.ndarray, p: int):
    D = D % p
    nr, nc = D.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero(D[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            D[[r, i]] = D[[i, r]]
        inv = pow(int(D[r, c]), p - 2, p)
        D[r] = (D[r] * inv) % p
        col = D[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            D[nzr] = (D[nzr] - np.outer(col[nzr], D[r])) % p
        pivots.append(c)
        r += 1
    return D[:r], pivots


def nullspace_mod_p(A: SparseMatrix, p: int) -> list[dict]:
    """Basis of {x : A x = 0 mod p} as sparse dict vectors."""
    n = A.ncols
    if p == 2:
        piv: dict[int, int] = {}
        for r in _bit_rows(A):
            for h, b in piv.items():
                if (r >> h) & 1:
                    r ^= b
            if not r:
                continue
            h = (r & -r).bit_length() - 1
            for k in list(piv):
                if (piv[k] >> h) & 1:
                    piv[k] ^= r
            piv[h] = r
        out = []
        for f in range(n):
            if f in piv:
                continue
            v = {f: 1}
            for h, row in piv.items():
                if (row >> f) & 1:
                    v[h] = 1
            out.append(v)
        return out
    R, pivots = _rref_numpy(_dense_mod(A, p), p)
    pset = set(pivots)
    out = []
    for f in range(n):
        if f in pset:
            continue
        v = {f: 1}
        for k, c in enumerate(pivots):
            x = int(R[k, f])
            if x:
                v[c] = (-x) % p
        out.append(v)
    return out


class Echelon:
    """Incremental echelon basis over F_p that remembers combinations.

    ``insert(v, tag)`` returns True if v was independent of what is stored.
    ``reduce(v)`` returns (remainder, combination) where combination maps
    tags to coefficients with v = remainder + sum(c * inserted[tag]).
    """

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, tuple[dict, dict]] = {}  # pivot -> (vec, combo)

    def reduce(self, v: dict):
        p = self.p
        v = {k: x % p for k, x in v.items() if x % p}
        combo: dict = {}
        while True:
            h = next((k for k in v if k in self.rows), None)
            if h is None:
                break
            vec, cmb = self.rows[h]
            c = v[h]
            for k, x in vec.items():
                y = (v.get(k, 0) - c * x) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
            for t, x in cmb.items():
                y = (combo.get(t, 0) + c * x) % p
                if y:
                    combo[t] = y
                else:
                    combo.pop(t, None)
        return v, combo

    def insert(self, v: dict, tag) -> bool:
        p = self.p
        rem, combo = self.reduce(v)
        if not rem:
            return False
        # rem = v - sum combo * inserted; normalise leading coefficient
        h = min(rem)
        inv = pow(rem[h], p - 2, p)
        vec = {k: (x * inv) % p for k, x in rem.items()}
        cmb = {t: (-x * inv) % p for t, x in combo.items()}
        cmb[tag] = (cmb.get(tag, 0) + inv) % p
        self.rows[h] = (vec, cmb)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class ElementaryDivisors:
    """Invariant factors d1 | d2 | ... of a f.g. module (0 = free summand)."""

    divisors: tuple = ()

    @property
    def dimension(self) -> int:
        """Number of cyclic summands (the dimension over a field)."""
        return len(self.divisors)

    @property
    def is_zero(self) -> bool:
        return not self.divisors

    @property
    def order(self):
        if 0 in self.divisors:
            return float("inf")
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def __str__(self):
        if not self.divisors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.divisors)


@dataclass(frozen=True)
class FPModule:
    """``Z^ngens / <relations>`` over ``base`` (relations are columns)."""

    base: BaseRing
    ngens: int
    relations: tuple = ()

    def __post_init__(self):
        m = self.base.modulus
        rels = tuple(tuple((x % m) if m else int(x) for x in r) for r in self.relations)
        for r in rels:
            if len(r) != self.ngens:
                raise ValueError("relation length differs from generator count")
        object.__setattr__(self, "relations", tuple(r for r in rels if any(r)))

    @classmethod
    def free(cls, base: BaseRing, n: int) -> "FPModule":
        return cls(base, n, ())

    @classmethod
    def cyclic(cls, base: BaseRing, d: int) -> "FPModule":
        return cls.diagonal(base, [d])

    @classmethod
    def diagonal(cls, base: BaseRing, orders: Sequence[int]) -> "FPModule":
        n = len(orders)
        rels = []
        for i, d in enumerate(orders):
            if d:
                r = [0] * n
                r[i] = d
                rels.append(tuple(r))
        return cls(base, n, tuple(rels))

    def full_relations(self) -> list[list[int]]:
        """Relation columns including ``m e_i`` for base Z/m."""
        cols = [list(r) for r in self.relations]
        m = self.base.modulus
        if m:
            for i in range(self.ngens):
                c = [0] * self.ngens
                c[i] = m
                cols.append(c)
        return cols

    def orders(self) -> list[int] | None:
        """Per-generator additive orders when the presentation is diagonal."""
        m = self.base.modulus
        out = [m] * self.ngens
        for r in self.relations:
            nz = [(i, x) for i, x in enumerate(r) if x]
            if len(nz) != 1:
                return None
            i, x = nz[0]
            out[i] = gcd(out[i], abs(x))
        return out

    def uniform_prime(self) -> int | None:
        """p if this module is an F_p vector space on its generators."""
        o = self.orders()
        if o is None or not o:
            return None
        p = o[0]
        if _is_prime(p) and all(x == p for x in o):
            return p
        return None

    def divisors(self) -> ElementaryDivisors:
        o = self.orders()
        if o is not None:
            return ElementaryDivisors(_invariant_factors(o))
        cols = self.full_relations()
        A = [[c[i] for c in cols] for i in range(self.ngens)]
        s = _SNF(A, self.ngens, len(cols), transforms=False)
        return ElementaryDivisors(_invariant_factors(s.diag + [0] * (self.ngens - s.rank)))

    def contains(self, v: Sequence[int]) -> bool:
        """True if v lies in the relation lattice (i.e. is zero in the module)."""
        o = self.orders()
        if o is not None:
            return all((x % d == 0) if d else x == 0 for x, d in zip(v, o))
        cols = self.full_relations()
        if not cols:
            return not any(v)
        A = [[c[i] for c in cols] for i in range(self.ngens)]
        return solve_integer(A, len(cols), list(v)) is not None

    def __repr__(self):
        return f"FPModule({self.base}, {self.divisors()})"


def _check_base(A: FPModule, B: FPModule):
    if A.base != B.base:
        raise BaseMismatch(f"{A.base} vs {B.base}", witness=(str(A.base), str(B.base)))


def tensor_modules(A: FPModule, B: FPModule) -> FPModule:
    """Presentation of ``A (x) B`` over the common base.

    Generators are pairs (i, j) numbered ``i * B.ngens + j``.
    """
    _check_base(A, B)
    a, b = A.ngens, B.ngens
    rels = []
    for r in A.relations:
        for j in range(b):
            v = [0] * (a * b)
            for i, x in enumerate(r):
                v[i * b + j] = x
            rels.append(tuple(v))
    for r in B.relations:
        for i in range(a):
            v = [0] * (a * b)
            for j, x in enumerate(r):
                v[i * b + j] = x
            rels.append(tuple(v))
    return FPModule(A.base, a * b, tuple(rels))


def subquotient(base: BaseRing, gens: list[list[int]], rels: list[list[int]], dim: int):
    """Present ``<gens> / <rels>`` (rels inside the span of gens).

    Returns (module, basis) where ``basis`` lists ambient vectors for the
    generators of the presentation.
    """
    Lb = lattice_basis(gens, dim)
    r = len(Lb)
    if r == 0:
        return FPModule(base, 0, ()), []
    A = [[c[i] for c in Lb] for i in range(dim)]
    s = _SNF(A, dim, r)
    coords = []
    for v in rels:
        x = _solve_with(s, list(v))
        if x is None:
            raise ValueError("relation outside generator lattice")
        coords.append(tuple(x))
    return FPModule(base, r, tuple(coords)), Lb


def hom_modules(A: FPModule, B: FPModule) -> FPModule:
    """Presentation of ``Hom(A, B)``.

    A homomorphism is a matrix X (B.ngens x A.ngens) with X R_A in the
    relation lattice of B; generators of the returned module are ambient
    matrices flattened row-major (``hom_basis`` recovers them).
    """
    return hom_with_basis(A, B)[0]


def hom_with_basis(A: FPModule, B: FPModule):
    _check_base(A, B)
    a, b = A.ngens, B.ngens
    RA = A.full_relations()
    RB = B.full_relations()
    n = a * b
    # unknowns: X (n) then coefficients y for each (relation of A) x (relation of B)
    # condition: for each relation column r of A: X r - RB y_r = 0
    nrb = len(RB)
    rows = []
    for r in RA:
        for k in range(b):
            row = [0] * (n + len(RA) * nrb)
            for i, x in enumerate(r):
                if x:
                    row[k * a + i] = x
            rows.append(row)
    for ridx in range(len(RA)):
        for k in range(b):
            row = rows[ridx * b + k]
            for t, col in enumerate(RB):
                if col[k]:
                    row[n + ridx * nrb + t] = -col[k]
    total = n + len(RA) * nrb
    if rows:
        ker = integer_kernel(rows, total)
        gens = [v[:n] for v in ker]
    else:
        gens = [[int(i == j) for i in range(n)] for j in range(n)]
    # quotient by maps landing in relations: X = RB-column placed in column i
    qrels = []
    for i in range(a):
        for col in RB:
            v = [0] * n
            for k in range(b):
                v[k * a + i] = col[k]
            qrels.append(v)
    return subquotient(A.base, gens, qrels, n)


def is_split_surjection(f, A: FPModule, B: FPModule):
    """Decide whether ``f: A -> B`` (matrix B.ngens x A.ngens) splits.

    Returns ``(True, U)`` with U a section matrix (A.ngens x B.ngens) such
    that f U = id on B and U is well defined, or ``(False, None)``.
    Raises NotSurjective if f is not onto.
    """
    _check_base(A, B)
    F = as_dense(f)
    a, b = A.ngens, B.ngens
    if b and len(F) != b:
        raise ValueError("matrix shape mismatch")
    RA, RB = A.full_relations(), B.full_relations()
    # surjectivity: [F | RB] spans Z^b
    cols = [[F[i][j] for i in range(b)] for j in range(a)] + RB
    if b:
        span = lattice_basis(cols, b) if cols else []
        if len(span) < b or _det_abs(span, b) != 1:
            raise NotSurjective("map is not onto", witness=None)
    # unknowns: U (a*b, row-major U[i][k] -> i*b + k),
    # Y (len(RA) x len(RB)), W (len(RB) x b)
    nU = a * b
    nY = len(RA) * len(RB)
    nW = len(RB) * b
    total = nU + nY + nW
    eqs, rhs = [], []
    # well-definedness: U r = RA y_r for each r in RB
    for t, r in enumerate(RB):
        for i in range(a):
            row = [0] * total
            for k in range(b):
                if r[k]:
                    row[i * b + k] = r[k]
            for s_, ca in enumerate(RA):
                if ca[i]:
                    row[nU + s_ * len(RB) + t] = -ca[i]
            eqs.append(row)
            rhs.append(0)
    # section: F U e_k = e_k + RB w_k
    for k in range(b):
        for l in range(b):
            row = [0] * total
            for i in range(a):
                if F[l][i]:
                    row[i * b + k] = F[l][i]
            for t, cb in enumerate(RB):
                if cb[l]:
                    row[nU + nY + t * b + k] = -cb[l]
            eqs.append(row)
            rhs.append(int(l == k))
    if not eqs:
        return True, [[0] * b for _ in range(a)]
    x = solve_integer(eqs, total, rhs)
    if x is None:
        return False, None
    U = [[x[i * b + k] for k in range(b)] for i in range(a)]
    return True, U


def _det_abs(cols, dim):
    A = [[c[i] for c in cols] for i in range(dim)]
    s = _SNF(A, dim, len(cols), transforms=False)
    if s.rank < dim:
        return 0
    out = 1
    for d in s.diag:
        out *= d
    return abs(out)


# ---------------------------------------------------------------------------
# cochain complexes


@dataclass
class CochainComplexSpec:
    """Modules ``C^n`` and coboundaries ``d^n: C^n -> C^{n+1}``.

    ``maps[n]`` is a SparseMatrix with rows indexed by generators of
    ``C^{n+1}`` and columns by generators of ``C^n``.  Degrees absent from
    ``modules`` are zero.
    """

    base: BaseRing
    modules: dict
    maps: dict
    _groups: dict = field(default_factory=dict, repr=False)

    def module(self, n: int) -> FPModule:
        return self.modules.get(n) or FPModule(self.base, 0)

    def d(self, n: int) -> SparseMatrix:
        src, tgt = self.module(n), self.module(n + 1)
        m = self.maps.get(n)
        if m is None:
            return SparseMatrix(tgt.ngens, src.ngens)
        if (m.nrows, m.ncols) != (tgt.ngens, src.ngens):
            raise ValueError(f"coboundary {n} has shape {m.nrows}x{m.ncols}")
        return m

    def check_square_zero(self, n: int):
        """Raise NotAComplex unless d^{n+1} d^n lands in the relations."""
        a, b = self.d(n), self.d(n + 1)
        if not a.entries or not b.entries:
            return
        comp = b @ a
        tgt = self.module(n + 2)
        p = tgt.uniform_prime()
        if p is not None:
            if not comp.is_zero(p):
                raise NotAComplex(f"d{n + 1} d{n} != 0", witness=n)
            return
        for j, col in enumerate(comp.columns()):
            v = [0] * tgt.ngens
            for i, x in col.items():
                v[i] = x
            if not tgt.contains(v):
                raise NotAComplex(f"d{n + 1} d{n} != 0 on generator {j}", witness=(n, j))

    def field_prime(self, n: int) -> int | None:
        ps = {self.module(k).uniform_prime() for k in (n - 1, n, n + 1) if self.module(k).ngens}
        if len(ps) == 1:
            p = ps.pop()
            return p
        return None

    def group(self, n: int) -> "CohomologyGroup":
        if n not in self._groups:
            self.check_square_zero(n - 1)
            self._groups[n] = CohomologyGroup(self, n)
        return self._groups[n]


class CohomologyGroup:
    """``H^n`` of a CochainComplexSpec with representatives and coordinates."""

    def __init__(self, C: CochainComplexSpec, n: int):
        self.C, self.n = C, n
        self.module = C.module(n)
        self.p = C.field_prime(n) if self.module.ngens else None
        if self.module.ngens == 0:
            self.divisors = ElementaryDivisors(())
            self._reps = []
            self._kind = "zero"
            return
        if self.p is not None:
            self._kind = "field"
            dn, dprev = C.d(n), C.d(n - 1)
            rn = rank_mod_p(dn, self.p)
            rp = rank_mod_p(dprev, self.p)
            dim = self.module.ngens - rn - rp
            self.divisors = ElementaryDivisors((self.p,) * dim)
            self._reps = None
        else:
            self._kind = "integer"
            self._build_integer()

    # -- field engine -------------------------------------------------------
    def _build_field(self):
        p = self.p
        self._ech = Echelon(p)
        for j, col in enumerate(self.C.d(self.n - 1).columns()):
            self._ech.insert(col, ("b", j))
        reps = []
        for v in nullspace_mod_p(self.C.d(self.n), p):
            if self._ech.insert(v, ("r", len(reps))):
                reps.append(v)
        self._reps = reps

    # -- integer engine -----------------------------------------------------
    def _build_integer(self):
        C, n = self.C, self.n
        mod_n, mod_next = C.module(n), C.module(n + 1)
        g = mod_n.ngens
        dn = C.d(n).to_dense()
        rel_next = mod_next.full_relations()
        # cycles: x with d x in relations of C^{n+1}
        if mod_next.ngens:
            block = [row + [c[i] for c in rel_next] for i, row in enumerate(dn)]
            ker = integer_kernel(block, g + len(rel_next))
            zgens = [v[:g] for v in ker]
        else:
            zgens = [[int(i == j) for i in range(g)] for j in range(g)]
        Zb = lattice_basis(zgens, g)
        r = len(Zb)
        self._Zb = Zb
        if r == 0:
            self.divisors = ElementaryDivisors(())
            self._reps = []
            self._zsnf = None
            return
        A = [[c[i] for c in Zb] for i in range(g)]
        self._zsnf = _SNF(A, g, r)
        bcols = [list(col) for col in zip(*C.d(n - 1).to_dense())] if C.d(n - 1).ncols and g else []
        bcols += mod_n.full_relations()
        coeffs = []
        for b in bcols:
            x = _solve_with(self._zsnf, b)
            if x is None:
                raise NotAComplex("boundary is not a cycle", witness=n)
            coeffs.append(x)
        if coeffs:
            Cm = [[c[i] for c in coeffs] for i in range(r)]
            s = _SNF(Cm, r, len(coeffs))
            diag = s.diag + [0] * (r - s.rank)
            Uinv, U = s.Uinv, s.U
        else:
            diag = [0] * r
            Uinv = [[int(i == j) for j in range(r)] for i in range(r)]
            U = Uinv
        self._U, self._diag = U, diag
        keep = [i for i, d in enumerate(diag) if d != 1]
        self._keep = keep
        reps = []
        for i in keep:
            y = [Uinv[k][i] for k in range(r)]
            reps.append([sum(Zb[k][t] * y[k] for k in range(r)) for t in range(g)])
        self._reps = reps
        self._rep_orders = [diag[i] for i in keep]
        self.divisors = ElementaryDivisors(_invariant_factors(diag))

    # -- public -------------------------------------------------------------
    @property
    def representatives(self) -> list[list[int]]:
        """Cocycles (dense generator coordinates) spanning H^n."""
        if self._kind == "field":
            if self._reps is None:
                self._build_field()
            return [_dense(v, self.module.ngens) for v in self._reps]
        return [list(v) for v in self._reps]

    @property
    def representative_orders(self) -> list[int]:
        if self._kind == "field":
            return [self.p] * len(self.representatives)
        if self._kind == "zero":
            return []
        return list(self._rep_orders)

    def coordinates(self, z: Sequence[int]) -> list[int]:
        """Coordinates of the class of cocycle z in terms of representatives."""
        if self._kind == "zero":
            return []
        if self._kind == "field":
            if self._reps is None:
                self._build_field()
            rem, combo = self._ech.reduce({i: x for i, x in enumerate(z) if x})
            if rem:
                raise ValueError("vector is not a cocycle")
            return [combo.get(("r", i), 0) for i in range(len(self._reps))]
        if not self._Zb:
            return []
        y = _solve_with(self._zsnf, list(z))
        if y is None:
            raise ValueError("vector is not a cocycle")
        c = [sum(u * x for u, x in zip(row, y)) for row in self._U]
        out = []
        for i, d in zip(self._keep, self._rep_orders):
            out.append(c[i] % d if d else c[i])
        return out

    def is_coboundary(self, z: Sequence[int]) -> bool:
        return not any(self.coordinates(z))

    def is_cocycle(self, z: Sequence[int]) -> bool:
        dz = self.C.d(self.n).apply(list(z))
        return self.C.module(self.n + 1).contains(dz) if self.C.module(self.n + 1).ngens else True


def _dense(v: dict, n: int) -> list[int]:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


def homology_at(C: CochainComplexSpec, n: int) -> ElementaryDivisors:
    """Elementary divisors of ``ker d^n / im d^{n-1}``."""
    return C.group(n).divisors


def complex_from_dense(base: BaseRing, modules: dict, maps: dict) -> CochainComplexSpec:
    """Convenience constructor taking dense list-of-lists coboundaries."""
    sm = {}
    for n, m in maps.items():
        ncols = modules[n].ngens if n in modules else 0
        sm[n] = SparseMatrix.from_dense(m, ncols) if m else SparseMatrix(
            modules[n + 1].ngens if n + 1 in modules else 0, ncols)
    return CochainComplexSpec(base, dict(modules), sm)


def solve_in(A: Sequence[Sequence[int]], b: Sequence[int], target: FPModule):
    """Find x with ``A x = b`` in the module ``target`` (A has target.ngens rows).

    Returns a list of integers or None when no solution exists."""
    nr = target.ngens
    ncols = len(A[0]) if A else 0
    if nr == 0:
        return [0] * ncols
    p = target.uniform_prime()
    if p is not None:
        ech = Echelon(p)
        for j in range(ncols):
            ech.insert({i: A[i][j] for i in range(nr) if A[i][j] % p}, j)
        rem, combo = ech.reduce({i: x for i, x in enumerate(b) if x % p})
        if rem:
            return None
        x = [0] * ncols
        for j, c in combo.items():
            x[j] = c % p
        return x
    rels = target.full_relations()
    big = [list(A[i]) + [c[i] for c in rels] for i in range(nr)]
    sol = solve_integer(big, ncols + len(rels), list(b))
    return None if sol is None else sol[:ncols]


def image_contains(A: Sequence[Sequence[int]], b: Sequence[int], target: FPModule) -> bool:
    return solve_in(A, b, target) is not None


def sequence_is_exact(modules: Sequence[FPModule], maps: Sequence) -> list:
    """Homology of ``0 -> A0 -> A1 -> ... -> Ak -> 0`` at every spot.

    ``maps[i]`` is the dense matrix A_i -> A_{i+1}.  Returns the list of
    ElementaryDivisors (all zero iff the sequence is exact)."""
    base = modules[0].base
    mods = {i: m for i, m in enumerate(modules)}
    mats = {}
    for i, M in enumerate(maps):
        mats[i] = SparseMatrix.from_dense(M, modules[i].ngens) if M else SparseMatrix(
            modules[i + 1].ngens, modules[i].ngens)
    C = CochainComplexSpec(base, mods, mats)
    return [homology_at(C, i) for i in range(len(modules))]


def module_kernel(A: Sequence[Sequence[int]], source: FPModule, target: FPModule) -> list[list[int]]:
    """Generators of ``{x in source : A x = 0 in target}``.

    The source relations are implicit and not listed."""
    ns, nt = source.ngens, target.ngens
    if ns == 0:
        return []
    if nt == 0:
        return [[int(i == j) for i in range(ns)] for j in range(ns)]
    p = source.uniform_prime()
    if p is not None and target.uniform_prime() == p:
        ker = nullspace_mod_p(SparseMatrix.from_dense(A, ns), p)
        return [[v.get(i, 0) for i in range(ns)] for v in ker]
    rels = target.full_relations()
    big = [list(A[i]) + [c[i] for c in rels] for i in range(nt)]
    out = []
    for k in integer_kernel(big, ns + len(rels)):
        v = k[:ns]
        if not source.contains(v):
            out.append(v)
    return out
