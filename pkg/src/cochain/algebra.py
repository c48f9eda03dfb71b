"""Finite-rank associative algebras given by structure constants.

An algebra has a basis ``e_0 .. e_{n-1}``, a table ``mult[i][j]`` giving the
coordinates of ``e_i e_j`` and the coordinates of the unit.  Each basis
element carries an additive order (0 for a free summand), so rings such
as ``F_2`` can be studied over ``Z``.

Bimodules store one matrix per basis element for each side; matrices act
on column vectors, so ``right[j]`` is the matrix of ``m -> m e_j``.
"""

from __future__ import annotations

from itertools import product
from math import gcd
from typing import Sequence

from .errors import BaseMismatch, NotAssociative, NoUnit, ParseError
from .exactmod import BaseRing, FPModule, PrimeField, Z, is_split_surjection


def _reduce_vec(v, orders):
    return tuple((x % o) if o else x for x, o in zip(v, orders))


class StructureAlgebra:
    """Associative unital algebra over a base ring, validated eagerly.

    ``ground`` optionally records a commutative algebra K over the prime
    field together with the coordinates of the structure map ``K -> R``;
    this is the two-level situation needed by the bicomplex module.
    """

    def __init__(self, base: BaseRing, basis: Sequence[str], mult, unit: Sequence[int],
                 orders: Sequence[int] | None = None, ground=None, validate: bool = True):
        self.base = base
        self.basis = tuple(basis)
        n = len(self.basis)
        self.orders = tuple(orders) if orders is not None else (base.modulus,) * n
        if len(self.orders) != n:
            raise ValueError("orders must match basis length")
        self.orders = tuple(gcd(o, base.modulus) if base.modulus else o for o in self.orders)
        self.mult = tuple(
            tuple(_reduce_vec(mult[i][j], self.orders) for j in range(n)) for i in range(n)
        )
        self.unit = _reduce_vec(unit, self.orders)
        self.ground = ground
        self._sparse = tuple(
            tuple(tuple((k, c) for k, c in enumerate(self.mult[i][j]) if c) for j in range(n))
            for i in range(n)
        )
        if validate:
            self.validate()

    # -- basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def module(self) -> FPModule:
        return FPModule.diagonal(self.base, self.orders)

    def is_free(self) -> bool:
        """True when the underlying module is free over the base."""
        return all(o == self.base.modulus for o in self.orders)

    def zero(self):
        return (0,) * self.dim

    def basis_vector(self, i: int):
        return tuple(int(k == i) for k in range(self.dim))

    def reduce(self, v):
        return _reduce_vec(v, self.orders)

    def add(self, u, v):
        return self.reduce(tuple(a + b for a, b in zip(u, v)))

    def scale(self, c, v):
        return self.reduce(tuple(c * a for a in v))

    def sub(self, u, v):
        return self.reduce(tuple(a - b for a, b in zip(u, v)))

    def mul(self, u, v):
        out = [0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self._sparse[i][j]:
                    out[k] += a * b * c
        return self.reduce(out)

    def sparse_product(self, i: int, j: int):
        return self._sparse[i][j]

    def unit_index(self) -> int | None:
        """Index i with unit = e_i, if the unit is a basis vector."""
        for i in range(self.dim):
            if self.unit == self.basis_vector(i):
                return i
        return None

    def elements(self):
        """All elements (only for finite algebras)."""
        if any(o == 0 for o in self.orders):
            raise ValueError("algebra is infinite")
        return [tuple(t) for t in product(*(range(o) for o in self.orders))]

    def cardinality(self):
        if any(o == 0 for o in self.orders):
            return float("inf")
        out = 1
        for o in self.orders:
            out *= o
        return out

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i] for i in range(self.dim) for j in range(self.dim))

    # -- validation ---------------------------------------------------------
    def validate(self):
        n = self.dim
        # products respect additive orders
        for i in range(n):
            if self.orders[i]:
                for j in range(n):
                    if any(self.scale(self.orders[i], self.mult[i][j])) or any(
                        self.scale(self.orders[i], self.mult[j][i])
                    ):
                        raise NotAssociative(
                            f"product with {self.basis[i]} ignores its additive order",
                            witness=(i, j),
                        )
        for i in range(n):
            e = self.basis_vector(i)
            if self.mul(self.unit, e) != self.reduce(e) or self.mul(e, self.unit) != self.reduce(e):
                raise NoUnit(f"unit does not act as identity on {self.basis[i]}", witness=i)
        for i, j, k in product(range(n), repeat=3):
            ij = self.mult[i][j]
            jk = self.mult[j][k]
            left = self.mul(ij, self.basis_vector(k))
            right = self.mul(self.basis_vector(i), jk)
            if left != right:
                raise NotAssociative(
                    f"({self.basis[i]}{self.basis[j]}){self.basis[k]} != "
                    f"{self.basis[i]}({self.basis[j]}{self.basis[k]})",
                    witness=(i, j, k),
                )
        return self

    def __eq__(self, other):
        return (
            isinstance(other, StructureAlgebra)
            and self.base == other.base
            and self.basis == other.basis
            and self.mult == other.mult
            and self.unit == other.unit
            and self.orders == other.orders
        )

    def __hash__(self):
        return hash((self.base, self.basis, self.mult, self.unit, self.orders))

    def __repr__(self):
        return f"StructureAlgebra({self.base}, basis={list(self.basis)})"

    def fingerprint(self) -> str:
        import hashlib

        return hashlib.sha256(print_algebra(self).encode()).hexdigest()[:16]

    # -- constructions ------------------------------------------------------
    def regular_bimodule(self) -> "Bimodule":
        """R as a bimodule over itself."""
        n = self.dim
        left, right = [], []
        for i in range(n):
            L = [[0] * n for _ in range(n)]
            Rm = [[0] * n for _ in range(n)]
            for j in range(n):
                for k, c in self._sparse[i][j]:
                    L[k][j] += c
                for k, c in self._sparse[j][i]:
                    Rm[k][j] += c
            left.append(L)
            right.append(Rm)
        return Bimodule(self, self.module, left, right)


def algebra_from_table(base, basis, mult, unit, orders=None) -> StructureAlgebra:
    """Build and validate an algebra (raises NotAssociative / NoUnit)."""
    if isinstance(mult, dict):
        n = len(basis)
        table = [[[0] * n for _ in range(n)] for _ in range(n)]
        for (i, j), v in mult.items():
            table[i][j] = list(v)
        mult = table
    return StructureAlgebra(base, basis, mult, unit, orders)


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


class Bimodule:
    """Bimodule over a StructureAlgebra with diagonal carrier."""

    def __init__(self, algebra: StructureAlgebra, carrier: FPModule, left, right, validate=True):
        self.algebra = algebra
        self.carrier = carrier
        self.orders = tuple(carrier.orders() or ())
        if carrier.ngens and not self.orders:
            raise ValueError("bimodule carrier must have a diagonal presentation")
        self.left = tuple(tuple(tuple(self._red_row(r, k) for k, r in enumerate(M))) for M in left)
        self.right = tuple(tuple(tuple(self._red_row(r, k) for k, r in enumerate(M))) for M in right)
        # right/left normalised row-wise to target orders
        if validate:
            self.validate()

    def _red_row(self, row, k):
        o = self.carrier.orders()[k] if self.carrier.ngens else 0
        return tuple((x % o) if o else x for x in row)

    @property
    def dim(self) -> int:
        return self.carrier.ngens

    def reduce(self, v):
        return tuple((x % o) if o else x for x, o in zip(v, self.orders))

    def act_left(self, r, m):
        out = [0] * self.dim
        for i, a in enumerate(r):
            if a:
                L = self.left[i]
                for k in range(self.dim):
                    out[k] += a * sum(L[k][j] * m[j] for j in range(self.dim))
        return self.reduce(out)

    def act_right(self, m, r):
        out = [0] * self.dim
        for i, a in enumerate(r):
            if a:
                Rm = self.right[i]
                for k in range(self.dim):
                    out[k] += a * sum(Rm[k][j] * m[j] for j in range(self.dim))
        return self.reduce(out)

    def _combo(self, mats, v):
        n = self.dim
        out = [[0] * n for _ in range(n)]
        for i, a in enumerate(v):
            if a:
                for r in range(n):
                    for c in range(n):
                        out[r][c] += a * mats[i][r][c]
        return self._red(out)

    def _red(self, M):
        return tuple(tuple(self._red_row(r, k)) for k, r in enumerate(M))

    def validate(self):
        R = self.algebra
        n = self.dim
        if len(self.left) != R.dim or len(self.right) != R.dim:
            raise ValueError("one action matrix per algebra basis element is required")
        idn = self._red(_identity(n))
        if self._combo(self.left, R.unit) != idn or self._combo(self.right, R.unit) != idn:
            raise NoUnit("unit does not act as identity on the bimodule")
        for i in range(R.dim):
            for j in range(R.dim):
                ij = R.mult[i][j]
                if self._red(_matmul(self.left[i], self.left[j])) != self._combo(self.left, ij):
                    raise NotAssociative("left action is not associative", witness=(i, j))
                if self._red(_matmul(self.right[j], self.right[i])) != self._combo(self.right, ij):
                    raise NotAssociative("right action is not associative", witness=(i, j))
                if self._red(_matmul(self.left[i], self.right[j])) != self._red(
                    _matmul(self.right[j], self.left[i])
                ):
                    raise NotAssociative("left and right actions do not commute", witness=(i, j))
        # actions respect additive orders of the algebra and the carrier
        for i in range(R.dim):
            o = R.orders[i]
            if o:
                for M in (self.left[i], self.right[i]):
                    if any(self.reduce([o * x for x in col]) != (0,) * n for col in zip(*M)):
                        raise NotAssociative("action ignores additive order", witness=i)
        return self

    def __eq__(self, other):
        return (
            isinstance(other, Bimodule)
            and self.algebra == other.algebra
            and self.orders == other.orders
            and self.left == other.left
            and self.right == other.right
        )

    def __repr__(self):
        return f"Bimodule(dim={self.dim}, orders={list(self.orders)})"

    # -- R^e viewpoint ------------------------------------------------------
    def to_enveloping_action(self):
        """Matrices of r (x) s^op acting by m -> r m s, keyed by (i, j)."""
        R = self.algebra
        return {
            (i, j): self._red(_matmul(self.left[i], self.right[j]))
            for i in range(R.dim)
            for j in range(R.dim)
        }

    @classmethod
    def from_enveloping_action(cls, algebra: StructureAlgebra, carrier: FPModule, action):
        n = carrier.ngens
        left, right = [], []
        for i in range(algebra.dim):
            L = [[0] * n for _ in range(n)]
            Rm = [[0] * n for _ in range(n)]
            for u, c in enumerate(algebra.unit):
                if c:
                    for r in range(n):
                        for s in range(n):
                            L[r][s] += c * action[(i, u)][r][s]
                            Rm[r][s] += c * action[(u, i)][r][s]
            left.append(L)
            right.append(Rm)
        return cls(algebra, carrier, left, right)


def trivial_bimodule(R: StructureAlgebra, images, orders=None) -> Bimodule:
    """One-dimensional bimodule where e_i acts on both sides by images[i].

    ``images`` are the values of an algebra map R -> base/(order)."""
    o = orders if orders is not None else [R.base.modulus]
    left = [[[images[i]]] for i in range(R.dim)]
    return Bimodule(R, FPModule.diagonal(R.base, o), left, left)


# ---------------------------------------------------------------------------
# opposite, enveloping, induced


def opposite_enveloping(R: StructureAlgebra):
    """Return ``(R^op, R^e, action)`` where ``action[(i, j)]`` is the matrix
    of ``e_i (x) e_j^op`` acting on R by ``r -> e_i r e_j``."""
    n = R.dim
    op_mult = [[R.mult[j][i] for j in range(n)] for i in range(n)]
    Rop = StructureAlgebra(R.base, [b + "^op" for b in R.basis], op_mult, R.unit, R.orders)
    names = [f"{a}(x){b}" for a in R.basis for b in Rop.basis]
    orders = [gcd(R.orders[i], R.orders[j]) for i in range(n) for j in range(n)]
    N = n * n
    mult = [[[0] * N for _ in range(N)] for _ in range(N)]
    for a, b, c, d in product(range(n), repeat=4):
        ac = R.mult[a][c]
        db = R.mult[d][b]
        row = mult[a * n + b][c * n + d]
        for k, x in enumerate(ac):
            if x:
                for l, y in enumerate(db):
                    if y:
                        row[k * n + l] += x * y
    unit = [0] * N
    for k, x in enumerate(R.unit):
        for l, y in enumerate(R.unit):
            unit[k * n + l] += x * y
    Re = StructureAlgebra(R.base, names, mult, unit, orders)
    action = R.regular_bimodule().to_enveloping_action()
    return Rop, Re, action


class InducedBimodule:
    """Hom(R, A) with ``(r f s)(a) = r f(s a)`` and the embedding mu."""

    def __init__(self, bimodule: Bimodule, mu, cokernel: Bimodule | None):
        self.bimodule = bimodule
        self.mu = mu
        self.cokernel = cokernel


def induced_bimodule(R: StructureAlgebra, A: Bimodule) -> InducedBimodule:
    """Hom(R, A) for a left R-module A (the left action of a bimodule is used).

    Coordinates: f is stored as blocks, block x holding f(e_x) in A.
    When A carries a right action as well, ``mu(m)(r) = m r`` embeds A and
    the cokernel is presented on the blocks x != unit index.
    """
    if not R.is_free():
        raise ValueError("induced bimodule needs R free over the base")
    n, a = R.dim, A.dim
    dim = n * a
    orders = list(A.orders) * n
    left, right = [], []
    for i in range(n):
        L = [[0] * dim for _ in range(dim)]
        for x in range(n):
            for r in range(a):
                for c in range(a):
                    L[x * a + r][x * a + c] = A.left[i][r][c]
        left.append(L)
        # (f e_i)(e_x) = f(e_i e_x) = sum_k c_{ix}^k f(e_k)
        Rm = [[0] * dim for _ in range(dim)]
        for x in range(n):
            for k, c in R.sparse_product(i, x):
                for r in range(a):
                    Rm[x * a + r][k * a + r] += c
        right.append(Rm)
    hom = Bimodule(R, FPModule.diagonal(R.base, orders), left, right)
    mu = [[0] * a for _ in range(dim)]
    for x in range(n):
        for r in range(a):
            for c in range(a):
                mu[x * a + r][c] = A.right[x][r][c]
    u = R.unit_index()
    coker = None
    if u is not None:
        keep = [x * a + r for x in range(n) if x != u for r in range(a)]
        pos = {g: t for t, g in enumerate(keep)}

        def project(M):
            # act, then subtract mu(f(1)) to land in {f : f(1) = 0}
            out = [[0] * len(keep) for _ in keep]
            for t, g in enumerate(keep):
                col = [M[r][g] for r in range(dim)]
                f1 = [col[u * a + r] for r in range(a)]
                corr = [sum(mu[q][c] * f1[c] for c in range(a)) for q in range(dim)]
                for q in range(dim):
                    if q in pos:
                        out[pos[q]][t] += col[q] - corr[q]
            return out

        coker = Bimodule(
            R,
            FPModule.diagonal(R.base, [orders[g] for g in keep]),
            [project(L) for L in left],
            [project(Rm) for Rm in right],
        )
    return InducedBimodule(hom, mu, coker)


def mu_is_split(ind: InducedBimodule, A: Bimodule) -> bool:
    """Check that mu: A -> Hom(R, A) is a split monomorphism of base modules
    by exhibiting the retraction f -> f(1) through is_split_surjection."""
    R = ind.bimodule.algebra
    a = A.dim
    n = R.dim
    ev = [[0] * (n * a) for _ in range(a)]
    for x, c in enumerate(R.unit):
        for r in range(a):
            ev[r][x * a + r] += c
    ok, _ = is_split_surjection(ev, ind.bimodule.carrier, A.carrier)
    comp = [[sum(ev[r][q] * ind.mu[q][c] for q in range(n * a)) for c in range(a)] for r in range(a)]
    return ok and A._red(comp) == A._red(_identity(a))


# ---------------------------------------------------------------------------
# standard examples


def dual_numbers(base: BaseRing = PrimeField(2)) -> StructureAlgebra:
    """base[x]/x^2 on the basis {1, x}."""
    mult = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return StructureAlgebra(base, ["1", "x"], mult, [1, 0])


def product_algebra(base: BaseRing, copies: int = 2) -> StructureAlgebra:
    """base x ... x base on orthogonal idempotents."""
    n = copies
    mult = [[[int(i == j == k) for k in range(n)] for j in range(n)] for i in range(n)]
    return StructureAlgebra(base, [f"e{i}" for i in range(n)], mult, [1] * n)


def matrix_algebra(base: BaseRing, n: int = 2) -> StructureAlgebra:
    """M_n(base) on matrix units e_ij."""
    idx = [(i, j) for i in range(n) for j in range(n)]
    N = len(idx)
    mult = [[[0] * N for _ in range(N)] for _ in range(N)]
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if j == k:
                mult[a][b][idx.index((i, l))] = 1
    unit = [int(i == j) for i, j in idx]
    return StructureAlgebra(base, [f"e{i + 1}{j + 1}" for i, j in idx], mult, unit)


def upper_triangular(base: BaseRing) -> StructureAlgebra:
    """Upper-triangular 2x2 matrices on e11, e12, e22 (unit first: 1 = e11+e22
    is not a basis vector, so the basis is {1, e12, e22} with e11 = 1 - e22)."""
    # basis: u = 1, a = e12, b = e22
    mult = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for j in range(3):
        mult[0][j][j] = 1
        mult[j][0][j] = 1
    # e12 e12 = 0; e12 e22 = e12; e22 e12 = 0; e22 e22 = e22
    mult[1][2] = [0, 1, 0]
    mult[2][2] = [0, 0, 1]
    return StructureAlgebra(base, ["1", "e12", "e22"], mult, [1, 0, 0])


def cyclic_ring(n: int, base: BaseRing = Z) -> StructureAlgebra:
    """Z/n as an algebra over the base (one basis element of order n)."""
    m = base.modulus
    o = gcd(n, m) if m else n
    return StructureAlgebra(base, ["1"], [[[1]]], [1], [o])


def ground_algebra(base: BaseRing) -> StructureAlgebra:
    """The base ring itself as a rank-one algebra."""
    return StructureAlgebra(base, ["1"], [[[1]]], [1])


def tensor_algebras(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    """A (x) B over a common prime field, basis a_i (x) b_j in row-major order."""
    if A.base != B.base or not A.base.is_field:
        raise BaseMismatch("tensor products are formed over a common prime field",
                           witness=(str(A.base), str(B.base)))
    n = A.dim * B.dim
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i, j, k, l in product(range(A.dim), range(B.dim), range(A.dim), range(B.dim)):
        row = mult[i * B.dim + j][k * B.dim + l]
        for u, c in A.sparse_product(i, k):
            for v, d in B.sparse_product(j, l):
                row[u * B.dim + v] += c * d
    unit = [a * b for a in A.unit for b in B.unit]
    names = [f"{a}*{b}" for a in A.basis for b in B.basis]
    return StructureAlgebra(A.base, names, mult, unit)


def _kron(X, Y):
    return [[x * y for x in rx for y in ry] for rx in X for ry in Y]


def tensor_bimodules(M: "Bimodule", N: "Bimodule", AB: StructureAlgebra | None = None) -> "Bimodule":
    """M (x) N as a bimodule over A (x) B."""
    A, B = M.algebra, N.algebra
    AB = AB or tensor_algebras(A, B)
    left = [_kron(M.left[i], N.left[j]) for i in range(A.dim) for j in range(B.dim)]
    right = [_kron(M.right[i], N.right[j]) for i in range(A.dim) for j in range(B.dim)]
    p = A.base.modulus
    return Bimodule(AB, FPModule.diagonal(A.base, [p] * (M.dim * N.dim)), left, right)


def rebase_algebra(R: StructureAlgebra, base: BaseRing) -> StructureAlgebra:
    """View R over a ring ``base`` that surjects onto R's base ring.

    Orders of basis elements are kept, so e.g. an F_p-algebra becomes a
    Z/p^2-algebra (or a Z-algebra) killed by p."""
    if base == R.base:
        return R
    m, k = base.modulus, R.base.modulus
    if k == 0 or (m and m % k):
        raise BaseMismatch(f"{base} does not map onto {R.base}", witness=(str(base), str(R.base)))
    return StructureAlgebra(base, R.basis, R.mult, R.unit, R.orders)


def rebase_bimodule(M: "Bimodule", R: StructureAlgebra) -> "Bimodule":
    """M over the rebased algebra R (same basis, actions and orders)."""
    return Bimodule(R, FPModule.diagonal(R.base, list(M.orders)), M.left, M.right)


def unit_first(R: StructureAlgebra) -> StructureAlgebra:
    """Return an isomorphic algebra whose basis vector 0 is the unit.

    Works when some unit coordinate is invertible in the base (always the
    case over a field for a non-zero algebra)."""
    if R.unit_index() == 0:
        return R
    m = R.base.modulus
    piv = None
    for i, c in enumerate(R.unit):
        if c in (1, -1) or (m and gcd(c, m) == 1 and R.orders[i] == m):
            piv = i
            break
    if piv is None:
        raise NoUnit("unit is not part of a basis")
    n = R.dim
    # new basis: f_0 = unit, f_k = e_{old} for the other indices
    others = [i for i in range(n) if i != piv]
    inv = pow(R.unit[piv], -1, m) if m else R.unit[piv]

    def to_new(v):
        # v = sum v_i e_i; e_piv = inv*(unit - sum_{i != piv} unit_i e_i)
        c = v[piv] * inv
        out = [c] + [v[i] - c * R.unit[i] for i in others]
        return out

    def from_new(w):
        v = list(R.scale(w[0], R.unit))
        for t, i in enumerate(others):
            v[i] += w[t + 1]
        return R.reduce(v)

    basis_new = [from_new([int(t == s) for t in range(n)]) for s in range(n)]
    mult = [[to_new(R.mul(basis_new[a], basis_new[b])) for b in range(n)] for a in range(n)]
    orders = [R.orders[piv]] + [R.orders[i] for i in others]
    names = ["1"] + [R.basis[i] for i in others]
    out = StructureAlgebra(R.base, names, mult, [1] + [0] * (n - 1), orders)
    out.old_coordinates = basis_new  # new basis vectors in the old basis
    return out


def unit_first_bimodule(M: "Bimodule") -> "Bimodule":
    """M over unit_first(M.algebra), with actions rewritten in the new basis."""
    R = M.algebra
    R2 = unit_first(R)
    if R2 is R:
        return M
    left = [M._combo(M.left, v) for v in R2.old_coordinates]
    right = [M._combo(M.right, v) for v in R2.old_coordinates]
    return Bimodule(R2, M.carrier, left, right)


# ---------------------------------------------------------------------------
# text format


def _fmt_vec(v):
    return " ".join(str(x) for x in v)


def print_algebra(R: StructureAlgebra) -> str:
    lines = ["algebra v1", f"base {R.base}", "basis " + " ".join(R.basis)]
    lines.append("orders " + _fmt_vec(R.orders))
    lines.append("unit " + _fmt_vec(R.unit))
    for i in range(R.dim):
        for j in range(R.dim):
            if any(R.mult[i][j]):
                lines.append(f"mult {R.basis[i]} {R.basis[j]} = {_fmt_vec(R.mult[i][j])}")
    return "\n".join(lines) + "\n"


def _fmt_mat(M):
    return " | ".join(_fmt_vec(r) for r in M)


def print_bimodule(M: Bimodule) -> str:
    R = M.algebra
    lines = ["bimodule v1", f"base {R.base}", "basis " + " ".join(f"m{i}" for i in range(M.dim))]
    lines.append("orders " + _fmt_vec(M.orders))
    for side, mats in (("left", M.left), ("right", M.right)):
        for i in range(R.dim):
            lines.append(f"{side} {R.basis[i]} = {_fmt_mat(mats[i])}")
    return "\n".join(lines) + "\n"


class _Lines:
    """Tokenised lines with positions for error reporting."""

    def __init__(self, text: str):
        self.items = []
        for ln, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            toks = []
            col = 0
            for part in body.split(" "):
                if part:
                    toks.append((part, col + 1))
                col += len(part) + 1
            if toks:
                self.items.append((ln, toks))

    def ints(self, ln, toks):
        out = []
        for t, c in toks:
            try:
                out.append(int(t))
            except ValueError:
                raise ParseError(f"expected an integer, got {t!r}", ln, c) from None
        return out


def _parse_header(lines: _Lines, kind: str):
    if not lines.items:
        raise ParseError("empty document", 1, 1)
    ln, toks = lines.items[0]
    if [t for t, _ in toks] != [kind, "v1"]:
        raise ParseError(f"expected header '{kind} v1'", ln, toks[0][1])
    fields = {}
    for ln, toks in lines.items[1:]:
        key = toks[0][0]
        fields.setdefault(key, []).append((ln, toks))
    return fields


def _single(fields, key, required=True):
    if key not in fields:
        if required:
            raise ParseError(f"missing field '{key}'", 1, 1)
        return None
    entries = fields[key]
    if len(entries) > 1:
        ln, toks = entries[1]
        raise ParseError(f"duplicate field '{key}'", ln, toks[0][1])
    return entries[0]


def parse_algebra(text: str) -> StructureAlgebra:
    L = _Lines(text)
    fields = _parse_header(L, "algebra")
    allowed = {"base", "basis", "orders", "unit", "mult"}
    for key, entries in fields.items():
        if key not in allowed:
            ln, toks = entries[0]
            raise ParseError(f"unknown field '{key}'", ln, toks[0][1])
    ln, toks = _single(fields, "base")
    try:
        base = BaseRing.parse(" ".join(t for t, _ in toks[1:]))
    except ValueError as e:
        raise ParseError(str(e), ln, toks[1][1] if len(toks) > 1 else toks[0][1]) from None
    ln, toks = _single(fields, "basis")
    basis = [t for t, _ in toks[1:]]
    if len(set(basis)) != len(basis) or not basis:
        raise ParseError("basis names must be distinct and non-empty", ln, toks[0][1])
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    o = _single(fields, "orders", required=False)
    orders = None
    if o is not None:
        ln, toks = o
        orders = L.ints(ln, toks[1:])
        if len(orders) != n:
            raise ParseError("orders length differs from basis", ln, toks[0][1])
    ln, toks = _single(fields, "unit")
    unit = L.ints(ln, toks[1:])
    if len(unit) != n:
        raise ParseError("unit length differs from basis", ln, toks[0][1])
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    seen = set()
    for ln, toks in fields.get("mult", []):
        if len(toks) != 4 + n or toks[3][0] != "=":
            raise ParseError("expected 'mult a b = c_1 .. c_n'", ln, toks[0][1])
        a, b = toks[1], toks[2]
        for name, col in (a, b):
            if name not in index:
                raise ParseError(f"unknown basis element {name!r}", ln, col)
        key = (index[a[0]], index[b[0]])
        if key in seen:
            raise ParseError("duplicate product", ln, toks[0][1])
        seen.add(key)
        mult[key[0]][key[1]] = L.ints(ln, toks[4:])
    return StructureAlgebra(base, basis, mult, unit, orders)


def parse_bimodule(text: str, R: StructureAlgebra) -> Bimodule:
    L = _Lines(text)
    fields = _parse_header(L, "bimodule")
    allowed = {"base", "basis", "orders", "left", "right"}
    for key, entries in fields.items():
        if key not in allowed:
            ln, toks = entries[0]
            raise ParseError(f"unknown field '{key}'", ln, toks[0][1])
    ln, toks = _single(fields, "base")
    try:
        base = BaseRing.parse(" ".join(t for t, _ in toks[1:]))
    except ValueError as e:
        raise ParseError(str(e), ln, toks[0][1]) from None
    if base != R.base:
        raise ParseError(f"bimodule base {base} differs from algebra base {R.base}", ln, toks[1][1])
    ln, toks = _single(fields, "basis")
    d = len(toks) - 1
    o = _single(fields, "orders", required=False)
    if o is not None:
        ln, toks = o
        orders = L.ints(ln, toks[1:])
        if len(orders) != d:
            raise ParseError("orders length differs from basis", ln, toks[0][1])
    else:
        orders = [base.modulus] * d
    index = {b: i for i, b in enumerate(R.basis)}
    mats = {"left": [None] * R.dim, "right": [None] * R.dim}
    for side in ("left", "right"):
        for ln, toks in fields.get(side, []):
            if len(toks) < 3 or toks[2][0] != "=":
                raise ParseError(f"expected '{side} a = row | row ...'", ln, toks[0][1])
            name, col = toks[1]
            if name not in index:
                raise ParseError(f"unknown algebra basis element {name!r}", ln, col)
            rows, cur = [], []
            for t, c in toks[3:]:
                if t == "|":
                    rows.append(cur)
                    cur = []
                else:
                    cur.extend(L.ints(ln, [(t, c)]))
            rows.append(cur)
            if len(rows) != d or any(len(r) != d for r in rows):
                raise ParseError(f"action matrix must be {d}x{d}", ln, toks[0][1])
            if mats[side][index[name]] is not None:
                raise ParseError("duplicate action matrix", ln, toks[0][1])
            mats[side][index[name]] = rows
        for i, M in enumerate(mats[side]):
            if M is None:
                raise ParseError(f"missing {side} action for {R.basis[i]!r}", 1, 1)
    return Bimodule(R, FPModule.diagonal(base, orders), mats["left"], mats["right"])
