"""Abelian and crossed extensions and their cocycles.

Matrices are dense lists of rows acting on coordinate column vectors.
An abelian extension 0 -> M -> E -> R -> 0 is stored with the inclusion
``incl`` (E.dim x M.dim) and projection ``proj`` (R.dim x E.dim).  A crossed
extension 0 -> M -> C1 -> C0 -> R -> 0 stores ``incl``, ``boundary`` and
``pi`` likewise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .algebra import Bimodule, StructureAlgebra, induced_bimodule
from .errors import NoSolution, NoSplitting, NotACocycle, NotSplit, PeifferViolation
from .exactmod import FPModule, is_split_surjection, sequence_is_exact, solve_in
from .hochschild import Cochain, HochschildComplex, bar_coboundary


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def _col(A, j):
    return [row[j] for row in A]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# abelian extensions


@dataclass
class AbelianExtension:
    R: StructureAlgebra
    M: Bimodule
    E: StructureAlgebra
    incl: list
    proj: list

    def validate(self):
        R, M, E = self.R, self.M, self.E
        hs = sequence_is_exact([M.carrier, E.module, R.module], [self.incl, self.proj])
        if any(not h.is_zero for h in hs):
            raise NoSolution("sequence is not exact", witness=[str(h) for h in hs])
        # proj is a unital algebra map
        if tuple(mat_vec(self.proj, E.unit)) != R.unit and R.reduce(mat_vec(self.proj, E.unit)) != R.unit:
            raise NoSolution("projection is not unital")
        for i in range(E.dim):
            for j in range(E.dim):
                lhs = R.reduce(mat_vec(self.proj, E.mult[i][j]))
                rhs = R.mul(R.reduce(_col(self.proj, i)), R.reduce(_col(self.proj, j)))
                if lhs != rhs:
                    raise NoSolution("projection is not multiplicative", witness=(i, j))
        # M . M = 0 and the induced actions
        for a in range(M.dim):
            for b in range(M.dim):
                if any(E.mul(E.reduce(_col(self.incl, a)), E.reduce(_col(self.incl, b)))):
                    raise NoSolution("product of two elements of M is not zero", witness=(a, b))
        for r in range(R.dim):
            e = _preimage(self.proj, R.basis_vector(r), E.module, R.module)
            for a in range(M.dim):
                m = M.reduce([int(k == a) for k in range(M.dim)])
                im = E.reduce(_col(self.incl, a))
                left = E.mul(e, im)
                right = E.mul(im, e)
                if left != E.reduce(mat_vec(self.incl, M.act_left(R.basis_vector(r), m))):
                    raise NoSolution("left action differs from the prescribed one", witness=(r, a))
                if right != E.reduce(mat_vec(self.incl, M.act_right(m, R.basis_vector(r)))):
                    raise NoSolution("right action differs from the prescribed one", witness=(r, a))
        return self


def _preimage(A, b, source: FPModule, target: FPModule):
    x = solve_in(A, list(b), target)
    if x is None:
        raise NoSolution("no preimage", witness=tuple(b))
    return tuple((v % o) if o else v for v, o in zip(x, source.orders()))


def check_2cocycle(f: Cochain):
    """Raise NotACocycle with the failing triple unless f is a 2-cocycle."""
    df = bar_coboundary(f)
    for t, v in df.values.items():
        if any(v):
            raise NotACocycle("xf(y,z) - f(xy,z) + f(x,yz) - f(x,y)z != 0", witness=t)


def semidirect_from_2cocycle(R: StructureAlgebra, M: Bimodule, f: Cochain) -> AbelianExtension:
    """E = M (+) R with (m,r)(n,s) = (ms + rn + f(r,s), rs)."""
    check_2cocycle(f)
    dm, dr = M.dim, R.dim
    n = dm + dr
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    for a in range(dm):
        for s in range(dr):
            col = M.right[s]
            for k in range(dm):
                mult[a][dm + s][k] = col[k][a]
            col = M.left[s]
            for k in range(dm):
                mult[dm + s][a][k] = col[k][a]
    for r in range(dr):
        for s in range(dr):
            v = f(r, s)
            for k in range(dm):
                mult[dm + r][dm + s][k] = v[k]
            for k, c in R.sparse_product(r, s):
                mult[dm + r][dm + s][dm + k] += c
    f11 = f.evaluate([R.unit, R.unit])
    unit = [-x for x in f11] + list(R.unit)
    names = [f"m{i}" for i in range(dm)] + list(R.basis)
    E = StructureAlgebra(R.base, names, mult, unit, list(M.orders) + list(R.orders))
    incl = [[int(i == j) for j in range(dm)] for i in range(n)]
    proj = [[int(i == dm + j) for i in range(n)] for j in range(dr)]
    return AbelianExtension(R, M, E, incl, proj).validate()


def extension_to_2cocycle(X: AbelianExtension, section=None) -> Cochain:
    """f(r, s) = h(r)h(s) - h(rs) for a base-linear section h of proj.

    Raises NoSplitting when proj has no base-linear section."""
    R, M, E = X.R, X.M, X.E
    if section is None:
        ok, U = is_split_surjection(X.proj, E.module, R.module)
        if not ok:
            raise NoSplitting("projection has no linear section", witness=None)
        section = U
    h = [E.reduce(_col(section, r)) for r in range(R.dim)]
    vals = {}
    for r in range(R.dim):
        for s in range(R.dim):
            prod_ = E.mul(h[r], h[s])
            hrs = [0] * E.dim
            for k, c in R.sparse_product(r, s):
                for t in range(E.dim):
                    hrs[t] += c * h[k][t]
            v = E.sub(prod_, E.reduce(hrs))
            vals[(r, s)] = _preimage(X.incl, v, M.carrier, E.module)
    return Cochain(R, M, 2, vals).clean()


def random_section(X_proj, source_mod: StructureAlgebra, target: StructureAlgebra, kernel_cols, rng):
    """A section of proj perturbed by a random map into the kernel."""
    ok, U = is_split_surjection(X_proj, source_mod.module, target.module)
    if not ok:
        raise NoSplitting("no linear section")
    out = [list(row) for row in U]
    for r in range(target.dim):
        for k in kernel_cols:
            c = rng.randrange(source_mod.base.modulus or 5)
            for i in range(len(out)):
                out[i][r] += c * k[i]
    return out


# ---------------------------------------------------------------------------
# crossed bimodules


@dataclass
class CrossedBimodule:
    C0: StructureAlgebra
    C1: Bimodule
    boundary: list  # C0.dim x C1.dim
    star: list = field(default_factory=list)

    def d(self, c):
        return self.C0.reduce(mat_vec(self.boundary, c))


def validate_crossed(C0: StructureAlgebra, C1: Bimodule, boundary) -> CrossedBimodule:
    """Check bimodule-map and Peiffer identities; emit the star product."""
    n0, n1 = C0.dim, C1.dim
    X = CrossedBimodule(C0, C1, [list(r) for r in boundary])
    basis1 = [C1.reduce([int(k == i) for k in range(n1)]) for i in range(n1)]
    for r in range(n0):
        er = C0.basis_vector(r)
        for i, c in enumerate(basis1):
            if X.d(C1.act_left(er, c)) != C0.mul(er, X.d(c)):
                raise PeifferViolation("boundary is not a left module map", witness=(r, i))
            if X.d(C1.act_right(c, er)) != C0.mul(X.d(c), er):
                raise PeifferViolation("boundary is not a right module map", witness=(i, r))
    star = [[None] * n1 for _ in range(n1)]
    for i, c in enumerate(basis1):
        for j, c2 in enumerate(basis1):
            a = C1.act_left(X.d(c), c2)
            b = C1.act_right(c, X.d(c2))
            if a != b:
                raise PeifferViolation("d(c)c' != c d(c')", witness=(i, j))
            star[i][j] = a
    # the star product is associative
    for i, j, k in product(range(n1), repeat=3):
        lhs = C1.act_left(X.d(star[i][j]), basis1[k])
        rhs = C1.act_left(X.d(basis1[i]), star[j][k])
        if lhs != rhs:
            raise PeifferViolation("star product is not associative", witness=(i, j, k))
    X.star = star
    return X


@dataclass
class CrossedExtension:
    R: StructureAlgebra
    M: Bimodule
    X: CrossedBimodule
    incl: list  # C1.dim x M.dim
    pi: list  # R.dim x C0.dim

    @property
    def C0(self):
        return self.X.C0

    @property
    def C1(self):
        return self.X.C1

    def validate(self):
        R, M, C0, C1 = self.R, self.M, self.C0, self.C1
        hs = sequence_is_exact(
            [M.carrier, C1.carrier, C0.module, R.module], [self.incl, self.X.boundary, self.pi]
        )
        if any(not h.is_zero for h in hs):
            raise NoSolution("crossed sequence is not exact", witness=[str(h) for h in hs])
        if R.reduce(mat_vec(self.pi, C0.unit)) != R.unit:
            raise NoSolution("pi is not unital")
        for i in range(C0.dim):
            for j in range(C0.dim):
                lhs = R.reduce(mat_vec(self.pi, C0.mult[i][j]))
                rhs = R.mul(R.reduce(_col(self.pi, i)), R.reduce(_col(self.pi, j)))
                if lhs != rhs:
                    raise NoSolution("pi is not multiplicative", witness=(i, j))
        for r in range(R.dim):
            c0 = _preimage(self.pi, R.basis_vector(r), C0.module, R.module)
            for a in range(M.dim):
                m = M.reduce([int(k == a) for k in range(M.dim)])
                im = C1.reduce(_col(self.incl, a))
                if C1.act_left(c0, im) != C1.reduce(mat_vec(self.incl, M.act_left(R.basis_vector(r), m))):
                    raise NoSolution("induced left action on M differs", witness=(r, a))
                if C1.act_right(im, c0) != C1.reduce(mat_vec(self.incl, M.act_right(m, R.basis_vector(r)))):
                    raise NoSolution("induced right action on M differs", witness=(r, a))
        return self


@dataclass
class Sections:
    p: list  # images p(e_r) in C0
    m: dict  # (r, s) -> m(e_r, e_s) in C1


def choose_sections(Y: CrossedExtension, rng: random.Random | None = None) -> Sections:
    """Linear sections p of pi (unital) and a bilinear lift m of
    p(r)p(s) - p(rs) through the boundary.  With ``rng`` both are perturbed
    at random (p by maps into ker pi, m by values in M)."""
    R, C0, C1 = Y.R, Y.C0, Y.C1
    ok, U = is_split_surjection(Y.pi, C0.module, R.module)
    if not ok:
        raise NoSplitting("pi has no linear section")
    p = [C0.reduce(_col(U, r)) for r in range(R.dim)]
    u = R.unit_index()
    kern = [Y.X.d(C1.reduce([int(k == i) for k in range(C1.dim)])) for i in range(C1.dim)]
    mod = C0.base.modulus or 5
    if rng is not None:
        for r in range(R.dim):
            for kv in kern:
                p[r] = C0.add(p[r], C0.scale(rng.randrange(mod), kv))
    if u is not None:
        p[u] = C0.unit
    # check the section is a homomorphism of base modules
    for r in range(R.dim):
        if R.orders[r] and any(C0.scale(R.orders[r], p[r])):
            raise NoSplitting("section ignores torsion")
    mcols = [_col(Y.X.boundary, i) for i in range(C1.dim)]
    Bmat = [[mcols[j][i] for j in range(C1.dim)] for i in range(C0.dim)]
    m = {}
    zero1 = (0,) * C1.dim
    for r in range(R.dim):
        for s in range(R.dim):
            prs = [0] * C0.dim
            for k, c in R.sparse_product(r, s):
                for t in range(C0.dim):
                    prs[t] += c * p[k][t]
            v = C0.sub(C0.mul(p[r], p[s]), C0.reduce(prs))
            if not any(v):
                x = zero1
            else:
                x = _preimage(Bmat, v, C1.carrier, C0.module)
            if rng is not None and (u is None or u not in (r, s)):
                for a in range(Y.M.dim):
                    c = rng.randrange(mod)
                    x = C1.add(x, [c * y for y in _col(Y.incl, a)]) if hasattr(C1, "add") else C1.reduce(
                        [xi + c * y for xi, y in zip(x, _col(Y.incl, a))])
            g = 0
            for o in (R.orders[r], R.orders[s]):
                from math import gcd

                g = gcd(g, o)
            if g and any(C1.reduce([g * xi for xi in x])):
                raise NoSplitting("boundary onto its image has no linear section", witness=(r, s))
            m[(r, s)] = C1.reduce(x)
    return Sections(p, m)


def _bilinear(R, table, x, y, dim, reduce):
    out = [0] * dim
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                if b:
                    v = table[(i, j)]
                    for k in range(dim):
                        out[k] += a * b * v[k]
    return reduce(out)


def crossed_to_3cocycle(Y: CrossedExtension, sections: Sections | None = None, rng=None) -> Cochain:
    """f(r,s,t) = p(r)m(s,t) - m(rs,t) + m(r,st) - m(r,s)p(t), pulled back to M."""
    S = sections or choose_sections(Y, rng)
    R, C1, M = Y.R, Y.C1, Y.M
    vals = {}
    for r, s, t in product(range(R.dim), repeat=3):
        er, es, et = R.basis_vector(r), R.basis_vector(s), R.basis_vector(t)
        a = C1.act_left(S.p[r], S.m[(s, t)])
        b = _bilinear(R, S.m, R.mul(er, es), et, C1.dim, C1.reduce)
        c = _bilinear(R, S.m, er, R.mul(es, et), C1.dim, C1.reduce)
        d = C1.act_right(S.m[(r, s)], S.p[t])
        v = C1.reduce([w - x + y - z for w, x, y, z in zip(a, b, c, d)])
        if any(v):
            vals[(r, s, t)] = _preimage(Y.incl, v, M.carrier, C1.carrier)
    return Cochain(R, M, 3, vals).clean()


# ---------------------------------------------------------------------------
# constructions of crossed extensions


def crossed_from_3cocycle(R: StructureAlgebra, M: Bimodule, f: Cochain) -> CrossedExtension:
    """A crossed extension 0 -> M -> Hom(R,M) -> N x_F R -> R -> 0 whose class
    is that of the normalized 3-cocycle f.

    Hom(R, M) is the induced bimodule, N = coker(mu) and F is the image of a
    2-cochain Phi with d(Phi) = mu o f."""
    if any(bar_coboundary(f).values.values()):
        raise NotACocycle("not a 3-cocycle", witness=next(iter(bar_coboundary(f).values)))
    u = R.unit_index()
    if u is None:
        raise NotSplit("unit of R must be a basis vector (see unit_first)")
    ind = induced_bimodule(R, M)
    H, N, mu = ind.bimodule, ind.cokernel, ind.mu
    a = M.dim
    HCH = HochschildComplex(R, H, 2, normalized=False)
    # mu o f as a 3-cochain with values in H
    muf = Cochain(R, H, 3, {t: H.reduce(mat_vec(mu, v)) for t, v in f.values.items()}).clean()
    target = HCH.to_vector(muf)
    d2 = HCH.complex.d(2).to_dense()
    phi_vec = solve_in(d2, target, HCH.complex.module(3))
    if phi_vec is None:
        raise NoSolution("mu o f is not a coboundary")
    Phi = HCH.from_vector(2, phi_vec)
    keep = [x * a + k for x in range(R.dim) if x != u for k in range(a)]

    def project(h):
        f1 = [h[u * a + k] for k in range(a)]
        corr = mat_vec(mu, f1)
        return N.reduce([h[g] - corr[g] for g in keep])

    F = Cochain(R, N, 2, {t: project(v) for t, v in Phi.values.items()}).clean()
    ext = semidirect_from_2cocycle(R, N, F)
    E = ext.E
    dn = N.dim
    # H as an E-bimodule through E -> R
    left, right = [], []
    for e in range(E.dim):
        r = R.reduce(_col(ext.proj, e))
        left.append(_combo_mats(H.left, r, H.dim))
        right.append(_combo_mats(H.right, r, H.dim))
    C1 = Bimodule(E, H.carrier, left, right)
    boundary = [[0] * H.dim for _ in range(E.dim)]
    for j in range(H.dim):
        hj = [int(k == j) for k in range(H.dim)]
        v = project(hj)
        for k in range(dn):
            boundary[k][j] = v[k]
    X = validate_crossed(E, C1, boundary)
    return CrossedExtension(R, M, X, [list(r) for r in mu], ext.proj).validate()


def _combo_mats(mats, coeffs, n):
    out = [[0] * n for _ in range(n)]
    for i, c in enumerate(coeffs):
        if c:
            for r in range(n):
                for s in range(n):
                    out[r][s] += c * mats[i][r][s]
    return out


def trivial_crossed(R: StructureAlgebra, M: Bimodule) -> CrossedExtension:
    """0 -> M -> M -(0)-> R -> R -> 0 (class zero)."""
    C1 = Bimodule(R, M.carrier, M.left, M.right)
    X = validate_crossed(R, C1, [[0] * M.dim for _ in range(R.dim)])
    return CrossedExtension(R, M, X, _identity(M.dim), _identity(R.dim)).validate()


def pullback_crossed(Y: CrossedExtension, P0: StructureAlgebra, f) -> tuple:
    """Pull Y back along a unital algebra map f: P0 -> C0 (matrix C0.dim x P0.dim).

    Returns (crossed extension over P0, (map P1 -> C1, f)).  P1 is the fibre
    product {(c, x) : d(c) = f(x)} presented on a basis of its lattice."""
    C0, C1 = Y.C0, Y.C1
    for i in range(P0.dim):
        for j in range(P0.dim):
            lhs = C0.reduce(mat_vec(f, P0.mult[i][j]))
            rhs = C0.mul(C0.reduce(_col(f, i)), C0.reduce(_col(f, j)))
            if lhs != rhs:
                raise NoSolution("f is not multiplicative", witness=(i, j))
    if C0.reduce(mat_vec(f, P0.unit)) != C0.unit:
        raise NoSolution("f is not unital")
    base = C0.base
    n1, np0 = C1.dim, P0.dim
    amb = n1 + np0
    p = base.modulus if base.is_field else None
    if p is None and base.modulus:
        raise NotSplit("pullbacks are implemented over fields and Z")
    # kernel of [boundary | -f] : C1 (+) P0 -> C0
    A = [[Y.X.boundary[i][j] for j in range(n1)] + [-f[i][j] for j in range(np0)] for i in range(C0.dim)]
    from .exactmod import SparseMatrix, integer_kernel, lattice_basis, nullspace_mod_p

    if p:
        ker = nullspace_mod_p(SparseMatrix.from_dense(A, amb), p)
        basis = [[v.get(i, 0) for i in range(amb)] for v in ker]
        orders = [p] * len(basis)
    else:
        basis = lattice_basis(integer_kernel(A, amb), amb)
        orders = [0] * len(basis)
    nb = len(basis)
    Bm = [[basis[j][i] for j in range(nb)] for i in range(amb)]
    amb_mod = FPModule.diagonal(base, [base.modulus] * amb)

    def coords(v):
        x = solve_in(Bm, v, amb_mod)
        if x is None:
            raise NoSolution("element outside the fibre product")
        return [(c % p) if p else c for c in x]

    def act(x_p0, v, side):
        c, y = v[:n1], v[n1:]
        fx = C0.reduce(mat_vec(f, x_p0))
        if side == "left":
            c2 = C1.act_left(fx, C1.reduce(c))
            y2 = P0.mul(x_p0, P0.reduce(y))
        else:
            c2 = C1.act_right(C1.reduce(c), fx)
            y2 = P0.mul(P0.reduce(y), x_p0)
        return list(c2) + list(y2)

    left, right = [], []
    for e in range(np0):
        ev = P0.basis_vector(e)
        left.append([list(r) for r in zip(*[coords(act(ev, b, "left")) for b in basis])] if nb else [])
        right.append([list(r) for r in zip(*[coords(act(ev, b, "right")) for b in basis])] if nb else [])
    P1 = Bimodule(P0, FPModule.diagonal(base, orders), left, right)
    boundary = [[basis[j][n1 + i] for j in range(nb)] for i in range(np0)]
    X = validate_crossed(P0, P1, boundary)
    incl = [coords(list(_col(Y.incl, a)) + [0] * np0) for a in range(Y.M.dim)]
    incl = [[incl[a][j] for a in range(Y.M.dim)] for j in range(nb)]
    pi = [[sum(Y.pi[r][k] * f[k][j] for k in range(C0.dim)) for j in range(np0)] for r in range(Y.R.dim)]
    out = CrossedExtension(Y.R, Y.M, X, incl, pi).validate()
    to_C1 = [[basis[j][i] for j in range(nb)] for i in range(n1)]
    return out, (to_C1, f)


# ---------------------------------------------------------------------------
# obstruction: the boundary-extension S


@dataclass
class BoundaryExtension:
    """S = C1 (+) R with the twisted product; ``to_C0`` is (x, r) -> d(x) + p(r)."""

    S: StructureAlgebra
    twist: Cochain | None
    g: Cochain
    sections: Sections
    to_C0: list


def solve_coboundary(f: Cochain, normalized: bool = True):
    """A 2-cochain g with d(g) = f, or None."""
    R, M = f.R, f.M
    HC = HochschildComplex(R, M, 2, normalized=normalized and f.is_normalized())
    target = HC.to_vector(f)
    x = solve_in(HC.complex.d(2).to_dense(), target, HC.complex.module(3))
    if x is None:
        return None
    return HC.from_vector(2, x)


def _is_split(Y: CrossedExtension) -> bool:
    ok, _ = is_split_surjection(Y.pi, Y.C0.module, Y.R.module)
    return ok


def delta_extension(Y: CrossedExtension, twist: Cochain | None = None,
                    sections: Sections | None = None) -> BoundaryExtension:
    """The algebra S realising a vanishing obstruction.

    With f the 3-cocycle of Y (for the chosen sections) and f = d(g), put
    n = m - g and multiply on C1 (+) R by

        (x, r)(y, s) = (x*y + p(r)y + x p(s) + n(r, s) + h(r, s), rs)

    where h is the optional 2-cocycle ``twist``.  Raises NoSolution (with
    the 3-cocycle as witness) when the class of Y is non-zero."""
    if not _is_split(Y):
        raise NotSplit("crossed extension is not split over the base")
    R, C0, C1 = Y.R, Y.C0, Y.C1
    if R.unit_index() is None:
        raise NotSplit("unit of R must be a basis vector")
    S_ = sections or choose_sections(Y)
    f = crossed_to_3cocycle(Y, S_)
    g = solve_coboundary(f)
    if g is None:
        raise NoSolution("the obstruction class is non-zero", witness=f)
    if twist is not None:
        check_2cocycle(twist)
    n1, dr = C1.dim, R.dim
    dim = n1 + dr
    basis1 = [C1.reduce([int(k == i) for k in range(n1)]) for i in range(n1)]
    incl = Y.incl

    def m_minus_g(r, s):
        gv = g(r, s)
        if twist is not None:
            gv = tuple(a - b for a, b in zip(gv, twist(r, s)))
        return C1.reduce([x - y for x, y in zip(S_.m[(r, s)], mat_vec(incl, gv))])

    mult = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(n1):
        for j in range(n1):
            mult[i][j][:n1] = list(Y.X.star[i][j])
        for s in range(dr):
            mult[i][n1 + s][:n1] = list(C1.act_right(basis1[i], S_.p[s]))
            mult[n1 + s][i][:n1] = list(C1.act_left(S_.p[s], basis1[i]))
    for r in range(dr):
        for s in range(dr):
            v = m_minus_g(r, s)
            row = list(v) + [0] * dr
            for k, c in R.sparse_product(r, s):
                row[n1 + k] += c
            mult[n1 + r][n1 + s] = row
    unit = [0] * n1 + list(R.unit)
    S = StructureAlgebra(C0.base, [f"c{i}" for i in range(n1)] + list(R.basis), mult, unit,
                         list(C1.orders) + list(R.orders))
    to_C0 = [[Y.X.boundary[k][i] for i in range(n1)] + [S_.p[r][k] for r in range(dr)] for k in range(C0.dim)]
    # the ladder: S -> C0 is an algebra map
    for i in range(dim):
        for j in range(dim):
            lhs = C0.reduce(mat_vec(to_C0, S.mult[i][j]))
            rhs = C0.mul(C0.reduce(_col(to_C0, i)), C0.reduce(_col(to_C0, j)))
            if lhs != rhs:
                raise NoSolution("S -> C0 is not multiplicative", witness=(i, j))
    return BoundaryExtension(S, twist, g, S_, to_C0)


def boundary_extensions_isomorphic(A: BoundaryExtension, B: BoundaryExtension, M: Bimodule, incl) -> bool:
    """Search all maps (x, r) -> (x + k(r), r) with k: R -> M for an algebra
    isomorphism S_A -> S_B (brute force; small examples only)."""
    SA, SB = A.S, B.S
    R_dim = len(A.sections.p)
    n1 = SA.dim - R_dim
    elems = M.carrier.orders()
    if any(o == 0 for o in elems):
        raise ValueError("brute force needs finite M")
    m_elems = list(product(*(range(o) for o in elems)))
    for ks in product(m_elems, repeat=R_dim):
        phi = [[int(i == j) for j in range(SA.dim)] for i in range(SA.dim)]
        for r in range(R_dim):
            v = mat_vec(incl, ks[r])
            for i in range(n1):
                phi[i][n1 + r] += v[i]
        ok = True
        for i in range(SA.dim):
            for j in range(SA.dim):
                lhs = SB.reduce(mat_vec(phi, SA.mult[i][j]))
                rhs = SB.mul(SB.reduce(_col(phi, i)), SB.reduce(_col(phi, j)))
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# free crossed bimodules


def truncated_free_algebra(base, ngens: int, length: int) -> StructureAlgebra:
    """T(V)/(words longer than ``length``) on ``ngens`` letters."""
    words = [()]
    for L in range(1, length + 1):
        words += [w for w in product(range(ngens), repeat=L)]
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            w = a + b
            if len(w) <= length:
                mult[i][j][index[w]] = 1
    names = ["1"] + ["".join(f"x{k}" for k in w) for w in words[1:]]
    return StructureAlgebra(base, names, mult, [1] + [0] * (n - 1))


def free_crossed_bimodule(C: StructureAlgebra, images) -> CrossedBimodule:
    """Free crossed bimodule on a map V -> C (``images[v]`` = image of the
    v-th basis vector of V): C (x) V (x) C modulo the Peiffer relations
    d(x) y - x d(y), over a prime field."""
    base = C.base
    if not base.is_field:
        raise NotSplit("free crossed bimodules are built over prime fields")
    p = base.modulus
    nC, nV = C.dim, len(images)
    if nV == 0:
        C1 = Bimodule(C, FPModule(base, 0), [[] for _ in range(nC)], [[] for _ in range(nC)])
        return validate_crossed(C, C1, [[] for _ in range(nC)])
    idx = [(a, v, b) for a in range(nC) for v in range(nV) for b in range(nC)]
    pos = {t: i for i, t in enumerate(idx)}
    N = len(idx)

    def left_mul(r, t):  # e_r . (a v b)
        a, v, b = t
        out = [0] * N
        for k, c in C.sparse_product(r, a):
            out[pos[(k, v, b)]] += c
        return out

    def right_mul(t, r):
        a, v, b = t
        out = [0] * N
        for k, c in C.sparse_product(b, r):
            out[pos[(a, v, k)]] += c
        return out

    def bd(t):
        a, v, b = t
        return C.mul(C.mul(C.basis_vector(a), tuple(images[v])), C.basis_vector(b))

    def act_left_elem(x, vec):
        out = [0] * N
        for r, c in enumerate(x):
            if c:
                for i, y in enumerate(vec):
                    if y:
                        w = left_mul(r, idx[i])
                        for k in range(N):
                            out[k] += c * y * w[k]
        return out

    def act_right_elem(vec, x):
        out = [0] * N
        for r, c in enumerate(x):
            if c:
                for i, y in enumerate(vec):
                    if y:
                        w = right_mul(idx[i], r)
                        for k in range(N):
                            out[k] += c * y * w[k]
        return out

    from .exactmod import Echelon

    ech = Echelon(p)
    unitvec = lambda i: [int(k == i) for k in range(N)]
    for i, t in enumerate(idx):
        for j, t2 in enumerate(idx):
            rel = [x - y for x, y in zip(act_left_elem(bd(t), unitvec(j)), act_right_elem(unitvec(i), bd(t2)))]
            ech.insert({k: x for k, x in enumerate(rel) if x % p}, (i, j))
    pivots = set(ech.rows)
    free = [k for k in range(N) if k not in pivots]

    def coords(vec):
        rem, _ = ech.reduce({k: x for k, x in enumerate(vec) if x % p})
        return [rem.get(k, 0) for k in free]

    left, right = [], []
    for r in range(nC):
        left.append([list(col) for col in zip(*[coords(left_mul(r, idx[k])) for k in free])] if free else [])
        right.append([list(col) for col in zip(*[coords(right_mul(idx[k], r)) for k in free])] if free else [])
    C1 = Bimodule(C, FPModule.diagonal(base, [p] * len(free)), left, right)
    boundary = [[bd(idx[k])[i] for k in free] for i in range(nC)]
    X = validate_crossed(C, C1, boundary)
    X.relation_rank = len(pivots)
    X.presentation_rank = N
    return X
