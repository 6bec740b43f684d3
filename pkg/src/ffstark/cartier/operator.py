"""Differentials h dt, the Cartier operator and its fixed points.

A differential is stored as its coefficient h in K (the separating element is t).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from ..curves.cover import Cover, CoverError
from ..curves.curve import Curve, Divisor
from ..curves.funcfield import FFElem
from ..curves.rr import riemann_roch_basis
from ..exactalg import poly as P
from ..exactalg.fields import embedding, field_of_size
from ..exactalg.intmat import nullspace_mod_p

MAX_P = 5


class CartierError(CoverError):
    pass


# ------------------------------------------------------------ linear algebra


def _common_den(F, elems):
    den = [1]
    for b in elems:
        g = P.gcd(F, den, b.den)
        den = P.monic(F, P.mul(F, P.divmod_(F, den, g)[0], b.den))
    return den


def _vectors(F, elems):
    den = _common_den(F, elems)
    flat = []
    for x in elems:
        s = P.divmod_(F, den, x.den)[0]
        flat.append([P.mul(F, a, s) if a else [] for a in x.nums])
    L = max((len(a) for fl in flat for a in fl), default=0)
    out = []
    for fl in flat:
        v = []
        for a in fl:
            v.extend(list(a) + [0] * (L - len(a)))
        out.append(v)
    return out


def _rank(F, rows):
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    n = len(M[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, a) for a in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


def coordinates(F, basis, x):
    """Coefficients of x on ``basis`` (elements of K), or None if x is not in the span."""
    if not basis:
        return [] if x.is_zero() else None
    vs = _vectors(F, list(basis) + [x])
    cols, rhs = vs[:-1], vs[-1]
    n = len(rhs)
    k = len(cols)
    # augmented system sum_i c_i cols[i] = rhs, rows indexed by coordinates
    M = [[cols[i][j] for i in range(k)] + [rhs[j]] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, a) for a in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][k] for i in range(r, n)):
        return None
    out = [0] * k
    for i, c in enumerate(piv_cols):
        out[c] = M[i][k]
    return out


# ------------------------------------------------------------ Cartier on h dt


def _root_split(F, p, num):
    """N_{p-1} with num = sum_i N_i(t)^p t^i."""
    out = []
    for k in range(p - 1, len(num), p):
        out.append(F.pth_root(num[k]))
    return P.normalize(out)


def cartier_apply(c_or_K, h: FFElem) -> FFElem:
    """C(h dt) = h_{p-1} dt where h = sum h_i^p t^i."""
    K = h.K
    c = K.cover
    F = K.F
    p = c.p
    if p > MAX_P:
        raise CartierError(f"p = {p} exceeds the supported bound {MAX_P}")
    out = K.zero()
    D = list(h.den)
    Dp1 = P.pow_(F, D, p - 1)
    for idx, J in enumerate(K.monomials):
        a = h.nums[idx]
        if not a:
            continue
        if c.is_as:
            j = J[0]
            for kk in range(j + 1):
                coef = comb(j, kk) * (-1) ** (j - kk) % p
                if not coef:
                    continue
                E = P.mul(F, D, P.pow_(F, K.fd, j - kk))
                num = P.mul(F, P.scale(F, a, F.from_int(coef)), P.pow_(F, K.fn, j - kk))
                num = P.mul(F, num, P.pow_(F, E, p - 1))
                N = _root_split(F, p, num)
                if N:
                    out = out + K.monomial((kk,), N) * K.from_poly([1], E)
        else:
            num = P.mul(F, a, Dp1)
            E = D
            Jp = []
            for (m, _), fi, j in zip(c.kummer, K.kf, J):
                jp = (j * pow(p, -1, m)) % m
                s = (j - p * jp) // m
                if s >= 0:
                    num = P.mul(F, num, P.pow_(F, fi, s))
                else:
                    num = P.mul(F, num, P.pow_(F, fi, (p - 1) * (-s)))
                    E = P.mul(F, E, P.pow_(F, fi, -s))
                Jp.append(jp)
            N = _root_split(F, p, num)
            if N:
                out = out + K.monomial(tuple(Jp) or (0,), N) * K.from_poly([1], E)
    return out


# ------------------------------------------------------------ spaces


@dataclass
class DifferentialSpace:
    cover: Cover
    S: list
    divisor: Divisor
    basis: list  # coefficients h of h dt
    curve: Curve = field(repr=False)

    @property
    def dimension(self):
        return len(self.basis)

    def coords(self, h):
        return coordinates(self.curve.F, self.basis, h)

    def to_dict(self):
        return {
            "S": [v.label() for v in self.S],
            "dimension": self.dimension,
            "basis": [{"h": b.to_record(), "wrt": "dt"} for b in self.basis],
        }


def omega_basis(c: Cover, S=(), X: Curve | None = None) -> DifferentialSpace:
    """Omega(-[S]) = {h dt : div(h) + div(dt) >= -[S]}."""
    X = X or Curve(c)
    if c.p > MAX_P:
        raise CartierError(f"p = {c.p} exceeds the supported bound {MAX_P}")
    S = sorted(set(S), key=lambda v: v.sort_key())
    SK = X.places_above_set(S)
    W = X.canonical_divisor()
    D = W + X.reduced_divisor(SK) if SK else W
    basis = riemann_roch_basis(X, D).basis
    g = X.genus
    expect = g + sum(w.degree for w in SK) - 1 if SK else g
    if len(basis) != expect:
        raise CartierError(f"dim Omega(-[S]) = {len(basis)}, expected {expect}")
    return DifferentialSpace(c, S, D, list(basis), X)


@dataclass
class CartierMatrix:
    space: DifferentialSpace
    A: list  # A[j][i] = coordinate j of C(omega_i)

    @property
    def F(self):
        return self.space.curve.F

    @property
    def p(self):
        return self.space.cover.p

    def twist(self, k=1):
        """Entrywise p^-k-th roots."""
        F = self.F
        out = self.A
        for _ in range(k):
            out = [[F.pth_root(a) for a in row] for row in out]
        return out

    def power(self, k):
        """Matrix of C^k: A A^(1/p) ... A^(1/p^(k-1))."""
        F = self.F
        d = len(self.A)
        M = [[int(i == j) for j in range(d)] for i in range(d)]
        for i in range(k):
            B = self.twist(i)
            M = [[F.sum(F.mul(M[a][t], B[t][b]) for t in range(d)) for b in range(d)] for a in range(d)]
        return M

    def semisimple_rank(self):
        d = len(self.A)
        if d == 0:
            return 0
        return _rank(self.F, self.power(d))

    def to_dict(self):
        return {"matrix": self.A, "semilinearity": "p^-1", "field": self.F.q}


def cartier_matrix(space: DifferentialSpace, check=True, seed=0) -> CartierMatrix:
    F = space.curve.F
    cols = []
    for b in space.basis:
        v = space.coords(cartier_apply(None, b))
        if v is None:
            raise CartierError("C does not preserve Omega(-[S])")
        cols.append(v)
    d = len(cols)
    A = [[cols[i][j] for i in range(d)] for j in range(d)]
    if check and d:
        rng = random.Random(seed)
        for b in space.basis[:3]:
            lam = rng.randrange(1, F.q)
            lhs = cartier_apply(None, b.scale(lam))
            rhs = cartier_apply(None, b).scale(F.pth_root(lam))
            if lhs != rhs:
                raise CartierError("semilinearity check failed")
    return CartierMatrix(space, A)


def hasse_witt(c: Cover, X: Curve | None = None) -> int:
    """gamma_K: the stable rank of C on the holomorphic differentials."""
    X = X or Curve(c)
    if X.genus == 0:
        return 0
    return cartier_matrix(omega_basis(c, (), X)).semisimple_rank()


# ------------------------------------------------------------ fixed points


@dataclass
class FixedSpace:
    space: DifferentialSpace
    level: int
    field_size: int
    vectors: list  # coordinate vectors over F_{r^level}
    semisimple_rank: int
    history: list = field(default_factory=list)

    @property
    def dimension(self):
        return len(self.vectors)

    def differentials(self):
        """The fixed differentials when they are defined over F_r (level 1)."""
        if self.level != 1:
            raise CartierError("fixed vectors live over an extension")
        out = []
        for v in self.vectors:
            h = self.space.curve.K.zero()
            for a, b in zip(v, self.space.basis):
                if a:
                    h = h + b.scale(a)
            out.append(h)
        return out

    def to_dict(self):
        return {
            "level": self.level,
            "dimension": self.dimension,
            "semisimple_rank": self.semisimple_rank,
            "history": self.history,
            "vectors": self.vectors,
        }


def _digits(FR, x, e):
    ds = FR.coeffs(x)
    return list(ds) + [0] * (e - len(ds))


def _fixed_vectors(CM: CartierMatrix, N: int):
    """F_p-basis of {mu in F_{r^N}^d : mu = A mu^(1/p)}."""
    F = CM.F
    p = CM.p
    d = len(CM.A)
    FR = field_of_size(F.q ** N)
    emb = embedding(F, FR)
    Ap = [[emb(F.pow(a, p)) for a in row] for row in CM.A]
    e = FR.m
    # mu = A mu^(1/p)  <=>  mu^(p) = A^(p) mu
    cols = []
    for i in range(d):
        for k in range(e):
            b = FR.from_coeffs([int(t == k) for t in range(e)])
            img = []
            for j in range(d):
                v = FR.sub(FR.pow(b, p) if i == j else 0, FR.mul(Ap[j][i], b))
                img.extend(_digits(FR, v, e))
            cols.append(img)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(d * e)]
    ker = nullspace_mod_p(rows, p, d * e) if rows else []
    out = []
    for z in ker:
        out.append([FR.from_coeffs(z[i * e : (i + 1) * e]) for i in range(d)])
    return FR, out


def fixed_space(space: DifferentialSpace, max_level=12, bound=2 ** 20, CM: CartierMatrix | None = None) -> FixedSpace:
    """Omega(-[S])^{C=1} over F_p, extending constants until its dimension is the semisimple rank."""
    CM = CM or cartier_matrix(space)
    target = CM.semisimple_rank()
    F = CM.F
    hist = []
    N = 1
    while N <= max_level and F.q ** N <= bound:
        FR, vecs = _fixed_vectors(CM, N)
        hist.append([N, len(vecs)])
        if len(vecs) == target:
            return FixedSpace(space, N, FR.q, vecs, target, hist)
        N += 1
    raise CartierError(f"fixed space did not stabilize (history {hist}, target {target})")


def verify_fixed(fs: FixedSpace) -> bool:
    """Each vector satisfies mu = A mu^(1/p) exactly."""
    CM = cartier_matrix(fs.space, check=False)
    F = CM.F
    FR = field_of_size(fs.field_size)
    emb = embedding(F, FR)
    d = len(CM.A)
    for v in fs.vectors:
        for j in range(d):
            s = FR.sum(FR.mul(emb(CM.A[j][i]), FR.pth_root(v[i])) for i in range(d))
            if s != v[j]:
                return False
    return True


# ------------------------------------------------------------ dlog witnesses


def dlog(f: FFElem) -> FFElem:
    K = f.K
    return K.derivative(f) * f.inverse()


def dlog_witness(space: DifferentialSpace, h: FFElem, extra_places=()):
    """f with df/f = h dt, searched among S-units and functions with divisor p(w - P0).

    Returns (f, div f) or None when the search fails at this level.
    """
    from ..picard.torsion import s_units

    X = space.curve
    K = X.K
    F = X.F
    p = space.cover.p
    SK = X.places_above_set(space.S)
    cands = []
    if SK:
        U = s_units(X, SK)
        cands.extend(U.functions)
    g = X.genus
    if g > 0:
        P0 = X.degree_one_place()
        for w in X.places_of_degree(1):
            if w == P0:
                continue
            B = riemann_roch_basis(X, Divisor.place(P0, p) - Divisor.place(w, p)).basis
            if B:
                cands.append(B[0])
    if not cands:
        return (K.one(), Divisor({})) if h.is_zero() else None
    logs = [space.coords(dlog(u)) for u in cands]
    target = space.coords(h)
    if target is None or any(v is None for v in logs):
        return None
    # solve sum a_i logs_i = target over F_p through digits
    e = F.m
    rows = []
    for j in range(len(target)):
        for k in range(e):
            rows.append([_digits(F, logs[i][j], e)[k] for i in range(len(cands))] + [_digits(F, target[j], e)[k]])
    from ..exactalg.intmat import solve_mod_p

    sol = solve_mod_p([r[:-1] for r in rows], [r[-1] for r in rows], p)
    if sol is None:
        return None
    f = K.one()
    for a, u in zip(sol, cands):
        a %= p
        if a > p // 2:
            a -= p  # t^(1-p) and t agree up to p-th powers; keep the smaller one
        if a:
            f = f * (u ** a)
    if dlog(f) != h:
        return None
    return f, X.divisor_of(f)
