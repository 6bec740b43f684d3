"""Zeta oracle: brute-force point counts, the L-polynomial and modified zeta functions.

Counting is independent of the Frobenius bookkeeping in ``Cover.splitting``: affine
fibres are counted with numpy over F_{q^k} and only the finitely many bad fibres use
the place factory.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exactalg import poly as P
from ..exactalg.fields import DEFAULT_BOUND, embedding, field_of_size
from .cover import INF_PLACE, Cover, CoverError
from .curve import Curve


class VecField:
    """Vectorised arithmetic on the int encoding of a finite field."""

    def __init__(self, F):
        self.F = F
        F.log(1)  # force tables
        if F.m > 1:
            F._build_tables()
        self.p, self.m, self.Q = F.p, F.m, F.q
        self.exp = np.array(F._exp, dtype=np.int64)
        self.log = np.array([-1 if v is None else v for v in F._log], dtype=np.int64)

    def elements(self):
        return np.arange(self.Q, dtype=np.int64)

    def add(self, a, b):
        p, m = self.p, self.m
        if m == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out = np.zeros_like(a)
        scale = 1
        for _ in range(m):
            out += ((a // scale % p + b // scale % p) % p) * scale
            scale *= p
        return out

    def mul(self, a, b):
        la, lb = self.log[a], self.log[b]
        res = self.exp[(la + lb) % (self.Q - 1)]
        return np.where((la < 0) | (lb < 0), 0, res)

    def pow(self, a, e):
        la = self.log[a]
        res = self.exp[(la * e) % (self.Q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(la < 0, 0, res)

    def inv(self, a):
        return self.pow(a, self.Q - 2)

    def polyval(self, coeffs, x):
        acc = np.zeros_like(x)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), np.full_like(x, c))
        return acc

    def trace(self, a):
        s = np.zeros_like(a)
        x = a
        for _ in range(self.m):
            s = self.add(s, x)
            x = self.pow(x, self.p)
        return s


def geometric_cover(c: Cover) -> Cover:
    """The same equations over F_q with no constant-field layer."""
    kw = {}
    if c.kummer:
        kw["kummer"] = [(m, list(f)) for m, f in c.kummer]
    if c.is_as:
        kw["artin_schreier"] = (list(c.as_num), list(c.as_den))
    return Cover(c.q, **kw)


def _bad_polys(c: Cover):
    if c.kummer:
        return [list(f) for _, f in c.kummer]
    if c.is_as:
        return [list(c.as_den)]
    return []


def point_count(c: Cover, k: int, X0: Curve | None = None) -> int:
    """#X0(F_{q^k}) for the geometric curve X0 of c (equations over F_q)."""
    c0 = geometric_cover(c) if c.n > 1 else c
    X0 = X0 or Curve(c0)
    Fq = c0.Fq
    FQ = field_of_size(c0.q ** k)
    V = VecField(FQ)
    e = embedding(Fq, FQ)
    t = V.elements()
    good = np.ones(V.Q, dtype=bool)
    mult = np.ones(V.Q, dtype=np.int64)
    if c0.kummer:
        for m, f in c0.kummer:
            v = V.polyval([e(a) for a in f], t)
            good &= v != 0
            lg = V.log[v]
            mult *= np.where((lg >= 0) & (lg % m == 0), m, 0)
    elif c0.is_as:
        num = V.polyval([e(a) for a in c0.as_num], t)
        den = V.polyval([e(a) for a in c0.as_den], t)
        good &= den != 0
        val = V.mul(num, V.inv(np.where(den == 0, 1, den)))
        tr = V.trace(val)
        mult *= np.where(tr == 0, c0.p, 0)
    total = int(mult[good].sum())
    # bad fibres: all places above bad F_q-places and infinity
    bad = {None}
    for f in _bad_polys(c0):
        if P.deg(f) > 0:
            for g, _ in P.factor(Fq, f)[1]:
                bad.add(tuple(g))
    for Pr in bad:
        for w in X0.places.above(Pr):
            if k % w.degree == 0:
                total += w.degree
    return total


def _power_sums_from_poly(c, upto):
    """Power sums of the reciprocal roots of 1 + c_1 u + ... ."""
    s = [0] * (upto + 1)
    for j in range(1, upto + 1):
        cj = c[j] if j < len(c) else 0
        acc = -j * cj
        for i in range(1, j):
            ci = c[i] if i < len(c) else 0
            acc -= ci * s[j - i]
        s[j] = acc
    return s


def _poly_from_power_sums(s, deg):
    c = [Fraction(1)]
    for j in range(1, deg + 1):
        acc = Fraction(s[j])
        for i in range(1, j):
            acc += c[i] * s[j - i]
        c.append(-acc / j)
    out = []
    for x in c:
        if x.denominator != 1:
            raise CoverError("non-integral L-polynomial coefficient")
        out.append(int(x))
    return out


@dataclass
class ZetaData:
    q: int
    r: int
    n: int
    counts: list  # #X0(F_{q^k}), k = 1..K0
    L0: list  # L-polynomial of X0 over F_q
    L: list  # L-polynomial of K over F_r in U = u^n
    genus: int
    complete: bool  # degree certified by a vanishing tail

    def class_number(self, level=1):
        """#Pic^0 of K over F_{r^level}."""
        rts = _power_sums_from_poly(self.L, 2 * self.genus * level)
        if level == 1:
            return sum(self.L)
        Ls = _poly_from_power_sums([0] + [rts[level * k] for k in range(1, 2 * self.genus + 1)], 2 * self.genus)
        return sum(Ls)

    def place_counts(self, upto):
        """N_k = #X(F_{r^k}) for k = 1..upto."""
        s = _power_sums_from_poly(self.L, upto)
        return [self.r ** k + 1 - s[k] for k in range(1, upto + 1)]

    def zeta_series(self, prec):
        """Z_K(u) = L(u^n) / ((1 - u^n)(1 - r u^n)) as integer coefficients up to u^prec."""
        num = [0] * (prec + 1)
        for i, a in enumerate(self.L):
            if i * self.n <= prec:
                num[i * self.n] = a
        inv = [0] * (prec + 1)  # 1/((1-U)(1-rU)) in U = u^n
        for k in range(0, prec // self.n + 1):
            inv[k * self.n] = (self.r ** (k + 1) - 1) // (self.r - 1)
        return _series_mul(num, inv, prec)

    def to_dict(self):
        return {"q": self.q, "r": self.r, "n": self.n, "counts": self.counts, "L0": self.L0, "L": self.L, "genus": self.genus, "complete": self.complete}


def _series_mul(a, b, prec):
    out = [0] * (prec + 1)
    for i, x in enumerate(a[: prec + 1]):
        if x:
            for j, y in enumerate(b[: prec + 1 - i]):
                out[i + j] += x * y
    return out


def zeta_data(c: Cover, max_k=None, bound=DEFAULT_BOUND, extra=2) -> ZetaData:
    """L-polynomial of K from point counts over F_{q^k}."""
    c0 = geometric_cover(c) if c.n > 1 else c
    X0 = Curve(c0)
    kmax = 1
    while c0.q ** (kmax + 1) <= bound:
        kmax += 1
    gf = c.genus()
    K0 = min(kmax, max_k or max(2 * gf + extra, 3))
    counts = [point_count(c0, k, X0) for k in range(1, K0 + 1)]
    # Z(u) = exp(sum N_k u^k / k)
    z = [Fraction(1)] + [Fraction(0)] * K0
    for nn in range(1, K0 + 1):
        z[nn] = sum(counts[k - 1] * z[nn - k] for k in range(1, nn + 1)) / nn
    q = c0.q
    Lser = _series_mul([int(x) if x.denominator == 1 else x for x in z], [1, -(q + 1), q], K0)
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in Lser):
        raise CoverError("non-integral zeta coefficients")
    Lser = [int(x) for x in Lser]
    top = max(i for i, a in enumerate(Lser) if a)
    complete = top < K0
    if top % 2:
        raise CoverError(f"odd L-polynomial degree {top} from counts up to {K0}")
    g = top // 2
    L0 = Lser[: top + 1]
    # functional equation
    for i in range(g + 1):
        if L0[2 * g - i] != q ** (g - i) * L0[i]:
            raise CoverError("L-polynomial fails the functional equation")
    if c.n > 1:
        s = _power_sums_from_poly(L0, 2 * g * c.n)
        L = _poly_from_power_sums([0] + [s[c.n * k] for k in range(1, 2 * g + 1)], 2 * g)
    else:
        L = list(L0)
    return ZetaData(q=c.q, r=c.r, n=c.n, counts=counts, L0=L0, L=L, genus=g, complete=bool(complete))


def modified_zeta(X: Curve, S, Sigma, prec, zd: ZetaData | None = None):
    """Prod_{w|Sigma}(1 - (qu)^{deg w}) * Z_K(u) * Prod_{w|S}(1 - u^{deg w}) to precision u^prec.

    Degrees are over F_q.
    """
    c = X.cover
    zd = zd or zeta_data(c)
    ser = zd.zeta_series(prec)
    for v in S:
        for w in X.places_above(v):
            d = w.degree_q
            fac = [0] * (prec + 1)
            fac[0] = 1
            if d <= prec:
                fac[d] = -1
            ser = _series_mul(ser, fac, prec)
    for v in Sigma:
        for w in X.places_above(v):
            d = w.degree_q
            fac = [0] * (prec + 1)
            fac[0] = 1
            if d <= prec:
                fac[d] = -(c.q ** d)
            ser = _series_mul(ser, fac, prec)
    return ser


__all__ = ["VecField", "ZetaData", "geometric_cover", "modified_zeta", "point_count", "zeta_data", "INF_PLACE"]
