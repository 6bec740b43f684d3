"""Riemann-Roch spaces L(D) = {x : div(x) >= -D} over F_r."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from ..exactalg import poly as P
from ..exactalg.fields import embedding
from ..exactalg.intmat import nullspace_mod_p
from .cover import CoverError
from .curve import Curve, Divisor


class RRBoundError(CoverError):
    pass


@dataclass
class RRSpace:
    divisor: Divisor
    basis: list
    curve: Curve = field(repr=False)

    @property
    def dimension(self):
        return len(self.basis)

    def to_dict(self):
        return {"divisor": self.divisor.to_list(), "dimension": self.dimension, "basis": [b.to_record() for b in self.basis]}


def _r_key(Pr):
    return (0, ()) if Pr is None else (len(Pr), tuple(reversed(Pr)))


def _ord(F, f, g):
    k = 0
    f = P.normalize(list(f))
    while True:
        q_, r = P.divmod_(F, f, g)
        if r:
            return k
        f = q_
        k += 1


def coefficient_bounds(X: Curve, D: Divisor, Pr):
    """Lower bounds B_J on v_P(a_J) for x = sum a_J y^J in L(D)."""
    K = X.K
    F = K.F
    c = X.cover
    ws = X.places.above(Pr)
    out = []
    if c.is_as:
        cpole = ws[0].e > 1
        if cpole:
            w = ws[0]
            cc = w.branch.data["c"]
            for (j,) in K.monomials:
                out.append(ceil(Fraction(-D[w] + j * cc, c.p)))
        else:
            b = min(-D[w] for w in ws)
            out = [b] * K.d
        return out
    if c.is_kummer:
        if Pr is None:
            a = [-P.deg(f) for f in K.kf]
        else:
            a = [_ord(F, f, list(Pr)) for f in K.kf]
        base = min(Fraction(-D[w], w.e) for w in ws)
        for J in K.monomials:
            s = sum(Fraction(j * ai, m) for j, ai, (m, _) in zip(J, a, c.kummer))
            out.append(ceil(base - s))
        return out
    return [min(-D[w] for w in ws)]


def riemann_roch_basis(X: Curve, D: Divisor, max_degree=40, check=True) -> RRSpace:
    """An F_r-basis of L(D)."""
    if abs(D.degree()) > max_degree:
        raise RRBoundError(f"divisor degree {D.degree()} exceeds bound {max_degree}")
    K = X.K
    F = K.F
    if D.degree() < 0:
        return RRSpace(D, [], X)
    rel_places = set(w.P for w in D.c)
    rel_places |= set(X.places._bad_r)
    rel_places.add(None)
    rel_places = sorted(rel_places, key=_r_key)
    bounds = {Pr: coefficient_bounds(X, D, Pr) for Pr in rel_places}
    finite = [Pr for Pr in rel_places if Pr is not None]
    # common denominator and per-monomial numerator factor
    den = [1]
    for Pr in finite:
        lo = min(bounds[Pr])
        if lo < 0:
            den = P.mul(F, den, P.pow_(F, list(Pr), -lo))
    unknowns = []  # (monomial index, t-degree, base numerator)
    for idx in range(K.d):
        num = [1]
        degsum = 0
        for Pr in finite:
            b = bounds[Pr][idx]
            lo = min(bounds[Pr])
            e = b - min(lo, 0)
            if e:
                num = P.mul(F, num, P.pow_(F, list(Pr), e))
            degsum += b * (len(Pr) - 1)
        top = -bounds[None][idx] - degsum
        for k in range(top + 1):
            unknowns.append((idx, k, P.mul(F, [0] * k + [1], num)))
    if not unknowns:
        return RRSpace(D, [], X)

    def elem_of(u):
        idx, _, num = u
        nums = [[] for _ in range(K.d)]
        nums[idx] = num
        return K.elem(nums, den)

    elems = [elem_of(u) for u in unknowns]
    # linear conditions at every place above a relevant base place
    p = F.p
    mr = F.m
    rows = []
    for Pr in rel_places:
        for w in X.places.above(Pr):
            target = -D[w]
            br = w.branch
            Fw = br.Fw
            emb = embedding(F, Fw)
            sers = []
            lo = None
            for x in elems:
                rel = 4
                while True:
                    S = br.series(x, rel)
                    if S.prec >= target:
                        break
                    rel = max(2 * rel, target - S.prec + rel + 2)
                sers.append(S)
                if S.c:
                    lo = S.val if lo is None else min(lo, S.val)
            if lo is None or lo >= target:
                continue
            basis_r = [emb(_unit_vector(F, i)) for i in range(mr)] if mr > 1 else [1]
            for k in range(lo, target):
                digits_cols = []
                for S in sers:
                    kap = S.coeff(k)
                    for b in basis_r:
                        digits_cols.append(Fw.coeffs(Fw.mul(b, kap)) if kap else [0] * Fw.m)
                for dpos in range(Fw.m):
                    row = [col[dpos] for col in digits_cols]
                    if any(row):
                        rows.append(row)
    nvars = len(elems) * mr
    if rows:
        null = nullspace_mod_p(rows, p, nvars)
    else:
        null = [[int(i == j) for j in range(nvars)] for i in range(nvars)]
    # back to F_r-vectors and extract an F_r-basis
    vecs = []
    for v in null:
        vec = []
        for u in range(len(elems)):
            vec.append(F.from_coeffs(v[u * mr : (u + 1) * mr]) if mr > 1 else v[u] % p)
        vecs.append(vec)
    chosen = _independent_subset(F, vecs)
    basis = []
    for vec in chosen:
        x = K.zero()
        for cu, e in zip(vec, elems):
            if cu:
                x = x + e.scale(cu)
        basis.append(x)
    basis = _echelon_basis(F, K, basis)
    if check:
        g = X.genus
        if D.degree() >= 2 * g - 1 and len(basis) != D.degree() + 1 - g:
            raise CoverError(f"dim L(D) = {len(basis)} but Riemann-Roch predicts {D.degree() + 1 - g}")
    return RRSpace(D, basis, X)


def _unit_vector(F, i):
    cs = [0] * F.m
    cs[i] = 1
    return F.from_coeffs(cs)


def _independent_subset(F, vecs):
    """Greedy F_r-independent subset."""
    rows = []  # reduced rows with pivots
    pivots = []
    chosen = []
    for v in vecs:
        w = list(v)
        for (pc, r) in zip(pivots, rows):
            if w[pc]:
                f = w[pc]
                w = [F.sub(a, F.mul(f, b)) for a, b in zip(w, r)]
        pc = next((i for i, a in enumerate(w) if a), None)
        if pc is None:
            continue
        inv = F.inv(w[pc])
        w = [F.mul(inv, a) for a in w]
        rows.append(w)
        pivots.append(pc)
        chosen.append(v)
    return chosen


def _flatten(F, K, x, den):
    """Coefficient vector of x over a fixed denominator."""
    s = P.divmod_(F, den, x.den)[0]
    out = []
    for a in x.nums:
        a = P.mul(F, a, s)
        out.append(a)
    return out


def _echelon_basis(F, K, basis):
    """Deterministic reduced echelon form of a list of elements sharing a denominator."""
    if not basis:
        return basis
    den = [1]
    for b in basis:
        g = P.gcd(F, den, b.den)
        den = P.monic(F, P.mul(F, P.divmod_(F, den, g)[0], b.den))
    flat = [_flatten(F, K, b, den) for b in basis]
    L = max((len(a) for fl in flat for a in fl), default=0)
    # key order: monomial index, then descending t-degree
    def vec(fl):
        out = []
        for a in fl:
            a = a + [0] * (L - len(a))
            out.extend(reversed(a))
        return out

    M = [vec(fl) for fl in flat]
    n = len(M[0])
    r = 0
    for cidx in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][cidx]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][cidx])
        M[r] = [F.mul(inv, a) for a in M[r]]
        for i in range(len(M)):
            if i != r and M[i][cidx]:
                f = M[i][cidx]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        r += 1
    out = []
    for row in M[:r]:
        nums = []
        for j in range(K.d):
            seg = row[j * L : (j + 1) * L]
            nums.append(P.normalize(list(reversed(seg))))
        out.append(K.elem(nums, den))
    return out
