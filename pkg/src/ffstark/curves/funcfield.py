"""Arithmetic in K = F_r(t)[y]/(relations).

An element is stored as numerators ``a_J`` (polynomials over F_r) for the
monomials y^J together with a common monic denominator.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from math import comb

from ..exactalg import poly as P


class FunctionField:
    def __init__(self, cover):
        self.cover = cover
        self.F = cover.Fr
        emb = cover.emb
        self.kf = [P.normalize([emb(c) for c in f]) for _, f in cover.kummer]
        if cover.is_as:
            self.fn = P.normalize([emb(c) for c in cover.as_num])
            self.fd = P.normalize([emb(c) for c in cover.as_den])
        self.orders = list(cover.geo_orders) or [1]
        self.d = 1
        for m in self.orders:
            self.d *= m
        self.monomials = [tuple(J) for J in itertools.product(*[range(m) for m in self.orders])]
        self._mindex = {J: i for i, J in enumerate(self.monomials)}

    # ----------------------------------------------------------- constructors
    def elem(self, nums, den=(1,)):
        return FFElem(self, nums, den)

    def zero(self):
        return FFElem(self, [[] for _ in range(self.d)], [1])

    def one(self):
        return self.const(1)

    def const(self, c):
        nums = [[] for _ in range(self.d)]
        nums[0] = P.normalize([c])
        return FFElem(self, nums, [1])

    def from_poly(self, a, den=(1,)):
        nums = [[] for _ in range(self.d)]
        nums[0] = P.normalize(list(a))
        return FFElem(self, nums, den)

    def t(self):
        return self.from_poly([0, 1])

    def y(self, i=0):
        J = [0] * len(self.orders)
        J[i] = 1
        return self.monomial(tuple(J))

    def monomial(self, J, a=(1,)):
        nums = [[] for _ in range(self.d)]
        nums[self._mindex[tuple(J)]] = P.normalize(list(a))
        return FFElem(self, nums, [1])

    def mindex(self, J):
        return self._mindex[tuple(J)]

    # --------------------------------------------------------- structure data
    @cached_property
    def _kummer_table(self):
        """For J, K: (L, list of carry exponents) with y^J y^K = prod f_i^{c_i} y^L."""
        tab = {}
        for J in self.monomials:
            for K in self.monomials:
                L, carry = [], []
                for j, k, m in zip(J, K, self.orders):
                    L.append((j + k) % m)
                    carry.append((j + k) // m)
                tab[J, K] = (tuple(L), tuple(carry))
        return tab

    def _raw_mul(self, a, b):
        """Product of numerator vectors; returns (nums, extra_den)."""
        F = self.F
        d = self.d
        if self.cover.is_as:
            p = d
            raw = [[] for _ in range(2 * p - 1)]
            for i, ai in enumerate(a):
                if not ai:
                    continue
                for j, bj in enumerate(b):
                    if bj:
                        raw[i + j] = P.add(F, raw[i + j], P.mul(F, ai, bj))
            if all(not raw[k] for k in range(p, 2 * p - 1)):
                return raw[:p], [1]
            out = [P.mul(F, raw[s], self.fd) for s in range(p)]
            for k in range(p, 2 * p - 1):
                c = raw[k]
                if not c:
                    continue
                out[k - p + 1] = P.add(F, out[k - p + 1], P.mul(F, c, self.fd))
                out[k - p] = P.add(F, out[k - p], P.mul(F, c, self.fn))
            return out, list(self.fd)
        out = [[] for _ in range(d)]
        tab = self._kummer_table
        mons = self.monomials
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                L, carry = tab[mons[i], mons[j]]
                c = P.mul(F, ai, bj)
                for fi, k in zip(self.kf, carry):
                    for _ in range(k):
                        c = P.mul(F, c, fi)
                li = self._mindex[L]
                out[li] = P.add(F, out[li], c)
        return out, [1]

    # ----------------------------------------------------- linear algebra data
    def mult_matrix(self, x):
        """Matrix over F_r[t] (column j = x * y^{J_j} numerators) and its denominator."""
        cols = []
        dens = []
        for J in self.monomials:
            z = x * self.monomial(J)
            cols.append(z)
            dens.append(z.den)
        F = self.F
        D = [1]
        for dd in dens:
            D = _lcm(F, D, dd)
        M = [[None] * self.d for _ in range(self.d)]
        for j, z in enumerate(cols):
            s = P.divmod_(F, D, z.den)[0]
            for i in range(self.d):
                M[i][j] = P.mul(F, z.nums[i], s)
        return M, D

    def norm(self, x):
        """N_{K/F_r(t)}(x) as (numerator, denominator)."""
        if x.is_zero():
            raise ZeroDivisionError("norm of zero")
        F = self.F
        M, D = self.mult_matrix(x)
        num = poly_det(F, M)
        den = P.pow_(F, D, self.d)
        g = P.gcd(F, num, den)
        num = P.divmod_(F, num, g)[0]
        den = P.divmod_(F, den, g)[0]
        lc = den[-1]
        inv = F.inv(lc)
        return P.scale(F, num, inv), P.scale(F, den, inv)

    def inverse(self, x):
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero")
        F = self.F
        M, D = self.mult_matrix(x)
        # solve M z = D e_0 over F_r(t): z = adj(M) D e_0 / det M
        det = poly_det(F, M)
        nums = []
        for i in range(self.d):
            Mi = [row[:] for row in M]
            for r in range(self.d):
                Mi[r][i] = list(D) if r == 0 else []
            nums.append(poly_det(F, Mi))
        return FFElem(self, nums, det)

    # --------------------------------------------------------------- G-action
    @cached_property
    def _zetas(self):
        c = self.cover
        return [c.emb(c.kummer_root_of_unity(m)) for m, _ in c.kummer]

    def act(self, g, x):
        """Action of g in G (exponent tuple) on x."""
        c = self.cover
        F = self.F
        nums = [list(a) for a in x.nums]
        k = len(c.geo_orders)
        geo = g[:k]
        if c.is_kummer and any(geo):
            for idx, J in enumerate(self.monomials):
                if not nums[idx]:
                    continue
                e = 1
                for z, s, j in zip(self._zetas, geo, J):
                    e = F.mul(e, F.pow(z, s * j))
                nums[idx] = P.scale(F, nums[idx], e)
        elif c.is_as and geo and geo[0] % c.p:
            s = F.from_int(geo[0] % c.p)
            new = [[] for _ in range(self.d)]
            for j, a in enumerate(nums):
                if not a:
                    continue
                # (y + s)^j = sum binom(j, i) s^{j-i} y^i
                for i in range(j + 1):
                    coef = F.mul(F.from_int(comb(j, i) % c.p), F.pow(s, j - i))
                    if coef:
                        new[i] = P.add(F, new[i], P.scale(F, a, coef))
            nums = new
        den = list(x.den)
        if c.n > 1 and g[-1] % c.n:
            times = (g[-1] % c.n) * c.Fq.m
            nums = [P.frob_coeffs(F, a, times) if a else [] for a in nums]
            den = P.frob_coeffs(F, den, times)
        return FFElem(self, nums, den)

    def frobenius_r(self, x, times=1):
        """Apply the r-power Frobenius to all coefficients (an automorphism of K over F_r(t)'s prime field)."""
        F = self.F
        k = times * F.m
        return FFElem(self, [P.frob_coeffs(F, a, k) if a else [] for a in x.nums], P.frob_coeffs(F, x.den, k))

    # ------------------------------------------------------------ derivatives
    def derivative(self, x):
        """d x / d t."""
        F = self.F
        # quotient rule on the common denominator: (N/D)' = N'/D - N D'/D^2
        N = FFElem(self, x.nums, [1])
        Dp = P.deriv(F, x.den)
        dN = self._derivative_integral(N)
        res = dN * self.from_poly([1], x.den)
        if P.normalize(Dp):
            res = res - N * self.from_poly(Dp, P.mul(F, x.den, x.den))
        return res

    def _derivative_integral(self, x):
        F = self.F
        c = self.cover
        out = self.zero()
        for idx, J in enumerate(self.monomials):
            a = x.nums[idx]
            if not a:
                continue
            term = self.monomial(J, P.deriv(F, a)) if P.normalize(P.deriv(F, a)) else self.zero()
            if any(J):
                if c.is_kummer:
                    # d(y^J)/dt = y^J * sum J_i f_i' / (m_i f_i)
                    s_num, s_den = [], [1]
                    for (m, _), fi, j in zip(c.kummer, self.kf, J):
                        if j == 0:
                            continue
                        coef = F.mul(F.from_int(j % c.p), F.inv(F.from_int(m % c.p)))
                        nu = P.scale(F, P.deriv(F, fi), coef)
                        s_num = P.add(F, P.mul(F, s_num, fi), P.mul(F, nu, s_den))
                        s_den = P.mul(F, s_den, fi)
                    term = term + self.monomial(J, a) * self.from_poly(s_num, s_den)
                else:
                    # dy/dt = -f', d(y^j) = j y^{j-1} dy
                    j = J[0]
                    fp_num = P.sub(F, P.mul(F, P.deriv(F, self.fn), self.fd), P.mul(F, self.fn, P.deriv(F, self.fd)))
                    fp_den = P.mul(F, self.fd, self.fd)
                    coef = F.neg(F.from_int(j % c.p))
                    term = term + self.monomial((j - 1,), P.scale(F, a, coef)) * self.from_poly(fp_num, fp_den)
            out = out + term
        return out


class FFElem:
    __slots__ = ("K", "nums", "den")

    def __init__(self, K, nums, den=(1,)):
        F = K.F
        self.K = K
        nums = [P.normalize(list(a)) for a in nums]
        den = P.normalize(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if all(not a for a in nums):
            self.nums = [[] for _ in nums]
            self.den = [1]
            return
        g = den
        for a in nums:
            if a:
                g = P.gcd(F, g, a)
                if P.deg(g) == 0:
                    break
        if P.deg(g) > 0:
            nums = [P.divmod_(F, a, g)[0] if a else [] for a in nums]
            den = P.divmod_(F, den, g)[0]
        lc = den[-1]
        if lc != 1:
            inv = F.inv(lc)
            nums = [P.scale(F, a, inv) for a in nums]
            den = P.scale(F, den, inv)
        self.nums = nums
        self.den = den

    def is_zero(self):
        return all(not a for a in self.nums)

    def __eq__(self, o):
        return isinstance(o, FFElem) and self.nums == o.nums and self.den == o.den

    def __hash__(self):
        return hash((tuple(tuple(a) for a in self.nums), tuple(self.den)))

    def __add__(self, o):
        F = self.K.F
        if o.den == self.den:
            return FFElem(self.K, [P.add(F, a, b) for a, b in zip(self.nums, o.nums)], self.den)
        L = _lcm(F, self.den, o.den)
        s1 = P.divmod_(F, L, self.den)[0]
        s2 = P.divmod_(F, L, o.den)[0]
        return FFElem(self.K, [P.add(F, P.mul(F, a, s1), P.mul(F, b, s2)) for a, b in zip(self.nums, o.nums)], L)

    def __neg__(self):
        F = self.K.F
        return FFElem(self.K, [P.neg(F, a) for a in self.nums], self.den)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        F = self.K.F
        if not isinstance(o, FFElem):
            return self.scale(o)
        nums, extra = self.K._raw_mul(self.nums, o.nums)
        den = P.mul(F, P.mul(F, self.den, o.den), extra)
        return FFElem(self.K, nums, den)

    def scale(self, c):
        F = self.K.F
        return FFElem(self.K, [P.scale(F, a, c) for a in self.nums], self.den)

    def inverse(self):
        return self.K.inverse(self)

    def __truediv__(self, o):
        return self * o.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.K.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def norm(self):
        return self.K.norm(self)

    def coeff(self, J):
        """Coefficient of y^J as (numerator, denominator)."""
        return self.nums[self.K.mindex(J)], self.den

    def to_record(self):
        return {"nums": [list(a) for a in self.nums], "den": list(self.den)}

    def __repr__(self):
        parts = []
        for J, a in zip(self.K.monomials, self.nums):
            if a:
                parts.append(f"{a}*y^{list(J)}")
        return "(" + " + ".join(parts or ["0"]) + f")/{self.den}"


def _lcm(F, a, b):
    g = P.gcd(F, a, b)
    return P.monic(F, P.mul(F, P.divmod_(F, a, g)[0], b))


def poly_det(F, M):
    """Determinant of a square matrix over F[t] (fraction-free elimination)."""
    n = len(M)
    if n == 0:
        return [1]
    A = [[P.normalize(list(x)) if x else [] for x in row] for row in M]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return []
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = P.sub(F, P.mul(F, A[i][j], A[k][k]), P.mul(F, A[i][k], A[k][j]))
                A[i][j] = P.divmod_(F, num, prev)[0] if num else []
            A[i][k] = []
        prev = A[k][k]
    d = A[n - 1][n - 1]
    if sign < 0:
        d = P.neg(F, d)
    return P.normalize(d)
