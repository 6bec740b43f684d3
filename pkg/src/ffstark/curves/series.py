"""Truncated Laurent series over a finite field, with absolute precision.

``LSeries(F, val, coeffs, prec)`` is sum coeffs[i] pi^(val+i) + O(pi^prec).
Exact series (polynomials in pi) carry ``prec = INF``.
"""

from __future__ import annotations

INF = 10 ** 9


class PrecisionError(ArithmeticError):
    pass


class LSeries:
    __slots__ = ("F", "val", "c", "prec")

    def __init__(self, F, val, coeffs, prec=INF):
        self.F = F
        c = list(coeffs)
        if prec < INF:
            keep = max(0, prec - val)
            c = c[:keep]
        # strip leading zeros
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        val += i
        c = c[i:]
        while c and c[-1] == 0 and prec >= INF:
            c.pop()
        if not c:
            val = prec if prec < INF else INF
        self.val = val
        self.c = c
        self.prec = prec

    @classmethod
    def const(cls, F, a):
        return cls(F, 0, [a])

    @classmethod
    def monomial(cls, F, k, a=1):
        return cls(F, k, [a])

    @classmethod
    def zero(cls, F, prec=INF):
        return cls(F, 0, [], prec)

    def is_zero(self):
        """True if every known coefficient vanishes."""
        return not self.c

    def is_exact_zero(self):
        return not self.c and self.prec >= INF

    def coeff(self, k):
        if k >= self.prec:
            raise PrecisionError(f"coefficient {k} beyond precision {self.prec}")
        i = k - self.val
        if 0 <= i < len(self.c):
            return self.c[i]
        return 0

    def valuation(self):
        if not self.c:
            if self.prec >= INF:
                return INF
            raise PrecisionError("valuation not determined at this precision")
        return self.val

    def lead(self):
        return self.c[0]

    def __add__(self, o):
        F = self.F
        prec = min(self.prec, o.prec)
        if not self.c:
            return LSeries(F, o.val, o.c, prec)
        if not o.c:
            return LSeries(F, self.val, self.c, prec)
        lo = min(self.val, o.val)
        hi = max(self.val + len(self.c), o.val + len(o.c))
        if prec < INF:
            hi = min(hi, prec)
        out = [0] * max(0, hi - lo)
        add = F.add
        for i, a in enumerate(self.c):
            k = self.val + i - lo
            if k < len(out):
                out[k] = a
        for i, b in enumerate(o.c):
            k = o.val + i - lo
            if k < len(out) and b:
                out[k] = add(out[k], b)
        return LSeries(F, lo, out, prec)

    def __neg__(self):
        neg = self.F.neg
        return LSeries(self.F, self.val, [neg(a) for a in self.c], self.prec)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, a):
        if a == 0:
            return LSeries.zero(self.F, INF)
        mul = self.F.mul
        return LSeries(self.F, self.val, [mul(a, x) for x in self.c], self.prec)

    def shift(self, k):
        """Multiply by pi^k."""
        return LSeries(self.F, self.val + k, self.c, self.prec + k if self.prec < INF else INF)

    def __mul__(self, o):
        F = self.F
        if not self.c or not o.c:
            # result known to be O(pi^p) for p = lowest known bound
            va = self.val if self.c else self.prec
            vb = o.val if o.c else o.prec
            if (not self.c and self.prec >= INF) or (not o.c and o.prec >= INF):
                return LSeries.zero(F, INF)
            return LSeries.zero(F, min(va + vb, INF))
        prec = INF
        if self.prec < INF:
            prec = min(prec, self.prec + o.val)
        if o.prec < INF:
            prec = min(prec, o.prec + self.val)
        val = self.val + o.val
        n = len(self.c) + len(o.c) - 1
        if prec < INF:
            n = min(n, prec - val)
        if n <= 0:
            return LSeries.zero(F, prec)
        out = [0] * n
        logt, expt, zech = _tables(F)
        if logt is None:
            mul, add = F.mul, F.add
            for i, a in enumerate(self.c):
                if a == 0 or i >= n:
                    continue
                for j, b in enumerate(o.c):
                    if i + j >= n:
                        break
                    if b:
                        out[i + j] = add(out[i + j], mul(a, b))
        else:
            p = F.p
            qm1 = F.q - 1
            if p == F.q:
                # prime field: plain integer arithmetic is fastest
                for i, a in enumerate(self.c):
                    if a == 0 or i >= n:
                        continue
                    lim = min(len(o.c), n - i)
                    for j in range(lim):
                        b = o.c[j]
                        if b:
                            out[i + j] = (out[i + j] + a * b) % p
            else:
                la = [logt[a] if a else None for a in self.c]
                lb = [logt[b] if b else None for b in o.c]
                add = F.add
                for i, x in enumerate(la):
                    if x is None or i >= n:
                        continue
                    lim = min(len(lb), n - i)
                    for j in range(lim):
                        y = lb[j]
                        if y is not None:
                            out[i + j] = add(out[i + j], expt[(x + y) % qm1])
        return LSeries(F, val, out, prec)

    def inverse(self):
        if not self.c:
            raise PrecisionError("cannot invert a series with no known nonzero coefficient")
        F = self.F
        rel = self.prec - self.val if self.prec < INF else None
        if rel is None:
            if len(self.c) == 1:
                return LSeries(F, -self.val, [F.inv(self.c[0])])
            raise PrecisionError("inverse of an exact non-monomial series needs a precision")
        return self._inverse_rel(rel)

    def inverse_rel(self, rel):
        """Inverse with the given relative precision (for exact inputs)."""
        if not self.c:
            raise PrecisionError("cannot invert zero")
        if self.prec < INF:
            rel = min(rel, self.prec - self.val)
        return self._inverse_rel(rel)

    def _inverse_rel(self, rel):
        F = self.F
        a = self.c + [0] * max(0, rel - len(self.c))
        a = a[:rel]
        inv0 = F.inv(a[0])
        b = [0] * rel
        b[0] = inv0
        mul, add, neg = F.mul, F.add, F.neg
        for k in range(1, rel):
            s = 0
            for j in range(1, k + 1):
                if a[j] and b[k - j]:
                    s = add(s, mul(a[j], b[k - j]))
            b[k] = neg(mul(s, inv0))
        return LSeries(F, -self.val, b, -self.val + rel)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = LSeries.const(self.F, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def truncate(self, prec):
        return LSeries(self.F, self.val, self.c, min(prec, self.prec))

    def frobenius(self, times=1):
        """Coefficientwise x -> x^(p^times) together with pi -> pi^(p^times)."""
        F = self.F
        pk = F.p ** times
        cs = [F.frob(a, times) for a in self.c]
        out = []
        for i, a in enumerate(cs):
            out.append(a)
            if i < len(cs) - 1:
                out.extend([0] * (pk - 1))
        prec = self.prec * pk if self.prec < INF else INF
        return LSeries(F, self.val * pk, out, prec)

    def map_coeffs(self, fn):
        return LSeries(self.F, self.val, [fn(a) for a in self.c], self.prec)

    def derivative(self):
        F = self.F
        out = []
        for i, a in enumerate(self.c):
            k = self.val + i
            out.append(F.mul(a, F.from_int(k % F.p)) if a else 0)
        prec = self.prec - 1 if self.prec < INF else INF
        return LSeries(F, self.val - 1, out, prec)

    def __repr__(self):
        return f"LSeries(val={self.val}, c={self.c[:8]}{'...' if len(self.c) > 8 else ''}, prec={self.prec})"


def _tables(F):
    if F.q == F.p:
        return ([0], None, None)  # sentinel: prime field fast path
    F._build_tables()
    return F._log, F._exp, None


def poly_to_series(F, coeffs, emb=None):
    """Exact series of a polynomial in pi given by coefficients (low to high)."""
    if emb is not None:
        coeffs = [emb(c) for c in coeffs]
    return LSeries(F, 0, coeffs)


def compose_poly(F, coeffs, T: LSeries):
    """Horner evaluation of a polynomial (coefficients already in F) at a series T."""
    acc = LSeries.zero(F)
    for c in reversed(coeffs):
        acc = acc * T
        if c:
            acc = acc + LSeries.const(F, c)
    return acc


def nth_root_one_unit(W: LSeries, n: int, rel: int) -> LSeries:
    """Principal n-th root of a 1-unit W (W = 1 + O(pi)), p not dividing n."""
    F = W.F
    if W.val != 0 or W.c[0] != 1:
        raise ValueError("expected a 1-unit")
    ninv = F.inv(F.from_int(n % F.p))
    s = LSeries(F, 0, [1], rel)
    Wt = W.truncate(rel)
    for _ in range(max(2, rel.bit_length() + 2)):
        sn1 = s ** (n - 1)
        num = sn1 * s - Wt
        if num.is_zero():
            break
        corr = (num * sn1.inverse_rel(rel)).scale(ninv)
        s = (s - corr).truncate(rel)
    return s.truncate(rel)
