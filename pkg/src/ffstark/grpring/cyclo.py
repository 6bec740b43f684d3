"""Exact cyclotomic arithmetic in Q(zeta_e) = Q[x]/Phi_e and characters of
finite abelian groups."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .group import AbGroup, GroupRingElement


def _pdivmod(a, b):
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        k = len(a) - len(b)
        c = Fraction(a[-1]) / b[-1]
        q[k] = c
        for i, bi in enumerate(b):
            a[i + k] -= c * bi
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(e: int) -> tuple:
    """Integer coefficients of Phi_e, lowest degree first."""
    num = [-1] + [0] * (e - 1) + [1]  # x^e - 1
    for d in range(1, e):
        if e % d == 0:
            q, r = _pdivmod(num, list(cyclotomic_poly(d)))
            assert not any(r)
            num = q
    return tuple(int(c) for c in num)


class Cyclo:
    """Element of Q(zeta_e), stored as a reduced polynomial in zeta of degree < phi(e)."""

    __slots__ = ("e", "c")

    def __init__(self, e, coeffs):
        self.e = e
        phi = cyclotomic_poly(e)
        c = [Fraction(x) for x in coeffs]
        if len(c) >= len(phi):
            _, c = _pdivmod(c, list(phi))
        c = list(c) + [Fraction(0)] * (len(phi) - 1 - len(c))
        self.c = tuple(c)

    @classmethod
    def zeta_power(cls, e, k):
        k %= e
        return cls(e, [0] * k + [1])

    @classmethod
    def const(cls, e, a):
        return cls(e, [a])

    def __add__(self, o):
        o = self._coerce(o)
        return Cyclo(self.e, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.e, [-a for a in self.c])

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __mul__(self, o):
        o = self._coerce(o)
        return Cyclo(self.e, _pmul(list(self.c), list(o.c)))

    __rmul__ = __mul__

    def _coerce(self, o):
        if isinstance(o, Cyclo):
            if o.e != self.e:
                raise ValueError("cyclotomic fields differ")
            return o
        return Cyclo.const(self.e, o)

    def __eq__(self, o):
        if not isinstance(o, Cyclo):
            o = Cyclo.const(self.e, o)
        return self.e == o.e and self.c == o.c

    def __hash__(self):
        return hash((self.e, self.c))

    def is_zero(self):
        return not any(self.c)

    def is_integral(self):
        return all(x.denominator == 1 for x in self.c)

    def conj(self):
        """Complex conjugation zeta -> zeta^{-1}."""
        acc = Cyclo.const(self.e, 0)
        for k, a in enumerate(self.c):
            if a:
                acc = acc + Cyclo.zeta_power(self.e, -k) * a
        return acc

    def __repr__(self):
        return f"Cyclo({self.e}, {[str(x) for x in self.c]})"


class Character:
    """chi(g) = zeta_e^{sum_i k_i g_i e / n_i} with e = exp(G)."""

    def __init__(self, G: AbGroup, exps):
        self.G = G
        self.exps = tuple(int(k) % n for k, n in zip(exps, G.orders))
        self.e = G.exponent

    def exponent_of(self, g) -> int:
        return sum(k * x * (self.e // n) for k, x, n in zip(self.exps, g, self.G.orders)) % self.e

    def __call__(self, g) -> Cyclo:
        return Cyclo.zeta_power(self.e, self.exponent_of(g))

    def is_trivial(self):
        return not any(self.exps)

    def __eq__(self, o):
        return isinstance(o, Character) and self.G == o.G and self.exps == o.exps

    def __hash__(self):
        return hash((self.G, self.exps))

    def __repr__(self):
        return f"Character{self.exps}"

    def apply(self, x: GroupRingElement) -> Cyclo:
        """Extend chi linearly to Z[G] -> Z[zeta_e]."""
        vals = [0] * self.e
        for g, a in zip(self.G.elements(), x.c):
            if a:
                vals[self.exponent_of(g)] += a
        return Cyclo(self.e, vals)

    def idempotent(self):
        """e_chi = (1/|G|) sum chi(g) g^{-1}, as a dict g -> Cyclo."""
        n = self.G.order
        return {self.G.inverse(g): self(g) * Fraction(1, n) for g in self.G.elements()}


def characters(G: AbGroup):
    import itertools

    return [Character(G, ks) for ks in itertools.product(*[range(n) for n in G.orders])]


def cyclo_from_int_vector(e, vals):
    """sum_k vals[k] zeta^k."""
    return Cyclo(e, list(vals))
