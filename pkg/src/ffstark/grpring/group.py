"""Finite abelian groups, their group rings over Z or Z/N, and polynomials
with group-ring coefficients."""

from __future__ import annotations

import itertools
from functools import cached_property


class AbGroup:
    """Product of cyclic groups Z/n_1 x ... x Z/n_k.

    Elements are exponent tuples; internally they are indexed in mixed radix
    (first factor varies slowest), so ``elements()[0]`` is the identity.
    """

    def __init__(self, orders, names=None):
        self.orders = tuple(int(n) for n in orders)
        if any(n < 1 for n in self.orders):
            raise ValueError("cyclic factor orders must be positive")
        self.names = tuple(names) if names else tuple(f"s{i}" for i in range(len(self.orders)))
        self.order = 1
        for n in self.orders:
            self.order *= n

    def __repr__(self):
        return f"AbGroup({list(self.orders)})"

    def __eq__(self, other):
        return isinstance(other, AbGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    @cached_property
    def _elems(self):
        return [tuple(e) for e in itertools.product(*[range(n) for n in self.orders])]

    @cached_property
    def _index(self):
        return {e: i for i, e in enumerate(self._elems)}

    def elements(self):
        return self._elems

    def index(self, g) -> int:
        return self._index[tuple(x % n for x, n in zip(g, self.orders))]

    def identity(self):
        return tuple(0 for _ in self.orders)

    def op(self, g, h):
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))

    def inverse(self, g):
        return tuple((-a) % n for a, n in zip(g, self.orders))

    def power(self, g, k):
        return tuple((a * k) % n for a, n in zip(g, self.orders))

    def generator(self, i):
        return tuple(int(j == i) for j in range(len(self.orders)))

    def elem_order(self, g):
        from math import gcd

        o = 1
        for a, n in zip(g, self.orders):
            k = n // gcd(n, a)
            o = o * k // gcd(o, k)
        return o

    @cached_property
    def mult_table(self):
        els = self._elems
        return [[self.index(self.op(a, b)) for b in els] for a in els]

    @cached_property
    def inv_table(self):
        return [self.index(self.inverse(a)) for a in self._elems]

    @property
    def exponent(self):
        from math import lcm

        e = 1
        for n in self.orders:
            e = lcm(e, n)
        return e

    def is_lgroup(self, ell):
        n = self.order
        while n % ell == 0:
            n //= ell
        return n == 1


class GroupRingElement:
    """Element of R[G] with R = Z (modulus 0) or R = Z/N (modulus N)."""

    __slots__ = ("G", "modulus", "c")

    def __init__(self, G: AbGroup, coeffs, modulus: int = 0):
        self.G = G
        self.modulus = int(modulus)
        if isinstance(coeffs, dict):
            vec = [0] * G.order
            for g, v in coeffs.items():
                vec[G.index(g)] += int(v)
        else:
            vec = [int(v) for v in coeffs]
            if len(vec) != G.order:
                raise ValueError("coefficient vector length must equal |G|")
        if self.modulus:
            vec = [v % self.modulus for v in vec]
        self.c = tuple(vec)

    # constructors
    @classmethod
    def zero(cls, G, modulus=0):
        return cls(G, [0] * G.order, modulus)

    @classmethod
    def scalar(cls, G, a, modulus=0):
        v = [0] * G.order
        v[0] = a
        return cls(G, v, modulus)

    @classmethod
    def group_elt(cls, G, g, a=1, modulus=0):
        v = [0] * G.order
        v[G.index(g)] = a
        return cls(G, v, modulus)

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement.scalar(self.G, int(other), self.modulus)
        if other.G != self.G or other.modulus != self.modulus:
            raise ValueError("base-ring or group mismatch")
        return other

    def __add__(self, o):
        o = self._check(o)
        return GroupRingElement(self.G, [a + b for a, b in zip(self.c, o.c)], self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.G, [-a for a in self.c], self.modulus)

    def __sub__(self, o):
        return self + (-self._check(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, int):
            return GroupRingElement(self.G, [a * o for a in self.c], self.modulus)
        o = self._check(o)
        T = self.G.mult_table
        out = [0] * self.G.order
        for i, a in enumerate(self.c):
            if a:
                row = T[i]
                for j, b in enumerate(o.c):
                    if b:
                        out[row[j]] += a * b
        return GroupRingElement(self.G, out, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = GroupRingElement.scalar(self.G, 1, self.modulus)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, o):
        if isinstance(o, int):
            o = GroupRingElement.scalar(self.G, o, self.modulus)
        return isinstance(o, GroupRingElement) and self.G == o.G and self.modulus == o.modulus and self.c == o.c

    def __hash__(self):
        return hash((self.G, self.modulus, self.c))

    def __repr__(self):
        return f"GroupRingElement({self.to_dict()}, mod={self.modulus})"

    def is_zero(self):
        return not any(self.c)

    def coeff(self, g):
        return self.c[self.G.index(g)]

    def augmentation(self):
        s = sum(self.c)
        return s % self.modulus if self.modulus else s

    def involution(self):
        """sigma -> sigma^{-1}."""
        inv = self.G.inv_table
        out = [0] * self.G.order
        for i, a in enumerate(self.c):
            out[inv[i]] = a
        return GroupRingElement(self.G, out, self.modulus)

    def reduce(self, N):
        return GroupRingElement(self.G, self.c, N)

    def lift(self):
        return GroupRingElement(self.G, self.c, 0)

    def translates(self):
        """Coefficient vectors of g * self for all g in G (a Z-spanning set of the ideal)."""
        T = self.G.mult_table
        out = []
        for gi in range(self.G.order):
            v = [0] * self.G.order
            row = T[gi]
            for j, b in enumerate(self.c):
                if b:
                    v[row[j]] += b
            out.append(v)
        return out

    def to_dict(self):
        """Serialized form ``{group: [...], coeffs: {"a,b": "int"}}``."""
        els = self.G.elements()
        return {
            "group": list(self.G.orders),
            "coeffs": {",".join(map(str, els[i])): str(v) for i, v in enumerate(self.c) if v},
        }

    @classmethod
    def from_dict(cls, d, modulus=0):
        G = AbGroup(d["group"])
        coeffs = {}
        for k, v in d["coeffs"].items():
            g = tuple(int(x) for x in k.split(",")) if k else ()
            coeffs[g] = int(v)
        return cls(G, coeffs, modulus)

    def pretty(self, names=None):
        names = names or self.G.names
        terms = []
        for g, a in zip(self.G.elements(), self.c):
            if not a:
                continue
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(names, g) if e
            )
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


class EquivariantPolynomial:
    """Polynomial in u with GroupRingElement coefficients (lowest degree first)."""

    def __init__(self, G: AbGroup, coeffs, modulus: int = 0):
        self.G = G
        self.modulus = modulus
        cs = [c if isinstance(c, GroupRingElement) else GroupRingElement(G, c, modulus) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return GroupRingElement.zero(self.G, self.modulus)

    def __eq__(self, o):
        return isinstance(o, EquivariantPolynomial) and [c.c for c in self.coeffs] == [c.c for c in o.coeffs]

    def __mul__(self, o):
        if not self.coeffs or not o.coeffs:
            return EquivariantPolynomial(self.G, [], self.modulus)
        out = [GroupRingElement.zero(self.G, self.modulus) for _ in range(len(self.coeffs) + len(o.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return EquivariantPolynomial(self.G, out, self.modulus)

    def __add__(self, o):
        n = max(len(self.coeffs), len(o.coeffs))
        return EquivariantPolynomial(self.G, [self[i] + o[i] for i in range(n)], self.modulus)

    def __sub__(self, o):
        n = max(len(self.coeffs), len(o.coeffs))
        return EquivariantPolynomial(self.G, [self[i] - o[i] for i in range(n)], self.modulus)

    def evaluate(self, u0: int) -> GroupRingElement:
        acc = GroupRingElement.zero(self.G, self.modulus)
        for c in reversed(self.coeffs):
            acc = acc * u0 + c
        return acc

    def evaluate_at(self, x: GroupRingElement) -> GroupRingElement:
        """Substitute a group-ring element for u."""
        acc = GroupRingElement.zero(self.G, x.modulus)
        for c in reversed(self.coeffs):
            acc = acc * x + c.reduce(x.modulus) if x.modulus else acc * x + c
        return acc

    def reduce(self, N):
        return EquivariantPolynomial(self.G, [c.reduce(N) for c in self.coeffs], N)

    def map_coeffs(self, fn):
        return EquivariantPolynomial(self.G, [fn(c) for c in self.coeffs], self.modulus)

    def to_list(self):
        return [c.to_dict()["coeffs"] for c in self.coeffs]

    def pretty(self, names=None):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            s = c.pretty(names)
            if k == 0:
                parts.append(f"({s})")
            else:
                parts.append(f"({s})*u" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts) if parts else "0"


def grp_poly_eval(P: EquivariantPolynomial, u0: int) -> GroupRingElement:
    return P.evaluate(u0)


def tate_twist_map(n: int, q: int, modulus: int, Gbar: AbGroup, gamma_index: int):
    """The ring automorphism t_n of (Z/modulus)[Gbar]: gamma -> q^n gamma, identity on
    the other cyclic factors."""
    from math import gcd

    if gcd(q, modulus) != 1:
        raise ValueError("q must be invertible in the coefficient ring")
    N = Gbar.orders[gamma_index]
    qn = pow(q, n, modulus) if n >= 0 else pow(pow(q, -1, modulus), -n, modulus)
    if pow(qn, N, modulus) != 1 % modulus:
        raise ValueError("twist character is not defined on the finite gamma-quotient")
    els = Gbar.elements()

    def t(x: GroupRingElement) -> GroupRingElement:
        out = [0] * Gbar.order
        for i, a in enumerate(x.c):
            if a:
                j = els[i][gamma_index]
                out[i] = a * pow(qn, j, modulus)
        return GroupRingElement(Gbar, out, modulus)

    return t
