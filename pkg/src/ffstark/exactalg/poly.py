"""Dense univariate polynomials over a :class:`FiniteField`.

Polynomials are lists of field elements, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).  The functions here are the
working layer; :class:`Polynomial` wraps them for the public API.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .fields import FiniteField, prime_factors

DEFAULT_SEED = 20240601


def normalize(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f) -> int:
    return len(f) - 1 if f else -1


def const(F, c):
    return [c] if c else []


def X():
    return [0, 1]


def add(F, f, g):
    n = max(len(f), len(g))
    out = [F.add(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]
    return normalize(out)


def sub(F, f, g):
    n = max(len(f), len(g))
    out = [F.sub(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]
    return normalize(out)


def neg(F, f):
    return [F.neg(c) for c in f]


def scale(F, f, c):
    if c == 0:
        return []
    return normalize([F.mul(a, c) for a in f])


def shift(f, k):
    return [0] * k + list(f) if f else []


def mul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    if F.m == 1:
        p = F.p
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] += a * b
        return normalize([c % p for c in out])
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return normalize(out)


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], f
    inv_lc = F.inv(g[-1])
    qt = [0] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c:
            c = F.mul(c, inv_lc)
            qt[k - dg] = c
            for j in range(dg + 1):
                if g[j]:
                    f[k - dg + j] = F.sub(f[k - dg + j], F.mul(c, g[j]))
    return normalize(qt), normalize(f[:dg])


def mod(F, f, g):
    return divmod_(F, f, g)[1]


def monic(F, f):
    if not f:
        return []
    return scale(F, f, F.inv(f[-1]))


def gcd(F, f, g):
    while g:
        f, g = g, mod(F, f, g)
    return monic(F, f)


def xgcd(F, f, g):
    """Return (d, s, t) with s f + t g = d monic gcd."""
    r0, r1 = list(f), list(g)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], s0, t0
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def invmod(F, f, m):
    d, s, _ = xgcd(F, f, m)
    if d != [1]:
        raise ZeroDivisionError("not invertible modulo")
    return mod(F, s, m)


def mulmod(F, f, g, m):
    return mod(F, mul(F, f, g), m)


def powmod(F, f, e, m):
    result = [1]
    base = mod(F, f, m)
    while e:
        if e & 1:
            result = mulmod(F, result, base, m)
        e >>= 1
        if e:
            base = mulmod(F, base, base, m)
    return result


def pow_(F, f, e):
    result = [1]
    base = list(f)
    while e:
        if e & 1:
            result = mul(F, result, base)
        e >>= 1
        if e:
            base = mul(F, base, base)
    return result


def deriv(F, f):
    return normalize([F.mul(F.from_int(i), f[i]) for i in range(1, len(f))])


def evaluate(F, f, x):
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def compose(F, f, g):
    acc = []
    for c in reversed(f):
        acc = add(F, mul(F, acc, g), const(F, c))
    return acc


def map_coeffs(f, phi):
    return normalize([phi(c) for c in f])


def frob_coeffs(F, f, times=1):
    return normalize([F.frob(c, times) for c in f])


def pth_root_poly(F, f):
    """g with g(x)^p = f(x); f must be a polynomial in x^p."""
    p = F.p
    if any(f[i] for i in range(len(f)) if i % p):
        raise ValueError("not a p-th power")
    return normalize([F.pth_root(f[i]) for i in range(0, len(f), p)])


# ---------------------------------------------------------------- irreducibility
def is_irreducible(F: FiniteField, f) -> bool:
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(F, f)
    q = F.q
    x = [0, 1]
    # x^(q^n) == x mod f
    xp = x
    powers = {}
    for i in range(1, n + 1):
        xp = powmod(F, xp, q, f)
        powers[i] = xp
    if sub(F, powers[n], x):
        return False
    for r in prime_factors(n):
        h = sub(F, powers[n // r], x)
        if gcd(F, f, h) != [1]:
            return False
    return True


def squarefree_decomposition(F, f):
    """Return list of (g, k) with f = lc * prod g^k, g squarefree, pairwise coprime."""
    f = monic(F, f)
    out = []
    if deg(f) < 1:
        return out
    p = F.p
    d = deriv(F, f)
    if not d:
        g = pth_root_poly(F, f)
        return [(h, k * p) for h, k in squarefree_decomposition(F, g)]
    c = gcd(F, f, d)
    w = divmod_(F, f, c)[0]
    i = 1
    while deg(w) > 0:
        y = gcd(F, w, c)
        z = divmod_(F, w, y)[0]
        if deg(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = divmod_(F, c, y)[0]
    if deg(c) > 0:
        g = pth_root_poly(F, c)
        out.extend((h, k * p) for h, k in squarefree_decomposition(F, g))
    return out


def distinct_degree(F, f):
    """f squarefree monic; returns list of (g_d, d)."""
    out = []
    q = F.q
    x = [0, 1]
    h = x
    d = 0
    f = list(f)
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, q, f)
        g = gcd(F, f, sub(F, h, x))
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(F, f, d, rng):
    """Split squarefree monic f, all of whose factors have degree d."""
    n = deg(f)
    if n == d:
        return [f]
    q = F.q
    while True:
        a = normalize([rng.randrange(F.q) for _ in range(n)])
        if deg(a) < 1:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^(2^(m d - 1))
            t = a
            s = a
            for _ in range(F.m * d - 1):
                t = mulmod(F, t, t, f)
                s = add(F, s, t)
            b = s
        else:
            b = sub(F, powmod(F, a, (q ** d - 1) // 2, f), [1])
        g = gcd(F, f, b)
        if 0 < deg(g) < n:
            h = divmod_(F, f, g)[0]
            return equal_degree(F, g, d, rng) + equal_degree(F, h, d, rng)


def factor(F, f, seed=DEFAULT_SEED):
    """Factor f into monic irreducibles: returns (lc, [(g, k), ...]) sorted."""
    f = normalize(list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lc = f[-1]
    rng = random.Random(seed)
    out = []
    for g, k in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d, rng):
                out.append((irr, k))
    merged: dict[tuple, int] = {}
    for g, k in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + k
    items = sorted(merged.items(), key=lambda gk: (len(gk[0]), list(reversed(gk[0]))))
    return lc, [(list(g), k) for g, k in items]


def roots(F, f, seed=DEFAULT_SEED):
    """Distinct roots of f in F, sorted by encoding."""
    f = normalize(list(f))
    if deg(f) < 1:
        return []
    f = monic(F, f)
    # restrict to the split part
    q = F.q
    h = sub(F, powmod(F, [0, 1], q, f), [0, 1])
    g = gcd(F, f, h)
    if deg(g) < 1:
        return []
    rng = random.Random(seed)
    lins = equal_degree(F, g, 1, rng)
    return sorted(F.neg(l[0]) for l in lins)


def poly_key(f):
    """Deterministic sort key: degree first, then coefficients high to low."""
    return (len(f), tuple(reversed(f)))


def monic_polys(F, d):
    """All monic polynomials of degree d, ordered by poly_key."""
    import itertools

    for cs in itertools.product(range(F.q), repeat=d):
        yield list(reversed(cs)) + [1]


_IRR_CACHE: dict = {}


def irreducibles_of_degree(F: FiniteField, d: int):
    """Complete sorted list of monic irreducibles of degree d over F."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    key = (F.p, F.m, d)
    if key in _IRR_CACHE:
        return _IRR_CACHE[key]
    if d == 1:
        out = [[F.neg(a), 1] if a else [0, 1] for a in range(F.q)]
        out.sort(key=poly_key)
    else:
        out = _irreducibles_via_roots(F, d)
    _IRR_CACHE[key] = out
    return out


def _irreducibles_via_roots(F, d):
    """Minimal polynomials of elements of the degree-d extension."""
    from .fields import fq_make, embedding

    if (F.q ** d) > 2 ** 22:
        return [f for f in monic_polys(F, d) if is_irreducible(F, f)]
    E = fq_make(F.p, F.m * d, bound=2 ** 22)
    emb = embedding(F, E)
    seen = set()
    out = []
    q = F.q
    for a in range(E.q):
        if a in seen:
            continue
        orbit = [a]
        b = E.pow(a, q)
        while b != a:
            orbit.append(b)
            b = E.pow(b, q)
        seen.update(orbit)
        if len(orbit) != d:
            continue
        mp = [1]
        for r in orbit:
            mp = mul(E, mp, [E.neg(r), 1])
        out.append([emb.preimage(c) for c in mp])
    out.sort(key=poly_key)
    return out


def necklace_count(q: int, d: int) -> int:
    from .intmat import mobius

    s = 0
    for e in range(1, d + 1):
        if d % e == 0:
            s += mobius(e) * q ** (d // e)
    return s // d


class Polynomial:
    """Immutable polynomial over a finite field (public wrapper)."""

    __slots__ = ("F", "c")

    def __init__(self, F: FiniteField, coeffs):
        self.F = F
        self.c = tuple(normalize([F.from_int(x) if F.m == 1 else x for x in coeffs]))

    @property
    def degree(self):
        return len(self.c) - 1 if self.c else -1

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.F is other.F and self.c == other.c

    def __hash__(self):
        return hash((self.F.q, self.c))

    def __repr__(self):
        return f"Polynomial({list(self.c)} over {self.F!r})"

    def __add__(self, o):
        return Polynomial(self.F, add(self.F, list(self.c), list(o.c)))

    def __sub__(self, o):
        return Polynomial(self.F, sub(self.F, list(self.c), list(o.c)))

    def __mul__(self, o):
        return Polynomial(self.F, mul(self.F, list(self.c), list(o.c)))

    def __divmod__(self, o):
        q, r = divmod_(self.F, list(self.c), list(o.c))
        return Polynomial(self.F, q), Polynomial(self.F, r)

    def __call__(self, x):
        return evaluate(self.F, self.c, x)

    def factor(self, seed=DEFAULT_SEED):
        lc, fs = factor(self.F, list(self.c), seed)
        return lc, [(Polynomial(self.F, g), k) for g, k in fs]

    def is_irreducible(self):
        return is_irreducible(self.F, list(self.c))


def poly_factor(f: Polynomial, seed=DEFAULT_SEED):
    """Multiset of (monic irreducible, multiplicity); raises on zero."""
    if f.degree < 0:
        raise ValueError("cannot factor the zero polynomial")
    return f.factor(seed)[1]
