"""Prime-power finite fields with table-driven arithmetic.

Elements are plain Python ints: the element ``c_0 + c_1 x + ... + c_{m-1} x^{m-1}``
of ``F_p[x]/(modulus)`` is encoded as ``c_0 + c_1 p + ... + c_{m-1} p^{m-1}``.
Zero is 0 and one is 1 in every field, and the prime subfield is exactly
``range(p)``.
"""

from __future__ import annotations

import itertools

import numpy as np
from functools import lru_cache

DEFAULT_BOUND = 2 ** 20


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    a = 0
    for c in reversed(ds):
        a = a * p + c
    return a


def _pmod_mul(a, b, mod, p):
    """Multiply digit lists a, b modulo the monic digit list ``mod`` over F_p."""
    m = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * mod[j]) % p
    prod = prod[:m] + [0] * (m - len(prod[:m]))
    return prod


def _power_table(gd, mod, p, m, order):
    """Encodings of gen^k for k < order, computed blockwise with numpy."""
    # matrix of multiplication by gen on F_p^m (column j = gen * x^j)
    M = np.zeros((m, m), dtype=np.int64)
    for j in range(m):
        e = [0] * m
        e[j] = 1
        M[:, j] = _pmod_mul(e, gd, mod, p)
    block = min(order, 256)
    vecs = np.zeros((m, block), dtype=np.int64)
    cur = np.zeros(m, dtype=np.int64)
    cur[0] = 1
    for k in range(block):
        vecs[:, k] = cur
        cur = M.dot(cur) % p
    # M^block
    Mb = np.eye(m, dtype=np.int64)
    base = M.copy()
    e = block
    while e:
        if e & 1:
            Mb = Mb.dot(base) % p
        base = base.dot(base) % p
        e >>= 1
    chunks = []
    done = 0
    while done < order:
        chunks.append(vecs)
        done += block
        vecs = Mb.dot(vecs) % p
    allv = np.concatenate(chunks, axis=1)[:, :order]
    weights = np.array([p ** i for i in range(m)], dtype=np.int64)
    return weights.dot(allv)


def _is_irreducible_prime(mod: list[int], p: int) -> bool:
    # Rabin's test over the prime field, digits low -> high.
    from . import poly as P

    F = _PrimeField.get(p)
    f = P.normalize(list(mod))
    return P.is_irreducible(F, f)


class FiniteField:
    """The field with ``p**m`` elements.

    Use :func:`fq_make` rather than instantiating directly; fields are cached
    so that equal parameters give the same object.
    """

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = modulus  # monic, low -> high, length m+1
        self._tables_built = False
        if m == 1:
            self.gen = _primitive_root(p)
            self._build_prime_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __reduce__(self):
        return (fq_make, (self.p, self.m))

    # ------------------------------------------------------------------ tables
    def _build_prime_tables(self):
        p = self.p
        exp = [0] * (p - 1)
        log = [None] * p
        x = 1
        for k in range(p - 1):
            exp[k] = x
            log[x] = k
            x = x * self.gen % p
        self._exp, self._log = exp, log
        self._tables_built = True

    def _build_tables(self):
        if self._tables_built:
            return
        p, m, q = self.p, self.m, self.q
        mod = list(self.modulus)
        gen = None
        order = q - 1
        pf = prime_factors(order)
        for cand in range(2, q):
            cd = _digits(cand, p, m)
            ok = True
            for r in pf:
                if self._slow_pow(cd, order // r) == [1] + [0] * (m - 1):
                    ok = False
                    break
            if ok:
                gen = cand
                break
        if gen is None:  # q == 2 handled by m == 1; keep the type checker quiet
            gen = 1
        self.gen = gen
        gd = _digits(gen, p, m)
        exp_arr = _power_table(gd, mod, p, m, order)
        log_arr = np.zeros(q, dtype=np.int64)
        log_arr[exp_arr] = np.arange(order, dtype=np.int64)
        c0 = exp_arr % p
        bump = exp_arr - c0 + (c0 + 1) % p
        zech_arr = log_arr[bump]
        exp = exp_arr.tolist()
        log = log_arr.tolist()
        log[0] = None
        zech = zech_arr.tolist()
        for k in range(order):
            if bump[k] == 0:
                zech[k] = None
        self._exp, self._log, self._zech = exp, log, zech
        self._tables_built = True

    def _slow_pow(self, digits, e):
        p, mod = self.p, list(self.modulus)
        result = [1] + [0] * (self.m - 1)
        base = digits
        while e:
            if e & 1:
                result = _pmod_mul(result, base, mod, p)
            base = _pmod_mul(base, base, mod, p)
            e >>= 1
        return result

    def primitive_element(self) -> int:
        if not self._tables_built:
            self._build_tables()
        return self.gen

    # -------------------------------------------------------------- arithmetic
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        if not self._tables_built:
            self._build_tables()
        la, lb = self._log[a], self._log[b]
        n = self.q - 1
        z = self._zech[(lb - la) % n]
        if z is None:
            return 0
        return self._exp[(la + z) % n]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        if self.m == 1:
            return self.p - a
        p = self.p
        out = 0
        mult = 1
        while a:
            a, r = divmod(a, p)
            out += ((p - r) % p) * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        if not self._tables_built:
            self._build_tables()
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if not self._tables_built:
            self._build_tables()
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        if self.m == 1:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.p)
        if not self._tables_built:
            self._build_tables()
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log of ``a`` to the base :meth:`primitive_element`."""
        if a == 0:
            raise ZeroDivisionError("log of zero")
        if not self._tables_built:
            self._build_tables()
        return self._log[a]

    def exp(self, k: int) -> int:
        if not self._tables_built:
            self._build_tables()
        return self._exp[k % (self.q - 1)]

    def frob(self, a: int, times: int = 1) -> int:
        """``a ** (p ** times)``."""
        return self.pow(a, self.p ** (times % self.m) if self.m > 1 else 1)

    def pth_root(self, a: int) -> int:
        return self.pow(a, self.q // self.p) if self.m > 1 else a

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self):
        return range(self.q)

    def coeffs(self, a: int) -> list[int]:
        return _digits(a, self.p, self.m)

    def from_coeffs(self, cs) -> int:
        cs = list(cs) + [0] * (self.m - len(cs))
        return _undigits([c % self.p for c in cs[: self.m]], self.p)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("order of zero")
        n = self.q - 1
        k = self.log(a) if self.m > 1 else self._log[a]
        from math import gcd

        return n // gcd(n, k)

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def in_subfield(self, a: int, k: int) -> bool:
        """Is ``a`` in the subfield with ``p**k`` elements?"""
        return self.pow(a, self.p ** k) == a

    # ---------------------------------------------------------------- helpers
    def sum(self, xs) -> int:
        s = 0
        for x in xs:
            s = self.add(s, x)
        return s

    def dot(self, xs, ys) -> int:
        s = 0
        for x, y in zip(xs, ys):
            if x and y:
                s = self.add(s, self.mul(x, y))
        return s

    def trace_to_prime(self, a: int) -> int:
        s = 0
        x = a
        for _ in range(self.m):
            s = self.add(s, x)
            x = self.pow(x, self.p)
        return s


class _PrimeField:
    _cache: dict[int, FiniteField] = {}

    @classmethod
    def get(cls, p):
        if p not in cls._cache:
            cls._cache[p] = FiniteField(p, 1, (0, 1))
        return cls._cache[p]


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    pf = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in pf):
            return g
    raise FieldError(f"no primitive root mod {p}")


@lru_cache(maxsize=None)
def _least_irreducible(p: int, m: int) -> tuple[int, ...]:
    if m == 1:
        return (0, 1)
    for code in range(p ** m):
        low = _digits(code, p, m)
        mod = low + [1]
        if low[0] == 0:
            continue
        if _is_irreducible_prime(mod, p):
            return tuple(mod)
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


_FIELDS: dict[tuple[int, int], FiniteField] = {}


def fq_make(p: int, m: int = 1, bound: int = DEFAULT_BOUND) -> FiniteField:
    """Return the field with ``p**m`` elements.

    The modulus is the least monic irreducible of degree ``m`` when the
    lower coefficients are read as the integer ``c_0 + c_1 p + ...``; this
    keeps element encodings reproducible across runs.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if p ** m > bound:
        raise FieldError(f"field size {p}^{m} exceeds bound {bound}")
    key = (p, m)
    if key not in _FIELDS:
        if m == 1:
            _FIELDS[key] = _PrimeField.get(p)
        else:
            _FIELDS[key] = FiniteField(p, m, _least_irreducible(p, m))
    return _FIELDS[key]


def field_of_size(q: int, bound: int = DEFAULT_BOUND) -> FiniteField:
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            n = q
            while n % p == 0:
                n //= p
                m += 1
            if n != 1:
                raise FieldError(f"{q} is not a prime power")
            return fq_make(p, m, bound)
    raise FieldError(f"{q} is not a prime power")


# ------------------------------------------------------------------ embeddings
_EMBED: dict[tuple, "Embedding"] = {}


class Embedding:
    """The field map ``small -> big`` sending the generator x of ``small`` to
    the least root (by encoding) of small's modulus inside ``big``."""

    def __init__(self, small: FiniteField, big: FiniteField):
        if small.p != big.p or big.m % small.m:
            raise FieldError(f"{small} does not embed in {big}")
        self.small, self.big = small, big
        if small.m == 1:
            self.image_of_x = None
            self._table = list(range(small.p))
        else:
            from . import poly as P

            modulus = [c for c in small.modulus]
            roots = P.roots(big, modulus)
            self.image_of_x = min(roots)
            self._table = None
        self._cache: dict[int, int] = {}
        self._inv: dict[int, int] | None = None

    def __call__(self, a: int) -> int:
        if self._table is not None:
            return a
        r = self._cache.get(a)
        if r is not None:
            return r
        B = self.big
        res = 0
        xp = 1
        for c in self.small.coeffs(a):
            if c:
                res = B.add(res, B.mul(c, xp))
            xp = B.mul(xp, self.image_of_x)
        self._cache[a] = res
        return res

    def preimage(self, b: int) -> int:
        """Inverse map on the image; raises if ``b`` is not in the subfield."""
        if self._table is not None:
            if b >= self.small.p:
                raise FieldError("element not in prime subfield")
            return b
        if self._inv is None:
            self._inv = {self(a): a for a in range(self.small.q)}
        try:
            return self._inv[b]
        except KeyError:
            raise FieldError("element not in subfield") from None


def embedding(small: FiniteField, big: FiniteField) -> Embedding:
    key = (small.p, small.m, big.m)
    if key not in _EMBED:
        _EMBED[key] = Embedding(small, big)
    return _EMBED[key]


def subfield_elements(F: FiniteField, k: int) -> list[int]:
    """Elements of ``F`` lying in its subfield of size ``p**k``."""
    if F.m % k:
        raise FieldError("not a subfield")
    return [a for a in range(F.q) if F.pow(a, F.p ** k) == a]


def iter_vectors(F: FiniteField, n: int):
    return itertools.product(range(F.q), repeat=n)
