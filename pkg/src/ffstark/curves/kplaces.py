"""Places of K and local expansions.

A place w of K over F_r lying above an F_r-place P of F_r(t) is represented by
a geometric branch: a root alpha of P in a working field F' together with the
data fixing the local expansions of the y_i. Branches in one orbit of the
r^deg(P)-Frobenius (and of the reparametrization pi -> zeta_E pi for tame
ramification) give the same place; the orbit minimum is the canonical label.
"""

from __future__ import annotations

from functools import cached_property
from math import gcd, lcm

from ..exactalg import poly as P
from ..exactalg.fields import DEFAULT_BOUND, embedding, field_of_size
from .cover import INF_PLACE, CoverError, Place
from .series import INF, LSeries, compose_poly, nth_root_one_unit


class PlaceTooLarge(CoverError):
    pass


class KPlace:
    """A place of K over F_r."""

    __slots__ = ("K", "P", "key", "e", "f", "branch", "__weakref__")

    def __init__(self, K, Pr, key, e, f, branch):
        self.K = K
        self.P = Pr  # F_r-place: tuple of coefficients or None
        self.key = key
        self.e = e
        self.f = f  # residue degree over P
        self.branch = branch

    @property
    def base_degree(self):
        return 1 if self.P is None else len(self.P) - 1

    @property
    def degree(self):
        """Degree over F_r."""
        return self.base_degree * self.f

    @property
    def degree_q(self):
        """Degree over F_q."""
        return self.degree * self.K.cover.n

    @property
    def norm(self):
        return self.K.F.q ** self.degree

    def sort_key(self):
        if self.P is None:
            pk = (1, 0, ())
        else:
            pk = (len(self.P) - 1, 0, tuple(reversed(self.P)))
        return (self.degree, pk, self.key)

    def __eq__(self, o):
        return isinstance(o, KPlace) and self.P == o.P and self.key == o.key

    def __hash__(self):
        return hash((self.P, self.key))

    def __lt__(self, o):
        return self.sort_key() < o.sort_key()

    def label(self):
        return {"over": "inf" if self.P is None else list(self.P), "branch": list(self.key), "deg": self.degree}

    def __repr__(self):
        over = "inf" if self.P is None else list(self.P)
        return f"KPlace(over={over}, key={list(self.key)}, e={self.e}, deg={self.degree})"

    # convenience wrappers
    def valuation(self, x):
        return self.branch.valuation(x)

    def value(self, x):
        return self.branch.value(x)


class Branch:
    """Local expansion data at one geometric branch (working field ``Fw``)."""

    def __init__(self, K, Pr, Fw, alpha, kind, data):
        self.K = K
        self.P = Pr
        self.Fw = Fw
        self.alpha = alpha
        self.kind = kind  # "kummer", "as", "as-ram", "trivial"
        self.data = data
        self.emb = embedding(K.F, Fw)
        self._y_cache = {}
        self._poly_cache = {}

    @property
    def E(self):
        return self.data.get("E", 1)

    # ------------------------------------------------------------- t and x
    def _shift(self, a):
        """Coefficients (in F') of a(alpha + x), or of x^deg a(1/x) at infinity."""
        key = tuple(a)
        r = self._poly_cache.get(key)
        if r is not None:
            return r
        Fw = self.Fw
        ae = [self.emb(c) for c in a]
        if self.P is None:
            r = (list(reversed(P.normalize(ae))), -P.deg(ae))
        else:
            r = (P.normalize(P.compose(Fw, ae, [self.alpha, 1])), 0)
        self._poly_cache[key] = r
        return r

    def poly_series(self, a, rel):
        """Series of a(t) for a polynomial a over F_r."""
        Fw = self.Fw
        coeffs, shift = self._shift(a)
        if self.kind == "as-ram":
            X = self._x_series(rel + len(coeffs))
            # a(t) = x^shift * coeffs(x), x = pi^p X (finite) or the local 1/t at infinity
            S = compose_poly(Fw, coeffs, X)
            if shift:
                S = S * X.inverse_rel(rel + 2) ** (-shift) if shift < 0 else S * X ** shift
            return S
        E = self.E
        out = [0] * (E * (len(coeffs) - 1) + 1) if coeffs else []
        for i, c in enumerate(coeffs):
            out[E * i] = c
        return LSeries(Fw, E * shift, out)

    def _x_series(self, rel):
        """Local expansion of x = t - alpha (or 1/t at infinity) at a wildly ramified branch."""
        cached = self.data.get("_x")
        if cached is not None and cached.prec - cached.val >= rel:
            return cached
        Fw = self.Fw
        p = self.K.cover.p
        c = self.data["c"]
        lam = self.data["lambda"]
        hn, hd = self.data["h"]
        h0 = self.data["h0"]
        h0inv = Fw.inv(h0)
        denom = LSeries(Fw, 0, [1] + [0] * (c * (p - 1) - 1) + [Fw.neg(1)])
        X = LSeries(Fw, 0, [lam], 1)
        while X.prec < rel:
            target = min(rel, X.prec + p)
            T = X.shift(p)
            hs = compose_poly(Fw, hn, T) * compose_poly(Fw, hd, T).inverse_rel(target + 1)
            W = hs.scale(h0inv) * denom.inverse_rel(target + 1)
            W = W.truncate(target)
            R = nth_root_one_unit(W, c, target)
            X = R.scale(lam).truncate(target)
        X = X.shift(p)
        self.data["_x"] = X
        return X

    def t_series(self, rel):
        Fw = self.Fw
        if self.kind == "as-ram":
            X = self._x_series(rel + 2)
            if self.P is None:
                return X.inverse_rel(rel)
            return X + LSeries.const(Fw, self.alpha)
        E = self.E
        if self.P is None:
            return LSeries(Fw, -E, [1])
        return LSeries(Fw, 0, [self.alpha] + [0] * (E - 1) + [1])

    # ----------------------------------------------------------------- y's
    def y_series(self, i, rel):
        key = (i, rel)
        cached = self._y_cache.get(i)
        if cached is not None and cached.prec - cached.val >= rel:
            return cached
        Fw = self.Fw
        if self.kind == "kummer":
            m = self.data["m"][i]
            g = self.data["g"][i]
            cinv = Fw.inv(g[0])
            E = self.E
            G = [0] * (E * (len(g) - 1) + 1)
            for j, a in enumerate(g):
                G[E * j] = Fw.mul(a, cinv)
            W = LSeries(Fw, 0, G).truncate(rel)
            R = nth_root_one_unit(W, m, rel)
            S = R.scale(self.data["mu"][i]).shift(self.data["b"][i])
        elif self.kind == "as":
            S = self._as_unram_y(rel)
        elif self.kind == "as-ram":
            S = LSeries(Fw, -self.data["c"], [1])
        else:
            raise CoverError("no y for the trivial cover")
        self._y_cache[i] = S
        del key
        return S

    def _as_unram_y(self, rel):
        Fw = self.Fw
        K = self.K
        fs = self.poly_series(K.fn, rel) * self.poly_series(K.fd, rel).inverse_rel(rel)
        f0 = fs.coeff(0)
        h = fs - LSeries.const(Fw, f0)
        h = h.truncate(rel)
        # z^p - z = h, z = -(h + h^p + h^{p^2} + ...)
        z = LSeries.zero(Fw, rel)
        term = h
        while not term.is_zero() and term.val < rel:
            z = z - term
            term = term.frobenius(1).truncate(rel)
        z = z.truncate(rel)
        return z + LSeries.const(Fw, self.data["beta"])

    def monomial_series(self, J, rel):
        S = LSeries.const(self.Fw, 1)
        for i, j in enumerate(J):
            if j:
                S = S * self.y_series(i, rel) ** j
        return S

    # ------------------------------------------------------------- elements
    def series(self, x, rel):
        """Series of x with relative precision rel beyond the termwise lower bound."""
        Fw = self.Fw
        if x.is_zero():
            return LSeries.zero(Fw)
        total = None
        for J, a in zip(self.K.monomials, x.nums):
            if not a:
                continue
            A = self.poly_series(a, rel)
            T = A if not any(J) else A * self.monomial_series(J, rel)
            total = T if total is None else total + T
        D = self.poly_series(x.den, rel)
        if len(D.c) == 1 and D.prec >= INF:
            Dinv = LSeries(Fw, -D.val, [Fw.inv(D.c[0])])
        else:
            Dinv = D.inverse_rel(rel)
        return total * Dinv

    def valuation(self, x):
        if x.is_zero():
            return INF
        rel = 8
        while True:
            S = self.series(x, rel)
            if not S.is_zero():
                return S.val
            rel *= 2
            if rel > 1 << 14:
                raise CoverError("valuation did not stabilize")

    def value(self, x):
        """Residue of x at the branch (an element of F'); x must be regular there."""
        if x.is_zero():
            return 0
        rel = 8
        while True:
            S = self.series(x, rel)
            if not S.is_zero() or S.prec > 0:
                if not S.is_zero() and S.val < 0:
                    raise CoverError("pole at place")
                if S.prec > 0:
                    return S.coeff(0) if S.c else 0
            rel *= 2
            if rel > 1 << 14:
                raise CoverError("value did not stabilize")

    def dt_order(self):
        """v_w(dt / dpi)."""
        T = self.t_series(16)
        Dt = T.derivative()
        rel = 16
        while Dt.is_zero():
            rel *= 2
            Dt = self.t_series(rel).derivative()
        return Dt.val


# ----------------------------------------------------------------------------
# place enumeration


class PlaceFactory:
    """Builds and caches the places of K above each F_r-place."""

    def __init__(self, K, bound=DEFAULT_BOUND):
        self.K = K
        self.bound = bound
        self._above = {}

    @cached_property
    def _bad_r(self):
        """F_r-places where some layer is singular (finite ones as tuples)."""
        K = self.K
        c = K.cover
        F = K.F
        out = set()
        polys = list(K.kf)
        if c.is_as:
            polys.append(K.fd)
        for f in polys:
            if P.deg(f) > 0:
                for g, _ in P.factor(F, f)[1]:
                    out.add(tuple(g))
        return out

    def working_field(self, degree):
        size = self.K.F.q ** degree
        if size > self.bound:
            raise PlaceTooLarge(f"working field of size {size} exceeds bound {self.bound}")
        return field_of_size(size, self.bound)

    def above(self, Pr):
        """KPlaces above the F_r-place Pr (tuple or None), sorted."""
        Pr = None if Pr is None else tuple(Pr)
        if Pr in self._above:
            return self._above[Pr]
        c = self.K.cover
        if c.is_as:
            places = self._above_as(Pr)
        elif c.is_kummer:
            places = self._above_kummer(Pr)
        else:
            places = self._above_trivial(Pr)
        places.sort()
        self._above[Pr] = places
        return places

    def _root(self, Fw, Pr):
        if Pr is None:
            return None
        emb = embedding(self.K.F, Fw)
        rts = P.roots(Fw, [emb(a) for a in Pr])
        if not rts:
            raise CoverError("working field does not contain a root of the place")
        return min(rts)

    def _above_trivial(self, Pr):
        delta = 1 if Pr is None else len(Pr) - 1
        Fw = self.working_field(delta)
        alpha = self._root(Fw, Pr)
        br = Branch(self.K, Pr, Fw, alpha, "trivial", {"E": 1})
        return [KPlace(self.K, Pr, (), 1, 1, br)]

    # -- Kummer ----------------------------------------------------------------
    def _kummer_local(self, Pr):
        """(a_i, E, b_i, L) at Pr without building the working field."""
        K = self.K
        F = K.F
        c = K.cover
        delta = 1 if Pr is None else len(Pr) - 1
        a = []
        for f in K.kf:
            if Pr is None:
                a.append(-P.deg(f))
            else:
                a.append(_ord(F, f, list(Pr)))
        ms = [m for m, _ in c.kummer]
        E = 1
        for m, ai in zip(ms, a):
            E = lcm(E, m // gcd(m, ai))
        b = [E * ai // m for m, ai in zip(ms, a)]
        # residue symbols decide the degree L of F' over F_{r^delta}
        Fd = self.working_field(delta)
        alpha = self._root(Fd, Pr)
        L = 1
        for f, m, ai in zip(K.kf, ms, a):
            c0 = _leading_unit(Fd, embedding(F, Fd), f, alpha, ai, Pr is None)
            w = Fd.pow(c0, (Fd.q - 1) // m)
            k = 1
            x = w
            while x != 1:
                x = Fd.mul(x, w)
                k += 1
            L = lcm(L, k)
        return a, E, b, L, delta

    def _above_kummer(self, Pr):
        K = self.K
        F = K.F
        c = K.cover
        a, E, b, L, delta = self._kummer_local(Pr)
        Fw = self.working_field(delta * L)
        emb = embedding(F, Fw)
        alpha = self._root(Fw, Pr)
        ms = [m for m, _ in c.kummer]
        gs, mus, zs = [], [], []
        for f, m, ai in zip(K.kf, ms, a):
            g = _unit_poly(Fw, emb, f, alpha, ai, Pr is None)
            gs.append(g)
            c0 = g[0]
            lg = Fw.log(c0)
            if lg % gcd(m, Fw.q - 1):
                raise CoverError("m-th root missing in working field")
            # solve m * k = lg mod q-1
            mu = _root_of(Fw, c0, m)
            mus.append(mu)
            zs.append(emb(c.emb(c.kummer_root_of_unity(m))))
        zE = None
        if E > 1:
            # zeta_E from F_q
            zq = emb(c.emb(c.kummer_root_of_unity(_lcm_list(ms))))
            zE = Fw.pow(zq, _lcm_list(ms) // E)
        rdelta = F.q ** delta
        # all mu tuples
        import itertools

        tuples = [
            tuple(Fw.mul(mu, Fw.pow(z, k)) for mu, z, k in zip(mus, zs, ks))
            for ks in itertools.product(*[range(m) for m in ms])
        ]
        seen = set()
        out = []
        for tpl in sorted(tuples):
            if tpl in seen:
                continue
            orb = self._kummer_orbit(Fw, tpl, rdelta, zE, b)
            seen |= orb
            key = min(orb)
            f = len(orb) // E
            data = {"E": E, "m": ms, "a": a, "b": b, "g": gs, "mu": key}
            br = Branch(K, Pr, Fw, alpha, "kummer", data)
            out.append(KPlace(K, Pr, key, E, f, br))
        return out

    def _kummer_orbit(self, Fw, tpl, rdelta, zE, b):
        orb = {tpl}
        frontier = [tpl]
        while frontier:
            x = frontier.pop()
            nbrs = [tuple(Fw.pow(u, rdelta) for u in x)]
            if zE is not None:
                nbrs.append(tuple(Fw.mul(u, Fw.pow(zE, bi)) for u, bi in zip(x, b)))
            for y in nbrs:
                if y not in orb:
                    orb.add(y)
                    frontier.append(y)
        return orb

    def kummer_normalize(self, Pr, tpl):
        """Canonical key of the orbit of a mu tuple and the Frobenius exponent k
        (power of r^deg P) carrying tpl to a member of the orbit that agrees
        with the key up to reparametrization."""
        places = self.above(Pr)
        w0 = places[0]
        Fw = w0.branch.Fw
        data = w0.branch.data
        E = data["E"]
        c = self.K.cover
        zE = None
        if E > 1:
            ms = data["m"]
            emb = embedding(self.K.F, Fw)
            zq = emb(c.emb(c.kummer_root_of_unity(_lcm_list(ms))))
            zE = Fw.pow(zq, _lcm_list(ms) // E)
        rdelta = self.K.F.q ** (1 if Pr is None else len(Pr) - 1)
        # breadth-first over (frobenius count, rho count)
        x = tuple(tpl)
        for k in range(0, 64):
            y = x
            for _ in range(E):
                for w in places:
                    if w.key == y:
                        return w, k
                if zE is None:
                    break
                y = tuple(Fw.mul(u, Fw.pow(zE, bi)) for u, bi in zip(y, data["b"]))
            x = tuple(Fw.pow(u, rdelta) for u in x)
        raise CoverError("branch not found among places")

    # -- Artin-Schreier -------------------------------------------------------
    def _above_as(self, Pr):
        K = self.K
        F = K.F
        c = K.cover
        p = c.p
        delta = 1 if Pr is None else len(Pr) - 1
        if Pr is None:
            cpole = P.deg(K.fn) - P.deg(K.fd)
        else:
            cpole = _ord(F, K.fd, list(Pr)) - _ord(F, K.fn, list(Pr))
        if cpole > 0:
            return [self._as_ramified(Pr, delta, cpole)]
        # unramified: beta^p - beta = f(alpha)
        Fd = self.working_field(delta)
        alpha_d = self._root(Fd, Pr)
        fa = _rat_value(Fd, embedding(F, Fd), K.fn, K.fd, alpha_d, Pr is None)
        L = 1 if Fd.trace_to_prime(fa) == 0 else p
        Fw = self.working_field(delta * L)
        emb = embedding(F, Fw)
        alpha = self._root(Fw, Pr)
        fa = _rat_value(Fw, emb, K.fn, K.fd, alpha, Pr is None)
        betas = [b for b in _as_roots(Fw, fa)]
        rdelta = F.q ** delta
        seen = set()
        out = []
        for b0 in sorted(betas):
            if b0 in seen:
                continue
            orb = {b0}
            x = Fw.pow(b0, rdelta)
            while x not in orb:
                orb.add(x)
                x = Fw.pow(x, rdelta)
            seen |= orb
            key = (min(orb),)
            br = Branch(K, Pr, Fw, alpha, "as", {"E": 1, "beta": key[0]})
            out.append(KPlace(K, Pr, key, 1, len(orb), br))
        return out

    def _as_ramified(self, Pr, delta, cpole):
        K = self.K
        F = K.F
        p = K.cover.p
        # h(x) = x^c f(alpha + x) (finite) or x^c f(1/x) (infinity)
        Fd = self.working_field(delta)
        L = 1
        while True:
            Fw = self.working_field(delta * L)
            emb = embedding(F, Fw)
            alpha = self._root(Fw, Pr)
            hn, hd = _laurent_parts(Fw, emb, K.fn, K.fd, alpha, Pr is None, cpole)
            h0 = Fw.div(hn[0], hd[0])
            try:
                lam = _root_of(Fw, h0, cpole)
                break
            except CoverError:
                L += 1
        del Fd
        data = {"E": p, "c": cpole, "lambda": lam, "h": (hn, hd), "h0": h0}
        br = Branch(K, Pr, Fw, alpha, "as-ram", data)
        return KPlace(K, Pr, (), p, 1, br)


# ----------------------------------------------------------------------------
# helpers


def _lcm_list(xs):
    out = 1
    for x in xs:
        out = lcm(out, x)
    return out


def _ord(F, f, g):
    k = 0
    f = P.normalize(list(f))
    while True:
        q_, r = P.divmod_(F, f, g)
        if r:
            return k
        f = q_
        k += 1


def _unit_poly(Fw, emb, f, alpha, a, at_inf):
    """g with f(alpha + x) = x^a g(x) (finite) or f(1/x) = x^a g(x) (infinity)."""
    fe = [emb(c) for c in f]
    if at_inf:
        return list(reversed(P.normalize(fe)))
    s = P.normalize(P.compose(Fw, fe, [alpha, 1]))
    return s[a:]


def _leading_unit(Fw, emb, f, alpha, a, at_inf):
    return _unit_poly(Fw, emb, f, alpha, a, at_inf)[0]


def _rat_value(Fw, emb, num, den, alpha, at_inf):
    if at_inf:
        if P.deg(num) < P.deg(den):
            return 0
        return Fw.div(emb(num[-1]), emb(den[-1]))
    n = P.evaluate(Fw, [emb(c) for c in num], alpha)
    d = P.evaluate(Fw, [emb(c) for c in den], alpha)
    return Fw.div(n, d)


def _laurent_parts(Fw, emb, num, den, alpha, at_inf, c):
    """(hn, hd) polynomials in x with x^c f = hn / hd and hd(0) != 0."""
    ne = P.normalize([emb(a) for a in num])
    de = P.normalize([emb(a) for a in den])
    if at_inf:
        # f(1/x) = x^{dd - dn} rev(num)/rev(den); c = dn - dd
        return list(reversed(ne)), list(reversed(de))
    ns = P.normalize(P.compose(Fw, ne, [alpha, 1]))
    ds = P.normalize(P.compose(Fw, de, [alpha, 1]))
    k = next(i for i, x in enumerate(ds) if x)
    ds = ds[k:]
    # x^c f = x^{c-k} ns / ds ; k - ord(num) = c
    kn = next(i for i, x in enumerate(ns) if x)
    shift = c - k
    if shift >= 0:
        return [0] * shift + ns, ds
    ns = ns[-shift:]
    del kn
    return ns, ds


def _root_of(Fw, c0, m):
    """Least m-th root of c0 in Fw (raises if none)."""
    if c0 == 0:
        raise CoverError("root of zero")
    qm1 = Fw.q - 1
    lg = Fw.log(c0)
    gd = gcd(m, qm1)
    if lg % gd:
        raise CoverError("no root")
    # m k = lg mod qm1
    mm, qq, ll = m // gd, qm1 // gd, lg // gd
    k0 = (ll * pow(mm, -1, qq)) % qq if qq > 1 else 0
    roots = [Fw.exp((k0 + j * qq) % qm1) for j in range(gd)]
    return min(roots)


def _as_roots(Fw, a):
    """All beta in Fw with beta^p - beta = a."""
    p = Fw.p
    # F_p-linear map x -> x^p - x; brute force over a small affine search via linear algebra
    from ..exactalg.intmat import solve_mod_p

    m = Fw.m
    basis = [p ** i for i in range(m)]
    cols = [Fw.coeffs(Fw.sub(Fw.pow(b, p), b)) for b in basis]
    rows = [[cols[j][i] for j in range(m)] for i in range(m)]
    rhs = list(Fw.coeffs(a))
    sol = solve_mod_p(rows, rhs, p)
    if sol is None:
        return []
    b0 = Fw.from_coeffs(sol)
    return [Fw.add(b0, Fw.from_int(s)) for s in range(p)]


def base_places_r(K, degree):
    """F_r-places of F_r(t) of the given degree (tuples, with None for infinity)."""
    from ..exactalg.poly import irreducibles_of_degree

    out = [tuple(f) for f in irreducibles_of_degree(K.F, degree)]
    if degree == 1:
        out.append(None)
    return out


def r_places_over(K, v: Place):
    """F_r-places above a base F_q-place."""
    c = K.cover
    if v.is_infinite:
        return [None]
    if c.n == 1:
        return [tuple(v.poly)]
    f = [c.emb(a) for a in v.poly]
    return sorted((tuple(g) for g, _ in P.factor(K.F, f)[1]), key=lambda g: (len(g), tuple(reversed(g))))


def q_place_under(K, Pr):
    """The base F_q-place below an F_r-place."""
    c = K.cover
    if Pr is None:
        return INF_PLACE
    if c.n == 1:
        return Place(tuple(Pr))
    # minimal polynomial over F_q of a root: product of the q-Frobenius conjugates of Pr
    F = K.F
    g = list(Pr)
    acc = list(g)
    conj = P.frob_coeffs(F, g, c.Fq.m)
    while conj != g:
        acc = P.mul(F, acc, conj)
        conj = P.frob_coeffs(F, conj, c.Fq.m)
    pre = [c.emb.preimage(a) for a in acc]
    return Place(tuple(pre))
