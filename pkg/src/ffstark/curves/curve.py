"""The curve of a cover: places of K, divisors, evaluation and the G-action on places."""

from __future__ import annotations

from functools import cached_property
from math import gcd

from ..exactalg import poly as P
from ..exactalg.fields import DEFAULT_BOUND, embedding, field_of_size
from .cover import INF_PLACE, Cover, CoverError, Place
from .funcfield import FunctionField
from .kplaces import KPlace, PlaceFactory, base_places_r, q_place_under, r_places_over


class Divisor:
    """Finite formal sum of places of K."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {w: k for w, k in (coeffs or {}).items() if k}

    @classmethod
    def place(cls, w, k=1):
        return cls({w: k})

    def degree(self):
        return sum(k * w.degree for w, k in self.c.items())

    def support(self):
        return sorted(self.c)

    def __getitem__(self, w):
        return self.c.get(w, 0)

    def __add__(self, o):
        out = dict(self.c)
        for w, k in o.c.items():
            out[w] = out.get(w, 0) + k
        return Divisor(out)

    def __neg__(self):
        return Divisor({w: -k for w, k in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, n):
        return Divisor({w: n * k for w, k in self.c.items()})

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Divisor) and self.c == o.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def is_effective(self):
        return all(k >= 0 for k in self.c.values())

    def __ge__(self, o):
        return (self - o).is_effective()

    def to_list(self):
        return [[w.label(), k] for w, k in sorted(self.c.items())]

    def __repr__(self):
        return "Divisor(" + ", ".join(f"{k}*{w!r}" for w, k in sorted(self.c.items())) + ")"


class Curve:
    """Function-field view of a cover: K over F_r with its places."""

    def __init__(self, cover: Cover, bound=DEFAULT_BOUND):
        self.cover = cover
        self.K = FunctionField(cover)
        self.F = self.K.F
        self.places = PlaceFactory(self.K, bound)

    @cached_property
    def genus(self):
        return self.cover.genus()

    # ------------------------------------------------------------- places
    def places_above_r(self, Pr):
        return self.places.above(Pr)

    def places_above(self, v: Place):
        """All places of K above a base F_q-place."""
        out = []
        for Pr in r_places_over(self.K, v):
            out.extend(self.places.above(Pr))
        return sorted(out)

    def predicted_degree(self, v: Place):
        """Degree over F_r of the places of K above v, from the splitting data."""
        c = self.cover
        sp = c.splitting(v)
        return v.degree * sp.f // c.n

    def places_of_degree(self, d):
        """Places of K of degree d over F_r."""
        c = self.cover
        out = []
        for dv in range(1, d * c.n + 1):
            for v in c.base_places_of_degree(dv):
                if self.predicted_degree(v) != d:
                    continue
                out.extend(self.places_above(v))
        return sorted(set(out))

    def places_up_to(self, d):
        out = []
        for k in range(1, d + 1):
            out.extend(self.places_of_degree(k))
        return out

    def degree_one_place(self, avoid=()):
        avoid = set(avoid)
        for w in self.places_of_degree(1):
            if w not in avoid:
                return w
        return None

    def base_under(self, w: KPlace) -> Place:
        return q_place_under(self.K, w.P)

    # ----------------------------------------------------------- divisors
    def candidate_r_places(self, x, smooth_bound=None):
        """F_r-places that may carry zeros or poles of x (None if some has degree > smooth_bound)."""
        F = self.F
        num, den = x.norm()
        polys = [num, den, x.den]
        cands = set(self.places._bad_r)
        cands.add(None)
        for f in polys:
            if P.deg(f) > 0:
                for g, _ in P.factor(F, f)[1]:
                    if smooth_bound is not None and len(g) - 1 > smooth_bound:
                        return None
                    cands.add(tuple(g))
        return sorted(cands, key=lambda g: (0, ()) if g is None else (len(g), tuple(reversed(g))))

    def divisor_of(self, x, smooth_bound=None):
        """div(x); with ``smooth_bound`` returns None when x has a zero or pole above a
        base place of larger degree."""
        if x.is_zero():
            raise ZeroDivisionError("divisor of zero")
        cands = self.candidate_r_places(x, smooth_bound)
        if cands is None:
            return None
        out = {}
        for Pr in cands:
            for w in self.places.above(Pr):
                v = w.valuation(x)
                if v:
                    out[w] = v
        D = Divisor(out)
        if D.degree() != 0:
            raise CoverError(f"principal divisor of nonzero degree {D.degree()}")
        return D

    def valuation(self, x, w):
        return w.valuation(x)

    def residue_field(self, w):
        return field_of_size(self.F.q ** w.degree)

    def evaluate(self, x, w):
        """x(w) in the residue field F_{r^deg w}."""
        val = w.value(x)
        R = self.residue_field(w)
        return embedding(R, w.branch.Fw).preimage(val)

    def residue_log(self, x, w):
        """Discrete log of the nonzero residue x(w), in Z/(Nw - 1)."""
        val = w.value(x)
        if val == 0:
            raise CoverError("function vanishes at place")
        Fw = w.branch.Fw
        Nw = self.F.q ** w.degree
        lg = Fw.log(val)
        step = (Fw.q - 1) // (Nw - 1)
        if lg % step:
            raise CoverError("residue not in residue field")
        return lg // step

    def constant_log(self, c, w):
        """Discrete log in F(w)^x of a constant c in F_r^x."""
        Fw = w.branch.Fw
        val = embedding(self.F, Fw)(c)
        Nw = self.F.q ** w.degree
        return Fw.log(val) // ((Fw.q - 1) // (Nw - 1))

    def canonical_divisor(self) -> Divisor:
        """div(dt)."""
        out = {}
        seen = set()
        cands = set(self.places._bad_r)
        cands.add(None)
        for Pr in sorted(cands, key=lambda g: (0, ()) if g is None else (len(g), tuple(reversed(g)))):
            for w in self.places.above(Pr):
                if w in seen:
                    continue
                seen.add(w)
                k = w.branch.dt_order()
                if k:
                    out[w] = k
        W = Divisor(out)
        if W.degree() != 2 * self.genus - 2:
            raise CoverError(f"canonical divisor has degree {W.degree()}, expected {2 * self.genus - 2}")
        return W

    def reduced_divisor(self, places):
        return Divisor({w: 1 for w in places})

    # ------------------------------------------------------------ G-action
    def act_place(self, g, w: KPlace):
        """(g w, e) such that (g x)(g w) = x(w)^e for the residues at the canonical branches."""
        c = self.cover
        F = self.F
        br = w.branch
        Fw = br.Fw
        k = len(c.geo_orders)
        geo = tuple(g[:k])
        j = g[-1] % c.n if c.n > 1 else 0
        expo = 1
        Pr = w.P
        if c.is_kummer:
            state = tuple(br.data["mu"])
            if any(geo):
                emb = embedding(F, Fw)
                zs = [emb(c.emb(c.kummer_root_of_unity(m))) for m, _ in c.kummer]
                state = tuple(Fw.mul(u, Fw.pow(z, (-s) % m)) for u, z, s, (m, _) in zip(state, zs, geo, c.kummer))
        elif c.is_as and br.kind == "as":
            state = (Fw.sub(br.data["beta"], Fw.from_int(geo[0] % c.p)) if geo else br.data["beta"],)
        else:
            state = ()
        alpha = br.alpha
        if j:
            qj = c.q ** j
            if Pr is not None:
                Pr = tuple(P.frob_coeffs(F, list(Pr), j * c.Fq.m))
                alpha = Fw.pow(alpha, qj)
            state = tuple(Fw.pow(u, qj) for u in state)
            expo = qj
        places = self.places.above(Pr)
        target = places[0].branch
        if Pr is not None:
            # bring alpha to the canonical root with a power of Frob_r
            r = F.q
            i = 0
            a = alpha
            while a != target.alpha:
                a = Fw.pow(a, r)
                i += 1
                if i > Fw.m:
                    raise CoverError("root transport failed")
            state = tuple(Fw.pow(u, r ** i) for u in state)
            expo *= r ** i
        if c.is_kummer:
            w2, kk = self.places.kummer_normalize(Pr, state)
            expo *= (F.q ** (1 if Pr is None else len(Pr) - 1)) ** kk
        elif c.is_as and places[0].branch.kind == "as":
            rd = F.q ** (1 if Pr is None else len(Pr) - 1)
            w2 = None
            b = state[0]
            for kk in range(0, 2 * c.p * 8):
                for cand in places:
                    if cand.key == (b,):
                        w2 = cand
                        break
                if w2 is not None:
                    expo *= rd ** kk
                    break
                b = Fw.pow(b, rd)
            if w2 is None:
                raise CoverError("AS branch transport failed")
        else:
            w2 = places[0]
        return w2, expo % (self.F.q ** w2.degree - 1) if self.F.q ** w2.degree > 2 else 1

    def act_divisor(self, g, D: Divisor) -> Divisor:
        out = {}
        for w, k in D.c.items():
            w2, _ = self.act_place(g, w)
            out[w2] = out.get(w2, 0) + k
        return Divisor(out)

    def orbit_sum(self, places):
        """All places in the G-orbits of the given places, sorted."""
        seen = set()
        for w in places:
            for g in self.cover.G.elements():
                seen.add(self.act_place(g, w)[0])
        return sorted(seen)

    def places_above_set(self, base_places):
        out = []
        for v in base_places:
            out.extend(self.places_above(v))
        return sorted(set(out))


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


__all__ = ["Curve", "Divisor", "INF_PLACE"]
