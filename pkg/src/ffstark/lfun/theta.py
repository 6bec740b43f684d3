"""The equivariant L-function Theta_{S,Sigma}(u) in Z[G][u] by truncated Euler products."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..curves.cover import INF_PLACE, Cover, CoverError, Place
from ..curves.zeta import VecField, _bad_polys
from ..exactalg import poly as P
from ..exactalg.fields import DEFAULT_BOUND, embedding, field_of_size
from ..grpring.cyclo import Character, characters
from ..grpring.group import EquivariantPolynomial, GroupRingElement


class TruncationError(CoverError):
    pass


def _divisors(d):
    return [k for k in range(1, d) if d % k == 0]


def _bad_base_places(c: Cover, d):
    out = set()
    for f in _bad_polys(c):
        if P.deg(f) > 0:
            for g, _ in P.factor(c.Fq, list(f))[1]:
                if len(g) - 1 == d:
                    out.add(Place(tuple(g)))
    if d == 1:
        out.add(INF_PLACE)
    return out


def frobenius_counts(c: Cover, d: int, bound=DEFAULT_BOUND):
    """{sigma: number of unramified base places of degree d with Frobenius sigma}."""
    G = c.G
    counts = np.zeros(G.order, dtype=np.int64)
    bad = _bad_base_places(c, d)
    geo = bool(c.kummer) or c.is_as
    if not geo:
        total = P.necklace_count(c.q, d) + (1 if d == 1 else 0)
        sigma = (d % c.n,) if c.n > 1 else ()
        out = {sigma: total}
        return {g: k for g, k in out.items() if k}
    Q = c.q ** d
    if Q > bound:
        raise CoverError(f"F_{Q} exceeds the enumeration bound")
    FQ = field_of_size(Q)
    V = VecField(FQ)
    emb = embedding(c.Fq, FQ)
    t = V.elements()
    mask = np.ones(Q, dtype=bool)
    for k in _divisors(d):
        mask &= V.pow(t, c.q ** k) != t
    if d == 1:
        mask[:] = True
    coords = []
    if c.kummer:
        for m, f in c.kummer:
            v = V.polyval([emb(a) for a in f], t)
            mask &= v != 0
            zl = int(V.log[emb(c.kummer_root_of_unity(m))])
            u = (zl // ((Q - 1) // m)) % m
            uinv = pow(u, -1, m)
            coords.append((np.where(v != 0, V.log[v], 0) * uinv) % m)
    if c.is_as:
        num = V.polyval([emb(a) for a in c.as_num], t)
        den = V.polyval([emb(a) for a in c.as_den], t)
        mask &= den != 0
        val = V.mul(num, V.inv(np.where(den == 0, 1, den)))
        coords.append(V.trace(val) % c.p)
    if c.n > 1:
        coords.append(np.full(Q, d % c.n, dtype=np.int64))
    idx = np.zeros(Q, dtype=np.int64)
    for arr, o in zip(coords, G.orders):
        idx = idx * o + arr
    hist = np.bincount(idx[mask], minlength=G.order)
    if np.any(hist % d):
        raise CoverError("root counts not divisible by the degree")
    counts += hist // d
    elems = G.elements()
    out = {elems[i]: int(counts[i]) for i in range(G.order) if counts[i]}
    for v in sorted(bad, key=lambda v: v.sort_key()):
        sp = c.splitting(v)
        if sp.e == 1:
            out[sp.frobenius] = out.get(sp.frobenius, 0) + 1
    return out


def euler_product(c: Cover, S, Sigma, B, bound=DEFAULT_BOUND):
    """Coefficients (B+1) x |G| of prod_Sigma (1 - s^-1 (qu)^d) prod_{v not in S} (1 - s^-1 u^d)^-1."""
    G = c.G
    elems = G.elements()
    n = G.order
    S = list(S)
    acc = np.zeros((B + 1, n), dtype=object)
    acc[:, :] = 0
    acc[0, G.index(G.identity())] = 1
    perm_cache = {}

    def perm(s):
        if s not in perm_cache:
            perm_cache[s] = np.array([G.index(G.op(s, h)) for h in elems])
        return perm_cache[s]

    for d in range(1, B + 1):
        cnt = dict(frobenius_counts(c, d, bound))
        for v in S:
            if v.degree == d:
                sp = c.splitting(v)
                if sp.e == 1:
                    cnt[sp.frobenius] -= 1
        for s, k in sorted(cnt.items()):
            if k <= 0:
                if k < 0:
                    raise CoverError("negative place count")
                continue
            sinv = G.inverse(s)
            new = acc.copy()
            j = 1
            while d * j <= B:
                b = comb(k + j - 1, j)
                pj = perm(G.power(sinv, j))
                block = np.zeros((B + 1 - d * j, n), dtype=object)
                block[:, pj] = acc[: B + 1 - d * j, :]
                new[d * j :, :] += b * block
                j += 1
            acc = new
    for v in Sigma:
        sp = c.splitting(v)
        if sp.e != 1:
            raise CoverError("Sigma must avoid the ramified places")
        sinv = G.inverse(sp.frobenius)
        d = v.degree
        if d <= B:
            pj = perm(sinv)
            block = np.zeros((B + 1 - d, n), dtype=object)
            block[:, pj] = acc[: B + 1 - d, :]
            new = acc.copy()
            new[d:, :] -= (c.q ** d) * block
            acc = new
    return [[int(x) for x in row] for row in acc]


@dataclass
class ThetaResult:
    cover: Cover
    S: list
    Sigma: list
    B: int
    D: int
    coeffs: list  # D_bound+1 GroupRingElements (full B+1 series when non-integral regime)
    regime: str = "integral"
    D_bound: int | None = None
    series: list = field(default_factory=list, repr=False)

    @property
    def G(self):
        return self.cover.G

    @property
    def poly(self):
        return EquivariantPolynomial(self.G, self.coeffs)

    @property
    def degree(self):
        k = len(self.coeffs) - 1
        while k > 0 and self.coeffs[k].is_zero():
            k -= 1
        return k

    def value(self, u0: int) -> GroupRingElement:
        return self.poly.evaluate(u0)

    def char_component(self, chi: Character):
        return [chi.apply(a) for a in self.coeffs]

    def components(self):
        return {chi.exps: self.char_component(chi) for chi in characters(self.G)}

    def to_dict(self):
        return {
            "cover": self.cover.to_record(),
            "S": [v.label() for v in self.S],
            "Sigma": [v.label() for v in self.Sigma],
            "B": self.B,
            "D": self.D,
            "D_bound": self.D_bound,
            "degree": self.degree,
            "regime": self.regime,
            "theta": [a.to_dict() for a in self.coeffs],
        }


def degree_bound(S, Sigma, g_base=0):
    return 2 * g_base - 2 + sum(v.degree for v in S) + sum(v.degree for v in Sigma)


def conductor_excess(c: Cover) -> int:
    """sum over wild places of (conductor exponent - 1) d_v; zero for tame covers.

    For y^p - y = f a nontrivial character has exponent m_v + 1 at a pole of
    order m_v, so the components exceed the tame degree by sum m_v d_v.
    """
    if not c.is_as:
        return 0
    return sum(m * v.degree for v, m in c.as_poles())


def theta(c: Cover, S, Sigma, B=None, allow_empty_sigma=False, check_truncation=False, bound=DEFAULT_BOUND) -> ThetaResult:
    """Theta_{S,Sigma}(u) as a polynomial of degree <= D with Z[G] coefficients."""
    S = sorted(set(S), key=lambda v: v.sort_key())
    Sigma = sorted(set(Sigma), key=lambda v: v.sort_key())
    if not S:
        raise CoverError("S must be nonempty")
    if set(S) & set(Sigma):
        raise CoverError("S and Sigma must be disjoint")
    ram = set(c.ramified_places())
    if not ram <= set(S):
        raise CoverError("S must contain the ramified places")
    if not Sigma and not allow_empty_sigma:
        raise CoverError("Sigma must be nonempty (pass allow_empty_sigma for the non-integral regime)")
    D = degree_bound(S, Sigma)
    Db = D + conductor_excess(c)
    if B is None:
        B = max(Db + 2, 0)
    if B < Db + 2 and Sigma:
        raise CoverError("truncation degree must be at least D + 2")
    ser = euler_product(c, S, Sigma, B, bound)
    G = c.G
    if not Sigma:
        coeffs = [GroupRingElement(G, row) for row in ser]
        return ThetaResult(c, S, Sigma, B, D, coeffs, "non-integral", D_bound=Db, series=ser)
    for k in range(max(Db + 1, 0), B + 1):
        if any(ser[k]):
            raise TruncationError(f"coefficient of u^{k} is {ser[k]} but must vanish above {Db}")
    if check_truncation:
        ser2 = euler_product(c, S, Sigma, B + 2, bound)
        if ser2[: B + 1] != ser or any(any(r) for r in ser2[max(Db + 1, 0) :]):
            raise TruncationError("recomputation at B + 2 disagrees")
    coeffs = [GroupRingElement(G, row) for row in ser[: max(Db, 0) + 1]]
    return ThetaResult(c, S, Sigma, B, D, coeffs, "integral", D_bound=Db, series=ser)


def char_component(res: ThetaResult, chi: Character):
    """chi applied coefficientwise: the L_{S,Sigma}(chi^-1, u) component."""
    return res.char_component(chi)


def delta_sigma(c: Cover, Sigma, u0) -> GroupRingElement:
    """prod_{v in Sigma} (1 - sigma_v^-1 (q u0)^{d_v})."""
    G = c.G
    acc = GroupRingElement.scalar(G, 1)
    for v in Sigma:
        sp = c.splitting(v)
        if sp.e != 1:
            raise CoverError("Sigma must avoid the ramified places")
        term = GroupRingElement.scalar(G, 1) - GroupRingElement.group_elt(G, G.inverse(sp.frobenius), (c.q * u0) ** v.degree)
        acc = acc * term
    return acc


def product_of_components(res: ThetaResult):
    """prod_chi chi(Theta) as an integer polynomial."""
    G = res.G
    e = G.exponent
    from ..grpring.cyclo import Cyclo

    acc = [Cyclo.const(e, 1)]
    for chi in characters(G):
        comp = res.char_component(chi)
        new = [Cyclo.const(e, 0) for _ in range(len(acc) + len(comp) - 1)]
        for i, a in enumerate(acc):
            for j, b in enumerate(comp):
                new[i + j] = new[i + j] + a * b
        acc = new
    out = []
    for x in acc:
        if any(x.c[1:]) or x.c[0].denominator != 1:
            raise CoverError("product over characters is not an integer polynomial")
        out.append(int(x.c[0]))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out
