"""Abelian covers of the projective line: Kummer layers, an Artin-Schreier layer,
and constant-field extensions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm

from ..exactalg import poly as P
from ..exactalg.fields import embedding, field_of_size
from ..exactalg.poly import irreducibles_of_degree
from ..grpring.group import AbGroup


class CoverError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Place:
    """A place of F_q(t): a monic irreducible (coefficients low to high) or infinity (poly None)."""

    poly: tuple | None

    @property
    def is_infinite(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.poly is None else len(self.poly) - 1

    def norm(self, q):
        return q ** self.degree

    def label(self):
        return "inf" if self.poly is None else list(self.poly)

    def sort_key(self):
        if self.poly is None:
            return (1, 0, ())
        return (self.degree, 0, tuple(reversed(self.poly)))

    def __repr__(self):
        if self.poly is None:
            return "Place(inf)"
        return f"Place({list(self.poly)})"


INF_PLACE = Place(None)


def place_from_label(label):
    if label == "inf" or label is None:
        return INF_PLACE
    return Place(tuple(int(c) for c in label))


def ord_at(F, f, v: Place) -> int:
    """Valuation at v of a nonzero polynomial f (coefficients in F)."""
    f = P.normalize(list(f))
    if not f:
        raise ValueError("valuation of zero")
    if v.is_infinite:
        return -P.deg(f)
    k = 0
    g = list(v.poly)
    while True:
        q_, r = P.divmod_(F, f, g)
        if r:
            return k
        f = q_
        k += 1


def rat_ord_at(F, num, den, v: Place) -> int:
    return ord_at(F, num, v) - ord_at(F, den, v)


class Cover:
    """K = F_r(t)(y_1, ..., y_s) with y_i^{m_i} = f_i, or y^p - y = f, with
    F_r = F_{q^n} (constant-field layer of degree n).

    G is the product of the layer groups, ordered as: Kummer layers, the
    Artin-Schreier layer, then the constant-field factor (generator gamma).
    """

    def __init__(self, q, kummer=(), artin_schreier=None, constant=1, name=None):
        self.q = int(q)
        self.Fq = field_of_size(self.q)
        self.p = self.Fq.p
        self.n = int(constant)
        if self.n < 1:
            raise CoverError("constant-field degree must be >= 1")
        self.r = self.q ** self.n
        self.Fr = field_of_size(self.r)
        self.name = name
        self.kummer = []
        for m, f in kummer:
            m = int(m)
            f = P.normalize([self.Fq.from_int(c) if self.Fq.m == 1 else int(c) for c in f])
            if (self.q - 1) % m:
                raise CoverError(f"Kummer layer needs mu_{m} in F_{self.q}")
            if m < 2:
                raise CoverError("Kummer exponent must be >= 2")
            if not f or P.deg(f) < 0:
                raise CoverError("Kummer f must be a nonzero polynomial")
            self.kummer.append((m, tuple(f)))
        self.as_num = self.as_den = None
        if artin_schreier is not None:
            if self.kummer:
                raise CoverError("mixed Kummer / Artin-Schreier towers are not supported")
            if isinstance(artin_schreier, dict):
                num, den = artin_schreier["num"], artin_schreier.get("den", [1])
            elif len(artin_schreier) == 2 and isinstance(artin_schreier[0], (list, tuple)):
                num, den = artin_schreier
            else:
                num, den = artin_schreier, [1]
            num = P.normalize([int(c) % self.p if self.Fq.m == 1 else int(c) for c in num])
            den = P.normalize([int(c) % self.p if self.Fq.m == 1 else int(c) for c in den])
            if not den:
                raise CoverError("zero denominator")
            g = P.gcd(self.Fq, num, den)
            num = P.divmod_(self.Fq, num, g)[0]
            den = P.divmod_(self.Fq, den, g)[0]
            lc = den[-1]
            num = P.scale(self.Fq, num, self.Fq.inv(lc))
            den = P.monic(self.Fq, den)
            self.as_num, self.as_den = tuple(num), tuple(den)
            self._check_as()
        orders = [m for m, _ in self.kummer]
        names = [f"s{i + 1}" if len(self.kummer) > 1 else "s" for i in range(len(self.kummer))]
        if self.is_as:
            orders.append(self.p)
            names.append("tau")
        if self.n > 1:
            orders.append(self.n)
            names.append("gamma")
        self.G = AbGroup(orders, names)
        self.gamma_index = len(orders) - 1 if self.n > 1 else None
        self.geo_orders = [m for m, _ in self.kummer] + ([self.p] if self.is_as else [])
        self.d = 1
        for m in self.geo_orders:
            self.d *= m
        self._check_independent()
        self.level = 1
        self.ground_q = self.q

    def constant_field_level(self, N):
        """The same equations over F_{q^N}; G is unchanged when gcd(N, n) = 1."""
        N = int(N)
        if N < 1:
            raise CoverError("level must be >= 1")
        if N == 1:
            return self
        if gcd(N, self.n) != 1:
            raise CoverError("level must be coprime to the constant-field degree")
        FN = field_of_size(self.q ** N)
        e = embedding(self.Fq, FN)
        lift = lambda f: [e(c) for c in f]
        kw = {}
        if self.kummer:
            kw["kummer"] = [(m, lift(f)) for m, f in self.kummer]
        if self.is_as:
            kw["artin_schreier"] = (lift(self.as_num), lift(self.as_den))
        name = f"{self.name}@{N}" if self.name else None
        out = Cover(self.q ** N, constant=self.n, name=name, **kw)
        if out.G.orders != self.G.orders:
            raise CoverError("Galois group changes at this level")
        out.level = self.level * N
        out.ground_q = self.ground_q
        return out

    # ------------------------------------------------------------ basic data
    @property
    def is_as(self):
        return self.as_num is not None

    @property
    def is_kummer(self):
        return bool(self.kummer)

    @property
    def is_trivial(self):
        return self.G.order == 1

    @cached_property
    def emb(self):
        """Embedding F_q -> F_r."""
        return embedding(self.Fq, self.Fr)

    def __repr__(self):
        parts = [f"q={self.q}"]
        for m, f in self.kummer:
            parts.append(f"y^{m}={list(f)}")
        if self.is_as:
            parts.append(f"y^p-y={list(self.as_num)}/{list(self.as_den)}")
        if self.n > 1:
            parts.append(f"const={self.n}")
        return "Cover(" + ", ".join(parts) + ")"

    def to_record(self):
        rec = {"q": self.q, "constant": self.n}
        if self.kummer:
            rec["kind"] = "kummer"
            rec["layers"] = [{"m": m, "f": list(f)} for m, f in self.kummer]
        elif self.is_as:
            rec["kind"] = "artin-schreier"
            rec["f"] = {"num": list(self.as_num), "den": list(self.as_den)}
        else:
            rec["kind"] = "constant" if self.n > 1 else "trivial"
        return rec

    @classmethod
    def from_record(cls, rec):
        kind = rec.get("kind", "trivial")
        q = rec["q"]
        const = rec.get("constant", rec.get("constant_level", 1))
        if kind == "kummer":
            layers = rec.get("layers")
            if layers is None:
                layers = [{"m": rec["m"], "f": rec["f"]}]
            return cls(q, kummer=[(L["m"], L["f"]) for L in layers], constant=const, name=rec.get("name"))
        if kind in ("artin-schreier", "as"):
            f = rec["f"]
            if isinstance(f, dict):
                return cls(q, artin_schreier=(f["num"], f.get("den", [1])), constant=const, name=rec.get("name"))
            return cls(q, artin_schreier=(f, [1]), constant=const, name=rec.get("name"))
        if kind in ("constant", "trivial"):
            return cls(q, constant=const, name=rec.get("name"))
        raise CoverError(f"unknown cover kind {kind!r}")

    # ------------------------------------------------------------- validation
    def as_poles(self):
        """Poles of the Artin-Schreier f with their orders: [(place, order)]."""
        out = []
        F = self.Fq
        if P.deg(self.as_den) > 0:
            _, fs = P.factor(F, list(self.as_den))
            for g, k in fs:
                out.append((Place(tuple(g)), k))
        dinf = P.deg(list(self.as_num)) - P.deg(list(self.as_den))
        if dinf > 0:
            out.append((INF_PLACE, dinf))
        return sorted(out, key=lambda pc: pc[0].sort_key())

    def _check_as(self):
        for v, c in self.as_poles():
            if c % self.p == 0:
                raise CoverError(
                    f"Artin-Schreier f has a pole of order {c} divisible by p at {v.label()}; normalize f first"
                )
        if not self.as_poles():
            raise CoverError("Artin-Schreier f without poles gives a constant-field extension")

    def _check_independent(self):
        # P^1 has no unramified geometric covers, so K is geometric of degree d
        # iff the inertia elements generate the geometric group.
        if not self.kummer:
            return
        from ..exactalg.intmat import invariant_factors

        k = len(self.kummer)
        rows = [[m if i == j else 0 for j in range(k)] for i, m in enumerate(self.geo_orders)]
        for v in self.bad_places():
            rows.append([a % m for a, m in zip(self.kummer_ords(v), self.geo_orders)])
        if any(x != 1 for x in invariant_factors(rows)):
            raise CoverError("Kummer layers are not geometrically independent (or some f_i is a constant times a power)")

    # ------------------------------------------------------------- base places
    def base_places_of_degree(self, d):
        out = [Place(tuple(f)) for f in irreducibles_of_degree(self.Fq, d)]
        if d == 1:
            out.append(INF_PLACE)
        return out

    def bad_places(self):
        """Base places where some defining function has a zero or pole."""
        F = self.Fq
        out = set()
        for _, f in self.kummer:
            if P.deg(list(f)) > 0:
                for g, _ in P.factor(F, list(f))[1]:
                    out.add(Place(tuple(g)))
            out.add(INF_PLACE)
        if self.is_as:
            for v, _ in self.as_poles():
                out.add(v)
        return sorted(out, key=Place.sort_key)

    def kummer_ords(self, v: Place):
        return [ord_at(self.Fq, f, v) for _, f in self.kummer]

    def ramification_index(self, v: Place) -> int:
        if self.is_as:
            return self.p if any(w == v for w, _ in self.as_poles()) else 1
        e = 1
        for (m, _), a in zip(self.kummer, self.kummer_ords(v)):
            e = lcm(e, m // gcd(m, a))
        return e

    def ramified_places(self):
        return [v for v in self.bad_places() if self.ramification_index(v) > 1]

    # -------------------------------------------------------------- Frobenius
    @cached_property
    def zeta_q(self):
        """Primitive (q-1)-th root of unity of F_q used for Kummer symbols."""
        return self.Fq.primitive_element() if self.Fq.m > 1 else self.Fq.gen

    def kummer_root_of_unity(self, m):
        return self.Fq.pow(self.zeta_q, (self.q - 1) // m)

    def _unit_part_mod(self, f, v: Place, a):
        """(f / pi^a) reduced at v, as an element of F_q[t]/(v) (list) or a constant at infinity."""
        F = self.Fq
        if v.is_infinite:
            return [f[-1]]
        g = list(f)
        for _ in range(a):
            g = P.divmod_(F, g, list(v.poly))[0]
        return P.mod(F, g, list(v.poly))

    def _power_residue(self, u, v: Place, m):
        F = self.Fq
        Nv = self.q ** v.degree
        if v.is_infinite:
            val = F.pow(u[0], (Nv - 1) // m)
        else:
            w = P.normalize(P.powmod(F, u, (Nv - 1) // m, list(v.poly)))
            if len(w) != 1:
                raise CoverError("power residue symbol is not a constant")
            val = w[0]
        zeta = self.kummer_root_of_unity(m)
        for k in range(m):
            if F.pow(zeta, k) == val:
                return k
        raise CoverError("power residue symbol is not an m-th root of unity")

    def local_symbols(self, v: Place):
        """(tau_v, phi_v): a generator of inertia and a Frobenius lift at v.

        For Kummer layers the uniformizer is v itself (1/t at infinity); then
        tau_v has components ord_v(f_i) and phi_v the residue symbols of the
        unit parts. G_v is generated by both.
        """
        tau, phi = [], []
        for (m, f), a in zip(self.kummer, self.kummer_ords(v)):
            tau.append(a % m)
            phi.append(self._power_residue(self._unit_part_mod(f, v, a), v, m))
        if self.is_as:
            if any(w == v for w, _ in self.as_poles()):
                tau.append(1)
                phi.append(0)
            else:
                tau.append(0)
                phi.append(self.as_trace(v))
        if self.n > 1:
            tau.append(0)
            phi.append(v.degree % self.n)
        return tuple(tau), tuple(phi)

    def frobenius(self, v: Place):
        """sigma_v in G as an exponent tuple, for v unramified."""
        tau, phi = self.local_symbols(v)
        if any(tau):
            raise CoverError(f"{v} is ramified; no Frobenius")
        return phi

    def splitting(self, v: Place) -> "CoverPlace":
        G = self.G
        tau, phi = self.local_symbols(v)
        inertia = _cyclic_subgroup(G, tau)
        decomp = _generated_subgroup(G, [tau, phi])
        e = len(inertia)
        f = len(decomp) // e
        return CoverPlace(
            base=v,
            e=e,
            f=f,
            count=G.order // len(decomp),
            inertia=tuple(sorted(inertia)),
            decomposition=tuple(sorted(decomp)),
            frobenius=phi if e == 1 else None,
        )

    def as_value_at(self, v: Place):
        """f(v) in F_q[t]/(v) for v not a pole of f (list of coefficients or constant)."""
        F = self.Fq
        if v.is_infinite:
            dn, dd = P.deg(list(self.as_num)), P.deg(list(self.as_den))
            if dn < dd:
                return [0]
            return [F.div(self.as_num[-1], self.as_den[-1])]
        num = P.mod(F, list(self.as_num), list(v.poly))
        den = P.mod(F, list(self.as_den), list(v.poly))
        return P.mulmod(F, num, P.invmod(F, den, list(v.poly)), list(v.poly))

    def as_trace(self, v: Place) -> int:
        """Tr_{F_{Nv}/F_p}(f(v)) as an integer mod p."""
        F = self.Fq
        val = self.as_value_at(v)
        if v.is_infinite or v.degree == 1:
            x = P.normalize(val)
            x = x[0] if x else 0
            return _prime_int(F, F.trace_to_prime(x))
        # trace of the class of val in F_q[t]/(v) down to F_p: sum of p-power conjugates
        mod = list(v.poly)
        tot = [0]
        x = P.normalize(val)
        for _ in range(v.degree * F.m):
            tot = P.add(F, tot, x)
            x = P.mod(F, P.pow_(F, x, F.p), mod)
            x = P.normalize(x)
        tot = P.normalize(tot)
        c = tot[0] if tot else 0
        if len(tot) > 1:
            raise CoverError("trace did not land in the prime field")
        return _prime_int(F, c)

    # ------------------------------------------------------------------ genus
    def genus(self) -> int:
        if self.is_trivial or (not self.kummer and not self.is_as):
            return 0
        if self.is_as:
            tot = sum((c + 1) * v.degree for v, c in self.as_poles())
            two_g_minus_2 = -2 * self.p + (self.p - 1) * tot
        else:
            two_g_minus_2 = -2 * self.d
            for v in self.bad_places():
                e = self.ramification_index(v)
                two_g_minus_2 += v.degree * (self.d - self.d // e)
        if two_g_minus_2 % 2:
            raise CoverError("odd 2g-2: inconsistent cover data")
        return two_g_minus_2 // 2 + 1

    def hasse_witt_formula(self):
        """gamma_K from the Deuring-Shafarevich formula (G a p-group) or None."""
        if self.is_as:
            ram = sum(v.degree for v, _ in self.as_poles())
            return self.p * (0 - 1) + ram * (self.p - 1) + 1
        if not self.kummer:
            return 0
        return None

    def hurwitz_check(self, S_base):
        """(2g_K - 2 + |S_K,geom|) == d (2g_k - 2 + |S_geom|) with geometric counts."""
        gK = self.genus()
        lhs = 2 * gK - 2
        for v in S_base:
            e = self.ramification_index(v)
            lhs += v.degree * (self.d // e)
        rhs = self.d * (-2 + sum(v.degree for v in S_base))
        return lhs == rhs


@dataclass(frozen=True)
class CoverPlace:
    """Decomposition data of a base place: e_w, residue degree f_w over v, number of places."""

    base: Place
    e: int
    f: int
    count: int
    inertia: tuple
    decomposition: tuple
    frobenius: tuple | None

    @property
    def is_ramified(self):
        return self.e > 1

    def to_dict(self):
        return {
            "place": self.base.label(),
            "e": self.e,
            "f": self.f,
            "count": self.count,
            "frobenius": list(self.frobenius) if self.frobenius is not None else None,
        }


def _cyclic_subgroup(G, g):
    out = {G.identity()}
    x = tuple(g)
    while x not in out:
        out.add(x)
        x = G.op(x, g)
    return out


def _generated_subgroup(G, gens):
    out = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.op(x, tuple(g))
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


def _prime_int(F, x):
    """Integer value of an element of the prime subfield of F."""
    if F.m == 1:
        return x
    # prime-subfield elements are encoded as integers < p
    if x >= F.p:
        raise CoverError("element not in prime field")
    return x
