"""S-units and the n-torsion M_{S,T}[n] of the Picard 1-motive.

At constant level N the group K^{(n)}_{S,T} / K_T^{x n} is assembled from the
ray class group Pic_T and Div(S):

    M[n] = {(c, y) in Pic_T x Div(S) : n c + [y] = 0} / {([z], -n z) : z in Div(S)}.

A function f with div f = n D + y maps to ([D], y). When T is empty the constants
of K contribute F_r^x / F_r^{x n}; such results carry a caveat flag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..curves.cover import Cover, CoverError
from ..curves.curve import Curve, Divisor
from ..curves.rr import riemann_roch_basis
from ..exactalg.fields import DEFAULT_BOUND
from ..exactalg.intmat import hnf, hnf_membership, kernel, lattice_basis, matvec
from ..grpring.modules import GModule
from .classgroup import Budget, BudgetExceeded, class_group


def level_model(c: Cover, N: int) -> Cover:
    """K F_{q^N} as a cover of F_q(t) whose constant layer carries the q-Frobenius."""
    if c.n != 1:
        raise CoverError("level models are built from covers without a constant layer")
    if N == 1:
        return c
    kw = {}
    if c.kummer:
        kw["kummer"] = [(m, list(f)) for m, f in c.kummer]
    if c.is_as:
        kw["artin_schreier"] = (list(c.as_num), list(c.as_den))
    out = Cover(c.q, constant=N, name=f"{c.name}@{N}" if c.name else None, **kw)
    out.level = N
    return out


# ------------------------------------------------------------------ S-units
@dataclass
class SUnitLattice:
    places: list
    divisors: list  # kernel basis of Div^0(S) -> Pic^0
    functions: list

    @property
    def rank(self):
        return len(self.divisors)

    def to_dict(self):
        return {"places": [w.label() for w in self.places], "rank": self.rank, "divisors": [D.to_list() for D in self.divisors]}


def s_units(X: Curve, S_K, budget: Budget | None = None) -> SUnitLattice:
    """Functions whose divisors span the S-supported principal divisors."""
    S_K = sorted(set(S_K))
    if not S_K:
        raise CoverError("S must be nonempty")
    R = class_group(X, (), extra=S_K, budget=budget)
    pres = R.presentation
    idx = pres.index()
    s = len(S_K)
    ng = pres.n
    rels = pres.rels
    # (y, lam) with B y - rels^T lam = 0
    C = [[0] * (s + len(rels)) for _ in range(ng)]
    for j, w in enumerate(S_K):
        C[idx[("place", w)]][j] = 1
    for k, r in enumerate(rels):
        for i in range(ng):
            C[i][s + k] = -r[i]
    ker = kernel(C, s + len(rels))
    ys = lattice_basis([v[:s] for v in ker], s)
    divs, funcs = [], []
    for y in ys:
        D = Divisor({w: k for w, k in zip(S_K, y)})
        B = riemann_roch_basis(X, -D).basis
        if len(B) != 1:
            raise CoverError("S-unit divisor is not principal")
        f = B[0]
        if X.divisor_of(f) != D:
            raise CoverError("S-unit divisor check failed")
        divs.append(D)
        funcs.append(f)
    return SUnitLattice(S_K, divs, funcs)


# ------------------------------------------------------------------ M[n]
@dataclass
class TorsionModule:
    module: GModule
    n: int
    level: int
    S: list
    T: list
    curve: Curve = field(repr=False)
    classgroup: object = field(repr=False)
    L1: list = field(repr=False)  # basis of the kernel lattice in Z^{gens + S}
    ambient: int = 0
    t_empty_caveat: bool = False

    @property
    def order(self):
        return self.module.order

    @property
    def invariant_factors(self):
        return list(self.module.d)

    def dim(self):
        """F_ell-dimension when n = ell is prime."""
        return len(self.module.d)

    def l1_coords(self, v):
        ok, coeffs = hnf_membership(self.L1, v)
        if not ok:
            raise CoverError("vector outside the kernel lattice")
        return coeffs

    def coords(self, v):
        """Module coordinates of an ambient vector (x, y) in the kernel lattice."""
        c = self.l1_coords(v)
        proj = self.module._from_ambient
        return tuple(sum(a * b for a, b in zip(row, c)) % d for row, d in zip(proj, self.module.d))

    def to_dict(self):
        return {
            "n": self.n,
            "level": self.level,
            "invariant_factors": self.invariant_factors,
            "order": self.order,
            "action": self.module.mats,
            "S": [w.label() for w in self.S],
            "T": [w.label() for w in self.T],
            "t_empty_caveat": self.t_empty_caveat,
        }


def _perm_block(X, S_K, g):
    idx = {w: i for i, w in enumerate(S_K)}
    s = len(S_K)
    A = [[0] * s for _ in range(s)]
    for j, w in enumerate(S_K):
        A[idx[X.act_place(g, w)[0]]][j] = 1
    return A


def torsion_module_at(X: Curve, S_K, T_K, n: int, budget=None, extra=()) -> TorsionModule:
    budget = budget or Budget(max_order=10 ** 12)
    S_K = sorted(set(X.orbit_sum(S_K)))
    T_K = sorted(set(X.orbit_sum(T_K))) if T_K else []
    if set(S_K) & set(T_K):
        raise CoverError("S and T must be disjoint")
    R = class_group(X, T_K, extra=list(S_K) + list(extra), budget=budget)
    pres = R.presentation
    idx = pres.index()
    ng, s = pres.n, len(S_K)
    m = ng + s
    rels = pres.rels
    Bcol = [idx[("place", w)] for w in S_K]
    C = [[0] * (m + len(rels)) for _ in range(ng)]
    for i in range(ng):
        C[i][i] = n
    for j, gi in enumerate(Bcol):
        C[gi][ng + j] = 1
    for k, r in enumerate(rels):
        for i in range(ng):
            C[i][m + k] = -r[i]
    ker = kernel(C, m + len(rels))
    L1 = lattice_basis([v[:m] for v in ker], m)
    # the degree map forces one linear condition, so rank L1 = m - 1
    if len(L1) != m - 1:
        raise CoverError("kernel lattice has unexpected rank")
    k1 = len(L1)
    L0 = [list(r) + [0] * s for r in rels]
    for j, gi in enumerate(Bcol):
        v = [0] * m
        v[gi] = 1
        v[ng + j] = -n
        L0.append(v)

    def coords(v):
        ok, cf = hnf_membership(L1, v)
        if not ok:
            raise CoverError("relation outside the kernel lattice")
        return cf

    rel_rows = [coords(v) for v in L0]
    c = X.cover
    actions = []
    for gi in range(len(c.G.orders)):
        g = c.G.generator(gi)
        Ax = pres.mats[gi]
        Ay = _perm_block(X, S_K, g)
        A = [[0] * m for _ in range(m)]
        for i in range(ng):
            A[i][:ng] = Ax[i]
        for i in range(s):
            A[ng + i][ng:] = Ay[i]
        cols = [coords(matvec(A, b)) for b in L1]
        actions.append([[cols[j][i] for j in range(k1)] for i in range(k1)])
    M = GModule.from_presentation(c.G, k1, rel_rows, actions)
    return TorsionModule(M, n, getattr(c, "level", 1), S_K, T_K, X, R, L1, m, not T_K)


def unipotent_level(c: Cover, S, T, ell: int) -> int:
    """A level at which Frobenius on the genus-0 M[ell] is unipotent.

    Needs mu_ell rational and every point above S, T and the ramified places
    rational. From there the chain N, ell N, ell^2 N certifies stability: if
    ker(U - 1) = ker(U^ell - 1) = ker((U - 1)^ell) for unipotent U, the
    kernel chain has stopped and U = 1.
    """
    from math import lcm

    N = 1
    if ell != c.p:
        k, x = 1, c.q % ell
        while x != 1:
            x = x * c.q % ell
            k += 1
        N = k
    for v in set(S) | set(T) | set(c.ramified_places()):
        N = lcm(N, v.degree * c.splitting(v).f)
    return N


def torsion_module(c: Cover, S, T, n: int, level=None, budget=None, start=1, max_level=12, bound=DEFAULT_BOUND, step=2):
    """M_{S,T}[n] at a fixed level, or at the first stable level of the chain N0, step N0, step^2 N0, ...

    Each level divides the next, so the groups increase along the chain; the
    result is accepted when two consecutive levels give the same invariants.
    With the default step this can miss division points of degree ell; pass
    start=unipotent_level(...) and step=ell for a certified level in genus 0.
    The levels tried are kept in ``history``.
    """
    if level is not None:
        X = Curve(level_model(c, level))
        M = torsion_module_at(X, X.places_above_set(S), X.places_above_set(T), n, budget)
        M.history = [(level, M.invariant_factors)]
        return M
    prev = None
    history = []
    N = start
    while N <= max_level and c.q ** N <= bound:
        X = Curve(level_model(c, N))
        try:
            M = torsion_module_at(X, X.places_above_set(S), X.places_above_set(T), n, budget)
        except BudgetExceeded:
            break
        history.append((N, M.invariant_factors))
        if prev is not None and prev.invariant_factors == M.invariant_factors:
            prev.history = history
            return prev
        prev = M
        N *= step
    raise BudgetExceeded(f"torsion module did not stabilise (history {history})")


# ------------------------------------------------------------------ descent
@dataclass
class DescentReport:
    n: int
    level: int
    order_base: int
    order_fixed: int
    order_image: int
    injective: bool
    image_is_fixed: bool
    frobenius_equivariant: bool
    ok: bool
    caveat: str = ""

    def to_dict(self):
        return dict(self.__dict__)


def _find_ray_unit(Xb: Curve, w):
    """A polynomial h and lambda with log_w h = lambda a unit mod Nw - 1."""
    from math import gcd

    F = Xb.F
    Nw1 = w.norm - 1
    for d in range(1, w.degree + 1):
        for a in range(F.q ** d):
            coeffs = []
            x = a
            for _ in range(d):
                coeffs.append(x % F.q)
                x //= F.q
            poly = coeffs + [1] if d < w.degree + 1 else coeffs
            h = Xb.K.from_poly(poly)
            try:
                lg = Xb.residue_log(h, w)
            except CoverError:
                continue
            if gcd(lg, Nw1) == 1:
                return poly, lg
    if Nw1 == 1:
        return [1], 0
    raise CoverError("no ray generator found")


def verify_torsion_descent(c: Cover, S, T, n: int, level: int, budget=None) -> DescentReport:
    """M[n]^G = M'[n] with Frobenius action, through the conorm map M'[n] -> M[n]."""
    if c.n != 1:
        raise CoverError("descent check needs a cover without constant layer")
    base = Cover(c.q)
    Xb = Curve(level_model(base, level))
    Mb = torsion_module_at(Xb, Xb.places_above_set(S), Xb.places_above_set(T), n, budget)
    X = Curve(level_model(c, level))
    pres_b = Mb.classgroup.presentation
    up_places = []
    for kind, wb in pres_b.gens:
        if kind == "place":
            up_places.extend(X.places.above(wb.P))
    M = torsion_module_at(X, X.places_above_set(S), X.places_above_set(T), n, budget, extra=up_places)
    pres = M.classgroup.presentation
    idx = pres.index()
    ng = pres.n
    s_idx = {w: i for i, w in enumerate(M.S)}
    # conorm on ambient coordinates
    images = []
    for kind, wb in pres_b.gens:
        v = [0] * M.ambient
        if kind == "place":
            for w in X.places.above(wb.P):
                v[idx[("place", w)]] += w.e
        else:
            poly, lam = _find_ray_unit(Xb, wb)
            if wb.norm - 1 > 1:
                k = pow(lam, -1, wb.norm - 1)
                h = X.K.from_poly(poly)
                for w in X.places.above(wb.P):
                    v[idx[("ray", w)]] = (k * X.residue_log(h, w)) % (w.norm - 1)
        images.append(v)
    for wb in Mb.S:
        v = [0] * M.ambient
        for w in X.places.above(wb.P):
            v[ng + s_idx[w]] += w.e
        images.append(v)

    def phi(vb):
        out = [0] * M.ambient
        for a, im in zip(vb, images):
            if a:
                out = [x + a * y for x, y in zip(out, im)]
        return out

    # images of generators of M'
    gen_imgs = [M.coords(phi(b)) for b in Mb.L1]
    gen_base = [Mb.coords(b) for b in Mb.L1]
    mod = M.module
    # enumerate M' through its generators and push forward
    elems_b = {}
    frontier = [(tuple(0 for _ in Mb.module.d), tuple(0 for _ in mod.d))]
    elems_b[frontier[0][0]] = frontier[0][1]
    well_defined = True
    while frontier:
        nxt = []
        for xb, xm in frontier:
            for gb, gm in zip(gen_base, gen_imgs):
                yb = tuple((a + b) % d for a, b, d in zip(xb, gb, Mb.module.d))
                ym = tuple((a + b) % d for a, b, d in zip(xm, gm, mod.d))
                if yb in elems_b:
                    if elems_b[yb] != ym:
                        well_defined = False
                    continue
                elems_b[yb] = ym
                nxt.append((yb, ym))
        frontier = nxt
    image = set(elems_b.values())
    injective = well_defined and len(image) == len(elems_b)
    geo = list(range(len(c.G.orders)))
    gamma = X.cover.gamma_index
    geo = [i for i in geo if i != gamma]
    fixed = [x for x in itertools.product(*[range(d) for d in mod.d]) if all(tuple(mod.act_gen(i, x)) == tuple(x) for i in geo)]
    image_is_fixed = set(fixed) == image
    equiv = True
    if gamma is not None:
        gb_idx = Xb.cover.gamma_index
        for xb, xm in elems_b.items():
            yb = tuple(Mb.module.act_gen(gb_idx, xb))
            ym = tuple(mod.act_gen(gamma, xm))
            if elems_b.get(yb) != ym:
                equiv = False
                break
    ok = injective and image_is_fixed and equiv
    caveat = "T empty: constants contribute" if not T else ""
    return DescentReport(n, level, len(elems_b), len(fixed), len(image), injective, image_is_fixed, equiv, ok, caveat)
