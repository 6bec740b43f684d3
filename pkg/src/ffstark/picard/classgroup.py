"""Ray class groups Pic^0_Sigma(K) with their G-action.

Pic_Sigma(K) is presented as (Z^FB + (+)_{w in Sigma} Z/(Nw - 1)) modulo the
relations (div f, log f(w)) for functions f that are units along Sigma. Its
torsion is Pic^0_Sigma. Completeness of the harvested relations is certified by
comparing the order with h_K * prod (Nw - 1) / (r - 1) from the zeta oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..curves.cover import CoverError
from ..curves.curve import Curve, Divisor
from ..curves.rr import riemann_roch_basis
from ..curves.zeta import zeta_data
from ..exactalg.intmat import hnf, invariant_factors, matvec
from ..grpring.modules import GModule

DEFAULT_SEED = 20240611


class BudgetExceeded(CoverError):
    pass


@dataclass
class Budget:
    max_genus: int = 2
    max_order: int = 10 ** 4
    max_sigma: int = 6
    max_attempts: int = 400
    seed: int = DEFAULT_SEED


def _mat_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _mat_mul(A, B):
    n, m, k = len(A), len(B[0]) if B else 0, len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(k) if A[i][t]) for j in range(m)] for i in range(n)]


@dataclass
class Presentation:
    """Z^n / (row span of rels) with column-convention action matrices per generator of G."""

    G: object
    gens: list  # ("place", w) or ("ray", w)
    rels: list
    mats: list
    group_mats: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return len(self.gens)

    def index(self):
        return {g: i for i, g in enumerate(self.gens)}

    def element_matrix(self, g):
        if g not in self.group_mats:
            M = _mat_identity(self.n)
            for A, e in zip(self.mats, g):
                for _ in range(e):
                    M = _mat_mul(A, M)
            self.group_mats[g] = M
        return self.group_mats[g]

    def orbit_rows(self, row):
        out = []
        for g in self.G.elements():
            out.append(matvec(self.element_matrix(g), row))
        return out

    def invariants(self):
        diag = invariant_factors(self.rels, self.n) if self.rels else []
        diag = diag + [0] * (self.n - len(diag))
        return diag

    def torsion_order(self):
        diag = self.invariants()
        free = sum(1 for d in diag if d == 0)
        h = 1
        for d in diag:
            if d:
                h *= d
        return h, free


@dataclass
class RayClassGroup:
    module: GModule
    order: int
    class_number: int
    sigma: list
    P0: object
    presentation: Presentation = field(repr=False)
    curve: Curve = field(repr=False)
    relations_used: int = 0
    fb_degree: int = 1

    @property
    def invariant_factors(self):
        return list(self.module.d)

    def class_vector(self, D: Divisor, ray_logs=None):
        """Ambient coordinates of a divisor supported on the generators."""
        idx = self.presentation.index()
        v = [0] * self.presentation.n
        for w, k in D.c.items():
            v[idx[("place", w)]] += k
        for w, a in (ray_logs or {}).items():
            v[idx[("ray", w)]] += a
        return v

    def coords(self, v):
        """Module coordinates of an ambient degree-0 vector."""
        proj = self.module._from_ambient
        return [sum(a * b for a, b in zip(row, v)) % d for row, d in zip(proj, self.module.d)]

    def to_dict(self):
        return {
            "order": self.order,
            "class_number": self.class_number,
            "invariant_factors": self.invariant_factors,
            "sigma": [w.label() for w in self.sigma],
            "P0": self.P0.label(),
            "action": self.module.mats,
            "relations_used": self.relations_used,
        }


def ray_factor(X: Curve, sigma):
    r = X.F.q
    if not sigma:
        return 1
    num = 1
    for w in sigma:
        num *= w.norm - 1
    return num // (r - 1)


class _Harvester:
    def __init__(self, X: Curve, pres: Presentation, sigma, fb_set, maxdeg, rng):
        self.X = X
        self.pres = pres
        self.sigma = sigma
        self.fb = fb_set
        self.maxdeg = maxdeg
        self.rng = rng
        self.idx = pres.index()
        self.count = 0

    def relation(self, f):
        X = self.X
        if f.is_zero():
            return None
        D = X.divisor_of(f, smooth_bound=self.maxdeg)
        if D is None:
            return None
        row = [0] * self.pres.n
        for w, k in D.c.items():
            if w in self.sigma or w not in self.fb:
                return None
            row[self.idx[("place", w)]] += k
        for w in self.sigma:
            row[self.idx[("ray", w)]] = X.residue_log(f, w)
        return row

    def add(self, row):
        if row is None or not any(row):
            return False
        self.pres.rels.extend(self.pres.orbit_rows(row))
        self.pres.rels = hnf(self.pres.rels)[0]
        self.count += 1
        return True

    def random_combo(self, basis):
        F = self.X.F
        x = self.X.K.zero()
        for b in basis:
            c = self.rng.randrange(F.q)
            if c:
                x = x + b.scale(c)
        return x


def _group_mats(X: Curve, gens, idx):
    c = X.cover
    mats = []
    n = len(gens)
    for gi in range(len(c.G.orders)):
        g = c.G.generator(gi)
        A = [[0] * n for _ in range(n)]
        for j, (kind, w) in enumerate(gens):
            w2, expo = X.act_place(g, w)
            if kind == "place":
                A[idx[("place", w2)]][j] += 1
            else:
                A[idx[("ray", w2)]][j] += expo % (w2.norm - 1)
        mats.append(A)
    return mats


def class_group(X: Curve, sigma=(), extra=(), budget: Budget | None = None, zd=None) -> RayClassGroup:
    """Pic^0_Sigma(K) with G-action; ``extra`` places are added to the generators."""
    budget = budget or Budget()
    c = X.cover
    g = X.genus
    if g > budget.max_genus:
        raise BudgetExceeded(f"genus {g} exceeds budget {budget.max_genus}")
    sigma = sorted(set(X.orbit_sum(sigma))) if sigma else []
    if len(sigma) > budget.max_sigma:
        raise BudgetExceeded(f"|Sigma_K| = {len(sigma)} exceeds budget")
    zd = zd or zeta_data(c)
    hK = zd.class_number()
    target = hK * ray_factor(X, sigma)
    if target > budget.max_order:
        raise BudgetExceeded(f"class group order {target} exceeds budget {budget.max_order}")
    P0 = X.degree_one_place(avoid=sigma)
    if P0 is None:
        raise CoverError("no degree-1 place outside Sigma at this constant level")
    fbdeg = max(g, 1)
    for _ in range(3):
        try:
            return _class_group_fb(X, sigma, extra, budget, target, hK, P0, fbdeg)
        except _NotGenerated:
            fbdeg += 1
    raise BudgetExceeded("factor base does not generate the class group")


class _NotGenerated(Exception):
    pass


def _factor_base(X, sigma, extra, P0, fbdeg):
    g = X.genus
    base = set(X.places_up_to(fbdeg)) if g >= 1 else {P0}
    base |= set(X.orbit_sum([P0]))
    if extra:
        base |= set(X.orbit_sum(extra))
    return sorted(base - set(sigma))


def _class_group_fb(X, sigma, extra, budget, target, hK, P0, fbdeg):
    c = X.cover
    g = X.genus
    rng = random.Random(budget.seed)
    fb = _factor_base(X, sigma, extra, P0, fbdeg)
    gens = [("place", w) for w in fb] + [("ray", w) for w in sigma]
    idx = {gg: i for i, gg in enumerate(gens)}
    mats = _group_mats(X, gens, idx)
    pres = Presentation(c.G, gens, [], mats)
    n = len(gens)
    rels = []
    for w in sigma:
        row = [0] * n
        row[idx[("ray", w)]] = w.norm - 1
        rels.append(row)
    if sigma:
        F = X.F
        gen = F.exp(1) if F.q > 2 else 1
        row = [0] * n
        for w in sigma:
            row[idx[("ray", w)]] = X.constant_log(gen, w)
        rels.append(row)
    pres.rels = hnf(rels)[0] if rels else []
    maxdeg = max(w.degree for w in fb)
    if sigma:
        maxdeg = max(maxdeg, max(w.degree for w in sigma))
    H = _Harvester(X, pres, set(sigma), set(fb), maxdeg, rng)
    # one relation tying each generator to P0
    loose = []
    for w in fb:
        if w == P0:
            continue
        got = False
        for s in range(0, 6):
            D = Divisor.place(P0, w.degree + g + s) - Divisor.place(w)
            B = riemann_roch_basis(X, D).basis
            cands = list(B) + [H.random_combo(B) for _ in range(4 + 2 * s)]
            for f in cands:
                if H.add(H.relation(f)):
                    got = True
                    break
            if got:
                break
        if not got:
            # left to the pair relations below
            loose.append(w)
    order, free = pres.torsion_order()
    attempts = 0
    cap = max(budget.max_attempts, 10 * len(fb))
    small = sorted(set(w for w in fb if w.degree <= fbdeg) | set(loose))
    while (order != target or free != 1) and attempts < cap:
        if free == 1 and order < target:
            raise _NotGenerated()
        for _ in range(8):
            attempts += 1
            # residual divisor of degree g lands in the factor base
            ws = [rng.choice(small) for _ in range(2 if attempts % 3 else 3)]
            slack = 0 if attempts < 4 * len(small) else rng.randrange(3)
            D = Divisor.place(P0, sum(w.degree for w in ws) + g + slack)
            for w in ws:
                D = D - Divisor.place(w)
            B = riemann_roch_basis(X, D).basis
            if B:
                H.add(H.relation(B[0] if len(B) == 1 else H.random_combo(B)))
        order, free = pres.torsion_order()
    if order != target or free != 1:
        if free == 1 and order < target:
            raise _NotGenerated()
        raise BudgetExceeded(f"relation harvesting stopped at order {order} (target {target})")
    if sigma and g >= 1 and any(w.degree <= fbdeg for w in sigma):
        _check_generation(X, fb, extra, P0, fbdeg, sigma, budget)
    M = GModule.from_presentation(c.G, n, pres.rels, mats, torsion_only=True)
    if M.order != target or M.free_rank != 1:
        raise CoverError("inconsistent class group presentation")
    return RayClassGroup(M, target, hK, sigma, P0, pres, X, H.count, fbdeg)


def _check_generation(X, fb, extra, P0, fbdeg, sigma, budget=None):
    """FB outside Sigma must generate Pic(K)."""
    full = class_group(X, (), extra=list(extra) + list(sigma) + list(fb), budget=budget)
    pres = full.presentation
    idx = pres.index()
    rows = [list(r) for r in pres.rels]
    for w in fb:
        e = [0] * pres.n
        e[idx[("place", w)]] = 1
        rows.append(e)
    diag = invariant_factors(rows, pres.n)
    if len(diag) < pres.n or any(d != 1 for d in diag):
        raise _NotGenerated()


def mu_K(cover) -> GModule:
    """mu_K = F_r^x: trivial geometric action, gamma acts by x -> x^q."""
    G = cover.G
    r = cover.r
    mats = []
    for i, _ in enumerate(G.orders):
        if cover.gamma_index is not None and i == cover.gamma_index:
            mats.append([[cover.q % (r - 1)]])
        else:
            mats.append([[1]])
    if r == 2:
        return GModule(G, [], [[] for _ in G.orders])
    return GModule(G, [r - 1], mats)
