"""Nakajima freeness and the Deuring-Shafarevich formula."""

from __future__ import annotations

from ..curves.cover import Cover, CoverError
from ..curves.curve import Curve
from ..exactalg.fields import embedding, field_of_size
from ..exactalg.intmat import solve_mod_p
from ..grpring.modules import GModule, is_free_over_lgroup
from ..lfun.verify import VerificationReport
from .operator import CartierError, FixedSpace, _digits, fixed_space, hasse_witt, omega_basis


def _labels(vs):
    return [v.label() for v in sorted(vs, key=lambda v: v.sort_key())]


def fixed_space_module(fs: FixedSpace) -> GModule:
    """Omega(-[S])^{C=1} as an F_p[G]-module (G geometric, no constant layer)."""
    sp = fs.space
    c = sp.cover
    if c.n != 1:
        raise CartierError("the G-action on fixed points needs a cover without constant layer")
    G = c.G
    X = sp.curve
    F = X.F
    p = c.p
    FR = field_of_size(fs.field_size)
    emb = embedding(F, FR)
    e = FR.m
    d = sp.dimension
    k = fs.dimension
    flat = [[x for a in v for x in _digits(FR, a, e)] for v in fs.vectors]
    mats = []
    for gi in range(len(G.orders)):
        g = G.generator(gi)
        T = [sp.coords(X.K.act(g, b)) for b in sp.basis]
        if any(col is None for col in T):
            raise CartierError("G does not preserve Omega(-[S])")
        A = [[0] * k for _ in range(k)]
        for j, v in enumerate(fs.vectors):
            w = [FR.sum(FR.mul(emb(T[i][r]), v[i]) for i in range(d)) for r in range(d)]
            rhs = [x for a in w for x in _digits(FR, a, e)]
            rows = [[flat[t][r] for t in range(k)] for r in range(d * e)]
            sol = solve_mod_p(rows, rhs, p)
            if sol is None:
                raise CartierError("fixed space is not G-stable")
            for i in range(k):
                A[i][j] = sol[i] % p
        mats.append(A)
    return GModule(G, [p] * k, mats)


def verify_nakajima(c: Cover, S) -> VerificationReport:
    """Omega(-[S])^{C=1} is F_p[G]-free of rank gamma' - 1 + |S'_geom| (base P^1, gamma' = 0)."""
    if c.n != 1 or c.kummer:
        raise CoverError("Nakajima check expects an Artin-Schreier or trivial cover without constant layer")
    S = sorted(set(S), key=lambda v: v.sort_key())
    if not S:
        raise CoverError("S must be nonempty")
    if not set(c.ramified_places()) <= set(S):
        raise CoverError("S must contain the ramified places")
    X = Curve(c)
    sp = omega_basis(c, S, X)
    fs = fixed_space(sp)
    M = fixed_space_module(fs)
    p = c.p
    gammaK = hasse_witt(c, X)
    s_geom = sum(w.degree for w in X.places_above_set(S))
    s_base = sum(v.degree for v in S)
    expect_rank = 0 - 1 + s_base
    if M.k == 0:
        free, rank, method = True, 0, "zero"
    elif c.G.order == 1:
        free, rank, method = True, M.k, "trivial group"
    else:
        free, rank, method = is_free_over_lgroup(M, p)
    checks = {
        "dimension_formula": fs.dimension == gammaK - 1 + s_geom,
        "free": free,
        "rank_formula": rank == expect_rank,
    }
    return VerificationReport(
        "Nakajima freeness",
        {"cover": c.to_record(), "S": _labels(S)},
        checks,
        {
            "dimension": fs.dimension,
            "gamma_K": gammaK,
            "S_geom": s_geom,
            "rank": rank,
            "method": method,
            "level": fs.level,
            "history": fs.history,
            "action": M.mats,
        },
        {"level": fs.level},
    )


def verify_deuring_shafarevich(c: Cover) -> VerificationReport:
    """gamma_K from the stable Cartier rank against the formula from base data."""
    if c.kummer:
        raise CoverError("G must be a p-group")
    X = Curve(c)
    stable = hasse_witt(c, X)
    formula = c.hasse_witt_formula()
    checks = {"gamma_equal": stable == formula}
    ram = c.ramified_places()
    if ram:
        s_geom = sum(w.degree for w in X.places_above_set(ram))
        s_base = sum(v.degree for v in ram)
        checks["rewritten_form"] = stable - 1 + s_geom == c.G.order * (0 - 1 + s_base)
    return VerificationReport(
        "Deuring-Shafarevich",
        {"cover": c.to_record()},
        checks,
        {"gamma_stable_rank": stable, "gamma_formula": formula, "genus": X.genus},
    )


def jordan_type(M: GModule, p: int, gen: int = 0):
    """Ranks of (A - 1)^k for the chosen cyclic generator; an isomorphism invariant that
    classifies F_p[C_{p^a}]-modules."""
    from ..exactalg.intmat import rank_mod_p

    k = M.k
    if k == 0:
        return []
    A = M.mats[gen]
    B = [[(A[i][j] - int(i == j)) % p for j in range(k)] for i in range(k)]
    out = []
    P_ = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(k):
        P_ = [[sum(P_[i][t] * B[t][j] for t in range(k)) % p for j in range(k)] for i in range(k)]
        r = rank_mod_p(P_, p)
        out.append(r)
        if r == 0:
            break
    return out


def compare_with_torsion(c: Cover, S, T=()) -> VerificationReport:
    """M_{S,T}[p] from the class group side against Omega(-[S])^{C=1} at the same level."""
    from ..picard.torsion import torsion_module

    if c.G.order > 1 and len(c.G.orders) != 1:
        raise CoverError("comparison implemented for cyclic G")
    X = Curve(c)
    fs = fixed_space(omega_basis(c, S, X))
    F = fixed_space_module(fs)
    Tm = torsion_module(c, S, T, c.p, level=fs.level)
    M = Tm.module
    checks = {
        "invariant_factors": sorted(M.d) == sorted(F.d),
        "jordan_type": (jordan_type(M, c.p) == jordan_type(F, c.p)) if c.G.order > 1 else True,
    }
    return VerificationReport(
        "p-torsion against logarithmic differentials",
        {"cover": c.to_record(), "S": _labels(S), "T": _labels(T)},
        checks,
        {"torsion": list(M.d), "fixed": list(F.d), "level": fs.level},
    )
