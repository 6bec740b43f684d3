import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffstark.exactalg.intmat import rank_mod_p
from ffstark.grpring import (
    AbGroup,
    Cyclo,
    EquivariantPolynomial,
    GModule,
    GroupRingElement,
    IdealZG,
    annihilator,
    characters,
    charpoly_presentation,
    dualize,
    fitting_ideal,
    fitting_ideal_of_matrix,
    grp_poly_eval,
    ideal_contains,
    is_free_over_lgroup,
    tate_twist_map,
)

GROUPS = [AbGroup([]), AbGroup([2]), AbGroup([3]), AbGroup([4]), AbGroup([2, 2])]


def regular_mats(G, a=1):
    """Column-convention action of the generators on Z[G]^a (blocks of size |G|)."""
    n = G.order
    mats = []
    for gi in range(len(G.orders)):
        g = G.generator(gi)
        P = [[0] * (a * n) for _ in range(a * n)]
        for b in range(a):
            for j, h in enumerate(G.elements()):
                P[b * n + G.index(G.op(g, h))][b * n + j] = 1
        mats.append(P)
    return mats


def translates_block(G, v, a):
    n = G.order
    out = []
    for g in G.elements():
        w = [0] * (a * n)
        for b in range(a):
            for j, h in enumerate(G.elements()):
                w[b * n + G.index(G.op(g, h))] += v[b * n + j]
        out.append(w)
    return out


def random_module(rng, G=None, N=None, a=None, nrel=None):
    """Quotient of (Z/N)[G]^a by random R[G]-relations."""
    G = G or rng.choice(GROUPS)
    N = N or rng.choice([2, 3, 4, 6])
    a = a or rng.choice([1, 1, 2])
    n = a * G.order
    rels = []
    for _ in range(nrel if nrel is not None else rng.randrange(0, 3)):
        v = [rng.randrange(-2, 3) for _ in range(n)]
        rels.extend(translates_block(G, v, a))
    rels.extend([[N * int(i == j) for j in range(n)] for i in range(n)])
    return GModule.from_presentation(G, n, rels, regular_mats(G, a), N)


def zg(G, coeffs, mod=0):
    return GroupRingElement(G, coeffs, mod)


# --- group ring elements -------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(GROUPS[1:]), st.data())
def test_ring_axioms_and_augmentation(G, data):
    vec = st.lists(st.integers(-5, 5), min_size=G.order, max_size=G.order)
    a, b, c = (zg(G, data.draw(vec)) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * b).augmentation() == a.augmentation() * b.augmentation()


def test_serialization_roundtrip():
    G = AbGroup([2, 3])
    x = zg(G, {(0, 0): 4, (1, 2): -3})
    d = x.to_dict()
    assert d["group"] == [2, 3]
    assert d["coeffs"] == {"0,0": "4", "1,2": "-3"}
    assert GroupRingElement.from_dict(d) == x


# --- characters ----------------------------------------------------------


def test_trivial_group_characters():
    chis = characters(AbGroup([]))
    assert len(chis) == 1 and chis[0].is_trivial()


def test_c2_characters():
    G = AbGroup([2])
    vals = sorted(tuple(c((1,)).c) for c in characters(G))
    assert vals == [(Fraction(-1),), (Fraction(1),)]


@pytest.mark.parametrize("orders", [[4], [2, 2], [3], [2, 3], [4, 2]])
def test_orthogonality_and_idempotents(orders):
    G = AbGroup(orders)
    chis = characters(G)
    assert len(chis) == G.order
    assert len(set(chis)) == G.order
    for c1, c2 in itertools.product(chis, repeat=2):
        s = Cyclo.const(G.exponent, 0)
        for g in G.elements():
            s = s + c1(g) * c2(g).conj()
        assert s == (G.order if c1 == c2 else 0)
    # sum of idempotents is 1 in Q(zeta)[G]
    total = {g: Cyclo.const(G.exponent, 0) for g in G.elements()}
    for chi in chis:
        for g, v in chi.idempotent().items():
            total[g] = total[g] + v
    for g, v in total.items():
        assert v == (1 if g == G.identity() else 0)


def test_c4_values_in_gaussian_integers():
    G = AbGroup([4])
    i = Cyclo.zeta_power(4, 1)
    assert i * i == -1
    assert all(c((1,)).is_integral() for c in characters(G))


# --- Fitting ideals -----------------------------------------------------


def test_fit_diag_6_2():
    G = AbGroup([])
    M = GModule.from_presentation(G, 2, [[6, 0], [0, 2]], [])
    I = fitting_ideal(M)
    assert I.lattice == [[12]]


def test_fit_z_c2_mod_2_sigma_minus_1():
    G = AbGroup([2])
    M = GModule.from_presentation(G, 2, [[2, 0], [0, 2], [-1, 1]], [[[0, 1], [1, 0]]])
    expected = IdealZG(G, [zg(G, [2, 0]), zg(G, [-1, 1])])
    assert fitting_ideal(M) == expected


def test_fit_zero_module_is_unit():
    G = AbGroup([3])
    Z = GModule(G, [], [[]])
    assert fitting_ideal(Z).is_unit_ideal()
    assert annihilator(Z).is_unit_ideal()


def test_ideal_contains_examples():
    G = AbGroup([2])
    I = IdealZG(G, [zg(G, [2, 0]), zg(G, [-1, 1])])
    assert ideal_contains(I, zg(G, [1, 1]))
    T = AbGroup([])
    assert not ideal_contains(IdealZG(T, [zg(T, [12])]), zg(T, [6]))
    with pytest.raises(ValueError):
        ideal_contains(I, zg(AbGroup([3]), [1, 0, 0]))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GROUPS), st.data())
def test_principal_ideal_membership(G, data):
    vec = st.lists(st.integers(-4, 4), min_size=G.order, max_size=G.order)
    h, r = zg(G, data.draw(vec)), zg(G, data.draw(vec))
    assert ideal_contains(IdealZG(G, [h]), h * r)


def test_annihilator_examples():
    T = AbGroup([])
    assert annihilator(GModule.trivial(T, [6])).lattice == [[6]]
    for ell in (2, 3):
        G = AbGroup([ell])
        ann = annihilator(GModule.regular(G, ell))
        assert ann == IdealZG(G, [zg(G, [ell] + [0] * (ell - 1))], ell)
        assert ann.lattice == [[ell * int(i == j) for j in range(ell)] for i in range(ell)]


def test_fit_and_ann_sandwich():
    rng = random.Random(7)
    for _ in range(50):
        M = random_module(rng)
        fit = fitting_ideal(M)
        ann = annihilator(M)
        m = len(M.presentation[0])
        assert fit.issubset(ann)
        assert ann.power(m).issubset(fit)


def test_fit_independent_of_presentation():
    rng = random.Random(11)
    for _ in range(15):
        M = random_module(rng)
        if M.k == 0:
            continue
        std = [[int(i == j) for j in range(M.k)] for i in range(M.k)]
        assert fitting_ideal(M) == fitting_ideal(M, gens=std)


def test_fit_diagonal_brute_force_minors():
    # Fit of (+) Z/d_i over Z is (prod d_i)
    rng = random.Random(3)
    T = AbGroup([])
    for _ in range(20):
        ds = [rng.randrange(2, 9) for _ in range(rng.randrange(1, 4))]
        M = GModule.from_presentation(T, len(ds), [[d * int(i == j) for j, _ in enumerate(ds)] for i, d in enumerate(ds)], [])
        prod = 1
        for d in ds:
            prod *= d
        assert fitting_ideal(M).lattice == [[prod]]


# --- freeness -----------------------------------------------------------


def test_free_examples():
    C3 = AbGroup([3])
    assert is_free_over_lgroup(GModule.regular(C3, 3), 3)[:2] == (True, 1)
    assert is_free_over_lgroup(GModule.trivial(C3, [3], 3), 3)[0] is False
    assert is_free_over_lgroup(GModule.regular(C3, 3, rank=2), 3)[:2] == (True, 2)
    with pytest.raises(ValueError):
        is_free_over_lgroup(GModule.regular(AbGroup([6]), 3), 3)


def jordan_module(ell, sizes, rng):
    """F_ell[C_ell]-module with generator acting by unipotent Jordan blocks, in a random basis."""
    n = sum(sizes)
    J = [[int(i == j) for j in range(n)] for i in range(n)]
    pos = 0
    for s in sizes:
        for i in range(pos, pos + s - 1):
            J[i][i + 1] = 1
        pos += s
    while True:
        Pm = [[rng.randrange(ell) for _ in range(n)] for _ in range(n)]
        if rank_mod_p(Pm, ell) == n:
            break
    from ffstark.exactalg.intmat import rational_inverse

    inv = rational_inverse(Pm)
    Pinv = [[(x.numerator * pow(x.denominator, -1, ell)) % ell for x in row] for row in inv]

    def mm(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(n)) % ell for j in range(n)] for i in range(n)]

    A = mm(mm(Pm, J), Pinv)
    return GModule(AbGroup([ell]), [ell] * n, [A], ell)


def exhaustive_free(M, ell):
    """Search for r = dim/ell elements whose translates span M."""
    n = M.k
    if n % ell:
        return False
    r = n // ell
    A = M.mats[0]
    vecs = list(itertools.product(range(ell), repeat=n))

    def orbit(x):
        out = [list(x)]
        for _ in range(ell - 1):
            out.append([sum(A[i][j] * out[-1][j] for j in range(n)) % ell for i in range(n)])
        return out

    def rref(rows):
        M = [[x % ell for x in r] for r in rows]
        out, r = [], 0
        for c in range(n):
            piv = next((i for i in range(r, len(M)) if M[i][c]), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            inv = pow(M[r][c], -1, ell)
            M[r] = [(x * inv) % ell for x in M[r]]
            for i in range(len(M)):
                if i != r and M[i][c]:
                    f = M[i][c]
                    M[i] = [(x - f * y) % ell for x, y in zip(M[i], M[r])]
            r += 1
        return tuple(tuple(row) for row in M[:r])

    seen = {}

    def search(span, depth):
        if depth == r:
            return len(span) == n
        if span in seen:
            return seen[span]
        ok = False
        for x in vecs:
            new = rref(list(span) + orbit(x))
            if len(new) == len(span) + ell and search(new, depth + 1):
                ok = True
                break
        seen[span] = ok
        return ok

    return search((), 0)


@pytest.mark.parametrize("ell", [2, 3])
def test_freeness_agrees_with_exhaustive_search(ell):
    rng = random.Random(ell)
    for total in range(1, 7):
        parts = [p for p in _partitions(total, ell)]
        for sizes in parts:
            M = jordan_module(ell, sizes, rng)
            free, rank, _ = is_free_over_lgroup(M, ell)
            assert free == exhaustive_free(M, ell)
            assert free == all(s == ell for s in sizes)
            if free:
                assert rank == total // ell


def _partitions(n, maxpart):
    if n == 0:
        yield []
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


# --- duals --------------------------------------------------------------


def test_dual_examples():
    C2 = AbGroup([2])
    triv = GModule.trivial(C2, [4, 2])
    assert dualize(triv).mats == triv.mats
    M = GModule(AbGroup([4]), [5], [[[2]]], 5)
    assert dualize(M, "covariant").mats == [[[2]]]
    N = GModule(AbGroup([4]), [3, 3], [[[0, 1], [2, 0]]], 3)
    D = dualize(N, "contravariant")
    # inverse of [[0,1],[2,0]] mod 3 is [[0,2],[1,0]]; its transpose is [[0,1],[2,0]]
    A = N.mats[0]
    Ainv = [[0, 2], [1, 0]]
    assert [[sum(A[i][k] * Ainv[k][j] for k in range(2)) % 3 for j in range(2)] for i in range(2)] == [[1, 0], [0, 1]]
    assert D.mats == [[list(r) for r in zip(*Ainv)]]


def test_dual_is_well_defined_pairing():
    rng = random.Random(5)
    for _ in range(20):
        M = random_module(rng)
        D = dualize(M, "covariant")
        # <f, g m> == <g f, m> for the pairing sum f_i m_i / d_i
        for gi in range(len(M.G.orders)):
            g = M.G.generator(gi)
            for _ in range(5):
                m = [rng.randrange(x) for x in M.d]
                f = [rng.randrange(x) for x in M.d]

                def pair(f, m):
                    return sum(Fraction(a * b, d) for a, b, d in zip(f, m, M.d)) % 1

                assert pair(f, M.act(g, m)) == pair(D.act(g, f), m)


def test_fit_of_covariant_dual():
    # M = (Z/mod)^n free over R with a cyclic action, as the duality statement requires
    rng = random.Random(13)
    for mod, N in [(4, 2), (5, 4), (9, 3), (8, 2)]:
        for n in (1, 2, 3):
            A = random_order_dividing(rng, n, mod, N)
            M = GModule(AbGroup([N]), [mod] * n, [A], mod)
            assert fitting_ideal(M) == fitting_ideal(dualize(M, "covariant"))


def test_dual_equality_needs_the_freeness_hypothesis():
    # Z/2 + Z/4 with both generators of C2 x C2 unipotent: cyclic, not Z-free
    G = AbGroup([2, 2])
    A = [[1, 1], [0, 1]]
    M = GModule(G, [2, 4], [A, A], 4)
    assert fitting_ideal(M) == annihilator(M)
    assert fitting_ideal(M) != fitting_ideal(dualize(M, "covariant"))


# --- twists and charpoly presentations ---------------------------------


def test_tate_twist_basics():
    G = AbGroup([4])
    t0 = tate_twist_map(0, 2, 5, G, 0)
    t1 = tate_twist_map(1, 2, 5, G, 0)
    tm1 = tate_twist_map(-1, 2, 5, G, 0)
    x = zg(G, [1, 2, 3, 4], 5)
    assert t0(x) == x
    gamma = GroupRingElement.group_elt(G, (1,), 1, 5)
    assert t1(gamma) == gamma * 2
    assert tm1(t1(x)) == x
    with pytest.raises(ValueError):
        tate_twist_map(1, 5, 5, G, 0)


def random_order_dividing(rng, n, mod, N):
    while True:
        A = [[rng.randrange(mod) for _ in range(n)] for _ in range(n)]
        P = [row[:] for row in A]
        for _ in range(N - 1):
            P = [[sum(P[i][k] * A[k][j] for k in range(n)) % mod for j in range(n)] for i in range(n)]
        if all((P[i][j] - int(i == j)) % mod == 0 for i in range(n) for j in range(n)):
            return A


def test_twist_of_module_matches_twisted_fit():
    rng = random.Random(17)
    G = AbGroup([4])
    for _ in range(8):
        A = random_order_dividing(rng, 2, 5, 4)
        M = GModule(G, [5, 5], [A], 5)
        for n in (1, 2, 3):
            twisted = M.twist(n, 2, 0)
            t = tate_twist_map(-n, 2, 5, G, 0)
            assert fitting_ideal(twisted) == fitting_ideal(M).map(t)


def test_charpoly_examples():
    cp = charpoly_presentation([[1]], 1, 4)
    assert cp.exact
    assert cp.det.is_zero()
    assert fitting_ideal(cp.module).lattice == [[4]]  # (0) in Z/4
    cp = charpoly_presentation([[3]], 2, 8)
    assert cp.exact and cp.cokernel_order == 8
    # enumerate the cokernel: (Z/8)[C_2] / (1 - 3 g^{-1})
    G = AbGroup([2])
    rel = zg(G, [1, -3], 8)
    image = {tuple((rel * zg(G, [a, b], 8)).c) for a in range(8) for b in range(8)}
    assert 64 // len(image) == 8
    cp = charpoly_presentation([[0, 1], [1, 0]], 2, 3)
    assert cp.exact
    assert ideal_contains(cp.fitting_ideal(), cp.det)
    with pytest.raises(ValueError):
        charpoly_presentation([[2]], 1, 5)


def test_charpoly_det_equals_fit_of_cokernel():
    rng = random.Random(19)
    for mod in (2, 3, 4, 5, 8, 9):
        for n in (1, 2, 3):
            for N in (1, 2, 3, 4):
                if mod ** n > 9 ** 2 and n == 3:
                    continue
                A = random_order_dividing(rng, n, mod, N) if N > 1 else [[int(i == j) for j in range(n)] for i in range(n)]
                cp = charpoly_presentation(A, N, mod)
                assert cp.exact
                assert cp.det_ideal() == fitting_ideal(cp.module)
                assert cp.det_ideal() == cp.fitting_ideal()


# --- polynomial evaluation ---------------------------------------------


def test_grp_poly_eval_examples():
    T = AbGroup([])
    P = EquivariantPolynomial(T, [[1], [-1]])
    assert grp_poly_eval(P, 1).is_zero()
    G = AbGroup([2])
    Theta = EquivariantPolynomial(G, [zg(G, [1, 0]), zg(G, [-3, 2])])
    assert grp_poly_eval(Theta, 1) == zg(G, [-2, 2])
    c = EquivariantPolynomial(G, [zg(G, [5, 7])])
    assert all(grp_poly_eval(c, u) == zg(G, [5, 7]) for u in (0, 1, 9))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_eval_is_ring_morphism(data):
    G = AbGroup([3])
    coef = st.lists(st.integers(-3, 3), min_size=3, max_size=3)
    P = EquivariantPolynomial(G, [data.draw(coef) for _ in range(data.draw(st.integers(1, 3)))])
    Q = EquivariantPolynomial(G, [data.draw(coef) for _ in range(data.draw(st.integers(1, 3)))])
    u = data.draw(st.integers(-3, 5))
    assert (P * Q).evaluate(u) == P.evaluate(u) * Q.evaluate(u)
    assert (P + Q).evaluate(u) == P.evaluate(u) + Q.evaluate(u)
