import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffstark.exactalg import (
    FieldError,
    Polynomial,
    fq_make,
    hnf_membership,
    irreducibles_of_degree,
    poly_factor,
    smith_normal_form,
)
from ffstark.exactalg import poly as P
from ffstark.exactalg.intmat import cokernel_invariants, det, invariant_factors, kernel, matmul, mobius


def necklace(q, d):
    return sum(mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def brute_irreducible(F, f):
    """Trial division by every monic polynomial of degree <= deg f / 2."""
    n = P.deg(f)
    for d in range(1, n // 2 + 1):
        for g in P.monic_polys(F, d):
            if not P.mod(F, f, g):
                return False
    return True


# --- fields -------------------------------------------------------------


def test_prime_field_order_two():
    F = fq_make(2, 1)
    assert F.q == 2
    assert F.mul(1, 1) == 1 and F.add(1, 1) == 0


def test_f9_multiplicative_group_is_cyclic_of_order_8():
    F = fq_make(3, 2)
    assert F.q == 9
    orders = [F.order(a) for a in range(1, 9)]
    assert max(orders) == 8


def test_squares_mod_5():
    F = fq_make(5, 1)
    assert sorted({F.mul(a, a) for a in range(5)}) == [0, 1, 4]


def test_non_prime_and_bound_rejected():
    with pytest.raises(FieldError):
        fq_make(4, 1)
    with pytest.raises(FieldError):
        fq_make(2, 21)


def test_modulus_is_least_irreducible():
    F = fq_make(3, 2)
    mod = list(F.modulus)
    # every smaller monic quadratic (by encoding) is reducible
    key = mod[0] + 3 * mod[1]
    for a in range(key):
        assert not brute_irreducible(fq_make(3, 1), [a % 3, a // 3, 1])
    assert brute_irreducible(fq_make(3, 1), mod)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2), (2, 4)])
def test_field_axioms_and_frobenius(p, m):
    F = fq_make(p, m)
    rng = random.Random(p * 100 + m)
    for _ in range(200):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q) == a
        assert F.pth_root(F.frob(a)) == a


# --- polynomials --------------------------------------------------------


def test_factor_t2_plus_1_over_f2():
    F = fq_make(2)
    fs = poly_factor(Polynomial(F, [1, 0, 1]))
    assert [(list(g.c), k) for g, k in fs] == [([1, 1], 2)]


def test_factor_t2_plus_1_over_f5():
    F = fq_make(5)
    fs = poly_factor(Polynomial(F, [1, 0, 1]))
    got = sorted((list(g.c), k) for g, k in fs)
    # roots 2 and 3: t^2+1 = (t-2)(t-3) = (t+3)(t+2)
    assert got == [([2, 1], 1), ([3, 1], 1)]
    assert sorted(r for r in range(5) if (r * r + 1) % 5 == 0) == [2, 3]


def test_factor_t_over_f3():
    F = fq_make(3)
    assert [(list(g.c), k) for g, k in poly_factor(Polynomial(F, [0, 1]))] == [([0, 1], 1)]


def test_factor_zero_raises():
    with pytest.raises(ValueError):
        poly_factor(Polynomial(fq_make(3), []))


def test_irreducibles_small():
    F2 = fq_make(2)
    assert irreducibles_of_degree(F2, 1) == [[0, 1], [1, 1]]
    deg2 = irreducibles_of_degree(F2, 2)
    assert deg2 == [[1, 1, 1]]
    assert [f for f in P.monic_polys(F2, 2) if brute_irreducible(F2, f)] == deg2
    assert len(irreducibles_of_degree(fq_make(3), 1)) == 3


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_necklace_counts(q):
    from ffstark.exactalg import field_of_size

    F = field_of_size(q)
    for d in range(1, 7):
        if q ** d > 2 ** 20:
            continue
        irr = irreducibles_of_degree(F, d)
        assert len(irr) == necklace(q, d)
        assert len({tuple(f) for f in irr}) == len(irr)


@pytest.mark.parametrize("q,d", [(2, 4), (3, 3), (4, 2)])
def test_irreducibles_match_trial_division(q, d):
    from ffstark.exactalg import field_of_size

    F = field_of_size(q)
    brute = sorted((tuple(f) for f in P.monic_polys(F, d) if brute_irreducible(F, f)))
    assert sorted(tuple(f) for f in irreducibles_of_degree(F, d)) == brute


poly_st = st.lists(st.integers(0, 8), min_size=2, max_size=7)


@settings(max_examples=60, deadline=None)
@given(poly_st, poly_st, st.sampled_from([2, 3, 9]))
def test_factor_is_multiplicative(a, b, q):
    from ffstark.exactalg import field_of_size

    F = field_of_size(q)
    f = P.normalize([x % q for x in a])
    g = P.normalize([x % q for x in b])
    if P.deg(f) < 1 or P.deg(g) < 1:
        return
    _, ff = P.factor(F, f)
    _, fg = P.factor(F, g)
    _, fh = P.factor(F, P.mul(F, f, g))
    merged = {}
    for h, k in ff + fg:
        merged[tuple(h)] = merged.get(tuple(h), 0) + k
    assert {tuple(h): k for h, k in fh} == merged
    for h, _ in fh:
        assert P.is_irreducible(F, h)


# --- integer matrices ---------------------------------------------------


def test_snf_examples():
    U, D, V = smith_normal_form([[6, 0], [0, 2]])
    assert [D[0][0], D[1][1]] == [2, 6]
    assert matmul(matmul(U, [[6, 0], [0, 2]]), V) == D
    assert invariant_factors([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]
    assert cokernel_invariants([[0]], 1) == [0]


def brute_invariants(A):
    """d_1 ... d_k = gcd of k x k minors."""
    from math import gcd

    m, n = len(A), len(A[0])
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, det([[A[i][j] for j in cs] for i in rs]))
        if g == 0:
            out.extend([0] * (min(m, n) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


mat_st = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=80, deadline=None)
@given(mat_st, st.randoms(use_true_random=False))
def test_snf_against_minors_and_shuffles(A, rnd):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(A), len(A[0])))]
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
    assert diag == brute_invariants(A)
    rows = [list(r) for r in A]
    rnd.shuffle(rows)
    perm = list(range(len(A[0])))
    rnd.shuffle(perm)
    signs = [rnd.choice([-1, 1]) for _ in perm]
    B = [[s * r[j] for s, j in zip(signs, perm)] for r in rows]
    assert invariant_factors(B) == diag


def test_hnf_membership_examples():
    assert hnf_membership([[2, 0], [0, 2]], [4, 2])[0]
    assert not hnf_membership([[2, 0], [0, 2]], [1, 0])[0]
    ok, cert = hnf_membership([[1, 1], [0, 3]], [2, 5])
    assert ok and cert == [2, 1]
    with pytest.raises(ValueError):
        hnf_membership([[1, 2]], [1, 2, 3])


vec3 = st.lists(st.integers(-5, 5), min_size=3, max_size=3)


@settings(max_examples=80, deadline=None)
@given(st.lists(vec3, min_size=3, max_size=3), vec3)
def test_hnf_membership_against_search(B, x):
    ok, cert = hnf_membership(B, x)
    if ok:
        assert [sum(c * b[i] for c, b in zip(cert, B)) for i in range(3)] == x
    # bounded search; for unimodular-ish B any combination is small, otherwise
    # a failure to find is not proof of absence, so only check one direction
    found = any(
        [sum(c * b[i] for c, b in zip(cs, B)) for i in range(3)] == x
        for cs in itertools.product(range(-6, 7), repeat=3)
    )
    if found:
        assert ok
    if ok and det(B) != 0:
        assert found or max(abs(c) for c in cert) > 6


def test_kernel_is_exact():
    A = [[1, 2, 3], [2, 4, 6]]
    K = kernel(A)
    assert len(K) == 2
    for v in K:
        assert matmul(A, [[x] for x in v]) == [[0], [0]]
