"""Finite modules over R[G], their Fitting ideals, annihilators and duals."""

from __future__ import annotations

import itertools
from functools import cached_property
from math import prod

from ..exactalg.intmat import (
    hnf_membership,
    kernel_mod,
    lattice_basis,
    matmul,
    nullspace_mod_p,
    smith_normal_form,
    unimodular_inverse,
)
from .group import AbGroup, GroupRingElement


def _mat_pow(A, k, d):
    n = len(A)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [list(r) for r in A]
    while k:
        if k & 1:
            R = _reduce_rows(matmul(R, B), d)
        B = _reduce_rows(matmul(B, B), d)
        k >>= 1
    return R


def _reduce_rows(A, d):
    return [[x % di if di else x for x in row] for row, di in zip(A, d)]


class GModule:
    """A finite module M = (+)_i Z/d_i with G acting through integer matrices.

    ``mats[j]`` is the action of the j-th cyclic generator of G in the column
    convention: g.x = A x (mod d). ``modulus`` records the base ring (0 for Z,
    N for Z/N); N must kill M.
    """

    def __init__(self, G: AbGroup, d, mats, modulus: int = 0, labels=None, check=True):
        self.G = G
        self.d = [int(x) for x in d]
        self.k = len(self.d)
        self.modulus = int(modulus)
        self.mats = [_reduce_rows([list(r) for r in A], self.d) for A in mats]
        self.labels = list(labels) if labels else [f"e{i}" for i in range(self.k)]
        if len(self.mats) != len(G.orders):
            raise ValueError("need one action matrix per cyclic generator of G")
        if check:
            self._check()

    def _check(self):
        if any(x <= 0 for x in self.d):
            raise ValueError("only finite modules are supported")
        if self.modulus and any(self.modulus % x for x in self.d):
            raise ValueError("modulus does not kill the module")
        for A in self.mats:
            for i in range(self.k):
                for j in range(self.k):
                    if (A[i][j] * self.d[j]) % self.d[i]:
                        raise ValueError("action matrix is not well defined on the invariant factors")
        for A, n in zip(self.mats, self.G.orders):
            if not self._is_identity(_mat_pow(A, n, self.d)):
                raise ValueError("action matrix order does not divide the generator order")
        for A, B in itertools.combinations(self.mats, 2):
            if _reduce_rows(matmul(A, B), self.d) != _reduce_rows(matmul(B, A), self.d):
                raise ValueError("action matrices do not commute")

    def _is_identity(self, A):
        return all((A[i][j] - int(i == j)) % self.d[i] == 0 for i in range(self.k) for j in range(self.k))

    def __repr__(self):
        return f"GModule(G={list(self.G.orders)}, d={self.d})"

    # constructors
    @classmethod
    def from_presentation(cls, G: AbGroup, n, relations, actions, modulus=0, labels=None, torsion_only=False):
        """M = Z^n / (row span of ``relations``) with column-convention ``actions`` on Z^n.

        The relation lattice must be G-stable. It must have full rank unless
        ``torsion_only`` is set, in which case the torsion submodule is returned
        and the free rank is stored as ``free_rank``.
        """
        rels = [list(r) for r in relations]
        if modulus:
            rels += [[modulus * int(i == j) for j in range(n)] for i in range(n)]
        if not rels:
            rels = [[0] * n]
        _, D, V = smith_normal_form(rels)
        diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
        if any(x == 0 for x in diag) and not torsion_only:
            raise ValueError("presentation does not define a finite module")
        # row vector x corresponds to y = x V; as columns y = V^T x
        Vt = [list(r) for r in zip(*V)]
        Vt_inv = unimodular_inverse(Vt)
        keep = [i for i in range(n) if diag[i] not in (0, 1)]
        new_d = [diag[i] for i in keep]
        mats = []
        for A in actions:
            Ap = matmul(matmul(Vt, A), Vt_inv)
            mats.append([[Ap[i][j] for j in keep] for i in keep])
        # basis change data: Z^n column x -> module coordinates
        proj = [[Vt[i][j] for j in range(n)] for i in keep]
        M = cls(G, new_d, mats, modulus, labels=None)
        M._from_ambient = proj
        M.free_rank = sum(1 for x in diag if x == 0)
        return M

    @classmethod
    def regular(cls, G: AbGroup, modulus: int, rank: int = 1):
        """(Z/modulus)[G]^rank."""
        n = G.order
        mats = []
        for gi in range(len(G.orders)):
            g = G.generator(gi)
            P = [[0] * n for _ in range(n)]
            for j, h in enumerate(G.elements()):
                P[G.index(G.op(g, h))][j] = 1
            mats.append(P)
        M = cls(G, [modulus] * n, mats, modulus)
        return M.direct_sum_power(rank)

    @classmethod
    def trivial(cls, G: AbGroup, d, modulus=0):
        k = len(d)
        eye = [[int(i == j) for j in range(k)] for i in range(k)]
        return cls(G, d, [eye for _ in G.orders], modulus)

    def direct_sum(self, other: "GModule") -> "GModule":
        k1, k2 = self.k, other.k
        mats = []
        for A, B in zip(self.mats, other.mats):
            C = [[0] * (k1 + k2) for _ in range(k1 + k2)]
            for i in range(k1):
                C[i][:k1] = A[i]
            for i in range(k2):
                C[k1 + i][k1:] = B[i]
            mats.append(C)
        return GModule(self.G, self.d + other.d, mats, self.modulus, check=False)

    def direct_sum_power(self, r):
        if r == 0:
            return GModule(self.G, [], [[] for _ in self.G.orders], self.modulus)
        M = self
        for _ in range(r - 1):
            M = M.direct_sum(self)
        return M

    # element level
    @property
    def order(self):
        return prod(self.d)

    def elements(self):
        return itertools.product(*[range(x) for x in self.d])

    def reduce(self, x):
        return tuple(v % di for v, di in zip(x, self.d))

    def matrix_of(self, g):
        """Action matrix of an arbitrary group element (exponent tuple)."""
        R = [[int(i == j) for j in range(self.k)] for i in range(self.k)]
        for A, e in zip(self.mats, g):
            if e:
                R = _reduce_rows(matmul(R, _mat_pow(A, e, self.d)), self.d)
        return R

    @cached_property
    def all_matrices(self):
        return [self.matrix_of(g) for g in self.G.elements()]

    def act(self, g, x):
        A = self.matrix_of(g)
        return self.reduce([sum(a * b for a, b in zip(row, x)) for row in A])

    def act_gen(self, i, x):
        """Action of the i-th cyclic generator."""
        A = self.mats[i]
        return self.reduce([sum(a * b for a, b in zip(row, x)) for row in A])

    def ring_matrix(self, r: GroupRingElement):
        out = [[0] * self.k for _ in range(self.k)]
        for a, A in zip(r.c, self.all_matrices):
            if a:
                for i in range(self.k):
                    for j in range(self.k):
                        out[i][j] += a * A[i][j]
        return _reduce_rows(out, self.d)

    def act_ring(self, r: GroupRingElement, x):
        A = self.ring_matrix(r)
        return self.reduce([sum(a * b for a, b in zip(row, x)) for row in A])

    def span_lattice(self, vectors):
        """HNF basis of the preimage in Z^k of the Z[G]-submodule generated by ``vectors``."""
        vs = [[self.d[i] * int(i == j) for j in range(self.k)] for i in range(self.k)]
        for x in vectors:
            for A in self.all_matrices:
                vs.append([sum(a * b for a, b in zip(row, x)) for row in A])
        return lattice_basis(vs, self.k)

    def rg_generators(self):
        """A (greedy) list of R[G]-module generators, as coordinate vectors."""
        gens = []
        L = self.span_lattice([])
        for i in range(self.k):
            e = [int(i == j) for j in range(self.k)]
            if not hnf_membership(L, e)[0]:
                gens.append(e)
                L = self.span_lattice(gens)
        return gens

    def twist(self, n, q, gamma_index):
        """M(n): gamma acts by q^n times its old action."""
        mats = [list(map(list, A)) for A in self.mats]
        s = pow(q, n) if n >= 0 else None
        e = max(self.d) if self.d else 1
        if s is None:
            s = pow(pow(q, -1, e), -n, e) if e > 1 else 0
        mats[gamma_index] = [[s * a for a in row] for row in mats[gamma_index]]
        return GModule(self.G, self.d, mats, self.modulus)

    def quotient(self, vectors, G=None, drop=None):
        """M / <Z[G].vectors>; ``drop`` removes a cyclic factor of G that acts trivially on the quotient."""
        rels = [[self.d[i] * int(i == j) for j in range(self.k)] for i in range(self.k)]
        for x in vectors:
            for A in self.all_matrices:
                rels.append([sum(a * b for a, b in zip(row, x)) for row in A])
        mats = self.mats
        newG = self.G
        if drop is not None:
            mats = [A for i, A in enumerate(self.mats) if i != drop]
            newG = AbGroup([n for i, n in enumerate(self.G.orders) if i != drop])
        return GModule.from_presentation(newG, self.k, rels, mats, self.modulus)

    def coinvariants(self, gen_index):
        """M / (g - 1)M for the chosen cyclic generator g; the factor is dropped from G."""
        A = self.mats[gen_index]
        vecs = []
        for j in range(self.k):
            vecs.append([A[i][j] - int(i == j) for i in range(self.k)])
        return self.quotient(vecs, drop=gen_index)

    def restrict_group(self, gen_index):
        """Forget a cyclic factor of G (restriction to the complementary subgroup)."""
        mats = [A for i, A in enumerate(self.mats) if i != gen_index]
        newG = AbGroup([n for i, n in enumerate(self.G.orders) if i != gen_index])
        return GModule(newG, self.d, mats, self.modulus, check=False)

    # presentation over R[G]
    @cached_property
    def presentation(self):
        """(gens, relations): relations are lists of a GroupRingElements, one per generator."""
        return self.presentation_from(self.rg_generators())

    def presentation_from(self, gens):
        """Presentation R[G]^s -> R[G]^a -> M -> 0 built on the given generators of M."""
        G = self.G
        a = len(gens)
        if a == 0:
            return gens, []
        cols = []
        for x in gens:
            for gi in range(G.order):
                A = self.all_matrices[gi]
                cols.append([sum(u * v for u, v in zip(row, x)) for row in A])
        L = self.span_lattice(gens)
        if any(not hnf_membership(L, [int(i == j) for j in range(self.k)])[0] for i in range(self.k)):
            raise ValueError("given vectors do not generate the module")
        K = kernel_mod(cols, self.d)
        # greedy R[G]-generators of the kernel lattice
        chosen = []
        span = []
        n = a * G.order
        for v in K:
            if span and hnf_membership(span, v)[0]:
                continue
            chosen.append(v)
            span = lattice_basis(span + _translates_vec(G, v, a), n)
        rels = []
        for v in chosen:
            rels.append([GroupRingElement(G, v[i * G.order:(i + 1) * G.order], 0) for i in range(a)])
        return gens, rels

    def presentation_matrix(self, gens=None):
        """a x s matrix of GroupRingElements (rows: generators, columns: relations)."""
        gens, rels = self.presentation if gens is None else self.presentation_from(gens)
        a = len(gens)
        return [[rels[j][i] for j in range(len(rels))] for i in range(a)]

    def __eq__(self, o):
        return isinstance(o, GModule) and self.d == o.d and self.mats == o.mats and self.G == o.G


def _translates_vec(G, v, a):
    out = []
    T = G.mult_table
    n = G.order
    for gi in range(n):
        w = [0] * (a * n)
        for blk in range(a):
            for j in range(n):
                c = v[blk * n + j]
                if c:
                    w[blk * n + T[gi][j]] += c
        out.append(w)
    return out


class IdealZG:
    """Ideal of R[G] (R = Z or Z/N) given by generators."""

    def __init__(self, G: AbGroup, gens, modulus: int = 0):
        self.G = G
        self.modulus = modulus
        self.gens = [g.reduce(modulus) if modulus else g for g in gens]

    @cached_property
    def lattice(self):
        vs = []
        for h in self.gens:
            vs.extend(h.lift().translates())
        if self.modulus:
            vs.extend([[self.modulus * int(i == j) for j in range(self.G.order)] for i in range(self.G.order)])
        return lattice_basis(vs, self.G.order)

    def contains(self, x: GroupRingElement):
        return ideal_contains(self, x)

    def __eq__(self, o):
        return isinstance(o, IdealZG) and self.G == o.G and self.modulus == o.modulus and self.lattice == o.lattice

    def issubset(self, o: "IdealZG"):
        return all(o.contains(h) for h in self.gens)

    def power(self, m):
        gens = [GroupRingElement.scalar(self.G, 1, self.modulus)]
        basis = [GroupRingElement(self.G, v, self.modulus) for v in self.lattice]
        for _ in range(m):
            gens = [a * b for a in gens for b in basis]
            gens = [GroupRingElement(self.G, v, self.modulus) for v in IdealZG(self.G, gens, self.modulus).lattice]
        return IdealZG(self.G, gens, self.modulus)

    def is_unit_ideal(self):
        return self.contains(GroupRingElement.scalar(self.G, 1, self.modulus))

    def map(self, fn):
        return IdealZG(self.G, [fn(g) for g in self.gens], self.modulus)

    def __repr__(self):
        return f"IdealZG({[g.pretty() for g in self.gens]}, mod={self.modulus})"


def ideal_contains(I: IdealZG, x: GroupRingElement) -> bool:
    if x.G != I.G or (x.modulus and x.modulus != I.modulus):
        raise ValueError("base-ring mismatch")
    if not I.lattice:
        return x.is_zero()
    return hnf_membership(I.lattice, list(x.lift().c))[0]


def grp_det(M):
    """Determinant of a square matrix of GroupRingElements (Laplace with subset memo)."""
    n = len(M)
    if n == 0:
        return None
    memo = {}

    def rec(row, cols):
        if row == n:
            return None
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = None
        sign = 1
        for c in cols:
            e = M[row][c]
            if not e.is_zero():
                rest = tuple(x for x in cols if x != c)
                sub = rec(row + 1, rest)
                term = e if sub is None else e * sub
                if sign < 0:
                    term = -term
                acc = term if acc is None else acc + term
            sign = -sign
        if acc is None:
            acc = M[0][0] * 0
        memo[key] = acc
        return acc

    return rec(0, tuple(range(n)))


def fitting_ideal_of_matrix(P, G: AbGroup, modulus: int = 0, max_minors: int = 200000) -> IdealZG:
    """Fit of the cokernel of an a x s presentation matrix P (list of rows of GroupRingElements)."""
    a = len(P)
    one = GroupRingElement.scalar(G, 1, modulus)
    if a == 0:
        return IdealZG(G, [one], modulus)
    s = len(P[0])
    if s < a:
        return IdealZG(G, [one * 0], modulus)
    gens = []
    for count, cols in enumerate(itertools.combinations(range(s), a)):
        if count >= max_minors:
            raise RuntimeError("too many minors")
        sub = [[P[i][j] for j in cols] for i in range(a)]
        d = grp_det(sub)
        if modulus:
            d = d.reduce(modulus)
        if not d.is_zero():
            gens.append(d)
    if not gens:
        gens = [one * 0]
    I = IdealZG(G, gens, modulus)
    return IdealZG(G, [GroupRingElement(G, v, modulus) for v in I.lattice] or [one * 0], modulus)


def fitting_ideal(M: GModule, gens=None) -> IdealZG:
    P = M.presentation_matrix(gens)
    return fitting_ideal_of_matrix(P, M.G, M.modulus)


def annihilator(M: GModule) -> IdealZG:
    G = M.G
    if M.k == 0:
        return IdealZG(G, [GroupRingElement.scalar(G, 1, M.modulus)], M.modulus)
    cols = []
    moduli = []
    for i in range(M.k):
        for j in range(M.k):
            moduli.append(M.d[i])
    for A in M.all_matrices:
        cols.append([A[i][j] for i in range(M.k) for j in range(M.k)])
    K = kernel_mod(cols, moduli)
    gens = [GroupRingElement(G, v, M.modulus) for v in K]
    return IdealZG(G, gens, M.modulus)


def is_free_over_lgroup(M: GModule, ell: int):
    """Return (free, rank, method) for a finite F_ell[G]-module, G an ell-group."""
    G = M.G
    if not G.is_lgroup(ell):
        raise ValueError("G is not an ell-group")
    if any(x != ell for x in M.d):
        raise ValueError("module is not an F_ell-vector space")
    dim = M.k
    rows = []
    for A in M.mats:
        for i in range(dim):
            rows.append([(A[i][j] - int(i == j)) % ell for j in range(dim)])
    fixed = len(nullspace_mod_p(rows, ell, dim)) if rows else dim
    if dim == G.order * fixed:
        return True, fixed, "criterion"
    if dim <= 12:
        # Nakayama: minimal number of generators is dim M / I_G M, where I_G is
        # the augmentation ideal (the radical of F_ell[G] for an ell-group)
        vecs = []
        for A in M.mats:
            for j in range(dim):
                vecs.append([(A[i][j] - int(i == j)) % ell for i in range(dim)])
        from ..exactalg.intmat import rank_mod_p

        rad = rank_mod_p(vecs, ell) if vecs else 0
        mingens = dim - rad
        free = dim == G.order * mingens
        return free, (mingens if free else None), "generators"
    return False, None, "criterion"


def dualize(M: GModule, variance: str = "covariant") -> GModule:
    """Pontryagin dual Hom(M, Q/Z) written on the dual basis e_i^*.

    covariant: (g f)(m) = f(g m); contravariant: (g f)(m) = f(g^{-1} m).
    """
    if variance not in ("covariant", "contravariant"):
        raise ValueError("variance must be 'covariant' or 'contravariant'")
    mats = []
    for A, n in zip(M.mats, M.G.orders):
        B = A if variance == "covariant" else _mat_pow(A, n - 1, M.d)
        mats.append([[B[i][j] * M.d[j] // M.d[i] for i in range(M.k)] for j in range(M.k)])
    return GModule(M.G, M.d, mats, M.modulus)


class CharpolyPresentation:
    def __init__(self, module, matrix, det, cokernel_order, exact):
        self.module = module
        self.matrix = matrix
        self.det = det
        self.cokernel_order = cokernel_order
        self.exact = exact

    def fitting_ideal(self):
        return fitting_ideal_of_matrix(self.matrix, self.module.G, self.module.modulus)

    def det_ideal(self):
        return IdealZG(self.module.G, [self.det], self.module.modulus)


def charpoly_presentation(A, N: int, modulus: int) -> CharpolyPresentation:
    """M = (Z/modulus)^n with the generator g of C_N acting by A, presented by 1 - g^{-1} A."""
    n = len(A)
    d = [modulus] * n
    if not all((x - int(i == j)) % modulus == 0 for i, row in enumerate(_mat_pow(A, N, d)) for j, x in enumerate(row)):
        raise ValueError("A^N is not the identity")
    G = AbGroup([N], names=["g"])
    M = GModule(G, d, [A], modulus)
    ginv = GroupRingElement.group_elt(G, (N - 1,), 1, modulus)
    one = GroupRingElement.scalar(G, 1, modulus)
    P = [[(one if i == j else one * 0) - ginv * A[i][j] for j in range(n)] for i in range(n)]
    det = grp_det(P)
    # cokernel of P as a Z-module: Z^{nN} / (translates of columns + modulus)
    vs = []
    for j in range(n):
        col = []
        for i in range(n):
            col.extend(P[i][j].lift().c)
        vs.extend(_translates_vec(G, col, n))
    vs.extend([[modulus * int(i == j) for j in range(n * N)] for i in range(n * N)])
    _, D, _ = smith_normal_form(vs)
    diag = [D[i][i] for i in range(min(len(D), n * N))]
    order = prod(diag) if all(diag) else 0
    # pi: e_i -> x_i kills the relations, and is onto; equal orders make it an isomorphism
    kills = all(
        all(x == 0 for x in M.reduce([sum(M.act_ring(P[i][j], [int(t == i) for t in range(n)])[r] for i in range(n)) for r in range(n)]))
        for j in range(n)
    )
    exact = kills and order == modulus ** n
    return CharpolyPresentation(M, P, det, order, exact)
