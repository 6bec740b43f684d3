"""Integer matrices: Smith and Hermite normal forms, lattice membership, kernels.

Matrices are lists of rows of Python ints (arbitrary precision, no overflow).
"""

from __future__ import annotations

from dataclasses import dataclass


def mobius(n: int) -> int:
    if n == 1:
        return 1
    res = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    if n > 1:
        res = -res
    return res


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def matmul(A, B):
    if not A:
        return []
    n = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] if Bt else [0] * n for row in A]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(r) for r in zip(*A)]


def vecmat(v, A):
    """Row vector times matrix."""
    if not A:
        return []
    return [sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0]))]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple

    @classmethod
    def of(cls, rows):
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def tolist(self):
        return [list(r) for r in self.rows]


def smith_normal_form(A, ncols=None):
    """Return (U, D, V) with D = U A V, U and V unimodular, D diagonal with
    nonnegative d_1 | d_2 | ... .

    ``A`` is a list of rows; for a matrix with no rows pass ``ncols``.
    """
    if isinstance(A, IntMatrix):
        A = A.tolist()
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    D = [list(r) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for r in D:
                r[dst] += k * r[src]
            for r in V:
                r[dst] += k * r[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < best[0]):
                    best = (abs(D[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility condition on the trailing block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % D[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def invariant_factors(A, ncols=None):
    """Diagonal of the Smith form (length min(m, n)), including zeros."""
    _, D, _ = smith_normal_form(A, ncols)
    m = len(D)
    n = len(D[0]) if m else 0
    return [D[i][i] for i in range(min(m, n))]


def cokernel_invariants(A, ncols):
    """Invariant factors of Z^ncols / rowspace(A): torsion (>1) then 0s for free part."""
    diag = invariant_factors(A, ncols) if A else []
    diag = diag + [0] * (ncols - len(diag))
    tors = [d for d in diag if d not in (0, 1)]
    free = [0 for d in diag if d == 0]
    return tors + free


def hnf(B):
    """Row-style Hermite normal form of the lattice spanned by the rows of B.

    Returns (H, T) with H = T B, H upper echelon with positive pivots, entries
    above each pivot reduced into [0, pivot), zero rows removed.
    """
    rows = [list(r) for r in B]
    m = len(rows)
    n = len(rows[0]) if m else 0
    T = identity(m)
    r = 0
    for c in range(n):
        if r >= m:
            break
        # gcd-combine all rows r.. in column c into row r
        for i in range(r + 1, m):
            if rows[i][c] == 0:
                continue
            a, b = rows[r][c], rows[i][c]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            ri, rr = rows[i], rows[r]
            ti, tr = T[i], T[r]
            rows[r] = [x * u + y * v for u, v in zip(rr, ri)]
            rows[i] = [-bg * u + ag * v for u, v in zip(rr, ri)]
            T[r] = [x * u + y * v for u, v in zip(tr, ti)]
            T[i] = [-bg * u + ag * v for u, v in zip(tr, ti)]
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-u for u in rows[r]]
            T[r] = [-u for u in T[r]]
        piv = rows[r][c]
        for i in range(r):
            q = rows[i][c] // piv
            if q:
                rows[i] = [u - q * v for u, v in zip(rows[i], rows[r])]
                T[i] = [u - q * v for u, v in zip(T[i], T[r])]
        r += 1
    return rows[:r], T[:r]


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_membership(basis, x):
    """Decide whether ``x`` lies in the Z-span of ``basis``.

    Returns ``(True, coeffs)`` with ``sum coeffs[i] * basis[i] == x`` or
    ``(False, None)``.
    """
    x = [int(v) for v in x]
    basis = [list(b) for b in basis]
    for b in basis:
        if len(b) != len(x):
            raise ValueError("dimension mismatch between lattice basis and vector")
    if not basis:
        return (not any(x)), ([] if not any(x) else None)
    H, T = hnf(basis)
    rem = list(x)
    k = [0] * len(H)
    for i, row in enumerate(H):
        c = next(j for j, v in enumerate(row) if v)
        if rem[c] % row[c]:
            return False, None
        q = rem[c] // row[c]
        k[i] = q
        rem = [u - q * v for u, v in zip(rem, row)]
    if any(rem):
        return False, None
    coeffs = vecmat(k, T) if T else []
    return True, coeffs


def lattice_basis(vectors, n):
    """HNF basis of the span (list of rows, possibly empty)."""
    vs = [list(v) for v in vectors if any(v)]
    if not vs:
        return []
    return hnf(vs)[0]


def kernel(A, ncols=None):
    """Basis (as list of vectors) of {x in Z^n : A x = 0}."""
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if m == 0:
        return identity(n)
    _, D, V = smith_normal_form(A)
    rank = sum(1 for i in range(min(m, n)) if D[i][i])
    return [[V[r][j] for r in range(n)] for j in range(rank, n)]


def left_kernel(A, nrows=None):
    """Basis of {y : y A = 0}."""
    if not A:
        return identity(nrows or 0)
    return kernel(transpose(A))


def lattices_equal(B1, B2, n):
    return lattice_basis(B1, n) == lattice_basis(B2, n)


def det(A):
    """Exact integer determinant (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rational_inverse(A):
    """Inverse over Q as a matrix of Fractions (raises on singular input)."""
    from fractions import Fraction

    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def unimodular_inverse(A):
    inv = rational_inverse(A)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def kernel_mod(cols, moduli):
    """HNF basis of {x in Z^n : sum_j x_j cols[j] = 0 in (+)_i Z/moduli[i]}.

    ``cols`` is a list of n integer vectors of length m = len(moduli); a modulus
    of 0 means Z in that coordinate.
    """
    n = len(cols)
    m = len(moduli)
    if m == 0:
        return identity(n)
    rows = []
    for i in range(m):
        row = [c[i] for c in cols]
        slack = [0] * m
        slack[i] = moduli[i]
        rows.append(row + slack)
    K = kernel(rows)
    proj = [v[:n] for v in K]
    return lattice_basis(proj, n)


def rank_mod_p(rows, p):
    """Rank over F_p."""
    M = [[x % p for x in r] for r in rows]
    if not M:
        return 0
    n = len(M[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        r += 1
    return r


def nullspace_mod_p(rows, p, n=None):
    """Basis of {x in F_p^n : rows . x = 0}."""
    n = n if n is not None else (len(rows[0]) if rows else 0)
    M = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-M[i][fc]) % p
        basis.append(v)
    return basis


def solve_mod_p(rows, rhs, p):
    """One solution x of rows . x = rhs over F_p, or None."""
    n = len(rows[0]) if rows else 0
    M = [[x % p for x in r] + [b % p] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] for i in range(r, len(M))):
        return None
    x = [0] * n
    for i, pc in enumerate(pivots):
        x[pc] = M[i][n]
    return x
