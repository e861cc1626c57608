"""Exact and multiprecision linear algebra helpers (small dense matrices)."""
from fractions import Fraction
from math import gcd


def nullspace(rows, zero=Fraction(0)):
    """Basis of {v : rows @ v = 0} by Gauss-Jordan over an exact field.

    Entries may be Fraction or FieldElement; returns a list of vectors.
    """
    m = [list(r) for r in rows]
    if not m:
        return []
    ncol = len(m[0])
    pivots = []
    r = 0
    for c in range(ncol):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not hasattr(m[r][c], "inverse") else m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncol) if c not in pivots]
    basis = []
    one = zero + 1
    for f in free:
        v = [zero] * ncol
        v[f] = one
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def integer_vector(v):
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    g = g or 1
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def rank(rows):
    d = len(rows[0]) if rows else 0
    return d - len(nullspace(rows))


def charpoly(rows):
    """Characteristic polynomial det(xI - M), coefficients from the constant up (Faddeev-LeVerrier)."""
    n = len(rows)
    M = [[Fraction(v) for v in r] for r in rows]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk = M @ (M_{k-1} + c_{n-k+1} I)
        prev = [[Mk[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][t] * prev[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(Mk[i][i] for i in range(n)) / k
    return coeffs


def poly_eval(c, x):
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def poly_divide_linear(c, r):
    """Divide by (x - r) assuming r is a root; returns the quotient."""
    n = len(c) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for k in range(n, 0, -1):
        acc = acc * r + c[k]
        q[k - 1] = acc
    return q


def mp_matrix(ctx, rows):
    return ctx.matrix([[ctx.mpf(v) if isinstance(v, int) else v for v in r] for r in rows])


def svd(ctx, rows):
    """(U, S, V) with rows = U diag(S) V^T, S descending."""
    A = rows if isinstance(rows, ctx.matrix) else mp_matrix(ctx, rows)
    U, S, Vt = ctx.svd_r(A)
    n = len(S)
    order = sorted(range(n), key=lambda i: -S[i])
    Ss = [S[i] for i in order]
    V = ctx.matrix(Vt.cols, n)
    Uo = ctx.matrix(U.rows, n)
    for k, i in enumerate(order):
        for r in range(Vt.cols):
            V[r, k] = Vt[i, r]
        for r in range(U.rows):
            Uo[r, k] = U[r, i]
    return Uo, Ss, V


def columns(ctx, M, idx):
    out = ctx.matrix(M.rows, len(idx))
    for k, j in enumerate(idx):
        for r in range(M.rows):
            out[r, k] = M[r, j]
    return out


def orthonormalize(ctx, B):
    """Modified Gram-Schmidt on the columns of B."""
    Q = ctx.matrix(B.rows, B.cols)
    for j in range(B.cols):
        v = [B[r, j] for r in range(B.rows)]
        for k in range(j):
            dot = ctx.fsum(v[r] * Q[r, k] for r in range(B.rows))
            v = [v[r] - dot * Q[r, k] for r in range(B.rows)]
        nrm = ctx.sqrt(ctx.fsum(x * x for x in v))
        for r in range(B.rows):
            Q[r, j] = v[r] / nrm
    return Q


def orth_complement(ctx, Q):
    """Orthonormal basis of the orthogonal complement of span(Q columns)."""
    d, k = Q.rows, Q.cols
    P = ctx.eye(d) - Q * Q.T
    _, S, V = svd(ctx, P)
    # P is the projector onto the complement: its top d-k right singular vectors span it
    return columns(ctx, V, list(range(d - k)))


def principal_angles(ctx, Q1, Q2):
    """Principal angles (ascending) between spans of orthonormal columns."""
    M = Q1.T * Q2
    _, S, _ = svd(ctx, M)
    return sorted(ctx.acos(min(max(s, ctx.mpf(-1)), ctx.mpf(1))) for s in S)


def containment_gap(ctx, Qsmall, Qbig):
    """max over unit v in span(Qsmall) of the distance to span(Qbig)."""
    P = Qbig * Qbig.T
    R = Qsmall - P * Qsmall
    _, S, _ = svd(ctx, R)
    return max(S) if S else ctx.mpf(0)


def op_norm(ctx, M):
    _, S, _ = svd(ctx, M)
    return S[0]


def int_inverse(rows):
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(rows)
    A = [[Fraction(v) for v in r] + [Fraction(1 if i == j else 0) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    out = []
    for r in A:
        row = r[n:]
        if any(v.denominator != 1 for v in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in row])
    return out


def bits_needed(rows, extra=128):
    mx = max(abs(v) for r in rows for v in r) or 1
    return 2 * mx.bit_length() + extra

