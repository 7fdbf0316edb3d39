"""Small exact integer / rational matrix routines (lists of lists)."""

from fractions import Fraction
import math


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def vecmat(v, m):
    n = len(m[0]) if m else 0
    out = [0] * n
    for vi, row in zip(v, m):
        if vi:
            for j in range(n):
                out[j] += vi * row[j]
    return out


def det(a):
    """Exact determinant (Bareiss fraction-free elimination)."""
    m = [list(r) for r in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j])
                if isinstance(m[i][j], int) and isinstance(prev, int):
                    m[i][j] //= prev
                else:
                    m[i][j] /= prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def inverse(a):
    """Exact inverse over the rationals (Gauss-Jordan)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def smith_normal_form(a):
    """Return (diag, U, V) with U*A*V = diag(diag) for a square integer A.

    U and V are unimodular; diag entries are nonnegative with d_i | d_{i+1}.
    """
    n = len(a)
    m = [list(map(int, r)) for r in a]
    U = identity(n)
    V = identity(n)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):  # row_dst += f*row_src
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for r in m:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    for t in range(n):
        while True:
            # pivot: smallest nonzero |entry| in the lower-right block
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return [m[i][i] for i in range(n)], U, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = m[t][t]
            done = True
            for i in range(t + 1, n):
                if m[i][t]:
                    add_row(t, i, -(m[i][t] // p))
                    if m[i][t]:
                        done = False
            for j in range(t + 1, n):
                if m[t][j]:
                    add_col(t, j, -(m[t][j] // p))
                    if m[t][j]:
                        done = False
            if not done:
                continue
            # divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if m[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            U[t] = [-x for x in U[t]]
    return [m[i][i] for i in range(n)], U, V


def hermite_rows(rows):
    """Row-echelon Z-basis of the span of integer row vectors."""
    rows = [list(map(int, r)) for r in rows if any(r)]
    basis = []
    col = 0
    while rows:
        while all(r[col] == 0 for r in rows):
            col += 1
        while True:
            nz = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
            piv = nz[0]
            if len(nz) == 1:
                break
            new = [piv]
            for r in rows:
                if r is piv:
                    continue
                if r[col]:
                    f = r[col] // piv[col]
                    r = [x - f * y for x, y in zip(r, piv)]
                if any(r):
                    new.append(r)
            rows = new
        rows = [r for r in rows if r is not piv]
        basis.append(piv if piv[col] > 0 else [-x for x in piv])
        col += 1
    return basis


def rational_span_basis(vectors):
    """Z-basis (rows) of the lattice spanned by rational vectors."""
    d = 1
    for v in vectors:
        for x in v:
            d = math.lcm(d, Fraction(x).denominator)
    ints = [[int(Fraction(x) * d) for x in v] for v in vectors]
    return [[Fraction(x, d) for x in r] for r in hermite_rows(ints)]


def solve_integer_functional(f):
    """For a primitive integer functional f, return (x0, kernel_basis).

    x0 is an integer vector with f.x0 = 1 and kernel_basis a Z-basis of
    {x in Z^n : f.x = 0}.
    """
    n = len(f)
    diag, U, V = smith_normal_form([list(f)] + [[0] * n for _ in range(n - 1)])
    # U*F*V = D with F the matrix having f as first row; f.V = d1 * e1 (U = +-1 on row 0)
    g = diag[0]
    if g != 1:
        raise ValueError("functional is not primitive")
    cols = transpose(V)
    fv = [sum(a * b for a, b in zip(f, c)) for c in cols]
    x0 = None
    kern = []
    for c, val in zip(cols, fv):
        if val == 0:
            kern.append(list(c))
        else:
            x0 = list(c) if val == 1 else [-x for x in c]
    # f.V has exactly one nonzero entry (+-1)
    return x0, kern


def solve_rational(a, b):
    """Solve x*A = b exactly for a row vector x (A has full row rank).

    Raises ValueError when the system is inconsistent.
    """
    rows, cols = len(a), len(a[0])
    # work on the transpose: A^T x^T = b^T
    m = [[Fraction(a[r][c]) for r in range(rows)] + [Fraction(b[c])] for c in range(cols)]
    piv = []
    r = 0
    for c in range(rows):
        p = next((i for i in range(r, cols) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(cols):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    if any(m[i][rows] != 0 for i in range(r, cols)):
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * rows
    for i, c in enumerate(piv):
        x[c] = m[i][rows]
    return x


def lll_gram(gram, delta=Fraction(99, 100)):
    """LLL-reduce a positive definite Gram matrix.

    Returns an integer unimodular T such that T*G*T^T is LLL-reduced.
    """
    n = len(gram)
    g = [[int(x) for x in r] for r in gram]
    t = identity(n)

    def row_op(k, j, r):  # b_k -= r b_j, updating the Gram matrix
        t[k] = [x - r * y for x, y in zip(t[k], t[j])]
        for a in range(n):
            g[k][a] -= r * g[j][a]
        for a in range(n):
            g[a][k] = g[k][a] if a != k else g[a][k]
        g[k][k] = sum(t[k][a] * gram[a][b] * t[k][b] for a in range(n) if t[k][a]
                      for b in range(n) if t[k][b])

    def swap(k):
        t[k], t[k - 1] = t[k - 1], t[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for r in g:
            r[k], r[k - 1] = r[k - 1], r[k]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bb = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (g[i][j] - sum(mu[j][k] * mu[i][k] * bb[k] for k in range(j))) / bb[j]
            bb[i] = g[i][i] - sum(mu[i][k] ** 2 * bb[k] for k in range(i))
        return mu, bb

    mu, bb = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                row_op(k, j, r)
                for l in range(j + 1):
                    mu[k][l] -= r * (mu[j][l] if l < j else 1)
        if bb[k] >= (delta - mu[k][k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            swap(k)
            mu, bb = gso()
            k = max(k - 1, 1)
    return t
