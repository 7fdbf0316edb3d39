"""Pure-Python versions of the hot loops.

These mirror ``_kernels.pyx`` line for line and are used whenever the
compiled extension is unavailable (or ``GKM14_PURE_PYTHON=1`` is set).
"""

import math


def conv_trunc(a, b, n):
    """First ``n`` coefficients of the product of two dense coefficient lists."""
    out = [0] * n
    la = min(len(a), n)
    lb = len(b)
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def sparse_mul_trunc(ea, ca, eb, cb, limit):
    """Sparse product of two exponent-sorted term lists.

    Exponents are integers on a common grid; only products with exponent
    strictly below ``limit`` are kept.  Returns a dict exponent -> coefficient.
    """
    out = {}
    nb = len(eb)
    for i in range(len(ea)):
        x = ea[i]
        c = ca[i]
        for j in range(nb):
            e = x + eb[j]
            if e >= limit:
                break
            out[e] = out.get(e, 0) + c * cb[j]
    return out


def eta_power(e, n):
    """Coefficients of prod_{k>=1} (1 - q^k)^e up to q^(n-1), any integer e.

    Uses the logarithmic-derivative recurrence
    m*c_m = -e * sum_{k=1}^{m} sigma(k) c_{m-k}.
    """
    if n <= 0:
        return []
    sigma = [0] * n
    for d in range(1, n):
        for m in range(d, n, d):
            sigma[m] += d
    c = [0] * n
    c[0] = 1
    for m in range(1, n):
        s = 0
        for k in range(1, m + 1):
            s += sigma[k] * c[m - k]
        c[m] = (-e * s) // m
    return c


def _fp_decompose(gram):
    n = len(gram)
    q = [[float(gram[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    for i in range(n):
        if not q[i][i] > 0:
            raise ValueError("Gram matrix is not positive definite")
    return q


def enum_coset(gram, cnum, den, limit, want_vectors=False):
    """Enumerate z in Z^n with v = cnum + den*z satisfying v.G.v <= limit.

    ``gram`` is an integer positive definite matrix, ``cnum/den`` the
    rational center.  Returns ``(hist, vectors)`` where ``hist`` maps the
    exact integer v.G.v to a count and ``vectors`` is a list of z tuples
    (or None).
    """
    n = len(gram)
    q = _fp_decompose(gram)
    c = [cnum[i] / den for i in range(n)]
    bound = limit / (den * den)
    slack = 1e-9 * (1.0 + bound)
    hist = {}
    vecs = [] if want_vectors else None

    x = [0.0] * n
    z = [0] * n
    upper = [0] * n
    rem = [0.0] * (n + 1)
    rem[n] = bound + slack

    def centre(i):
        s = 0.0
        qi = q[i]
        for j in range(i + 1, n):
            s += qi[j] * x[j]
        return -s

    i = n - 1
    # initialise level n-1
    ctr = centre(i)
    r = math.sqrt(max(rem[i + 1], 0.0) / q[i][i]) + 1e-9
    z[i] = math.ceil(ctr - r - c[i])
    upper[i] = math.floor(ctr + r - c[i])
    while True:
        if z[i] > upper[i]:
            i += 1
            if i == n:
                break
            z[i] += 1
            continue
        x[i] = c[i] + z[i]
        t = x[i] - centre(i)
        rem[i] = rem[i + 1] - q[i][i] * t * t
        if rem[i] < 0:
            z[i] += 1
            continue
        if i == 0:
            v = [cnum[k] + den * z[k] for k in range(n)]
            nv = 0
            for a in range(n):
                va = v[a]
                if va:
                    ga = gram[a]
                    s = 0
                    for b in range(n):
                        s += ga[b] * v[b]
                    nv += va * s
            if nv <= limit:
                hist[nv] = hist.get(nv, 0) + 1
                if vecs is not None:
                    vecs.append(tuple(z))
            z[0] += 1
            continue
        i -= 1
        ctr = centre(i)
        r = math.sqrt(max(rem[i + 1], 0.0) / q[i][i]) + 1e-9
        z[i] = math.ceil(ctr - r - c[i])
        upper[i] = math.floor(ctr + r - c[i])
    return hist, vecs
