# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; see ``_kernels_py`` for the reference semantics."""

from libc.math cimport sqrt, ceil, floor
from libc.stdlib cimport malloc, free


def conv_trunc(list a, list b, Py_ssize_t n):
    cdef list out = [0] * n
    cdef Py_ssize_t la = min(len(a), n)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t i, j, top
    cdef object ai, bj
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def sparse_mul_trunc(list ea, list ca, list eb, list cb, object limit):
    cdef dict out = {}
    cdef Py_ssize_t i, j, nb = len(eb), na = len(ea)
    cdef object x, c, e
    for i in range(na):
        x = ea[i]
        c = ca[i]
        for j in range(nb):
            e = x + eb[j]
            if e >= limit:
                break
            out[e] = out.get(e, 0) + c * cb[j]
    return out


def eta_power(object e, Py_ssize_t n):
    if n <= 0:
        return []
    cdef list sigma = [0] * n
    cdef Py_ssize_t d, m, k
    for d in range(1, n):
        for m in range(d, n, d):
            sigma[m] = sigma[m] + d
    cdef list c = [0] * n
    c[0] = 1
    cdef object s
    for m in range(1, n):
        s = 0
        for k in range(1, m + 1):
            s = s + sigma[k] * c[m - k]
        c[m] = (-e * s) // m
    return c


def enum_coset(gram, cnum, long long den, long long limit, bint want_vectors=False):
    cdef Py_ssize_t n = len(gram)
    cdef Py_ssize_t i, j, k, l, a, b
    cdef double *q = <double *> malloc(n * n * sizeof(double))
    cdef long long *G = <long long *> malloc(n * n * sizeof(long long))
    cdef double *c = <double *> malloc(n * sizeof(double))
    cdef double *x = <double *> malloc(n * sizeof(double))
    cdef double *rem = <double *> malloc((n + 1) * sizeof(double))
    cdef long long *z = <long long *> malloc(n * sizeof(long long))
    cdef long long *upper = <long long *> malloc(n * sizeof(long long))
    cdef long long *cn = <long long *> malloc(n * sizeof(long long))
    cdef long long *v = <long long *> malloc(n * sizeof(long long))
    cdef double bound, slack, ctr, r, t
    cdef long long nv, s
    cdef dict hist = {}
    cdef list vecs = [] if want_vectors else None
    try:
        for i in range(n):
            cn[i] = cnum[i]
            c[i] = (<double> cn[i]) / den
            row = gram[i]
            for j in range(n):
                G[i * n + j] = row[j]
                q[i * n + j] = <double> G[i * n + j]
        for i in range(n):
            for j in range(i + 1, n):
                q[j * n + i] = q[i * n + j]
                q[i * n + j] = q[i * n + j] / q[i * n + i]
            for k in range(i + 1, n):
                for l in range(k, n):
                    q[k * n + l] -= q[k * n + i] * q[i * n + l]
        for i in range(n):
            if not q[i * n + i] > 0:
                raise ValueError("Gram matrix is not positive definite")

        bound = (<double> limit) / ((<double> den) * den)
        slack = 1e-9 * (1.0 + bound)
        rem[n] = bound + slack

        i = n - 1
        ctr = 0.0
        r = sqrt(rem[i + 1] / q[i * n + i]) + 1e-9
        z[i] = <long long> ceil(ctr - r - c[i])
        upper[i] = <long long> floor(ctr + r - c[i])
        while True:
            if z[i] > upper[i]:
                i += 1
                if i == n:
                    break
                z[i] += 1
                continue
            x[i] = c[i] + z[i]
            ctr = 0.0
            for j in range(i + 1, n):
                ctr -= q[i * n + j] * x[j]
            t = x[i] - ctr
            rem[i] = rem[i + 1] - q[i * n + i] * t * t
            if rem[i] < 0:
                z[i] += 1
                continue
            if i == 0:
                for a in range(n):
                    v[a] = cn[a] + den * z[a]
                nv = 0
                for a in range(n):
                    if v[a] != 0:
                        s = 0
                        for b in range(n):
                            s += G[a * n + b] * v[b]
                        nv += v[a] * s
                if nv <= limit:
                    hist[nv] = hist.get(nv, 0) + 1
                    if want_vectors:
                        vecs.append(tuple([z[a] for a in range(n)]))
                z[0] += 1
                continue
            i -= 1
            ctr = 0.0
            for j in range(i + 1, n):
                ctr -= q[i * n + j] * x[j]
            t = rem[i + 1] / q[i * n + i]
            if t < 0:
                t = 0
            r = sqrt(t) + 1e-9
            z[i] = <long long> ceil(ctr - r - c[i])
            upper[i] = <long long> floor(ctr + r - c[i])
    finally:
        free(q); free(G); free(c); free(x); free(rem)
        free(z); free(upper); free(cn); free(v)
    return hist, vecs
