# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels; same contracts as ``_pykernels``.

Coefficients stay arbitrary-precision Python ints. The gain comes from typed
indices and list access, not from machine arithmetic.
"""

from math import gcd


cpdef list conv(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    if na == 0 or nb == 0:
        return []
    cdef list out = [0] * (na + nb - 1)
    cdef object ai
    for i in range(na):
        ai = a[i]
        if ai:
            for j in range(nb):
                out[i + j] = out[i + j] + ai * b[j]
    return out


cdef inline void _conv_into(list acc, ra, rb):
    cdef Py_ssize_t na = len(ra), nb = len(rb), p, q, need = na + nb - 1
    cdef object u, v
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for p in range(na):
        u = ra[p]
        if u:
            for q in range(nb):
                v = rb[q]
                if v:
                    acc[p + q] = acc[p + q] + u * v


cpdef list bmul(A, B):
    cdef Py_ssize_t na = len(A), nb = len(B), i, j
    if na == 0 or nb == 0:
        return []
    cdef list out = [[] for _ in range(na + nb - 1)]
    cdef object ra, rb
    for i in range(na):
        ra = A[i]
        if not ra:
            continue
        for j in range(nb):
            rb = B[j]
            if not rb:
                continue
            _conv_into(<list>out[i + j], ra, rb)
    return out


cpdef list baxpy(list acc, B, object s):
    cdef Py_ssize_t i, p, nb = len(B), nr
    cdef list ra
    cdef object rb, v
    if not s:
        return acc
    while len(acc) < nb:
        acc.append([])
    for i in range(nb):
        rb = B[i]
        ra = <list>acc[i]
        nr = len(rb)
        if len(ra) < nr:
            ra.extend([0] * (nr - len(ra)))
        for p in range(nr):
            v = rb[p]
            if v:
                ra[p] = ra[p] + s * v
    return acc


cpdef list bcompose(P, Q, object dq):
    cdef Py_ssize_t d, i, p, nrow
    cdef list R, r0
    cdef object row, v, scale = 1
    if len(P) == 0:
        return []
    d = len(P) - 1
    R = [list(P[d])]
    for i in range(d - 1, -1, -1):
        scale = scale * dq
        R = bmul(R, Q)
        if not R:
            R = [[]]
        row = P[i]
        nrow = len(row)
        if nrow:
            r0 = <list>R[0]
            if len(r0) < nrow:
                r0.extend([0] * (nrow - len(r0)))
            for p in range(nrow):
                v = row[p]
                if v:
                    r0[p] = r0[p] + scale * v
    return R


def ashift(A, object p, object q):
    cdef Py_ssize_t D = 0, d, i, k
    cdef list out = [], r, nr
    cdef object row, s, v, pad
    for row in A:
        if len(row) - 1 > D:
            D = len(row) - 1
    for row in A:
        if not row:
            out.append([])
            continue
        d = len(row) - 1
        r = [row[d]]
        s = 1
        for i in range(d - 1, -1, -1):
            s = s * q
            nr = [0] * (len(r) + 1)
            for k in range(len(r)):
                v = r[k]
                nr[k] = nr[k] + p * v
                nr[k + 1] = nr[k + 1] + q * v
            nr[0] = nr[0] + s * row[i]
            r = nr
        pad = q ** (D - d)
        if pad != 1:
            r = [pad * v for v in r]
        out.append(r)
    return out, q ** D


def normalize(A, object den):
    cdef list rows = []
    cdef Py_ssize_t n
    cdef object row, g, v
    for row in A:
        n = len(row)
        while n and not row[n - 1]:
            n -= 1
        rows.append(tuple(row[:n]))
    n = len(rows)
    while n and not rows[n - 1]:
        n -= 1
    if not n:
        return (), 1
    del rows[n:]
    if den < 0:
        den = -den
        rows = [tuple([-v for v in row]) for row in rows]
    g = den
    for row in rows:
        for v in row:
            if v:
                g = gcd(g, v)
                if g == 1:
                    break
        if g == 1:
            break
    if g != 1:
        rows = [tuple([v // g for v in row]) for row in rows]
        den = den // g
    return tuple(rows), den
