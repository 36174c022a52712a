"""Pure-Python integer kernels.

A *grid* is a list of rows; row ``i`` holds the integer coefficients (ascending
powers of alpha) of ``x**i``. Rows may be ragged and may carry trailing zeros;
:func:`normalize` strips them. ``_kernels.pyx`` mirrors every function here.
"""

from math import gcd


def conv(a, b):
    """Integer convolution of two coefficient lists."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def bmul(A, B):
    """Product of two grids."""
    if not A or not B:
        return []
    out = [[] for _ in range(len(A) + len(B) - 1)]
    for i, ra in enumerate(A):
        if not ra:
            continue
        for j, rb in enumerate(B):
            if not rb:
                continue
            acc = out[i + j]
            need = len(ra) + len(rb) - 1
            if len(acc) < need:
                acc.extend([0] * (need - len(acc)))
            for p, u in enumerate(ra):
                if u:
                    for q, v in enumerate(rb):
                        acc[p + q] += u * v
    return out


def baxpy(acc, B, s):
    """In place ``acc += s * B``; ``acc`` must be a list of lists."""
    if not s:
        return acc
    while len(acc) < len(B):
        acc.append([])
    for i, rb in enumerate(B):
        ra = acc[i]
        if len(ra) < len(rb):
            ra.extend([0] * (len(rb) - len(ra)))
        for p, v in enumerate(rb):
            if v:
                ra[p] += s * v
    return acc


def bcompose(P, Q, dq):
    """Integer Horner step for ``P(Q/dq)``.

    Returns ``R`` with ``P(Q/dq) = R / dq**(len(P)-1)`` where ``P`` and ``Q``
    are grids and substitution happens in the x direction.
    """
    if not P:
        return []
    d = len(P) - 1
    R = [list(P[d])]
    scale = 1
    for i in range(d - 1, -1, -1):
        scale *= dq
        R = bmul(R, Q)
        if not R:
            R = [[]]
        row = P[i]
        if row:
            r0 = R[0]
            if len(r0) < len(row):
                r0.extend([0] * (len(row) - len(r0)))
            for p, v in enumerate(row):
                if v:
                    r0[p] += scale * v
    return R


def ashift(A, p, q):
    """Substitute alpha -> alpha + p/q in every row.

    Returns ``(rows, scale)`` with the true grid equal to ``rows / scale``.
    """
    D = 0
    for row in A:
        if len(row) - 1 > D:
            D = len(row) - 1
    out = []
    for row in A:
        if not row:
            out.append([])
            continue
        d = len(row) - 1
        r = [row[d]]
        s = 1
        for i in range(d - 1, -1, -1):
            s *= q
            # r <- r * (q*alpha + p)
            nr = [0] * (len(r) + 1)
            for k, v in enumerate(r):
                nr[k] += p * v
                nr[k + 1] += q * v
            nr[0] += s * row[i]
            r = nr
        pad = q ** (D - d)
        if pad != 1:
            r = [pad * v for v in r]
        out.append(r)
    return out, q**D


def normalize(A, den):
    """Strip trailing zeros and reduce by the common content.

    Returns ``(rows, den)`` with rows a tuple of int tuples and ``den > 0``.
    """
    rows = []
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
        rows = [tuple(-v for v in row) for row in rows]
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
        rows = [tuple(v // g for v in row) for row in rows]
        den //= g
    return tuple(rows), den
