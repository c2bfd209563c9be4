"""Pure-Python twin of the compiled elimination kernel.

Same algorithm, same output: rows are scaled to primitive integer vectors with
positive pivots, every pivot column is zero outside its pivot row.
"""
from math import gcd

import numpy as np


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, int(x))
            if g == 1:
                return row
    if g > 1:
        return row // g
    return row


def rref_object(m):
    """Reduce the object-dtype integer matrix ``m`` in place; return pivots."""
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        if m[r, c] < 0:
            m[r] = -m[r]
        m[r] = _primitive(m[r])
        pv = m[r, c]
        others = np.flatnonzero(m[:, c])
        for i in others:
            if i == r:
                continue
            a = m[i, c]
            g = gcd(pv, a)
            m[i] = _primitive((pv // g) * m[i] - (a // g) * m[r])
        pivots.append(c)
        r += 1
    return pivots
