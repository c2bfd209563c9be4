# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 fraction-free Gauss-Jordan elimination.

Raises OverflowError as soon as any intermediate product leaves int64; the
caller then reruns the reduction on Python integers.
"""

cdef extern from *:
    """
    #include <stdint.h>
    static inline int dfm_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int dfm_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    bint dfm_mul(long long a, long long b, long long *r) nogil
    bint dfm_sub(long long a, long long b, long long *r) nogil

cdef long long LIMIT = 4611686018427387904  # 2**62


cdef inline long long _abs(long long a) nogil:
    return -a if a < 0 else a


cdef inline long long _gcd(long long a, long long b) nogil:
    cdef long long t
    a = _abs(a)
    b = _abs(b)
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int _make_primitive(long long[:, ::1] m, Py_ssize_t i) nogil:
    cdef Py_ssize_t c, ncols = m.shape[1]
    cdef long long g = 0
    for c in range(ncols):
        if m[i, c] != 0:
            g = _gcd(g, m[i, c])
            if g == 1:
                return 0
    if g > 1:
        for c in range(ncols):
            m[i, c] = m[i, c] // g
    return 0


cdef int _reduce(long long[:, ::1] m, long long[::1] pivots) nogil:
    """Returns the rank, or -1 on overflow."""
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, p, i, k, start
    cdef long long pv, a, g, fa, fb, x, y
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p, c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            for k in range(ncols):
                x = m[p, k]
                m[p, k] = m[r, k]
                m[r, k] = x
        if m[r, c] < 0:
            for k in range(ncols):
                m[r, k] = -m[r, k]
        _make_primitive(m, r)
        pv = m[r, c]
        for i in range(nrows):
            if i == r:
                continue
            a = m[i, c]
            if a == 0:
                continue
            g = _gcd(pv, a)
            fa = pv // g
            fb = a // g
            start = 0 if i < r else c
            for k in range(start, ncols):
                if dfm_mul(fa, m[i, k], &x):
                    return -1
                if dfm_mul(fb, m[r, k], &y):
                    return -1
                if dfm_sub(x, y, &x):
                    return -1
                if x >= LIMIT or x <= -LIMIT:
                    return -1
                m[i, k] = x
            _make_primitive(m, i)
        pivots[r] = c
        r += 1
    return r


def rref_int64(long long[:, ::1] m):
    """Reduce ``m`` in place; return the list of pivot columns."""
    import numpy as np
    pivots = np.zeros(max(m.shape[0], 1), dtype=np.int64)
    cdef long long[::1] pv = pivots
    cdef int rank
    with nogil:
        rank = _reduce(m, pv)
    if rank < 0:
        raise OverflowError("int64 overflow during elimination")
    return [int(c) for c in pivots[:rank]]
