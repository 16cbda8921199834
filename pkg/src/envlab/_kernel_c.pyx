# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scalar simulation kernel.

Mirror of _kernel_py: identical stream indexing, transforms and
clamping; see that module for the play layout contract.
"""

from libc.math cimport log1p, sqrt

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL
cdef double TO_UNIT = 1.0 / 9007199254740992.0
cdef double TINY = 2.2250738585072014e-308


cdef inline double u01(u64 seed, u64 index) nogil:
    cdef u64 z = seed + (index + 1) * GOLDEN
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    z = z ^ (z >> 31)
    return <double>(z >> 11) * TO_UNIT


cdef inline int scan(const double* table, int length, double u) nogil:
    cdef int j = 0
    while j < length - 1 and u >= table[j]:
        j += 1
    return j


def run_batch(
    int family,
    const double[::1] t0,
    const double[::1] t1,
    const double[::1] t2,
    int fixed_w2,
    int fixed_w3,
    double y,
    double eps,
    int exact,
    int window,
    long long n,
    unsigned long long seed,
    long long start_play,
):
    """Simulate n plays; return (n_cond, sum, sumsq, sum_all, sumsq_all)."""
    cdef int draws = 2 if family == 4 else 1
    cdef u64 stride = <u64>(draws + 2)
    cdef long long i
    cdef u64 base
    cdef double u0, u1, uw2, uw3, x, g, yp, b, t, prev
    cdef int w2_double, w3_second, j
    cdef long long n_cond = 0
    cdef double s = 0.0, q = 0.0, sa = 0.0, qa = 0.0
    cdef int len0 = t0.shape[0]
    cdef const double* p0 = &t0[0] if len0 > 0 else NULL
    cdef const double* p1 = &t1[0] if t1.shape[0] > 0 else NULL
    cdef const double* p2 = &t2[0] if t2.shape[0] > 0 else NULL
    cdef double lo = y - eps
    cdef double hi = y + eps
    cdef bint inside

    with nogil:
        for i in range(n):
            base = <u64>(start_play + i) * stride
            u0 = u01(seed, base)
            if family == 0:
                x = 1.0 - u0
            elif family == 1:
                x = 0.5 * sqrt(-log1p(-u0))
            elif family == 2:
                x = u0 / (1.0 - u0)
            elif family == 3:
                x = p1[scan(p0, len0, u0)]
            elif family == 4:
                u1 = u01(seed, base + 1)
                j = scan(p0, len0, u0)
                x = p1[j] * (1.0 + 9.0 * u1)
            else:
                t = u0 * p0[len0 - 1]
                j = scan(p0, len0, t)
                prev = p0[j - 1] if j > 0 else 0.0
                x = p1[j] + (t - prev) / p2[j]
            if x <= 0.0:
                x = TINY
            uw2 = u01(seed, base + <u64>draws)
            uw3 = u01(seed, base + <u64>draws + 1)
            w2_double = fixed_w2 if fixed_w2 >= 0 else (1 if uw2 < 0.5 else 0)
            w3_second = fixed_w3 if fixed_w3 >= 0 else (1 if uw3 < 0.5 else 0)
            g = 2.0 if w2_double else 0.5
            if w3_second:
                yp = g * x
                b = x - g * x
            else:
                yp = x
                b = g * x - x
            sa += b
            qa += b * b
            if window:
                if exact:
                    inside = yp == y
                else:
                    inside = (yp > lo) and (yp <= hi)
                if inside:
                    n_cond += 1
                    s += b
                    q += b * b
    return n_cond, s, q, sa, qa
