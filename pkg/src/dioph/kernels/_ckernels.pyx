# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in _pykernels (machine-word inputs only)."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t
from libc.stdlib cimport calloc, free

cnp.import_array()

BACKEND = "cython"

# scan_constant_pair keeps T**2 below 2**64 for N under this
SCAN_LIMIT = 1 << 30


def euclid_division_counts(cnp.ndarray[uint64_t, ndim=1] a, cnp.ndarray[uint64_t, ndim=1] b):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef uint64_t x, y, t
    cdef int64_t steps
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[:] view = out
    for i in range(n):
        x = a[i]
        y = b[i]
        if x < y:
            x, y = y, x
        steps = 0
        while y:
            t = x % y
            x = y
            y = t
            steps += 1
        view[i] = steps
    return out


cdef inline uint64_t _gcd(uint64_t x, uint64_t y) nogil:
    cdef uint64_t t
    while y:
        t = x % y
        x = y
        y = t
    return x


def count_coprime_pairs(cnp.ndarray[uint64_t, ndim=1] a, cnp.ndarray[uint64_t, ndim=1] b):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef int64_t hits = 0
    for i in range(n):
        if _gcd(a[i], b[i]) == 1:
            hits += 1
    return int(hits)


cdef inline int64_t _inv_or_zero(int64_t x, int64_t r) nogil:
    cdef int64_t g = r, h = x % r, u = 0, v = 1, q, t
    if h < 0:
        h += r
    while h:
        q = g // h
        t = g - q * h
        g = h
        h = t
        t = u - q * v
        u = v
        v = t
    if g != 1:
        return 0
    u %= r
    if u < 0:
        u += r
    return u


def inverse_distance_max(int64_t n):
    if n == 1:
        return 0, 1, 1
    cdef int64_t a, b, d, best = -1, wa = 0, wb = 0
    for a in range(1, n):
        b = _inv_or_zero(a, n)
        if b == 0:
            continue
        d = a - b if a > b else b - a
        if d > best:
            best = d
            wa = a
            wb = b
    return int(best), int(wa), int(wb)


def product_residue_count(int64_t p, int64_t cap):
    cdef int64_t top = cap if cap < p else p
    cdef int64_t x, k, v, hit = 0
    cdef uint8_t *seen = <uint8_t *> calloc(p, 1)
    if seen == NULL:
        raise MemoryError()
    try:
        for x in range(1, top + 1):
            v = 0
            for k in range(top):
                v += x
                if v >= p:
                    v -= p
                if not seen[v]:
                    seen[v] = 1
                    hit += 1
            if hit == p:
                break
    finally:
        free(seen)
    return int(hit)


def reachable(coins, int64_t cap):
    cdef cnp.ndarray[int64_t, ndim=1] cs = np.array(sorted(set(int(c) for c in coins)), dtype=np.int64)
    out = np.zeros(cap + 1, dtype=np.uint8)
    cdef uint8_t[:] table = out
    cdef Py_ssize_t m = cs.shape[0], j
    cdef int64_t n, c
    table[0] = 1
    for n in range(1, cap + 1):
        for j in range(m):
            c = cs[j]
            if c > n:
                break
            if table[n - c]:
                table[n] = 1
                break
    return out


cdef inline uint64_t _isqrt(uint64_t n) nogil:
    # integer Newton from an upper bound
    cdef uint64_t x, y
    cdef int bits = 0
    if n < 2:
        return n
    x = n
    while x:
        bits += 1
        x >>= 1
    x = (<uint64_t> 1) << ((bits + 1) // 2)
    while True:
        y = (x + n // x) >> 1
        if y >= x:
            return x
        x = y


cdef inline int _square_root_pair(int64_t N, int64_t T, int64_t *p, int64_t *q) nogil:
    cdef uint64_t TT, D, root, four_n
    if T < 0:
        T = -T
    TT = <uint64_t> T * <uint64_t> T
    four_n = 4 * <uint64_t> N
    if TT < four_n:
        return 0
    D = TT - four_n
    root = _isqrt(D)
    if root * root != D or ((<uint64_t> T - root) & 1):
        return 0
    p[0] = (T - <int64_t> root) >> 1
    q[0] = (T + <int64_t> root) >> 1
    if p[0] > 1 and p[0] * q[0] == N:
        return 1
    return 0


def scan_constant_pair(N, r, c0, c1, int64_t max_pairs):
    if not (0 < N < SCAN_LIMIT and 0 < r < SCAN_LIMIT):
        raise OverflowError("compiled scan needs N, r < 2**30")
    cdef int64_t n_ = N, r_ = r
    cdef int64_t c0_ = c0 % r, c1_ = c1 % r
    cdef int64_t inv_c0 = _inv_or_zero(c0_, r_)
    if inv_c0 == 0:
        raise ValueError("c0 not invertible modulo r")
    cdef int64_t a = (inv_c0 * c1_) % r_
    cdef int64_t n1 = n_ + 1
    cdef int64_t tested = 0, pairs_used = 0
    cdef int64_t r0 = r_, r1 = a, t0 = 0, t1 = 1, qq, tmp
    cdef int64_t comps[2]
    cdef int64_t consts[2]
    cdef int64_t vals[3]
    cdef int64_t traces[6]
    cdef int64_t inv, s, v, T, p = 0, q = 0
    cdef int ci, ki, vi, ti
    consts[0] = c0_
    consts[1] = c1_
    while r1 and pairs_used < max_pairs:
        pairs_used += 1
        comps[0] = t1 % r_
        if comps[0] < 0:
            comps[0] += r_
        comps[1] = r1
        for ci in range(2):
            inv = _inv_or_zero(comps[ci], r_)
            if inv == 0:
                continue
            for ki in range(2):
                s = (consts[ki] * inv) % r_
                vals[0] = s
                vals[1] = r_ - s
                vals[2] = r_ + s
                for vi in range(3):
                    v = vals[vi]
                    tested += 1
                    traces[0] = n1 - v
                    traces[1] = n1 + v
                    traces[2] = n1 - r_ - v
                    traces[3] = n1 - r_ + v
                    traces[4] = n1 + r_ - v
                    traces[5] = n1 + r_ + v
                    for ti in range(6):
                        T = traces[ti]
                        if _square_root_pair(n_, T, &p, &q):
                            return int(p), int(q), int(v), int(T), int(pairs_used), int(tested)
        qq = r0 // r1
        tmp = r0 - qq * r1
        r0 = r1
        r1 = tmp
        tmp = t0 - qq * t1
        t0 = t1
        t1 = tmp
    return 0, 0, 0, 0, int(pairs_used), int(tested)


cdef inline int64_t _lincong_y(int64_t a, int64_t c, int64_t n, int64_t B) nogil:
    # same reduction loop as congruence.linear_congruence_min, returns y0
    cdef int64_t y = (n - c % n) % n, prev
    while y >= B:
        prev = n
        a, n = (a - n % a) % a, a
        if n >= prev:
            return -1
        c %= n
        y = (n - c) % n
    return y


def lincong_exhaustive(int64_t n_max):
    """Compare the reduction loop with the x-scan oracle for every N <= n_max
    and every valid (a, c, B). Returns (cases, mismatches, first_mismatch)."""
    cdef int64_t N, a, c, B, x, v, top, inv, y, xx
    cdef int64_t cases = 0, bad = 0
    cdef int64_t *ox
    first = None
    if n_max < 2 or n_max > 5000:
        raise ValueError("n_max must lie in [2, 5000]")
    ox = <int64_t *> calloc(n_max + 1, sizeof(int64_t))
    if ox == NULL:
        raise MemoryError()
    try:
        for N in range(2, n_max + 1):
            for a in range(1, N):
                inv = _inv_or_zero(a, N)
                if inv == 0:
                    continue
                for c in range(N):
                    # oracle for all B at once: ox[B] = first x with residue < B
                    top = N - 1
                    for x in range(N):
                        v = (a * x - c) % N
                        if v < 0:
                            v += N
                        if v < top:
                            for B in range(v + 1, top + 1):
                                ox[B] = x
                            top = v
                        if top == 0:
                            break
                    for B in range(1, N):
                        cases += 1
                        y = _lincong_y(a, c, N, B)
                        xx = (inv * ((y + c) % N)) % N if y >= 0 else -1
                        if xx != ox[B]:
                            bad += 1
                            if first is None:
                                first = (int(a), int(c), int(N), int(B))
    finally:
        free(ox)
    return int(cases), int(bad), first
