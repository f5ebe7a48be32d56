"""Pure-Python reference versions of the hot loops.

Signatures and results match ``_ckernels`` exactly; these also accept
integers of any size where the compiled twin is limited to machine words.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def euclid_division_counts(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty(len(a), dtype=np.int64)
    for i, (x, y) in enumerate(zip(a.tolist(), b.tolist())):
        if x < y:
            x, y = y, x
        steps = 0
        while y:
            x, y = y, x % y
            steps += 1
        out[i] = steps
    return out


def count_coprime_pairs(a: np.ndarray, b: np.ndarray) -> int:
    gcd = math.gcd
    return sum(1 for x, y in zip(a.tolist(), b.tolist()) if gcd(x, y) == 1)


def inverse_distance_max(n: int) -> tuple[int, int, int]:
    if n == 1:
        return 0, 1, 1
    best, wa, wb = -1, 0, 0
    gcd = math.gcd
    for a in range(1, n):
        if gcd(a, n) != 1:
            continue
        b = pow(a, -1, n)
        if abs(a - b) > best:
            best, wa, wb = abs(a - b), a, b
    return best, wa, wb


def product_residue_count(p: int, cap: int) -> int:
    """Distinct values of x*y mod p over 1 <= x, y <= cap."""
    top = min(cap, p)
    seen = bytearray(p)
    hit = 0
    for x in range(1, top + 1):
        v = 0
        for _ in range(top):
            v += x
            if v >= p:
                v -= p
            if not seen[v]:
                seen[v] = 1
                hit += 1
        if hit == p:
            break
    return hit


def reachable(coins, cap: int) -> np.ndarray:
    """uint8 table: entry n is 1 iff n is a nonnegative combination of coins."""
    table = bytearray(cap + 1)
    table[0] = 1
    coins = sorted(set(int(c) for c in coins))
    for n in range(1, cap + 1):
        for c in coins:
            if c > n:
                break
            if table[n - c]:
                table[n] = 1
                break
    return np.frombuffer(bytes(table), dtype=np.uint8).copy()


def _inv_or_zero(x: int, r: int) -> int:
    g, u = r, 0
    h, v = x % r, 1
    while h:
        q = g // h
        g, h = h, g - q * h
        u, v = v, u - q * v
    return u % r if g == 1 else 0


def _square_root_pair(N: int, T: int):
    if T < 0:
        T = -T
    D = T * T - 4 * N
    if D < 0:
        return None
    root = math.isqrt(D)
    if root * root != D or (T - root) & 1:
        return None
    p = (T - root) >> 1
    q = (T + root) >> 1
    if p > 1 and p * q == N:
        return p, q
    return None


def scan_constant_pair(N: int, r: int, c0: int, c1: int, max_pairs: int):
    """Algorithm I inner step for one constant pair, without recording a trace.

    Walks the Euclid pairs of ``a = c0^-1 c1 mod r``; for each pair the
    residues ``c0 x^-1, c1 x^-1, c0 y^-1, c1 y^-1`` (skipping non-invertible
    components), each in variants ``s, r - s, r + s``, are tried against the
    traces ``N+1-v, N+1+v, N+1-r-v, N+1-r+v, N+1+r-v, N+1+r+v``.

    Returns ``(p, q, value, trace, pairs_used, candidates_tested)``; ``p`` is 0
    when nothing factors.
    """
    c0 %= r
    c1 %= r
    inv_c0 = _inv_or_zero(c0, r)
    if inv_c0 == 0:
        raise ValueError("c0 not invertible modulo r")
    a = inv_c0 * c1 % r
    n1 = N + 1
    tested = 0
    pairs_used = 0
    r0, r1 = r, a
    t0, t1 = 0, 1
    while r1 and pairs_used < max_pairs:
        pairs_used += 1
        x, y = t1 % r, r1
        for comp in (x, y):
            inv = _inv_or_zero(comp, r)
            if inv == 0:
                continue
            for c in (c0, c1):
                s = c * inv % r
                for v in (s, r - s, r + s):
                    tested += 1
                    for T in (n1 - v, n1 + v, n1 - r - v, n1 - r + v, n1 + r - v, n1 + r + v):
                        hit = _square_root_pair(N, T)
                        if hit:
                            return hit[0], hit[1], v, T, pairs_used, tested
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    return 0, 0, 0, 0, pairs_used, tested


def _lincong_y(a: int, c: int, n: int, B: int) -> int:
    y = -c % n
    while y >= B:
        prev = n
        a, n = -n % a, a
        if n >= prev:
            return -1
        c %= n
        y = -c % n
    return y


def lincong_exhaustive(n_max: int):
    """Reduction loop vs x-scan oracle over every N <= n_max and valid (a, c, B).

    Returns ``(cases, mismatches, first_mismatch)``.
    """
    if not 2 <= n_max <= 5000:
        raise ValueError("n_max must lie in [2, 5000]")
    cases = bad = 0
    first = None
    for N in range(2, n_max + 1):
        for a in range(1, N):
            if math.gcd(a, N) != 1:
                continue
            inv = pow(a, -1, N)
            for c in range(N):
                ox = [0] * N
                top = N - 1
                for x in range(N):
                    v = (a * x - c) % N
                    if v < top:
                        for B in range(v + 1, top + 1):
                            ox[B] = x
                        top = v
                    if top == 0:
                        break
                for B in range(1, N):
                    cases += 1
                    y = _lincong_y(a, c, N, B)
                    x = inv * (y + c) % N if y >= 0 else -1
                    if x != ox[B]:
                        bad += 1
                        if first is None:
                            first = (a, c, N, B)
    return cases, bad, first
