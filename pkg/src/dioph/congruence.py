"""Small solutions of linear congruences and closed-form modular inverses."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels

__all__ = [
    "ThuePair",
    "thue_pairs",
    "euclid_pairs",
    "linear_congruence_min",
    "linear_congruence_scan",
    "inverse_euclid",
    "inverse_formula",
    "inverse_formula_steps",
    "inverse_voronoi",
    "inverse_of_five",
    "inverse_bounds",
    "max_inverse_distance",
    "max_inverse_distance_bound",
    "in_extremal_family",
    "VORONOI_CAP",
    "MAX_DISTANCE_CAP",
]

VORONOI_CAP = 10**4
MAX_DISTANCE_CAP = 10**5


@dataclass(frozen=True)
class ThuePair:
    """``a x = y (mod r)``, with ``y`` the ``index``-th Euclid remainder."""

    x: int
    y: int
    index: int


def euclid_pairs(a: int, r: int) -> list[ThuePair]:
    """Bezout coefficient of ``a`` against each nonzero remainder of Euclid on (r, a).

    No coprimality requirement; with gcd(a, r) = g the last remainder is g.
    """
    pairs = []
    r0, r1 = r, a % r
    t0, t1 = 0, 1
    k = 1
    while r1:
        pairs.append(ThuePair(t1, r1, k))
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
        k += 1
    return pairs


def thue_pairs(a: int, r: int) -> list[ThuePair]:
    """Small solutions of ``a x = y (mod r)`` from the extended Euclidean algorithm.

    Every pair satisfies the congruence; the first pair with ``y < sqrt(r)``
    also has ``|x| <= sqrt(r)``.

    >>> [p.x for p in thue_pairs(1063, 2431)]
    [1, -2, 7, -16, 263, -542]
    """
    if not 0 < a < r:
        raise ValueError("need 0 < a < r")
    if math.gcd(a, r) != 1:
        raise ValueError("a and r must be coprime")
    return euclid_pairs(a, r)


def linear_congruence_min(a: int, c: int, N: int, B: int) -> tuple[int, int]:
    """Least ``x0 >= 0`` with ``a x0 = y0 + c (mod N)`` and ``0 <= y0 < B``.

    Runs the reduction loop ``(a', N') <- (-N' mod a', a')`` until the
    residue ``-c' mod N'`` falls below ``B``, then recovers ``x0`` from ``y0``
    through the inverse of the original ``a``.
    """
    if not (0 < a < N and 0 < B < N and 0 <= c < N):
        raise ValueError("need 0 < a < N, 0 < B < N, 0 <= c < N")
    if math.gcd(a, N) != 1:
        raise ValueError("a and N must be coprime")
    a_, c_, n_ = a, c, N
    y = -c_ % n_
    while y >= B:
        prev = n_
        a_, n_ = -n_ % a_, a_
        assert n_ < prev, "modulus failed to decrease"
        c_ %= n_
        y = -c_ % n_
    x = pow(a, -1, N) * (y + c) % N
    return x, y


def linear_congruence_scan(a: int, c: int, N: int, B: int) -> tuple[int, int]:
    """Oracle for :func:`linear_congruence_min`: try x = 0, 1, 2, ..."""
    for x in range(N):
        y = (a * x - c) % N
        if y < B:
            return x, y
    raise ValueError("no solution")


def inverse_euclid(a: int, N: int) -> int:
    if N <= 1:
        raise ValueError("modulus must exceed 1")
    if math.gcd(a, N) != 1:
        raise ValueError(f"{a} is not invertible modulo {N}")
    g, u = N, 0
    h, v = a % N, 1
    while h:
        q = g // h
        g, h = h, g - q * h
        u, v = v, u - q * v
    return u % N


def inverse_formula_steps(a: int, N: int) -> tuple[int, int]:
    """Inverse of ``a`` mod ``N`` as ``((-N^-1 mod a) N + 1) / a``, plus division count.

    ``N^-1 mod a`` is obtained by applying the same formula to ``(N mod a, a)``;
    the chain bottoms out at ``a = 1`` whose inverse is 1.
    """
    if N <= 1:
        raise ValueError("modulus must exceed 1")
    a %= N
    if a == 0 or math.gcd(a, N) != 1:
        raise ValueError(f"{a} is not invertible modulo {N}")
    chain = []
    while a != 1:
        chain.append((a, N))
        a, N = N % a, a
    inv = 1
    divisions = len(chain)
    for a, N in reversed(chain):
        # inv is N^-1 mod a
        theta = -inv % a
        num = theta * N + 1
        inv, rem = divmod(num, a)
        divisions += 1
        if rem:
            raise ArithmeticError(f"inexact division in inverse formula ({num} / {a})")
    return inv, divisions


def inverse_formula(a: int, N: int) -> int:
    return inverse_formula_steps(a, N)[0]


def inverse_voronoi(a: int, N: int) -> int:
    """Inverse by ``3 - 2a + 6 sum_{k<a} floor(kN/a)^2 (mod N)``; O(a) terms."""
    if a > VORONOI_CAP:
        raise ValueError(f"a > {VORONOI_CAP}: use inverse_formula")
    if a < 1 or N <= 1 or math.gcd(a, N) != 1:
        raise ValueError(f"{a} is not invertible modulo {N}")
    total = sum((k * N // a) ** 2 for k in range(1, a))
    return (3 - 2 * a + 6 * total) % N


def inverse_of_five(N: int) -> int:
    """Closed form for 5^-1 mod N by N mod 5."""
    theta = {1: 4, 2: 2, 3: 3, 4: 1}.get(N % 5)
    if theta is None or N <= 1:
        raise ValueError("5 is not invertible modulo N")
    return (theta * N - 4) // 5 + 1


def inverse_bounds(a: int, N: int) -> tuple[int, int]:
    """Range forced on a^-1 by ``a x = theta N + 1`` with ``1 <= theta <= a - 1``."""
    if not 1 < a < N or math.gcd(a, N) != 1:
        raise ValueError("need 1 < a < N with gcd(a, N) = 1")
    lo = -(-(N + 1) // a)
    hi = N - -(-(N - 1) // a)
    return lo, hi


def max_inverse_distance(n: int) -> tuple[int, tuple[int, int]]:
    """max |a - b| over a, b in [1, n] with ab = 1 (mod n), and a witness pair."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n > MAX_DISTANCE_CAP:
        raise ValueError(f"n > {MAX_DISTANCE_CAP} is beyond the scan cap")
    m, a, b = kernels.inverse_distance_max(n)
    return m, (a, b)


def max_inverse_distance_bound(n: int) -> int:
    """floor(n - 2 sqrt(n - 1)), exactly."""
    k = 4 * (n - 1)
    root = math.isqrt(k)
    return n - (root if root * root == k else root + 1)


def in_extremal_family(n: int) -> bool:
    """True iff n = m^2 + l m + 1 for some m >= 1 and 0 <= l < 2 sqrt(m) + 1."""
    m = 1
    while m * m + 1 <= n:
        l, rem = divmod(n - 1 - m * m, m)
        if rem == 0 and (l < 1 or (l - 1) ** 2 < 4 * m):
            return True
        m += 1
    return False
