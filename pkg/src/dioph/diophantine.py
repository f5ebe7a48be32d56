"""Linear Diophantine equations, Frobenius numbers and representation counts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from . import kernels
from .arith import RngStream
from .contfrac import cf_expand, convergents

__all__ = [
    "DiophSolution",
    "RepCount",
    "solve_linear",
    "solve_congruence",
    "frobenius_two",
    "frobenius_brute",
    "rep_count",
    "rep_count_brute",
    "rep_count_system",
    "rep_count_system_brute",
    "representability_density",
    "theorem23_bound",
    "sample_theorem23_constant",
]


@dataclass(frozen=True)
class DiophSolution:
    """Solutions ``(x0 + x_step t, y0 - y_step t)`` of ``r x + s y = n``."""

    x0: int
    y0: int
    x_step: int
    y_step: int
    d: int

    def at(self, t: int) -> tuple[int, int]:
        return self.x0 + self.x_step * t, self.y0 - self.y_step * t


@dataclass(frozen=True)
class RepCount:
    n: int
    count: int


def _bezout_from_convergents(r: int, s: int) -> tuple[int, int, int]:
    """``(u, v, d)`` with ``r u + s v = d = gcd(r, s)``, via the penultimate convergent of r/s."""
    table = convergents(cf_expand(r, s))
    n = len(table) - 1
    p_pen, q_pen = table[n - 1] if n >= 1 else (1, 0)
    d = r // table[n][0] if table[n][0] else s
    # r q_pen - s p_pen = (-1)**(n-1) d
    sign = 1 if (n - 1) % 2 == 0 else -1
    return sign * q_pen, -sign * p_pen, d


def solve_linear(r: int, s: int, n: int) -> DiophSolution | None:
    """Solve ``r x + s y = n`` over the integers.

    Returns None when ``gcd(r, s)`` does not divide ``n``. Otherwise ``x0`` is
    the least nonnegative solution, so ``0 <= x0 < s/d``.

    >>> solve_linear(3, 5, 1)
    DiophSolution(x0=2, y0=-1, x_step=5, y_step=3, d=1)
    """
    if r <= 0 or s <= 0:
        if r == 0 and s == 0:
            raise ValueError("r and s are both zero")
        raise ValueError("r and s must be positive")
    u, _, d = _bezout_from_convergents(r, s)
    if n % d:
        return None
    x_step, y_step = s // d, r // d
    x0 = (u * (n // d)) % x_step
    y0 = (n - r * x0) // s
    return DiophSolution(x0, y0, x_step, y_step, d)


def solve_congruence(a: int, b: int, N: int) -> list[int]:
    """All ``x`` in ``[0, N)`` with ``a x = b (mod N)``; there are gcd(a, N) of them or none."""
    if N <= 0:
        raise ValueError("modulus must be positive")
    a %= N
    b %= N
    d = math.gcd(a, N)
    if b % d:
        return []
    if a == 0:
        return list(range(N))
    step = N // d
    x0 = (b // d) * pow(a // d, -1, step) % step if step > 1 else 0
    return [x0 + step * t for t in range(d)]


def _check_coprime_pair(r: int, s: int):
    if r <= 0 or s <= 0 or math.gcd(r, s) != 1:
        raise ValueError(f"({r}, {s}) must be positive and coprime")


def frobenius_two(r: int, s: int) -> int:
    if r < 2 or s < 2:
        raise ValueError("coins must be >= 2")
    _check_coprime_pair(r, s)
    return r * s - r - s


def frobenius_brute(coins: Sequence[int], cap: int) -> int | None:
    """Largest ``n <= cap`` that is not a nonnegative combination of ``coins``.

    Returns None when every integer up to ``cap`` is representable.
    """
    coins = [int(c) for c in coins]
    if not coins or any(c <= 0 for c in coins):
        raise ValueError("coins must be positive")
    if reduce(math.gcd, coins) != 1:
        raise ValueError("gcd of coins must be 1")
    reach = kernels.reachable(coins, cap)
    missing = np.flatnonzero(reach == 0)
    return int(missing[-1]) if missing.size else None


def rep_count_brute(r: int, s: int, n: int) -> int:
    return sum(1 for x in range(n // r + 1) if (n - r * x) % s == 0)


def rep_count(r: int, s: int, n: int) -> RepCount:
    """Number of ``x, y >= 0`` with ``r x + s y = n`` by Popoviciu's formula."""
    _check_coprime_pair(r, s)
    if n < 0:
        raise ValueError("n must be nonnegative")
    s_inv = pow(s, -1, r) if r > 1 else 0
    r_inv = pow(r, -1, s) if s > 1 else 0
    value = (Fraction(n, r * s) - Fraction(s_inv * n % r, r)
             - Fraction(r_inv * n % s, s) + 1)
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"Popoviciu formula gave {value} for r={r}, s={s}, n={n}")
    return RepCount(n, int(value))


def _check_system(r_coeffs, s_coeffs):
    if len(r_coeffs) != len(s_coeffs):
        raise ValueError("coefficient lists differ in length")
    if any(c < 1 for c in list(r_coeffs) + list(s_coeffs)):
        raise ValueError("coefficients must be >= 1")


def rep_count_system(r_coeffs: Sequence[int], s_coeffs: Sequence[int], n: int, m: int) -> int:
    """Nonnegative solutions of the pair of equations sum r_i x_i = n, sum s_i x_i = m.

    Two-dimensional unbounded-knapsack DP; equals the coefficient of
    X^n Y^m in prod 1/(1 - X^r_i Y^s_i).
    """
    _check_system(r_coeffs, s_coeffs)
    if n < 0 or m < 0:
        return 0
    dp = np.zeros((n + 1, m + 1), dtype=object)
    dp[0, 0] = 1
    for ri, si in zip(r_coeffs, s_coeffs):
        if ri > n or si > m:
            continue
        for a in range(ri, n + 1):
            dp[a, si:] += dp[a - ri, : m + 1 - si]
    return int(dp[n, m])


def rep_count_system_brute(r_coeffs, s_coeffs, n: int, m: int) -> int:
    _check_system(r_coeffs, s_coeffs)

    def count(i, rem_n, rem_m):
        if i == len(r_coeffs):
            return int(rem_n == 0 and rem_m == 0)
        total = 0
        for x in range(rem_n // r_coeffs[i] + 1):
            if s_coeffs[i] * x > rem_m:
                break
            total += count(i + 1, rem_n - r_coeffs[i] * x, rem_m - s_coeffs[i] * x)
        return total

    return count(0, n, m)


def representability_density(r: int, s: int) -> tuple[int, int]:
    """``(representable, total)`` over the closed interval ``[s, (r-1)(s-1)]``."""
    _check_coprime_pair(r, s)
    if not r > s >= 2:
        raise ValueError("need r > s >= 2")
    lo, hi = s, (r - 1) * (s - 1)
    hits = sum(1 for n in range(lo, hi + 1) if rep_count(r, s, n).count >= 1)
    return hits, hi - lo + 1


def theorem23_bound(r: int, B: float) -> int:
    """floor(sqrt(r) / (ln r)**B), in decimal arithmetic sized to r."""
    with localcontext() as ctx:
        ctx.prec = len(str(r)) + 30
        value = Decimal(r).sqrt() / Decimal(r).ln() ** Decimal(repr(float(B)))
        return int(value.to_integral_value(rounding="ROUND_FLOOR"))


def sample_theorem23_constant(r: int, B: float, rng: RngStream) -> tuple[int, int, int]:
    """Draw ``b1 < b2`` with ``|b_i| <= floor(sqrt(r)/(ln r)^B)`` and return
    ``(n, b1, b2)`` where ``n = (r + b2)^2 - (r + b1)^2``."""
    if r < 16:
        raise ValueError("r must be >= 16")
    bound = theorem23_bound(r, B)
    if bound < 1:
        raise ValueError(f"r too small for B={B}: bound is 0")
    width = 2 * bound + 1
    i = rng.rand_range(0, width - 1)
    j = rng.rand_range(0, width - 2)
    if j >= i:
        j += 1
    b1, b2 = sorted((i - bound, j - bound))
    return (r + b2) ** 2 - (r + b1) ** 2, b1, b2
