"""Continued fractions of rationals and their convergent tables.

Indexing follows the usual seed ``p[-2], p[-1] = 0, 1`` and
``q[-2], q[-1] = 1, 0`` with ``p[n] = a[n] p[n-1] + p[n-2]``. In that
indexing the convergent identities read

    p[n] q[n-1] - p[n-1] q[n] = (-1)**(n-1)
    p[n] q[n-2] - p[n-2] q[n] = (-1)**n * a[n]
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

__all__ = [
    "ContinuedFraction",
    "ConvergentTable",
    "DirichletCheck",
    "cf_expand",
    "cf_from_quotients",
    "convergents",
    "is_convergent_of",
]


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: tuple[int, ...]
    source: tuple[int, int]

    def value(self) -> Fraction:
        return Fraction(*self.source)

    def __len__(self):
        return len(self.quotients)


@dataclass(frozen=True)
class ConvergentTable:
    rows: tuple[tuple[int, int], ...]

    @property
    def p(self) -> list[int]:
        return [row[0] for row in self.rows]

    @property
    def q(self) -> list[int]:
        return [row[1] for row in self.rows]

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, n):
        return self.rows[n]


def cf_expand(num: int, den: int) -> ContinuedFraction:
    """Partial quotients of ``num/den`` (Euclid's quotient chain).

    >>> cf_expand(1063, 2431).quotients
    (0, 2, 3, 2, 16, 2, 4)
    """
    if den == 0:
        raise ZeroDivisionError("denominator must be positive")
    if den < 0 or num < 0:
        raise ValueError("expects a nonnegative rational with positive denominator")
    g = gcd(num, den)
    quotients = []
    a, b = num, den
    while b:
        q, rem = divmod(a, b)
        quotients.append(q)
        a, b = b, rem
    return ContinuedFraction(tuple(quotients), (num // g, den // g))


def cf_from_quotients(quotients: Sequence[int]) -> ContinuedFraction:
    """Build the canonical expansion from an arbitrary quotient list.

    A trailing ``..., a, 1`` is folded into ``..., a + 1``.
    """
    qs = [int(a) for a in quotients]
    if not qs:
        raise ValueError("empty quotient sequence")
    if qs[0] < 0 or any(a < 1 for a in qs[1:]):
        raise ValueError("quotients after the first must be >= 1")
    while len(qs) > 1 and qs[-1] == 1:
        qs.pop()
        qs[-1] += 1
    p0, p1, q0, q1 = 0, 1, 1, 0
    for a in qs:
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
    return ContinuedFraction(tuple(qs), (p1, q1))


def convergents(cf: ContinuedFraction | Sequence[int]) -> ConvergentTable:
    quotients = cf.quotients if isinstance(cf, ContinuedFraction) else tuple(cf)
    rows = []
    p_prev2, p_prev = 0, 1
    q_prev2, q_prev = 1, 0
    for a in quotients:
        p = a * p_prev + p_prev2
        q = a * q_prev + q_prev2
        rows.append((p, q))
        p_prev2, p_prev = p_prev, p
        q_prev2, q_prev = q_prev, q
    return ConvergentTable(tuple(rows))


class DirichletCheck(NamedTuple):
    is_convergent: bool
    inequality_holds: bool
    in_table: bool


def is_convergent_of(p: int, q: int, num: int, den: int) -> DirichletCheck:
    """Decide whether ``p/q`` is a convergent of ``num/den``.

    Reports both the strict inequality ``|num/den - p/q| < 1/(2 q^2)`` (by
    cross multiplication) and membership in the convergent table; whenever
    the inequality holds, membership must hold too.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    if gcd(p, q) != 1:
        raise ValueError("p/q must be in lowest terms")
    # |num q - p den| / (den q) < 1 / (2 q^2)  <=>  2 q |num q - p den| < den
    inequality = 2 * q * abs(num * q - p * den) < den
    in_table = (p, q) in set(convergents(cf_expand(num, den)).rows)
    return DirichletCheck(inequality or in_table, inequality, in_table)
