"""Quick oracle checks run by ``dioph selftest``.

Each check compares a fast path against a brute-force oracle on a small
domain and returns ``(name, ok, detail)``. The full-scale versions live in
the test suite.
"""
from __future__ import annotations

import math

import numpy as np

from . import kernels
from .arith import RngStream
from .congruence import (
    inverse_bounds,
    inverse_euclid,
    inverse_formula,
    inverse_voronoi,
    linear_congruence_min,
    linear_congruence_scan,
    max_inverse_distance,
    max_inverse_distance_bound,
    thue_pairs,
)
from .diophantine import frobenius_brute, frobenius_two, rep_count, rep_count_brute
from .factor import FactorConfig, algorithm_III, discriminant_roots, recover_key
from .stats import balanced_semiprimes, coprime_table


def _key_recovery():
    rec = recover_key(2257, 2431)
    xs = [p.x for p in thue_pairs(18080 % 2431, 2431)]
    ok = rec.d == 271 and (rec.report.p, rec.report.q) == (37, 61) and xs == [1, -2, 7, -16, 263, -542]
    return ok, f"d={rec.d}"


def _planted_totient():
    bad = 0
    pool = balanced_semiprimes(5000)
    for N, p, q in pool:
        phi = (p - 1) * (q - 1)
        if (p, q) not in discriminant_roots(N, phi):
            bad += 1
        rep = algorithm_III(N, FactorConfig(max_outer=2, planted_s=phi, trace_detail=False))
        if not rep.factored:
            bad += 1
    return bad == 0, f"{len(pool)} moduli, {bad} failures"


def _rep_counts():
    bad = 0
    for r in range(3, 13):
        for s in range(2, r):
            if math.gcd(r, s) != 1:
                continue
            bad += sum(rep_count(r, s, n).count != rep_count_brute(r, s, n) for n in range(2 * r * s + 1))
            if frobenius_brute([r, s], r * s) != frobenius_two(r, s):
                bad += 1
    return bad == 0, f"{bad} mismatches"


def _inverses():
    rng = RngStream(0, 1)
    bad = 0
    for _ in range(300):
        N = rng.randbits(256) | 1
        a = rng.rand_range(1, N - 1)
        if math.gcd(a, N) != 1:
            continue
        bad += inverse_formula(a, N) != inverse_euclid(a, N)
    for N in range(2, 120):
        for a in range(1, N):
            if math.gcd(a, N) != 1:
                continue
            inv = inverse_euclid(a, N)
            if a > 1:
                lo, hi = inverse_bounds(a, N)
                bad += not lo <= inv <= hi
            bad += inverse_voronoi(a, N) != inv
    return bad == 0, f"{bad} mismatches"


def _thue():
    rng = RngStream(0, 2)
    bad = 0
    for _ in range(300):
        r = rng.rand_range(3, 2**64)
        a = rng.rand_range(1, r - 1)
        if math.gcd(a, r) != 1:
            continue
        root = math.isqrt(r)
        pairs = thue_pairs(a, r)
        bad += any((a * p.x - p.y) % r for p in pairs)
        bad += not any(abs(p.x) <= root and p.y <= root for p in pairs)
    return bad == 0, f"{bad} failures"


def _lincong():
    bad = 0
    for N in range(2, 30):
        for a in range(1, N):
            if math.gcd(a, N) != 1:
                continue
            for c in range(N):
                for B in range(1, N):
                    bad += linear_congruence_min(a, c, N, B) != linear_congruence_scan(a, c, N, B)
    return bad == 0, f"{bad} mismatches"


def _max_distance():
    bad = 0
    for n in range(2, 300):
        bad += max_inverse_distance(n)[0] > max_inverse_distance_bound(n)
    return bad == 0, f"{bad} violations"


def _kernels():
    rng = RngStream(0, 3)
    a, b = rng.uint64s(2000), rng.uint64s(2000)
    from .kernels import _pykernels as ref

    same = (np.array_equal(kernels.euclid_division_counts(a, b), ref.euclid_division_counts(a, b))
            and kernels.count_coprime_pairs(a, b) == ref.count_coprime_pairs(a, b)
            and kernels.scan_constant_pair(2257, 2431, 1, 18080, 12)
            == ref.scan_constant_pair(2257, 2431, 1, 18080, 12))
    return same and coprime_table(10) == 63, f"backend={kernels.BACKEND}"


CHECKS = [
    ("example key recovery", _key_recovery),
    ("planted totient", _planted_totient),
    ("representation counts", _rep_counts),
    ("modular inverses", _inverses),
    ("thue pairs", _thue),
    ("linear congruence minimum", _lincong),
    ("max inverse distance", _max_distance),
    ("kernel backends", _kernels),
]


def run_all() -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
