import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from dioph.arith import RngStream, iroot, prime_factors
from dioph.factor import (
    FactorConfig,
    FactorInputError,
    algorithm_I,
    algorithm_II,
    algorithm_III,
    candidate_s_values,
    check_input,
    discriminant_roots,
    effective_approx_test,
    key_recovery,
    r_interval,
    recover_key,
    s_interval,
    small_divisor_scan,
)
from dioph.kernels import _pykernels
from dioph.stats import balanced_semiprimes


def test_candidates_for_worked_key():
    cands = candidate_s_values(2431, 1, 18080)
    hit = [c for c in cands if c.value == 271]
    assert hit and hit[0].origin == "c0/y" and hit[0].pair_index == 2 and hit[0].variant == "s"
    assert pow(305, -1, 2431) == 271
    assert all(0 <= c.s < 2431 for c in cands)


def test_candidates_degenerate_equal_constants():
    cands = candidate_s_values(2431, 5, 5)
    assert {c.pair_index for c in cands} == {1}
    assert {c.s for c in cands} == {5, 5 * pow(1, -1, 2431) % 2431}


def test_candidates_reject_noninvertible_c0():
    with pytest.raises(ValueError):
        candidate_s_values(2431, 11, 5)  # 2431 = 11 * 13 * 17


def test_candidate_order():
    cands = candidate_s_values(2431, 1, 18080, max_pairs=1)
    assert [(c.origin, c.variant) for c in cands[:6]] == [
        ("c0/x", "s"), ("c0/x", "r-s"), ("c0/x", "r+s"),
        ("c1/x", "s"), ("c1/x", "r-s"), ("c1/x", "r+s"),
    ]


def test_discriminant_roots_examples():
    assert discriminant_roots(2257, 271, 2431) == [(37, 61)]
    assert discriminant_roots(2257, 2160) == [(37, 61)]
    assert discriminant_roots(15, 7) == []


def test_exactness_on_totient_small():
    for N, p, q in balanced_semiprimes(20000):
        phi = (p - 1) * (q - 1)
        assert (p, q) in discriminant_roots(N, phi)
        # the complementary sum also works: s = p + q gives T = N + 1 - s' with s' = phi
        assert (p, q) in discriminant_roots(N, N + 1 - (p + q))


def test_balanced_sum_window():
    for N, p, q in balanced_semiprimes(10**5):
        assert 4 * N < (p + q) ** 2 < 9 * N / 2
        lo, hi = s_interval(N)
        assert lo <= (p - 1) * (q - 1) <= hi


def test_r_interval_exact():
    lo, hi = r_interval(2257)
    assert hi == 2257
    assert (2257 - lo) ** 2 * 2 >= 9 * 2257 > (2257 - lo - 1) ** 2 * 2


@pytest.mark.parametrize("N", [2, 15 * 0 + 16, 2257 * 2, 9973, 37 * 37, 2**20, 5])
def test_input_rejected(N):
    with pytest.raises(FactorInputError):
        check_input(N)


def test_effective_approx_exact_totient():
    assert effective_approx_test(2257, 2160) == (37, 61)


def test_effective_approx_perturbed_first_trace_fails():
    # T = N + 1 - s = 89 has T^2 < 4N, so that trace gives no real roots
    assert 89 * 89 - 4 * 2257 < 0
    assert effective_approx_test(2257, 2169) is None


def test_small_divisor_scan_examples():
    bound = iroot(2257, 4) + 1
    assert bound == 7
    assert small_divisor_scan(2257, 35, bound) == (37, 61)
    assert small_divisor_scan(2257, 37, 0) == (37, 61)
    assert small_divisor_scan(2257, 49, 3) is None


def _approx_pipeline(N, s):
    approx = effective_approx_test(N, s)
    if approx is None:
        return None
    return small_divisor_scan(N, approx[0], iroot(N, 4) + 1)


@pytest.mark.parametrize("t", range(-2, 3))
def test_planted_approximation_recovered(t):
    assert _approx_pipeline(2257, 2160 + t) == (37, 61)


@pytest.mark.parametrize("t", [-6, -5, -4, -3, 3, 4, 5, 6])
def test_planted_approximation_outside_root_inequalities(t):
    # p + q = 98 sits just above 2 sqrt(2257) = 95.01: shifting T up makes the
    # root ratio reach 2, shifting it down makes the discriminant negative.
    T = 98 - t
    D = T * T - 4 * 2257
    assert D < 0 or 9 * D >= T * T
    assert _approx_pipeline(2257, 2160 + t) is None


@pytest.mark.parametrize("p, q", [(1009, 1511), (1009, 1999), (37, 61), (613, 811)])
def test_planted_approximation_recovery_iff_root_within_bound(p, q):
    # a shift t of the totient moves the small root by about t p / (q - p),
    # so the window of recoverable t depends on the factor gap
    N, phi = p * q, (p - 1) * (q - 1)
    bound = iroot(N, 4) + 1
    recovered = 0
    for t in range(-bound, bound + 1):
        approx = effective_approx_test(N, phi + t)
        got = _approx_pipeline(N, phi + t)
        if approx is None:
            assert got is None
            continue
        assert (got == (p, q)) == (abs(p - approx[0]) <= bound)
        recovered += got is not None
    assert recovered >= 5


def test_soundness_for_effective_approx_far_candidates():
    for N, p, q in balanced_semiprimes(10**4):
        phi = (p - 1) * (q - 1)
        root = math.isqrt(N) + 1
        # above N + 1 the trace N + 1 - s turns negative and |T| can approach
        # p + q again (roots -p, -q), so the claim is about 0 <= s <= N
        far = list(range(max(0, phi - 4 * root), phi - root)) + list(range(phi + root + 1, N + 1))
        for s in far:
            assert effective_approx_test(N, s) is None


def test_algorithm_I_worked_example():
    cfg = FactorConfig(constant_strategy="consecutive-squares", fixed_r=2431, unit_c0=True, max_outer=10)
    rep = algorithm_I(2257, cfg)
    assert (rep.p, rep.q) == (37, 61)
    assert rep.trace[-1].c1 == 18080
    assert rep.trace[-1].square_hits[0]["D"] == 576


def test_algorithm_II_stops_no_later_than_I():
    cfg = FactorConfig(constant_strategy="consecutive-squares", fixed_r=2431, unit_c0=True, max_outer=10)
    one, two = algorithm_I(2257, cfg), algorithm_II(2257, cfg)
    # II accepts everything I does plus approximations, so it stops no later
    assert (one.p, one.q) == (two.p, two.q)
    assert len(two.trace) <= len(one.trace)
    for a, b in zip(one.trace, two.trace):
        assert a.candidates == b.candidates


def test_algorithm_III_planted_example():
    rep = algorithm_III(2257, FactorConfig(planted_s=2160, max_outer=2))
    assert (rep.p, rep.q) == (37, 61)
    assert rep.trace[-1].square_hits[0]["T"] == 98


def test_algorithm_III_planted_all_small():
    for N, p, q in balanced_semiprimes(20000):
        rep = algorithm_III(N, FactorConfig(planted_s=(p - 1) * (q - 1), max_outer=2, trace_detail=False))
        assert (rep.p, rep.q) == (p, q)


@pytest.mark.parametrize("runner", [algorithm_I, algorithm_II, algorithm_III])
def test_soundness_random_semiprimes(runner):
    pool = balanced_semiprimes(10**6)
    rng = RngStream(99, 0)
    for _ in range(25):
        N, p, q = pool[rng.rand_range(0, len(pool) - 1)]
        rep = runner(N, FactorConfig(max_outer=6, seed=5, trace_detail=False))
        if rep.factored:
            assert rep.p * rep.q == N and 1 < rep.p <= rep.q < N


@pytest.mark.parametrize("runner", [algorithm_I, algorithm_II, algorithm_III])
def test_determinism_and_workers(runner):
    N = 1009 * 1013
    cfg = FactorConfig(max_outer=20, seed=11)
    a, b = runner(N, cfg), runner(N, cfg)
    c = runner(N, replace(cfg, workers=2))
    assert [t.to_dict() for t in a.trace] == [t.to_dict() for t in b.trace] == [t.to_dict() for t in c.trace]
    assert a.work == b.work == c.work


def test_budget_compliance():
    N = 1009 * 1013
    cfg = FactorConfig(max_outer=7, candidates_per_pair=3, pairs_per_outer=2, seed=2)
    for runner in (algorithm_I, algorithm_II):
        rep = runner(N, cfg)
        assert rep.work["outer_iterations"] <= 7
        assert len(rep.trace) <= 14
        assert all(t.pairs_used <= 3 for t in rep.trace)
        assert all(t.candidates_tested <= 3 * 12 for t in rep.trace)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 2**32))
def test_fast_scan_matches_traced_scan(idx, seed):
    pool = balanced_semiprimes(10**6)
    N = pool[idx % len(pool)][0]
    for runner in (algorithm_I,):
        fast = runner(N, FactorConfig(max_outer=5, seed=seed, trace_detail=False))
        slow = runner(N, FactorConfig(max_outer=5, seed=seed, trace_detail=True))
        assert (fast.p, fast.q) == (slow.p, slow.q)
        assert fast.work["candidates_tested"] == slow.work["candidates_tested"]
        assert fast.work["pairs_used"] == slow.work["pairs_used"]


def test_key_recovery_example():
    rec = recover_key(2257, 2431)
    assert rec.d == 271
    c1s = [t.c1 for t in rec.report.trace]
    assert c1s == [(2258 + j) ** 2 - 2258**2 for j in range(1, 5)]
    assert c1s[-1] == 18080
    assert (271 * 2431) % 2160 == 1


def test_key_recovery_unit_exponent():
    phi = 36 * 60
    assert key_recovery(2257, phi + 1) == 1


def test_key_recovery_inverse_property():
    for p, q, e in [(37, 61, 2431), (101, 151, 13001), (53, 71, 3001)]:
        N, phi = p * q, (p - 1) * (q - 1)
        if math.gcd(e, phi) != 1:
            continue
        d = key_recovery(N, e, FactorConfig(constant_strategy="consecutive-squares", max_outer=300))
        if d is not None:
            assert d * e % phi == 1
