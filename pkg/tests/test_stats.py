import math

import numpy as np
import pytest

from dioph.arith import RngStream, totient
from dioph.stats import (
    ExperimentReport,
    balanced_semiprimes,
    binomial_3sigma,
    coprime_density,
    coprime_interval,
    coprime_table,
    euclid_mean_constant,
    euclid_steps,
    factoring_rates,
    gauss_kuzmin,
    gauss_kuzmin_probability,
    inverse_uniformity,
    phi_sums,
    product_coverage,
    product_coverage_cap,
    theorem23_probability,
    theta_uniformity,
    totient_sieve,
)


def test_report_round_trip():
    rep = gauss_kuzmin(2000, 1, RngStream(1, 0))
    again = ExperimentReport.from_json(rep.to_json())
    assert again == rep
    assert again.to_json() == rep.to_json()
    assert rep.to_csv().splitlines()[0] == "experiment,label,observed,reference,difference"


def test_report_rejects_zero_trials():
    with pytest.raises(ValueError):
        ExperimentReport("x", {}, 0, [], [], 0.0)


def test_gauss_kuzmin_references():
    rep = gauss_kuzmin(1000, 1, RngStream(2, 0))
    ref = dict(rep.reference)
    assert ref["k=1"] == 1 / 2
    assert ref["k=3"] == 1 / 12
    rep10 = gauss_kuzmin(1000, 10, RngStream(2, 0))
    assert dict(rep10.reference)["k=1"] == pytest.approx(math.log2(4 / 3), rel=1e-15)
    assert gauss_kuzmin_probability(1) == pytest.approx(math.log2(4 / 3))
    with pytest.raises(ValueError):
        gauss_kuzmin(10, 0, RngStream(2, 0))


def test_frequencies_in_unit_interval():
    for rep in (gauss_kuzmin(3000, 3, RngStream(3, 0)), coprime_density(3000, 64, RngStream(3, 1))):
        assert all(0 <= v <= 1 for _, v in rep.observed)


def test_gauss_kuzmin_first_digit_3sigma():
    rep = gauss_kuzmin(50000, 1, RngStream(4, 0))
    assert rep.passed


def test_reports_independent_of_workers():
    a = gauss_kuzmin(70000, 2, RngStream(5, 0), workers=1)
    b = gauss_kuzmin(70000, 2, RngStream(5, 0), workers=3)
    assert a.to_json() == b.to_json()
    c = coprime_density(100000, 64, RngStream(5, 1), workers=1)
    d = coprime_density(100000, 64, RngStream(5, 1), workers=2)
    assert c.to_json() == d.to_json()


def test_euclid_reference_constant():
    assert euclid_mean_constant() == pytest.approx(0.8427659, abs=1e-6)
    with pytest.raises(ValueError):
        euclid_steps(10, 8, RngStream(0, 0))


def test_euclid_steps_small_run():
    rep = euclid_steps(20000, 64, RngStream(6, 0))
    assert rep.passed
    assert dict(rep.observed)["variance"] > 0


def test_euclid_steps_bignum_path():
    rep = euclid_steps(2000, 128, RngStream(6, 1))
    assert rep.deviation < 0.05


def test_coprime_table():
    assert coprime_table(10) == 63


def test_coprime_density_tolerance_at_million():
    assert binomial_3sigma(6 / math.pi**2, 10**6) <= 0.002


def test_totient_sieve_matches():
    phi = totient_sieve(2000)
    assert all(int(phi[n]) == totient(n) for n in range(1, 2001))


def test_phi_sums_examples():
    assert dict(phi_sums(1).observed)["sum_phi"] == 1
    assert dict(phi_sums(10).observed)["sum_phi"] == 32
    with pytest.raises(ValueError):
        phi_sums(10**7 + 1)


def test_phi_sums_error_bounded():
    ratios = [phi_sums(X).notes["sum_phi_error_over_XlogX"] for X in (10**3, 10**4, 10**5, 10**6)]
    assert max(ratios) < 1.0


def test_coprime_interval_examples():
    assert dict(coprime_interval(30, 1, 30).observed)["coprime_count"] == 8
    assert dict(coprime_interval(101, 1, 101).observed)["coprime_count"] == 100
    rep = coprime_interval(2257, 100, 200)
    scan = sum(1 for a in range(100, 201) if math.gcd(a, 2257) == 1)
    assert dict(rep.observed)["coprime_count"] == scan
    assert rep.passed


def test_coprime_interval_exhaustive_small():
    for N in range(2, 120):
        for X in range(1, N, 7):
            for Y in range(X + 1, N + 1, 5):
                got = dict(coprime_interval(N, X, Y).observed)["coprime_count"]
                assert got == sum(1 for a in range(X, Y + 1) if math.gcd(a, N) == 1)


def test_coprime_interval_too_many_primes():
    primorial = math.prod([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73])
    with pytest.raises(ValueError):
        coprime_interval(primorial, 1, 10)


def test_inverse_uniformity():
    rep = inverse_uniformity(100003, 10)
    assert rep.passed and rep.notes["symmetric"]
    one = inverse_uniformity(1009, 1)
    assert one.observed == [("cell_0_0", 1008)]
    with pytest.raises(ValueError):
        inverse_uniformity(101, 10)


def test_theta_small_moduli():
    rep = theta_uniformity(3, 20000, RngStream(7, 0))
    labels = [label for label, _ in rep.observed]
    assert labels == ["theta=1", "theta=2"]
    assert rep.passed
    rep5 = theta_uniformity(5, 4000, RngStream(7, 1))
    assert rep5.notes["theta_by_residue"] == {"1": 4, "2": 2, "3": 3, "4": 1}
    assert rep5.notes["nonunit_hits"] == 0


def test_theta_composite_modulus_only_units():
    rep = theta_uniformity(12, 5000, RngStream(7, 2))
    assert rep.notes["nonunit_hits"] == 0
    assert [label for label, _ in rep.observed] == ["theta=1", "theta=5", "theta=7", "theta=11"]


def test_product_coverage():
    rep = product_coverage(101)
    want = len({x * y % 101 for x in range(1, 102) for y in range(1, 102)})
    assert dict(rep.observed)["residues"] == want
    with pytest.raises(ValueError):
        product_coverage(7)
    small = [dict(product_coverage(1009, cap).observed)["fraction"] for cap in (3, 10, 30, 100)]
    assert small == sorted(small)
    assert product_coverage_cap(101) >= 101


def test_theorem23_probability_report():
    rep = theorem23_probability(10007, 9901, 1, 10**4, RngStream(8, 0))
    assert rep.notes["max_n"] <= rep.notes["rs"]
    assert 0 <= dict(rep.observed)["rate"] <= 1
    assert dict(rep.reference)["rate"] == pytest.approx(1 / (2 * math.log(10007) ** 2))
    with pytest.raises(ValueError):
        theorem23_probability(10007, 10006, 1, 10, RngStream(8, 0))


def test_balanced_semiprimes_generator():
    pool = balanced_semiprimes(2000)
    assert all(N <= 2000 for N, _, _ in pool)
    for N, p, q in pool:
        assert p < q < 2 * p and p * q == N and p > 2
    assert (2257, 37, 61) in balanced_semiprimes(2300)


def test_factoring_rates_small():
    rep = factoring_rates(12, 10**5, 8, RngStream(9, 0))
    assert rep.parameters["count"] == 12
    assert {label for label, _ in rep.observed} >= {"algorithm_I", "algorithm_II", "algorithm_III"}
