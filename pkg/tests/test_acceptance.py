"""Acceptance criteria 1-11 at their stated tolerances and sizes."""

import pytest

from ampsample import verify
from ampsample.surface import reduction


def check(record_criterion, number, result):
    record_criterion(number, result.passed, result.summary)
    print(f"criterion {number}: {'PASS' if result.passed else 'FAIL'}  {result.summary}")
    assert result.passed, result.summary


def test_criterion_01_sampler_exactness(record_criterion):
    r = verify.sampler_suite(count=200)
    assert r.metrics["adaptive"] > 0
    check(record_criterion, 1, r)


def test_criterion_02_backend_equivalence(record_criterion):
    check(record_criterion, 2, verify.backend_suite(count=200))


def test_criterion_03_noisy_oracle_bound(record_criterion):
    r = verify.robustness_suite(pairs=50)
    sums = [b / 16 for _, b in r.metrics["l1_and_bound"]]
    assert all(1e-4 <= s <= 0.05 + 1e-12 for s in sums)
    check(record_criterion, 3, r)


def test_criterion_04_call_accounting(record_criterion):
    check(record_criterion, 4, verify.calls_suite(count=100))


def test_criterion_05_budget(record_criterion):
    check(record_criterion, 5, verify.budget_suite(count=20))


def test_criterion_06_mcmc_structure(record_criterion):
    check(record_criterion, 6, verify.mcmc_suite(count=100, t_max=200, max_n=8))


def test_criterion_07_sensitivity(record_criterion):
    check(record_criterion, 7, verify.sensitivity_suite(count=30))


def test_criterion_08_tfim_end_to_end(record_criterion):
    check(record_criterion, 8, verify.tfim_suite(chains=10_000, steps=10_000))


def test_criterion_09_surface_code(record_criterion):
    check(record_criterion, 9, verify.surface_suite(draws=100_000))


def test_criterion_10_gadget_identities(record_criterion):
    r = verify.gadget_suite()
    assert r.metrics["tau"] == pytest.approx(3.732, abs=1e-3)
    check(record_criterion, 10, r)


def test_criterion_11_reduction(record_criterion):
    k4 = reduction.perfect_matchings_via_reduction(reduction.k4())
    k33 = reduction.perfect_matchings_via_reduction(reduction.k33_one_crossing())
    assert (k4.count, k4.brute_force) == (3, 3)
    assert (k33.count, k33.brute_force) == (6, 6)
    assert abs(k4.value - 3) <= 1e-6 and abs(k33.value - 6) <= 1e-6
    check(record_criterion, 11, verify.reduction_suite())
