"""Acceptance battery: every criterion at its stated tolerance.

Runs the full set once (module scope), prints one pass/fail line per
criterion, and asserts each criterion plus its stated runtime budget.
Criterion 10 re-runs the battery with 8 worker threads after dropping all
caches and requires byte-identical JSON records.
"""

import pytest

from siegelsums import acceptance


@pytest.fixture(scope="module")
def battery():
    records, timings = acceptance.run_all(threads=1)
    for rec in records:
        status = "PASS" if rec["pass"] else "FAIL"
        print(f"{status} criterion {rec['criterion']}: {rec['name']} "
              f"({timings[rec['criterion']]:.2f}s)")
    return {rec["criterion"]: rec for rec in records}, timings


RUNTIME_BUDGETS = {1: 10.0, 2: 60.0, 4: 5.0, 5: 120.0, 8: 60.0, 9: 600.0}


def _check(battery, n):
    records, timings = battery
    rec = records[n]
    if n in RUNTIME_BUDGETS:
        assert timings[n] < RUNTIME_BUDGETS[n], (
            f"criterion {n} exceeded its runtime budget: {timings[n]:.1f}s")
    assert rec["pass"], rec
    return rec


def test_criterion_01_kloosterman_oracle(battery):
    rec = _check(battery, 1)
    assert rec["max_deviation"] <= 1e-9
    assert rec["pinned_deviation"] <= 1e-9


def test_criterion_02_factorization(battery):
    rec = _check(battery, 2)
    assert rec["max_bezout_deviation"] <= 1e-9


def test_criterion_03_equivariance(battery):
    rec = _check(battery, 3)
    assert rec["instances"] == 100


def test_criterion_04_congruence_counts(battery):
    _check(battery, 4)


def test_criterion_05_twisted_average(battery):
    rec = _check(battery, 5)
    assert rec["identities_tested"] >= 7 * 36


def test_criterion_06_gauss_salie_bounds(battery):
    rec = _check(battery, 6)
    assert rec["worst_gauss_ratio"] <= 1.0 + 1e-12
    assert rec["worst_salie_ratio"] <= 1.0 + 1e-12


def test_criterion_07_kernels(battery):
    _check(battery, 7)


def test_criterion_08_main_term_constants(battery):
    _check(battery, 8)


def test_criterion_09_spectral_consistency(battery):
    rec = _check(battery, 9)
    assert rec["h_II_epsilon"] < 1.0


def test_criterion_10_thread_determinism(battery):
    records, _ = battery
    base = acceptance.records_json(list(records.values()))
    acceptance.clear_all_caches()
    rerun, _ = acceptance.run_all(threads=8)
    assert acceptance.records_json(rerun) == base
