"""Tests for the randomized property battery."""

import numpy as np
import pytest

from sq_toolkit.verify import (
    DEFAULT_TOLERANCES,
    bell_state,
    check_convexity_gap,
    check_proof_chain,
    check_scheme_monotonicity,
    random_partition,
    random_scheme,
    run_battery,
)

CHECK_NAMES = {
    "scheme_monotonicity",
    "proof_chain_inequalities",
    "proof_chain_equality",
    "convexity_gap",
    "degenerate_orbit_entropy",
    "degenerate_orbit_reconstruction",
    "oracle_lower_bound",
    "adapted_attainment",
}


def test_default_battery_passes():
    report = run_battery(samples=60, seed=1)
    assert report["passed"]
    assert {c["name"] for c in report["checks"]} == CHECK_NAMES
    for check in report["checks"]:
        assert check["passed"]
        assert check["worst"] <= check["tolerance"]


def test_battery_with_single_sample():
    report = run_battery(samples=1, seed=3)
    assert report["passed"]


def test_battery_deterministic_in_seed():
    a = run_battery(samples=20, seed=5)
    b = run_battery(samples=20, seed=5)
    assert a == b


def test_battery_rejects_unknown_tolerance():
    with pytest.raises(ValueError):
        run_battery(samples=5, tolerances={"no_such_check": 1e-9})


def test_battery_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        run_battery(samples=5, tolerances={"convexity_gap": -1e-9})


def test_battery_rejects_zero_samples():
    with pytest.raises(ValueError):
        run_battery(samples=0)


def test_impossible_tolerance_fails_cleanly():
    report = run_battery(
        samples=20, seed=2, tolerances={"proof_chain_equality": 0.0}
    )
    failed = [c for c in report["checks"] if not c["passed"]]
    # the equality holds only to roundoff, so a zero tolerance must fail
    assert not report["passed"]
    assert [c["name"] for c in failed] == ["proof_chain_equality"]


def test_individual_checks_report_worst_case():
    mono = check_scheme_monotonicity(50, 0, DEFAULT_TOLERANCES["scheme_monotonicity"])
    assert mono["samples"] == 50
    assert mono["worst"] <= mono["tolerance"]
    chain = check_proof_chain(
        30, 1, (3, 3),
        DEFAULT_TOLERANCES["proof_chain_inequalities"],
        DEFAULT_TOLERANCES["proof_chain_equality"],
    )
    assert [c["name"] for c in chain] == [
        "proof_chain_inequalities", "proof_chain_equality",
    ]
    gap = check_convexity_gap(30, 2, (2, 4), DEFAULT_TOLERANCES["convexity_gap"])
    assert gap["passed"]


def test_random_scheme_and_partition_are_consistent():
    rng = np.random.default_rng(9)
    for _ in range(20):
        scheme = random_scheme(rng)
        part = random_partition(rng, len(scheme))
        part.validate_for(len(scheme))
        assert abs(scheme.weights.sum() - 1.0) <= 1e-12


def test_bell_state_helper():
    st = bell_state()
    assert st.factor_dims == (2, 2)
    np.testing.assert_allclose(
        st.amplitudes, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-15
    )
