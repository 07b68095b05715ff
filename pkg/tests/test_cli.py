"""End-to-end tests for the command line interface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import LN2, bell_state, ghz_state
from sq_toolkit.cli import ConfigError, main, state_from_json, state_to_json
from sq_toolkit.linalg import random_product_state


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_state_json_round_trip():
    st = random_product_state((2, 3), 4)
    back = state_from_json(state_to_json(st))
    assert back.factor_dims == st.factor_dims
    np.testing.assert_allclose(back.amplitudes, st.amplitudes, atol=1e-15)


def test_state_from_json_rejects_malformed():
    good = state_to_json(bell_state())
    for broken in (
        [],
        {"factor_dims": [2, 2]},
        {**good, "factor_dims": [2, "2"]},
        {**good, "amplitudes": good["amplitudes"][:3]},
        {**good, "amplitudes": [[1.0, 0.0, 0.0]] * 4},
    ):
        with pytest.raises(ConfigError):
            state_from_json(broken)


def test_state_from_json_rejects_unnormalized():
    bad = state_to_json(bell_state())
    bad["amplitudes"][0] = [1.0, 0.0]
    with pytest.raises(ConfigError):
        state_from_json(bad)


def test_schmidt_bell_file(tmp_path, capsys):
    cfg = write_config(tmp_path, {"state": state_to_json(bell_state())})
    code, report = run_json(capsys, ["schmidt", "--config", cfg])
    assert code == 0
    np.testing.assert_allclose(report["weights"], [0.5, 0.5], atol=1e-12)
    assert report["schmidt_rank"] == 2
    assert report["reconstruction_error"] <= 1e-10


def test_schmidt_product_state_rank_one(tmp_path, capsys):
    st = random_product_state((3, 3), 0)
    cfg = write_config(tmp_path, {"state": state_to_json(st)})
    code, report = run_json(capsys, ["schmidt", "--config", cfg])
    assert code == 0
    assert report["schmidt_rank"] == 1


def test_schmidt_random_state_seed_42(tmp_path, capsys):
    cfg = write_config(tmp_path, {"random_state": {"factor_dims": [4, 4], "seed": 42}})
    code, report = run_json(capsys, ["schmidt", "--config", cfg])
    assert code == 0
    assert abs(sum(report["weights"]) - 1.0) <= 1e-12


def test_schmidt_rejects_csv(tmp_path, capsys):
    cfg = write_config(tmp_path, {"state": state_to_json(bell_state())})
    assert main(["schmidt", "--config", cfg, "--format", "csv"]) == 2
    assert "error:" in capsys.readouterr().err


def test_schmidt_rejects_conflicting_state_keys(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "state": state_to_json(bell_state()),
            "random_state": {"factor_dims": [2, 2], "seed": 0},
        },
    )
    assert main(["schmidt", "--config", cfg]) == 2


def test_sq_closed_form_bell(tmp_path, capsys):
    cfg = write_config(tmp_path, {"state": state_to_json(bell_state())})
    code, report = run_json(capsys, ["sq", "--config", cfg])
    assert code == 0
    assert report["method"] == "closed_form"
    assert abs(report["value"] - LN2) <= 1e-11  # 12 significant digits


def test_sq_search_bell(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {"state": state_to_json(bell_state()), "method": "search", "restarts": 10},
    )
    code, report = run_json(capsys, ["sq", "--config", cfg, "--seed", "0"])
    assert code == 0
    assert report["method"] == "search"
    assert abs(report["value"] - LN2) <= 1e-6
    assert report["restarts_used"] == 10
    assert abs(report["gap_to_closed_form"]) <= 1e-6


def test_sq_search_three_factor_product(tmp_path, capsys):
    st = random_product_state((2, 2, 2), 3)
    cfg = write_config(
        tmp_path,
        {"state": state_to_json(st), "method": "search", "restarts": 4, "seed": 1},
    )
    code, report = run_json(capsys, ["sq", "--config", cfg])
    assert code == 0
    assert report["value"] <= 1e-6
    assert "gap_to_closed_form" not in report


def test_sq_closed_form_needs_bipartite(tmp_path, capsys):
    cfg = write_config(tmp_path, {"state": state_to_json(ghz_state())})
    assert main(["sq", "--config", cfg]) == 3
    assert "error:" in capsys.readouterr().err


def test_sq_rejects_unknown_method(tmp_path):
    cfg = write_config(
        tmp_path, {"state": state_to_json(bell_state()), "method": "annealing"}
    )
    assert main(["sq", "--config", cfg]) == 2


def test_sq_search_requires_nonneg_seed(tmp_path):
    cfg = write_config(
        tmp_path,
        {"state": state_to_json(bell_state()), "method": "search", "seed": -3},
    )
    assert main(["sq", "--config", cfg]) == 2


def test_verify_defaults_pass(capsys):
    code, report = run_json(capsys, ["verify"])
    assert code == 0
    assert report["passed"] is True
    assert report["samples"] == 200
    assert report["seed"] == 1


def test_verify_negative_tolerance_is_config_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {"tolerances": {"convexity_gap": -1e-10}})
    assert main(["verify", "--config", cfg]) == 2
    assert "error:" in capsys.readouterr().err


def test_verify_unknown_tolerance_is_config_error(tmp_path):
    cfg = write_config(tmp_path, {"tolerances": {"bogus": 1e-10}})
    assert main(["verify", "--config", cfg]) == 2


def test_verify_single_sample(tmp_path, capsys):
    cfg = write_config(tmp_path, {"samples": 1})
    code, report = run_json(capsys, ["verify", "--config", cfg])
    assert code == 0
    assert report["passed"] is True


def test_verify_violation_exits_one(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {"samples": 20, "seed": 2, "tolerances": {"proof_chain_equality": 0.0}},
    )
    code, report = run_json(capsys, ["verify", "--config", cfg])
    assert code == 1
    assert report["passed"] is False


def test_scatter_free_coupling_stays_flat(tmp_path, capsys):
    cfg = write_config(tmp_path, {"coupling": 0.0, "samples": 5, "seed": 0})
    out = tmp_path / "traj.csv"
    code = main(["scatter", "--config", cfg, "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,sq_estimate,pair_i,pair_j"
    assert len(lines) == 6
    finals = [float(line.split(",")[1]) for line in lines[1:]]
    assert max(finals) <= 1e-9
    summary = capsys.readouterr().out
    assert summary.startswith("initial=")


def test_scatter_generic_coupling_reports_growth(tmp_path, capsys):
    cfg = write_config(tmp_path, {"samples": 5, "seed": 0})
    out = tmp_path / "traj.csv"
    assert main(["scatter", "--config", cfg, "--out", str(out)]) == 0
    last = out.read_text().splitlines()[-1]
    assert float(last.split(",")[1]) > 0.0
    assert "final=" in capsys.readouterr().out


def test_scatter_stdout_keeps_summary_on_stderr(tmp_path, capsys):
    cfg = write_config(tmp_path, {"samples": 3, "seed": 1})
    assert main(["scatter", "--config", cfg]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("t,sq_estimate,pair_i,pair_j")
    assert captured.err.startswith("initial=")


def test_scatter_json_format(tmp_path, capsys):
    cfg = write_config(tmp_path, {"samples": 3, "seed": 1})
    code = main(["scatter", "--config", cfg, "--format", "json"])
    assert code == 0
    payload = capsys.readouterr().out
    report = json.loads(payload.split("initial=")[0])
    assert set(report) == {"times", "sq_estimates", "pair_schedule", "pair_entropies"}
    assert len(report["times"]) == 3


def test_scatter_requires_both_in_states(tmp_path):
    st = state_to_json(random_product_state((4,), 0))
    cfg = write_config(tmp_path, {"in1": st})
    assert main(["scatter", "--config", cfg]) == 2


def test_scatter_explicit_in_states(tmp_path, capsys):
    in1 = state_to_json(random_product_state((4,), 1))
    in2 = state_to_json(random_product_state((4,), 2))
    cfg = write_config(tmp_path, {"in1": in1, "in2": in2, "samples": 3})
    assert main(["scatter", "--config", cfg]) == 0
    capsys.readouterr()


def test_gas_csv_has_initial_plus_collision_rows(tmp_path, capsys):
    cfg = write_config(
        tmp_path, {"n": 3, "d": 2, "collisions": 10, "restarts": 2, "seed": 0}
    )
    out = tmp_path / "gas.csv"
    assert main(["gas", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 12  # header + initial row + one per collision
    assert lines[1].split(",")[2:] == ["-1", "-1"]
    capsys.readouterr()


def test_gas_too_large_is_domain_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {"n": 21, "d": 2, "collisions": 1, "seed": 0})
    assert main(["gas", "--config", cfg]) == 3
    assert "error:" in capsys.readouterr().err


def test_byte_identical_reruns(tmp_path, capsys):
    cfg = write_config(tmp_path, {"samples": 4, "seed": 3})
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["scatter", "--config", cfg, "--out", str(a)]) == 0
    assert main(["scatter", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    sq_cfg = write_config(
        tmp_path,
        {"random_state": {"factor_dims": [3, 3], "seed": 5}, "method": "search",
         "restarts": 3, "seed": 6},
        name="sq.json",
    )
    c, d = tmp_path / "c.json", tmp_path / "d.json"
    assert main(["sq", "--config", sq_cfg, "--out", str(c)]) == 0
    assert main(["sq", "--config", sq_cfg, "--out", str(d)]) == 0
    assert c.read_bytes() == d.read_bytes()
    capsys.readouterr()


def test_seed_flag_overrides_config(tmp_path, capsys):
    cfg = write_config(tmp_path, {"random_state": {"factor_dims": [3, 3], "seed": 1}})
    _, with_config_seed = run_json(capsys, ["schmidt", "--config", cfg])
    _, with_flag = run_json(capsys, ["schmidt", "--config", cfg, "--seed", "2"])
    assert with_config_seed["weights"] != with_flag["weights"]


def test_missing_config_file_is_config_error(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert main(["schmidt", "--config", missing]) == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_json_is_config_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["schmidt", "--config", str(path)]) == 2
    capsys.readouterr()


def test_config_must_be_object(tmp_path, capsys):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    assert main(["schmidt", "--config", str(path)]) == 2
    capsys.readouterr()


def test_unknown_command_is_config_error(capsys):
    assert main(["warp"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_values_are_rounded_to_12_significant_digits(tmp_path, capsys):
    cfg = write_config(tmp_path, {"random_state": {"factor_dims": [4, 4], "seed": 9}})
    _, report = run_json(capsys, ["sq", "--config", cfg])
    assert report["value"] == float(f"{report['value']:.12g}")
    for w in report["weights"]:
        assert w == float(f"{w:.12g}")


def test_module_entry_point(tmp_path):
    cfg = write_config(tmp_path, {"state": state_to_json(bell_state())})
    proc = subprocess.run(
        [sys.executable, "-m", "sq_toolkit", "sq", "--config", cfg],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["value"] - LN2) <= 1e-11


def test_threads_env_does_not_change_output(tmp_path):
    cfg = write_config(
        tmp_path,
        {"random_state": {"factor_dims": [3, 3], "seed": 2}, "method": "search",
         "restarts": 4, "seed": 3},
    )
    runs = {}
    for threads in ("1", "4"):
        proc = subprocess.run(
            [sys.executable, "-m", "sq_toolkit", "sq", "--config", cfg],
            capture_output=True, text=True,
            env={"SQ_TOOLKIT_THREADS": threads, "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0
        runs[threads] = proc.stdout
    assert runs["1"] == runs["4"]
