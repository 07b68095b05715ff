"""Command line front end.

Subcommands: schmidt, sq, verify, scatter, gas. Each takes --config PATH
(JSON), --seed N (overrides seeds in the config), --out PATH and --format
{csv,json}. Reports are data only: JSON for schmidt/sq/verify, delimited
or JSON trajectories for scatter/gas. Exit codes: 0 success, 1 property
violation found by verify, 2 config error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import prod
from pathlib import Path

import numpy as np

from .errors import ToolkitError
from .linalg import StateVector, random_state, schmidt
from .scattering import (
    CollisionModel,
    box_energies,
    entropy_trajectory,
    gas_run,
    trajectory_to_csv,
    trajectory_to_json,
)
from .sq import sq_bipartite, sq_search
from .verify import run_battery


class ConfigError(ValueError):
    """Bad config file, bad flag value, or bad inline data."""


def state_to_json(state: StateVector) -> dict:
    """State as JSON: factor dims plus flat row-major [re, im] pairs."""
    return {
        "factor_dims": list(state.factor_dims),
        "amplitudes": [[float(z.real), float(z.imag)] for z in state.amplitudes],
    }


def state_from_json(obj) -> StateVector:
    if not isinstance(obj, dict) or not {"factor_dims", "amplitudes"} <= set(obj):
        raise ConfigError("state JSON needs 'factor_dims' and 'amplitudes'")
    dims = obj["factor_dims"]
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and d >= 1 for d in dims
    ):
        raise ConfigError("factor_dims must be a list of positive integers")
    pairs = obj["amplitudes"]
    expected = prod(dims)
    if not isinstance(pairs, list) or len(pairs) != expected:
        raise ConfigError(f"amplitudes must be a list of {expected} [re, im] pairs")
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"amplitudes are not numeric: {exc}") from None
    if arr.shape != (expected, 2):
        raise ConfigError("each amplitude must be an [re, im] pair")
    try:
        return StateVector(tuple(dims), arr[:, 0] + 1j * arr[:, 1])
    except ValueError as exc:
        raise ConfigError(f"invalid state: {exc}") from None


def _load_json_file(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None


def _load_config(path) -> dict:
    if path is None:
        return {}
    cfg = _load_json_file(path)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _int_param(cfg, key, default, minimum) -> int:
    value = cfg.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}, got {value!r}")
    return value


def _float_param(cfg, key, default) -> float:
    value = cfg.get(key, default)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def _seed_param(cfg, key, flag_value, default) -> int:
    if flag_value is not None:
        seed = flag_value
    else:
        seed = cfg.get(key, default)
    if seed is None:
        raise ConfigError(f"a seed is required (config key {key!r} or --seed)")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seeds must be nonnegative integers, got {seed!r}")
    return seed


def _resolve_state(cfg, seed_flag, default_dims) -> StateVector:
    present = [k for k in ("state", "state_file", "random_state") if k in cfg]
    if len(present) > 1:
        raise ConfigError(f"give only one of {present}")
    if "state" in cfg:
        return state_from_json(cfg["state"])
    if "state_file" in cfg:
        return state_from_json(_load_json_file(cfg["state_file"]))
    request = cfg.get("random_state", {})
    if not isinstance(request, dict):
        raise ConfigError("random_state must be an object")
    dims = request.get("factor_dims", list(default_dims))
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and d >= 1 for d in dims
    ):
        raise ConfigError("random_state.factor_dims must be positive integers")
    default_seed = 0 if "random_state" in cfg else None
    seed = _seed_param(request, "seed", seed_flag, default_seed)
    return random_state(tuple(dims), seed)


def _round12(x: float) -> float:
    return float(f"{float(x):.12g}")


def _rounded(obj):
    if isinstance(obj, float):
        return _round12(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def _json_text(obj) -> str:
    return json.dumps(_rounded(obj), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from None


def _require_json_format(args) -> None:
    if args.format == "csv":
        raise ConfigError(f"the {args.command} report has no delimited form; use json")


def _cmd_schmidt(args) -> int:
    _require_json_format(args)
    cfg = _load_config(args.config)
    state = _resolve_state(cfg, args.seed, default_dims=(2, 2))
    form = schmidt(state)
    error = float(np.abs(form.reconstruct().amplitudes - state.amplitudes).max())
    report = {
        "weights": [float(w) for w in form.weights],
        "schmidt_rank": form.rank,
        "reconstruction_error": error,
    }
    _emit(_json_text(report), args.out)
    return 0


def _cmd_sq(args) -> int:
    _require_json_format(args)
    cfg = _load_config(args.config)
    state = _resolve_state(cfg, args.seed, default_dims=(2, 2))
    method = cfg.get("method", "closed_form")
    if method == "closed_form":
        result = sq_bipartite(state)
        report = result.to_json()
    elif method == "search":
        restarts = _int_param(cfg, "restarts", 10, 1)
        max_iters = _int_param(cfg, "max_iters", 800, 1)
        tol = _float_param(cfg, "tol", 1e-10)
        if tol <= 0.0:
            raise ConfigError(f"tol must be positive, got {tol}")
        seed = _seed_param(cfg, "seed", args.seed, 0)
        result = sq_search(
            state, restarts=restarts, max_iters=max_iters, tol=tol, seed=seed
        )
        report = result.to_json()
        if state.num_factors == 2:
            report["gap_to_closed_form"] = result.value - sq_bipartite(state).value
    else:
        raise ConfigError(f"method must be closed_form or search, got {method!r}")
    _emit(_json_text(report), args.out)
    return 0


def _cmd_verify(args) -> int:
    _require_json_format(args)
    cfg = _load_config(args.config)
    samples = _int_param(cfg, "samples", 200, 1)
    seed = _seed_param(cfg, "seed", args.seed, 1)
    dims = cfg.get("dims", [3, 3])
    if not isinstance(dims, list) or len(dims) != 2 or not all(
        isinstance(d, int) and d >= 2 for d in dims
    ):
        raise ConfigError("dims must be two integers >= 2")
    tolerances = cfg.get("tolerances")
    if tolerances is not None:
        if not isinstance(tolerances, dict):
            raise ConfigError("tolerances must be an object of name -> number")
        for name, value in tolerances.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
                raise ConfigError(f"tolerance {name} must be a nonnegative number")
    try:
        report = run_battery(samples=samples, seed=seed, dims=dims, tolerances=tolerances)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(_json_text(report), args.out)
    return 0 if report["passed"] else 1


def _energies_param(cfg, key, dim) -> tuple[float, ...]:
    value = cfg.get(key)
    if value is None:
        return box_energies(dim)
    if not isinstance(value, list) or len(value) != dim or not all(
        isinstance(e, (int, float)) and not isinstance(e, bool) for e in value
    ):
        raise ConfigError(f"{key} must be a list of {dim} numbers")
    return tuple(float(e) for e in value)


def _summary_line(traj) -> str:
    values = traj.sq_estimates
    return (
        f"initial={values[0]:.12g} final={values[-1]:.12g} max={max(values):.12g}\n"
    )


def _emit_trajectory(traj, args) -> None:
    if args.format == "json":
        _emit(_json_text(trajectory_to_json(traj)), args.out)
    else:
        _emit(trajectory_to_csv(traj), args.out)
    # keep stdout machine-readable when the trajectory itself goes there
    stream = sys.stdout if args.out is not None else sys.stderr
    stream.write(_summary_line(traj))


def _cmd_scatter(args) -> int:
    cfg = _load_config(args.config)
    d1 = _int_param(cfg, "d1", 4, 1)
    d2 = _int_param(cfg, "d2", 4, 1)
    samples = _int_param(cfg, "samples", 21, 2)
    interaction_seed = _int_param(cfg, "interaction_seed", 0, 0)
    model = CollisionModel(
        d1=d1,
        d2=d2,
        free_energies_1=_energies_param(cfg, "free_energies_1", d1),
        free_energies_2=_energies_param(cfg, "free_energies_2", d2),
        coupling=_float_param(cfg, "coupling", 0.5),
        interaction_seed=interaction_seed,
        duration=_float_param(cfg, "duration", 1.0),
    )
    if "in1" in cfg or "in2" in cfg:
        if not ("in1" in cfg and "in2" in cfg):
            raise ConfigError("give both in1 and in2, or neither")
        in1 = state_from_json(cfg["in1"])
        in2 = state_from_json(cfg["in2"])
    else:
        rng = np.random.default_rng(_seed_param(cfg, "seed", args.seed, 0))
        in1 = random_state((d1,), rng)
        in2 = random_state((d2,), rng)
    traj = entropy_trajectory(model, in1, in2, samples)
    _emit_trajectory(traj, args)
    return 0


def _cmd_gas(args) -> int:
    cfg = _load_config(args.config)
    n = _int_param(cfg, "n", 3, 3)
    d = _int_param(cfg, "d", 2, 1)
    collisions = _int_param(cfg, "collisions", 10, 0)
    restarts = _int_param(cfg, "restarts", 4, 1)
    interaction_seed = _int_param(cfg, "interaction_seed", 0, 0)
    model = CollisionModel(
        d1=d,
        d2=d,
        free_energies_1=_energies_param(cfg, "free_energies", d),
        free_energies_2=_energies_param(cfg, "free_energies", d),
        coupling=_float_param(cfg, "coupling", 0.5),
        interaction_seed=interaction_seed,
        duration=_float_param(cfg, "duration", 1.0),
    )
    seed = _seed_param(cfg, "seed", args.seed, 0)
    traj = gas_run(n, d, collisions, model, seed, restarts=restarts)
    _emit_trajectory(traj, args)
    return 0


_HANDLERS = {
    "schmidt": _cmd_schmidt,
    "sq": _cmd_sq,
    "verify": _cmd_verify,
    "scatter": _cmd_scatter,
    "gas": _cmd_gas,
}

_HELP = {
    "schmidt": "normal form of a bipartite state: weights, rank, reconstruction error",
    "sq": "minimal product-measurement entropy, closed form or search",
    "verify": "run the randomized property battery",
    "scatter": "two-particle collision: entropy along the interaction time",
    "gas": "n-particle gas under random pairwise collisions",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sq-toolkit",
        description="entropy of pure states under product measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _HELP.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument(
            "--seed", type=int, metavar="N", help="override seeds in the config"
        )
        p.add_argument(
            "--out", metavar="PATH", help="write the report here instead of stdout"
        )
        p.add_argument("--format", choices=("csv", "json"),
                       default="csv" if name in ("scatter", "gas") else "json")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
