"""Randomized property battery behind the ``verify`` CLI subcommand.

Each check draws seeded samples, records its worst violation, and passes
when that stays inside the tolerance. The checks cover: entropy growth
under scheme refinement, the three-step chain bounding any product
measurement from below by the closed form, nonnegativity of the convexity
gap, invariance of the closed form on degenerate-block orbits, and the
sampled oracle bound with attainment by adapted pairs.
"""

from __future__ import annotations

import numpy as np

from .linalg import StateVector, haar_unitary, random_state, schmidt
from .observables import PointObservable, ProductObservable, measurement_entropy
from .schemes import Partition, Scheme, coarsen, entropy, shannon_entropy
from .sq import adapted_pair, convexity_gap, degenerate_orbit, sq_bipartite

DEFAULT_TOLERANCES = {
    "scheme_monotonicity": 1e-12,
    "proof_chain_inequalities": 1e-10,
    "proof_chain_equality": 1e-12,
    "convexity_gap": 1e-10,
    "degenerate_orbit_entropy": 1e-12,
    "degenerate_orbit_reconstruction": 1e-10,
    "oracle_lower_bound": 1e-10,
    "adapted_attainment": 1e-12,
}


def random_scheme(rng, max_events: int = 8) -> Scheme:
    n = int(rng.integers(2, max_events + 1))
    return Scheme(tuple(range(n)), rng.dirichlet(np.ones(n)))


def random_partition(rng, size: int) -> Partition:
    perm = [int(i) for i in rng.permutation(size)]
    n_groups = int(rng.integers(1, size + 1))
    cuts = sorted(
        int(c) for c in rng.choice(np.arange(1, size), size=n_groups - 1, replace=False)
    )
    bounds = [0, *cuts, size]
    return Partition(
        tuple(tuple(perm[a:b]) for a, b in zip(bounds[:-1], bounds[1:]))
    )


def bell_state() -> StateVector:
    amp = 1.0 / np.sqrt(2.0)
    return StateVector((2, 2), [amp, 0.0, 0.0, amp])


def check_scheme_monotonicity(samples: int, seed: int, tolerance: float) -> dict:
    """Coarsening never raises entropy: worst = max S(coarse) - S(fine)."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(samples):
        fine = random_scheme(rng)
        part = random_partition(rng, len(fine))
        worst = max(worst, entropy(coarsen(fine, part)) - entropy(fine))
    return _record("scheme_monotonicity", samples, worst, tolerance)


def check_proof_chain(
    samples: int, seed: int, dims, tol_inequality: float, tol_equality: float
) -> list[dict]:
    """Chain from any simple product measurement down to the closed form.

    Per sample: S(C x D) >= S(C x 1) >= S(A x 1) = S(A x B), where (A, B)
    is an adapted pair for the sampled state and C, D are random simple
    observables. The two inequalities share one worst value; the equality
    is recorded separately.
    """
    rng = np.random.default_rng(seed)
    d1, d2 = int(dims[0]), int(dims[1])
    one = PointObservable.identity(d2)
    worst_ineq = -np.inf
    worst_eq = 0.0
    for _ in range(samples):
        state = random_state((d1, d2), rng)
        c = PointObservable.random_simple(d1, rng)
        dd = PointObservable.random_simple(d2, rng)
        ab = adapted_pair(schmidt(state), rng)
        a = ab.factors[0]
        s_cd = measurement_entropy(state, ProductObservable((c, dd)))
        s_c1 = measurement_entropy(state, ProductObservable((c, one)))
        s_a1 = measurement_entropy(state, ProductObservable((a, one)))
        s_ab = measurement_entropy(state, ab)
        worst_ineq = max(worst_ineq, s_c1 - s_cd, s_a1 - s_c1)
        worst_eq = max(worst_eq, abs(s_a1 - s_ab))
    return [
        _record("proof_chain_inequalities", samples, worst_ineq, tol_inequality),
        _record("proof_chain_equality", samples, worst_eq, tol_equality),
    ]


def check_convexity_gap(samples: int, seed: int, dims, tolerance: float) -> dict:
    """Gap nonnegativity: worst = max(-gap) over sampled (state, c) pairs."""
    rng = np.random.default_rng(seed)
    d1, d2 = int(dims[0]), int(dims[1])
    worst = -np.inf
    for _ in range(samples):
        state = random_state((d1, d2), rng)
        c = PointObservable.random_simple(d1, rng)
        worst = max(worst, -convexity_gap(state, c))
    return _record("convexity_gap", samples, worst, tolerance)


def check_degenerate_orbit(
    samples: int, seed: int, tol_entropy: float, tol_reconstruction: float
) -> list[dict]:
    """Every orbit point of the Bell form reconstructs the state and still
    attains ln 2 through its adapted pair."""
    rng = np.random.default_rng(seed)
    bell = bell_state()
    form = schmidt(bell)
    target = shannon_entropy(form.weights)
    worst_ent = 0.0
    worst_rec = 0.0
    for _ in range(samples):
        u = haar_unitary(2, rng)
        rotated = degenerate_orbit(form, u)
        err = np.abs(rotated.reconstruct().amplitudes - bell.amplitudes).max()
        s = measurement_entropy(bell, adapted_pair(rotated, rng))
        worst_rec = max(worst_rec, float(err))
        worst_ent = max(worst_ent, abs(s - target))
    return [
        _record("degenerate_orbit_entropy", samples, worst_ent, tol_entropy),
        _record("degenerate_orbit_reconstruction", samples, worst_rec, tol_reconstruction),
    ]


def check_oracle_bound(
    states: int, observables_per_state: int, seed: int, dims,
    tol_bound: float, tol_attainment: float,
) -> list[dict]:
    """Sampled product measurements never beat the closed form, and the
    adapted pair attains it: worst_bound = max(closed - sampled)."""
    rng = np.random.default_rng(seed)
    d1, d2 = int(dims[0]), int(dims[1])
    worst_bound = -np.inf
    worst_att = 0.0
    for _ in range(states):
        state = random_state((d1, d2), rng)
        closed = sq_bipartite(state).value
        for _ in range(observables_per_state):
            obs = ProductObservable.random_simple((d1, d2), rng)
            worst_bound = max(worst_bound, closed - measurement_entropy(state, obs))
        attained = measurement_entropy(state, adapted_pair(schmidt(state), rng))
        worst_att = max(worst_att, abs(attained - closed))
    total = states * observables_per_state
    return [
        _record("oracle_lower_bound", total, worst_bound, tol_bound),
        _record("adapted_attainment", states, worst_att, tol_attainment),
    ]


def run_battery(
    samples: int = 200, seed: int = 1, dims=(3, 3), tolerances=None
) -> dict:
    """Run all checks; the report passes only if every check does."""
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        for name, value in tolerances.items():
            if not float(value) >= 0.0:
                raise ValueError(f"tolerance {name} must be nonnegative")
            tol[name] = float(value)
    samples = int(samples)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    checks = [
        check_scheme_monotonicity(samples, seed, tol["scheme_monotonicity"]),
        *check_proof_chain(
            samples, seed + 1, dims,
            tol["proof_chain_inequalities"], tol["proof_chain_equality"],
        ),
        check_convexity_gap(samples, seed + 2, dims, tol["convexity_gap"]),
        *check_degenerate_orbit(
            samples, seed + 3,
            tol["degenerate_orbit_entropy"], tol["degenerate_orbit_reconstruction"],
        ),
        *check_oracle_bound(
            max(1, samples // 20), min(20, samples), seed + 4, dims,
            tol["oracle_lower_bound"], tol["adapted_attainment"],
        ),
    ]
    return {
        "seed": int(seed),
        "samples": samples,
        "dims": [int(dims[0]), int(dims[1])],
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def _record(name: str, samples: int, worst: float, tolerance: float) -> dict:
    return {
        "name": name,
        "samples": int(samples),
        "worst": float(worst),
        "tolerance": float(tolerance),
        "passed": bool(worst <= tolerance),
    }
