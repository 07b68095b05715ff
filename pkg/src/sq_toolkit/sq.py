"""Minimal product-measurement entropy of a pure state.

``sq`` is the smallest Shannon entropy any simple product observable can
induce on a given pure state. For bipartite states it has a closed form:
the entropy of the Schmidt weights, attained by any product observable
whose factor eigenbases extend the two Schmidt bases. For more factors,
or as an independent cross-check, a randomized coordinate descent over
per-factor unitaries estimates it from above.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import log, prod

import numpy as np

from .errors import DimensionMismatch, NotBipartite, NotDegenerate, RankExceedsDim
from .linalg import (
    UNITARY_ATOL,
    DEGENERACY_ATOL,
    SchmidtForm,
    StateVector,
    as_rng,
    complete_basis,
    haar_unitary,
    is_unitary,
    schmidt,
)
from .observables import PointObservable, ProductObservable, measurement_entropy
from .schemes import shannon_entropy

METHOD_CLOSED_FORM = "closed_form"
METHOD_SEARCH = "search"

# Search schedule. Any schedule is fair game as long as the estimator keeps
# matching the bipartite closed form; these values do, with margin, at the
# tolerances used in the tests. Per factor and sweep a few rotations are
# tried: first along the in-place entropy gradient (with momentum, and a
# short ladder of angles so narrow valleys are walked in long strides),
# then random ones that can escape the flats where the gradient is useless.
# The step shrinks when a whole sweep accepts nothing (too coarse for the
# current basin) and recovers when most trials accept (too fine, wasting
# sweeps), so it tracks the distance to the optimum.
STEP_INIT = 0.3
STEP_DECAY = 0.5
STEP_FLOOR = 1e-8
GRADIENT_TRIALS = 2
RANDOM_TRIALS = 2
MOMENTUM = 0.8
ANGLE_LADDER = (4.0, 1.0, 0.25)

VALUE_ATOL = 1e-12


@dataclass(frozen=True)
class SqResult:
    """Outcome of an sq computation.

    value is in nats; argmin is the product observable realizing it;
    weights are the outcome probabilities at the argmin, sorted descending.
    method is "closed_form" or "search"; restarts_used and converged
    describe the search (0 restarts and converged=True for the closed form).
    """

    value: float
    argmin: ProductObservable
    method: str
    restarts_used: int
    converged: bool
    weights: np.ndarray

    def __post_init__(self):
        if self.method not in (METHOD_CLOSED_FORM, METHOD_SEARCH):
            raise ValueError(f"unknown method {self.method!r}")
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "value", float(self.value))
        total = prod(self.argmin.factor_dims)
        if not -VALUE_ATOL <= self.value <= log(total) + VALUE_ATOL:
            raise ValueError(
                f"value {self.value} outside [0, ln {total}] within {VALUE_ATOL}"
            )

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "weights": [float(w) for w in self.weights],
            "restarts_used": int(self.restarts_used),
            "converged": bool(self.converged),
        }


def adapted_pair(form: SchmidtForm, seed=0) -> ProductObservable:
    """Simple product observable attaining the closed form on ``form``.

    The factor eigenbases extend the left and right normal-form bases to
    full orthonormal bases (random completion, deterministic in the seed);
    eigenvalues are consecutive integers so both factors are simple.
    """
    d1, d2 = form.factor_dims
    if form.rank > min(d1, d2):
        raise RankExceedsDim(f"rank {form.rank} exceeds min dim {min(d1, d2)}")
    rng = as_rng(seed)
    left = complete_basis(form.left_basis, rng)
    right = complete_basis(form.right_basis, rng)
    return ProductObservable(
        (
            PointObservable(np.arange(1.0, d1 + 1.0), left),
            PointObservable(np.arange(1.0, d2 + 1.0), right),
        )
    )


def sq_bipartite(state: StateVector) -> SqResult:
    """Closed-form sq of a bipartite state: entropy of the Schmidt weights."""
    form = schmidt(state)
    return SqResult(
        value=shannon_entropy(form.weights),
        argmin=adapted_pair(form),
        method=METHOD_CLOSED_FORM,
        restarts_used=0,
        converged=True,
        weights=form.weights,
    )


def _entropy_of(coeff: np.ndarray) -> float:
    p = (coeff.real**2 + coeff.imag**2).reshape(-1)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum()) + 0.0  # avoid -0.0 in reports


def _rotate_axis(u_dag: np.ndarray, coeff: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(u_dag, coeff, axes=(1, axis)), 0, axis)


def _trial_rotations(rng, dim: int, step: float, count: int) -> np.ndarray:
    """Batch of unitaries exp(-i * step * H) with ||H eigenvalues|| <= 1."""
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal(
        (count, dim, dim)
    )
    h = (g + g.conj().swapaxes(-1, -2)) / 2.0
    evals, vecs = np.linalg.eigh(h)
    scale = np.abs(evals).max(axis=1, keepdims=True)
    scale[scale == 0.0] = 1.0
    phases = np.exp(-1j * step * evals / scale)
    return np.einsum("tij,tj,tkj->tik", vecs, phases, vecs.conj())


def _entropy_gradient(coeff: np.ndarray, axis: int) -> np.ndarray:
    """Hermitian Gamma such that rotating the axis basis by exp(i eps H)
    changes the entropy at rate -2 tr(H Gamma); +Gamma is steepest descent."""
    t = np.moveaxis(coeff, axis, 0)
    t = t.reshape(t.shape[0], -1)
    p = t.real**2 + t.imag**2
    logs = np.where(p > 0.0, np.log(np.where(p > 0.0, p, 1.0)), 0.0)
    m = t @ ((1.0 + logs) * t.conj()).T
    return (m - m.conj().T) / 2j


def _ladder_rotations(direction: np.ndarray, step: float):
    """Rotations exp(i angle D) for a few angles around ``step``, where D is
    ``direction`` scaled to unit spectral radius. Applied as basis updates
    these descend when D points along the entropy gradient. Empty on a flat.
    """
    evals, vecs = np.linalg.eigh(direction)
    scale = np.abs(evals).max()
    if not scale > 0.0:
        return []
    return [
        (vecs * np.exp(1j * (mult * step) * evals / scale)) @ vecs.conj().T
        for mult in ANGLE_LADDER
    ]


def _descend(state_tensor, dims, rng, max_iters, tol):
    """One restart: greedy coordinate descent over per-factor bases.

    Starts from Haar-random factor bases. Per sweep and factor, gradient
    proposals (momentum-mixed, several angles, accept the first improving
    stride) come before random perturbations tried in both senses; every
    acceptance requires strict decrease. The restart converges once the
    step sits at its floor and a sweep improves by less than tol.
    """
    bases = [haar_unitary(d, rng) for d in dims]
    coeff = state_tensor
    for axis, u in enumerate(bases):
        coeff = _rotate_axis(u.conj().T, coeff, axis)
    value = _entropy_of(coeff)
    step = STEP_INIT
    momentum = [np.zeros((d, d), dtype=np.complex128) for d in dims]
    converged = False
    for _ in range(max_iters):
        sweep_start = value
        accepts = 0
        trials = 0
        for axis, d in enumerate(dims):
            if d == 1:
                continue
            random_rots = _trial_rotations(rng, d, step, RANDOM_TRIALS)
            gradient_open = True
            for attempt in range(GRADIENT_TRIALS + RANDOM_TRIALS):
                if attempt < GRADIENT_TRIALS:
                    # a rejected gradient attempt would just repeat itself
                    if not gradient_open:
                        continue
                    gamma = _entropy_gradient(coeff, axis)
                    scale = np.linalg.norm(gamma, 2)
                    if not scale > 0.0:
                        continue
                    momentum[axis] = MOMENTUM * momentum[axis] + gamma / scale
                    candidates = _ladder_rotations(momentum[axis], step)
                else:
                    rot = random_rots[attempt - GRADIENT_TRIALS]
                    candidates = [rot, rot.conj().T]
                if not candidates:
                    continue
                trials += 1
                best = None
                for cand in candidates:
                    cand_coeff = _rotate_axis(cand.conj().T, coeff, axis)
                    cand_value = _entropy_of(cand_coeff)
                    if cand_value < value and (best is None or cand_value < best[0]):
                        best = (cand_value, cand_coeff, cand)
                if best is not None:
                    value, coeff, cand = best
                    bases[axis] = bases[axis] @ cand
                    accepts += 1
                elif attempt < GRADIENT_TRIALS:
                    momentum[axis][:] = 0.0
                    gradient_open = False
        if step <= STEP_FLOOR and sweep_start - value < tol:
            converged = True
            break
        if accepts == 0:
            step = max(step * STEP_DECAY, STEP_FLOOR)
            for m in momentum:
                m[:] = 0.0
        elif 2 * accepts >= trials:
            step = min(step / STEP_DECAY, STEP_INIT)
    return value, bases, converged


def _thread_budget() -> int:
    """Worker count from SQ_TOOLKIT_THREADS; 0 or unset means auto.

    Auto resolves to serial: restarts are GIL-bound small-matrix work, so
    extra threads only add overhead. An explicit positive value is honored.
    """
    raw = os.environ.get("SQ_TOOLKIT_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return n if n > 0 else 1


def sq_search(
    state: StateVector, restarts: int = 10, max_iters: int = 800,
    tol: float = 1e-10, seed: int = 0,
) -> SqResult:
    """Upper-bound estimate of sq by randomized coordinate descent.

    Works for any factor count. Every restart draws its own stream from
    (seed, restart index) and all restarts always run, so the result does
    not depend on scheduling; ties go to the earliest restart. On bipartite
    states the estimate matches ``sq_bipartite`` to the test tolerances.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    dims = state.factor_dims
    state_tensor = state.as_tensor()

    def run(idx: int):
        rng = np.random.default_rng([seed, idx])
        return _descend(state_tensor, dims, rng, max_iters, tol)

    budget = min(_thread_budget(), restarts)
    if budget > 1:
        with ThreadPoolExecutor(max_workers=budget) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(i) for i in range(restarts)]

    value, bases, converged = results[0]
    for cand in results[1:]:
        if cand[0] < value:
            value, bases, converged = cand
    coeff = state_tensor
    for axis, u in enumerate(bases):
        coeff = _rotate_axis(u.conj().T, coeff, axis)
    weights = np.sort((coeff.real**2 + coeff.imag**2).reshape(-1))[::-1]
    factors = tuple(
        PointObservable(np.arange(1.0, d + 1.0), u) for d, u in zip(dims, bases)
    )
    return SqResult(
        value=value,
        argmin=ProductObservable(factors),
        method=METHOD_SEARCH,
        restarts_used=restarts,
        converged=converged,
        weights=weights,
    )


def degenerate_orbit(form: SchmidtForm, u, start: int = 0) -> SchmidtForm:
    """Alternative normal form from rotating a degenerate weight block.

    ``u`` is a k x k unitary acting on weights start..start+k-1, which must
    be equal within ``DEGENERACY_ATOL``; the left block is rotated by u and
    the right block by its complex conjugate, so the represented state is
    unchanged.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatch("u must be square")
    k = u.shape[0]
    if not 0 <= start <= form.rank - k:
        raise DimensionMismatch(
            f"block [{start}, {start + k}) outside rank {form.rank}"
        )
    if not is_unitary(u, UNITARY_ATOL):
        raise ValueError("u is not unitary")
    block = slice(start, start + k)
    w = form.weights[block]
    if w.max() - w.min() > DEGENERACY_ATOL:
        raise NotDegenerate(
            f"weights {w} differ by more than {DEGENERACY_ATOL}"
        )
    left = np.array(form.left_basis, copy=True)
    right = np.array(form.right_basis, copy=True)
    left[:, block] = left[:, block] @ u
    right[:, block] = right[:, block] @ u.conj()
    return SchmidtForm(form.factor_dims, form.weights, left, right)


def convexity_gap(state: StateVector, c: PointObservable) -> float:
    """Entropy excess of measuring (c x identity) over the closed form.

    ``c`` must be simple on the first factor. The gap is nonnegative up to
    roundoff for every such c; it vanishes when c extends the left normal
    basis.
    """
    if state.num_factors != 2:
        raise NotBipartite(f"state has {state.num_factors} factors, need 2")
    d1, d2 = state.factor_dims
    if c.dim != d1:
        raise DimensionMismatch(f"observable dim {c.dim}, first factor {d1}")
    if not c.is_simple:
        raise ValueError("c must be simple")
    obs = ProductObservable((c, PointObservable.identity(d2)))
    return measurement_entropy(state, obs) - shannon_entropy(schmidt(state).weights)
