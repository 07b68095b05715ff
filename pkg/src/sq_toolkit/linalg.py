"""Dense linear algebra for pure states on small tensor-product spaces.

States are flat complex amplitude vectors tagged with an explicit tuple of
factor dimensions; the flat index runs row-major over the factor indices,
matching ``np.kron`` and ``reshape``. Arrays held by the value types here are
copied on construction and frozen, so instances can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import DimensionMismatch, NotBipartite

NORM_ATOL = 1e-12
UNITARY_ATOL = 1e-10
RECONSTRUCTION_ATOL = 1e-10
WEIGHT_CUTOFF = 1e-12
DEGENERACY_ATOL = 1e-9


def as_rng(seed):
    """Coerce an integer seed, or pass through an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state of one or more finite-dimensional particles.

    Parameters
    ----------
    factor_dims:
        Dimension of each tensor factor, all >= 1.
    amplitudes:
        Complex vector of length ``prod(factor_dims)`` with unit norm
        (within 1e-12), flat row-major over the factor indices.
    """

    factor_dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or min(dims) < 1:
            raise ValueError("factor dimensions must be positive integers")
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if amps.size != prod(dims):
            raise DimensionMismatch(
                f"got {amps.size} amplitudes for factor dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {norm} is not 1 within {NORM_ATOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "factor_dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_factors(self) -> int:
        return len(self.factor_dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per factor (read-only)."""
        return self.amplitudes.reshape(self.factor_dims)


def basis_state(factor_dims, indices) -> StateVector:
    """Product basis vector |j1 ... jn> for the given per-factor indices."""
    dims = tuple(int(d) for d in factor_dims)
    idx = tuple(int(j) for j in indices)
    if len(idx) != len(dims):
        raise DimensionMismatch("one index per factor required")
    amps = np.zeros(prod(dims), dtype=np.complex128)
    amps[int(np.ravel_multi_index(idx, dims))] = 1.0
    return StateVector(dims, amps)


def random_state(factor_dims, seed) -> StateVector:
    """Haar-random pure state on the joint space."""
    dims = tuple(int(d) for d in factor_dims)
    rng = as_rng(seed)
    z = rng.standard_normal(prod(dims)) + 1j * rng.standard_normal(prod(dims))
    return StateVector(dims, z / np.linalg.norm(z))


def random_product_state(factor_dims, seed) -> StateVector:
    """Tensor product of independent Haar-random single-particle states."""
    rng = as_rng(seed)
    state = None
    for d in factor_dims:
        z = rng.standard_normal(int(d)) + 1j * rng.standard_normal(int(d))
        factor = StateVector((int(d),), z / np.linalg.norm(z))
        state = factor if state is None else tensor(state, factor)
    if state is None:
        raise ValueError("factor_dims must be nonempty")
    return state


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Joint state of two subsystems, factors of ``a`` first."""
    return StateVector(
        a.factor_dims + b.factor_dims, np.kron(a.amplitudes, b.amplitudes)
    )


def haar_unitary(dim, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The R diagonal is rephased to unit modulus, which removes the QR gauge
    and makes the distribution exactly Haar. Same (dim, seed) gives the
    same matrix.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = as_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def is_unitary(u, atol=UNITARY_ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return bool(np.abs(u.conj().T @ u - eye).max() <= atol)


def apply_unitary(state: StateVector, u) -> StateVector:
    """Evolve the joint state by a unitary on the full space."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (state.dim, state.dim):
        raise DimensionMismatch(
            f"operator shape {u.shape} does not act on dimension {state.dim}"
        )
    return StateVector(state.factor_dims, u @ state.amplitudes)


def complete_basis(columns, seed) -> np.ndarray:
    """Extend orthonormal columns to a full orthonormal basis.

    The completion is random but deterministic in the seed: fresh Gaussian
    columns are projected off the given ones (twice, which is enough in
    double precision) and orthonormalized by QR.
    """
    cols = np.asarray(columns, dtype=np.complex128)
    dim, r = cols.shape
    if r > dim:
        raise ValueError("more columns than the space has dimensions")
    if r == dim:
        return cols.copy()
    rng = as_rng(seed)
    extra = rng.standard_normal((dim, dim - r)) + 1j * rng.standard_normal(
        (dim, dim - r)
    )
    for _ in range(2):
        extra -= cols @ (cols.conj().T @ extra)
    q, _ = np.linalg.qr(extra)
    return np.hstack([cols, q])


@dataclass(frozen=True)
class SchmidtForm:
    """Normal form of a bipartite pure state.

    The state it represents is ``sum_l sqrt(weights[l]) left[:, l] (x)
    right[:, l]`` with weights sorted in descending order and both column
    families orthonormal. Only weights above ``WEIGHT_CUTOFF`` are kept.
    """

    factor_dims: tuple[int, int]
    weights: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if len(dims) != 2 or min(dims) < 1:
            raise ValueError("factor_dims must be two positive integers")
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        left = np.array(self.left_basis, dtype=np.complex128, copy=True)
        right = np.array(self.right_basis, dtype=np.complex128, copy=True)
        r = w.size
        if r < 1:
            raise ValueError("at least one weight required")
        if left.shape != (dims[0], r) or right.shape != (dims[1], r):
            raise DimensionMismatch("basis shapes do not match weights and dims")
        if w.min() <= 0.0:
            raise ValueError("weights must be positive")
        if np.any(np.diff(w) > 1e-12):
            raise ValueError("weights must be sorted in descending order")
        if abs(w.sum() - 1.0) > NORM_ATOL:
            raise ValueError(f"weights sum to {w.sum()}, not 1 within {NORM_ATOL}")
        for b in (left, right):
            gram = b.conj().T @ b
            if np.abs(gram - np.eye(r)).max() > UNITARY_ATOL:
                raise ValueError("basis columns are not orthonormal")
        for name, arr in (("weights", w), ("left_basis", left), ("right_basis", right)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "factor_dims", dims)

    @property
    def rank(self) -> int:
        return self.weights.size

    def reconstruct(self) -> StateVector:
        """Reassemble the state this form decomposes."""
        m = (self.left_basis * np.sqrt(self.weights)) @ self.right_basis.T
        return StateVector(self.factor_dims, m.reshape(-1))


def schmidt(state: StateVector) -> SchmidtForm:
    """Normal form of a bipartite state via SVD of its coefficient matrix.

    Raises NotBipartite unless the state has exactly two factors. Weights
    below ``WEIGHT_CUTOFF`` are dropped; reconstruction of the result agrees
    with the input to ``RECONSTRUCTION_ATOL``.
    """
    if state.num_factors != 2:
        raise NotBipartite(f"state has {state.num_factors} factors, need 2")
    d1, d2 = state.factor_dims
    m = state.amplitudes.reshape(d1, d2)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    w = s.astype(float) ** 2
    keep = w > WEIGHT_CUTOFF
    if not keep.any():  # normalized input always has a dominant weight
        keep[0] = True
    return SchmidtForm(
        factor_dims=(d1, d2),
        weights=w[keep],
        left_basis=u[:, keep],
        # SVD rows of vh are the right vectors; transpose without conjugating
        right_basis=vh[keep].T,
    )
