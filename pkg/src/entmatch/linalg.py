"""Dense complex linear algebra shared by the rest of the package.

Matrices are plain 2-D ``complex128`` numpy arrays.  States carry a list of
tensor-factor dimensions so that bipartite bookkeeping is explicit.

Amplitude-matrix convention: a bipartite state with dims ``(N, M)`` reshapes
row-major to the ``N x M`` matrix ``C`` with ``C[i, j]`` the amplitude of
``|i> (x) |j>``.

Random sampling uses ``numpy.random.default_rng`` (PCG64) seeded with a
64-bit integer, so every draw is reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch

NORM_TOL = 1e-12
EQ_TOL = 1e-10


def as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_vector(v, *, name: str = "vector") -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128).reshape(-1)
    if x.size == 0 or not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be a non-empty finite vector")
    return x


def max_abs_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def allclose(a, b, tol: float = EQ_TOL) -> bool:
    """Max-abs-entry equality, the package default comparison."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and max_abs_diff(a, b) <= tol


def is_unitary(u, tol: float = EQ_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return allclose(u.conj().T @ u, np.eye(u.shape[0]), tol)


@dataclass(frozen=True)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {self.dims}")
        amps = as_vector(self.amplitudes, name="amplitudes").copy()
        if amps.size != prod(dims):
            raise DimensionMismatch(f"{amps.size} amplitudes for dims {dims}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, v, dims: Sequence[int] | None = None) -> "PureState":
        """Build a state from an arbitrary non-zero vector, normalizing it."""
        v = as_vector(v)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(tuple(dims) if dims is not None else (v.size,), v / n)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def amplitude_matrix(self) -> np.ndarray:
        if len(self.dims) != 2:
            raise DimensionMismatch(f"expected two factors, got dims {self.dims}")
        return self.amplitudes.reshape(self.dims)

    def density(self) -> "DensityOperator":
        v = self.amplitudes
        return DensityOperator(self.dims, np.outer(v, v.conj()))


@dataclass(frozen=True)
class DensityOperator:
    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {self.dims}")
        m = as_matrix(self.matrix, name="density matrix")
        n = prod(dims)
        if m.shape != (n, n):
            raise DimensionMismatch(f"matrix shape {m.shape} does not fit dims {dims}")
        if max_abs_diff(m, m.conj().T) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(m).min() < -NORM_TOL:
            raise ValueError("density matrix has negative eigenvalues")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(
        cls, m, dims: Sequence[int] | None = None, normalize: bool = False
    ) -> "DensityOperator":
        """Hermitize (and optionally trace-normalize) ``m`` before validation."""
        m = as_matrix(m)
        m = 0.5 * (m + m.conj().T)
        if normalize:
            m = m / np.trace(m).real
        return cls(tuple(dims) if dims is not None else (m.shape[0],), m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product: entry ``(i*rb + k, j*cb + l)`` is ``a[i,j] * b[k,l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho: DensityOperator, keep: int) -> DensityOperator:
    """Reduced state of a bipartite density operator.

    ``keep`` is the factor index to retain: 0 traces out the second factor,
    1 traces out the first.
    """
    if len(rho.dims) != 2:
        raise DimensionMismatch(f"partial_trace needs exactly two factors, got {rho.dims}")
    if keep not in (0, 1):
        raise ValueError("keep must be 0 (first) or 1 (second)")
    na, nb = rho.dims
    t = rho.matrix.reshape(na, nb, na, nb)
    if keep == 0:
        red = np.einsum("ijkj->ik", t)
    else:
        red = np.einsum("ijil->jl", t)
    return DensityOperator.from_matrix(red, (red.shape[0],))


def schmidt_decompose(phi: PureState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(coeffs, basis_a, basis_b)`` with
    ``phi = sum_i coeffs[i] basis_a[:, i] (x) basis_b[:, i]``, coeffs descending."""
    c = phi.amplitude_matrix()
    if c.shape[0] != c.shape[1]:
        raise DimensionMismatch(f"Schmidt decomposition needs equal factors, got {phi.dims}")
    u, s, vh = np.linalg.svd(c)
    return s, u, vh.T


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 64-bit child seed, e.g. one per trial of a batch."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_vector(dim: int, seed: int) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    v = _ginibre(rng_from_seed(seed), dim)
    return v / np.linalg.norm(v)


def random_pure_state(dim: int, seed: int, dims: Sequence[int] | None = None) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    return PureState(tuple(dims) if dims is not None else (dim,), random_vector(dim, seed))


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase-fixed R diagonal."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = _ginibre(rng_from_seed(seed), (dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2, clipped into [0, 1]."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"fidelity between dimensions {a.dim} and {b.dim}")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def density_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; equals |<a|b>|^2 on pure states."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"fidelity between dimensions {rho.dim} and {sigma.dim}")
    s = _psd_sqrt(rho.matrix)
    inner = s @ sigma.matrix @ s
    w = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0, None)
    return float(min(1.0, np.sum(np.sqrt(w)) ** 2))
