"""Channels in Kraus form and their dual bipartite states.

A channel on ``H_A`` corresponds to the bipartite state obtained by sending
the A half of a maximally entangled reference through it.  Given that state,
the channel's action on a pure input is recovered by contracting the B factor
against the input's index state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antilinear import AntilinearOp, index_state, maximally_entangled_state, op_from_state
from .errors import DimensionMismatch
from .linalg import (
    DensityOperator,
    PureState,
    allclose,
    as_matrix,
    partial_trace,
    random_unitary,
    rng_from_seed,
)

COMPLETENESS_TOL = 1e-10
MARGINAL_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    dim: int
    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_matrix(k, name="Kraus operator") for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"Kraus operator of shape {k.shape} for dim {self.dim}")
        total = sum(k.conj().T @ k for k in ops)
        if not allclose(total, np.eye(self.dim), COMPLETENESS_TOL):
            raise ValueError("Kraus operators do not satisfy sum K^dag K = I")
        object.__setattr__(self, "kraus_ops", ops)

    def __call__(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops)

    def mix(self, other: "KrausChannel", lam: float) -> "KrausChannel":
        """Probabilistic mixture ``lam * self + (1 - lam) * other``."""
        if other.dim != self.dim:
            raise DimensionMismatch("cannot mix channels of different dimension")
        if not 0.0 <= lam <= 1.0:
            raise ValueError("mixing weight must lie in [0, 1]")
        ops = [np.sqrt(lam) * k for k in self.kraus_ops]
        ops += [np.sqrt(1.0 - lam) * k for k in other.kraus_ops]
        return KrausChannel(self.dim, tuple(ops))


def identity_channel(n: int) -> KrausChannel:
    return KrausChannel(n, (np.eye(n),))


def depolarizing_channel(n: int) -> KrausChannel:
    """Completely depolarizing channel via the N^2 Weyl operators / N."""
    from .teleport import weyl_operators

    return KrausChannel(n, tuple(w / n for w in weyl_operators(n)))


def random_channel(n: int, seed: int, n_kraus: int | None = None) -> KrausChannel:
    """Random channel from the blocks of a Haar isometry ``C^N -> C^(N*k)``."""
    rng = rng_from_seed(seed)
    k = n_kraus if n_kraus is not None else int(rng.integers(1, n * n + 1))
    v = random_unitary(n * k, int(rng.integers(0, 2**63)))[:, :n]
    return KrausChannel(n, tuple(v[i * n:(i + 1) * n] for i in range(k)))


def dual_state_of_channel(ch: KrausChannel, reference: PureState | None = None) -> DensityOperator:
    """``(ch (x) I)(|ref><ref|)``, with ``|Psi+>`` as the default reference."""
    n = ch.dim
    ref = reference if reference is not None else maximally_entangled_state(n)
    if ref.dims != (n, n):
        raise DimensionMismatch(f"reference dims {ref.dims} for channel of dim {n}")
    v = ref.amplitudes
    rho = np.outer(v, v.conj())
    big = [np.kron(k, np.eye(n)) for k in ch.kraus_ops]
    out = sum(b @ rho @ b.conj().T for b in big)
    return DensityOperator.from_matrix(out, (n, n))


def check_marginal_condition(rho_ab: DensityOperator, tol: float = MARGINAL_TOL) -> bool:
    """True iff ``tr_A rho_AB = I/N``."""
    if len(rho_ab.dims) != 2 or rho_ab.dims[0] != rho_ab.dims[1]:
        raise DimensionMismatch(f"marginal condition needs two equal factors, got {rho_ab.dims}")
    n = rho_ab.dims[1]
    return allclose(partial_trace(rho_ab, keep=1).matrix, np.eye(n) / n, tol)


def apply_channel_relative(
    rho_ab: DensityOperator, psi: PureState, ref: AntilinearOp | None = None
) -> DensityOperator:
    """Channel output on ``|psi><psi|`` read off from its dual state.

    The index state ``ref psi`` has norm ``N^-1/2``, so contracting it twice
    against ``rho_ab`` leaves a factor ``N^-2`` which is undone here.
    """
    if len(rho_ab.dims) != 2 or rho_ab.dims[0] != rho_ab.dims[1]:
        raise DimensionMismatch(f"expected two equal factors, got {rho_ab.dims}")
    n = rho_ab.dims[0]
    if psi.dim != n:
        raise DimensionMismatch(f"input of dimension {psi.dim} for channel of dim {n}")
    if ref is None:
        ref = op_from_state(maximally_entangled_state(n))
    if ref.dim_in != n:
        raise DimensionMismatch("reference operator dimension mismatch")
    if not check_marginal_condition(rho_ab, tol=1e-8):
        raise ValueError("rho_AB violates the maximally mixed marginal condition")
    idx = index_state(psi.amplitudes, ref)
    t = rho_ab.matrix.reshape(n, n, n, n)
    out = np.einsum("j,ijkl,l->ik", idx.conj(), t, idx)
    return DensityOperator.from_matrix(n * n * out, (n,))


def apply_kraus(ch: KrausChannel, psi: PureState) -> DensityOperator:
    return DensityOperator.from_matrix(ch(np.outer(psi.amplitudes, psi.amplitudes.conj())), (ch.dim,))
