"""Antilinear operators and their correspondence with bipartite pure states.

An antilinear map ``L: H_in -> H_out`` is stored as the matrix ``M`` of shape
``(dim_out, dim_in)`` whose column ``i`` is ``L|i>``.  The action on a vector
is ``L psi = M @ conj(psi)``.

With this convention:

* the adjoint (``<f|L e> = conj(<L^dag f|e>)``) has matrix ``M.T``;
* composing two antilinear maps gives the *linear* matrix ``M1 @ conj(M2)``;
* a state with amplitude matrix ``C`` (``C[i, j]`` for ``|i>_A|j>_B``) maps to
  ``M = C.T`` via ``|Phi> = sum_i |i>_A (x) L|i>_A``;
* a measurement state ``|s_q> = sum_i (L_q|i>_B) (x) |i>_B`` maps to ``M = C``
  (index on the *second* factor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import PureState, allclose, as_matrix, as_vector

OP_NORM_TOL = 1e-9


@dataclass(frozen=True)
class AntilinearOp:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, name="antilinear operator matrix").copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def dim_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def hs_norm_sq(self) -> float:
        """tr(L^dag L), the squared Hilbert-Schmidt norm."""
        return float(np.sum(np.abs(self.matrix) ** 2))

    def apply(self, psi) -> np.ndarray:
        return apply(self, psi)

    def scaled(self, a: complex) -> "AntilinearOp":
        """The operator psi -> a * L psi."""
        return AntilinearOp(a * self.matrix)

    def then(self, u) -> "AntilinearOp":
        """Follow this map by the linear matrix ``u`` (still antilinear)."""
        u = as_matrix(u)
        if u.shape[1] != self.dim_out:
            raise DimensionMismatch(f"cannot follow {self.matrix.shape} operator by {u.shape} matrix")
        return AntilinearOp(u @ self.matrix)

    def inverse(self) -> "AntilinearOp":
        """Inverse map: ``L^-1 phi = conj(M^-1) conj(phi)``."""
        if not self.is_square:
            raise DimensionMismatch("only square operators can be inverted")
        return AntilinearOp(np.linalg.inv(self.matrix).conj())


def _require_bipartite(phi: PureState):
    if len(phi.dims) != 2:
        raise DimensionMismatch(f"expected a bipartite state, got dims {phi.dims}")


def op_from_state(phi: PureState) -> AntilinearOp:
    """Operator L with ``|Phi> = sum_i |i>_A (x) L|i>_A`` (maps H_A -> H_B)."""
    _require_bipartite(phi)
    return AntilinearOp(phi.amplitude_matrix().T)


def state_from_op(op: AntilinearOp) -> PureState:
    """Inverse of :func:`op_from_state`; ``op`` must have unit HS norm."""
    n2 = op.hs_norm_sq()
    if abs(n2 - 1.0) > OP_NORM_TOL:
        raise ValueError(f"operator is not normalized: tr(L^dag L) = {n2!r}")
    c = op.matrix.T / np.sqrt(n2)
    return PureState(c.shape, c.reshape(-1))


def op_from_measurement_state(sigma_q: PureState) -> AntilinearOp:
    """Operator L_q with ``|s_q> = sum_i (L_q|i>_B) (x) |i>_B`` (maps H_B -> H_A)."""
    _require_bipartite(sigma_q)
    return AntilinearOp(sigma_q.amplitude_matrix())


def measurement_state_from_op(op: AntilinearOp) -> PureState:
    """Inverse of :func:`op_from_measurement_state`."""
    n2 = op.hs_norm_sq()
    if abs(n2 - 1.0) > OP_NORM_TOL:
        raise ValueError(f"operator is not normalized: tr(L^dag L) = {n2!r}")
    c = op.matrix / np.sqrt(n2)
    return PureState(c.shape, c.reshape(-1))


def adjoint(op: AntilinearOp) -> AntilinearOp:
    # <f|M conj(e)> = conj(<M.T conj(f)|e>), so the adjoint matrix is the plain transpose.
    return AntilinearOp(op.matrix.T)


def compose_aa(l1: AntilinearOp, l2: AntilinearOp) -> np.ndarray:
    """Linear matrix of ``l1 o l2``."""
    if l2.dim_out != l1.dim_in:
        raise DimensionMismatch(f"cannot compose {l1.matrix.shape} after {l2.matrix.shape}")
    return l1.matrix @ l2.matrix.conj()


def hs_inner(op: AntilinearOp, other: AntilinearOp) -> complex:
    """``(L, L') = tr(L'^dag L)``, conjugate linear in the first argument."""
    if op.matrix.shape != other.matrix.shape:
        raise DimensionMismatch(f"shapes {op.matrix.shape} and {other.matrix.shape} differ")
    return complex(np.trace(compose_aa(adjoint(other), op)))


def apply(op: AntilinearOp, psi) -> np.ndarray:
    psi = as_vector(psi, name="psi")
    if psi.size != op.dim_in:
        raise DimensionMismatch(f"vector of length {psi.size} for operator with dim_in {op.dim_in}")
    return op.matrix @ psi.conj()


def is_maximally_entangled(op: AntilinearOp, tol: float = 1e-10) -> bool:
    """True iff ``L L^dag = I/N`` and ``L^dag L = I/N`` (sqrt(N) L antiunitary)."""
    if not op.is_square:
        raise DimensionMismatch("maximal entanglement is defined for square operators only")
    n = op.dim_in
    target = np.eye(n) / n
    return allclose(compose_aa(op, adjoint(op)), target, tol) and allclose(
        compose_aa(adjoint(op), op), target, tol
    )


def index_state(psi, ref: AntilinearOp) -> np.ndarray:
    """Unnormalized index state ``ref psi`` of ``psi`` in the relative-state
    representation built on the maximally entangled ``ref``."""
    if not is_maximally_entangled(ref):
        raise ValueError("reference operator is not maximally entangled")
    return apply(ref, psi)


def partial_inner(index, ref_state: PureState) -> np.ndarray:
    """``_B<index|ref>_AB``: contraction of the second factor against ``index``."""
    c = ref_state.amplitude_matrix()
    index = as_vector(index, name="index")
    if index.size != c.shape[1]:
        raise DimensionMismatch(f"index of length {index.size} for second factor of size {c.shape[1]}")
    return c @ index.conj()


def reconstruct_from_index(index, ref_state: PureState) -> np.ndarray:
    """Recover the A-vector from its index state, rescaled by N so that it
    inverts :func:`index_state`."""
    ref = op_from_state(ref_state)
    if not is_maximally_entangled(ref):
        raise ValueError("reference state is not maximally entangled")
    index = np.asarray(index, dtype=np.complex128).reshape(-1)
    if index.size != ref.dim_out:
        raise DimensionMismatch(f"index of length {index.size} for reference of dimension {ref.dim_out}")
    if not np.any(index):
        return np.zeros(ref.dim_in, dtype=np.complex128)
    return ref.dim_in * partial_inner(index, ref_state)


def maximally_entangled_state(n: int) -> PureState:
    """``|Psi+> = N^-1/2 sum_i |i>|i>``."""
    return PureState((n, n), (np.eye(n) / np.sqrt(n)).reshape(-1))
