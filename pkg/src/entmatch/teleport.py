"""Conditional teleportation through a single measurement outcome.

Alice holds the input on A and the B half of the shared state ``L: H_B -> H_C``;
she projects AB onto an outcome described by ``L_q: H_B -> H_A``.  Everything
below follows from the linear *transfer matrix* ``T = L L_q^dag: H_A -> H_C``:

* outcome probability ``p = ||T phi||^2``;
* unnormalized conditional state of C is ``T phi``;
* POVM element on the input is ``T^dag T = L_q L^dag L L_q^dag``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .antilinear import (
    OP_NORM_TOL,
    AntilinearOp,
    adjoint,
    compose_aa,
    is_maximally_entangled,
    measurement_state_from_op,
)
from .errors import DimensionMismatch, ZeroProbabilityOutcome
from .linalg import (
    DensityOperator,
    PureState,
    allclose,
    as_matrix,
    density_fidelity,
    fidelity,
    random_pure_state,
    random_unitary,
    rng_from_seed,
)

ZERO_PROB = 1e-14
BASIS_TOL = 1e-10
LINEARITY_TOL = 1e-10
REVERSIBILITY_TOL = 1e-10


def weyl_operators(n: int) -> list[np.ndarray]:
    """The N^2 shift-and-clock unitaries ``X^a Z^b``, ordered by ``a*N + b``."""
    omega = np.exp(2j * np.pi / n)
    x = np.roll(np.eye(n), 1, axis=0)  # X|j> = |j+1 mod N>
    z = np.diag(omega ** np.arange(n))
    return [
        np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
        for a in range(n)
        for b in range(n)
    ]


@dataclass(frozen=True)
class MeasurementBasis:
    """Nondegenerate projective measurement on AB given as an orthonormal
    family of N^2 outcome operators ``H_B -> H_A``."""

    dim: int
    outcomes: tuple[AntilinearOp, ...]

    def __post_init__(self):
        n = self.dim
        outs = tuple(self.outcomes)
        if len(outs) != n * n:
            raise ValueError(f"expected {n * n} outcomes, got {len(outs)}")
        for op in outs:
            if op.matrix.shape != (n, n):
                raise DimensionMismatch(f"outcome of shape {op.matrix.shape} in a dim-{n} basis")
        vecs = np.array([op.matrix.reshape(-1) for op in outs])
        # gram[a, b] = hs_inner(outs[a], outs[b])
        gram = vecs.conj() @ vecs.T
        if not allclose(gram, np.eye(n * n), BASIS_TOL):
            raise ValueError("outcome operators are not orthonormal")
        if not allclose(vecs.T @ vecs.conj(), np.eye(n * n), BASIS_TOL):
            raise ValueError("outcome projectors do not resolve the identity")
        object.__setattr__(self, "outcomes", outs)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    @property
    def states(self) -> list[PureState]:
        """Outcome states ``|s_q>_AB``."""
        return [measurement_state_from_op(op) for op in self.outcomes]


def bell_basis(n: int) -> MeasurementBasis:
    if n < 2:
        raise ValueError("Bell bases need N >= 2")
    return MeasurementBasis(n, tuple(AntilinearOp(w / np.sqrt(n)) for w in weyl_operators(n)))


def basis_from_unitary(n: int, u) -> MeasurementBasis:
    """Measurement whose outcome states are the columns of an N^2 x N^2 unitary."""
    u = as_matrix(u)
    return MeasurementBasis(n, tuple(AntilinearOp(u[:, q].reshape(n, n)) for q in range(n * n)))


def random_measurement_basis(n: int, seed: int) -> MeasurementBasis:
    return basis_from_unitary(n, random_unitary(n * n, seed))


def complete_basis(outcomes: Sequence[AntilinearOp], seed: int) -> MeasurementBasis:
    """Extend orthonormal outcome operators to a full measurement basis.

    The given outcomes come first and are kept exactly; the rest are random.
    """
    outcomes = list(outcomes)
    n = outcomes[0].dim_in
    k = len(outcomes)
    given = np.array([op.matrix.reshape(-1) for op in outcomes]).T
    rng = rng_from_seed(seed)
    filler = rng.standard_normal((n * n, n * n - k)) + 1j * rng.standard_normal((n * n, n * n - k))
    q, _ = np.linalg.qr(np.hstack([given, filler]))
    q[:, :k] = given
    return basis_from_unitary(n, q)


def _check_normalized(op: AntilinearOp, name: str):
    n2 = op.hs_norm_sq()
    if abs(n2 - 1.0) > OP_NORM_TOL:
        raise ValueError(f"{name} is not normalized: tr(L^dag L) = {n2!r}")


def transfer_matrix(shared: AntilinearOp, outcome: AntilinearOp) -> np.ndarray:
    """The linear map ``L L_q^dag: H_A -> H_C``."""
    if shared.dim_in != outcome.dim_in:
        raise DimensionMismatch(
            f"shared operator acts on dim {shared.dim_in}, outcome on dim {outcome.dim_in}"
        )
    return compose_aa(shared, adjoint(outcome))


def _input_vector(phi, dim: int) -> np.ndarray:
    v = phi.amplitudes if isinstance(phi, PureState) else np.asarray(phi, dtype=np.complex128)
    if v.size != dim:
        raise DimensionMismatch(f"input of dimension {v.size}, expected {dim}")
    return v


def outcome_probability(shared: AntilinearOp, outcome: AntilinearOp, phi) -> float:
    _check_normalized(shared, "shared operator")
    _check_normalized(outcome, "outcome operator")
    t = transfer_matrix(shared, outcome)
    out = t @ _input_vector(phi, t.shape[1])
    return float(np.vdot(out, out).real)


@dataclass(frozen=True)
class TeleportReport:
    probability: float
    output_state: PureState | DensityOperator
    fidelity_raw: float
    fidelity_corrected: float | None = None
    linear: bool = False
    reversible: bool = False
    recovery: np.ndarray | None = field(default=None, repr=False)


def _isomorphism(i_ac, n_a: int, n_c: int) -> np.ndarray:
    if i_ac is None:
        if n_a != n_c:
            raise DimensionMismatch("an explicit isomorphism is needed when dim A != dim C")
        return np.eye(n_a, dtype=np.complex128)
    i_ac = as_matrix(i_ac)
    if i_ac.shape != (n_c, n_a):
        raise DimensionMismatch(f"isomorphism of shape {i_ac.shape}, expected {(n_c, n_a)}")
    return i_ac


def teleport_pure(
    shared: AntilinearOp,
    outcome: AntilinearOp,
    phi: PureState,
    recovery=None,
    i_ac=None,
) -> TeleportReport:
    """Conditional output ``f_q(phi) = T phi / ||T phi||`` and its fidelities.

    ``fidelity_raw`` compares the output with ``i_ac phi``; ``fidelity_corrected``
    does the same after applying ``recovery`` (only when one is given).
    """
    _check_normalized(shared, "shared operator")
    _check_normalized(outcome, "outcome operator")
    t = transfer_matrix(shared, outcome)
    out = t @ _input_vector(phi, t.shape[1])
    p = float(np.vdot(out, out).real)
    if p <= ZERO_PROB:
        raise ZeroProbabilityOutcome(f"outcome probability {p:.3e} is below {ZERO_PROB:g}")
    out_state = PureState((out.size,), out / np.sqrt(p))
    target = PureState.from_vector(_isomorphism(i_ac, t.shape[1], t.shape[0]) @ phi.amplitudes)
    f_raw = fidelity(out_state, target)
    f_corr = None
    if recovery is not None:
        fixed = PureState.from_vector(as_matrix(recovery) @ out_state.amplitudes)
        f_corr = fidelity(fixed, target)
    linear, reversible = channel_linearity(shared, outcome)
    return TeleportReport(p, out_state, f_raw, f_corr, linear, reversible, recovery)


def teleport_density(
    shared: AntilinearOp,
    outcome: AntilinearOp,
    rho_in: DensityOperator,
    recovery=None,
    i_ac=None,
) -> TeleportReport:
    """Mixed-input version: ``p = tr(E rho)``, ``rho_out = T rho T^dag / p``."""
    _check_normalized(shared, "shared operator")
    _check_normalized(outcome, "outcome operator")
    t = transfer_matrix(shared, outcome)
    if rho_in.dim != t.shape[1]:
        raise DimensionMismatch(f"input of dimension {rho_in.dim}, expected {t.shape[1]}")
    p = float(np.trace(povm_element(shared, outcome) @ rho_in.matrix).real)
    if p <= ZERO_PROB:
        raise ZeroProbabilityOutcome(f"outcome probability {p:.3e} is below {ZERO_PROB:g}")
    rho_out = DensityOperator.from_matrix(t @ rho_in.matrix @ t.conj().T / p, (t.shape[0],))
    iso = _isomorphism(i_ac, t.shape[1], t.shape[0])
    target = DensityOperator.from_matrix(iso @ rho_in.matrix @ iso.conj().T, (t.shape[0],))
    f_raw = density_fidelity(rho_out, target)
    f_corr = None
    if recovery is not None:
        r = as_matrix(recovery)
        f_corr = density_fidelity(
            DensityOperator.from_matrix(r @ rho_out.matrix @ r.conj().T, (t.shape[0],)), target
        )
    linear, reversible = channel_linearity(shared, outcome)
    return TeleportReport(p, rho_out, f_raw, f_corr, linear, reversible, recovery)


def povm_element(shared: AntilinearOp, outcome: AntilinearOp) -> np.ndarray:
    """``E_q = L_q L^dag L L_q^dag`` as a matrix on H_A."""
    left = compose_aa(outcome, adjoint(shared))
    e = left @ compose_aa(shared, adjoint(outcome))
    return 0.5 * (e + e.conj().T)


def channel_linearity(shared: AntilinearOp, outcome: AntilinearOp) -> tuple[bool, bool]:
    """Return ``(linear, reversible)`` for the teleportation channel.

    Reversible: ``T`` is injective (smallest singular value above 1e-10).
    Linear: ``T^dag T`` is a multiple of the identity, i.e. the outcome
    probability does not depend on the input.
    """
    t = transfer_matrix(shared, outcome)
    s = np.linalg.svd(t, compute_uv=False)
    n_in = t.shape[1]
    reversible = bool(len(s) >= n_in and s[n_in - 1] > REVERSIBILITY_TOL)
    g = t.conj().T @ t
    c = np.trace(g).real / n_in
    linear = allclose(g, c * np.eye(n_in), LINEARITY_TOL)
    return linear, reversible


def probability_spread(
    shared: AntilinearOp, outcome: AntilinearOp, n_samples: int, seed: int
) -> tuple[float, float]:
    """Min and max outcome probability over Haar-random inputs."""
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    n = outcome.dim_out
    rng = rng_from_seed(seed)
    probs = [
        outcome_probability(shared, outcome, random_pure_state(n, int(rng.integers(0, 2**63))))
        for _ in range(n_samples)
    ]
    return min(probs), max(probs)


def is_bell_type(basis: MeasurementBasis, tol: float = 1e-10) -> bool:
    return all(is_maximally_entangled(op, tol) for op in basis)
