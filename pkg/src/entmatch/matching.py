"""Measurement outcomes that give fidelity-1 conditional teleportation.

For an invertible shared operator ``L`` (matrix ``M``), the matching outcomes
are ``L_q ∝ i_AC^-1 U L^-1†`` for unitary ``U``.  The matrix of the antilinear
``L^-1†`` is ``(M^-1)^dag``; then ``L L_q^dag = sqrt(p) U^dag i_AC`` so Bob
undoes the outcome with ``U`` and the success probability
``p = 1 / tr((L^dag L)^-1) = 1 / ||M^-1||_F^2`` depends on ``L`` alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .antilinear import OP_NORM_TOL, AntilinearOp
from .errors import DimensionMismatch, NonUnitaryArgument, NotMatching, SingularSharedState
from .linalg import allclose, as_matrix, is_unitary
from .teleport import transfer_matrix

INVERTIBLE_TOL = 1e-10
UNITARY_TOL = 1e-10
MATCH_TOL = 1e-10


@dataclass(frozen=True)
class MatchResult:
    outcome: AntilinearOp
    probability: float
    recovery: np.ndarray
    isomorphism: np.ndarray


def _require_invertible(shared: AntilinearOp) -> np.ndarray:
    if not shared.is_square:
        raise DimensionMismatch("matching needs equal dimensions on B and C")
    n2 = shared.hs_norm_sq()
    if abs(n2 - 1.0) > OP_NORM_TOL:
        raise ValueError(f"shared operator is not normalized: tr(L^dag L) = {n2!r}")
    s = np.linalg.svd(shared.matrix, compute_uv=False)
    if s[-1] <= INVERTIBLE_TOL:
        raise SingularSharedState(f"smallest singular value {s[-1]:.3e} of the shared operator")
    return np.linalg.inv(shared.matrix)


def _unitary_arg(u, n: int, name: str) -> np.ndarray:
    if u is None:
        return np.eye(n, dtype=np.complex128)
    u = as_matrix(u, name=name)
    if u.shape != (n, n):
        raise DimensionMismatch(f"{name} has shape {u.shape}, expected {(n, n)}")
    if not is_unitary(u, UNITARY_TOL):
        raise NonUnitaryArgument(f"{name} is not unitary")
    return u


def success_probability(shared: AntilinearOp) -> float:
    inv = _require_invertible(shared)
    return float(1.0 / np.sum(np.abs(inv) ** 2))


def matching_outcome(shared: AntilinearOp, u=None, i_ac=None) -> MatchResult:
    """Matching outcome for recovery unitary ``u`` (default identity) and
    isomorphism ``i_ac`` (default identity)."""
    inv = _require_invertible(shared)
    n = shared.dim_in
    u = _unitary_arg(u, n, "U")
    i_ac = _unitary_arg(i_ac, n, "i_AC")
    d = i_ac.conj().T @ u @ inv.conj().T
    d = d / np.linalg.norm(d)
    p = float(1.0 / np.sum(np.abs(inv) ** 2))
    return MatchResult(AntilinearOp(d), p, u, i_ac)


def fix_phase(u: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first non-zero entry of column 0 is real positive."""
    col = u[:, 0]
    k = int(np.argmax(np.abs(col) > eps))
    return u * (abs(col[k]) / col[k])


def is_matching(
    shared: AntilinearOp, outcome: AntilinearOp, i_ac=None, tol: float = MATCH_TOL
) -> tuple[bool, np.ndarray | None]:
    """Membership of ``outcome`` in the matching set of ``shared``.

    Returns ``(member, U)`` where ``U`` is Bob's recovery unitary (phase fixed
    by :func:`fix_phase`) when ``member`` is true, else ``None``.
    """
    _require_invertible(shared)
    n = shared.dim_in
    i_ac = _unitary_arg(i_ac, n, "i_AC")
    if outcome.matrix.shape != (n, n):
        raise DimensionMismatch(f"outcome of shape {outcome.matrix.shape} for dim {n}")
    n2 = outcome.hs_norm_sq()
    if abs(n2 - 1.0) > OP_NORM_TOL:
        raise ValueError(f"outcome operator is not normalized: tr(L^dag L) = {n2!r}")
    p = success_probability(shared)
    t = transfer_matrix(shared, outcome)
    if not allclose(t @ t.conj().T, p * np.eye(n), tol):
        return False, None
    # t = sqrt(p) U^dag i_AC  =>  U = i_AC t^dag / sqrt(p)
    return True, fix_phase(i_ac @ t.conj().T / np.sqrt(p))


def matching_orbit_check(
    shared: AntilinearOp, q1: AntilinearOp, q2: AntilinearOp, i_ac=None
) -> np.ndarray:
    """Local unitary ``V`` on A carrying the outcome state of ``q1`` to that of ``q2``."""
    for name, q in (("q1", q1), ("q2", q2)):
        if not is_matching(shared, q, i_ac)[0]:
            raise NotMatching(f"{name} is not a matching outcome for the shared state")
    # (V (x) I)|s_q> has amplitude matrix V @ M_q
    v = q2.matrix @ np.linalg.inv(q1.matrix)
    if not is_unitary(v, 1e-8):
        raise NotMatching("outcomes are not related by a local unitary")
    return v


def schmidt_example(alphas: Sequence[complex]) -> tuple[AntilinearOp, AntilinearOp, float]:
    """Diagonal shared state ``sum_i a_i |i>|i>`` and its matching outcome
    ``∝ diag(1 / conj(a_i))`` with probability ``1 / sum_i |a_i|^-2``."""
    a = np.asarray(alphas, dtype=np.complex128).reshape(-1)
    if a.size == 0 or np.any(np.abs(a) <= 1e-12):
        raise ValueError("Schmidt coefficients must all be non-zero")
    if abs(np.sum(np.abs(a) ** 2) - 1.0) > 1e-10:
        raise ValueError("Schmidt coefficients are not normalized")
    inv_sq = np.sum(1.0 / np.abs(a) ** 2)
    shared = AntilinearOp(np.diag(a))
    outcome = AntilinearOp(np.diag(1.0 / a.conj()) / np.sqrt(inv_sq))
    return shared, outcome, float(1.0 / inv_sq)
