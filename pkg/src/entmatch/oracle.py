"""Brute-force three-system simulation of a single teleportation outcome.

This module deliberately works on raw state vectors only: it builds
``|phi>_A (x) |sigma>_BC`` as an ``N^3`` vector, applies the projector
``|s_q><s_q|_AB (x) I_C`` by explicit index contraction and reads off the
probability and the conditional state of C.  It does not import the
antilinear-operator machinery, so agreement with :mod:`entmatch.teleport`
is a genuine cross-check.

Index ordering of the three-party vector is A-major, then B, then C:
amplitude index ``i*N^2 + j*N + k`` for ``|i>_A |j>_B |k>_C``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, ZeroProbabilityOutcome
from .linalg import DensityOperator, PureState

ZERO_PROB = 1e-14
MAX_DIM = 8


@dataclass(frozen=True)
class OracleResult:
    probability: float
    conditional_state: PureState | None
    outcome_index: int = 0


def _check_dims(shared: PureState, sigma_q: PureState, phi: PureState) -> int:
    n = phi.dim
    if n > MAX_DIM:
        raise ValueError(f"oracle is capped at N <= {MAX_DIM}")
    for name, s in (("shared", shared), ("sigma_q", sigma_q)):
        if s.dims != (n, n):
            raise DimensionMismatch(f"{name} has dims {s.dims}, expected {(n, n)}")
    return n


def joint_state(shared: PureState, phi: PureState) -> np.ndarray:
    """``|phi>_A (x) |sigma>_BC`` as a flat ``N^3`` vector."""
    return np.kron(phi.amplitudes, shared.amplitudes)


def project_outcome(shared: PureState, sigma_q: PureState, phi: PureState) -> np.ndarray:
    """Unnormalized post-measurement ``N^3`` vector after projecting AB on ``sigma_q``."""
    n = _check_dims(shared, sigma_q, phi)
    psi = joint_state(shared, phi).reshape(n, n, n)
    s = sigma_q.amplitudes.reshape(n, n)
    overlap = np.einsum("ab,abc->c", s.conj(), psi)
    return np.einsum("ab,c->abc", s, overlap).reshape(-1)


def simulate_outcome(
    shared: PureState, sigma_q: PureState, phi: PureState, outcome_index: int = 0
) -> OracleResult:
    n = _check_dims(shared, sigma_q, phi)
    post = project_outcome(shared, sigma_q, phi)
    p = float(np.vdot(post, post).real)
    if p <= ZERO_PROB:
        raise ZeroProbabilityOutcome(f"outcome probability {p:.3e} is below {ZERO_PROB:g}")
    # contract against <s_q|_AB; phase-coherent with the projection above
    c = np.einsum("ab,abc->c", sigma_q.amplitudes.reshape(n, n).conj(), post.reshape(n, n, n))
    return OracleResult(p, PureState((n,), c / np.linalg.norm(c)), outcome_index)


def simulate_basis(shared: PureState, basis, phi: PureState) -> list[OracleResult]:
    """One result per outcome.  ``basis`` is a sequence of outcome states or any
    object exposing them as ``.states``.  Zero-probability outcomes are kept
    with ``conditional_state=None``."""
    states: Iterable[PureState] = basis.states if hasattr(basis, "states") else basis
    results = []
    for q, s in enumerate(states):
        try:
            results.append(simulate_outcome(shared, s, phi, q))
        except ZeroProbabilityOutcome:
            post = project_outcome(shared, s, phi)
            results.append(OracleResult(float(np.vdot(post, post).real), None, q))
    return results


def simulate_mixture(
    shared: PureState, sigma_q: PureState, rho_in: DensityOperator
) -> tuple[float, np.ndarray]:
    """Mixed input by eigen-decomposition: ``(p, rho_out)`` from pure-state runs."""
    w, v = np.linalg.eigh(rho_in.matrix)
    n = rho_in.dim
    p = 0.0
    acc = np.zeros((n, n), dtype=np.complex128)
    for wk, vk in zip(w, v.T):
        if wk <= 1e-15:
            continue
        post = project_outcome(shared, sigma_q, PureState.from_vector(vk))
        pk = float(np.vdot(post, post).real)
        if pk <= ZERO_PROB:
            continue
        c = np.einsum("ab,abc->c", sigma_q.amplitudes.reshape(n, n).conj(), post.reshape(n, n, n))
        p += wk * pk
        acc += wk * np.outer(c, c.conj())
    if p <= ZERO_PROB:
        raise ZeroProbabilityOutcome(f"outcome probability {p:.3e} is below {ZERO_PROB:g}")
    return p, acc / p
