import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entmatch.antilinear import AntilinearOp, measurement_state_from_op, state_from_op
from entmatch.errors import NonUnitaryArgument, NotMatching, SingularSharedState
from entmatch.linalg import fidelity, random_pure_state, random_unitary, random_vector
from entmatch.matching import (
    fix_phase,
    is_matching,
    matching_orbit_check,
    matching_outcome,
    schmidt_example,
    success_probability,
)
from entmatch.oracle import simulate_outcome
from entmatch.teleport import outcome_probability, teleport_pure, transfer_matrix

from conftest import SQ2, diag_op, random_invertible_op, random_op

seeds = st.integers(min_value=0, max_value=2**63 - 1)

BELL = AntilinearOp(np.eye(2) / SQ2)
X = np.array([[0, 1], [1, 0]], dtype=complex)


def inverse_hs_norm_sq(m):
    # tr((L^dag L)^-1) with L^dag L = M^T conj(M), evaluated without shortcuts
    gram = m.T @ m.conj()
    return np.trace(np.linalg.inv(gram)).real


class TestMatchingOutcome:
    def test_bell_reduces_to_standard(self):
        res = matching_outcome(BELL)
        assert np.allclose(res.outcome.matrix, np.eye(2) / SQ2, atol=1e-15)
        assert abs(res.probability - 0.25) < 1e-15

    def test_partial_diag(self, partial_op):
        res = matching_outcome(partial_op)
        a = np.array([np.sqrt(2 / 3), np.sqrt(1 / 3)])
        expected = np.diag(1 / a) / np.sqrt(9 / 2)
        assert np.max(np.abs(res.outcome.matrix - expected)) < 1e-15
        assert abs(res.probability - 2 / 9) < 1e-15

    def test_normalized_and_condition(self):
        for k in range(20):
            n = 2 + k % 3
            shared = random_invertible_op(n, k)
            u, iso = random_unitary(n, 100 + k), random_unitary(n, 200 + k)
            res = matching_outcome(shared, u, iso)
            assert abs(res.outcome.hs_norm_sq() - 1) < 1e-12
            t = transfer_matrix(shared, res.outcome)
            assert np.max(np.abs(u @ t / np.sqrt(res.probability) - iso)) < 1e-10

    def test_random_n3_fidelity_one(self):
        shared = random_invertible_op(3, 42)
        u = random_unitary(3, 43)
        res = matching_outcome(shared, u)
        for k in range(100):
            phi = random_pure_state(3, 1000 + k)
            rep = teleport_pure(shared, res.outcome, phi, recovery=res.recovery)
            assert abs(rep.fidelity_corrected - 1) < 1e-10
            sim = simulate_outcome(state_from_op(shared), measurement_state_from_op(res.outcome), phi)
            fixed = sim.conditional_state.amplitudes @ u.T
            assert abs(abs(np.vdot(fixed, phi.amplitudes)) ** 2 - 1) < 1e-10

    def test_singular(self):
        with pytest.raises(SingularSharedState):
            matching_outcome(AntilinearOp(np.diag([1.0, 0.0])))

    def test_non_unitary(self, partial_op):
        with pytest.raises(NonUnitaryArgument):
            matching_outcome(partial_op, 2 * np.eye(2))

    @given(seeds, seeds, st.integers(2, 4))
    def test_probability_constancy(self, s1, s2, n):
        shared = random_invertible_op(n, s1)
        res = matching_outcome(shared, random_unitary(n, s2))
        p = success_probability(shared)
        for k in range(5):
            assert abs(outcome_probability(shared, res.outcome, random_pure_state(n, s2 + k)) - p) < 1e-12


class TestSuccessProbability:
    def test_bell(self):
        assert abs(success_probability(BELL) - 0.25) < 1e-15

    def test_partial(self, partial_op):
        assert abs(success_probability(partial_op) - 2 / 9) < 1e-15

    def test_point_nine(self):
        # 1 / (1/0.9 + 1/0.1) = 0.09
        assert abs(success_probability(diag_op([np.sqrt(0.9), np.sqrt(0.1)])) - 0.09) < 1e-15

    @given(seeds, st.integers(2, 4))
    def test_trace_formula(self, seed, n):
        shared = random_invertible_op(n, seed)
        assert abs(success_probability(shared) - 1 / inverse_hs_norm_sq(shared.matrix)) < 1e-10

    @pytest.mark.parametrize("n", [2, 3])
    def test_maximum_at_maximal_entanglement(self, n):
        best = 0.0
        for k in range(10_000):
            op = random_op(n, k)
            if np.linalg.svd(op.matrix, compute_uv=False)[-1] <= 1e-10:
                continue
            p = success_probability(op)
            assert p <= 1 / n**2 + 1e-15
            best = max(best, p)
        assert best < 1 / n**2
        assert abs(success_probability(AntilinearOp(random_unitary(n, 1) / np.sqrt(n))) - 1 / n**2) < 1e-8

    def test_singular(self):
        with pytest.raises(SingularSharedState):
            success_probability(AntilinearOp(np.diag([1.0, 0.0])))


class TestIsMatching:
    @given(seeds, seeds, st.integers(2, 4))
    def test_round_trip(self, s1, s2, n):
        shared = random_invertible_op(n, s1)
        u = random_unitary(n, s2)
        member, recovered = is_matching(shared, matching_outcome(shared, u).outcome)
        assert member
        assert np.max(np.abs(recovered - fix_phase(u))) < 1e-8

    def test_bell_outcome_against_partial(self, partial_op):
        assert is_matching(partial_op, BELL) == (False, None)

    @given(seeds)
    def test_global_phase_irrelevant(self, seed):
        shared = random_invertible_op(3, seed)
        res = matching_outcome(shared, random_unitary(3, seed + 1))
        phased = res.outcome.scaled(np.exp(1j * (seed % 628) / 100))
        assert is_matching(shared, phased)[0]

    def test_with_isomorphism(self):
        shared = random_invertible_op(3, 5)
        iso, u = random_unitary(3, 6), random_unitary(3, 7)
        member, recovered = is_matching(shared, matching_outcome(shared, u, iso).outcome, iso)
        assert member and np.max(np.abs(recovered - fix_phase(u))) < 1e-8

    def test_phase_fixed(self):
        _, u = is_matching(BELL, matching_outcome(BELL, 1j * X).outcome)
        assert abs(u[1, 0].imag) < 1e-15 and u[1, 0].real > 0

    def test_random_outcomes_rejected(self):
        shared = diag_op([np.sqrt(0.7), np.sqrt(0.3)])
        hits = sum(is_matching(shared, random_op(2, 50_000 + k))[0] for k in range(1000))
        assert hits == 0


class TestOrbit:
    def test_identical(self, partial_op):
        q = matching_outcome(partial_op).outcome
        v = matching_orbit_check(partial_op, q, q)
        assert np.allclose(v, np.eye(2), atol=1e-14)

    def test_pauli(self, partial_op):
        q1 = matching_outcome(partial_op).outcome
        q2 = matching_outcome(partial_op, X).outcome
        v = matching_orbit_check(partial_op, q1, q2)
        # with i_AC = I the local unitary is U2 U1^dag = X
        assert np.allclose(v, X, atol=1e-14)
        moved = np.kron(v, np.eye(2)) @ measurement_state_from_op(q1).amplitudes
        assert abs(abs(np.vdot(moved, measurement_state_from_op(q2).amplitudes)) - 1) < 1e-12

    def test_random_qutrit_pair(self):
        shared = random_invertible_op(3, 9)
        q1 = matching_outcome(shared, random_unitary(3, 10)).outcome
        q2 = matching_outcome(shared, random_unitary(3, 11)).outcome.scaled(1j)
        v = matching_orbit_check(shared, q1, q2)
        moved = np.kron(v, np.eye(3)) @ measurement_state_from_op(q1).amplitudes
        f = abs(np.vdot(moved, measurement_state_from_op(q2).amplitudes)) ** 2
        assert abs(f - 1) < 1e-10

    def test_not_matching(self, partial_op):
        with pytest.raises(NotMatching):
            matching_orbit_check(partial_op, matching_outcome(partial_op).outcome, BELL)


class TestSchmidtExample:
    def test_bell(self):
        shared, outcome, p = schmidt_example([1 / SQ2, 1 / SQ2])
        assert np.allclose(outcome.matrix, np.eye(2) / SQ2, atol=1e-15)
        assert abs(p - 0.25) < 1e-15

    def test_two_thirds(self):
        shared, outcome, p = schmidt_example([np.sqrt(2 / 3), np.sqrt(1 / 3)])
        assert abs(p - 2 / 9) < 1e-15
        assert np.allclose(outcome.matrix, np.diag([np.sqrt(1 / 3), np.sqrt(2 / 3)]), atol=1e-15)
        assert is_matching(shared, outcome)[0]
        # the outcome from the general construction agrees
        assert np.max(np.abs(matching_outcome(shared).outcome.matrix - outcome.matrix)) < 1e-15

    def test_complex_phases_use_conjugate(self):
        alphas = np.array([np.exp(1j * np.pi / 3) / SQ2, 1 / SQ2])
        shared, outcome, p = schmidt_example(alphas)
        diag = np.diag(outcome.matrix)
        assert np.allclose(diag / diag[1], [1 / np.conj(alphas[0]) * alphas[1].conj(), 1], atol=1e-15)
        member, u = is_matching(shared, outcome)
        assert member
        for k in range(20):
            phi = random_pure_state(2, k)
            rep = teleport_pure(shared, outcome, phi, recovery=u)
            assert abs(rep.fidelity_corrected - 1) < 1e-10
            sim = simulate_outcome(state_from_op(shared), measurement_state_from_op(outcome), phi)
            assert abs(fidelity(sim.conditional_state, phi) - 1) < 1e-10

    def test_unconjugated_reciprocal_needs_phase_gate(self):
        # diag(1/alpha) still matches, but Bob must undo diag(alpha / conj(alpha))
        alphas = np.array([np.exp(1j * np.pi / 3) / SQ2, 1 / SQ2])
        shared, outcome, _ = schmidt_example(alphas)
        _, u_conj = is_matching(shared, outcome)
        assert np.allclose(u_conj, np.eye(2), atol=1e-12)
        plain = AntilinearOp(np.diag(1 / alphas) / np.linalg.norm(1 / alphas))
        member, u_plain = is_matching(shared, plain)
        assert member
        phases = np.conj(alphas / np.conj(alphas))
        assert np.allclose(u_plain, fix_phase(np.diag(phases)), atol=1e-12)

    def test_three_levels(self):
        a = random_vector(3, 3)
        shared, outcome, p = schmidt_example(a)
        assert abs(p - 1 / np.sum(1 / np.abs(a) ** 2)) < 1e-15
        assert is_matching(shared, outcome)[0]

    @pytest.mark.parametrize("alphas", [[1.0, 0.0], [0.5, 0.5]])
    def test_invalid(self, alphas):
        with pytest.raises(ValueError):
            schmidt_example(alphas)
