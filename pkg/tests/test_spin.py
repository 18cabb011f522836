"""Tests for spin operators and question-answer states.

Expected values come from independent routes: hand-solved 2x2 and 3x3
eigenproblems, textbook ladder values, and the package's eigensolver oracle
(which the recursion never touches).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qastates import linalg, spin
from qastates.spin import Direction, SpinSystem

X = Direction(1.0, 0.0, 0.0)
Y = Direction(0.0, 1.0, 0.0)
Z = Direction(0.0, 0.0, 1.0)

J_VALUES = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 12.5]


class TestSpinSystem:
    def test_dimension_and_m_values(self):
        s = SpinSystem(1.5)
        assert s.dim == 4
        assert s.m_values == pytest.approx([-1.5, -0.5, 0.5, 1.5])

    def test_m_index_ascending(self):
        s = SpinSystem(2.0)
        assert s.m_index(-2.0) == 0
        assert s.m_index(2.0) == 4

    @pytest.mark.parametrize("bad", [0.0, 0.3, -0.5, 25.5, float("nan"), float("inf")])
    def test_invalid_j_rejected(self, bad):
        with pytest.raises(ValueError):
            SpinSystem(bad)

    def test_boundary_j_accepted(self):
        assert SpinSystem(25.0).dim == 51
        assert SpinSystem(0.5).dim == 2


class TestDirection:
    def test_unit_enforced(self):
        with pytest.raises(ValueError):
            Direction(1.0, 1.0, 0.0)

    def test_normalized_factory(self):
        d = Direction.normalized(3.0, 0.0, 4.0)
        assert (d.x, d.z) == pytest.approx((0.6, 0.8))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            Direction.normalized(0.0, 0.0, 0.0)

    def test_antipode(self):
        d = Direction.normalized(1.0, 2.0, 2.0)
        a = d.antipode()
        assert (a.x, a.y, a.z) == pytest.approx((-d.x, -d.y, -d.z))

    def test_angle_between(self):
        assert spin.angle_between(X, Y) == pytest.approx(math.pi / 2)
        assert spin.angle_between(X, X.antipode()) == pytest.approx(math.pi)


class TestLadder:
    def test_boundary_coefficients_vanish(self):
        for j in J_VALUES:
            s = SpinSystem(j)
            assert spin.ladder_coefficients(s, j)[0] == 0.0
            assert spin.ladder_coefficients(s, -j)[1] == 0.0

    def test_spin2_raising_values(self):
        # sqrt((j-m)(j+m+1)) at j=2: m=-2..1 gives 2, sqrt6, sqrt6, 2.
        s = SpinSystem(2.0)
        got = [spin.ladder_coefficients(s, m)[0] for m in (-2.0, -1.0, 0.0, 1.0)]
        assert got == pytest.approx([2.0, math.sqrt(6), math.sqrt(6), 2.0])

    def test_lower_is_adjoint_of_raise(self):
        for j in (1.0, 2.5):
            jp, jm = spin.ladder_matrices(SpinSystem(j))
            assert np.abs(jm - jp.conj().T).max() == 0.0

    def test_invalid_m_rejected(self):
        with pytest.raises(ValueError):
            spin.ladder_coefficients(SpinSystem(1.0), 0.5)


class TestOperators:
    def test_spin_half_matrices(self):
        # Ascending basis (m=-1/2 first): half the usual matrices with the
        # basis order reversed, worked out by hand.
        jx, jy, jz = spin.angular_momentum_operators(SpinSystem(0.5))
        assert np.abs(jx - 0.5 * np.array([[0, 1], [1, 0]])).max() < 1e-15
        assert np.abs(jy - 0.5 * np.array([[0, 1j], [-1j, 0]])).max() < 1e-15
        assert np.abs(jz - 0.5 * np.diag([-1, 1])).max() < 1e-15

    def test_spin_one_matrices(self):
        jx, jy, jz = spin.angular_momentum_operators(SpinSystem(1.0))
        r = 1 / math.sqrt(2)
        assert np.abs(jx - r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])).max() < 1e-15
        assert (
            np.abs(jy - r * np.array([[0, 1j, 0], [-1j, 0, 1j], [0, -1j, 0]])).max()
            < 1e-15
        )
        assert np.abs(jz - np.diag([-1.0, 0.0, 1.0])).max() < 1e-15

    @pytest.mark.parametrize("j", J_VALUES)
    def test_commutation_relations(self, j):
        s = SpinSystem(j)
        defects = spin.algebra_defects(s)
        assert defects["commutator_defect"] <= 1e-11
        assert defects["casimir_defect"] <= 1e-10

    @pytest.mark.parametrize("j", [0.5, 1.5, 2.0])
    def test_component_operator_spectrum(self, j):
        rng = np.random.default_rng(17)
        s = SpinSystem(j)
        op = spin.component_operator(s, spin.random_direction(rng))
        dec = linalg.hermitian_eig(op)
        assert dec.eigenvalues == pytest.approx(s.m_values, abs=1e-10)

    def test_operators_hermitian(self):
        for op in spin.angular_momentum_operators(SpinSystem(2.5)):
            assert np.abs(op - op.conj().T).max() < 1e-15


def spin_half_expected(direction, h):
    """Independent closed form for j=1/2 eigenvectors in the ascending basis.

    From the 2x2 eigenproblem of (1/2)[[-z, x+iy], [x-iy, z]]:
    h=+1/2 -> (x+iy, 1+z), h=-1/2 -> (x+iy, z-1), then normalize.
    """
    xy = complex(direction.x, direction.y)
    if h > 0:
        v = np.array([xy, 1.0 + direction.z])
    else:
        v = np.array([xy, direction.z - 1.0])
    return linalg.fix_phase(v / linalg.norm(v))


class TestRecursionStates:
    def test_pole_states_are_exact_basis_vectors(self):
        s = SpinSystem(0.5)
        up = spin.eigenstate_recursion(s, Z, 0.5)
        assert np.array_equal(up.ket, np.array([0.0, 1.0], dtype=complex))
        down = spin.eigenstate_recursion(s, Z, -0.5)
        assert np.array_equal(down.ket, np.array([1.0, 0.0], dtype=complex))
        # Reversed axis relabels: h=+1/2 along -z sits at m=-1/2.
        flipped = spin.eigenstate_recursion(s, Z.antipode(), 0.5)
        assert np.array_equal(flipped.ket, np.array([1.0, 0.0], dtype=complex))

    def test_spin_half_along_y(self):
        # Hand value in the ascending basis; see spin_half_expected.
        got = spin.eigenstate_recursion(SpinSystem(0.5), Y, 0.5)
        expected = np.array([1.0, -1j]) / math.sqrt(2)
        assert np.abs(got.ket - expected).max() < 1e-12

    def test_spin_half_along_x(self):
        got = spin.eigenstate_recursion(SpinSystem(0.5), X, -0.5)
        expected = np.array([1.0, -1.0]) / math.sqrt(2)
        assert np.abs(got.ket - expected).max() < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.sampled_from([0.5, -0.5]))
    def test_spin_half_closed_form(self, seed, h):
        rng = np.random.default_rng(seed)
        direction = spin.random_direction(rng)
        got = spin.eigenstate_recursion(SpinSystem(0.5), direction, h)
        expected = spin_half_expected(direction, h)
        assert np.abs(got.ket - expected).max() < 1e-10

    def test_spin_one_along_x(self):
        # Null vector of Jx (j=1) is (1, 0, -1)/sqrt2; the h=+1 vector is
        # (1, sqrt2, 1)/2.  Both solved by hand.
        s = SpinSystem(1.0)
        zero = spin.eigenstate_recursion(s, X, 0.0)
        assert np.abs(zero.ket - np.array([1.0, 0.0, -1.0]) / math.sqrt(2)).max() < 1e-12
        top = spin.eigenstate_recursion(s, X, 1.0)
        assert np.abs(top.ket - np.array([1.0, math.sqrt(2), 1.0]) / 2.0).max() < 1e-12

    @pytest.mark.parametrize("j", J_VALUES)
    def test_recursion_matches_oracle(self, j):
        s = SpinSystem(j)
        rng = np.random.default_rng(round(10 * j))
        for _ in range(3):
            direction = spin.random_direction(rng)
            for h in s.m_values:
                rec = spin.eigenstate_recursion(s, direction, float(h))
                orc = spin.eigenstate_oracle(s, direction, float(h))
                assert abs(linalg.inner(rec.ket, orc.ket)) >= 1.0 - 1e-9
                assert rec.residual <= 1e-9

    def test_near_pole_direction_still_works(self):
        direction = Direction.normalized(1e-7, 0.0, 1.0)
        s = SpinSystem(2.0)
        for h in s.m_values:
            state = spin.eigenstate_recursion(s, direction, float(h))
            assert state.residual <= 1e-9

    def test_rescaling_path_high_j(self):
        # Steep coefficient growth forces the mid-recursion rescaling.
        direction = Direction.normalized(1e-7, 0.0, -1.0)
        s = SpinSystem(12.5)
        state = spin.eigenstate_recursion(s, direction, 12.5)
        assert state.residual <= 1e-9

    def test_invalid_answer_rejected(self):
        with pytest.raises(ValueError):
            spin.eigenstate_recursion(SpinSystem(1.0), X, 0.25)
        with pytest.raises(ValueError):
            spin.eigenstate_recursion(SpinSystem(1.0), X, 1.5)

    def test_phase_convention_applied(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            state = spin.eigenstate_recursion(
                SpinSystem(1.5), spin.random_direction(rng), 0.5
            )
            fixed = linalg.fix_phase(state.ket)
            assert np.abs(fixed - state.ket).max() < 1e-12


class TestStateInvariants:
    def test_wrong_eigenvector_rejected(self):
        s = SpinSystem(0.5)
        good = spin.eigenstate_recursion(s, Y, 0.5)
        with pytest.raises(ValueError):
            spin.QuestionAnswerState(s, X, 0.5, good.ket)

    def test_unnormalized_rejected(self):
        s = SpinSystem(0.5)
        with pytest.raises(ValueError):
            spin.QuestionAnswerState(s, Z, 0.5, np.array([0.0, 2.0]))

    def test_wrong_dimension_rejected(self):
        with pytest.raises(ValueError):
            spin.QuestionAnswerState(SpinSystem(1.0), Z, 1.0, np.array([0.0, 1.0]))

    def test_ket_is_read_only(self):
        state = spin.eigenstate_recursion(SpinSystem(0.5), Z, 0.5)
        with pytest.raises(ValueError):
            state.ket[0] = 1.0


class TestCatalogAndTransitions:
    @pytest.mark.parametrize("j", [0.5, 1.0, 2.5])
    def test_catalog_is_orthonormal_basis(self, j):
        rng = np.random.default_rng(5)
        s = SpinSystem(j)
        states = spin.state_catalog(s, [spin.random_direction(rng)])
        basis = np.column_stack([st_.ket for st_ in states])
        assert np.abs(basis.conj().T @ basis - np.eye(s.dim)).max() <= 1e-9

    def test_catalog_covers_all_answers(self):
        s = SpinSystem(1.5)
        states = spin.state_catalog(s, [X, Y])
        assert len(states) == 2 * s.dim
        assert [st_.answer for st_ in states[: s.dim]] == pytest.approx(s.m_values)

    def test_transition_probabilities_same_direction(self):
        s = SpinSystem(1.0)
        states = spin.state_catalog(s, [Y])
        for i, a in enumerate(states):
            for k, b in enumerate(states):
                expected = 1.0 if i == k else 0.0
                assert spin.transition_probability(a, b) == pytest.approx(
                    expected, abs=1e-12
                )

    def test_transition_completeness(self):
        # Probabilities from one state across another direction's catalog
        # must sum to one.
        rng = np.random.default_rng(9)
        s = SpinSystem(2.0)
        src = spin.eigenstate_recursion(s, spin.random_direction(rng), 1.0)
        catalog = spin.state_catalog(s, [spin.random_direction(rng)])
        total = sum(spin.transition_probability(src, t) for t in catalog)
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_spin_half_transition_closed_form(self):
        # For j=1/2, P(up along a -> up along b) = (1 + cos angle)/2.
        rng = np.random.default_rng(31)
        s = SpinSystem(0.5)
        for _ in range(10):
            a = spin.random_direction(rng)
            b = spin.random_direction(rng)
            p = spin.transition_probability(
                spin.eigenstate_recursion(s, a, 0.5),
                spin.eigenstate_recursion(s, b, 0.5),
            )
            expected = (1.0 + math.cos(spin.angle_between(a, b))) / 2.0
            assert p == pytest.approx(expected, abs=1e-10)


class TestVerificationBatteries:
    def test_eigenstate_battery_passes(self):
        rep = spin.verify_eigenstates(
            SpinSystem(1.5), samples=10, rng=np.random.default_rng(0)
        )
        assert rep.verdict == "pass"
        assert rep.metrics["max_residual"] <= 1e-9
        assert rep.metrics["min_overlap"] >= 1.0 - 1e-9
        assert rep.metrics["commutator_defect"] <= 1e-11

    def test_orthogonality_battery_passes(self):
        rep = spin.verify_orthogonality(
            SpinSystem(1.0), samples=10, rng=np.random.default_rng(0)
        )
        assert rep.verdict == "pass"
        assert rep.metrics["max_gram_defect"] <= 1e-9

    def test_ray_collision_battery(self):
        rep = spin.verify_ray_collisions(
            SpinSystem(2.0), samples=20, rng=np.random.default_rng(0)
        )
        assert rep.verdict == "pass"
        # Collisions are the documented finding; they must be on record.
        assert len(rep.witnesses) == 20
        assert rep.metrics["worst_collision_overlap"] >= 1.0 - 1e-9

    def test_batteries_deterministic(self):
        a = spin.verify_eigenstates(SpinSystem(1.0), samples=5, rng=np.random.default_rng(7))
        b = spin.verify_eigenstates(SpinSystem(1.0), samples=5, rng=np.random.default_rng(7))
        assert a.metrics == b.metrics
