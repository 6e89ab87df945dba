"""Synthesis tests: the palindromic exponential product and the cascade.

The ground truth everywhere is the dense matrix sum_k alpha_k P~_k built by
Kronecker products, never the circuit construction itself.
"""

import math

import numpy as np
import pytest

from sbbe.circuit import decompose, resources
from sbbe.pauli import PauliString, terms_dense, to_dense
from sbbe.simulator import to_dense_unitary
from sbbe.synthesis import (
    UnitaryPlan,
    build_u_cascade,
    build_u_generic,
    cascade_coefficients,
    cascade_mu,
    compute_generic_angles,
    solve_cascade_angles,
    staircase_types,
)


def staircase(n, a_type, b_type):
    out = []
    for k in range(n):
        types = {q: a_type for q in range(k)}
        types[k] = b_type
        out.append(PauliString.from_types(n, types))
    return out


def normalized(rng, m):
    v = rng.standard_normal(m)
    return v / np.linalg.norm(v)


def dense_target(alphas, ptildes):
    return terms_dense(list(zip(alphas, ptildes)))


def exp_count(circ):
    return sum(1 for g in circ.gates if g.kind == "PAULIEXP")


class TestGenericAngles:
    def test_unit_first_coefficient(self):
        th = compute_generic_angles([1.0, 0.0, 0.0])
        assert th[0] == pytest.approx(math.pi / 2)
        assert th[1] == th[2] == 0.0

    def test_leading_zeros_are_benign(self):
        th = compute_generic_angles([0.0, 0.0, 1.0])
        assert th[0] == th[1] == 0.0
        assert th[2] == pytest.approx(math.pi)

    def test_norm_checked(self):
        with pytest.raises(ValueError, match="normalized"):
            compute_generic_angles([0.5, 0.5])


class TestGenericBuild:
    def test_single_term_is_the_string(self):
        p = PauliString.from_label("XY")
        circ = build_u_generic([1.0], [p])
        assert exp_count(circ) == 1
        assert np.allclose(to_dense_unitary(circ), to_dense(p), atol=1e-12)

    def test_two_terms_one_qubit(self):
        phi = 0.83
        z, x = PauliString.from_label("Z"), PauliString.from_label("X")
        circ = build_u_generic([math.cos(phi), math.sin(phi)], [z, x])
        want = math.cos(phi) * to_dense(z) + math.sin(phi) * to_dense(x)
        assert np.max(np.abs(to_dense_unitary(circ) - want)) < 1e-12

    def test_uniform_four_terms(self):
        pt = staircase(4, 1, 3)
        alphas = [0.5] * 4
        circ = build_u_generic(alphas, pt)
        want = dense_target(alphas, pt)
        assert np.max(np.abs(to_dense_unitary(circ) - want)) < 1e-9

    def test_random_staircase_m5(self):
        rng = np.random.default_rng(0)
        pt = staircase(5, 2, 1)
        for _ in range(5):
            alphas = normalized(rng, 5)
            circ = build_u_generic(alphas, pt)
            err = np.max(np.abs(to_dense_unitary(circ)
                                - dense_target(alphas, pt)))
            assert err < 1e-9

    def test_exponential_count_2m_minus_1(self):
        rng = np.random.default_rng(9)
        for m in (2, 3, 5, 7):
            pt = staircase(m, 3, 1)
            circ = build_u_generic(normalized(rng, m), pt)
            assert exp_count(circ) == 2 * m - 1

    def test_signed_coefficients(self):
        rng = np.random.default_rng(3)
        pt = staircase(4, 1, 2)
        alphas = normalized(rng, 4)
        alphas[0] = -abs(alphas[0])
        alphas[3] = -abs(alphas[3])
        alphas /= np.linalg.norm(alphas)
        circ = build_u_generic(alphas, pt)
        assert np.max(np.abs(to_dense_unitary(circ)
                             - dense_target(alphas, pt))) < 1e-9

    def test_unitarity(self):
        rng = np.random.default_rng(30)
        pt = staircase(6, 1, 3)
        circ = build_u_generic(normalized(rng, 6), pt)
        u = to_dense_unitary(circ)
        assert np.max(np.abs(u.conj().T @ u - np.eye(64))) < 1e-10

    def test_commuting_input_rejected(self):
        ps = [PauliString.from_label("ZI"), PauliString.from_label("IZ")]
        with pytest.raises(ValueError, match="commute"):
            build_u_generic([0.6, 0.8], ps)

    def test_two_qubit_scaling_linear_in_m_and_n(self):
        """Decomposed CX count grows at most linearly along each grid axis."""
        def count(m, n):
            pt = [PauliString.from_types(
                n, {**{q: 1 for q in range(k)}, k: 3}) for k in range(m)]
            alphas = np.full(m, 1.0 / math.sqrt(m))
            return resources(build_u_generic(alphas, pt)).two_qubit_count

        for n in (4, 6):
            counts = [count(m, n) for m in range(2, n + 1)]
            diffs = np.diff(counts)
            assert max(diffs) <= 4 * n
        for m in (3, 4):
            counts = [count(m, n) for n in range(m, m + 4)]
            assert max(np.diff(counts)) <= 0  # strings do not grow with n here


class TestCascade:
    def test_mu_values(self):
        # c=3 pairs: gamma(3,1) = +i so mu = 1; gamma(3,2) = -i so mu = -1
        assert cascade_mu(2, 1) == 1
        assert cascade_mu(1, 2) == -1

    def test_single_qubit(self):
        circ = build_u_cascade(2, 1, [1.0])
        assert np.allclose(to_dense_unitary(circ),
                           to_dense(PauliString.from_label("X")))

    def test_coefficient_law_via_projection(self):
        """Pauli-basis projection of the circuit matches the product law."""
        rng = np.random.default_rng(1)
        for a_type, b_type in ((1, 3), (3, 1), (2, 3), (1, 2)):
            n = 3
            mu = cascade_mu(a_type, b_type)
            pt = staircase(n, a_type, b_type)
            alphas = normalized(rng, n)
            thetas = solve_cascade_angles(alphas, mu)
            u = to_dense_unitary(build_u_cascade(a_type, b_type, alphas))
            law = cascade_coefficients(thetas, mu)
            for k in range(n):
                proj = np.trace(to_dense(pt[k]).conj().T @ u) / 2 ** n
                assert proj == pytest.approx(law[k], abs=1e-10)
                assert proj == pytest.approx(alphas[k], abs=1e-10)

    def test_final_coefficient_carries_no_cosine(self):
        thetas = [0.4, 1.1, 2.0]
        law = cascade_coefficients(thetas, -1)
        want = (-1) ** 3 * np.prod([math.sin(t / 2) for t in thetas])
        assert law[-1] == pytest.approx(want)

    def test_matches_dense_sum(self):
        rng = np.random.default_rng(7)
        for n in (2, 3, 4, 5):
            alphas = normalized(rng, n)
            pt = staircase(n, 1, 3)
            u = to_dense_unitary(build_u_cascade(1, 3, alphas))
            assert np.max(np.abs(u - dense_target(alphas, pt))) < 1e-9

    def test_cascade_agrees_with_generic(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            alphas = normalized(rng, 4)
            pt = staircase(4, 3, 2)
            u1 = to_dense_unitary(build_u_cascade(3, 2, alphas))
            u2 = to_dense_unitary(build_u_generic(alphas, pt))
            assert np.max(np.abs(u1 - u2)) < 1e-9

    def test_same_types_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            build_u_cascade(1, 1, [1.0, 0.0])

    def test_staircase_detection(self):
        pt = staircase(4, 2, 3)
        assert staircase_types(pt) == (2, 3)
        with pytest.raises(ValueError, match="staircase"):
            staircase_types([PauliString.from_label("ZI"),
                             PauliString.from_label("IZ")])


class TestCascadeSolver:
    def test_unit_first(self):
        thetas = solve_cascade_angles([1.0, 0.0, 0.0], 1)
        assert thetas[0] == pytest.approx(0.0)
        assert thetas[1] == 0.0

    def test_all_weight_on_last(self):
        thetas = solve_cascade_angles([0.0, 0.0, 0.0, 1.0], 1)
        assert all(t == pytest.approx(math.pi) for t in thetas)

    def test_round_trip_random(self):
        rng = np.random.default_rng(11)
        for mu in (1, -1):
            for _ in range(100):
                alphas = normalized(rng, 6)
                thetas = solve_cascade_angles(alphas, mu)
                back = cascade_coefficients(thetas, mu)
                assert np.max(np.abs(back - alphas)) < 1e-10

    def test_negative_final_sign_handled(self):
        alphas = np.array([0.0, 0.0, -1.0])
        thetas = solve_cascade_angles(alphas, 1)
        assert np.max(np.abs(cascade_coefficients(thetas, 1) - alphas)) < 1e-12

    def test_norm_checked(self):
        with pytest.raises(ValueError, match="normalized"):
            solve_cascade_angles([1.0, 1.0], 1)


class TestUnitaryPlan:
    def test_generic_plan(self):
        pt = staircase(3, 1, 3)
        plan = UnitaryPlan.generic([0.6, 0.0, 0.8], pt)
        assert plan.form == "generic"
        u = to_dense_unitary(plan.to_circuit())
        assert np.max(np.abs(u - dense_target([0.6, 0.0, 0.8], pt))) < 1e-9

    def test_cascade_plan(self):
        pt = staircase(3, 1, 3)
        plan = UnitaryPlan.cascade([0.6, 0.0, 0.8], pt)
        assert plan.cascade_types == (1, 3)
        u = to_dense_unitary(plan.to_circuit())
        assert np.max(np.abs(u - dense_target([0.6, 0.0, 0.8], pt))) < 1e-9
