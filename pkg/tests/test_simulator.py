"""Simulator tests: statevector application, block extraction, verification."""

import numpy as np
import pytest

from sbbe.circuit import Circuit, Gate, decompose
from sbbe.encoder import assemble_sbbe, example_operator, make_plan
from sbbe.pauli import PauliString, WeightedPauliSum, to_dense
from sbbe.simulator import (
    BlockReport,
    apply,
    compute_block,
    extract_block,
    random_state,
    to_dense_unitary,
    verify_block_encoding,
)


def random_circuit(n, rng, gates=15):
    c = Circuit(n)
    for _ in range(gates):
        pick = rng.integers(0, 5)
        qs = list(rng.permutation(n))
        if pick == 0:
            c.h(qs[0])
        elif pick == 1:
            c.rz(qs[0], float(rng.uniform(-3, 3)))
        elif pick == 2:
            c.cx(qs[0], qs[1])
        elif pick == 3:
            c.pauli_exp(PauliString.from_types(
                n, {qs[0]: 1, qs[1]: 3}), float(rng.uniform(-2, 2)),
                qubits=tuple(range(n)))
        else:
            c.add(Gate("RY", (qs[0],), ((qs[1], int(rng.integers(0, 2))),),
                       float(rng.uniform(-2, 2))))
    return c


class TestApply:
    def test_empty_circuit(self):
        psi = random_state(2, 0)
        assert np.allclose(apply(Circuit(2), psi), psi)

    def test_hadamard_on_zero(self):
        out = apply(Circuit(1).h(0), np.array([1, 0], dtype=complex))
        assert np.allclose(out, np.array([1, 1]) / np.sqrt(2))

    def test_matches_dense_product(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            c = random_circuit(3, rng)
            psi = random_state(3, int(rng.integers(1 << 30)))
            assert np.allclose(apply(c, psi), to_dense_unitary(c) @ psi,
                               atol=1e-11)

    def test_statevector_and_dense_paths_agree_on_all_basis_states(self):
        rng = np.random.default_rng(19)
        c = random_circuit(3, rng)
        u = to_dense_unitary(c)
        for j in range(8):
            e = np.zeros(8, dtype=complex)
            e[j] = 1
            assert np.allclose(apply(c, e), u[:, j], atol=1e-11)

    def test_norm_preserved(self):
        rng = np.random.default_rng(4)
        c = random_circuit(4, rng, gates=30)
        psi = random_state(4, 1)
        assert np.linalg.norm(apply(c, psi)) == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            apply(Circuit(2), np.zeros(3, dtype=complex))


class TestDenseUnitary:
    def test_hadamard_matrix(self):
        u = to_dense_unitary(Circuit(1).h(0))
        assert np.allclose(u, np.array([[1, 1], [1, -1]]) / np.sqrt(2))

    def test_gate_then_inverse_is_identity(self):
        c = Circuit(2).ry(0, 0.7).cx(0, 1).cx(0, 1).ry(0, -0.7)
        assert np.max(np.abs(to_dense_unitary(c) - np.eye(4))) < 1e-12

    def test_global_phase_included(self):
        u = to_dense_unitary(Circuit(1, 0, [Gate("GPHASE", angle=np.pi / 3)]))
        assert np.allclose(u, np.exp(1j * np.pi / 3) * np.eye(2))

    def test_unitarity(self):
        rng = np.random.default_rng(77)
        c = random_circuit(4, rng, gates=40)
        u = to_dense_unitary(c)
        assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-10

    def test_cap(self):
        with pytest.raises(ValueError, match="cap"):
            to_dense_unitary(Circuit(5), dense_cap=4)


class TestExtractBlock:
    def test_no_ancilla_is_identity_operation(self):
        u = np.arange(16, dtype=complex).reshape(4, 4)
        assert np.allclose(extract_block(u, 2, 0), u)

    def test_hand_built_embedding(self):
        """U = A (x) |0><0| + B (x) |1><1| recovers A for one ancilla."""
        rng = np.random.default_rng(5)
        a_block, _ = np.linalg.qr(rng.standard_normal((2, 2))
                                  + 1j * rng.standard_normal((2, 2)))
        b_block, _ = np.linalg.qr(rng.standard_normal((2, 2))
                                  + 1j * rng.standard_normal((2, 2)))
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        u = np.kron(a_block, p0) + np.kron(b_block, p1)
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
        assert np.allclose(extract_block(u, 1, 1), a_block)

    def test_identity_circuit_two_ancillas(self):
        c = Circuit(1, 2)
        u = to_dense_unitary(c)
        assert np.allclose(extract_block(u, 1, 2), np.eye(2))

    def test_linearity(self):
        rng = np.random.default_rng(2)
        mats = [rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
                for _ in range(2)]
        p0 = np.diag([1.0, 0.0]).astype(complex)
        embeds = [np.kron(m, p0) for m in mats]
        got = extract_block(embeds[0] + embeds[1], 2, 1)
        assert np.allclose(got, mats[0] + mats[1])

    def test_compute_block_matches_dense_path(self):
        rng = np.random.default_rng(12)
        al = rng.standard_normal(3)
        al /= np.linalg.norm(al)
        op, tset = example_operator(1, 3, 3, al)
        circ = assemble_sbbe(make_plan(op, "log", tset))
        u = to_dense_unitary(circ)
        assert np.allclose(compute_block(circ),
                           extract_block(u, circ.n_sys, circ.n_anc),
                           atol=1e-12)

    def test_shape_check(self):
        with pytest.raises(ValueError, match="shape"):
            extract_block(np.eye(3), 1, 1)


class TestVerifyBlockEncoding:
    def test_single_term_trivial(self):
        op = WeightedPauliSum.from_labels([(1.0, "XZ")])
        circ = assemble_sbbe(make_plan(op, "log"))
        report = verify_block_encoding(circ, op, 1.0)
        assert report.passed
        assert report.max_abs_error < 1e-12
        assert report.success_probability_observed == pytest.approx(1.0)

    def test_example_pipeline(self):
        rng = np.random.default_rng(3)
        al = rng.standard_normal(4)
        al /= np.linalg.norm(al)
        op, tset = example_operator(1, 3, 4, al)
        plan = make_plan(op, "log", tset)
        report = verify_block_encoding(assemble_sbbe(plan), op, plan.lam)
        assert report.passed and report.max_abs_error < 1e-9
        psi = random_state(4, 7)
        norm = np.linalg.norm(op.dense() @ psi)
        assert report.success_probability_observed == pytest.approx(
            plan.lam ** 2 * norm ** 2, abs=1e-9)

    def test_wrong_gamma_sign_detected(self):
        """Flipping one correction phase shows up as ~2 |alpha_k| lam error."""
        rng = np.random.default_rng(6)
        al = rng.standard_normal(3)
        al /= np.linalg.norm(al)
        op, tset = example_operator(3, 3, 3, al)
        plan = make_plan(op, "log", tset)
        from dataclasses import replace
        bad_gammas = ((tset.gamma_exps[0] + 2) % 4,) + tset.gamma_exps[1:]
        bad_plan = replace(plan, transforms=replace(tset, gamma_exps=bad_gammas))
        report = verify_block_encoding(assemble_sbbe(bad_plan), op, plan.lam)
        assert not report.passed
        assert report.max_abs_error == pytest.approx(
            2 * abs(al[0]) * plan.lam, rel=1e-6)

    def test_report_json_round_trip(self):
        rep = BlockReport(1e-12, 2e-12, 0.5, 0.25, 0.25, True)
        assert BlockReport.from_json(rep.to_json()) == rep

    def test_cap_exceeded(self):
        op = WeightedPauliSum.from_labels([(1.0, "X" * 6)])
        circ = Circuit(6, 0)
        with pytest.raises(ValueError, match="dense cap"):
            verify_block_encoding(circ, op, 1.0, dense_cap=5)

    def test_decomposed_circuit_verifies_too(self):
        rng = np.random.default_rng(15)
        al = rng.standard_normal(3)
        al /= np.linalg.norm(al)
        op, tset = example_operator(2, 1, 3, al)
        plan = make_plan(op, "gray", tset)
        low = decompose(assemble_sbbe(plan))
        report = verify_block_encoding(low, op, plan.lam, tol=1e-10)
        assert report.passed
