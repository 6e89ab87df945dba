"""Circuit IR tests: lowering correctness (dense oracle), fan-out tallies,
resource counting, depth scheduling, and the export formats."""

import math

import numpy as np
import pytest

from sbbe.circuit import (
    Circuit,
    Gate,
    cnot_fanout,
    decompose,
    depth,
    from_qasm,
    from_text,
    gate_matrix,
    resources,
    to_qasm,
    to_text,
    _zyz_angles,
)
from sbbe.pauli import PauliString, to_dense
from sbbe.simulator import to_dense_unitary


def two_qubit_gates(circ):
    return [g for g in circ.gates if len(g.touched) >= 2]


def random_unitary(rng):
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, _ = np.linalg.qr(m)
    return q


def assert_same_unitary(c1, c2, atol=1e-10):
    u1, u2 = to_dense_unitary(c1), to_dense_unitary(c2)
    assert np.max(np.abs(u1 - u2)) < atol


class TestZyz:
    def test_factorization(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            u = random_unitary(rng)
            alpha, beta, gamma, delta = _zyz_angles(u)
            rebuilt = (np.exp(1j * alpha)
                       * gate_matrix("RZ", beta)
                       @ gate_matrix("RY", gamma)
                       @ gate_matrix("RZ", delta))
            assert np.max(np.abs(rebuilt - u)) < 1e-12


class TestLowering:
    def test_basic_circuit_is_fixed_point(self):
        c = Circuit(3).h(0).cx(0, 1).rz(2, 0.3).gphase(0.1)
        low = decompose(c)
        assert low.gates == c.gates

    @pytest.mark.parametrize("kind,angle", [
        ("H", None), ("X", None), ("Y", None), ("Z", None), ("S", None),
        ("SDG", None), ("RX", 0.7), ("RY", -1.2), ("RZ", 2.1), ("PHASE", 0.9),
    ])
    def test_single_controlled_gates(self, kind, angle):
        c = Circuit(2).add(Gate(kind, (1,), ((0, 1),), angle))
        assert_same_unitary(c, decompose(c))

    def test_negative_control(self):
        c = Circuit(2).add(Gate("RY", (1,), ((0, 0),), 0.8))
        assert_same_unitary(c, decompose(c))

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_mcx(self, k):
        c = Circuit(k + 1).add(Gate("X", (k,), tuple((i, 1) for i in range(k))))
        low = decompose(c)
        assert_same_unitary(c, low)
        assert all(len(g.touched) <= 2 for g in low.gates)

    def test_mcx_no_spares(self):
        # every qubit is busy: the square-root recursion path
        c = Circuit(4).add(Gate("X", (3,), ((0, 1), (1, 1), (2, 1))))
        assert_same_unitary(c, decompose(c))

    @pytest.mark.parametrize("k", [2, 3])
    def test_mc_rotation(self, k):
        ctrls = tuple((i, 1 if i % 2 else 0) for i in range(k))
        c = Circuit(k + 1).add(Gate("RY", (k,), ctrls, 1.1))
        assert_same_unitary(c, decompose(c))

    def test_controlled_pauli_string(self):
        payload = PauliString.from_label("iXZY")
        c = Circuit(4).pauli_gate(payload, (1, 2, 3), controls=((0, 1),))
        assert_same_unitary(c, decompose(c))

    def test_value_controlled_pauli(self):
        payload = PauliString.from_label("-YX")
        c = Circuit(4).pauli_gate(payload, (2, 3), controls=((0, 1), (1, 0)))
        assert_same_unitary(c, decompose(c))

    def test_plain_pauli_gate(self):
        payload = PauliString.from_label("-iZXY")
        c = Circuit(3).pauli_gate(payload)
        assert_same_unitary(c, decompose(c))

    def test_pauli_exponential(self):
        payload = PauliString.from_label("XYZ")
        c = Circuit(3).pauli_exp(payload, 0.77)
        low = decompose(c)
        assert_same_unitary(c, low)
        # weight-3 exponential: 2(w-1) = 4 CX
        assert len(two_qubit_gates(low)) == 4

    def test_controlled_pauli_exponential(self):
        payload = PauliString.from_label("ZZ")
        c = Circuit(3).pauli_exp(payload, -0.4, qubits=(1, 2),
                                 controls=((0, 0),))
        assert_same_unitary(c, decompose(c))

    def test_negative_payload_exponential(self):
        payload = PauliString.from_label("-XX")
        c = Circuit(2).pauli_exp(payload, 0.9)
        want = Circuit(2).pauli_exp(PauliString.from_label("XX"), -0.9)
        assert_same_unitary(c, want)
        assert_same_unitary(c, decompose(c))

    def test_controlled_gphase(self):
        c = Circuit(2).add(Gate("GPHASE", (), ((0, 1), (1, 0)), angle=0.6))
        assert_same_unitary(c, decompose(c))

    def test_random_soup_four_qubits(self):
        rng = np.random.default_rng(42)
        kinds = ["H", "X", "S", "RY", "RZ", "CX", "PAULI", "PAULIEXP", "MC"]
        for trial in range(10):
            c = Circuit(4)
            for _ in range(12):
                kind = kinds[rng.integers(0, len(kinds))]
                qs = list(rng.permutation(4))
                if kind == "CX":
                    c.cx(qs[0], qs[1])
                elif kind == "PAULI":
                    lbl = "".join("IXYZ"[rng.integers(0, 4)] for _ in range(2))
                    if lbl == "II":
                        lbl = "XI"
                    c.pauli_gate(PauliString.from_label(lbl), (qs[0], qs[1]),
                                 controls=((qs[2], int(rng.integers(0, 2))),))
                elif kind == "PAULIEXP":
                    lbl = "".join("IXYZ"[rng.integers(0, 4)] for _ in range(3))
                    c.pauli_exp(PauliString.from_label(lbl),
                                float(rng.uniform(-2, 2)),
                                qubits=(qs[0], qs[1], qs[2]))
                elif kind == "MC":
                    c.add(Gate("RY", (qs[0],),
                               ((qs[1], 1), (qs[2], 0)),
                               float(rng.uniform(-2, 2))))
                elif kind in ("RY", "RZ"):
                    c.add(Gate(kind, (qs[0],), angle=float(rng.uniform(-2, 2))))
                else:
                    c.add(Gate(kind, (qs[0],)))
            assert_same_unitary(c, decompose(c))


class TestFanout:
    def test_single_target(self):
        c = cnot_fanout(3, ((0, 1),), (1,))
        assert len(c.gates) == 1
        assert c.gates[0] == Gate("X", (1,), ((0, 1),))

    def test_three_targets_tally_and_unitary(self):
        c = cnot_fanout(4, ((0, 1),), (1, 2, 3))
        assert len(two_qubit_gates(c)) == 2 * (3 - 1) + 1
        want = Circuit(4)
        for t in (1, 2, 3):
            want.cx(0, t)
        assert_same_unitary(c, want)

    def test_four_targets_equals_shared_control_product(self):
        c = cnot_fanout(5, ((0, 1),), (1, 2, 3, 4))
        want = Circuit(5)
        for t in (1, 2, 3, 4):
            want.cx(0, t)
        assert_same_unitary(c, want)

    @pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
    def test_tally_formula(self, t):
        c = cnot_fanout(t + 1, ((0, 1),), tuple(range(1, t + 1)))
        assert len(two_qubit_gates(c)) == 2 * (t - 1) + 1

    def test_register_condition(self):
        c = cnot_fanout(5, ((0, 1), (1, 0)), (2, 3, 4))
        low = decompose(c)
        direct = Circuit(5)
        for t in (2, 3, 4):
            direct.add(Gate("X", (t,), ((0, 1), (1, 0))))
        assert_same_unitary(low, direct)

    def test_overlap_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            cnot_fanout(3, ((0, 1),), (0, 1))

    def test_controlled_two_x_payload_count(self):
        # one control, two targets: 2(2-1) chain CX + 1 controlled X
        payload = PauliString.from_label("XX")
        c = Circuit(3).pauli_gate(payload, (1, 2), controls=((0, 1),))
        low = decompose(c)
        assert len(two_qubit_gates(low)) == 3


class TestResources:
    def test_empty(self):
        rep = resources(Circuit(2, 1))
        assert (rep.two_qubit_count, rep.depth, rep.total_gates) == (0, 0, 0)
        assert rep.ancilla_count == 1

    def test_single_cx(self):
        rep = resources(Circuit(2).cx(0, 1))
        assert (rep.two_qubit_count, rep.depth) == (1, 1)

    def test_parallel_cx_depth_one(self):
        rep = resources(Circuit(4).cx(0, 1).cx(2, 3))
        assert (rep.two_qubit_count, rep.depth) == (2, 1)

    def test_depth_counts_single_qubit_gates(self):
        assert depth(Circuit(1).h(0).h(0).h(0)) == 3

    def test_depth_invariant_under_disjoint_reorder(self):
        c1 = Circuit(4).h(0).cx(2, 3).rz(1, 0.2).cx(0, 1)
        c2 = Circuit(4).rz(1, 0.2).h(0).cx(2, 3).cx(0, 1)
        assert depth(c1) == depth(c2)

    def test_gphase_does_not_affect_depth(self):
        assert depth(Circuit(1, 0, [Gate("GPHASE", angle=0.3)]).h(0)) == 1

    def test_deterministic(self):
        c = Circuit(3).h(0).cx(0, 1).pauli_exp(PauliString.from_label("XYZ"), 0.4)
        assert resources(c) == resources(c.copy())


class TestExport:
    def _sample(self):
        c = Circuit(3, 1)
        c.h(0).cx(0, 1).rz(2, -0.34)
        c.pauli_gate(PauliString.from_label("iXZ"), (1, 2), controls=((0, 0),))
        c.pauli_exp(PauliString.from_label("ZZ"), 0.5, qubits=(0, 3))
        c.gphase(-math.pi / 2)
        c.add(Gate("RY", (3,), ((1, 1), (2, 0)), 0.25))
        return c

    def test_text_round_trip(self):
        c = self._sample()
        c2 = from_text(to_text(c))
        assert c2.gates == c.gates
        assert (c2.n_sys, c2.n_anc) == (c.n_sys, c.n_anc)

    def test_text_header(self):
        txt = to_text(self._sample())
        assert txt.splitlines()[1] == "qubits 4 sys 3 anc 1"

    def test_qasm_round_trip_preserves_unitary(self):
        c = self._sample()
        c2 = from_qasm(to_qasm(c))
        u1 = to_dense_unitary(decompose(c))
        u2 = to_dense_unitary(c2)
        assert np.max(np.abs(u1 - u2)) < 1e-10

    def test_qasm_header(self):
        txt = to_qasm(Circuit(2).h(0))
        assert txt.startswith("OPENQASM 3.0;\nqubit[2] q;")


class TestGateValidation:
    def test_control_target_overlap(self):
        with pytest.raises(ValueError, match="disjoint"):
            Gate("X", (0,), ((0, 1),))

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown gate kind"):
            Gate("Q", (0,))

    def test_gate_outside_register(self):
        with pytest.raises(ValueError, match="outside"):
            Circuit(2).h(2)
