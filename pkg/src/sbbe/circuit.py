"""Gate-level circuit IR, lowering to {single-qubit, CX}, and resource counts.

Gates are stored flat: every gate has a base ``kind`` plus an optional tuple
of (qubit, polarity) controls, so a CX is an X with one positive control and
a multi-controlled gate is any kind with several controls. Payload-carrying
kinds:

    PAULI     controlled application of a phase-tracked Pauli string
    PAULIEXP  exp(i * angle/2 * P) for a Hermitian Pauli payload

``decompose`` lowers everything to single-qubit gates, CX, and GPHASE:
negative controls by X conjugation, controlled Pauli strings by basis
changes plus a CNOT fan-out around one multi-controlled X, Pauli
exponentials by basis changes, a CX ladder and one RZ, and multi-controlled
single-qubit gates by borrowed-qubit halving with a square-root recursion
at the bottom. Resource counts and depth are defined over the decomposed
gate set; depth schedules every gate under qubit disjointness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .pauli import PauliString

KINDS_1Q = ("H", "X", "Y", "Z", "S", "SDG", "RX", "RY", "RZ", "PHASE")
ANGLE_KINDS = ("RX", "RY", "RZ", "PHASE", "GPHASE", "PAULIEXP")
ALL_KINDS = KINDS_1Q + ("GPHASE", "PAULI", "PAULIEXP")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...] = ()
    controls: tuple[tuple[int, int], ...] = ()
    angle: float | None = None
    pauli: PauliString | None = None

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in KINDS_1Q and len(self.qubits) != 1:
            raise ValueError(f"{self.kind} acts on exactly one qubit")
        if self.kind == "GPHASE" and self.qubits:
            raise ValueError("GPHASE has no target qubits")
        if self.kind in ("PAULI", "PAULIEXP"):
            if self.pauli is None or self.pauli.n != len(self.qubits):
                raise ValueError(f"{self.kind} payload must match its qubits")
        if (self.kind in ANGLE_KINDS) != (self.angle is not None):
            raise ValueError(f"angle mismatch for {self.kind}")
        ctrl_qubits = [c for c, _ in self.controls]
        if len(set(ctrl_qubits)) != len(ctrl_qubits):
            raise ValueError("duplicate control qubits")
        if set(ctrl_qubits) & set(self.qubits):
            raise ValueError("control and target sets must be disjoint")
        if any(p not in (0, 1) for _, p in self.controls):
            raise ValueError("control polarity must be 0 or 1")

    @property
    def touched(self) -> tuple[int, ...]:
        return self.qubits + tuple(c for c, _ in self.controls)


class Circuit:
    """Ordered gate list over a system register followed by ancillas.

    Built by appending; treated as immutable once handed to the simulator
    or the lowering pass.
    """

    def __init__(self, n_sys: int, n_anc: int = 0, gates=None):
        if n_sys < 0 or n_anc < 0 or n_sys + n_anc < 1:
            raise ValueError("bad register sizes")
        self.n_sys = n_sys
        self.n_anc = n_anc
        self.gates: list[Gate] = list(gates) if gates else []

    @property
    def n_total(self) -> int:
        return self.n_sys + self.n_anc

    def add(self, gate: Gate) -> Circuit:
        if any(q < 0 or q >= self.n_total for q in gate.touched):
            raise ValueError(f"gate touches qubits outside 0..{self.n_total - 1}")
        self.gates.append(gate)
        return self

    # -- append helpers ------------------------------------------------------

    def h(self, q): return self.add(Gate("H", (q,)))
    def x(self, q): return self.add(Gate("X", (q,)))
    def y(self, q): return self.add(Gate("Y", (q,)))
    def z(self, q): return self.add(Gate("Z", (q,)))
    def s(self, q): return self.add(Gate("S", (q,)))
    def sdg(self, q): return self.add(Gate("SDG", (q,)))
    def rx(self, q, theta): return self.add(Gate("RX", (q,), angle=float(theta)))
    def ry(self, q, theta): return self.add(Gate("RY", (q,), angle=float(theta)))
    def rz(self, q, theta): return self.add(Gate("RZ", (q,), angle=float(theta)))
    def p(self, q, phi): return self.add(Gate("PHASE", (q,), angle=float(phi)))
    def gphase(self, phi): return self.add(Gate("GPHASE", angle=float(phi)))
    def cx(self, c, t): return self.add(Gate("X", (t,), ((c, 1),)))

    def mc(self, kind, target, controls, angle=None):
        return self.add(Gate(kind, (target,), tuple(controls),
                             None if angle is None else float(angle)))

    def pauli_gate(self, ps: PauliString, qubits=None, controls=()):
        qubits = tuple(qubits) if qubits is not None else tuple(range(ps.n))
        return self.add(Gate("PAULI", qubits, tuple(controls), pauli=ps))

    def pauli_exp(self, ps: PauliString, theta, qubits=None, controls=()):
        qubits = tuple(qubits) if qubits is not None else tuple(range(ps.n))
        return self.add(Gate("PAULIEXP", qubits, tuple(controls),
                             angle=float(theta), pauli=ps))

    def copy(self) -> Circuit:
        return Circuit(self.n_sys, self.n_anc, self.gates)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class ResourceReport:
    two_qubit_count: int
    depth: int
    total_gates: int
    ancilla_count: int


# ---------------------------------------------------------------------------
# elementary matrices and single-qubit decompositions
# ---------------------------------------------------------------------------

def gate_matrix(kind: str, angle: float | None = None) -> np.ndarray:
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if kind == "Z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if kind == "S":
        return np.array([[1, 0], [0, 1j]], dtype=complex)
    if kind == "SDG":
        return np.array([[1, 0], [0, -1j]], dtype=complex)
    if kind == "RX":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array([[np.exp(-1j * angle / 2), 0],
                         [0, np.exp(1j * angle / 2)]], dtype=complex)
    if kind == "PHASE":
        return np.array([[1, 0], [0, np.exp(1j * angle)]], dtype=complex)
    raise ValueError(f"no matrix for kind {kind!r}")


def _zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """Return (alpha, beta, gamma, delta) with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = 0.5 * np.angle(det)
    v = u * np.exp(-1j * alpha)
    gamma = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(v[0, 0]) > 1e-12 and abs(v[1, 0]) > 1e-12:
        plus = -2.0 * np.angle(v[0, 0])
        minus = 2.0 * np.angle(v[1, 0])
        beta = (plus + minus) / 2.0
        delta = (plus - minus) / 2.0
    elif abs(v[0, 0]) > 1e-12:
        beta = -2.0 * np.angle(v[0, 0])
        delta = 0.0
    else:
        beta = 2.0 * np.angle(v[1, 0])
        delta = 0.0
    return float(alpha), float(beta), float(gamma), float(delta)


def _sqrt_unitary(u: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 unitary via eigendecomposition."""
    vals, vecs = np.linalg.eig(u)
    roots = np.exp(0.5j * np.angle(vals))
    return (vecs * roots) @ np.linalg.inv(vecs)


def _emit_1q_unitary(u: np.ndarray, target: int, out: list[Gate]) -> None:
    alpha, beta, gamma, delta = _zyz_angles(u)
    if abs(delta) > 1e-12:
        out.append(Gate("RZ", (target,), angle=delta))
    if abs(gamma) > 1e-12:
        out.append(Gate("RY", (target,), angle=gamma))
    if abs(beta) > 1e-12:
        out.append(Gate("RZ", (target,), angle=beta))
    if abs(alpha) > 1e-12:
        out.append(Gate("GPHASE", angle=alpha))


def _emit_cu(u: np.ndarray, control: int, target: int, out: list[Gate]) -> None:
    """Controlled 2x2 unitary via the ZYZ ABC network, two CX gates."""
    alpha, beta, gamma, delta = _zyz_angles(u)
    out.append(Gate("RZ", (target,), angle=(delta - beta) / 2))
    out.append(Gate("X", (target,), ((control, 1),)))
    out.append(Gate("RZ", (target,), angle=-(delta + beta) / 2))
    out.append(Gate("RY", (target,), angle=-gamma / 2))
    out.append(Gate("X", (target,), ((control, 1),)))
    out.append(Gate("RY", (target,), angle=gamma / 2))
    out.append(Gate("RZ", (target,), angle=beta))
    if abs(alpha) > 1e-12:
        out.append(Gate("PHASE", (control,), angle=alpha))


def _emit_toffoli(c1: int, c2: int, t: int, out: list[Gate]) -> None:
    """Standard six-CX Toffoli network."""
    T, Tdg = math.pi / 4, -math.pi / 4
    out.append(Gate("H", (t,)))
    out.append(Gate("X", (t,), ((c2, 1),)))
    out.append(Gate("PHASE", (t,), angle=Tdg))
    out.append(Gate("X", (t,), ((c1, 1),)))
    out.append(Gate("PHASE", (t,), angle=T))
    out.append(Gate("X", (t,), ((c2, 1),)))
    out.append(Gate("PHASE", (t,), angle=Tdg))
    out.append(Gate("X", (t,), ((c1, 1),)))
    out.append(Gate("PHASE", (t,), angle=T))
    out.append(Gate("PHASE", (c2,), angle=T))
    out.append(Gate("X", (c2,), ((c1, 1),)))
    out.append(Gate("H", (t,)))
    out.append(Gate("PHASE", (c1,), angle=T))
    out.append(Gate("PHASE", (c2,), angle=Tdg))
    out.append(Gate("X", (c2,), ((c1, 1),)))


def _emit_mcx(controls: list[int], target: int, spares: list[int],
              out: list[Gate]) -> None:
    """Multi-controlled X, positive controls only.

    With a borrowed qubit available the gate is halved into the V W V W
    pattern (the borrow need not be clean); without one it falls back to the
    square-root recursion, which frees the target as a borrow one level down.
    """
    k = len(controls)
    if k == 0:
        out.append(Gate("X", (target,)))
        return
    if k == 1:
        out.append(Gate("X", (target,), ((controls[0], 1),)))
        return
    if k == 2:
        _emit_toffoli(controls[0], controls[1], target, out)
        return
    if spares:
        borrow = spares[0]
        half = (k + 1) // 2
        first, second = controls[:half], controls[half:]
        v_spares = second + [target] + spares[1:]
        w_spares = first + spares[1:]
        for _ in range(2):
            _emit_mcx(first, borrow, v_spares, out)
            _emit_mcx(second + [borrow], target, w_spares, out)
        return
    _emit_mc_unitary(gate_matrix("X"), controls, target, spares, out)


def _emit_mc_unitary(u: np.ndarray, controls: list[int], target: int,
                     spares: list[int], out: list[Gate]) -> None:
    """Multi-controlled 2x2 unitary via the square-root recursion."""
    k = len(controls)
    if k == 0:
        _emit_1q_unitary(u, target, out)
        return
    if k == 1:
        _emit_cu(u, controls[0], target, out)
        return
    v = _sqrt_unitary(u)
    last, rest = controls[-1], controls[:-1]
    _emit_cu(v, last, target, out)
    _emit_mcx(rest, last, [target] + spares, out)
    _emit_cu(v.conj().T, last, target, out)
    _emit_mcx(rest, last, [target] + spares, out)
    _emit_mc_unitary(v, rest, target, [last] + spares, out)


# ---------------------------------------------------------------------------
# fan-out and payload lowering
# ---------------------------------------------------------------------------

def _fanout_gates(controls: tuple[tuple[int, int], ...], targets: list[int],
                  spares: list[int], out: list[Gate]) -> None:
    """Multi-target controlled X: CX chain in, one controlled X, chain out.

    Controls must already be positive-polarity. The tally is 2(t-1) chain
    CX gates around a single c-controlled X.
    """
    w = len(targets)
    for j in range(w - 2, -1, -1):
        out.append(Gate("X", (targets[j + 1],), ((targets[j], 1),)))
    center_controls = [c for c, _ in controls]
    _emit_mcx(center_controls, targets[0], spares, out)
    for j in range(w - 1):
        out.append(Gate("X", (targets[j + 1],), ((targets[j], 1),)))


def cnot_fanout(n_total: int, controls, targets) -> Circuit:
    """Standalone fan-out circuit for a multi-target controlled X.

    ``controls`` is a (qubit, polarity) register-state condition; ``targets``
    are the X targets. The central controlled X is left multi-controlled;
    ``decompose`` lowers it further if needed.
    """
    controls = tuple(controls)
    targets = list(targets)
    if not targets:
        raise ValueError("fan-out needs at least one target")
    if set(targets) & {c for c, _ in controls}:
        raise ValueError("targets overlap the control register")
    if len(set(targets)) != len(targets):
        raise ValueError("duplicate fan-out targets")
    circ = Circuit(n_total)
    out: list[Gate] = []
    neg = [c for c, pol in controls if pol == 0]
    for q in neg:
        out.append(Gate("X", (q,)))
    w = len(targets)
    for j in range(w - 2, -1, -1):
        out.append(Gate("X", (targets[j + 1],), ((targets[j], 1),)))
    if controls:
        out.append(Gate("X", (targets[0],),
                        tuple((c, 1) for c, _ in controls)))
    else:
        out.append(Gate("X", (targets[0],)))
    for j in range(w - 1):
        out.append(Gate("X", (targets[j + 1],), ((targets[j], 1),)))
    for q in neg:
        out.append(Gate("X", (q,)))
    for g in out:
        circ.add(g)
    return circ


def _controlled_phase(controls: tuple[tuple[int, int], ...], phi: float,
                      spares: list[int], out: list[Gate]) -> None:
    """Phase e^{i phi} applied when the control condition holds."""
    if abs(phi) < 1e-15:
        return
    if not controls:
        out.append(Gate("GPHASE", angle=phi))
        return
    (q, pol), rest = controls[-1], controls[:-1]
    inner: list[Gate] = []
    _lower_gate(Gate("PHASE", (q,), rest, angle=phi), spares, inner)
    if pol == 0:
        out.append(Gate("X", (q,)))
        out.extend(inner)
        out.append(Gate("X", (q,)))
    else:
        out.extend(inner)


# time-ordered basis changes mapping each letter to the fan-out X basis
_TO_X_BASIS = {1: (), 2: ("SDG",), 3: ("H",)}
_FROM_X_BASIS = {1: (), 2: ("S",), 3: ("H",)}
# and to the exponential's Z basis
_TO_Z_BASIS = {1: ("H",), 2: ("SDG", "H"), 3: ()}
_FROM_Z_BASIS = {1: ("H",), 2: ("H", "S"), 3: ()}


def _lower_pauli(gate: Gate, spares: list[int], out: list[Gate]) -> None:
    ps = gate.pauli
    support = [gate.qubits[i] for i in ps.support()]
    types = {gate.qubits[i]: ps.type_at(i) for i in ps.support()}
    if not support:
        _controlled_phase(gate.controls, ps.phase_exp * math.pi / 2, spares, out)
        return
    if not gate.controls:
        for q in support:
            out.append(Gate("XYZ"[types[q] - 1], (q,)))
        if ps.phase_exp:
            out.append(Gate("GPHASE", angle=ps.phase_exp * math.pi / 2))
        return
    neg = [c for c, pol in gate.controls if pol == 0]
    pos_controls = tuple((c, 1) for c, _ in gate.controls)
    for q in neg:
        out.append(Gate("X", (q,)))
    for q in support:
        for kind in _TO_X_BASIS[types[q]]:
            out.append(Gate(kind, (q,)))
    _fanout_gates(pos_controls, support, spares, out)
    for q in support:
        for kind in _FROM_X_BASIS[types[q]]:
            out.append(Gate(kind, (q,)))
    _controlled_phase(pos_controls, ps.phase_exp * math.pi / 2, spares, out)
    for q in neg:
        out.append(Gate("X", (q,)))


def _lower_pauli_exp(gate: Gate, spares: list[int], out: list[Gate]) -> None:
    ps = gate.pauli
    if ps.phase_exp % 2:
        raise ValueError("Pauli exponential payload must be Hermitian")
    theta = gate.angle if ps.phase_exp == 0 else -gate.angle
    support = [gate.qubits[i] for i in ps.support()]
    types = {gate.qubits[i]: ps.type_at(i) for i in ps.support()}
    if not support:
        _controlled_phase(gate.controls, theta / 2, spares, out)
        return
    for q in support:
        for kind in _TO_Z_BASIS[types[q]]:
            out.append(Gate(kind, (q,)))
    for a, b in zip(support, support[1:]):
        out.append(Gate("X", (b,), ((a, 1),)))
    # exp(i theta Z/2) = RZ(-theta); controls attach to the rotation only,
    # the frame gates cancel when the condition fails
    _lower_gate(Gate("RZ", (support[-1],), gate.controls, angle=-theta),
                spares, out)
    for a, b in reversed(list(zip(support, support[1:]))):
        out.append(Gate("X", (b,), ((a, 1),)))
    for q in support:
        for kind in _FROM_Z_BASIS[types[q]]:
            out.append(Gate(kind, (q,)))


def _lower_gate(gate: Gate, spares: list[int], out: list[Gate]) -> None:
    if gate.kind == "PAULI":
        _lower_pauli(gate, spares, out)
        return
    if gate.kind == "PAULIEXP":
        _lower_pauli_exp(gate, spares, out)
        return
    if gate.kind == "GPHASE":
        _controlled_phase(gate.controls, gate.angle, spares, out)
        return
    if not gate.controls:
        out.append(gate)
        return
    neg = [c for c, pol in gate.controls if pol == 0]
    ctrls = [c for c, _ in gate.controls]
    for q in neg:
        out.append(Gate("X", (q,)))
    target = gate.qubits[0]
    if gate.kind == "X":
        _emit_mcx(ctrls, target, spares, out)
    elif len(ctrls) == 1 and gate.kind == "Z":
        out.append(Gate("H", (target,)))
        out.append(Gate("X", (target,), ((ctrls[0], 1),)))
        out.append(Gate("H", (target,)))
    elif len(ctrls) == 1 and gate.kind in ("RZ", "RY"):
        half = gate.angle / 2
        out.append(Gate(gate.kind, (target,), angle=half))
        out.append(Gate("X", (target,), ((ctrls[0], 1),)))
        out.append(Gate(gate.kind, (target,), angle=-half))
        out.append(Gate("X", (target,), ((ctrls[0], 1),)))
    elif len(ctrls) == 1 and gate.kind == "RX":
        out.append(Gate("H", (target,)))
        _lower_gate(Gate("RZ", (target,), ((ctrls[0], 1),), angle=gate.angle),
                    spares, out)
        out.append(Gate("H", (target,)))
    elif len(ctrls) == 1 and gate.kind == "PHASE":
        half = gate.angle / 2
        out.append(Gate("PHASE", (target,), angle=half))
        out.append(Gate("X", (target,), ((ctrls[0], 1),)))
        out.append(Gate("PHASE", (target,), angle=-half))
        out.append(Gate("X", (target,), ((ctrls[0], 1),)))
        out.append(Gate("PHASE", (ctrls[0],), angle=half))
    else:
        _emit_mc_unitary(gate_matrix(gate.kind, gate.angle), ctrls, target,
                         spares, out)
    for q in neg:
        out.append(Gate("X", (q,)))


_BASIC_OK = set(KINDS_1Q) | {"GPHASE"}


def _is_basic(gate: Gate) -> bool:
    if gate.kind == "X" and len(gate.controls) == 1 and gate.controls[0][1] == 1:
        return True
    return gate.kind in _BASIC_OK and not gate.controls


def decompose(circ: Circuit) -> Circuit:
    """Lower to single-qubit gates, CX, and GPHASE; unitary-preserving."""
    all_qubits = set(range(circ.n_total))
    out_gates: list[Gate] = []
    for gate in circ.gates:
        if _is_basic(gate):
            out_gates.append(gate)
            continue
        busy = set(gate.touched)
        spares = sorted(all_qubits - busy)
        lowered: list[Gate] = []
        _lower_gate(gate, spares, lowered)
        out_gates.extend(lowered)
    return Circuit(circ.n_sys, circ.n_anc, out_gates)


def depth(circ: Circuit) -> int:
    """Longest chain under qubit-disjointness scheduling, every gate counted."""
    frontier: dict[int, int] = {}
    best = 0
    for gate in circ.gates:
        qs = gate.touched
        if not qs:
            continue
        level = max((frontier.get(q, 0) for q in qs), default=0) + 1
        for q in qs:
            frontier[q] = level
        best = max(best, level)
    return best


def resources(circ: Circuit, ancilla_count: int | None = None) -> ResourceReport:
    """Decompose, then count two-qubit gates and schedule depth."""
    low = decompose(circ)
    two = sum(1 for g in low.gates if len(g.touched) >= 2)
    return ResourceReport(
        two_qubit_count=two,
        depth=depth(low),
        total_gates=len(low.gates),
        ancilla_count=circ.n_anc if ancilla_count is None else ancilla_count,
    )


# ---------------------------------------------------------------------------
# text export / import
# ---------------------------------------------------------------------------

_HEADER = "# sbbe circuit v1"


def _fmt_float(x: float) -> str:
    return repr(float(x))


def to_text(circ: Circuit) -> str:
    """Line-oriented export: one gate per line, controls after '@'."""
    lines = [_HEADER, f"qubits {circ.n_total} sys {circ.n_sys} anc {circ.n_anc}"]
    for g in circ.gates:
        if g.kind == "X" and len(g.controls) == 1 and g.controls[0][1] == 1 \
                and len(g.qubits) == 1:
            lines.append(f"CX {g.controls[0][0]} {g.qubits[0]}")
            continue
        parts = [g.kind]
        if g.angle is not None:
            parts.append(_fmt_float(g.angle))
        if g.pauli is not None:
            parts.append(g.pauli.label())
        parts.extend(str(q) for q in g.qubits)
        if g.controls:
            parts.append("@")
            parts.extend(f"{c}:{p}" for c, p in g.controls)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("missing circuit header line")
    hdr = lines[0].split()
    n_sys, n_anc = int(hdr[3]), int(hdr[5])
    circ = Circuit(n_sys, n_anc)
    for ln in lines[1:]:
        tokens = ln.split()
        kind = tokens[0]
        controls: tuple[tuple[int, int], ...] = ()
        if "@" in tokens:
            at = tokens.index("@")
            controls = tuple(
                (int(tok.split(":")[0]), int(tok.split(":")[1]))
                for tok in tokens[at + 1:])
            tokens = tokens[:at]
        if kind == "CX":
            circ.cx(int(tokens[1]), int(tokens[2]))
            continue
        angle = None
        pauli = None
        pos = 1
        if kind in ANGLE_KINDS:
            angle = float(tokens[pos])
            pos += 1
        if kind in ("PAULI", "PAULIEXP"):
            pauli = PauliString.from_label(tokens[pos])
            pos += 1
        qubits = tuple(int(t) for t in tokens[pos:])
        circ.add(Gate(kind, qubits, controls, angle, pauli))
    return circ


# ---------------------------------------------------------------------------
# OpenQASM 3 dialect (decomposed circuits)
# ---------------------------------------------------------------------------

_QASM_NAMES = {"H": "h", "X": "x", "Y": "y", "Z": "z", "S": "s", "SDG": "sdg",
               "RX": "rx", "RY": "ry", "RZ": "rz", "PHASE": "p"}
_QASM_KINDS = {v: k for k, v in _QASM_NAMES.items()}


def to_qasm(circ: Circuit) -> str:
    """OpenQASM 3 export; non-basic gates are lowered first."""
    low = circ if all(_is_basic(g) for g in circ.gates) else decompose(circ)
    lines = ["OPENQASM 3.0;", f"qubit[{low.n_total}] q;"]
    for g in low.gates:
        if g.kind == "X" and g.controls:
            lines.append(f"cx q[{g.controls[0][0]}], q[{g.qubits[0]}];")
        elif g.kind == "GPHASE":
            lines.append(f"gphase({_fmt_float(g.angle)});")
        elif g.angle is not None:
            lines.append(
                f"{_QASM_NAMES[g.kind]}({_fmt_float(g.angle)}) q[{g.qubits[0]}];")
        else:
            lines.append(f"{_QASM_NAMES[g.kind]} q[{g.qubits[0]}];")
    return "\n".join(lines) + "\n"


def from_qasm(text: str) -> Circuit:
    """Import of the emitted OpenQASM 3 subset."""
    circ: Circuit | None = None
    for raw in text.splitlines():
        ln = raw.strip().rstrip(";")
        if not ln or ln.startswith("OPENQASM") or ln.startswith("//"):
            continue
        if ln.startswith("qubit["):
            n = int(ln[len("qubit["):ln.index("]")])
            circ = Circuit(n)
            continue
        if circ is None:
            raise ValueError("qubit declaration must precede gates")
        if ln.startswith("gphase("):
            circ.gphase(float(ln[len("gphase("):ln.rindex(")")]))
            continue
        if ln.startswith("cx "):
            args = ln[3:].replace("q[", "").replace("]", "").split(",")
            circ.cx(int(args[0]), int(args[1]))
            continue
        name = ln.split("(")[0].split()[0]
        kind = _QASM_KINDS[name]
        if "(" in ln:
            angle = float(ln[ln.index("(") + 1:ln.index(")")])
            q = int(ln[ln.rindex("q[") + 2:ln.rindex("]")])
            circ.add(Gate(kind, (q,), angle=angle))
        else:
            q = int(ln[ln.rindex("q[") + 2:ln.rindex("]")])
            circ.add(Gate(kind, (q,)))
    if circ is None:
        raise ValueError("empty QASM input")
    return circ
