"""Dense statevector / unitary simulation, the ground-truth oracle.

States are complex vectors of length 2**n_total, basis index
b_0 b_1 ... b_{N-1} with qubit 0 as the most significant bit; the system
register occupies the leading (most significant) qubits, ancillas follow.
Internally arrays are reshaped to one axis per qubit plus a trailing batch
axis, so gates act by axis arithmetic; a controlled gate acts on the basic-
indexing subview selected by its control bits. Pauli payloads are applied
in one pass as a sign tensor times an axis-reversal permutation.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .circuit import Circuit, Gate, gate_matrix
from .pauli import DEFAULT_DENSE_CAP, PauliString, terms_dense

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


def _subview_sel(n_total: int, controls) -> tuple:
    sel: list = [slice(None)] * (n_total + 1)
    for q, pol in controls:
        sel[q] = pol
    return tuple(sel)


def _axis_after_controls(q: int, controls) -> int:
    return q - sum(1 for cq, _ in controls if cq < q)


def _apply_mat(sub: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(sub, axis, 0)
    out = np.tensordot(mat, moved, axes=([1], [0]))
    return np.moveaxis(out, 0, axis)


def _pauli_sign_tensor(ps: PauliString, axes: list[int], ndim: int) -> np.ndarray:
    """Broadcastable tensor of the per-basis phases of a Pauli payload."""
    scalar = _PHASES[ps.phase_exp]
    y_count = (ps.x & ps.z).bit_count()
    scalar *= _PHASES[y_count % 4]
    shape = [1] * ndim
    out = np.array(scalar, dtype=complex).reshape(shape)
    for i in range(ps.n):
        if (ps.z >> i) & 1:
            vec_shape = [1] * ndim
            vec_shape[axes[i]] = 2
            out = out * np.array([1, -1], dtype=complex).reshape(vec_shape)
    return out


def _apply_pauli(sub: np.ndarray, ps: PauliString, axes: list[int]) -> np.ndarray:
    out = sub * _pauli_sign_tensor(ps, axes, sub.ndim)
    flip = [slice(None)] * sub.ndim
    for i in range(ps.n):
        if (ps.x >> i) & 1:
            flip[axes[i]] = slice(None, None, -1)
    return np.ascontiguousarray(out[tuple(flip)])


def _apply_gate(tensor: np.ndarray, gate: Gate, n_total: int) -> None:
    sel = _subview_sel(n_total, gate.controls)
    sub = tensor[sel]
    if gate.kind == "GPHASE":
        tensor[sel] = sub * np.exp(1j * gate.angle)
        return
    if gate.kind == "PAULI":
        axes = [_axis_after_controls(q, gate.controls) for q in gate.qubits]
        tensor[sel] = _apply_pauli(sub, gate.pauli, axes)
        return
    if gate.kind == "PAULIEXP":
        if gate.pauli.phase_exp % 2:
            raise ValueError("Pauli exponential payload must be Hermitian")
        axes = [_axis_after_controls(q, gate.controls) for q in gate.qubits]
        c = np.cos(gate.angle / 2)
        s = np.sin(gate.angle / 2)
        tensor[sel] = c * sub + 1j * s * _apply_pauli(sub, gate.pauli, axes)
        return
    mat = gate_matrix(gate.kind, gate.angle)
    axis = _axis_after_controls(gate.qubits[0], gate.controls)
    tensor[sel] = _apply_mat(sub, mat, axis)


def _run(circ: Circuit, array: np.ndarray) -> np.ndarray:
    """Apply the circuit to a copy of a (2**N, batch) column-state array."""
    n = circ.n_total
    tensor = np.array(array, dtype=complex, copy=True, order="C")
    tensor = tensor.reshape((2,) * n + (-1,))
    for gate in circ.gates:
        _apply_gate(tensor, gate, n)
    return tensor.reshape(array.shape)


def apply(circ: Circuit, state: np.ndarray) -> np.ndarray:
    """Gate-by-gate statevector application."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (2 ** circ.n_total,):
        raise ValueError(
            f"state has dimension {state.shape}, circuit needs {2 ** circ.n_total}")
    return _run(circ, state.reshape(-1, 1)).reshape(-1)


def to_dense_unitary(circ: Circuit,
                     dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Ordered product of the gate embeddings, including global phases."""
    if circ.n_total > dense_cap:
        raise ValueError(
            f"n_total={circ.n_total} exceeds the dense cap {dense_cap}")
    dim = 2 ** circ.n_total
    return _run(circ, np.eye(dim, dtype=complex))


def extract_block(u: np.ndarray, n_sys: int, a: int) -> np.ndarray:
    """Sub-matrix <i|<0_anc| U |j>|0_anc> in the fixed register layout."""
    dim = 2 ** (n_sys + a)
    if u.shape != (dim, dim):
        raise ValueError(f"unitary has shape {u.shape}, expected {dim}x{dim}")
    step = 2 ** a
    return np.array(u[::step, ::step])


def compute_block(circ: Circuit,
                  dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Encoded block via batched statevectors, without the full unitary."""
    if circ.n_total > dense_cap:
        raise ValueError(
            f"n_total={circ.n_total} exceeds the dense cap {dense_cap}")
    n_sys, a = circ.n_sys, circ.n_anc
    dim, dsys = 2 ** (n_sys + a), 2 ** n_sys
    cols = np.zeros((dim, dsys), dtype=complex)
    cols[np.arange(dsys) * 2 ** a, np.arange(dsys)] = 1.0
    out = _run(circ, cols)
    return np.array(out[:: 2 ** a, :])


def random_state(n: int, seed) -> np.ndarray:
    """Normalized standard-normal complex amplitudes, seeded."""
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return psi / np.linalg.norm(psi)


@dataclass(frozen=True)
class BlockReport:
    max_abs_error: float
    frobenius_error: float
    lambda_used: float
    success_probability_observed: float
    success_probability_expected: float
    passed: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> BlockReport:
        return cls(**json.loads(text))


def verify_block_encoding(
    circ: Circuit,
    target,
    lam: float,
    tol: float = 1e-9,
    seed: int = 7,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> BlockReport:
    """Compare the encoded block with lam * target and check the all-zero
    ancilla probability on a pseudorandom state.

    ``target`` is a WeightedPauliSum, a (coefficient, PauliString) term list,
    or a dense matrix over the system register.
    """
    if circ.n_total > dense_cap:
        raise ValueError(
            f"n_total={circ.n_total} exceeds the dense cap {dense_cap}; "
            "verification needs the dense backend")
    n_sys, a = circ.n_sys, circ.n_anc
    if isinstance(target, np.ndarray):
        a_dense = target
    elif hasattr(target, "dense"):
        a_dense = target.dense(dense_cap)
    else:
        a_dense = terms_dense(target, dense_cap)
    block = compute_block(circ, dense_cap)
    diff = block - lam * a_dense
    max_abs = float(np.max(np.abs(diff)))
    frob = float(np.linalg.norm(diff))

    psi = random_state(n_sys, seed)
    full = np.zeros(2 ** (n_sys + a), dtype=complex)
    full[:: 2 ** a] = psi
    evolved = apply(circ, full)
    p_obs = float(np.sum(np.abs(evolved[:: 2 ** a]) ** 2))
    p_exp = float(lam ** 2 * np.linalg.norm(a_dense @ psi) ** 2)

    return BlockReport(
        max_abs_error=max_abs,
        frobenius_error=frob,
        lambda_used=float(lam),
        success_probability_observed=p_obs,
        success_probability_expected=p_exp,
        passed=bool(max_abs <= tol),
    )
