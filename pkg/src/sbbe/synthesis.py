"""Circuits for the unitary U = sum_k alpha_k P~_k over anti-commuting strings.

Two constructions are provided. The generic one is a palindromic product of
2m-1 Pauli exponentials

    U' = E_0 ... E_{m-2} E_{m-1} E_{m-2} ... E_0,   E_j = exp(i theta_j P~_j / 2),

whose expansion telescopes: wrapping E_j around an inner combination turns
its identity component c into c cos(theta_j) I + c sin(theta_j) P~_j and
leaves the other components alone. Solving the resulting triangular system
gives theta_j = arcsin(alpha_j / sqrt(sum_{k<=j} alpha_k^2)) for j < m-1 and
theta_{m-1} = 2 arcsin(alpha_{m-1}); the identity residue then vanishes
through cos(theta_j0) = 0 at the first nonzero coefficient, and U' = i U, so
a global phase of -pi/2 makes the circuit equal U exactly.

The cascade construction targets the staircase family
P~_k = (prod_{i<k} sigma_i^(a)) sigma_k^(b) with m = n. It nests two-qubit
gates C_i(theta) = P+_i + P-_i R_b(theta) (projectors onto the sigma^(c)
eigenspaces of qubit i, rotation on qubit i+1) inward, applies sigma^(b) on
qubit 0, and mirrors outward with negated angles; the realized coefficients
follow alpha_k = mu^k (prod_{i<k} sin(theta_i/2)) cos(theta_k/2) with the
final term carrying no cosine, where mu = -i gamma(c, b) is +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliString, commutes, pauli_mul

NORM_TOL = 1e-12
_ZERO = 1e-14


def _check_anticommuting(ptildes) -> None:
    for i in range(len(ptildes)):
        if not ptildes[i].is_canonical:
            raise ValueError(f"string {i} is not in canonical form")
        for j in range(i + 1, len(ptildes)):
            if commutes(ptildes[i], ptildes[j]) == 0:
                raise ValueError(f"strings {i} and {j} commute; "
                                 "the combination is not unitary")


def _check_normalized(alphas) -> None:
    norm2 = float(np.dot(alphas, alphas))
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"coefficients not normalized: sum of squares {norm2!r}")


def compute_generic_angles(alphas) -> list[float]:
    """Rotation angles of the palindromic product, prefix-norm form."""
    alphas = np.asarray(alphas, dtype=float)
    _check_normalized(alphas)
    m = len(alphas)
    thetas = []
    acc = 0.0
    for k in range(m - 1):
        acc += alphas[k] * alphas[k]
        norm = math.sqrt(acc)
        if norm < _ZERO:
            if abs(alphas[k]) > _ZERO:
                raise ValueError(f"vanishing prefix norm at index {k}")
            thetas.append(0.0)
        else:
            thetas.append(math.asin(max(-1.0, min(1.0, alphas[k] / norm))))
    thetas.append(2.0 * math.asin(max(-1.0, min(1.0, float(alphas[m - 1])))))
    return thetas


def build_u_generic(alphas, ptildes) -> Circuit:
    """Palindromic product of 2m-1 Pauli exponentials equal to the sum."""
    alphas = np.asarray(alphas, dtype=float)
    if len(alphas) != len(ptildes):
        raise ValueError("coefficient / string count mismatch")
    _check_anticommuting(ptildes)
    thetas = compute_generic_angles(alphas)
    m = len(alphas)
    n = ptildes[0].n
    circ = Circuit(n)
    order = list(range(m)) + list(range(m - 2, -1, -1))
    for j in order:
        if abs(thetas[j]) > _ZERO:
            circ.pauli_exp(ptildes[j], thetas[j])
    circ.gphase(-math.pi / 2)
    return circ


# ---------------------------------------------------------------------------
# cascade construction for staircase strings
# ---------------------------------------------------------------------------

def cascade_mu(a_type: int, b_type: int) -> int:
    """mu = -i gamma(c, b) for the complementary type c; always +-1."""
    if a_type == b_type or not {a_type, b_type} <= {1, 2, 3}:
        raise ValueError("cascade types must be two distinct Paulis in {1,2,3}")
    c_type = ({1, 2, 3} - {a_type, b_type}).pop()
    g = pauli_mul(PauliString.single(1, 0, c_type),
                  PauliString.single(1, 0, b_type)).phase_exp
    return 1 if g == 1 else -1


def cascade_coefficients(thetas, mu: int) -> np.ndarray:
    """Forward coefficient law of the cascade circuit (m = len(thetas)+1)."""
    thetas = list(thetas)
    n = len(thetas) + 1
    out = []
    prefix = 1.0
    for k in range(n - 1):
        out.append((mu ** k) * prefix * math.cos(thetas[k] / 2))
        prefix *= math.sin(thetas[k] / 2)
    out.append((mu ** (n - 1)) * prefix)
    return np.array(out)


def solve_cascade_angles(alphas, mu: int) -> list[float]:
    """Invert the cascade coefficient law; round-trips within 1e-10."""
    alphas = np.asarray(alphas, dtype=float)
    _check_normalized(alphas)
    m = len(alphas)
    if m < 2:
        return []
    thetas = []
    prefix = 1.0
    for k in range(m - 1):
        if abs(prefix) < _ZERO:
            if abs(alphas[k]) > 1e-10:
                raise ValueError(
                    f"coefficient {k} unreachable: earlier angles exhausted "
                    "the available amplitude")
            thetas.append(0.0)
            continue
        ratio = alphas[k] / ((mu ** k) * prefix)
        if abs(ratio) > 1.0 + 1e-9:
            raise ValueError(f"coefficient {k} unreachable: |{ratio}| > 1")
        thetas.append(2.0 * math.acos(max(-1.0, min(1.0, ratio))))
        prefix *= math.sin(thetas[-1] / 2)
    want = float(alphas[m - 1])
    have = (mu ** (m - 1)) * prefix
    if abs(want - have) > 1e-10:
        if abs(want + have) <= 1e-10:
            thetas[m - 2] = -thetas[m - 2]
        else:
            raise ValueError("final coefficient unreachable")
    forward = cascade_coefficients(thetas, mu)
    if float(np.max(np.abs(forward - alphas))) > 1e-10:
        raise ValueError("cascade angle solve failed the round-trip check")
    return thetas


_CTRL_BASIS_IN = {1: ("H",), 2: ("SDG", "H"), 3: ()}
_CTRL_BASIS_OUT = {1: ("H",), 2: ("H", "S"), 3: ()}
_ROT_KIND = {1: "RX", 2: "RY", 3: "RZ"}


def _cascade_gate(circ: Circuit, i: int, theta: float, c_type: int,
                  b_type: int) -> None:
    """Rotation of qubit i+1 conditioned on the sigma^(c) eigenspace of i.

    For c = Z this is a plain controlled sigma^(b) rotation; otherwise the
    control is conjugated into the computational basis.
    """
    for kind in _CTRL_BASIS_IN[c_type]:
        circ.add(Gate(kind, (i,)))
    circ.mc(_ROT_KIND[b_type], i + 1, ((i, 1),), angle=theta)
    for kind in _CTRL_BASIS_OUT[c_type]:
        circ.add(Gate(kind, (i,)))


def build_u_cascade(a_type: int, b_type: int, alphas) -> Circuit:
    """Nested-gate circuit for the staircase family, m = n = len(alphas)."""
    alphas = np.asarray(alphas, dtype=float)
    n = len(alphas)
    mu = cascade_mu(a_type, b_type)
    c_type = ({1, 2, 3} - {a_type, b_type}).pop()
    thetas = solve_cascade_angles(alphas, mu)
    circ = Circuit(n)
    for i in range(n - 2, -1, -1):
        _cascade_gate(circ, i, thetas[i], c_type, b_type)
    circ.add(Gate("XYZ"[b_type - 1], (0,)))
    for i in range(n - 1):
        _cascade_gate(circ, i, -thetas[i], c_type, b_type)
    return circ


def staircase_types(ptildes) -> tuple[int, int]:
    """Detect (a_type, b_type) when the strings are exactly the staircase
    family; raises ValueError otherwise."""
    m = len(ptildes)
    n = ptildes[0].n
    if m != n:
        raise ValueError("staircase form needs m = n")
    b_type = ptildes[0].type_at(0)
    if m == 1:
        if ptildes[0].weight != 1 or b_type == 0:
            raise ValueError("not a staircase set")
        return (1 if b_type != 1 else 2), b_type
    a_type = ptildes[1].type_at(0)
    if 0 in (a_type, b_type) or a_type == b_type:
        raise ValueError("not a staircase set")
    for k, ps in enumerate(ptildes):
        want = {q: a_type for q in range(k)}
        want[k] = b_type
        if ps != PauliString.from_types(n, want):
            raise ValueError(f"string {k} breaks the staircase form")
    return a_type, b_type


@dataclass(frozen=True)
class UnitaryPlan:
    """Resolved synthesis inputs: coefficients, strings, angles, and form."""

    alphas: tuple[float, ...]
    ptildes: tuple[PauliString, ...]
    thetas: tuple[float, ...]
    form: str  # "generic" or "cascade"
    cascade_types: tuple[int, int] | None = None
    mu: int | None = None

    @classmethod
    def generic(cls, alphas, ptildes) -> UnitaryPlan:
        alphas = tuple(float(a) for a in alphas)
        _check_anticommuting(ptildes)
        return cls(alphas, tuple(ptildes),
                   tuple(compute_generic_angles(alphas)), "generic")

    @classmethod
    def cascade(cls, alphas, ptildes) -> UnitaryPlan:
        alphas = tuple(float(a) for a in alphas)
        a_type, b_type = staircase_types(ptildes)
        mu = cascade_mu(a_type, b_type)
        return cls(alphas, tuple(ptildes),
                   tuple(solve_cascade_angles(alphas, mu)), "cascade",
                   (a_type, b_type), mu)

    def to_circuit(self) -> Circuit:
        if self.form == "generic":
            return build_u_generic(self.alphas, self.ptildes)
        return build_u_cascade(*self.cascade_types, self.alphas)
