"""Phase-exact algebra of n-qubit Pauli strings.

A Pauli string is stored in symplectic form: two n-bit masks ``x`` and ``z``
(bit q belongs to qubit q) plus a global phase exponent ``phase_exp`` mod 4,
so that the operator equals

    i**phase_exp * (sigma_0 (x) sigma_1 (x) ... (x) sigma_{n-1})

with the per-qubit letter determined by the bit pair:

    (x, z) = (0, 0) -> I,  (1, 0) -> X,  (1, 1) -> Y,  (0, 1) -> Z.

Qubit 0 is the leftmost / most significant tensor factor; dense matrices and
text labels ("-iXYZI", index 0 = leftmost character) use that ordering
everywhere. Canonical form means ``phase_exp == 0``.

All values are immutable after construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

DEFAULT_DENSE_CAP = 12

TYPE_LABELS = "IXYZ"

# (x, z) bit pair per letter index 0..3
_XZ_OF_TYPE = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
_TYPE_OF_XZ = {v: k for k, v in _XZ_OF_TYPE.items()}

_SINGLE_DENSE = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

PHASE_VALUES = (1 + 0j, 1j, -1 + 0j, -1j)
_PHASE_PREFIXES = {"": 0, "+": 0, "+1": 0, "1": 0, "i": 1, "+i": 1,
                   "-": 2, "-1": 2, "-i": 3}
_PHASE_LABELS = {0: "", 1: "i", 2: "-", 3: "-i"}

_LABEL_RE = re.compile(r"^([+-]?(?:1|i)?)([IXYZ]+)$")


@dataclass(frozen=True)
class PauliString:
    """Phase-tracked n-qubit Pauli operator in symplectic (x, z) form."""

    n: int
    x: int = 0
    z: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        full = (1 << self.n) - 1
        if not (0 <= self.x <= full and 0 <= self.z <= full):
            raise ValueError("x/z bits exceed the qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, kind: int) -> PauliString:
        """Pauli of type ``kind`` in {1,2,3} on one qubit, identity elsewhere."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _XZ_OF_TYPE[kind]
        return cls(n, xb << qubit, zb << qubit)

    @classmethod
    def from_types(cls, n: int, types: dict[int, int]) -> PauliString:
        """Build from a qubit -> Pauli-type map (types 0..3)."""
        x = z = 0
        for q, t in types.items():
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            xb, zb = _XZ_OF_TYPE[t]
            x |= xb << q
            z |= zb << q
        return cls(n, x, z)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse text such as "XYZI" or "-iXZ" (optional phase prefix)."""
        m = _LABEL_RE.match(label.strip())
        if m is None:
            raise ValueError(f"not a Pauli label: {label!r}")
        prefix, letters = m.groups()
        phase = _PHASE_PREFIXES[prefix]
        x = z = 0
        for q, ch in enumerate(letters):
            xb, zb = _XZ_OF_TYPE[TYPE_LABELS.index(ch)]
            x |= xb << q
            z |= zb << q
        return cls(len(letters), x, z, phase)

    # -- views --------------------------------------------------------------

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.n))

    @property
    def phase(self) -> complex:
        return PHASE_VALUES[self.phase_exp]

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x | self.z).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def is_canonical(self) -> bool:
        return self.phase_exp == 0

    def type_at(self, qubit: int) -> int:
        return _TYPE_OF_XZ[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def types(self) -> tuple[int, ...]:
        return tuple(self.type_at(q) for q in range(self.n))

    def support(self) -> tuple[int, ...]:
        mask = self.x | self.z
        return tuple(q for q in range(self.n) if (mask >> q) & 1)

    def canonicalized(self) -> PauliString:
        """Same tensor factors with the global phase dropped."""
        if self.phase_exp == 0:
            return self
        return PauliString(self.n, self.x, self.z, 0)

    def with_phase_exp(self, phase_exp: int) -> PauliString:
        return PauliString(self.n, self.x, self.z, phase_exp)

    def label(self) -> str:
        letters = "".join(TYPE_LABELS[self.type_at(q)] for q in range(self.n))
        return _PHASE_LABELS[self.phase_exp] + letters

    def __str__(self) -> str:
        return self.label()

    def adjoint(self) -> PauliString:
        """Hermitian conjugate: flips the sign of an imaginary phase."""
        return PauliString(self.n, self.x, self.z, -self.phase_exp % 4)


def _product_phase_exp(p: PauliString, q: PauliString) -> int:
    """Phase exponent of the per-qubit letter products, mod 4.

    Cyclically ordered pairs (XY, YZ, ZX) contribute +1 each, anti-cyclic
    pairs -1; identical or identity factors contribute nothing.
    """
    full = (1 << p.n) - 1
    x1, z1, x2, z2 = p.x, p.z, q.x, q.z
    nx1, nz1 = x1 ^ full, z1 ^ full
    nx2, nz2 = x2 ^ full, z2 ^ full
    cyc = ((x1 & nz1 & x2 & z2).bit_count()        # X then Y
           + (x1 & z1 & nx2 & z2).bit_count()      # Y then Z
           + (nx1 & z1 & x2 & nz2).bit_count())    # Z then X
    acyc = ((x1 & z1 & x2 & nz2).bit_count()       # Y then X
            + (nx1 & z1 & x2 & z2).bit_count()     # Z then Y
            + (x1 & nz1 & nx2 & z2).bit_count())   # X then Z
    return (p.phase_exp + q.phase_exp + cyc - acyc) % 4


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    """Product pq with exact phase tracking."""
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, _product_phase_exp(p, q))


def commutes(p: PauliString, q: PauliString) -> int:
    """0 if pq = qp, 1 if pq = -qp (symplectic inner product parity)."""
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


@dataclass(frozen=True)
class CommutationVector:
    """Bit per reference operator: 1 iff it anti-commutes with that operator."""

    bits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, k: int) -> int:
        return self.bits[k]

    def as_mask(self) -> int:
        mask = 0
        for k, b in enumerate(self.bits):
            mask |= (b & 1) << k
        return mask


def commutation_vector(t: PauliString, ps: list[PauliString]) -> CommutationVector:
    return CommutationVector(tuple(commutes(t, p) for p in ps))


def conjugate(t: PauliString, p: PauliString) -> PauliString:
    """Three-fold product t p t; equals +-p whenever t is a Pauli string."""
    return pauli_mul(pauli_mul(t, p), t)


def to_dense(p: PauliString, dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Dense 2^n x 2^n matrix, qubit 0 as the leftmost Kronecker factor."""
    if p.n > dense_cap:
        raise ValueError(f"n={p.n} exceeds the dense cap {dense_cap}")
    out = np.array([[PHASE_VALUES[p.phase_exp]]], dtype=complex)
    for q in range(p.n):
        out = np.kron(out, _SINGLE_DENSE[p.type_at(q)])
    return out


NORM_TOL = 1e-12


@dataclass(frozen=True)
class WeightedPauliSum:
    """The operator A = sum_k alpha_k P_k with real normalized coefficients.

    Stored strings are canonical (phase_exp 0); a real sign carried by an
    input string is folded into its coefficient. At most 2n+1 terms, no
    duplicate strings, sum of squared coefficients 1 within 1e-12.
    """

    n: int
    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self):
        folded = []
        seen = set()
        for coef, ps in self.terms:
            if ps.n != self.n:
                raise ValueError(f"term {ps} has n={ps.n}, expected {self.n}")
            if ps.phase_exp in (1, 3):
                raise ValueError(
                    f"term {ps} carries an imaginary phase; coefficients are real")
            if ps.phase_exp == 2:
                coef, ps = -coef, ps.canonicalized()
            key = (ps.x, ps.z)
            if key in seen:
                raise ValueError(f"duplicate Pauli string {ps.label()}")
            seen.add(key)
            folded.append((float(coef), ps))
        if len(folded) > 2 * self.n + 1:
            raise ValueError(
                f"m={len(folded)} exceeds the 2n+1={2 * self.n + 1} bound")
        if not folded:
            raise ValueError("empty operator")
        norm2 = sum(c * c for c, _ in folded)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"coefficients not normalized: sum of squares {norm2!r}")
        object.__setattr__(self, "terms", tuple(folded))

    @classmethod
    def from_labels(cls, terms: list[tuple[float, str]]) -> WeightedPauliSum:
        strings = [(c, PauliString.from_label(s)) for c, s in terms]
        n = strings[0][1].n
        return cls(n, tuple(strings))

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms])

    @property
    def strings(self) -> tuple[PauliString, ...]:
        return tuple(p for _, p in self.terms)

    def dense(self, dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
        return terms_dense(self.terms, dense_cap)


def terms_dense(terms, dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Dense matrix of a plain (coefficient, PauliString) term list."""
    terms = list(terms)
    acc = to_dense(terms[0][1], dense_cap) * terms[0][0]
    for coef, ps in terms[1:]:
        acc = acc + coef * to_dense(ps, dense_cap)
    return acc
