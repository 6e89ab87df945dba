"""Ancilla schemes and stabilizer construction over GF(2).

Control-state conventions: an ancilla register of ``a`` wires holds integers
whose binary digits are read wire-first, i.e. wire j carries the bit of
weight 2**(a-1-j). Stabilizer i is tied to wire i, so its target commutation
pattern against the transformed strings is the parity of common bits between
2**(a-1-i) and each control state.

Two construction routes are provided. ``stabilizers_general`` solves
r_i = M_T^{-1} s_i over the transformation generators and requires the
unit-lower-triangular M_T of the canonical transform condition.
``solve_stabilizers`` generalizes it: whenever the plain system is
infeasible for a singular M_T it retargets the complemented pattern, which
is equivalent to XOR-shifting every control state by the affected wire bit;
the shift is returned so the correction layer can control on the effective
states. ``solve_stabilizers_direct`` drops the generator restriction and
solves each stabilizer as a symplectic linear system instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf2 import BinaryMatrix, bits_to_mask, mask_to_bits, solve_columns, solve_linear
from .pauli import (
    CommutationVector,
    PauliString,
    commutation_vector,
    commutes,
    pauli_mul,
)

SCHEME_KINDS = ("log", "gray", "linear", "linminus1", "custom")


def delta_parity(v: int, w: int) -> int:
    """Parity of the number of common 1-bits of two integers."""
    if v < 0 or w < 0:
        raise ValueError("negative integers have no bit pattern here")
    return (v & w).bit_count() & 1


def gray_code(k: int) -> int:
    """k-th Gray code; consecutive outputs differ in exactly one bit."""
    if k < 0:
        raise ValueError("Gray code index must be non-negative")
    return k ^ (k >> 1)


@dataclass(frozen=True)
class AncillaScheme:
    """Ancilla register size ``a`` and the control states v_k (all distinct)."""

    kind: str
    a: int
    v: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.a < 0:
            raise ValueError("negative ancilla count")
        if len(set(self.v)) != len(self.v):
            raise ValueError("control states must be distinct")
        if any(not 0 <= vk < (1 << self.a) for vk in self.v):
            raise ValueError(f"control state out of range for a={self.a}")

    @property
    def m(self) -> int:
        return len(self.v)

    @classmethod
    def log(cls, m: int) -> AncillaScheme:
        a = max(m - 1, 1).bit_length() if m > 1 else 0
        return cls("log", a, tuple(range(m)))

    @classmethod
    def log_gray(cls, m: int) -> AncillaScheme:
        a = max(m - 1, 1).bit_length() if m > 1 else 0
        return cls("gray", a, tuple(gray_code(k) for k in range(m)))

    @classmethod
    def linear(cls, m: int) -> AncillaScheme:
        return cls("linear", m, tuple(1 << k for k in range(m)))

    @classmethod
    def linear_minus_one(cls, m: int) -> AncillaScheme:
        a = m - 1
        v = tuple(((1 << k) - 1) << (a - k) for k in range(m))
        return cls("linminus1", a, v)

    @classmethod
    def custom(cls, a: int, v) -> AncillaScheme:
        return cls("custom", a, tuple(v))

    @classmethod
    def named(cls, kind: str, m: int) -> AncillaScheme:
        builders = {
            "log": cls.log,
            "gray": cls.log_gray,
            "linear": cls.linear,
            "linminus1": cls.linear_minus_one,
        }
        if kind not in builders:
            raise ValueError(f"scheme {kind!r} needs explicit control states")
        return builders[kind](m)

    def target_pattern(self, i: int) -> tuple[int, ...]:
        """Required commutation bits of stabilizer i against the m strings."""
        return tuple(delta_parity(1 << (self.a - 1 - i), vk) for vk in self.v)


def required_t_vectors(ps: list[PauliString]) -> list[CommutationVector]:
    """Canonical transform targets: entry (i, k) is 1 iff i <= k and the
    strings P_i, P_k commute."""
    m = len(ps)
    seen = set()
    for p in ps:
        key = (p.x, p.z)
        if key in seen:
            raise ValueError(f"duplicate string {p.label()}")
        seen.add(key)
    out = []
    for i in range(m):
        bits = tuple(
            1 if i <= k and commutes(ps[i], ps[k]) == 0 else 0 for k in range(m)
        )
        out.append(CommutationVector(bits))
    return out


def build_mt(t_vectors: list[CommutationVector]) -> BinaryMatrix:
    """Matrix with the commutation vectors as columns; must come out
    unit lower triangular, else the transform set is invalid."""
    m = len(t_vectors)
    if any(len(t) != m for t in t_vectors):
        raise ValueError("commutation vectors must have length m")
    mat = BinaryMatrix.from_columns([t.as_mask() for t in t_vectors], m)
    if not mat.is_unit_lower_triangular():
        raise ValueError("commutation vectors are not unit lower triangular")
    return mat


@dataclass(frozen=True)
class StabilizerSet:
    """Stabilizers plus, when they are generator products, the exponent
    vectors r_i over the transformation operators."""

    stabilizers: tuple[PauliString, ...]
    factorizations: tuple[tuple[int, ...], ...] | None

    @property
    def a(self) -> int:
        return len(self.stabilizers)

    def canonical(self) -> tuple[PauliString, ...]:
        return tuple(s.canonicalized() for s in self.stabilizers)


def _product(ts: list[PauliString], factor_bits, n: int) -> PauliString:
    acc = PauliString.identity(n)
    for k, bit in enumerate(factor_bits):
        if bit:
            acc = pauli_mul(acc, ts[k])
    return acc


def _check_pairwise_commuting(ts: list[PauliString]) -> None:
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if commutes(ts[i], ts[j]):
                raise ValueError(
                    f"transformation operators {i} and {j} anti-commute")


def stabilizers_general(
    ts: list[PauliString],
    t_vectors: list[CommutationVector],
    scheme: AncillaScheme,
) -> StabilizerSet:
    """Solve r_i = M_T^{-1} s_i and return S_i as generator products."""
    if scheme.m != len(ts):
        raise ValueError(f"scheme describes m={scheme.m}, got {len(ts)} operators")
    _check_pairwise_commuting(ts)
    n = ts[0].n if ts else 1
    if scheme.a == 0:
        return StabilizerSet((), ())
    mt_inv = build_mt(t_vectors).invert()
    stabs, facts = [], []
    for i in range(scheme.a):
        s_mask = bits_to_mask(scheme.target_pattern(i))
        r_mask = mt_inv.matvec(s_mask)
        bits = mask_to_bits(r_mask, scheme.m)
        stabs.append(_product(ts, bits, n))
        facts.append(bits)
    return StabilizerSet(tuple(stabs), tuple(facts))


def closed_form_factorizations(scheme: AncillaScheme) -> list[tuple[int, ...]]:
    """Exponent vectors r_i for fully pairwise commuting strings.

    Named register layouts use their published index rules; anything else
    falls back to the bit rule r_i^(k) = parity(2^(a-1-i) & (v_{k-1} ^ v_k)).
    """
    m, a = scheme.m, scheme.a
    out = []
    if scheme.kind == "linear":
        for i in range(a):
            if i == 0:
                facts = {m - 1}
            else:
                facts = {m - i, m - i - 1}
            out.append(tuple(1 if k in facts else 0 for k in range(m)))
    elif scheme.kind == "log":
        for i in range(a):
            step = 1 << (a - 1 - i)
            out.append(tuple(
                1 if k >= 1 and k % step == 0 else 0 for k in range(m)))
    elif scheme.kind == "linminus1":
        for i in range(a):
            out.append(tuple(1 if k == i + 1 else 0 for k in range(m)))
    else:
        for i in range(a):
            wire = 1 << (a - 1 - i)
            bits = [delta_parity(wire, scheme.v[0])]
            for k in range(1, m):
                bits.append(delta_parity(wire, scheme.v[k - 1] ^ scheme.v[k]))
            out.append(tuple(bits))
    return out


def stabilizers_commuting_closed_form(
    ts: list[PauliString], scheme: AncillaScheme
) -> StabilizerSet:
    """Closed-form S_i for fully pairwise commuting underlying strings."""
    if scheme.m != len(ts):
        raise ValueError(f"scheme describes m={scheme.m}, got {len(ts)} operators")
    _check_pairwise_commuting(ts)
    n = ts[0].n if ts else 1
    facts = closed_form_factorizations(scheme)
    stabs = tuple(_product(ts, bits, n) for bits in facts)
    return StabilizerSet(stabs, tuple(facts))


def solve_stabilizers(
    ts: list[PauliString],
    t_vectors: list[CommutationVector],
    scheme: AncillaScheme,
) -> tuple[StabilizerSet, int]:
    """Generator-product stabilizers for a possibly singular M_T.

    Returns (stabilizer set, shift): the stabilizers satisfy the scheme's
    pattern for the control states v_k XOR shift. For an invertible M_T the
    shift is 0 and the result matches ``stabilizers_general``.
    """
    if scheme.m != len(ts):
        raise ValueError(f"scheme describes m={scheme.m}, got {len(ts)} operators")
    _check_pairwise_commuting(ts)
    n = ts[0].n if ts else 1
    m = scheme.m
    columns = [t.as_mask() for t in t_vectors]
    ones = (1 << m) - 1
    stabs, facts = [], []
    shift = 0
    for i in range(scheme.a):
        s_mask = bits_to_mask(scheme.target_pattern(i))
        r_mask = solve_columns(columns, s_mask, m)
        if r_mask is None:
            r_mask = solve_columns(columns, s_mask ^ ones, m)
            if r_mask is None:
                raise ValueError(
                    f"stabilizer {i} is not a generator product; "
                    "use the direct solver")
            shift |= 1 << (scheme.a - 1 - i)
        bits = mask_to_bits(r_mask, m)
        stabs.append(_product(ts, bits, n))
        facts.append(bits)
    return StabilizerSet(tuple(stabs), tuple(facts)), shift


def solve_stabilizers_direct(
    ptildes: list[PauliString], scheme: AncillaScheme
) -> StabilizerSet:
    """Solve each stabilizer as a symplectic GF(2) system against the
    transformed strings, with no generator-product restriction."""
    if scheme.m != len(ptildes):
        raise ValueError(
            f"scheme describes m={scheme.m}, got {len(ptildes)} strings")
    n = ptildes[0].n
    stabs = []
    for i in range(scheme.a):
        target = scheme.target_pattern(i)
        # unknown (x | z << n); anti-commutation parity is x.z_k + z.x_k
        rows = [p.z | (p.x << n) for p in ptildes]
        sol = solve_linear(rows, list(target), 2 * n)
        if sol is None:
            raise ValueError(
                f"no Pauli string realizes the pattern of stabilizer {i}; "
                "the transformed strings are linearly dependent")
        x = sol & ((1 << n) - 1)
        z = sol >> n
        stabs.append(PauliString(n, x, z))
    return StabilizerSet(tuple(stabs), None)


def find_transforms(ps: list[PauliString]) -> list[PauliString]:
    """Best-effort transform finder for the canonical condition.

    Solves each operator independently as a symplectic linear system against
    its required commutation vector, then rejects the set if the solutions
    are not mutually commuting.
    """
    targets = required_t_vectors(ps)
    n = ps[0].n
    found = []
    for i, tv in enumerate(targets):
        rows = [p.z | (p.x << n) for p in ps]
        sol = solve_linear(rows, list(tv.bits), 2 * n)
        if sol is None:
            raise ValueError(
                f"no Pauli string has the required commutation vector "
                f"for transform {i}")
        found.append(PauliString(n, sol & ((1 << n) - 1), sol >> n))
    for i in range(len(found)):
        for j in range(i + 1, len(found)):
            if commutes(found[i], found[j]):
                raise ValueError(
                    f"solved transforms {i} and {j} anti-commute; "
                    "provide transformation operators explicitly")
    return found


def format_factorizations(facts) -> str:
    """Render factorizations in the published table shape,
    e.g. "S_0 = T_2; S_1 = T_1 T_2"."""
    parts = []
    for i, bits in enumerate(facts):
        factors = [f"T_{k}" for k, b in enumerate(bits) if b]
        rhs = " ".join(factors) if factors else "I"
        parts.append(f"S_{i} = {rhs}")
    return "; ".join(parts)


def stabilizer_table_line(kind: str, m: int) -> str:
    """One table row for a named scheme, assuming fully commuting strings."""
    scheme = AncillaScheme.named(kind, m)
    return format_factorizations(closed_form_factorizations(scheme))
