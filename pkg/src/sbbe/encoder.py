"""Assembly of block-encoding circuits: the stabilizer-based encoder (SBBE),
an LCU baseline, the shared-structure combination circuit, and the worked
example families.

Transform bookkeeping. For each summand P_k a transformation operator T_k is
applied; the product T_k P_k equals gamma_k times a canonical string P~_k
with gamma_k in {1, i, -1, -i}. The correction layer applies gamma_k T_k
controlled on the ancilla state tagged to branch k, which restores P_k
exactly (T_k squares to the identity, so gamma_k T_k P~_k = P_k).

A transform set is valid when every transformed pair anti-commutes, which
holds iff for each pair (i, k)

    t_i(k) + t_k(i) + [T_i, T_k anti] + [P_i, P_k anti]  is odd,

with t_i the commutation vector of T_i against the P's. The canonical
sufficient family additionally fixes t_i(k) = 1 exactly when i <= k and
P_i, P_k commute; it makes the generator matrix unit lower triangular and
is what the built-in solver targets. The worked examples ship the looser
published transforms; stabilizers for those are obtained either as
generator products against a possibly-singular matrix (with XOR-shifted
control states) or by a direct symplectic solve. Correctness of every
assembled circuit is checked against the dense oracle in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .pauli import (
    PHASE_VALUES,
    PauliString,
    WeightedPauliSum,
    commutation_vector,
    commutes,
    pauli_mul,
)
from .schemes import (
    AncillaScheme,
    StabilizerSet,
    delta_parity,
    find_transforms,
    required_t_vectors,
    solve_stabilizers,
    solve_stabilizers_direct,
)
from .synthesis import UnitaryPlan

PAULI_TYPE_NAMES = {1: "X", 2: "Y", 3: "Z"}


@dataclass(frozen=True)
class TransformSet:
    """Transformation operators T_k, phases gamma_k, and canonical P~_k."""

    ts: tuple[PauliString, ...]
    gamma_exps: tuple[int, ...]
    ptildes: tuple[PauliString, ...]

    @property
    def m(self) -> int:
        return len(self.ts)

    @property
    def n(self) -> int:
        return self.ts[0].n

    @property
    def gammas(self) -> tuple[complex, ...]:
        return tuple(PHASE_VALUES[g] for g in self.gamma_exps)

    def correction_paulis(self) -> tuple[PauliString, ...]:
        """gamma_k T_k, the payloads of the correction layer."""
        return tuple(
            PauliString(t.n, t.x, t.z, (t.phase_exp + g) % 4)
            for t, g in zip(self.ts, self.gamma_exps))


@dataclass(frozen=True)
class Violation:
    code: str
    i: int
    k: int
    message: str
    fatal: bool


@dataclass(frozen=True)
class TransformDiagnostics:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not any(v.fatal for v in self.violations)

    @property
    def canonical(self) -> bool:
        return not self.violations

    def fatal_violations(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.fatal)


def _derive(ts, strings) -> tuple[tuple[int, ...], tuple[PauliString, ...]]:
    gamma_exps, ptildes = [], []
    for t, p in zip(ts, strings):
        r = pauli_mul(t, p)
        gamma_exps.append(r.phase_exp)
        ptildes.append(r.canonicalized())
    return tuple(gamma_exps), tuple(ptildes)


def verify_transform_set(tset: TransformSet,
                         ps: WeightedPauliSum) -> TransformDiagnostics:
    """Check a transform set pair by pair and report every deviation.

    Fatal entries break the anti-commutation of the transformed strings or
    the phase bookkeeping; non-fatal ones flag departures from the canonical
    condition (which only narrow the available stabilizer constructions).
    """
    strings = ps.strings
    m = ps.m
    out: list[Violation] = []
    if tset.m != m:
        out.append(Violation("shape", -1, -1,
                             f"{tset.m} transforms for {m} terms", True))
        return TransformDiagnostics(tuple(out))
    tvecs = [commutation_vector(t, list(strings)) for t in tset.ts]
    required = required_t_vectors(list(strings))
    for i in range(m):
        r = pauli_mul(tset.ts[i], strings[i])
        if (r.canonicalized() != tset.ptildes[i]
                or r.phase_exp != tset.gamma_exps[i]):
            out.append(Violation(
                "gamma", i, i,
                f"stored gamma/P~ for term {i} disagree with T_{i} P_{i}", True))
    for i in range(m):
        for k in range(i + 1, m):
            total = (tvecs[i][k] ^ tvecs[k][i]
                     ^ commutes(tset.ts[i], tset.ts[k])
                     ^ commutes(strings[i], strings[k]))
            if total != 1:
                out.append(Violation(
                    "anticommute", i, k,
                    f"transformed strings {i} and {k} commute; condition "
                    f"violated at (i,k)=({i},{k})", True))
            if commutes(tset.ts[i], tset.ts[k]):
                out.append(Violation(
                    "t-noncommuting", i, k,
                    f"T_{i} and T_{k} anti-commute; generator-product "
                    "stabilizers are unavailable", False))
    for i in range(m):
        for k in range(m):
            if tvecs[i][k] != required[i][k]:
                out.append(Violation(
                    "noncanonical", i, k,
                    f"t_{i}({k}) = {tvecs[i][k]} differs from the canonical "
                    f"condition value {required[i][k]}", False))
    for i in range(m):
        for k in range(i + 1, m):
            if commutes(tset.ptildes[i], tset.ptildes[k]) == 0:
                if not any(v.code == "anticommute" and v.i == i and v.k == k
                           for v in out):
                    out.append(Violation(
                        "anticommute", i, k,
                        f"P~_{i} and P~_{k} commute", True))
    return TransformDiagnostics(tuple(out))


def build_transforms(ps: WeightedPauliSum,
                     user_ts: list[PauliString] | None = None) -> TransformSet:
    """Validated transform set; solved when none is supplied.

    Already pairwise anti-commuting operators need no transformation and get
    all-identity T_k. Otherwise the solver targets the canonical condition.
    """
    strings = list(ps.strings)
    if user_ts is not None:
        if len(user_ts) != ps.m:
            raise ValueError(f"expected {ps.m} transforms, got {len(user_ts)}")
        ts = tuple(t.canonicalized() for t in user_ts)
    else:
        pairs_anti = all(
            commutes(strings[i], strings[k])
            for i in range(ps.m) for k in range(i + 1, ps.m))
        if pairs_anti or ps.m == 1:
            ts = tuple(PauliString.identity(ps.n) for _ in range(ps.m))
        else:
            ts = tuple(find_transforms(strings))
    gamma_exps, ptildes = _derive(ts, strings)
    tset = TransformSet(ts, gamma_exps, ptildes)
    diag = verify_transform_set(tset, ps)
    if not diag.ok:
        first = diag.fatal_violations()[0]
        raise ValueError(first.message)
    return tset


# ---------------------------------------------------------------------------
# worked example families
# ---------------------------------------------------------------------------

def _complement_type(*used: int) -> int:
    rest = sorted({1, 2, 3} - set(used))
    if not rest:
        raise ValueError("no Pauli type left to choose")
    return rest[0]


def example_operator(which, ell: int, m: int, alphas, n: int | None = None,
                     s: int | None = None, r: int | None = None
                     ) -> tuple[WeightedPauliSum, TransformSet]:
    """Published example family ``which`` in {1, 2, 3} with its transforms.

    1: single-site chains P_k = sigma_k^(ell)
    2: cyclic nearest-neighbour couplings sigma_{k-1}^(ell) sigma_k^(ell)
    3: staircases prod_{i<=k} sigma_i^(ell)

    All three transform to the staircase family, so both synthesis forms
    apply. ``s`` (and ``r`` for family 2) pick the auxiliary Pauli types.
    """
    which = int(which)
    if which not in (1, 2, 3):
        raise ValueError(f"unknown example family {which}")
    if ell not in (1, 2, 3):
        raise ValueError(f"Pauli type ell must be 1, 2 or 3, got {ell}")
    n = m if n is None else n
    if m > n:
        raise ValueError(f"m={m} needs at least m qubits, got n={n}")
    if s is None:
        s = _complement_type(ell)
    if s == ell or s not in (1, 2, 3):
        raise ValueError(f"s={s} must differ from ell={ell}")

    if which == 1:
        strings = [PauliString.single(n, k, ell) for k in range(m)]
        ts = [PauliString.from_types(n, {q: s for q in range(k)})
              for k in range(m)]
    elif which == 2:
        if m < 3:
            raise ValueError("family 2 needs m >= 3 (smaller rings repeat strings)")
        if r is None:
            r = _complement_type(ell, s)
        if len({ell, s, r}) != 3:
            raise ValueError(f"types ell={ell}, s={s}, r={r} must be distinct")
        strings = [PauliString.from_types(n, {m - 1: ell, 0: ell})]
        strings += [PauliString.from_types(n, {k - 1: ell, k: ell})
                    for k in range(1, m)]
        ts = [PauliString.single(n, m - 1, ell),
              PauliString.single(n, 0, r)]
        for k in range(2, m):
            types = {q: s for q in range(k - 1)}
            types[k - 1] = r
            ts.append(PauliString.from_types(n, types))
    else:
        strings = [PauliString.from_types(n, {q: ell for q in range(k + 1)})
                   for k in range(m)]
        ts = [PauliString.single(n, k, s) for k in range(m)]

    alphas = np.asarray(alphas, dtype=float)
    if len(alphas) != m:
        raise ValueError(f"expected {m} coefficients, got {len(alphas)}")
    op = WeightedPauliSum(n, tuple(
        (float(a), p) for a, p in zip(alphas, strings)))
    return op, build_transforms(op, user_ts=ts)


# ---------------------------------------------------------------------------
# encoding plans and the SBBE circuit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EncodingPlan:
    """Everything the assembler needs: operator, transforms, register scheme,
    stabilizers, and the effective control states of the correction layer."""

    operator: WeightedPauliSum
    transforms: TransformSet
    scheme: AncillaScheme
    stabilizers: StabilizerSet
    control_states: tuple[int, ...]
    lam: float


def _stabilizers_for(transforms: TransformSet,
                     scheme: AncillaScheme) -> tuple[StabilizerSet, tuple[int, ...]]:
    ptildes = list(transforms.ptildes)
    ts = list(transforms.ts)
    t_commuting = all(
        commutes(ts[i], ts[k]) == 0
        for i in range(len(ts)) for k in range(i + 1, len(ts)))
    if t_commuting:
        tvecs = [commutation_vector(t, ptildes) for t in ts]
        try:
            stabs, shift = solve_stabilizers(ts, tvecs, scheme)
            return stabs, tuple(v ^ shift for v in scheme.v)
        except ValueError:
            pass
    stabs = solve_stabilizers_direct(ptildes, scheme)
    return stabs, scheme.v


def _check_stabilizer_patterns(stabs: StabilizerSet, ptildes,
                               control_states, a: int) -> None:
    for i, s in enumerate(stabs.stabilizers):
        wire = 1 << (a - 1 - i)
        for k, pt in enumerate(ptildes):
            if commutes(s, pt) != delta_parity(wire, control_states[k]):
                raise ValueError(
                    f"stabilizer {i} breaks the tagging condition at term {k}")


def make_plan(operator: WeightedPauliSum, scheme,
              transforms: TransformSet | None = None) -> EncodingPlan:
    """Resolve transforms and stabilizers for an operator and a register scheme."""
    if isinstance(scheme, str):
        scheme = AncillaScheme.named(scheme, operator.m)
    if scheme.m != operator.m:
        raise ValueError(
            f"scheme describes m={scheme.m}, operator has m={operator.m}")
    if transforms is None:
        transforms = build_transforms(operator)
    else:
        diag = verify_transform_set(transforms, operator)
        if not diag.ok:
            raise ValueError(diag.fatal_violations()[0].message)
    stabs, control_states = _stabilizers_for(transforms, scheme)
    _check_stabilizer_patterns(stabs, transforms.ptildes, control_states,
                               scheme.a)
    return EncodingPlan(operator, transforms, scheme, stabs, control_states,
                        2.0 ** (-scheme.a / 2.0))


def _reduced_controls(a: int, values: tuple[int, ...], k: int,
                      anc_base: int) -> tuple[tuple[int, int], ...]:
    """Controls isolating values[k] among the branch states.

    When one wire separates it from every other state a single control
    suffices (the linear register always allows this); otherwise the full
    register value is used.
    """
    v = values[k]
    others = [w for j, w in enumerate(values) if j != k]
    for wire in range(a):
        bit = (v >> (a - 1 - wire)) & 1
        if all(((w >> (a - 1 - wire)) & 1) != bit for w in others):
            return ((anc_base + wire, bit),)
    return tuple((anc_base + wire, (v >> (a - 1 - wire)) & 1)
                 for wire in range(a))


def _correction_gates(plan: EncodingPlan, anc_base: int,
                      n: int) -> list[Gate]:
    a = plan.scheme.a
    gates = []
    for k, payload in enumerate(plan.transforms.correction_paulis()):
        if payload.is_identity and payload.phase_exp == 0:
            continue
        controls = (() if a == 0 else
                    _reduced_controls(a, plan.control_states, k, anc_base))
        gates.append(Gate("PAULI", tuple(range(n)), controls, pauli=payload))
    return gates


def assemble_sbbe(plan: EncodingPlan, u_form: str = "generic") -> Circuit:
    """Full stabilizer-based block-encoding circuit.

    Layer order: Hadamards on the ancillas, the controlled stabilizers, the
    anti-commuting combination U, the controlled stabilizers reversed, a
    Hadamard layer, the controlled corrections gamma_k T_k on the branch
    states, and a final Hadamard layer. The encoded block is lam * A with
    lam = 2^(-a/2).
    """
    n = plan.operator.n
    a = plan.scheme.a
    circ = Circuit(n, a)
    anc = n

    if u_form == "generic":
        uplan = UnitaryPlan.generic(plan.operator.alphas, plan.transforms.ptildes)
    elif u_form == "cascade":
        uplan = UnitaryPlan.cascade(plan.operator.alphas, plan.transforms.ptildes)
    else:
        raise ValueError(f"unknown synthesis form {u_form!r}")

    for j in range(a):
        circ.h(anc + j)
    for i, s in enumerate(plan.stabilizers.stabilizers):
        if not (s.is_identity and s.phase_exp == 0):
            circ.pauli_gate(s, range(n), controls=((anc + i, 1),))
    for g in uplan.to_circuit().gates:
        circ.add(g)
    for i in range(a - 1, -1, -1):
        s = plan.stabilizers.stabilizers[i]
        if not (s.is_identity and s.phase_exp == 0):
            circ.pauli_gate(s, range(n), controls=((anc + i, 1),))
    for j in range(a):
        circ.h(anc + j)
    for gate in _correction_gates(plan, anc, n):
        circ.add(gate)
    for j in range(a):
        circ.h(anc + j)
    return circ


# ---------------------------------------------------------------------------
# LCU baseline
# ---------------------------------------------------------------------------

def _as_terms(target) -> list[tuple[float, PauliString]]:
    if isinstance(target, WeightedPauliSum):
        return list(target.terms)
    return [(float(c), p) for c, p in target]


def lcu_lambda(target) -> float:
    """Sub-normalization 1 / sum_k |w_k| of the baseline encoding."""
    terms = _as_terms(target)
    return 1.0 / sum(abs(c) for c, _ in terms)


def _prepare_angles(amps: np.ndarray, a: int) -> list[tuple[int, int, float]]:
    """(wire, prefix_value, angle) rows of the amplitude tree, wire-major."""
    norms = {a: np.asarray(amps, dtype=float)}
    for level in range(a - 1, -1, -1):
        below = norms[level + 1]
        norms[level] = np.sqrt(below[0::2] ** 2 + below[1::2] ** 2)
    rows = []
    for level in range(a):
        below = norms[level + 1]
        for prefix in range(1 << level):
            left, right = below[2 * prefix], below[2 * prefix + 1]
            if left + right > 1e-15:
                theta = 2.0 * math.atan2(right, left)
                if abs(theta) > 1e-15:
                    rows.append((level, prefix, theta))
    return rows


def assemble_lcu(target) -> Circuit:
    """PREPARE / SELECT / UNPREPARE baseline over a logarithmic register.

    Amplitudes sqrt(|w_k| / sum |w|) are prepared with a controlled-rotation
    tree; coefficient signs are folded into the selected Pauli payloads. The
    encoded block is A / sum_k |w_k|.
    """
    terms = _as_terms(target)
    m = len(terms)
    if m < 1:
        raise ValueError("need at least one term")
    n = terms[0][1].n
    a = (m - 1).bit_length() if m > 1 else 0
    circ = Circuit(n, a)
    anc = n

    weights = np.zeros(1 << a)
    for k, (c, _) in enumerate(terms):
        weights[k] = abs(c)
    amps = np.sqrt(weights / weights.sum())

    rows = _prepare_angles(amps, a)

    def prep_gate(level, prefix, theta):
        controls = tuple(
            (anc + w, (prefix >> (level - 1 - w)) & 1) for w in range(level))
        return Gate("RY", (anc + level,), controls, angle=theta)

    for level, prefix, theta in rows:
        circ.add(prep_gate(level, prefix, theta))
    for k, (c, p) in enumerate(terms):
        if c == 0:
            continue
        payload = p if c > 0 else p.with_phase_exp(2)
        controls = tuple(
            (anc + w, (k >> (a - 1 - w)) & 1) for w in range(a))
        circ.add(Gate("PAULI", tuple(range(n)), controls, pauli=payload))
    for level, prefix, theta in reversed(rows):
        circ.add(prep_gate(level, prefix, -theta))
    return circ


# ---------------------------------------------------------------------------
# combination circuit: one extra qubit selecting between two chain operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CombinationSpec:
    """Mixing weight beta and the two chain Pauli types being combined.

    The selector rotation uses phi = 2 arccos(sqrt(beta)), which makes the
    branch weights cos^2(phi/2) = beta and sin^2(phi/2) = 1 - beta.
    """

    beta: float
    ells: tuple[int, int]

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        l1, l2 = self.ells
        if l1 == l2 or not {l1, l2} <= {1, 2, 3}:
            raise ValueError("the two chain types must be distinct Paulis")

    @property
    def phi(self) -> float:
        return 2.0 * math.acos(math.sqrt(self.beta))


@dataclass(frozen=True)
class CombinationPlan:
    spec: CombinationSpec
    s: int
    operator1: WeightedPauliSum
    operator2: WeightedPauliSum
    transforms: TransformSet        # shared, branch-1 bookkeeping
    ptildes2: tuple[PauliString, ...]
    scheme: AncillaScheme
    stabilizers: StabilizerSet
    control_states: tuple[int, ...]
    lam: float

    @property
    def n(self) -> int:
        return self.operator1.n


def make_combination_plan(spec: CombinationSpec, alphas1, alphas2,
                          scheme="log") -> CombinationPlan:
    """Shared transforms and stabilizers for beta A + (1 - beta) A'."""
    ell1, ell2 = spec.ells
    s = _complement_type(ell1, ell2)
    m = len(alphas1)
    if len(alphas2) != m:
        raise ValueError("both coefficient lists must have the same length")
    op1, transforms = example_operator(1, ell1, m, alphas1, s=s)
    op2, transforms2 = example_operator(1, ell2, m, alphas2, s=s)
    if transforms2.ts != transforms.ts:
        raise ValueError("branches disagree on the shared transforms")
    if any(g != 0 for g in transforms.gamma_exps + transforms2.gamma_exps):
        raise ValueError("shared transforms must be phase-free")
    if isinstance(scheme, str):
        scheme = AncillaScheme.named(scheme, m)
    stabs, control_states = _stabilizers_for(transforms, scheme)
    _check_stabilizer_patterns(stabs, transforms.ptildes, control_states,
                               scheme.a)
    _check_stabilizer_patterns(stabs, transforms2.ptildes, control_states,
                               scheme.a)
    return CombinationPlan(spec, s, op1, op2, transforms, transforms2.ptildes,
                           scheme, stabs, control_states,
                           2.0 ** (-scheme.a / 2.0))


def combination_target_terms(plan: CombinationPlan) -> list[tuple[float, PauliString]]:
    beta = plan.spec.beta
    out = [(beta * c, p) for c, p in plan.operator1.terms]
    out += [((1.0 - beta) * c, p) for c, p in plan.operator2.terms]
    return out


def assemble_combination(plan: CombinationPlan) -> Circuit:
    """Selector-qubit circuit sharing one tagging and correction layer.

    The selector rides below the ancilla register; each branch combination
    is applied with its rotations (and global phase) conditioned on the
    selector, so the branch frame gates cancel when the condition fails.
    """
    n = plan.n
    a = plan.scheme.a
    circ = Circuit(n, a + 1)
    anc = n
    sel = n + a

    circ.ry(sel, plan.spec.phi)
    for j in range(a):
        circ.h(anc + j)
    for i, st in enumerate(plan.stabilizers.stabilizers):
        if not (st.is_identity and st.phase_exp == 0):
            circ.pauli_gate(st, range(n), controls=((anc + i, 1),))
    u1 = UnitaryPlan.generic(plan.operator1.alphas, plan.transforms.ptildes)
    u2 = UnitaryPlan.generic(plan.operator2.alphas, plan.ptildes2)
    for g in u1.to_circuit().gates:
        circ.add(Gate(g.kind, g.qubits, g.controls + ((sel, 0),),
                      g.angle, g.pauli))
    for g in u2.to_circuit().gates:
        circ.add(Gate(g.kind, g.qubits, g.controls + ((sel, 1),),
                      g.angle, g.pauli))
    for i in range(a - 1, -1, -1):
        st = plan.stabilizers.stabilizers[i]
        if not (st.is_identity and st.phase_exp == 0):
            circ.pauli_gate(st, range(n), controls=((anc + i, 1),))
    for j in range(a):
        circ.h(anc + j)
    eplan = EncodingPlan(plan.operator1, plan.transforms, plan.scheme,
                         plan.stabilizers, plan.control_states, plan.lam)
    for gate in _correction_gates(eplan, anc, n):
        circ.add(gate)
    circ.ry(sel, -plan.spec.phi)
    for j in range(a):
        circ.h(anc + j)
    return circ


# ---------------------------------------------------------------------------
# plan import / export
# ---------------------------------------------------------------------------

_GAMMA_LABELS = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}


def plan_to_json(plan: EncodingPlan) -> str:
    facts = plan.stabilizers.factorizations
    doc = {
        "n": plan.operator.n,
        "terms": [[c, p.label()] for c, p in plan.operator.terms],
        "transforms": [t.label() for t in plan.transforms.ts],
        "gammas": [_GAMMA_LABELS[g] for g in plan.transforms.gamma_exps],
        "transformed": [p.label() for p in plan.transforms.ptildes],
        "scheme": {"kind": plan.scheme.kind, "a": plan.scheme.a,
                   "v": list(plan.scheme.v)},
        "control_states": list(plan.control_states),
        "stabilizers": [s.label() for s in plan.stabilizers.stabilizers],
        "factorizations": None if facts is None else [list(f) for f in facts],
        "lambda": plan.lam,
    }
    return json.dumps(doc, indent=2)


def plan_from_json(text: str) -> EncodingPlan:
    """Rebuild a plan from its exported inputs (operator, transforms, scheme);
    stabilizers and control states are re-derived deterministically."""
    doc = json.loads(text)
    op = WeightedPauliSum(doc["n"], tuple(
        (float(c), PauliString.from_label(lbl)) for c, lbl in doc["terms"]))
    user_ts = [PauliString.from_label(lbl) for lbl in doc["transforms"]]
    scheme = AncillaScheme(doc["scheme"]["kind"], doc["scheme"]["a"],
                           tuple(doc["scheme"]["v"]))
    transforms = build_transforms(op, user_ts=user_ts)
    return make_plan(op, scheme, transforms)
