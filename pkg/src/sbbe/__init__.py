"""Stabilizer-based block encoding of weighted Pauli-string sums."""

from .pauli import (
    CommutationVector,
    DEFAULT_DENSE_CAP,
    PauliString,
    WeightedPauliSum,
    commutation_vector,
    commutes,
    conjugate,
    pauli_mul,
    to_dense,
)
from .schemes import (
    AncillaScheme,
    StabilizerSet,
    delta_parity,
    find_transforms,
    gray_code,
    required_t_vectors,
    build_mt,
    stabilizers_commuting_closed_form,
    stabilizers_general,
    stabilizer_table_line,
)
from .circuit import (
    Circuit,
    Gate,
    ResourceReport,
    cnot_fanout,
    decompose,
    resources,
    to_qasm,
    from_qasm,
    to_text,
    from_text,
)
from .synthesis import (
    UnitaryPlan,
    build_u_cascade,
    build_u_generic,
    cascade_coefficients,
    cascade_mu,
    compute_generic_angles,
    solve_cascade_angles,
)
from .encoder import (
    CombinationPlan,
    CombinationSpec,
    EncodingPlan,
    TransformSet,
    assemble_combination,
    assemble_lcu,
    assemble_sbbe,
    build_transforms,
    combination_target_terms,
    example_operator,
    lcu_lambda,
    make_combination_plan,
    make_plan,
    plan_from_json,
    plan_to_json,
    verify_transform_set,
)
from .simulator import (
    BlockReport,
    apply,
    compute_block,
    extract_block,
    random_state,
    to_dense_unitary,
    verify_block_encoding,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
