"""Positivity, k-positivity, complete positivity and decomposability of
linear maps between matrix algebras, via Choi matrices."""

__version__ = "0.1.0"

from .config import OptConfig, PptConfig, Tolerances
from .errors import InvalidInput, NegativeOfCpMap, NotSelfAdjoint, WitnessInapplicable
from .linalg import (
    hermitian_eig,
    jacobi_eigh,
    kron,
    partial_trace,
    partial_transpose,
    positive_part,
    schmidt_decompose,
)
from .maps import (
    LinMap,
    StateDensity,
    apply,
    choi_of_action,
    compose,
    from_function,
    functional_pair,
    gallery,
    pairing,
    tensor_id,
    transpose_compose,
)
from .split import CpSplit, cp_split, verify_split
from .schmidt import (
    OptReport,
    SchmidtVector,
    Verdict,
    VerdictKind,
    check_witness_preconditions,
    extend_witness,
    is_k_positive,
    kpos_bruteforce_oracle,
    sup_schmidt,
)
from .cones import (
    COMPLETELY_POSITIVE,
    DECOMPOSABLE,
    POSITIVE,
    ConeId,
    cone_norm,
    is_completely_positive,
    is_decomposable,
    is_positive,
    ppt_sup,
    random_ppt_state,
    random_separable_state,
    random_superpositive,
)
from .walkthrough import choi_map_walkthrough
