"""Classical and quantum random access codes: bounds, constructions, search."""

from .bounds import bound_report, closed_form_avg_rac_bound, l1_avg_optimum, liabotro_value, llm1_values
from .codes import (
    ClassicalCode,
    InvariantError,
    avg_success,
    build_avg_code,
    build_worst_code,
    optimal_L1_code,
    optimal_LLm1_code,
    worst_success,
)
from .core import BitString, Codebook, canonical_form, hamming, parity
from .design import (
    Budget,
    DesignResult,
    chamfer_objective,
    hausdorff_objective,
    search_avg_optimal,
    search_worst_achievable,
)
from .lp import cheb_dist_to_hull, solve_lp
from .quantum import (
    PauliString,
    QuantumCode,
    classical_as_quantum,
    liabotro_qrac,
    llm1_qrac,
    pauli_matrix,
    qrac_success,
    tensor_compose,
)

__version__ = "0.1.0"
