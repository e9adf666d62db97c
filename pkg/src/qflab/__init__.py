"""Exact p-adic densities of quadratic forms, local Whittaker derivatives,
intersection multiplicities, and the supporting quaternion/Clifford checks.

Everything is exact rational arithmetic; no floats anywhere.
"""

from .padic import INFINITE_PLACE, Place, chi, finite_place, hilbert, unit_part, valuation
from .quadform import (
    IncoherentCollection,
    JordanDiagonal,
    QuadSpace,
    SymMat,
    base_diagonal,
    base_space,
    diff_set,
    frac_str,
    hasse,
    is_local_square,
    jordan_diagonalize,
    least_nonsquare,
    parse_frac,
    rational_diagonalization,
    represents_local,
    represents_one_over_Zp,
    signature,
    split_diagonal,
    twisted_complement_diagonal,
    twisted_diagonal,
    twisted_space,
)
from .counting import (
    CountJob,
    DensityResult,
    OracleError,
    count_solutions,
    count_solutions_partitioned,
    density_oracle,
    density_value,
    normalization_exponent,
    state_budget,
)
from .densities import (
    DensityPolynomial,
    GKTriple,
    assemble_A,
    chi_tilde,
    derivative_at_1,
    kitaoka_bracket,
    kitaoka_ternary_poly,
    twisted_density,
    twisted_ternary_factor,
    twisted_unary_factor,
    unary_density_factor,
)
from .gkmult import (
    GKNormalForm,
    e_p,
    e_p_of_form,
    gk_table_csv,
    gross_keating_exponents,
    transversal,
)
from .whittaker import (
    LogPMultiple,
    RatioReport,
    ratio_audit_constant,
    verify_ratio_identity,
    whittaker_derivative,
    whittaker_twisted_value,
    whittaker_value,
)
from .cycles import (
    ComponentClassification,
    FiniteFieldQuadSpace,
    IncidenceCounts,
    classify_component,
    extract_blocks,
    incidence_counts,
    is_isolated,
    proper_intersection_sum,
    reduced_distinguished_space,
    reduced_superspecial_space,
)
from .clifford import (
    Quaternion,
    QuaternionAlgebra,
    SpinGenerators,
    check_spin_compatibility,
    discriminant,
    involution_tensor_type,
    positive_involution_criterion,
    quat_conj,
    quat_mul,
    quat_norm,
    quat_trace,
    quaternion_with_discriminant,
    ramified_places,
    spin_generators,
    vb_space,
    witt_index_rank5,
)

__version__ = "0.1.0"
