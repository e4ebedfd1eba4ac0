"""Numerical toolkit for Hardy spaces on the unit circle.

Band-limited functions on a power-of-two sample grid, Blaschke-product
bases, modulus-based gauge norms, inner/outer and n-inner/n-outer
factorization, and finite-dimensional models of shift-invariant
subspaces.  Everything is deterministic for a fixed grid and seed.
"""

from .circlefn import (
    CircleFunction,
    DEFAULT_N_SAMPLES,
    HardyFlag,
    analyze,
    constant,
    evaluate_at,
    freq_indices,
    grid,
    hardy_flag,
    inner_product,
    monomial,
    norm2,
    pointwise,
    resample,
    synthesize,
)
from .norms import (
    ArcWeighted,
    AxiomReport,
    ContinuityReport,
    ConvexCombo,
    GaugeNormSpec,
    MaxOf,
    PNorm,
    SupNorm,
    builtin_specs,
    check_continuity,
    check_gauge_axioms,
    check_rotational_symmetry,
    dual_norm_estimate,
    gauge_eval,
    holder_check,
)
from .blaschke import (
    BasisIndex,
    BlaschkeSpec,
    ConventionWarning,
    as_circle_function,
    basis_element,
    blaschke_eval,
    check_basis_orthonormality,
    compose,
    gram_matrix,
    partial_product,
    power_spec,
)
from .decomp import (
    DecompositionResult,
    cesaro_convergence_profile,
    cesaro_mean,
    decompose_blaschke,
    decompose_zn,
    rotate,
    zn_series_components,
)
from .factor import (
    BInnerMatrix,
    BInnerReport,
    InnerOuterPair,
    NInnerOuterBundle,
    NOuterReport,
    OuterReport,
    b_inner_matrix_from,
    harmonic_conjugate,
    inner_outer,
    is_B_inner,
    is_n_outer,
    is_outer,
    n_inner_outer_factorize,
    outer_from_modulus,
    outer_multiplier,
)
from .invariance import (
    ConstrainedReport,
    ConstrainedSpec,
    SubspaceBasis,
    algebra_action_profile,
    build_constrained,
    invariance_defect,
    span_invariant,
    subspace_distance,
    verify_constrained,
    wandering_basis,
)
from .errors import (
    ConstructionError,
    DegenerateSpaceError,
    DomainError,
    FactorizationError,
    HardyError,
    ParameterError,
    RankError,
    SingularityError,
    SizeError,
    TruncationError,
)
from .verify import (
    Check,
    RunConfig,
    VerificationReport,
    registry_ids,
    run_verification,
)
from .serialize import (
    dump_json,
    function_from_json,
    function_to_json,
    norm_spec_from_json,
    norm_spec_to_json,
    subspace_from_json,
    subspace_to_json,
    write_json,
    zeros_from_json,
    zeros_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "ArcWeighted",
    "AxiomReport",
    "BInnerMatrix",
    "BInnerReport",
    "BasisIndex",
    "BlaschkeSpec",
    "Check",
    "CircleFunction",
    "ConstrainedReport",
    "ConstrainedSpec",
    "ConstructionError",
    "ContinuityReport",
    "ConventionWarning",
    "ConvexCombo",
    "DEFAULT_N_SAMPLES",
    "DecompositionResult",
    "DegenerateSpaceError",
    "DomainError",
    "FactorizationError",
    "GaugeNormSpec",
    "HardyError",
    "HardyFlag",
    "InnerOuterPair",
    "MaxOf",
    "NInnerOuterBundle",
    "NOuterReport",
    "OuterReport",
    "PNorm",
    "ParameterError",
    "RankError",
    "RunConfig",
    "SingularityError",
    "SizeError",
    "SubspaceBasis",
    "SupNorm",
    "TruncationError",
    "VerificationReport",
    "algebra_action_profile",
    "analyze",
    "as_circle_function",
    "b_inner_matrix_from",
    "basis_element",
    "blaschke_eval",
    "build_constrained",
    "builtin_specs",
    "cesaro_convergence_profile",
    "cesaro_mean",
    "check_basis_orthonormality",
    "check_continuity",
    "check_gauge_axioms",
    "check_rotational_symmetry",
    "compose",
    "constant",
    "decompose_blaschke",
    "decompose_zn",
    "dual_norm_estimate",
    "dump_json",
    "evaluate_at",
    "freq_indices",
    "function_from_json",
    "function_to_json",
    "gauge_eval",
    "gram_matrix",
    "grid",
    "hardy_flag",
    "harmonic_conjugate",
    "holder_check",
    "inner_outer",
    "inner_product",
    "invariance_defect",
    "is_B_inner",
    "is_n_outer",
    "is_outer",
    "monomial",
    "n_inner_outer_factorize",
    "norm2",
    "norm_spec_from_json",
    "norm_spec_to_json",
    "outer_from_modulus",
    "outer_multiplier",
    "partial_product",
    "pointwise",
    "power_spec",
    "registry_ids",
    "resample",
    "rotate",
    "run_verification",
    "span_invariant",
    "subspace_distance",
    "subspace_from_json",
    "subspace_to_json",
    "synthesize",
    "verify_constrained",
    "wandering_basis",
    "write_json",
    "zeros_from_json",
    "zeros_to_json",
    "zn_series_components",
]
