"""Locally sparse coefficient reconstruction.

Thin re-export of the C++ extension: mixed matrix norms, the capped
row-simplex projection, the double-split ADMM solver, kinetic dictionaries,
and the recovery-condition checkers.
"""

from locsparse._core import (  # noqa: F401
    ContractViolation,
    DictionaryMatrix,
    ForwardOperator,
    Phantom,
    SolverParams,
    SupportMap,
    add_gaussian_noise,
    apply_forward,
    build_kinetic_dictionary,
    build_negative_instance,
    build_recovery_instance,
    check_1d_recovery,
    check_scaling_condition,
    check_source_condition,
    debias_on_support,
    default_phantom,
    extract_support,
    gamma_variate_curve,
    gaussian_kernel,
    log_decay_grid,
    mutual_incoherence,
    nearest_subgradient,
    nonneg_subgradient_membership,
    norm_inf_1,
    norm_l0_inf,
    norm_l1_inf,
    normalize_columns,
    predict_asymptotic_support,
    project_matrix,
    project_row,
    solve,
    subgradient_membership,
    support_error,
    sweep_v,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
