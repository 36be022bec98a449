"""Robust identification of linear systems under sparse adversarial attacks.

Thin re-export of the compiled core: the estimator solving the
sum-of-column-norms program, the null-space-property recovery certificates,
and the error / concentration bound evaluators.
"""

from ._core import (  # noqa: F401
    AttackModel,
    BMSB_SMALL_BALL,
    CertificateReport,
    CertificationRow,
    DecompositionWitness,
    EnvelopeConstants,
    ErrorBound,
    ErrorCurveRow,
    EstimationResult,
    ExperimentConfig,
    ExperimentInstance,
    GramianEnvelope,
    IndexSet,
    McSigmaReport,
    NspOptions,
    Prop1Quantities,
    Rng,
    SolverConfig,
    SolverDiagnostics,
    SystemMatrices,
    Trajectory,
    XiMode,
    XiResult,
    __version__,
    block_soft_threshold,
    certify_via_xi,
    check_singular_value_nsp,
    col_group_norm,
    envelope_constants,
    estimation_error,
    generate_random_system,
    gramian_envelope,
    make_instance,
    monte_carlo_sigma_check,
    nsp_all_methods,
    nsp_verdict,
    prop1_quantities,
    run_certification_sweep,
    run_error_curve,
    sample_attack_disturbances,
    simulate,
    solve_lasso,
    solve_least_squares,
    theorem2_bound,
    xi_1,
    xi_s,
)
