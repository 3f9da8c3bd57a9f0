"""Numerical stochastic calculus for long-memory Gaussian noise.

Exact-law fractional Brownian paths on finite grids, the singular-kernel
inner product computed in closed form, Wick-Riemann integrals with their
correction terms, Monte Carlo verification of change-of-variable and
change-of-measure identities, and pathwise solvers for additive-noise
equations.
"""
from .errors import (
    ConfigError,
    DiagonalSingularityError,
    DriftBlowupError,
    EmbeddingFailureError,
    FracwickError,
    GridMismatchError,
    LongMemoryRequiredError,
    NonConvergenceError,
    SingularCovarianceError,
    UnsupportedCaseError,
)
from .fbm import (
    GENERATOR_NAMES,
    CovarianceMatrix,
    HurstParameter,
    covariance,
    covariance_grid,
    empirical_covariance,
    ensemble_values,
    generate_ensemble,
    generate_path,
    generate_path_cholesky,
    generate_path_circulant,
    generate_path_hosking,
)
from .functions import CylinderFunction, SpaceTimeFunction, gaussian_moment
from .grids import SamplePath, TimeGrid, write_ensemble_csv
from .mc import MonteCarloReport
from .phicalc import (
    PhiContext,
    inner_product_pc,
    kernel_K,
    phi,
    phi_norm_sq,
    phi_operator,
    phi_rect_integral,
    rect_weight_matrix,
)
from .rng import SeedSpec
from .sde import (
    SdeSpec,
    SolverResult,
    fou_oracle,
    make_fou,
    sde_mc_stats,
    solve_direct_euler,
    solve_flow_transform,
    solve_picard,
)
from .stepfn import StepFunction
from .verify import (
    ITO_MEAN_ZERO_CASES,
    ConvergenceTable,
    DriveSpec,
    ItoCase,
    WentzellCase,
    convergence_study,
    expectation_identity_check,
    exponential_mean_report,
    girsanov_case_registry,
    girsanov_check,
    ito_case_registry,
    ito_residual_path,
    ito_residuals,
    product_rule_case_registry,
    product_rule_residual_path,
    product_rule_residuals,
    wentzell_case_registry,
    wentzell_residual_path,
    wentzell_residuals,
)
from .wick import (
    WickIntegralResult,
    exponential_functional,
    isometry_check,
    wick_integral_cylinder,
    wick_integral_deterministic,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceTable",
    "CovarianceMatrix",
    "CylinderFunction",
    "DiagonalSingularityError",
    "DriftBlowupError",
    "DriveSpec",
    "EmbeddingFailureError",
    "FracwickError",
    "GENERATOR_NAMES",
    "ITO_MEAN_ZERO_CASES",
    "GridMismatchError",
    "HurstParameter",
    "ItoCase",
    "LongMemoryRequiredError",
    "MonteCarloReport",
    "NonConvergenceError",
    "PhiContext",
    "SamplePath",
    "SdeSpec",
    "SeedSpec",
    "SingularCovarianceError",
    "SolverResult",
    "SpaceTimeFunction",
    "StepFunction",
    "TimeGrid",
    "UnsupportedCaseError",
    "WentzellCase",
    "WickIntegralResult",
    "convergence_study",
    "covariance",
    "covariance_grid",
    "empirical_covariance",
    "ensemble_values",
    "expectation_identity_check",
    "exponential_mean_report",
    "exponential_functional",
    "fou_oracle",
    "gaussian_moment",
    "generate_ensemble",
    "generate_path",
    "generate_path_cholesky",
    "generate_path_circulant",
    "generate_path_hosking",
    "girsanov_case_registry",
    "girsanov_check",
    "inner_product_pc",
    "isometry_check",
    "ito_case_registry",
    "ito_residual_path",
    "ito_residuals",
    "kernel_K",
    "make_fou",
    "phi",
    "phi_norm_sq",
    "phi_operator",
    "phi_rect_integral",
    "product_rule_case_registry",
    "product_rule_residual_path",
    "product_rule_residuals",
    "rect_weight_matrix",
    "sde_mc_stats",
    "solve_direct_euler",
    "solve_flow_transform",
    "solve_picard",
    "wentzell_case_registry",
    "wentzell_residual_path",
    "wentzell_residuals",
    "wick_integral_cylinder",
    "wick_integral_deterministic",
    "write_ensemble_csv",
]
