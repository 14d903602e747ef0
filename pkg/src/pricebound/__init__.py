"""Posted-price revenue bounds for positive valuation distributions."""

__version__ = "0.1.0"

from . import _backend
from .distributions import (
    Distribution,
    Empirical,
    EqualRevenue,
    Exponential,
    LogNormal,
    Mixture,
    Pareto,
    PointMass,
    Uniform,
    is_purely_atomic,
    probability_integral_samples,
)
from .dsl import DistributionSpec, FamilyNode, MixNode, build, parse_spec
from .revenue import (
    Method,
    OptimalRevenue,
    PriceQuote,
    RandomPriceEstimate,
    optimal_revenue,
    random_price_revenue,
    revenue_at,
    revenue_curve,
)
from .moments import (
    MomentsReport,
    expectation,
    geometric_expectation,
    log_expectation,
    mc_log_expectation,
    moments_report,
)
from .bounds import (
    BoundReport,
    ConcentrationResult,
    DistributionCheck,
    ProofTrace,
    VerifyResult,
    concentration_check,
    lambert_w,
    lambert_w_upper_check,
    theorem1_report,
    theorem2_report,
    theorem2_proof_trace,
    verify_suite,
)
from .report import ReportEnvelope, canonical_json
from .errors import (
    AtomsNotAllowedError,
    BoundViolationError,
    EmpiricalFileError,
    InfiniteExpectationError,
    InternalConsistencyError,
    SpecError,
    SpecSyntaxError,
    SpecValueError,
)

backend_name = _backend.backend_name

__all__ = [
    "__version__",
    "backend_name",
    "Distribution",
    "PointMass",
    "Uniform",
    "Exponential",
    "Pareto",
    "LogNormal",
    "EqualRevenue",
    "Empirical",
    "Mixture",
    "is_purely_atomic",
    "probability_integral_samples",
    "DistributionSpec",
    "FamilyNode",
    "MixNode",
    "parse_spec",
    "build",
    "PriceQuote",
    "Method",
    "OptimalRevenue",
    "RandomPriceEstimate",
    "revenue_at",
    "revenue_curve",
    "optimal_revenue",
    "random_price_revenue",
    "MomentsReport",
    "expectation",
    "log_expectation",
    "geometric_expectation",
    "mc_log_expectation",
    "moments_report",
    "BoundReport",
    "ConcentrationResult",
    "DistributionCheck",
    "ProofTrace",
    "VerifyResult",
    "lambert_w",
    "lambert_w_upper_check",
    "theorem1_report",
    "theorem2_report",
    "concentration_check",
    "theorem2_proof_trace",
    "verify_suite",
    "ReportEnvelope",
    "canonical_json",
    "SpecError",
    "SpecSyntaxError",
    "SpecValueError",
    "EmpiricalFileError",
    "AtomsNotAllowedError",
    "InfiniteExpectationError",
    "InternalConsistencyError",
    "BoundViolationError",
]
