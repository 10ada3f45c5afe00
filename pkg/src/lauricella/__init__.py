"""Multivariable hypergeometric functions of the four classical families.

Truncated multi-index evaluation with certified tail bounds, exact
diagonal operator calculus on truncated power series, a dual-path
verified catalog of decomposition formulas and operational
representations, and Euler-type integral representations by tensor
Gauss-Jacobi quadrature. The `lauricella` console script fronts the
eval / verify / catalog workflows.
"""

from .errors import (
    DomainError,
    LauricellaError,
    ParamError,
    SamplingError,
    SingularParamError,
    TruncationError,
)
from .series import (
    EvalOptions,
    EvalResult,
    Family,
    LauricellaParams,
    eval_appell_f2,
    eval_gauss_2f1,
    eval_lauricella,
    fd_at_unity,
    in_convergence_domain,
    pochhammer,
    tail_bound,
)
from .taylor import (
    TruncatedSeries,
    apply_H,
    apply_Hbar,
    apply_delta_bc,
    apply_nabla,
    build_series,
    euler_delta,
    pochhammer_neg_delta,
    pochhammer_shifted_delta,
)
from .identities import (
    OperatorIdentityDescriptor,
    list_operator_identities,
    operator_identity,
    verify_operational_identity,
)
from .decompositions import (
    QUARANTINED,
    FormulaDescriptor,
    catalog_records,
    eval_lhs,
    eval_rhs,
    formula,
    list_formulas,
    pfaff_transform,
    sample_points,
    verify,
)
from .quadrature import (
    IntegralRepDescriptor,
    QuadratureRule,
    cross_check,
    eval_integral_rep,
    gauss_jacobi_rule,
    integral_rep,
    list_integral_reps,
)
from .report import REPORT_SCHEMA, VerifyReport

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Family",
    "LauricellaParams",
    "EvalOptions",
    "EvalResult",
    "eval_lauricella",
    "eval_gauss_2f1",
    "eval_appell_f2",
    "fd_at_unity",
    "in_convergence_domain",
    "pochhammer",
    "tail_bound",
    "TruncatedSeries",
    "build_series",
    "apply_H",
    "apply_Hbar",
    "apply_nabla",
    "apply_delta_bc",
    "euler_delta",
    "pochhammer_shifted_delta",
    "pochhammer_neg_delta",
    "OperatorIdentityDescriptor",
    "list_operator_identities",
    "operator_identity",
    "verify_operational_identity",
    "FormulaDescriptor",
    "QUARANTINED",
    "list_formulas",
    "formula",
    "catalog_records",
    "eval_lhs",
    "eval_rhs",
    "verify",
    "sample_points",
    "pfaff_transform",
    "IntegralRepDescriptor",
    "QuadratureRule",
    "gauss_jacobi_rule",
    "integral_rep",
    "list_integral_reps",
    "eval_integral_rep",
    "cross_check",
    "VerifyReport",
    "REPORT_SCHEMA",
    "LauricellaError",
    "ParamError",
    "SingularParamError",
    "DomainError",
    "TruncationError",
    "SamplingError",
]
