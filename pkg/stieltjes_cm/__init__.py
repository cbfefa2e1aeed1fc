from stieltjes_cm.cmtest import (
    ClassReport,
    CMReport,
    class_membership,
    cm_check_derivatives,
    cm_check_differences,
)
from stieltjes_cm.constants import (
    DerivativeCapabilityError,
    DivergentIntegralError,
    EvaluationError,
    InadmissibleMeasureError,
    NotAMeasureError,
    QuadratureError,
    SpecialFunctionDomainError,
    SpecValidationError,
)
from stieltjes_cm.funcspace import ClosedForm, GSFunction, derivative, eval_f
from stieltjes_cm.measure import Measure, ScanGrid, Verdict, derived_measure, moment
from stieltjes_cm.operators import OperatorImage, OperatorTable, c_op, g_op, t_op
from stieltjes_cm.represent import (
    MChain,
    asymptotic_expand,
    build_bernstein_function,
    build_tail_function,
)

__all__ = [
    "ClassReport",
    "ClosedForm",
    "CMReport",
    "GSFunction",
    "MChain",
    "Measure",
    "OperatorImage",
    "OperatorTable",
    "ScanGrid",
    "Verdict",
    "DerivativeCapabilityError",
    "DivergentIntegralError",
    "EvaluationError",
    "InadmissibleMeasureError",
    "NotAMeasureError",
    "QuadratureError",
    "SpecialFunctionDomainError",
    "SpecValidationError",
    "asymptotic_expand",
    "build_bernstein_function",
    "build_tail_function",
    "c_op",
    "class_membership",
    "cm_check_derivatives",
    "cm_check_differences",
    "derivative",
    "derived_measure",
    "eval_f",
    "g_op",
    "moment",
    "t_op",
]
