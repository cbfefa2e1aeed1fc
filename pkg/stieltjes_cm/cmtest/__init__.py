from stieltjes_cm.cmtest.cm_check import (
    DifferentiableFunction,
    class_membership,
    cm_check_derivatives,
    cm_check_differences,
    lower_orders_check,
    sign_limit_checks,
)
from stieltjes_cm.cmtest.reports import (
    PROPOSITION_CAVEAT,
    ClassEntry,
    ClassReport,
    CMMethod,
    CMReport,
    LimitProbe,
    LowerOrdersReport,
    OrderResult,
    SignLimitReport,
    Witness,
    combine_verdicts,
)
from stieltjes_cm.measure.measure import Verdict

__all__ = [
    "CMMethod",
    "CMReport",
    "ClassEntry",
    "ClassReport",
    "DifferentiableFunction",
    "LimitProbe",
    "LowerOrdersReport",
    "OrderResult",
    "PROPOSITION_CAVEAT",
    "SignLimitReport",
    "Verdict",
    "Witness",
    "class_membership",
    "cm_check_derivatives",
    "cm_check_differences",
    "combine_verdicts",
    "lower_orders_check",
    "sign_limit_checks",
]
