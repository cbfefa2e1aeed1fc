from stieltjes_cm.operators.coefficients import (
    ChuVandermondeReport,
    chu_vandermonde_check,
    chu_vandermonde_sweep,
    key_identity_coefficients,
    leibniz_coefficients,
    recursion_c_coefficients,
    recursion_coefficients,
)
from stieltjes_cm.operators.operators import (
    OPERATOR_ROUTES,
    DerivativeGapReport,
    OperatorImage,
    OperatorRoute,
    c_op,
    c_op_measure_side,
    g_op,
    g_recurrence_check,
    route_agreement,
    t_equals_deriv_c_check,
    t_op,
)
from stieltjes_cm.operators.table import OperatorTable

__all__ = [
    "ChuVandermondeReport",
    "DerivativeGapReport",
    "OPERATOR_ROUTES",
    "OperatorImage",
    "OperatorRoute",
    "OperatorTable",
    "c_op",
    "c_op_measure_side",
    "chu_vandermonde_check",
    "chu_vandermonde_sweep",
    "g_op",
    "g_recurrence_check",
    "key_identity_coefficients",
    "leibniz_coefficients",
    "recursion_c_coefficients",
    "recursion_coefficients",
    "route_agreement",
    "t_equals_deriv_c_check",
    "t_op",
]
