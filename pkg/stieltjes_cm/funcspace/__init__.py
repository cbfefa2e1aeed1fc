from stieltjes_cm.funcspace.closed_form import ClosedForm, ClosedFormKind, ClosedFormTerm
from stieltjes_cm.funcspace.gs_function import (
    ROUTE_PREFERENCE,
    GSFunction,
    Route,
    StieltjesPhiDensity,
    derivative,
    eval_f,
    laplace_transform,
    stieltjes_to_laplace_measure,
    stieltjes_to_laplace_phi,
    stieltjes_transform,
)
from stieltjes_cm.special.quadrature import quad_semiinfinite

__all__ = [
    "ClosedForm",
    "ClosedFormKind",
    "ClosedFormTerm",
    "GSFunction",
    "ROUTE_PREFERENCE",
    "Route",
    "StieltjesPhiDensity",
    "derivative",
    "eval_f",
    "laplace_transform",
    "quad_semiinfinite",
    "stieltjes_to_laplace_measure",
    "stieltjes_to_laplace_phi",
    "stieltjes_transform",
]
