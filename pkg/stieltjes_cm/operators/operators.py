"""the operators `c_k^λ(f) = x^{1-λ}(x^{λ-1+k} f)^{(k)}`, `T_{n,k}^λ(f) = (-1)^n (c_k^λ f)^{(n)}` and `g_k^λ(f) = c_{k-1}^{λ+1}(f)`

`c_k` is stored unsigned, `T` carries the `(-1)^n`. the constant `c` and, at the function's own order,
the zero atom `β x^{-λ}` are handled exactly: `c_k(c) = c (λ)_k` and `c_k(x^{-λ}) = 0` for `k >= 1`
"""

import math
import warnings
from typing import Callable, Literal

import numpy as np
from muutils.json_serialize import SerializableDataclass, serializable_dataclass

from stieltjes_cm.constants import LOW_CONFIDENCE_X
from stieltjes_cm.funcspace.gs_function import GSFunction, laplace_transform
from stieltjes_cm.measure.calculus import derived_measure
from stieltjes_cm.measure.measure import Measure, ScanGrid
from stieltjes_cm.operators.coefficients import (
    key_identity_coefficients,
    leibniz_coefficients,
    recursion_coefficients,
)
from stieltjes_cm.special.specfun import binomial, pochhammer

OperatorRoute = Literal["leibniz", "key_identity", "recursion"]
OPERATOR_ROUTES: tuple[OperatorRoute, ...] = ("leibniz", "key_identity", "recursion")

_ROUTE_COEFFICIENTS: dict[OperatorRoute, Callable[[float, int, int], tuple[float, ...]]] = {
    "leibniz": leibniz_coefficients,
    "key_identity": key_identity_coefficients,
    "recursion": recursion_coefficients,
}


def t_op(
    f: GSFunction,
    n: int,
    k: int,
    x: float,
    lam: float | None = None,
    route: OperatorRoute = "leibniz",
) -> float:
    """`T_{n,k}^λ(f)(x) = (-1)^n Σ_m coef_m x^m f^{(n+m)}(x)` with the coefficients of `route`

    `lam` defaults to the order of `f`

    # Raises:
     - `DerivativeCapabilityError` : if `f` does not provide derivatives up to `n + k`
    """
    lam = f.lam if lam is None else lam
    if n < 0 or k < 0:
        raise ValueError(f"operator indices must be non-negative, got {n = }, {k = }")
    if not x > 0:
        raise ValueError(f"operators act on (0, inf), got {x = }")
    if route not in _ROUTE_COEFFICIENTS:
        raise ValueError(f"unknown route {route!r}, expected one of {OPERATOR_ROUTES}")
    if route == "recursion" and lam < 1 and x < LOW_CONFIDENCE_X:
        warnings.warn(
            f"recursion route at {x = } with {lam = } < 1 is low confidence"
        )

    # the zero atom is annihilated exactly at the function's own order
    own_order: bool = lam == f.lam
    coefficients: tuple[float, ...] = _ROUTE_COEFFICIENTS[route](lam, n, k)
    total: float = 0.0
    for m, coef in enumerate(coefficients):
        if coef == 0.0:
            continue
        total += (
            coef
            * x**m
            * f.derivative(
                n + m, x, include_constant=False, include_zero_atom=not own_order
            )
        )
    value: float = (-1.0) ** n * total

    if n == 0:
        value += f.c * pochhammer(lam, k)
    if own_order and k == 0 and f.zero_atom != 0.0:
        value += f.zero_atom * pochhammer(lam, n) * x ** (-lam - n)
    return value


def c_op(
    f: GSFunction,
    k: int,
    x: float,
    route: OperatorRoute = "leibniz",
    lam: float | None = None,
) -> float:
    """`c_k^λ(f)(x) = x^{1-λ} (x^{λ-1+k} f(x))^{(k)}`"""
    return t_op(f, 0, k, x, lam=lam, route=route)


def g_op(
    f: GSFunction,
    k: int,
    x: float,
    route: OperatorRoute = "leibniz",
    lam: float | None = None,
) -> float:
    """`g_k(f)(x) = x^{-λ} (x^{λ-1+k} f(x))^{(k-1)}`, computed as `c_{k-1}^{λ+1}(f)`"""
    if k < 1:
        raise ValueError(f"g_k needs k >= 1, got {k = }")
    lam = f.lam if lam is None else lam
    return c_op(f, k - 1, x, route=route, lam=lam + 1.0)


def c_op_measure_side(
    mu: Measure,
    lam: float,
    k: int,
    x: float,
    c: float = 0.0,
) -> float:
    """`∫ e^{-xs} s^{λ-1} dμ_k(s) + c (λ)_k` with `μ_k = (-1)^k s^k ∂^k μ`

    # Raises:
     - `NotAMeasureError` : propagated from `derived_measure`
    """
    mu_k: Measure = derived_measure(mu, k)
    return laplace_transform(mu_k, lam, x, 0, component=f"derived measure of order {k}") + c * pochhammer(
        lam, k
    )


@serializable_dataclass(frozen=True, kw_only=True)
class DerivativeGapReport(SerializableDataclass):
    """`T_{n,k}` against `(-1)^n` times the `n`-th central difference of `c_k` with step `h`"""

    n: int
    k: int
    x: float
    h: float
    t_value: float
    fd_value: float
    abs_gap: float
    rel_gap: float


def t_equals_deriv_c_check(
    f: GSFunction,
    n: int,
    k: int,
    x: float,
    h: float | None = None,
    lam: float | None = None,
) -> DerivativeGapReport:
    """compare `T_{n,k}^λ(f)(x)` with `(-1)^n Δ_h^n c_k^λ(f)(x) / h^n` (central stencil)

    the default step is `eps^{1/(n+2)} max(1, x)`
    """
    if h is None:
        h = float(np.finfo(float).eps) ** (1.0 / (n + 2)) * max(1.0, x)
    if not x - n * h > 0:
        raise ValueError(f"stencil leaves the domain: {x = }, {n = }, {h = }")
    t_value: float = t_op(f, n, k, x, lam=lam)
    if n == 0:
        fd_value: float = c_op(f, k, x, lam=lam)
    else:
        fd_value = (-1.0) ** n * sum(
            (-1.0) ** i * binomial(n, i) * c_op(f, k, x + (n / 2.0 - i) * h, lam=lam)
            for i in range(n + 1)
        ) / h**n
    abs_gap: float = abs(t_value - fd_value)
    return DerivativeGapReport(
        n=n,
        k=k,
        x=x,
        h=h,
        t_value=t_value,
        fd_value=fd_value,
        abs_gap=abs_gap,
        rel_gap=abs_gap / max(1.0, abs(t_value)),
    )


def g_recurrence_check(
    f: GSFunction,
    k: int,
    grid: ScanGrid,
    lam: float | None = None,
) -> float:
    """largest `|g_k - c_{k-1} - (k-1) g_{k-1}| / (1 + |g_k|)` over the grid, for `k >= 2`"""
    if k < 2:
        raise ValueError(f"the g recurrence needs k >= 2, got {k = }")
    gap: float = 0.0
    for x in grid:
        g_k: float = g_op(f, k, x, lam=lam)
        rhs: float = c_op(f, k - 1, x, lam=lam) + (k - 1) * g_op(f, k - 1, x, lam=lam)
        gap = max(gap, abs(g_k - rhs) / (1.0 + abs(g_k)))
    return gap


class OperatorImage:
    """the function `x -> c_k^λ(f)(x)`, with `derivative(n, x) = (-1)^n T_{n,k}^λ(f)(x)`"""

    def __init__(
        self,
        f: GSFunction,
        k: int,
        lam: float | None = None,
        route: OperatorRoute = "leibniz",
    ) -> None:
        self.f: GSFunction = f
        self.k: int = k
        self.lam: float = f.lam if lam is None else lam
        self.route: OperatorRoute = route

    def __repr__(self) -> str:
        return f"OperatorImage(k={self.k}, lam={self.lam}, route={self.route!r}, f={self.f.route})"

    def derivative_cap(self) -> int:
        return self.f.derivative_cap() - self.k

    def derivative(self, n: int, x: float) -> float:
        return (-1.0) ** n * t_op(self.f, n, self.k, x, lam=self.lam, route=self.route)

    def eval(self, x: float) -> float:
        return c_op(self.f, self.k, x, route=self.route, lam=self.lam)

    def __call__(self, x: float) -> float:
        return self.eval(x)


def route_agreement(
    f: GSFunction,
    k: int,
    grid: ScanGrid,
    lam: float | None = None,
) -> dict[OperatorRoute, float]:
    """largest `|c_k(route) - c_k(leibniz)| / (1 + |c_k(leibniz)|)` over the grid, per route"""
    gaps: dict[OperatorRoute, float] = {r: 0.0 for r in OPERATOR_ROUTES}
    for x in grid:
        reference: float = c_op(f, k, x, route="leibniz", lam=lam)
        for route in OPERATOR_ROUTES[1:]:
            value: float = c_op(f, k, x, route=route, lam=lam)
            gaps[route] = max(gaps[route], abs(value - reference) / (1.0 + abs(reference)))
    if not all(math.isfinite(g) for g in gaps.values()):
        warnings.warn(f"non-finite route gaps for {k = }: {gaps}")
    return gaps
