"""numerical tests of complete monotonicity, of membership in `C_N^λ`, and of the sign/limit clauses behind it"""

import math
import typing
from typing import Callable, Protocol

from stieltjes_cm.cmtest.reports import (
    ClassEntry,
    ClassReport,
    CMMethod,
    CMReport,
    LimitProbe,
    LowerOrdersReport,
    OrderResult,
    SignLimitReport,
)
from stieltjes_cm.constants import (
    DEFAULT_CLASS_N,
    PROBE_DECADES_ZERO,
    DerivativeCapabilityError,
    EvaluationError,
    NotAMeasureError,
    QuadratureError,
)
from stieltjes_cm.funcspace.gs_function import GSFunction
from stieltjes_cm.measure.calculus import derived_measure, positivity_scan
from stieltjes_cm.measure.measure import ScanGrid, ScanReport, Verdict
from stieltjes_cm.operators.operators import OperatorImage
from stieltjes_cm.special.specfun import binomial, falling_factorial
from stieltjes_cm.utils import (
    aitken_limit,
    decade_points,
    is_cauchy_stable,
    is_monotone_decay,
)

# failures that make an order inconclusive rather than failed
_NUMERICAL_ERRORS: tuple[type[Exception], ...] = (
    DerivativeCapabilityError,
    EvaluationError,
    QuadratureError,
)


class DifferentiableFunction(Protocol):
    def eval(self, x: float) -> float:
        ...

    def derivative(self, n: int, x: float) -> float:
        ...


def _order_result(
    order: int,
    signed_values: typing.Sequence[tuple[float, float]],
    tolerance: float,
) -> OrderResult:
    witness_x, min_value = min(signed_values, key=lambda xv: xv[1])
    if not math.isfinite(min_value):
        return OrderResult(
            order=order,
            verdict=Verdict.INCONCLUSIVE,
            min_value=min_value,
            witness_x=witness_x,
            tolerance=tolerance,
            message="non-finite value",
        )
    return OrderResult(
        order=order,
        verdict=Verdict.PASS if min_value >= -tolerance else Verdict.FAIL,
        min_value=min_value,
        witness_x=witness_x,
        tolerance=tolerance,
    )


def _inconclusive(order: int, error: Exception) -> OrderResult:
    return OrderResult(
        order=order,
        verdict=Verdict.INCONCLUSIVE,
        message=f"{type(error).__name__}: {error}",
    )


def cm_check_derivatives(
    f: DifferentiableFunction,
    N: int = DEFAULT_CLASS_N,
    grid: ScanGrid | None = None,
    tol: float | None = None,
) -> CMReport:
    """minima of `(-1)^n f^{(n)}` over the grid for `n <= N`

    the tolerance at order `n` is `tol (1 + |f^{(n)}(x)|)` at the minimizing point `x`, so a negative value
    anywhere on the grid is judged against its own magnitude. an order whose evaluation fails
    (e.g. above the derivative cap) is inconclusive, as are all higher orders
    """
    grid = ScanGrid.log_spaced() if grid is None else grid
    tol = grid.tolerance if tol is None else tol
    orders: list[OrderResult] = list()
    for n in range(N + 1):
        try:
            signed: list[tuple[float, float]] = [
                (x, (-1.0) ** n * f.derivative(n, x)) for x in grid
            ]
        except _NUMERICAL_ERRORS as e:
            orders.extend(_inconclusive(m, e) for m in range(n, N + 1))
            break
        scale: float = abs(min(v for _, v in signed))
        orders.append(_order_result(n, signed, tol * (1.0 + scale)))
    return CMReport(
        method=CMMethod.DERIVATIVE_SIGN,
        orders=tuple(orders),
        tolerance=tol,
        n_points=len(grid),
    )


def cm_check_differences(
    f: DifferentiableFunction,
    N: int = DEFAULT_CLASS_N,
    grid: ScanGrid | None = None,
    h: float | None = None,
    tol: float | None = None,
) -> CMReport:
    """minima of `(-1)^n Δ_h^n f(x) = Σ_i (-1)^i C(n,i) f(x + i h)` over the grid

    `h` defaults to half the smallest grid gap; the tolerance at order `n` is `tol (1 + 2^n |f(x_min)|)`
    """
    grid = ScanGrid.log_spaced() if grid is None else grid
    tol = grid.tolerance if tol is None else tol
    h = grid.smallest_gap / 2.0 if h is None else h
    if not h > 0:
        raise ValueError(f"difference step must be positive, got {h = }")

    values: dict[float, float] = dict()

    def f_at(x: float) -> float:
        if x not in values:
            values[x] = f.eval(x)
        return values[x]

    orders: list[OrderResult] = list()
    try:
        f_min: float = abs(f_at(grid.points[0]))
    except _NUMERICAL_ERRORS as e:
        return CMReport(
            method=CMMethod.FINITE_DIFFERENCE,
            orders=tuple(_inconclusive(n, e) for n in range(N + 1)),
            tolerance=tol,
            n_points=len(grid),
        )
    for n in range(N + 1):
        try:
            signed: list[tuple[float, float]] = [
                (
                    x,
                    sum(
                        (-1.0) ** i * binomial(n, i) * f_at(x + i * h)
                        for i in range(n + 1)
                    ),
                )
                for x in grid
            ]
        except _NUMERICAL_ERRORS as e:
            orders.extend(_inconclusive(m, e) for m in range(n, N + 1))
            break
        orders.append(_order_result(n, signed, tol * (1.0 + 2.0**n * f_min)))
    return CMReport(
        method=CMMethod.FINITE_DIFFERENCE,
        orders=tuple(orders),
        tolerance=tol,
        n_points=len(grid),
    )


def _measure_side_scan(
    f: GSFunction, k: int, lam: float, grid: ScanGrid
) -> tuple[ScanReport | None, str | None]:
    """positivity scan of `μ_k` for the laplace-side measure of `f` at order `lam`"""
    if f.laplace_measure is None:
        return None, "no laplace-side measure"
    try:
        mu_k = derived_measure(f.laplace_measure_at(lam), k)
    except NotAMeasureError as e:
        return None, f"measure side not applicable: {e}"
    except DerivativeCapabilityError as e:
        return None, f"measure side not available: {e}"
    try:
        return positivity_scan(mu_k, grid), None
    except _NUMERICAL_ERRORS as e:
        return None, f"measure scan failed: {type(e).__name__}: {e}"


def class_membership(
    f: GSFunction,
    N: int = DEFAULT_CLASS_N,
    grid: ScanGrid | None = None,
    tol: float | None = None,
    lam: float | None = None,
    derivative_orders: int | None = None,
    measure_side: bool = True,
    verbose: bool = False,
) -> ClassReport:
    """test `c_k^λ(f)` for complete monotonicity for every `k <= N`

    each `c_k` is checked to `derivative_orders` (default `N`) derivative orders, fewer when the derivative
    cap of `f` would be exceeded. when `f` has a laplace-side measure, the positivity of `μ_k` is scanned too,
    and a failure on either side fails the entry
    """
    print_log: Callable = print if verbose else lambda *_a, **_kw: None
    grid = ScanGrid.log_spaced() if grid is None else grid
    lam = f.lam if lam is None else lam
    derivative_orders = N if derivative_orders is None else derivative_orders

    entries: list[ClassEntry] = list()
    for k in range(N + 1):
        notes: list[str] = list()
        image: OperatorImage = OperatorImage(f, k, lam=lam)
        n_orders: int = min(derivative_orders, image.derivative_cap())
        function_side: CMReport | None = None
        if n_orders < 0:
            notes.append(f"order {k} exceeds the derivative cap of f")
        else:
            if n_orders < derivative_orders:
                notes.append(f"checked {n_orders} derivative orders, capped by the function")
            function_side = cm_check_derivatives(image, N=n_orders, grid=grid, tol=tol)

        scan: ScanReport | None = None
        if measure_side:
            scan, note = _measure_side_scan(f, k, lam, grid)
            if note is not None:
                notes.append(note)

        entry: ClassEntry = ClassEntry(
            k=k, function_side=function_side, measure_scan=scan, notes=tuple(notes)
        )
        if entry.disagreement:
            print_log(f"k={k}: function side and measure side disagree")
        print_log(f"k={k}: {entry.verdict.value}")
        entries.append(entry)

    return ClassReport(lam=lam, N=N, entries=tuple(entries))


def _weighted_derivative(f: GSFunction, a: float, j: int, x: float) -> float:
    """`(x^a f)^{(j)}(x) = Σ_i C(j,i) a(a-1)...(a-i+1) x^{a-i} f^{(j-i)}(x)`"""
    return sum(
        binomial(j, i) * falling_factorial(a, i) * x ** (a - i) * f.derivative(j - i, x)
        for i in range(j + 1)
        if falling_factorial(a, i) != 0.0
    )


def sign_limit_checks(
    f: GSFunction,
    k: int,
    grid: ScanGrid | None = None,
    lam: float | None = None,
    certify: bool = False,
) -> SignLimitReport:
    """the sign and limit clauses for `h = x^{λ-1+k} f`, see `SignLimitReport`

    limits are probed at `x = 10^-2, ..., 10^-6`: vanishing limits need monotone decay toward zero,
    the finite limit needs Cauchy stabilization and is estimated by Aitken extrapolation.
    with `certify`, membership of `f` in `C_k^λ` is tested first and recorded
    """
    grid = ScanGrid.log_spaced() if grid is None else grid
    lam = f.lam if lam is None else lam
    a: float = lam - 1.0 + k

    signs: list[OrderResult] = list()
    for j in range(k + 1):
        try:
            values: list[tuple[float, float]] = [
                (x, _weighted_derivative(f, a, j, x)) for x in grid
            ]
        except _NUMERICAL_ERRORS as e:
            signs.append(_inconclusive(j, e))
            continue
        scale: float = abs(values[0][1])
        signs.append(_order_result(j, values, grid.tolerance * (1.0 + scale)))

    points: tuple[float, ...] = tuple(decade_points(PROBE_DECADES_ZERO))

    def probe(j: int) -> tuple[float, ...]:
        return tuple(_weighted_derivative(f, a, j, x) for x in points)

    vanishing: list[LimitProbe] = list()
    for j in range(max(k - 1, 0)):
        try:
            values_j: tuple[float, ...] = probe(j)
        except _NUMERICAL_ERRORS:
            vanishing.append(
                LimitProbe(j=j, points=points, values=(), verdict=Verdict.INCONCLUSIVE)
            )
            continue
        decays: bool = is_monotone_decay(values_j, tol=grid.tolerance)
        vanishing.append(
            LimitProbe(
                j=j,
                points=points,
                values=values_j,
                verdict=Verdict.PASS if decays else Verdict.FAIL,
                limit=0.0 if decays else None,
            )
        )

    finite_limit: LimitProbe | None = None
    if k >= 1:
        try:
            values_top: tuple[float, ...] = probe(k - 1)
            stable: bool = is_cauchy_stable(values_top, rtol=1e-3, atol=grid.tolerance)
            finite_limit = LimitProbe(
                j=k - 1,
                points=points,
                values=values_top,
                verdict=Verdict.PASS if stable else Verdict.FAIL,
                limit=aitken_limit(values_top) if stable else None,
            )
        except _NUMERICAL_ERRORS:
            finite_limit = LimitProbe(
                j=k - 1, points=points, values=(), verdict=Verdict.INCONCLUSIVE
            )

    hypothesis: bool | None = None
    if certify:
        hypothesis = class_membership(f, N=k, grid=grid, lam=lam).verdict == Verdict.PASS

    return SignLimitReport(
        lam=lam,
        k=k,
        signs=tuple(signs),
        vanishing=tuple(vanishing),
        finite_limit=finite_limit,
        hypothesis_verified=hypothesis,
    )


def lower_orders_check(
    f: GSFunction,
    k: int,
    N: int = DEFAULT_CLASS_N,
    grid: ScanGrid | None = None,
    lam: float | None = None,
) -> LowerOrdersReport:
    """test whether non-negative `c_0..c_{k-1}` together with CM `c_k` come with CM `c_0..c_{k-1}`

    only the function side is used. a counterexample is reported when the premises hold and a lower order fails
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k = }")
    grid = ScanGrid.log_spaced() if grid is None else grid
    lam = f.lam if lam is None else lam

    reports: list[CMReport] = list()
    for j in range(k + 1):
        image: OperatorImage = OperatorImage(f, j, lam=lam)
        reports.append(
            cm_check_derivatives(image, N=max(0, min(N, image.derivative_cap())), grid=grid)
        )
    nonnegative: tuple[bool, ...] = tuple(
        r.orders[0].verdict == Verdict.PASS for r in reports[:k]
    )
    return LowerOrdersReport(
        lam=lam,
        k=k,
        nonnegative_lower=nonnegative,
        top_order=reports[k].verdict,
        lower_orders=tuple(r.verdict for r in reports[:k]),
    )
