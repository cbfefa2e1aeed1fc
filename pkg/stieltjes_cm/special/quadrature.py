"""adaptive quadrature on subintervals of `(0, ∞)`

wraps `scipy.integrate.quad` with:
- a substitution removing integrable power singularities `s^e`, `-1 < e < 0`, at the origin
- splitting at `1` and at caller-provided length scales, so that sharply peaked integrands are not missed
- mapping of the tail `(B, ∞)` onto `(0, 1/B)` by `s = 1/t`
- a doubling/halving probe that decides divergence
"""

import math
import typing
from typing import Callable, Iterable

from scipy import integrate

from stieltjes_cm.constants import (
    DIVERGENCE_PROBE_STEPS,
    DIVERGENCE_RELATIVE_CHANGE,
    QUAD_EPSABS,
    QUAD_EPSREL,
    QUAD_FAIL_RTOL,
    QUAD_LIMIT,
    DivergentIntegralError,
    QuadratureError,
)

Integrand = Callable[[float], float]

# multiples of each length scale added as break points
_SCALE_MULTIPLES: tuple[float, ...] = (0.1, 1.0, 10.0)
# the finite part extends to this multiple of the largest break point
_TAIL_START_FACTOR: float = 10.0


def _quad(h: Integrand, a: float, b: float, points: list[float] | None = None) -> tuple[float, float]:
    """one call to `scipy.integrate.quad`, raising `QuadratureError` when the error estimate is unacceptable"""
    kwargs: dict = dict(
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    if points:
        kwargs["points"] = points
    result: tuple = integrate.quad(h, a, b, **kwargs)
    value: float = float(result[0])
    abserr: float = float(result[1])
    if not math.isfinite(value):
        raise DivergentIntegralError(
            f"integral over ({a}, {b}) is not finite: {value = }"
        )
    if len(result) > 3 and abserr > max(QUAD_FAIL_RTOL * abs(value), 1e-12):
        raise QuadratureError(
            f"quadrature over ({a}, {b}) did not converge: {value = }, {abserr = }, message: {result[3]}"
        )
    return value, abserr


def _quad_near_zero(h: Integrand, b: float, singular_exponent: float) -> float:
    """`∫_0^b h(s) ds` where `h(s) ~ s^e` at the origin

    for `-1 < e < 0` substitutes `s = b u^β`, `β = 1/(e+1)`, which makes the integrand bounded
    """
    if -1.0 < singular_exponent < 0.0:
        beta: float = 1.0 / (singular_exponent + 1.0)

        def transformed(u: float) -> float:
            if u <= 0.0:
                return 0.0
            return h(b * u**beta) * b * beta * u ** (beta - 1.0)

        return _quad(transformed, 0.0, 1.0)[0]
    return _quad(h, 0.0, b)[0]


def _break_points(a: float, b: float, scales: Iterable[float]) -> list[float]:
    candidates: set[float] = {1.0}
    for scale in scales:
        if scale > 0 and math.isfinite(scale):
            candidates.update(c * scale for c in _SCALE_MULTIPLES)
    return sorted(p for p in candidates if a < p < b)


def quad_interval(
    h: Integrand,
    a: float,
    b: float,
    singular_exponent: float = 0.0,
    scales: Iterable[float] = (),
    points: Iterable[float] = (),
) -> float:
    """`∫_a^b h(s) ds` for `0 <= a < b <= ∞`

    # Parameters:
     - `h : Integrand`
        integrand, finite on `(a, b)`
     - `singular_exponent : float`
        exponent `e` of the behaviour `h(s) ~ s^e` at the origin. only used when `a == 0`
        (defaults to `0.0`)
     - `scales : Iterable[float]`
        length scales of the integrand (e.g. `1/x` for a factor `e^{-xs}`), break points are placed around them
        (defaults to `()`)
     - `points : Iterable[float]`
        extra break points, e.g. discontinuities
        (defaults to `()`)

    # Returns:
     - `float`
        the integral

    # Raises:
     - `QuadratureError` : if any panel fails to converge
    """
    if not (0.0 <= a < b):
        if a == b:
            return 0.0
        raise ValueError(f"need 0 <= a < b, got {a = }, {b = }")
    scales = list(scales)
    breaks: list[float] = sorted(
        set(_break_points(a, b, scales)) | {p for p in points if a < p < b}
    )

    finite_end: float
    if math.isinf(b):
        finite_end = _TAIL_START_FACTOR * max([1.0, 2.0 * a, *breaks])
    else:
        finite_end = b
    nodes: list[float] = [a, *[p for p in breaks if p < finite_end], finite_end]

    total: float = 0.0
    for lo, hi in zip(nodes, nodes[1:]):
        if lo == 0.0:
            total += _quad_near_zero(h, hi, singular_exponent)
        else:
            total += _quad(h, lo, hi)[0]

    if math.isinf(b):
        # s = 1/t maps (finite_end, ∞) onto (0, 1/finite_end)
        def tail(t: float) -> float:
            if t <= 0.0:
                return 0.0
            return h(1.0 / t) / (t * t)

        total += _quad(tail, 0.0, 1.0 / finite_end)[0]

    return total


def quad_semiinfinite(
    integrand: Integrand,
    lam_singularity: float = 0.0,
    scales: Iterable[float] = (),
) -> float:
    """`∫_0^∞ integrand(s) ds`, where `integrand(s) ~ s^lam_singularity` at the origin

    ```
    >>> quad_semiinfinite(lambda s: math.exp(-s))
    1.0
    >>> quad_semiinfinite(lambda s: s**-0.5 * math.exp(-s), lam_singularity=-0.5)
    1.7724538509055159
    ```
    """
    return quad_interval(integrand, 0.0, math.inf, singular_exponent=lam_singularity, scales=scales)


def integrate_with_divergence_probe(
    h: Integrand,
    a: float,
    b: float,
    singular_exponent: float = 0.0,
    points: Iterable[float] = (),
) -> float:
    """`∫_a^b h(s) ds` for a non-negative integrand, returning `math.inf` when the integral diverges

    divergence is decided by panels: the upper limit is doubled (for `b = ∞`) or the lower limit is
    halved (for `a = 0`) and the integral is deemed infinite if the last two panels each change the
    running total by more than 1%
    """
    points = list(points)
    if a == 0.0:
        if _probe_diverges(h, lower=True, anchor=min(1.0, b if math.isfinite(b) else 1.0)):
            return math.inf
    if math.isinf(b):
        if _probe_diverges(h, lower=False, anchor=max(1.0, 2.0 * a, *points)):
            return math.inf
    if a == 0.0 and singular_exponent <= -1.0:
        # integrable after all, but too singular for the substitution
        singular_exponent = 0.0
    try:
        return quad_interval(h, a, b, singular_exponent=singular_exponent, points=points)
    except DivergentIntegralError:
        return math.inf


def _probe_diverges(h: Integrand, lower: bool, anchor: float) -> bool:
    panels: list[float] = list()
    running: float = 0.0
    edge: float = anchor
    for _ in range(DIVERGENCE_PROBE_STEPS):
        try:
            if lower:
                panel = _quad(h, edge / 2.0, edge)[0]
                edge /= 2.0
            else:
                panel = _quad(h, edge, 2.0 * edge)[0]
                edge *= 2.0
        except QuadratureError:
            return True
        running += panel
        panels.append(panel)
    if not math.isfinite(running):
        return True
    if running == 0.0:
        return False
    last_two: list[float] = panels[-2:]
    return all(abs(p) > DIVERGENCE_RELATIVE_CHANGE * abs(running) for p in last_two)
