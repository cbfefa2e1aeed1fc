"""generalized Bernstein functions and the functions built from the tails of their measures

for an admissible measure `μ` (`∫_0^1 dμ < ∞`, `∫_1^∞ t^{-λ} dμ < ∞`):
```
g(x) = α x^λ + β + ∫ γ(λ, xt) t^{-λ} dμ(t)
f(x) = α + β x^{-λ} + ∫ e^{-xs} s^{λ-1} M(s) ds,    M(s) = ∫_{t>s} t^{-λ} dμ(t)
```
and `g = x^λ f`, so that `x^{1-λ} g' = c_1^λ(f)` is completely monotonic
"""

import math
from dataclasses import dataclass
from typing import ClassVar

from stieltjes_cm.constants import (
    CLOSED_FORM_DERIVATIVE_CAP,
    InadmissibleMeasureError,
    QuadratureError,
)
from stieltjes_cm.funcspace.gs_function import GSFunction, laplace_transform
from stieltjes_cm.measure.calculus import (
    AdmissibilityReport,
    levy_admissibility,
    tail_power_integral,
)
from stieltjes_cm.measure.densities import (
    MonomialDerivativeDensity,
    SmoothDensity,
    register_density_family,
)
from stieltjes_cm.measure.measure import DensityPiece, Measure
from stieltjes_cm.special.quadrature import quad_interval
from stieltjes_cm.special.specfun import (
    binomial,
    falling_factorial,
    lower_incomplete_gamma,
)


@register_density_family
@dataclass(frozen=True, kw_only=True)
class TailPowerDensity(SmoothDensity):
    """`M(s) = ∫_{t>s} t^{-λ} dμ(t)` restricted to a segment `(a, b)` free of atoms and piece boundaries of `μ`

    at the endpoints the one-sided limit from inside the segment is returned, so an atom at `b` counts
    at `s = b` and an atom at `a` does not. derivatives are `M^{(j)}(s) = -(t^{-λ} w)^{(j-1)}(s)`
    """

    family: ClassVar[str] = "tail_power"

    measure: Measure
    lam: float
    a: float = 0.0
    b: float = math.inf

    @property
    def _inner(self) -> SmoothDensity | None:
        for p in self.measure.pieces:
            if p.a <= self.a and self.b <= p.b:
                return p.density
        return None

    @property
    def max_derivative_order(self) -> int:
        inner: SmoothDensity | None = self._inner
        if inner is None:
            return CLOSED_FORM_DERIVATIVE_CAP
        return inner.max_derivative_order + 1

    def _eval(self, j: int, s: float) -> float:
        if j == 0:
            value: float = tail_power_integral(self.measure, self.lam, s)
            if s == self.b:
                value += sum(w * s ** (-self.lam) for t, w in self.measure.atoms if t == s)
            return value
        inner: SmoothDensity | None = self._inner
        if inner is None:
            return 0.0
        return -MonomialDerivativeDensity(base=inner, q=-self.lam).eval(j - 1, s)

    def exponent_at_zero(self, j: int = 0) -> float:
        inner: SmoothDensity | None = self._inner
        if self.a > 0 or inner is None:
            return 0.0
        if j == 0:
            return min(0.0, 1.0 - self.lam + inner.exponent_at_zero(0))
        return -self.lam - (j - 1) + inner.exponent_at_zero(0)

    def params(self) -> dict:
        return dict(
            measure=self.measure.spec(),
            lam=self.lam,
            a=self.a,
            b=None if math.isinf(self.b) else self.b,
        )

    @classmethod
    def from_spec(cls, spec: dict) -> "TailPowerDensity":
        params: dict = spec["params"]
        return cls(
            measure=Measure.from_spec(params["measure"]),
            lam=float(params["lam"]),
            a=float(params["a"]),
            b=math.inf if params["b"] is None else float(params["b"]),
        )


def _require_admissible(mu: Measure, lam: float) -> AdmissibilityReport:
    report: AdmissibilityReport = levy_admissibility(mu, lam)
    if not report.admissible:
        raise InadmissibleMeasureError(
            f"measure is not admissible for {lam = }: {report.failing_condition}"
        )
    return report


def tail_measure(mu: Measure, lam: float) -> Measure:
    """the measure `M(s) ds` with `M(s) = ∫_{t>s} t^{-λ} dμ(t)`, split at atoms and piece boundaries of `μ`"""
    edges: list[float] = [0.0, *mu.breakpoints]
    pieces: list[DensityPiece] = [
        DensityPiece(
            a=lo,
            b=hi,
            density=TailPowerDensity(measure=mu, lam=lam, a=lo, b=hi),
        )
        for lo, hi in zip(edges, edges[1:])
    ]
    # the tail is not identically zero past the last breakpoint only if a density extends to infinity
    if any(math.isinf(p.b) for p in mu.pieces):
        last: float = edges[-1]
        pieces.append(
            DensityPiece(
                a=last,
                b=math.inf,
                density=TailPowerDensity(measure=mu, lam=lam, a=last, b=math.inf),
            )
        )
    return Measure(pieces=tuple(pieces))


def build_tail_function(
    alpha: float,
    beta: float,
    lam: float,
    mu: Measure,
) -> GSFunction:
    """`f(x) = α + β x^{-λ} + ∫ e^{-xs} s^{λ-1} M(s) ds`, see module docstring

    `β` is stored as the zero atom, so `f` contains `β x^{-λ}` exactly

    # Raises:
     - `InadmissibleMeasureError` : naming the diverging integral
    """
    _require_admissible(mu, lam)
    return GSFunction(lam=lam, c=alpha, zero_atom=beta, laplace_measure=tail_measure(mu, lam))


class BernsteinFunction:
    """`g(x) = α x^λ + β + ∫ γ(λ, xt) t^{-λ} dμ(t)` with derivatives

    `g'(x) = α λ x^{λ-1} + x^{λ-1} L(x)` with `L(x) = ∫ e^{-xt} dμ(t)`, higher derivatives by Leibniz on `x^{λ-1} L`
    """

    def __init__(self, alpha: float, beta: float, lam: float, mu: Measure) -> None:
        if alpha < 0 or beta < 0:
            raise ValueError(f"alpha and beta must be non-negative, got {alpha = }, {beta = }")
        self.admissibility: AdmissibilityReport = _require_admissible(mu, lam)
        self.alpha: float = alpha
        self.beta: float = beta
        self.lam: float = lam
        self.mu: Measure = mu

    def __repr__(self) -> str:
        return f"BernsteinFunction(alpha={self.alpha}, beta={self.beta}, lam={self.lam}, mu={self.mu.spec()})"

    def eval(self, x: float) -> float:
        if not x > 0:
            raise ValueError(f"need x > 0, got {x = }")
        lam: float = self.lam
        total: float = self.alpha * x**lam + self.beta
        for t, w in self.mu.atoms:
            total += w * lower_incomplete_gamma(lam, x * t) * t ** (-lam)
        for piece in self.mu.pieces:
            density: SmoothDensity = piece.density
            total += quad_interval(
                lambda t: lower_incomplete_gamma(lam, x * t) * t ** (-lam) * density.eval(0, t),
                piece.a,
                piece.b,
                singular_exponent=density.exponent_at_zero(0),
                scales=(1.0 / x,),
            )
        return total

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def _laplace(self, j: int, x: float) -> float:
        """`L^{(j)}(x) = (-1)^j ∫ e^{-xt} t^j dμ(t)`"""
        return laplace_transform(self.mu, 1.0, x, j, component="levy measure")

    def derivative(self, n: int, x: float) -> float:
        if n == 0:
            return self.eval(x)
        lam: float = self.lam
        value: float = self.alpha * lam * falling_factorial(lam - 1.0, n - 1) * x ** (lam - n)
        for i in range(n):
            fall: float = falling_factorial(lam - 1.0, i)
            if fall == 0.0:
                continue
            value += binomial(n - 1, i) * fall * x ** (lam - 1.0 - i) * self._laplace(n - 1 - i, x)
        return value

    def scaled_derivative(self, x: float) -> float:
        """`x^{1-λ} g'(x) = α λ + ∫ e^{-xt} dμ(t)`"""
        return self.alpha * self.lam + self._laplace(0, x)

    def scaled_derivative_function(self) -> GSFunction:
        """`x^{1-λ} g'` as an order-one function, for complete monotonicity tests"""
        return GSFunction(lam=1.0, c=self.alpha * self.lam, laplace_measure=self.mu)

    def tail_function(self) -> GSFunction:
        """the `f` with `g = x^λ f`"""
        return build_tail_function(self.alpha, self.beta, self.lam, self.mu)


def build_bernstein_function(
    alpha: float,
    beta: float,
    lam: float,
    mu: Measure,
) -> BernsteinFunction:
    """`g(x) = α x^λ + β + ∫ γ(λ, xt) t^{-λ} dμ(t)`

    # Raises:
     - `InadmissibleMeasureError` : naming the diverging integral
    """
    return BernsteinFunction(alpha, beta, lam, mu)


def levy_form(alpha: float, beta: float, mu: Measure, x: float) -> float:
    """`β + α x + ∫ (1 - e^{-xt}) dμ(t)/t`, the order-one Bernstein function in its Lévy form"""
    total: float = beta + alpha * x
    for t, w in mu.atoms:
        total += w * -math.expm1(-x * t) / t
    for piece in mu.pieces:
        density: SmoothDensity = piece.density
        try:
            total += quad_interval(
                lambda t: -math.expm1(-x * t) / t * density.eval(0, t),
                piece.a,
                piece.b,
                singular_exponent=density.exponent_at_zero(0),
                scales=(1.0 / x,),
            )
        except QuadratureError as e:
            raise InadmissibleMeasureError(f"levy integral failed at {x = }: {e}") from e
    return total
