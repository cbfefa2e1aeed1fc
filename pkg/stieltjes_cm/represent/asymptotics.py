"""large-`x` expansion of a Stieltjes transform with finite moments

for `f(x) = ∫ (x+t)^{-λ} dμ(t)`:
```
x^{λ-1} f(x) = Σ_{k<n} α_k x^{-k-1} + r_n(x),    α_k = (-1)^k (λ)_k s_k(μ) / k!
```
with `x^n r_n(x) -> 0`. only decay is checked, no rate is claimed
"""

import math

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.constants import DivergentIntegralError
from stieltjes_cm.funcspace.gs_function import stieltjes_transform
from stieltjes_cm.measure.calculus import moment
from stieltjes_cm.measure.measure import Measure
from stieltjes_cm.special.specfun import pochhammer
from stieltjes_cm.utils import decade_points


@serializable_dataclass(
    frozen=True,
    kw_only=True,
    properties_to_serialize=["n", "decays"],
)
class AsymptoticExpansion(SerializableDataclass):
    """coefficients `α_0..α_{n-1}` of `x^{λ-1} f(x)` in powers of `1/x`, and the remainder `r_n`"""

    lam: float
    coefficients: tuple[float, ...] = serializable_field(
        serialization_fn=lambda c: list(c),
        loading_fn=lambda data: tuple(data["coefficients"]),
    )
    mu: Measure = serializable_field(
        serialization_fn=lambda m: m.spec(),
        loading_fn=lambda data: Measure.from_spec(data["mu"]),
    )
    probe_points: tuple[float, ...] = serializable_field(
        default_factory=lambda: tuple(decade_points((1, 2, 3))),
        serialization_fn=lambda pts: list(pts),
        loading_fn=lambda data: tuple(data["probe_points"]),
    )

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def f(self, x: float) -> float:
        """`∫ (x+t)^{-λ} dμ(t)`"""
        return stieltjes_transform(self.mu, self.lam, x, component="expansion measure")

    def partial_sum(self, x: float) -> float:
        return sum(a * x ** (-k - 1.0) for k, a in enumerate(self.coefficients))

    def remainder(self, x: float) -> float:
        """`r_n(x) = x^{λ-1} f(x) - Σ_{k<n} α_k x^{-k-1}`"""
        if not x > 0:
            raise ValueError(f"need x > 0, got {x = }")
        return x ** (self.lam - 1.0) * self.f(x) - self.partial_sum(x)

    def decay_probe(self) -> list[tuple[float, float, float]]:
        """`(x, r_n(x), x^n r_n(x))` on the increasing probe points"""
        rows: list[tuple[float, float, float]] = list()
        for x in self.probe_points:
            r: float = self.remainder(x)
            rows.append((x, r, x**self.n * r))
        return rows

    @property
    def decays(self) -> bool:
        """whether `|x^n r_n(x)|` is strictly decreasing over the probe points (or identically zero)"""
        scaled: list[float] = [abs(row[2]) for row in self.decay_probe()]
        if all(v == 0.0 for v in scaled):
            return True
        return all(b < a for a, b in zip(scaled, scaled[1:]))

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["x", "r_n", "x^n r_n"]]
        rows.extend(list(row) for row in self.decay_probe())
        return rows


def asymptotic_expand(mu: Measure, lam: float, n: int) -> AsymptoticExpansion:
    """`α_k = (-1)^k (λ)_k s_k(μ) / k!` for `k < n`

    # Raises:
     - `DivergentIntegralError` : naming the first moment that diverges
    """
    if n < 0:
        raise ValueError(f"expansion length must be non-negative, got {n = }")
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam = }")
    coefficients: list[float] = list()
    for k in range(n):
        s_k: float = moment(mu, k)
        if math.isinf(s_k):
            raise DivergentIntegralError(f"moment of order {k} diverges, the expansion stops before it")
        coefficients.append((-1.0) ** k * pochhammer(lam, k) * s_k / math.factorial(k))
    return AsymptoticExpansion(lam=lam, coefficients=tuple(coefficients), mu=mu)
