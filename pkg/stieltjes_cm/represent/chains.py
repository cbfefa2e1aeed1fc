"""the chains `M_k, ..., M_1` and `N_j(u) = M_j(1/u)` built from the measure `μ_k` of `c_k^λ(f)`

```
M_{k-m}(u) = ∫_{s>u} s^{-1} (1/u - 1/s)^m / m! dμ_k(s)
```
which is `M_k(u) = ∫_{s>u} s^{-1} dμ_k(s)` integrated `m` times against `s^{-2}` from `u` to infinity.
a function with `c_k^λ(f) = b_k + ∫ e^{-xs} s^{λ-1} dμ_k(s)` is recovered as
```
f(x) = b_k/(λ)_k + l_k x^{-λ}/(k-1)! + ∫ M_1(u) u^{k+λ-2} e^{-xu} du
```
"""

import math
from typing import Callable, Literal

import numpy as np
from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.cmtest.reports import LimitProbe, OrderResult, combine_verdicts
from stieltjes_cm.constants import DivergentIntegralError, PROBE_DECADES_ZERO
from stieltjes_cm.funcspace.gs_function import GSFunction
from stieltjes_cm.measure.calculus import derived_measure, integrate_measure
from stieltjes_cm.measure.measure import Measure, ScanGrid, Verdict
from stieltjes_cm.operators.operators import c_op, g_op
from stieltjes_cm.special.quadrature import quad_interval
from stieltjes_cm.special.specfun import binomial, pochhammer
from stieltjes_cm.utils import aitken_limit, decade_points, is_monotone_decay

ChainMethod = Literal["kernel", "finite_difference"]

# finite-difference sign checks are limited to this order
CHAIN_FD_MAX_ORDER: int = 3


@serializable_dataclass(frozen=True, kw_only=True)
class MChain(SerializableDataclass):
    """the functions `M_k, ..., M_1` of a signed measure `μ_k`, together with the constants `l_k` and `b_k`

    values are memoized per `(j, u)`
    """

    lam: float
    k: int
    mu_k: Measure = serializable_field(
        serialization_fn=lambda m: m.spec(),
        loading_fn=lambda data: Measure.from_spec(data["mu_k"], signed=True),
    )
    l_k: float = serializable_field(default=0.0)
    b_k: float = serializable_field(default=0.0)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"chains need k >= 1, got {self.k = }")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam = }")
        self.__dict__["_memo"] = dict()

    @classmethod
    def from_function(cls, f: GSFunction, k: int, lam: float | None = None) -> "MChain":
        """derive `μ_k` from the laplace side of `f` and extract the constants by extrapolation

        `b_k` is `c (λ)_k` plus the limit of the measure part of `c_k` as `x -> ∞` (at `x = 10^2, 10^3, 10^4`),
        `l_k` is the limit of `x^λ g_k(f)(x)` as `x -> 0` (at `x = 10^-4, 10^-5, 10^-6`)

        # Raises:
         - `NotAMeasureError` : if `μ_k` is not a measure (e.g. `f` has an exponential term and `k >= 1`)
        """
        lam = f.lam if lam is None else lam
        mu_k: Measure = derived_measure(f.laplace_measure_at(lam), k)
        constant_part: float = f.c * pochhammer(lam, k)
        b_k: float = constant_part + aitken_limit(
            [c_op(f, k, x, lam=lam) - constant_part for x in (1e2, 1e3, 1e4)]
        )
        l_k: float = aitken_limit(
            [x**lam * g_op(f, k, x, lam=lam) for x in (1e-4, 1e-5, 1e-6)]
        )
        return cls(lam=lam, k=k, mu_k=mu_k, l_k=l_k, b_k=b_k)

    # chain values
    # ============================================================

    def _check_index(self, j: int) -> None:
        if not 1 <= j <= self.k:
            raise ValueError(f"chain index must lie in [1, {self.k}], got {j = }")

    def M(self, j: int, u: float) -> float:
        """`M_j(u)`, `math.inf` if the defining integral diverges"""
        self._check_index(j)
        if not u > 0:
            raise ValueError(f"chain functions live on (0, inf), got {u = }")
        key: tuple[int, float] = (j, u)
        memo: dict = self.__dict__["_memo"]
        if key not in memo:
            m: int = self.k - j
            norm: float = math.factorial(m)
            memo[key] = integrate_measure(
                self.mu_k,
                lambda s: (1.0 / u - 1.0 / s) ** m / (s * norm),
                lower=u,
            )
        return memo[key]

    def N(self, j: int, u: float) -> float:
        """`N_j(u) = M_j(1/u)`"""
        return self.M(j, 1.0 / u)

    @property
    def M_funcs(self) -> list[Callable[[float], float]]:
        """`[M_k, M_{k-1}, ..., M_1]`"""
        return [lambda u, j=j: self.M(j, u) for j in range(self.k, 0, -1)]

    @property
    def N_funcs(self) -> list[Callable[[float], float]]:
        """`[N_k, N_{k-1}, ..., N_1]`"""
        return [lambda u, j=j: self.N(j, u) for j in range(self.k, 0, -1)]

    @property
    def _atom_locations(self) -> list[float]:
        return [s for s, _ in self.mu_k.atoms]

    def recursion_gap(self, j: int, u: float) -> float:
        """`|M_j(u) - ∫_u^∞ M_{j+1}(s) s^{-2} ds| / (1 + |M_j(u)|)` for `j < k`"""
        if not 1 <= j < self.k:
            raise ValueError(f"the chain recursion needs 1 <= j < {self.k}, got {j = }")
        nested: float = quad_interval(
            lambda s: self.M(j + 1, s) / (s * s),
            u,
            math.inf,
            points=self._atom_locations,
        )
        value: float = self.M(j, u)
        return abs(value - nested) / (1.0 + abs(value))

    def limit_probe(self) -> LimitProbe:
        """`u^λ M_k(u)` on decreasing decades, which must decay to zero"""
        points: tuple[float, ...] = (1e-1, *decade_points(PROBE_DECADES_ZERO))
        values: tuple[float, ...] = tuple(u**self.lam * self.M(self.k, u) for u in points)
        decays: bool = is_monotone_decay(values)
        return LimitProbe(
            j=self.k,
            points=points,
            values=values,
            verdict=Verdict.PASS if decays else Verdict.FAIL,
            limit=0.0 if decays else None,
        )

    # reconstruction
    # ============================================================

    def _constant_terms(self, x: float) -> float:
        return (
            self.b_k / pochhammer(self.lam, self.k)
            + self.l_k / math.factorial(self.k - 1) * x ** (-self.lam)
        )

    def reconstruct(self, x: float) -> float:
        """`b_k/(λ)_k + l_k x^{-λ}/(k-1)! + ∫ M_1(u) u^{k+λ-2} e^{-xu} du`

        equivalently, `l_k/((k-1)! Γ(λ))` added to `M_1(u) u^{k-1}` under the kernel `e^{-xu} u^{λ-1}`
        """
        integral: float = quad_interval(
            lambda u: self.M(1, u) * u ** (self.k + self.lam - 2.0) * math.exp(-x * u),
            0.0,
            math.inf,
            singular_exponent=self.lam - 1.0,
            scales=(1.0 / x,),
            points=self._atom_locations,
        )
        return self._constant_terms(x) + integral

    def reconstruct_via_n_chain(self, x: float) -> float:
        """`b_k/(λ)_k + l_k x^{-λ}/(k-1)! + ∫ N_1(s) s^{-k-λ} e^{-x/s} ds`"""

        def integrand(s: float) -> float:
            if x / s > 700.0:
                return 0.0
            return self.N(1, s) * s ** (-self.k - self.lam) * math.exp(-x / s)

        integral: float = quad_interval(
            integrand,
            0.0,
            math.inf,
            scales=(x,),
            points=[1.0 / s for s in self._atom_locations],
        )
        return self._constant_terms(x) + integral

    # sign conditions
    # ============================================================

    def kernel_derivative(self, m: int, i: int, u: float) -> float:
        """`∂_u^i (M_{k-m}(u) u^m)` from the kernel `s^{-1} (1 - u/s)^m / m!`

        for `i <= m` the lower limit contributes nothing; for `i = m+1` only the boundary term
        `-(-1)^m u^{-m-1} v_k(u)` remains, with `v_k` the density of `μ_k`
        """
        if not 0 <= m < self.k:
            raise ValueError(f"need 0 <= m < {self.k}, got {m = }")
        if i <= m:
            norm: float = math.factorial(m - i)
            return integrate_measure(
                self.mu_k,
                lambda s: (-1.0 / s) ** i * (1.0 - u / s) ** (m - i) / (s * norm),
                lower=u,
            )
        if i == m + 1:
            return -((-1.0) ** m) * u ** (-m - 1.0) * self.mu_k.eval_density(u)
        raise ValueError(f"kernel derivatives are available up to order m+1, got {m = }, {i = }")


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["verdict"])
class ChainSignReport(SerializableDataclass):
    """`(-1)^j ∂^j (M_{k-j+1}(u) u^{j-1})` on the grid, one `OrderResult` per `j`"""

    k: int
    method: str
    orders: tuple[OrderResult, ...] = serializable_field(
        serialization_fn=lambda orders: [o.serialize() for o in orders],
        loading_fn=lambda data: tuple(OrderResult.load(o) for o in data["orders"]),
    )

    @property
    def verdict(self) -> Verdict:
        if not self.orders:
            return Verdict.INCONCLUSIVE
        return combine_verdicts([o.verdict for o in self.orders])

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["j", "min", "witness", "tolerance", "verdict"]]
        rows.extend(
            [o.order, o.min_value, o.witness_x, o.tolerance, o.verdict.value] for o in self.orders
        )
        return rows


def m_chain(
    mu_k: Measure,
    lam: float,
    k: int,
    l_k: float = 0.0,
    b_k: float = 0.0,
) -> MChain:
    """the chain `M_k, ..., M_1` of `μ_k`

    # Raises:
     - `DivergentIntegralError` : if `M_k(1)` diverges
    """
    chain: MChain = MChain(lam=lam, k=k, mu_k=mu_k, l_k=l_k, b_k=b_k)
    if math.isinf(chain.M(k, 1.0)):
        raise DivergentIntegralError(f"the tail ∫_(1,∞) s^-1 dμ_{k}(s) diverges")
    return chain


def _fd_value(chain: MChain, j: int, u: float) -> tuple[float, float]:
    """central difference of order `j` of `M_{k-j+1}(u) u^{j-1}` and its rounding-noise scale"""
    h: float = float(np.finfo(float).eps) ** (1.0 / (j + 2)) * u
    samples: list[float] = [
        chain.M(chain.k - j + 1, v) * v ** (j - 1)
        for v in (u + (j / 2.0 - i) * h for i in range(j + 1))
    ]
    value: float = sum(
        (-1.0) ** i * binomial(j, i) * sample for i, sample in enumerate(samples)
    ) / h**j
    noise: float = 1e3 * float(np.finfo(float).eps) * max(abs(s) for s in samples) / h**j
    return value, noise


def alternating_chain_sign_check(
    chain: MChain,
    j_max: int,
    grid: ScanGrid | None = None,
    method: ChainMethod = "kernel",
) -> ChainSignReport:
    """check `(-1)^j ∂^j (M_{k-j+1}(u) u^{j-1}) >= 0` for `1 <= j <= min(j_max, k-1)`

    `method="kernel"` differentiates the chain kernel exactly, `"finite_difference"` uses central
    stencils (orders up to 3) with the tolerance widened by the rounding noise of the stencil
    """
    grid = ScanGrid.log_spaced() if grid is None else grid
    if method not in ("kernel", "finite_difference"):
        raise ValueError(f"unknown method {method!r}")
    orders: list[OrderResult] = list()
    for j in range(1, min(j_max, chain.k - 1) + 1):
        if method == "finite_difference" and j > CHAIN_FD_MAX_ORDER:
            orders.append(
                OrderResult(
                    order=j,
                    verdict=Verdict.INCONCLUSIVE,
                    message=f"finite differences are limited to order {CHAIN_FD_MAX_ORDER}",
                )
            )
            continue
        worst: tuple[float, float, float] = (math.inf, math.nan, grid.tolerance)
        for u in grid:
            if method == "kernel":
                value: float = (-1.0) ** j * chain.kernel_derivative(j - 1, j, u)
                tol: float = grid.tolerance
            else:
                raw, noise = _fd_value(chain, j, u)
                value = (-1.0) ** j * raw
                tol = grid.tolerance + noise
            # rank by margin over the local tolerance
            if value + tol < worst[0] + worst[2]:
                worst = (value, u, tol)
        min_value, witness_x, tol = worst
        orders.append(
            OrderResult(
                order=j,
                verdict=Verdict.PASS if min_value >= -tol else Verdict.FAIL,
                min_value=min_value,
                witness_x=witness_x,
                tolerance=tol,
            )
        )
    return ChainSignReport(k=chain.k, method=method, orders=tuple(orders))


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["verdict"])
class NChainReport(SerializableDataclass):
    """checks on `N_j(u) = M_j(1/u)`

    - `integral_gaps[j-1]` is the largest `|N_j(u) - ∫_0^u N_{j+1}(t) dt| / (1 + |N_j(u)|)` over the grid
    - `decay[j-1]` probes `N_1^{(j)} = N_{1+j}` toward `u -> 0`
    """

    k: int
    lam: float
    integral_gaps: tuple[float, ...] = serializable_field(
        serialization_fn=lambda gaps: list(gaps),
        loading_fn=lambda data: tuple(data["integral_gaps"]),
    )
    decay: tuple[LimitProbe, ...] = serializable_field(
        serialization_fn=lambda probes: [p.serialize() for p in probes],
        loading_fn=lambda data: tuple(LimitProbe.load(p) for p in data["decay"]),
    )
    tolerance: float = serializable_field(default=1e-7)

    @property
    def verdict(self) -> Verdict:
        verdicts: list[Verdict] = [
            Verdict.PASS if gap <= self.tolerance else Verdict.FAIL for gap in self.integral_gaps
        ]
        verdicts.extend(p.verdict for p in self.decay)
        return combine_verdicts(verdicts) if verdicts else Verdict.PASS


def n_chain(
    chain: MChain,
    grid: ScanGrid | None = None,
    tol: float = 1e-7,
) -> NChainReport:
    """verify `N_j(u) = ∫_0^u N_{j+1}(t) dt` on the grid and the decay of `N_1^{(j)}(u)` as `u -> 0`, for `j <= k-1`

    the functions themselves are `chain.N_funcs`
    """
    grid = ScanGrid.log_spaced(1e-2, 1e2, 9) if grid is None else grid
    breaks: list[float] = [1.0 / s for s, _ in chain.mu_k.atoms]

    gaps: list[float] = list()
    for j in range(1, chain.k):
        gap: float = 0.0
        for u in grid:
            integral: float = quad_interval(
                lambda t: 0.0 if t == 0.0 else chain.N(j + 1, t),
                0.0,
                u,
                points=breaks,
            )
            value: float = chain.N(j, u)
            gap = max(gap, abs(value - integral) / (1.0 + abs(value)))
        gaps.append(gap)

    points: tuple[float, ...] = (1e-1, *decade_points(PROBE_DECADES_ZERO))
    decay: list[LimitProbe] = list()
    for j in range(1, chain.k):
        values: tuple[float, ...] = tuple(chain.N(1 + j, u) for u in points)
        decays: bool = is_monotone_decay(values, tol=tol)
        decay.append(
            LimitProbe(
                j=j,
                points=points,
                values=values,
                verdict=Verdict.PASS if decays else Verdict.FAIL,
                limit=0.0 if decays else None,
            )
        )
    return NChainReport(
        k=chain.k,
        lam=chain.lam,
        integral_gaps=tuple(gaps),
        decay=tuple(decay),
        tolerance=tol,
    )
