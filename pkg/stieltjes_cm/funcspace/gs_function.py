"""generalized Stieltjes functions of order `λ` and their derivatives

a `GSFunction` is
```
f(x) = c + β x^{-λ} + ∫ e^{-xs} s^{λ-1} dμ(s)          (laplace side)
     = c + β x^{-λ} + ∫ (x+t)^{-λ} dν(t)                (stieltjes side)
```
or a closed form, where `β` is the `zero_atom`. the two sides are tied by
`(x+t)^{-λ} = Γ(λ)^{-1} ∫ e^{-(x+t)s} s^{λ-1} ds`, so `dμ(s) = φ(s) ds` with `φ(s) = Γ(λ)^{-1} ∫ e^{-st} dν(t)`.
"""

import math
import typing
from dataclasses import dataclass
from typing import ClassVar, Literal

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.constants import (
    CLOSED_FORM_DERIVATIVE_CAP,
    QUADRATURE_DERIVATIVE_CAP,
    DerivativeCapabilityError,
    EvaluationError,
    QuadratureError,
)
from stieltjes_cm.funcspace.closed_form import ClosedForm
from stieltjes_cm.measure.densities import (
    ExpDensity,
    PowerDensity,
    SmoothDensity,
    density_from_spec,
    register_density_family,
)
from stieltjes_cm.measure.measure import DensityPiece, Measure, ScanGrid
from stieltjes_cm.special.quadrature import quad_interval
from stieltjes_cm.special.specfun import pochhammer

Route = Literal["closed_form", "stieltjes", "laplace"]
ROUTE_PREFERENCE: tuple[Route, ...] = ("closed_form", "stieltjes", "laplace")


def laplace_transform(
    mu: Measure,
    lam: float,
    x: float,
    n: int = 0,
    component: str = "laplace_measure",
) -> float:
    """`(-1)^n ∫ e^{-xs} s^{n+λ-1} dμ(s)`, the `n`-th derivative of the laplace side. `mu` may be signed

    # Raises:
     - `EvaluationError` : naming the piece whose quadrature failed
    """
    total: float = 0.0
    for s, w in mu.atoms:
        total += w * s ** (n + lam - 1.0) * math.exp(-x * s)
    peak: float = max(n + lam - 1.0, 1.0) / x
    for i, piece in enumerate(mu.pieces):
        density: SmoothDensity = piece.density
        try:
            total += quad_interval(
                lambda s: math.exp(-x * s) * s ** (n + lam - 1.0) * density.eval(0, s),
                piece.a,
                piece.b,
                singular_exponent=n + lam - 1.0 + density.exponent_at_zero(0),
                scales=(peak,),
            )
        except QuadratureError as e:
            raise EvaluationError(
                f"{component} piece {i} on ({piece.a}, {piece.b}) failed at {x = }, {n = }: {e}"
            ) from e
    return (-1.0) ** n * total


def stieltjes_transform(
    nu: Measure,
    lam: float,
    x: float,
    n: int = 0,
    component: str = "stieltjes_measure",
) -> float:
    """`(-1)^n (λ)_n ∫ (x+t)^{-λ-n} dν(t)`, the `n`-th derivative of the stieltjes side"""
    total: float = 0.0
    for t, w in nu.atoms:
        total += w * (x + t) ** (-lam - n)
    for i, piece in enumerate(nu.pieces):
        density: SmoothDensity = piece.density
        try:
            total += quad_interval(
                lambda t: (x + t) ** (-lam - n) * density.eval(0, t),
                piece.a,
                piece.b,
                singular_exponent=density.exponent_at_zero(0),
                scales=(x,),
            )
        except QuadratureError as e:
            raise EvaluationError(
                f"{component} piece {i} on ({piece.a}, {piece.b}) failed at {x = }, {n = }: {e}"
            ) from e
    return (-1.0) ** n * pochhammer(lam, n) * total


@register_density_family
@dataclass(frozen=True, kw_only=True)
class StieltjesPhiDensity(SmoothDensity):
    """`φ(s) = Γ(λ)^{-1} ∫_a^b e^{-st} w(t) dt` for one stieltjes-side density piece, by quadrature"""

    family: ClassVar[str] = "stieltjes_phi"

    base: SmoothDensity
    a: float = 0.0
    b: float = math.inf
    lam: float = 1.0

    @property
    def max_derivative_order(self) -> int:
        return QUADRATURE_DERIVATIVE_CAP

    @property
    def provenance(self):
        return self.base.provenance

    def _eval(self, j: int, s: float) -> float:
        value: float = quad_interval(
            lambda t: t**j * math.exp(-s * t) * self.base.eval(0, t),
            self.a,
            self.b,
            singular_exponent=j + self.base.exponent_at_zero(0),
            scales=(1.0 / s,),
        )
        return (-1.0) ** j * value / math.gamma(self.lam)

    def params(self) -> dict:
        return dict(
            base=self.base.to_spec(),
            a=self.a,
            b=None if math.isinf(self.b) else self.b,
            lam=self.lam,
        )

    @classmethod
    def from_spec(cls, spec: dict) -> "StieltjesPhiDensity":
        params: dict = dict(spec["params"])
        return cls(
            base=density_from_spec(params["base"]),
            a=float(params["a"]),
            b=math.inf if params["b"] is None else float(params["b"]),
            lam=float(params["lam"]),
        )


def stieltjes_to_laplace_measure(nu: Measure, lam: float) -> Measure:
    """the laplace-side measure `φ(s) ds` of the stieltjes-side measure `ν`

    atoms `w δ_t` become exponential densities `w e^{-ts} / Γ(λ)`, density pieces become `stieltjes_phi` densities
    """
    result: Measure = Measure()
    for t, w in nu.atoms:
        result = result + Measure.with_density(ExpDensity(a=w / math.gamma(lam), b=t))
    for piece in nu.pieces:
        result = result + Measure.with_density(
            StieltjesPhiDensity(base=piece.density, a=piece.a, b=piece.b, lam=lam)
        )
    return result


def stieltjes_to_laplace_phi(nu: Measure, lam: float, s: float) -> float:
    """the completely monotonic density `φ(s) = Γ(λ)^{-1} ∫ e^{-st} dν(t)`

    ```
    >>> stieltjes_to_laplace_phi(Measure.dirac(2.0), lam=1.0, s=1.0)
    0.1353352832366127
    ```
    """
    if not s > 0:
        raise ValueError(f"need s > 0, got {s = }")
    total: float = sum(w * math.exp(-s * t) for t, w in nu.atoms) / math.gamma(lam)
    for i, piece in enumerate(nu.pieces):
        try:
            total += StieltjesPhiDensity(
                base=piece.density, a=piece.a, b=piece.b, lam=lam
            ).eval(0, s)
        except QuadratureError as e:
            raise EvaluationError(
                f"stieltjes_measure piece {i} on ({piece.a}, {piece.b}) failed at {s = }: {e}"
            ) from e
    return total


def _measure_or_none(data: dict, key: str) -> Measure | None:
    return None if data.get(key) is None else Measure.from_spec(data[key])


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["route"])
class GSFunction(SerializableDataclass):
    """a function `f` on `(0, ∞)` of order `lam`, see module docstring

    # Parameters:
     - `lam : float`
        order `λ > 0`
     - `c : float`
        additive constant, kept symbolic
     - `zero_atom : float`
        coefficient `β` of `x^{-λ}`, kept symbolic
     - `laplace_measure : Measure | None`
        `μ` with kernel `e^{-xs} s^{λ-1}`
     - `stieltjes_measure : Measure | None`
        `ν` with kernel `(x+t)^{-λ}`
     - `closed_form : ClosedForm | None`

    evaluation uses the first available of closed form, stieltjes side, laplace side.
    derivative values are memoized per instance
    """

    lam: float
    c: float = serializable_field(default=0.0)
    zero_atom: float = serializable_field(default=0.0)
    laplace_measure: Measure | None = serializable_field(
        default=None,
        serialization_fn=lambda m: None if m is None else m.spec(),
        loading_fn=lambda data: _measure_or_none(data, "laplace_measure"),
    )
    stieltjes_measure: Measure | None = serializable_field(
        default=None,
        serialization_fn=lambda m: None if m is None else m.spec(),
        loading_fn=lambda data: _measure_or_none(data, "stieltjes_measure"),
    )
    closed_form: ClosedForm | None = serializable_field(
        default=None,
        serialization_fn=lambda cf: None if cf is None else cf.spec(),
        loading_fn=lambda data: (
            None if data.get("closed_form") is None else ClosedForm.from_spec(data["closed_form"])
        ),
    )

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.c < 0:
            raise ValueError(f"constant c must be non-negative, got {self.c}")
        if self.zero_atom < 0:
            raise ValueError(f"zero_atom must be non-negative, got {self.zero_atom}")
        if self.laplace_measure is None and self.stieltjes_measure is None and self.closed_form is None:
            raise ValueError("at least one representation (laplace, stieltjes, closed form) is required")
        for name in ("laplace_measure", "stieltjes_measure"):
            m: Measure | None = getattr(self, name)
            if m is not None and m.signed:
                raise ValueError(f"{name} must be a positive measure")
        self.__dict__["_derivative_cache"] = dict()

    # constructors
    # ============================================================

    @classmethod
    def from_laplace(
        cls, mu: Measure, lam: float, c: float = 0.0, zero_atom: float = 0.0
    ) -> "GSFunction":
        return cls(lam=lam, c=c, zero_atom=zero_atom, laplace_measure=mu)

    @classmethod
    def from_stieltjes(
        cls, nu: Measure, lam: float, c: float = 0.0, zero_atom: float = 0.0
    ) -> "GSFunction":
        """stores `ν` and builds the laplace side through the bridge"""
        return cls(
            lam=lam,
            c=c,
            zero_atom=zero_atom,
            stieltjes_measure=nu,
            laplace_measure=stieltjes_to_laplace_measure(nu, lam),
        )

    @classmethod
    def from_closed_form(
        cls, closed_form: ClosedForm, lam: float, c: float = 0.0, zero_atom: float = 0.0
    ) -> "GSFunction":
        """constant terms of the closed form are moved into `c`"""
        return cls(
            lam=lam,
            c=c + closed_form.constant_part,
            zero_atom=zero_atom,
            closed_form=closed_form.without_constants(),
            laplace_measure=closed_form.laplace_measure(lam),
        )

    @classmethod
    def constant(cls, c: float, lam: float = 1.0) -> "GSFunction":
        return cls(lam=lam, c=c, laplace_measure=Measure())

    # routes
    # ============================================================

    @property
    def routes(self) -> list[Route]:
        present: dict[Route, bool] = {
            "closed_form": self.closed_form is not None,
            "stieltjes": self.stieltjes_measure is not None,
            "laplace": self.laplace_measure is not None,
        }
        return [r for r in ROUTE_PREFERENCE if present[r]]

    @property
    def route(self) -> Route:
        return self.routes[0]

    def derivative_cap(self, route: Route | None = None) -> int:
        """highest derivative order available, lower when quadrature is involved"""
        match route or self.route:
            case "closed_form":
                return CLOSED_FORM_DERIVATIVE_CAP
            case "stieltjes":
                return (
                    QUADRATURE_DERIVATIVE_CAP
                    if self.stieltjes_measure.pieces
                    else CLOSED_FORM_DERIVATIVE_CAP
                )
            case "laplace":
                return (
                    QUADRATURE_DERIVATIVE_CAP
                    if self.laplace_measure.pieces
                    else CLOSED_FORM_DERIVATIVE_CAP
                )
            case _:
                raise ValueError(f"unknown route {route!r}")

    def integral_derivative(self, n: int, x: float, route: Route | None = None) -> float:
        """`n`-th derivative of the integral term alone (no constant, no zero atom), memoized"""
        route = route or self.route
        if not x > 0:
            raise ValueError(f"functions are defined on (0, inf), got {x = }")
        if n < 0:
            raise ValueError(f"derivative order must be non-negative, got {n = }")
        if n > self.derivative_cap(route):
            raise DerivativeCapabilityError(
                f"derivative order {n} exceeds the cap {self.derivative_cap(route)} of the {route} route"
            )
        cache: dict = self.__dict__["_derivative_cache"]
        key: tuple[str, int, float] = (route, n, float(x))
        if key not in cache:
            match route:
                case "closed_form":
                    cache[key] = self.closed_form.derivative(n, x)
                case "stieltjes":
                    cache[key] = stieltjes_transform(self.stieltjes_measure, self.lam, x, n)
                case "laplace":
                    cache[key] = laplace_transform(self.laplace_measure, self.lam, x, n)
                case _:
                    raise ValueError(f"unknown route {route!r}")
        return cache[key]

    def derivative(
        self,
        n: int,
        x: float,
        include_constant: bool = True,
        include_zero_atom: bool = True,
        route: Route | None = None,
    ) -> float:
        """`f^{(n)}(x)`"""
        value: float = self.integral_derivative(n, x, route)
        if include_constant and n == 0:
            value += self.c
        if include_zero_atom and self.zero_atom != 0.0:
            value += self.zero_atom * (-1.0) ** n * pochhammer(self.lam, n) * x ** (-self.lam - n)
        return value

    def eval(self, x: float, route: Route | None = None) -> float:
        return self.derivative(0, x, route=route)

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def clear_cache(self) -> None:
        self.__dict__["_derivative_cache"].clear()

    # other orders and consistency
    # ============================================================

    def laplace_measure_at(self, lam: float | None = None) -> Measure:
        """the laplace-side measure of `f - c` written with kernel `e^{-xs} s^{lam-1}`

        equals `s^{λ-lam} dμ(s)` plus the zero atom as the density `β s^{λ-lam} / Γ(λ)`
        """
        lam = self.lam if lam is None else lam
        if self.laplace_measure is None:
            raise ValueError("function has no laplace-side representation")
        measure: Measure = self.laplace_measure.power_weighted(self.lam - lam)
        if self.zero_atom != 0.0:
            measure = measure + Measure(
                pieces=(
                    DensityPiece(
                        a=0.0,
                        b=math.inf,
                        density=PowerDensity(
                            a=self.zero_atom / math.gamma(self.lam), p=self.lam - lam
                        ),
                    ),
                )
            )
        return measure

    def check_representations(
        self, grid: ScanGrid | typing.Iterable[float] | None = None, tol: float = 1e-7
    ) -> float:
        """largest relative gap `|f_r(x) - f_0(x)| / max(1, |f_0(x)|)` between the available routes

        # Raises:
         - `EvaluationError` : if the gap exceeds `tol`
        """
        points: list[float] = list(grid if grid is not None else ScanGrid.log_spaced(1e-1, 1e1, 8))
        routes: list[Route] = self.routes
        gap: float = 0.0
        for x in points:
            reference: float = self.integral_derivative(0, x, routes[0])
            for other in routes[1:]:
                value: float = self.integral_derivative(0, x, other)
                gap = max(gap, abs(value - reference) / max(1.0, abs(reference)))
        if gap > tol:
            raise EvaluationError(
                f"representations {routes} disagree by {gap} (tolerance {tol})"
            )
        return gap


def eval_f(f: GSFunction, x: float) -> float:
    """`f(x) = c + β x^{-λ} + integral term`"""
    return f.eval(x)


def derivative(f: GSFunction, n: int, x: float) -> float:
    return f.derivative(n, x)

