"""smooth densities `w` on subintervals of `(0, ∞)` with access to derivatives `w^{(j)}`

every family is a frozen dataclass with:
- `eval(j, s)` returning `w^{(j)}(s)` for `j <= max_derivative_order`
- `exponent_at_zero(j)`, a lower bound on the power-law behaviour of `w^{(j)}` at the origin, used for quadrature
- `to_spec()`, the JSON form read back by `density_from_spec`

closed-form families carry exact derivatives. the `expr` family parses a restricted numpy expression
and differentiates by central differences.
"""

import ast
import functools
import math
import typing
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, ClassVar

import numpy as np

from stieltjes_cm.constants import (
    CLOSED_FORM_DERIVATIVE_CAP,
    FINITE_DIFFERENCE_MAX_ORDER,
    DerivativeCapabilityError,
)
from stieltjes_cm.special.specfun import binomial, falling_factorial


class Provenance(Enum):
    CLOSED_FORM = "closed_form"
    FINITE_DIFFERENCE = "finite_difference"


DENSITY_FAMILIES: dict[str, type["SmoothDensity"]] = dict()


def register_density_family(cls: type["SmoothDensity"]) -> type["SmoothDensity"]:
    """register a density class under its `family` name, so that `density_from_spec` can build it"""
    if cls.family in DENSITY_FAMILIES:
        raise ValueError(f"density family {cls.family!r} is already registered")
    DENSITY_FAMILIES[cls.family] = cls
    return cls


def density_from_spec(spec: dict) -> "SmoothDensity":
    family: str = spec["family"]
    if family not in DENSITY_FAMILIES:
        raise KeyError(
            f"unknown density family {family!r}, expected one of {sorted(DENSITY_FAMILIES)}"
        )
    return DENSITY_FAMILIES[family].from_spec(spec)


def _is_nonneg_int(p: float) -> bool:
    return p >= 0 and float(p).is_integer()


class SmoothDensity:
    """base class for densities, see module docstring"""

    family: ClassVar[str] = "__base__"

    @property
    def max_derivative_order(self) -> int:
        raise NotImplementedError("this should be implemented by subclasses!")

    @property
    def provenance(self) -> Provenance:
        return Provenance.CLOSED_FORM

    def eval(self, j: int, s: float) -> float:
        """value of the `j`-th derivative at `s > 0`"""
        if j < 0:
            raise ValueError(f"derivative order must be non-negative, got {j = }")
        if j > self.max_derivative_order:
            raise DerivativeCapabilityError(
                f"{self.family} density supports derivatives up to order {self.max_derivative_order}, got {j = }"
            )
        return self._eval(j, float(s))

    def _eval(self, j: int, s: float) -> float:
        raise NotImplementedError("this should be implemented by subclasses!")

    def __call__(self, s: float) -> float:
        return self.eval(0, s)

    def eval_array(self, j: int, points: typing.Iterable[float]) -> np.ndarray:
        return np.array([self.eval(j, s) for s in points], dtype=np.float64)

    def exponent_at_zero(self, j: int = 0) -> float:
        return 0.0

    def params(self) -> dict:
        raise NotImplementedError("this should be implemented by subclasses!")

    def to_spec(self) -> dict:
        return {
            "family": self.family,
            "params": self.params(),
            "max_order": self.max_derivative_order,
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "SmoothDensity":
        kwargs: dict = dict(spec.get("params", dict()))
        if "max_order" in spec and spec["max_order"] is not None:
            kwargs["max_order"] = int(spec["max_order"])
        return cls(**kwargs)


@register_density_family
@dataclass(frozen=True, kw_only=True)
class PowerDensity(SmoothDensity):
    """`a (s + shift)^p`"""

    family: ClassVar[str] = "powerlaw"

    a: float = 1.0
    p: float = 0.0
    shift: float = 0.0
    max_order: int = CLOSED_FORM_DERIVATIVE_CAP

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError(f"powerlaw shift must be non-negative, got {self.shift}")

    @property
    def max_derivative_order(self) -> int:
        return self.max_order

    def _eval(self, j: int, s: float) -> float:
        coef: float = self.a * falling_factorial(self.p, j)
        if coef == 0.0:
            return 0.0
        return coef * (s + self.shift) ** (self.p - j)

    def exponent_at_zero(self, j: int = 0) -> float:
        if self.shift > 0 or (_is_nonneg_int(self.p) and j > self.p):
            return 0.0
        return self.p - j

    def params(self) -> dict:
        return dict(a=self.a, p=self.p, shift=self.shift)


@register_density_family
@dataclass(frozen=True, kw_only=True)
class ExpDensity(SmoothDensity):
    """`a s^p e^{-b s}`"""

    family: ClassVar[str] = "exp"

    a: float = 1.0
    b: float = 1.0
    p: float = 0.0
    max_order: int = CLOSED_FORM_DERIVATIVE_CAP

    @property
    def max_derivative_order(self) -> int:
        return self.max_order

    def _eval(self, j: int, s: float) -> float:
        # Leibniz rule on s^p * e^{-bs}
        decay: float = math.exp(-self.b * s)
        if decay == 0.0:
            return 0.0
        total: float = 0.0
        for i in range(j + 1):
            fall: float = falling_factorial(self.p, i)
            if fall == 0.0:
                continue
            total += (
                binomial(j, i) * fall * s ** (self.p - i) * (-self.b) ** (j - i)
            )
        return self.a * total * decay

    def exponent_at_zero(self, j: int = 0) -> float:
        if _is_nonneg_int(self.p):
            return 0.0
        return self.p - j

    def params(self) -> dict:
        return dict(a=self.a, b=self.b, p=self.p)


@register_density_family
@dataclass(frozen=True, kw_only=True)
class PolyDensity(SmoothDensity):
    """`Σ_i coefficients[i] s^i`. the empty polynomial is the zero density"""

    family: ClassVar[str] = "poly"

    coefficients: tuple[float, ...] = ()
    max_order: int = CLOSED_FORM_DERIVATIVE_CAP

    def __post_init__(self):
        # accept lists from json
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def max_derivative_order(self) -> int:
        return self.max_order

    def _eval(self, j: int, s: float) -> float:
        return sum(
            c * falling_factorial(i, j) * s ** (i - j)
            for i, c in enumerate(self.coefficients)
            if i >= j
        )

    def params(self) -> dict:
        return dict(coefficients=list(self.coefficients))


@register_density_family
@dataclass(frozen=True, kw_only=True)
class RationalDensity(SmoothDensity):
    """`a / (1 + (s/c)^2)`

    uses `d^j/du^j (1+u^2)^{-1} = (-1)^j j! sin((j+1)θ) / (1+u^2)^{(j+1)/2}` with `θ = arccot(u)`
    """

    family: ClassVar[str] = "rational"

    a: float = 1.0
    c: float = 1.0
    max_order: int = CLOSED_FORM_DERIVATIVE_CAP

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"rational density scale must be positive, got {self.c}")

    @property
    def max_derivative_order(self) -> int:
        return self.max_order

    def _eval(self, j: int, s: float) -> float:
        u: float = s / self.c
        theta: float = math.atan2(1.0, u)
        return (
            self.a
            * (-1.0) ** j
            * math.factorial(j)
            * math.sin((j + 1) * theta)
            / (1.0 + u * u) ** ((j + 1) / 2.0)
            / self.c**j
        )

    def params(self) -> dict:
        return dict(a=self.a, c=self.c)


# names usable inside `expr` densities
_EXPR_NAMESPACE: dict[str, typing.Any] = {
    "pi": math.pi,
    "e": math.e,
    "exp": np.exp,
    "expm1": np.expm1,
    "log": np.log,
    "log1p": np.log1p,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "arctan": np.arctan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "abs": np.abs,
    "power": np.power,
}
_EXPR_ALLOWED_NODES: tuple[type, ...] = (
    ast.Expression,
    ast.BinOp,
    ast.UnaryOp,
    ast.Call,
    ast.Name,
    ast.Load,
    ast.Constant,
    ast.Add,
    ast.Sub,
    ast.Mult,
    ast.Div,
    ast.Pow,
    ast.USub,
    ast.UAdd,
)


@functools.lru_cache(maxsize=None)
def _compile_expr(expr: str) -> Callable[[float], float]:
    """compile an expression in the variable `s`, rejecting anything but arithmetic and whitelisted functions"""
    try:
        tree: ast.Expression = ast.parse(expr, mode="eval")
    except SyntaxError as e:
        raise ValueError(f"cannot parse density expression {expr!r}: {e}") from e
    for node in ast.walk(tree):
        if not isinstance(node, _EXPR_ALLOWED_NODES):
            raise ValueError(
                f"density expression {expr!r} contains disallowed syntax: {type(node).__name__}"
            )
        if isinstance(node, ast.Name) and node.id != "s" and node.id not in _EXPR_NAMESPACE:
            raise ValueError(f"density expression {expr!r} uses unknown name {node.id!r}")
        if isinstance(node, ast.Call) and not isinstance(node.func, ast.Name):
            raise ValueError(f"density expression {expr!r} calls a non-name")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ValueError(f"density expression {expr!r} has a non-numeric constant")
    code = compile(tree, "<density>", "eval")

    def fn(s: float) -> float:
        return float(eval(code, {"__builtins__": {}}, {**_EXPR_NAMESPACE, "s": s}))

    return fn


@register_density_family
@dataclass(frozen=True, kw_only=True)
class ExprDensity(SmoothDensity):
    """density given as an expression in `s`, differentiated by central differences

    the step for order `j` is `max(1e-6, eps^{1/(j+2)}) * max(1, s)`, shrunk so the stencil stays in `s > 0`
    """

    family: ClassVar[str] = "expr"

    expr: str
    max_order: int = 2

    def __post_init__(self):
        if not 0 <= self.max_order <= FINITE_DIFFERENCE_MAX_ORDER:
            raise ValueError(
                f"finite-difference densities support max_order <= {FINITE_DIFFERENCE_MAX_ORDER}, got {self.max_order}"
            )
        _compile_expr(self.expr)

    @property
    def max_derivative_order(self) -> int:
        return self.max_order

    @property
    def provenance(self) -> Provenance:
        return Provenance.FINITE_DIFFERENCE

    def _eval(self, j: int, s: float) -> float:
        fn: Callable[[float], float] = _compile_expr(self.expr)
        if j == 0:
            return fn(s)
        h: float = max(1e-6, np.finfo(float).eps ** (1.0 / (j + 2))) * max(1.0, s)
        h = min(h, 0.9 * s / j)
        total: float = 0.0
        for i in range(j + 1):
            total += (-1) ** i * binomial(j, i) * fn(s + (j / 2.0 - i) * h)
        return total / h**j

    def params(self) -> dict:
        return dict(expr=self.expr)


@register_density_family
@dataclass(frozen=True, kw_only=True)
class MonomialDerivativeDensity(SmoothDensity):
    """`coef * s^q * base^{(m)}(s)`, the building block of `(-1)^k s^k w^{(k)}` and of power reweighting"""

    family: ClassVar[str] = "monomial_derivative"

    base: SmoothDensity
    q: float = 0.0
    m: int = 0
    coef: float = 1.0

    def __post_init__(self):
        if self.m > self.base.max_derivative_order:
            raise DerivativeCapabilityError(
                f"base {self.base.family} density supports order {self.base.max_derivative_order}, need {self.m}"
            )

    @property
    def max_derivative_order(self) -> int:
        return self.base.max_derivative_order - self.m

    @property
    def provenance(self) -> Provenance:
        return self.base.provenance

    def _eval(self, j: int, s: float) -> float:
        total: float = 0.0
        for i in range(j + 1):
            fall: float = falling_factorial(self.q, i)
            if fall == 0.0:
                continue
            inner: float = self.base.eval(self.m + j - i, s)
            if inner == 0.0:
                continue
            total += binomial(j, i) * fall * s ** (self.q - i) * inner
        return self.coef * total

    def exponent_at_zero(self, j: int = 0) -> float:
        exponents: list[float] = [
            self.q - i + self.base.exponent_at_zero(self.m + j - i)
            for i in range(j + 1)
            if falling_factorial(self.q, i) != 0.0
        ]
        return min(exponents) if exponents else 0.0

    def params(self) -> dict:
        return dict(base=self.base.to_spec(), q=self.q, m=self.m, coef=self.coef)

    @classmethod
    def from_spec(cls, spec: dict) -> "MonomialDerivativeDensity":
        params: dict = dict(spec["params"])
        params["base"] = density_from_spec(params["base"])
        return cls(**params)


@register_density_family
@dataclass(frozen=True, kw_only=True)
class SumDensity(SmoothDensity):
    """sum of densities on a common interval"""

    family: ClassVar[str] = "sum"

    terms: tuple[SmoothDensity, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def max_derivative_order(self) -> int:
        if not self.terms:
            return CLOSED_FORM_DERIVATIVE_CAP
        return min(t.max_derivative_order for t in self.terms)

    @property
    def provenance(self) -> Provenance:
        if any(t.provenance == Provenance.FINITE_DIFFERENCE for t in self.terms):
            return Provenance.FINITE_DIFFERENCE
        return Provenance.CLOSED_FORM

    def _eval(self, j: int, s: float) -> float:
        return sum(t.eval(j, s) for t in self.terms)

    def exponent_at_zero(self, j: int = 0) -> float:
        if not self.terms:
            return 0.0
        return min(t.exponent_at_zero(j) for t in self.terms)

    def params(self) -> dict:
        return dict(terms=[t.to_spec() for t in self.terms])

    @classmethod
    def from_spec(cls, spec: dict) -> "SumDensity":
        return cls(terms=tuple(density_from_spec(t) for t in spec["params"]["terms"]))


@register_density_family
@dataclass(frozen=True, kw_only=True)
class ReciprocalImageDensity(SmoothDensity):
    """`base(1/t) / t^2`, the density of the push-forward under `s -> 1/s`. values only"""

    family: ClassVar[str] = "reciprocal_image"

    base: SmoothDensity

    @property
    def max_derivative_order(self) -> int:
        return 0

    @property
    def provenance(self) -> Provenance:
        return self.base.provenance

    def _eval(self, j: int, s: float) -> float:
        return self.base.eval(0, 1.0 / s) / (s * s)

    def params(self) -> dict:
        return dict(base=self.base.to_spec())

    @classmethod
    def from_spec(cls, spec: dict) -> "ReciprocalImageDensity":
        return cls(base=density_from_spec(spec["params"]["base"]))
