"""tagged closed-form kernel families with exact derivatives of any order

a `ClosedForm` is a non-negative combination of
- `power_kernel`: `w (x + t)^{-p}`, `t >= 0`, `p > 0`
- `exponential`: `w e^{-x t}`, `t > 0`
- `constant`: `w`
"""

import math
from dataclasses import dataclass
from enum import Enum

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.measure.densities import ExpDensity
from stieltjes_cm.measure.measure import DensityPiece, Measure
from stieltjes_cm.special.specfun import pochhammer


class ClosedFormKind(str, Enum):
    POWER_KERNEL = "power_kernel"
    EXPONENTIAL = "exponential"
    CONSTANT = "constant"


@dataclass(frozen=True, kw_only=True)
class ClosedFormTerm:
    kind: ClosedFormKind
    weight: float = 1.0
    t: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kind, ClosedFormKind):
            object.__setattr__(self, "kind", ClosedFormKind(self.kind))
        if self.weight < 0:
            raise ValueError(f"closed form weights must be non-negative, got {self.weight}")
        match self.kind:
            case ClosedFormKind.POWER_KERNEL:
                if self.t < 0 or not self.p > 0:
                    raise ValueError(
                        f"power kernel needs t >= 0 and p > 0, got t={self.t}, p={self.p}"
                    )
            case ClosedFormKind.EXPONENTIAL:
                if not self.t > 0:
                    raise ValueError(f"exponential kernel needs t > 0, got t={self.t}")

    def derivative(self, n: int, x: float) -> float:
        match self.kind:
            case ClosedFormKind.POWER_KERNEL:
                return (
                    self.weight
                    * (-1.0) ** n
                    * pochhammer(self.p, n)
                    * (x + self.t) ** (-self.p - n)
                )
            case ClosedFormKind.EXPONENTIAL:
                return self.weight * (-self.t) ** n * math.exp(-x * self.t)
            case ClosedFormKind.CONSTANT:
                return self.weight if n == 0 else 0.0
            case _:
                raise ValueError(f"unknown closed form kind {self.kind}")

    def to_spec(self) -> dict:
        spec: dict = {"kind": self.kind.value, "weight": self.weight}
        match self.kind:
            case ClosedFormKind.POWER_KERNEL:
                spec.update(t=self.t, p=self.p)
            case ClosedFormKind.EXPONENTIAL:
                spec.update(t=self.t)
        return spec

    @classmethod
    def from_spec(cls, spec: dict) -> "ClosedFormTerm":
        return cls(**{k: v for k, v in spec.items() if k in ("kind", "weight", "t", "p")})


@serializable_dataclass(frozen=True, kw_only=True)
class ClosedForm(SerializableDataclass):
    """linear combination of closed-form kernels, independent of any order `λ`"""

    terms: tuple[ClosedFormTerm, ...] = serializable_field(
        default_factory=tuple,
        serialization_fn=lambda terms: [t.to_spec() for t in terms],
        loading_fn=lambda data: tuple(ClosedFormTerm.from_spec(t) for t in data["terms"]),
    )

    def __post_init__(self):
        self.__dict__["terms"] = tuple(
            t if isinstance(t, ClosedFormTerm) else ClosedFormTerm.from_spec(t)
            for t in self.terms
        )

    def derivative(self, n: int, x: float) -> float:
        return sum(term.derivative(n, x) for term in self.terms)

    def eval(self, x: float) -> float:
        return self.derivative(0, x)

    @property
    def constant_part(self) -> float:
        return sum(t.weight for t in self.terms if t.kind == ClosedFormKind.CONSTANT)

    def without_constants(self) -> "ClosedForm":
        return ClosedForm(
            terms=tuple(t for t in self.terms if t.kind != ClosedFormKind.CONSTANT)
        )

    def laplace_measure(self, lam: float) -> Measure:
        """the measure `μ` with `Σ terms = ∫ e^{-xs} s^{λ-1} dμ(s)`, constants excluded

        - `w e^{-xt}` is the atom `w t^{1-λ} δ_t`
        - `w (x+t)^{-p}` has density `w s^{p-λ} e^{-ts} / Γ(p)`
        """
        atoms: list[tuple[float, float]] = list()
        densities: list[ExpDensity] = list()
        for term in self.terms:
            match term.kind:
                case ClosedFormKind.EXPONENTIAL:
                    atoms.append((term.t, term.weight * term.t ** (1.0 - lam)))
                case ClosedFormKind.POWER_KERNEL:
                    densities.append(
                        ExpDensity(
                            a=term.weight / math.gamma(term.p),
                            b=term.t,
                            p=term.p - lam,
                        )
                    )
        measure: Measure = Measure(atoms=tuple(atoms))
        for density in densities:
            measure = measure + Measure(
                pieces=(DensityPiece(a=0.0, b=math.inf, density=density),)
            )
        return measure

    @classmethod
    def from_spec(cls, spec: dict | list) -> "ClosedForm":
        terms: list = spec["terms"] if isinstance(spec, dict) else spec
        return cls(terms=tuple(ClosedFormTerm.from_spec(t) for t in terms))

    def spec(self) -> dict:
        return {"terms": [t.to_spec() for t in self.terms]}
