import math
import typing
from dataclasses import dataclass
from enum import Enum

import numpy as np
from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.constants import (
    DEFAULT_GRID_MAX,
    DEFAULT_GRID_MIN,
    DEFAULT_GRID_N,
    DEFAULT_TOLERANCE,
    NotAMeasureError,
)
from stieltjes_cm.measure.densities import (
    MonomialDerivativeDensity,
    SmoothDensity,
    SumDensity,
    density_from_spec,
)
from stieltjes_cm.utils import log_grid


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


def _load_points(data: dict) -> tuple[float, ...]:
    return tuple(float(p) for p in data["points"])


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["n_points"])
class ScanGrid(SerializableDataclass):
    """finite set of positive points on which sign conditions are checked, plus the absolute tolerance used there"""

    points: tuple[float, ...] = serializable_field(
        default_factory=lambda: tuple(
            float(p) for p in log_grid(DEFAULT_GRID_MIN, DEFAULT_GRID_MAX, DEFAULT_GRID_N)
        ),
        serialization_fn=lambda pts: list(pts),
        loading_fn=_load_points,
    )
    tolerance: float = serializable_field(default=DEFAULT_TOLERANCE)

    def __post_init__(self) -> None:
        self.__dict__["points"] = tuple(float(p) for p in self.points)
        if len(self.points) == 0:
            raise ValueError("scan grid must be nonempty")
        if not all(p > 0 for p in self.points):
            raise ValueError(f"scan grid points must be positive, got {self.points}")
        if not all(b > a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("scan grid points must be strictly increasing")
        if not self.tolerance >= 0:
            raise ValueError(f"tolerance must be non-negative, got {self.tolerance}")

    @property
    def n_points(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> typing.Iterator[float]:
        return iter(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.float64)

    @property
    def smallest_gap(self) -> float:
        if len(self.points) < 2:
            return self.points[0]
        return float(np.min(np.diff(self.as_array())))

    @classmethod
    def log_spaced(
        cls,
        lo: float = DEFAULT_GRID_MIN,
        hi: float = DEFAULT_GRID_MAX,
        n: int = DEFAULT_GRID_N,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> "ScanGrid":
        return cls(points=tuple(float(p) for p in log_grid(lo, hi, n)), tolerance=tolerance)

    def with_points(self, points: typing.Iterable[float]) -> "ScanGrid":
        merged: list[float] = sorted(set(self.points) | {float(p) for p in points})
        return ScanGrid(points=tuple(merged), tolerance=self.tolerance)


@dataclass(frozen=True)
class DensityPiece:
    """density `density` on the open interval `(a, b)`, `b` may be infinite"""

    a: float
    b: float
    density: SmoothDensity

    def __post_init__(self) -> None:
        if not (0.0 <= self.a < self.b):
            raise ValueError(f"density interval must satisfy 0 <= a < b, got ({self.a}, {self.b})")

    def contains(self, s: float) -> bool:
        return self.a < s < self.b

    def to_spec(self) -> dict:
        spec: dict = self.density.to_spec()
        return {
            "interval": [self.a, None if math.isinf(self.b) else self.b],
            **spec,
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "DensityPiece":
        a, b = spec["interval"]
        return cls(
            a=float(a),
            b=math.inf if b is None or b == "inf" else float(b),
            density=density_from_spec(spec),
        )


def _serialize_atoms(atoms: tuple[tuple[float, float], ...]) -> list[dict]:
    return [{"s": s, "w": w} for s, w in atoms]


def _serialize_pieces(pieces: tuple[DensityPiece, ...]) -> list[dict]:
    return [p.to_spec() for p in pieces]


@serializable_dataclass(frozen=True, kw_only=True)
class Measure(SerializableDataclass):
    """measure on `(0, ∞)`: finitely many atoms plus densities on disjoint intervals

    positive unless `signed` is set, which is reserved for the outputs of the distributional calculus
    (`derived_measure` and friends), whose positivity is the thing being tested.
    positivity of densities is spot-checked on the default scan grid at construction
    """

    atoms: tuple[tuple[float, float], ...] = serializable_field(
        default_factory=tuple,
        serialization_fn=_serialize_atoms,
        loading_fn=lambda data: tuple(
            (float(a["s"]), float(a["w"])) for a in data["atoms"]
        ),
    )
    pieces: tuple[DensityPiece, ...] = serializable_field(
        default_factory=tuple,
        serialization_fn=_serialize_pieces,
        loading_fn=lambda data: tuple(DensityPiece.from_spec(p) for p in data["pieces"]),
    )
    signed: bool = serializable_field(default=False)

    def __post_init__(self) -> None:
        self.__dict__["atoms"] = tuple(
            (float(s), float(w)) for s, w in sorted(self.atoms)
        )
        self.__dict__["pieces"] = tuple(sorted(self.pieces, key=lambda p: p.a))

        for i, (s, w) in enumerate(self.atoms):
            if not s > 0:
                raise ValueError(f"atom {i} has location {s}, atoms must lie in (0, inf)")
            if not self.signed and w < 0:
                raise NotAMeasureError(f"atom {i} at s={s} has negative weight {w}")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if right.a < left.b:
                raise ValueError(
                    f"density intervals overlap: ({left.a}, {left.b}) and ({right.a}, {right.b})"
                )
        if not self.signed:
            for i, piece in enumerate(self.pieces):
                for s in ScanGrid.log_spaced().points:
                    if piece.contains(s):
                        value: float = piece.density.eval(0, s)
                        if value < -DEFAULT_TOLERANCE:
                            raise NotAMeasureError(
                                f"density piece {i} on ({piece.a}, {piece.b}) is negative at s={s}: {value}"
                            )

    @property
    def is_empty(self) -> bool:
        return len(self.atoms) == 0 and len(self.pieces) == 0

    @property
    def has_atoms(self) -> bool:
        return len(self.atoms) > 0

    @property
    def max_derivative_order(self) -> int | None:
        """smallest derivative order over density pieces, `None` if there are none"""
        if not self.pieces:
            return None
        return min(p.density.max_derivative_order for p in self.pieces)

    @property
    def breakpoints(self) -> list[float]:
        """atom locations and finite piece endpoints in `(0, ∞)`"""
        pts: set[float] = {s for s, _ in self.atoms}
        for p in self.pieces:
            pts.update(e for e in (p.a, p.b) if 0 < e < math.inf)
        return sorted(pts)

    def eval_density(self, s: float, j: int = 0) -> float:
        """`j`-th derivative of the density part at `s`, summed over the pieces containing `s`"""
        return sum(p.density.eval(j, s) for p in self.pieces if p.contains(s))

    def power_weighted(self, q: float) -> "Measure":
        """the measure `s^q dμ(s)`"""
        if q == 0:
            return self
        return Measure(
            atoms=tuple((s, w * s**q) for s, w in self.atoms),
            pieces=tuple(
                DensityPiece(a=p.a, b=p.b, density=MonomialDerivativeDensity(base=p.density, q=q))
                for p in self.pieces
            ),
            signed=self.signed,
        )

    def scaled(self, factor: float) -> "Measure":
        if factor == 1:
            return self
        return Measure(
            atoms=tuple((s, w * factor) for s, w in self.atoms),
            pieces=tuple(
                DensityPiece(
                    a=p.a,
                    b=p.b,
                    density=MonomialDerivativeDensity(base=p.density, coef=factor),
                )
                for p in self.pieces
            ),
            signed=self.signed or factor < 0,
        )

    def __add__(self, other: "Measure") -> "Measure":
        """superposition, splitting overlapping density intervals into common segments"""
        if not isinstance(other, Measure):
            return NotImplemented
        merged_atoms: dict[float, float] = dict()
        for s, w in (*self.atoms, *other.atoms):
            merged_atoms[s] = merged_atoms.get(s, 0.0) + w

        all_pieces: list[DensityPiece] = [*self.pieces, *other.pieces]
        edges: list[float] = sorted({e for p in all_pieces for e in (p.a, p.b)})
        segments: list[DensityPiece] = list()
        for lo, hi in zip(edges, edges[1:]):
            active: list[SmoothDensity] = [
                p.density for p in all_pieces if p.a <= lo and hi <= p.b
            ]
            if not active:
                continue
            density: SmoothDensity = (
                active[0] if len(active) == 1 else SumDensity(terms=tuple(active))
            )
            segments.append(DensityPiece(a=lo, b=hi, density=density))

        return Measure(
            atoms=tuple(merged_atoms.items()),
            pieces=tuple(segments),
            signed=self.signed or other.signed,
        )

    def spec(self) -> dict:
        """the JSON measure spec of this measure"""
        return {
            "atoms": _serialize_atoms(self.atoms),
            "density": _serialize_pieces(self.pieces),
        }

    @classmethod
    def from_spec(cls, spec: dict, signed: bool = False) -> "Measure":
        return cls(
            atoms=tuple((float(a["s"]), float(a["w"])) for a in spec.get("atoms", [])),
            pieces=tuple(DensityPiece.from_spec(p) for p in spec.get("density", [])),
            signed=signed,
        )

    @classmethod
    def dirac(cls, s: float, w: float = 1.0) -> "Measure":
        return cls(atoms=((s, w),))

    @classmethod
    def with_density(
        cls, density: SmoothDensity, a: float = 0.0, b: float = math.inf
    ) -> "Measure":
        return cls(pieces=(DensityPiece(a=a, b=b, density=density),))


@serializable_dataclass(frozen=True, kw_only=True)
class ScanReport(SerializableDataclass):
    """result of a pointwise sign scan: verdict, most negative value and where it occurs

    a pass means "numerically positive on the grid", never a proof
    """

    verdict: Verdict = serializable_field(
        serialization_fn=lambda x: x.value,
        loading_fn=lambda data: Verdict(data["verdict"]),
    )
    min_value: float
    witness: float | None = serializable_field(default=None)
    n_samples: int = serializable_field(default=0)
    tolerance: float = serializable_field(default=DEFAULT_TOLERANCE)
