"""JSON spec files for functions and measures: validation, normalization and construction

a spec is a JSON object
```
{
    "lambda": 1.5,                       # order, required, > 0
    "c": 0.0,                            # optional additive constant
    "zero_atom": 0.0,                    # optional coefficient of x^-lambda
    "laplace_measure": {...},            # exactly one representation:
    "stieltjes_measure": {...},          #   a measure spec under one of these three keys,
    "measure": {...},                    #   ("measure" is a bare measure, read as the laplace side)
    "closed_form": [{"kind": "exponential", "weight": 1, "t": 1}, ...],
    "bernstein": {"alpha": 0.0, "beta": 0.0},
    "grid": {"min": 1e-3, "max": 1e3, "n": 64, "tolerance": 1e-9}   # or {"points": [...]}
}
```
and a measure spec is
```
{
    "atoms": [{"s": 1.0, "w": 1.0}],
    "density": [{"interval": [0, null], "family": "exp", "params": {"a": 1, "b": 1}}]
}
```
"""

import json
import math
import numbers
from pathlib import Path
from typing import Any

from stieltjes_cm.constants import (
    DEFAULT_GRID_MAX,
    DEFAULT_GRID_MIN,
    DEFAULT_GRID_N,
    DEFAULT_TOLERANCE,
    SpecValidationError,
)
from stieltjes_cm.funcspace.closed_form import ClosedForm
from stieltjes_cm.funcspace.gs_function import GSFunction
from stieltjes_cm.measure.densities import DENSITY_FAMILIES, density_from_spec
from stieltjes_cm.measure.measure import Measure, ScanGrid

MEASURE_KEYS: tuple[str, ...] = ("laplace_measure", "stieltjes_measure", "measure")
REPRESENTATION_KEYS: tuple[str, ...] = (*MEASURE_KEYS, "closed_form")
KNOWN_KEYS: frozenset[str] = frozenset(
    ("lambda", "c", "zero_atom", "bernstein", "grid", *REPRESENTATION_KEYS)
)


def _is_number(x: Any) -> bool:
    return isinstance(x, numbers.Real) and not isinstance(x, bool) and math.isfinite(x)


def load_spec_file(path: Path | str) -> dict:
    """read a spec file, turning read and parse failures into diagnostics with line and column"""
    path = Path(path)
    try:
        text: str = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SpecValidationError([f"{path}: cannot read spec file ({e.strerror})"]) from e
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecValidationError([f"{path}: line {e.lineno}, column {e.colno}: {e.msg}"]) from e
    if not isinstance(data, dict):
        raise SpecValidationError([f"{path}: spec must be a JSON object, got {type(data).__name__}"])
    return data


def _check_nonneg(spec: dict, key: str, diagnostics: list[str], default: float = 0.0) -> float:
    value: Any = spec.get(key, default)
    if not _is_number(value):
        diagnostics.append(f"{key}: must be a finite number, got {value!r}")
        return default
    if value < 0:
        diagnostics.append(f"{key}: must be non-negative, got {value}")
        return default
    return float(value)


def _normalize_measure(spec: Any, where: str, diagnostics: list[str]) -> dict | None:
    if not isinstance(spec, dict):
        diagnostics.append(f"{where}: must be an object with 'atoms' and/or 'density'")
        return None
    n_before: int = len(diagnostics)
    for key in spec:
        if key not in ("atoms", "density"):
            diagnostics.append(f"{where}.{key}: unknown key")

    atoms: list[dict] = list()
    raw_atoms: Any = spec.get("atoms", [])
    if not isinstance(raw_atoms, list):
        diagnostics.append(f"{where}.atoms: must be a list")
        raw_atoms = []
    for i, atom in enumerate(raw_atoms):
        loc: str = f"{where}.atoms[{i}]"
        if not isinstance(atom, dict):
            diagnostics.append(f"{loc}: must be an object with 's' and 'w'")
            continue
        s, w = atom.get("s"), atom.get("w")
        if not _is_number(s) or not s > 0:
            diagnostics.append(f"{loc}.s: location must be a positive number, got {s!r}")
        if not _is_number(w):
            diagnostics.append(f"{loc}.w: weight must be a finite number, got {w!r}")
        elif w < 0:
            diagnostics.append(f"{loc}.w: weight must be non-negative, got {w}")
        else:
            atoms.append({"s": float(s) if _is_number(s) else s, "w": float(w)})

    pieces: list[dict] = list()
    raw_pieces: Any = spec.get("density", [])
    if isinstance(raw_pieces, dict):
        raw_pieces = [raw_pieces]
    if not isinstance(raw_pieces, list):
        diagnostics.append(f"{where}.density: must be a list of density pieces")
        raw_pieces = []
    for i, piece in enumerate(raw_pieces):
        loc = f"{where}.density[{i}]"
        if not isinstance(piece, dict):
            diagnostics.append(f"{loc}: must be an object")
            continue
        piece = dict(piece)
        interval: Any = piece.setdefault("interval", [0.0, None])
        if (
            not isinstance(interval, list)
            or len(interval) != 2
            or not _is_number(interval[0])
            or not (interval[1] is None or _is_number(interval[1]))
        ):
            diagnostics.append(f"{loc}.interval: must be [a, b] with b null for infinity, got {interval!r}")
            continue
        a: float = float(interval[0])
        b: float = math.inf if interval[1] is None else float(interval[1])
        if not 0.0 <= a < b:
            diagnostics.append(f"{loc}.interval: need 0 <= a < b, got [{a}, {interval[1]}]")
            continue
        family: Any = piece.get("family")
        if family not in DENSITY_FAMILIES:
            diagnostics.append(
                f"{loc}.family: unknown density family {family!r}, expected one of {sorted(DENSITY_FAMILIES)}"
            )
            continue
        if not isinstance(piece.setdefault("params", dict()), dict):
            diagnostics.append(f"{loc}.params: must be an object")
            continue
        try:
            density_from_spec(piece)
        except (TypeError, ValueError, KeyError) as e:
            diagnostics.append(f"{loc}: {type(e).__name__}: {e}")
            continue
        pieces.append(piece)

    if len(diagnostics) > n_before:
        return None
    try:
        measure: Measure = Measure.from_spec({"atoms": atoms, "density": pieces})
    except (ValueError, ArithmeticError) as e:
        diagnostics.append(f"{where}: {e}")
        return None
    return measure.spec()


def _normalize_closed_form(spec: Any, diagnostics: list[str]) -> dict | None:
    terms: Any = spec.get("terms") if isinstance(spec, dict) else spec
    if not isinstance(terms, list):
        diagnostics.append("closed_form: must be a list of terms or an object with 'terms'")
        return None
    n_before: int = len(diagnostics)
    for i, term in enumerate(terms):
        try:
            ClosedForm.from_spec([term])
        except (TypeError, ValueError, AttributeError) as e:
            diagnostics.append(f"closed_form[{i}]: {e}")
    if len(diagnostics) > n_before:
        return None
    return ClosedForm.from_spec(terms).spec()


def _normalize_grid(spec: Any, diagnostics: list[str]) -> dict:
    default: dict = {
        "min": DEFAULT_GRID_MIN,
        "max": DEFAULT_GRID_MAX,
        "n": DEFAULT_GRID_N,
        "tolerance": DEFAULT_TOLERANCE,
    }
    if spec is None:
        return default
    if not isinstance(spec, dict):
        diagnostics.append("grid: must be an object")
        return default
    tolerance: Any = spec.get("tolerance", DEFAULT_TOLERANCE)
    if not _is_number(tolerance) or tolerance < 0:
        diagnostics.append(f"grid.tolerance: must be a non-negative number, got {tolerance!r}")
        tolerance = DEFAULT_TOLERANCE
    if "points" in spec:
        points: Any = spec["points"]
        if not isinstance(points, list) or not points or not all(_is_number(p) and p > 0 for p in points):
            diagnostics.append("grid.points: must be a nonempty list of positive numbers")
            return default
        return {"points": sorted(float(p) for p in set(points)), "tolerance": float(tolerance)}
    lo: Any = spec.get("min", DEFAULT_GRID_MIN)
    hi: Any = spec.get("max", DEFAULT_GRID_MAX)
    n: Any = spec.get("n", DEFAULT_GRID_N)
    if not (_is_number(lo) and _is_number(hi) and 0 < lo < hi):
        diagnostics.append(f"grid: need 0 < min < max, got min={lo!r}, max={hi!r}")
        return default
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        diagnostics.append(f"grid.n: must be a positive integer, got {n!r}")
        return default
    return {"min": float(lo), "max": float(hi), "n": n, "tolerance": float(tolerance)}


def validate_spec(spec: dict | Path | str) -> dict:
    """check a spec (or the spec file at a path) and return it normalized, with defaults filled in

    measure specs are echoed in the canonical form produced by `Measure.spec()`

    # Raises:
     - `SpecValidationError` : carrying one diagnostic per offending field
    """
    if not isinstance(spec, dict):
        spec = load_spec_file(spec)
    diagnostics: list[str] = list()

    for key in spec:
        if key not in KNOWN_KEYS:
            diagnostics.append(f"{key}: unknown key, expected one of {sorted(KNOWN_KEYS)}")

    lam: Any = spec.get("lambda")
    if lam is None:
        diagnostics.append("lambda: required")
    elif not _is_number(lam):
        diagnostics.append(f"lambda: must be a number, got {lam!r}")
    elif not lam > 0:
        diagnostics.append(f"lambda: lambda must be positive, got {lam}")

    normalized: dict = {
        "lambda": float(lam) if _is_number(lam) else lam,
        "c": _check_nonneg(spec, "c", diagnostics),
        "zero_atom": _check_nonneg(spec, "zero_atom", diagnostics),
    }

    present: list[str] = [k for k in REPRESENTATION_KEYS if k in spec]
    if len(present) != 1:
        diagnostics.append(
            f"spec: exactly one of {list(REPRESENTATION_KEYS)} is required, got {present}"
        )
    for key in present:
        if key == "closed_form":
            normalized[key] = _normalize_closed_form(spec[key], diagnostics)
        else:
            normalized[key] = _normalize_measure(spec[key], key, diagnostics)

    bernstein: Any = spec.get("bernstein", dict())
    if not isinstance(bernstein, dict):
        diagnostics.append("bernstein: must be an object with 'alpha' and 'beta'")
        bernstein = dict()
    normalized["bernstein"] = {
        "alpha": _check_nonneg(bernstein, "alpha", diagnostics),
        "beta": _check_nonneg(bernstein, "beta", diagnostics),
    }
    normalized["grid"] = _normalize_grid(spec.get("grid"), diagnostics)

    if diagnostics:
        raise SpecValidationError(diagnostics)
    return normalized


def build_grid(normalized: dict, **overrides: Any) -> ScanGrid:
    """the scan grid of a normalized spec, with `min`/`max`/`n`/`tolerance` overrides that are not `None`"""
    grid: dict = dict(normalized["grid"])
    grid.update({k: v for k, v in overrides.items() if v is not None})
    if "points" in grid:
        return ScanGrid(points=tuple(grid["points"]), tolerance=grid["tolerance"])
    return ScanGrid.log_spaced(grid["min"], grid["max"], grid["n"], tolerance=grid["tolerance"])


def build_measure(normalized: dict) -> Measure:
    """the measure of a normalized spec, from whichever measure key it carries"""
    for key in MEASURE_KEYS:
        if normalized.get(key) is not None:
            return Measure.from_spec(normalized[key])
    raise SpecValidationError([f"spec: a measure under one of {list(MEASURE_KEYS)} is required"])


def build_function(normalized: dict, lam: float | None = None) -> GSFunction:
    """the function of a normalized spec. a bare `measure` is read as the laplace side"""
    lam = normalized["lambda"] if lam is None else lam
    c: float = normalized["c"]
    zero_atom: float = normalized["zero_atom"]
    if normalized.get("closed_form") is not None:
        return GSFunction.from_closed_form(
            ClosedForm.from_spec(normalized["closed_form"]), lam, c=c, zero_atom=zero_atom
        )
    if normalized.get("stieltjes_measure") is not None:
        return GSFunction.from_stieltjes(
            Measure.from_spec(normalized["stieltjes_measure"]), lam, c=c, zero_atom=zero_atom
        )
    return GSFunction.from_laplace(build_measure(normalized), lam, c=c, zero_atom=zero_atom)
