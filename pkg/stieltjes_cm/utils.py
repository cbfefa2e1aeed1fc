import math
import os
import typing
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from stieltjes_cm.constants import THREADS_ENV_VAR, GridPoints


def log_grid(lo: float, hi: float, n: int) -> GridPoints:
    """`n` log-spaced points on `[lo, hi]`, endpoints included"""
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got {lo = }, {hi = }")
    if n < 1:
        raise ValueError(f"need at least one point, got {n = }")
    if n == 1:
        return np.array([lo], dtype=np.float64)
    return np.geomspace(lo, hi, n)


def decade_points(decades: Iterable[int]) -> list[float]:
    return [10.0**d for d in decades]


def aitken_limit(values: Sequence[float]) -> float:
    """estimate the limit of a sequence from its last three terms via Aitken's delta-squared process

    falls back to the last term when the second difference vanishes

    ```
    >>> aitken_limit([1e-4, 1e-5, 1e-6])
    0.0
    >>> aitken_limit([2.0, 2.0, 2.0])
    2.0
    ```
    """
    if len(values) < 3:
        return float(values[-1])
    v0, v1, v2 = (float(v) for v in values[-3:])
    d1: float = v1 - v0
    d2: float = v2 - v1
    if abs(d2) <= 1e-14 * max(1.0, abs(v2)):
        return v2
    denom: float = d2 - d1
    if denom == 0.0 or not math.isfinite(denom):
        return v2
    est: float = v2 - d2 * d2 / denom
    # a geometric sequence converging to zero gives exactly zero up to rounding
    if abs(est) <= 1e-12 * max(abs(v0), abs(v1), abs(v2)):
        return 0.0
    return est


def is_monotone_decay(values: Sequence[float], tol: float = 0.0) -> bool:
    """whether `|values|` decays toward zero over the last three terms

    all-zero (within `tol`) sequences count as decayed
    """
    mags: list[float] = [abs(float(v)) for v in values[-3:]]
    if all(m <= tol for m in mags):
        return True
    nonincreasing: bool = all(b <= a + tol for a, b in zip(mags, mags[1:]))
    return nonincreasing and mags[-1] < mags[0]


def is_cauchy_stable(values: Sequence[float], rtol: float = 1e-3, atol: float = 0.0) -> bool:
    """whether successive differences shrink over the last three terms and the final step is small"""
    tail: list[float] = [float(v) for v in values[-3:]]
    if not all(math.isfinite(v) for v in tail):
        return False
    diffs: list[float] = [abs(b - a) for a, b in zip(tail, tail[1:])]
    shrinking: bool = all(b <= a + atol for a, b in zip(diffs, diffs[1:]))
    return shrinking and diffs[-1] <= max(atol, rtol * max(1.0, abs(tail[-1])))


def round_floats(obj: typing.Any, sig: int = 12) -> typing.Any:
    """recursively round floats to `sig` significant digits, mapping infinities and nans to strings"""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x: float = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.{sig}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return round_floats(obj.tolist(), sig)
    if isinstance(obj, dict):
        return {k: round_floats(v, sig) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, sig) for v in obj]
    return obj


def get_process_count(default: int | None = None) -> int | None:
    """worker count for process pools, capped by the `STIELTJES_THREADS` environment variable if set"""
    raw: str | None = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return default
    try:
        cap: int = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    if cap < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return cap if default is None else min(cap, default)
