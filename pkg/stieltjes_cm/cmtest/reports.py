"""reports produced by the complete-monotonicity and class tests

a pass always means "no violation found at the tested orders on the grid", never a proof.
a fail always carries a witness `(order, point, value)` that reproduces a value below `-tolerance`
"""

import math
from enum import Enum

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.measure.measure import ScanReport, Verdict

PROPOSITION_CAVEAT: str = (
    "the implication assumes non-negativity of c_0..c_{k-1} on (0, inf); "
    "non-negativity on a finite grid at finite precision is a weaker premise"
)


class CMMethod(str, Enum):
    DERIVATIVE_SIGN = "derivative_sign"
    FINITE_DIFFERENCE = "finite_difference"


def combine_verdicts(verdicts: list[Verdict]) -> Verdict:
    """fail if any fails, otherwise inconclusive if any is, otherwise pass"""
    if any(v == Verdict.FAIL for v in verdicts):
        return Verdict.FAIL
    if any(v == Verdict.INCONCLUSIVE for v in verdicts):
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def _verdict_field(default: Verdict | None = None):
    kwargs: dict = dict(
        serialization_fn=lambda x: x.value,
        loading_fn=lambda data: Verdict(data["verdict"]),
    )
    if default is not None:
        kwargs["default"] = default
    return serializable_field(**kwargs)


@serializable_dataclass(frozen=True, kw_only=True)
class Witness(SerializableDataclass):
    """a derivative order and point at which a sign condition fails"""

    order: int
    x: float
    value: float


@serializable_dataclass(frozen=True, kw_only=True)
class OrderResult(SerializableDataclass):
    """minimum of `(-1)^n f^{(n)}` (or of the signed differences) over the grid for one order `n`"""

    order: int
    verdict: Verdict = _verdict_field()
    min_value: float = serializable_field(default=math.nan)
    witness_x: float | None = serializable_field(default=None)
    tolerance: float = serializable_field(default=0.0)
    message: str | None = serializable_field(default=None)


def _load_orders(data: dict) -> tuple[OrderResult, ...]:
    return tuple(OrderResult.load(o) for o in data["orders"])


@serializable_dataclass(
    frozen=True,
    kw_only=True,
    properties_to_serialize=["verdict", "witness"],
)
class CMReport(SerializableDataclass):
    """per-order minima, witnesses and a verdict for a complete monotonicity test"""

    method: CMMethod = serializable_field(
        serialization_fn=lambda x: x.value,
        loading_fn=lambda data: CMMethod(data["method"]),
    )
    orders: tuple[OrderResult, ...] = serializable_field(
        serialization_fn=lambda orders: [o.serialize() for o in orders],
        loading_fn=_load_orders,
    )
    tolerance: float
    n_points: int = serializable_field(default=0)

    @property
    def verdict(self) -> Verdict:
        return combine_verdicts([o.verdict for o in self.orders])

    @property
    def failing_order(self) -> int | None:
        for o in self.orders:
            if o.verdict == Verdict.FAIL:
                return o.order
        return None

    @property
    def witness(self) -> Witness | None:
        """the witness of the lowest failing order"""
        for o in self.orders:
            if o.verdict == Verdict.FAIL:
                return Witness(order=o.order, x=o.witness_x, value=o.min_value)
        return None

    @property
    def minima(self) -> list[float]:
        return [o.min_value for o in self.orders]

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["order", "min", "witness", "tolerance", "verdict"]]
        rows.extend(
            [o.order, o.min_value, o.witness_x, o.tolerance, o.verdict.value]
            for o in self.orders
        )
        return rows


def _load_optional_scan(data: dict) -> ScanReport | None:
    return None if data.get("measure_scan") is None else ScanReport.load(data["measure_scan"])


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["verdict"])
class ClassEntry(SerializableDataclass):
    """the tests of `c_k^λ(f)` for one `k`: function side, and the measure side when it applies"""

    k: int
    function_side: CMReport | None = serializable_field(
        default=None,
        serialization_fn=lambda r: r if r is None or isinstance(r, dict) else r.serialize(),
        loading_fn=lambda data: (
            None if data.get("function_side") is None else CMReport.load(data["function_side"])
        ),
    )
    measure_scan: ScanReport | None = serializable_field(
        default=None,
        serialization_fn=lambda r: r if r is None or isinstance(r, dict) else r.serialize(),
        loading_fn=_load_optional_scan,
    )
    notes: tuple[str, ...] = serializable_field(
        default_factory=tuple,
        serialization_fn=lambda notes: list(notes),
        loading_fn=lambda data: tuple(data["notes"]),
    )

    @property
    def verdict(self) -> Verdict:
        """a failure on either side is a failure, since `μ_k` not positive rules out `c_k` being CM"""
        verdicts: list[Verdict] = list()
        if self.function_side is not None:
            verdicts.append(self.function_side.verdict)
        if self.measure_scan is not None:
            verdicts.append(self.measure_scan.verdict)
        if not verdicts:
            return Verdict.INCONCLUSIVE
        return combine_verdicts(verdicts)

    @property
    def disagreement(self) -> bool:
        if self.function_side is None or self.measure_scan is None:
            return False
        sides: set[Verdict] = {self.function_side.verdict, self.measure_scan.verdict}
        return sides == {Verdict.PASS, Verdict.FAIL}


def _load_entries(data: dict) -> tuple[ClassEntry, ...]:
    return tuple(ClassEntry.load(e) for e in data["entries"])


@serializable_dataclass(
    frozen=True,
    kw_only=True,
    properties_to_serialize=["verdict", "first_failure", "member_of", "disagreements"],
)
class ClassReport(SerializableDataclass):
    """membership of `f` in `C_N^λ`: one entry per `k <= N`

    `member_of` is the largest `K` such that every `k <= K` passes, `None` if `c_0` already does not pass
    """

    lam: float
    N: int
    entries: tuple[ClassEntry, ...] = serializable_field(
        serialization_fn=lambda entries: [e.serialize() for e in entries],
        loading_fn=_load_entries,
    )
    caveat: str = serializable_field(default=PROPOSITION_CAVEAT)

    @property
    def verdict(self) -> Verdict:
        return combine_verdicts([e.verdict for e in self.entries])

    @property
    def first_failure(self) -> int | None:
        for e in self.entries:
            if e.verdict == Verdict.FAIL:
                return e.k
        return None

    @property
    def member_of(self) -> int | None:
        member: int | None = None
        for e in self.entries:
            if e.verdict != Verdict.PASS:
                break
            member = e.k
        return member

    @property
    def disagreements(self) -> list[int]:
        return [e.k for e in self.entries if e.disagreement]

    @property
    def witness(self) -> dict | None:
        """function-side witness of the first failing `k`, or its measure-side witness"""
        k_star: int | None = self.first_failure
        if k_star is None:
            return None
        entry: ClassEntry = self.entries[k_star]
        if entry.function_side is not None and entry.function_side.witness is not None:
            return {"k": k_star, "side": "function", **entry.function_side.witness.serialize()}
        scan: ScanReport = entry.measure_scan
        return {"k": k_star, "side": "measure", "s": scan.witness, "value": scan.min_value}

    def summary(self) -> str:
        if self.verdict == Verdict.PASS:
            return f"member of C_{self.N}^{self.lam} (numerically, on the grid)"
        if self.first_failure is not None:
            member: str = "no class" if self.member_of is None else f"member of C_{self.member_of}"
            return f"{member}, fails at k={self.first_failure}"
        return f"inconclusive beyond k={self.member_of}"

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["k", "order", "min", "witness", "tolerance", "verdict"]]
        for e in self.entries:
            if e.function_side is None:
                continue
            for o in e.function_side.orders:
                rows.append([e.k, o.order, o.min_value, o.witness_x, o.tolerance, o.verdict.value])
        return rows


@serializable_dataclass(frozen=True, kw_only=True)
class LimitProbe(SerializableDataclass):
    """values of `(x^{λ-1+k} f)^{(j)}` at decreasing points, with the decision for one limit clause"""

    j: int
    points: tuple[float, ...] = serializable_field(
        serialization_fn=lambda pts: list(pts),
        loading_fn=lambda data: tuple(data["points"]),
    )
    values: tuple[float, ...] = serializable_field(
        serialization_fn=lambda vals: list(vals),
        loading_fn=lambda data: tuple(data["values"]),
    )
    verdict: Verdict = _verdict_field()
    limit: float | None = serializable_field(default=None)


def _load_probes(key: str):
    return lambda data: tuple(LimitProbe.load(p) for p in data[key])


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["verdict"])
class SignLimitReport(SerializableDataclass):
    """sign and limit clauses for `h = x^{λ-1+k} f`

    - (i) `h^{(j)} >= 0` on the grid for `j <= k`
    - (ii) `h^{(j)}(x) -> 0` as `x -> 0` for `j <= k-2`
    - (iii) `h^{(k-1)}(x)` has a finite limit as `x -> 0`

    `hypothesis_verified` records whether `f` was certified in `C_k^λ` on the grid, `None` if not tested
    """

    lam: float
    k: int
    signs: tuple[OrderResult, ...] = serializable_field(
        serialization_fn=lambda orders: [o.serialize() for o in orders],
        loading_fn=lambda data: tuple(OrderResult.load(o) for o in data["signs"]),
    )
    vanishing: tuple[LimitProbe, ...] = serializable_field(
        default_factory=tuple,
        serialization_fn=lambda probes: [p.serialize() for p in probes],
        loading_fn=_load_probes("vanishing"),
    )
    finite_limit: LimitProbe | None = serializable_field(
        default=None,
        serialization_fn=lambda p: p if p is None or isinstance(p, dict) else p.serialize(),
        loading_fn=lambda data: (
            None if data.get("finite_limit") is None else LimitProbe.load(data["finite_limit"])
        ),
    )
    hypothesis_verified: bool | None = serializable_field(default=None)

    @property
    def verdict(self) -> Verdict:
        verdicts: list[Verdict] = [o.verdict for o in self.signs]
        verdicts.extend(p.verdict for p in self.vanishing)
        if self.finite_limit is not None:
            verdicts.append(self.finite_limit.verdict)
        return combine_verdicts(verdicts)

    @property
    def conditional(self) -> bool:
        return bool(self.hypothesis_verified)


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["counterexample"])
class LowerOrdersReport(SerializableDataclass):
    """non-negative `c_0..c_{k-1}` plus CM `c_k` should give CM `c_j` for every `j < k`

    `premises_hold` is false when the premises fail, in which case nothing is claimed
    """

    lam: float
    k: int
    nonnegative_lower: tuple[bool, ...] = serializable_field(
        serialization_fn=lambda x: list(x),
        loading_fn=lambda data: tuple(data["nonnegative_lower"]),
    )
    top_order: Verdict = serializable_field(
        serialization_fn=lambda x: x.value,
        loading_fn=lambda data: Verdict(data["top_order"]),
    )
    lower_orders: tuple[Verdict, ...] = serializable_field(
        serialization_fn=lambda vs: [v.value for v in vs],
        loading_fn=lambda data: tuple(Verdict(v) for v in data["lower_orders"]),
    )
    caveat: str = serializable_field(default=PROPOSITION_CAVEAT)

    @property
    def premises_hold(self) -> bool:
        return all(self.nonnegative_lower) and self.top_order == Verdict.PASS

    @property
    def counterexample(self) -> bool:
        return self.premises_hold and any(v == Verdict.FAIL for v in self.lower_orders)
