"""density-side recursion of `ρ_k = s^{λ-1} μ_k` and the behaviour of the classes under a shift of `λ`"""

from typing import Callable

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.cmtest.cm_check import class_membership
from stieltjes_cm.cmtest.reports import ClassReport
from stieltjes_cm.constants import (
    DEFAULT_CLASS_N,
    NotAMeasureError,
    SpecialFunctionDomainError,
)
from stieltjes_cm.funcspace.gs_function import GSFunction
from stieltjes_cm.measure.calculus import derived_measure, positivity_scan
from stieltjes_cm.measure.densities import (
    MonomialDerivativeDensity,
    SmoothDensity,
    SumDensity,
)
from stieltjes_cm.measure.measure import (
    DensityPiece,
    Measure,
    ScanGrid,
    ScanReport,
    Verdict,
)
from stieltjes_cm.special.quadrature import quad_interval
from stieltjes_cm.special.specfun import binomial, pochhammer


@serializable_dataclass(frozen=True, kw_only=True, properties_to_serialize=["verdict"])
class RhoRecursionReport(SerializableDataclass):
    """largest relative gaps of the differential and the integrated form of the recursion

    ```
    s v_k'(s) = (λ+k-1) v_k(s) - v_{k+1}(s)
    s v_k(s) - a v_k(a) = ∫_a^s [(λ+k) v_k - v_{k+1}](u) du
    ```
    with `v_k = (-1)^k s^{λ-1+k} w^{(k)}` on each density piece `(a, b)`
    """

    lam: float
    k: int
    differential_gap: float
    convolution_gap: float
    n_points: int
    tolerance: float = serializable_field(default=1e-7)

    @property
    def verdict(self) -> Verdict:
        if self.n_points == 0:
            return Verdict.INCONCLUSIVE
        ok: bool = max(self.differential_gap, self.convolution_gap) <= self.tolerance
        return Verdict.PASS if ok else Verdict.FAIL


def _rho_density(w: SmoothDensity, lam: float, k: int) -> MonomialDerivativeDensity:
    return MonomialDerivativeDensity(base=w, q=lam - 1.0 + k, m=k, coef=(-1.0) ** k)


def rho_recursion_check(
    mu: Measure,
    lam: float,
    k: int,
    grid: ScanGrid | None = None,
    tol: float = 1e-7,
) -> RhoRecursionReport:
    """check both forms of the `ρ_k` recursion at the grid points inside the density pieces

    # Raises:
     - `NotAMeasureError` : if `mu` has atoms
     - `DerivativeCapabilityError` : if a density has fewer than `k+1` derivative orders
    """
    if k < 0:
        raise ValueError(f"need k >= 0, got {k = }")
    if mu.has_atoms:
        raise NotAMeasureError("the density recursion needs a measure without atoms")
    grid = ScanGrid.log_spaced() if grid is None else grid

    differential_gap: float = 0.0
    convolution_gap: float = 0.0
    n_points: int = 0
    for piece in mu.pieces:
        v_k: MonomialDerivativeDensity = _rho_density(piece.density, lam, k)
        v_next: MonomialDerivativeDensity = _rho_density(piece.density, lam, k + 1)
        exponent: float = min(v_k.exponent_at_zero(0), v_next.exponent_at_zero(0))
        rhs_density: Callable[[float], float] = lambda u: (
            (lam + k) * v_k.eval(0, u) - v_next.eval(0, u)
        )
        boundary: float = 0.0 if piece.a == 0.0 else piece.a * v_k.eval(0, piece.a)

        for s in grid:
            if not piece.contains(s):
                continue
            n_points += 1
            lhs: float = s * v_k.eval(1, s)
            rhs: float = (lam + k - 1.0) * v_k.eval(0, s) - v_next.eval(0, s)
            differential_gap = max(
                differential_gap, abs(lhs - rhs) / (1.0 + max(abs(lhs), abs(rhs)))
            )

            integrated: float = quad_interval(
                rhs_density, piece.a, s, singular_exponent=exponent
            )
            weighted: float = s * v_k.eval(0, s) - boundary
            convolution_gap = max(
                convolution_gap,
                abs(weighted - integrated) / (1.0 + max(abs(weighted), abs(integrated))),
            )

    return RhoRecursionReport(
        lam=lam,
        k=k,
        differential_gap=differential_gap,
        convolution_gap=convolution_gap,
        n_points=n_points,
        tolerance=tol,
    )


def lambda_shift_density(
    mu: Measure,
    lam1: float,
    lam2: float,
    k: int,
    grid: ScanGrid | None = None,
) -> tuple[Measure, ScanReport]:
    """`(-1)^k s^k ∂^k (s^{-δ} μ)` with `δ = λ2 - λ1`, expanded as
    ```
    s^{-δ} Σ_j C(k,j) (δ)_{k-j} (-1)^j s^j w^{(j)}(s)
    ```
    every coefficient is positive, so the result is positive whenever `μ_0, ..., μ_k` are.
    jumps between density pieces contribute the same atoms as in `derived_measure`

    # Raises:
     - `SpecialFunctionDomainError` : if `lam2 <= lam1`
     - `NotAMeasureError` : if `mu` has atoms and `k >= 1`
    """
    delta: float = lam2 - lam1
    if not delta > 0:
        raise SpecialFunctionDomainError(f"need lam2 > lam1, got {lam1 = }, {lam2 = }")
    grid = ScanGrid.log_spaced() if grid is None else grid
    reweighted: Measure = mu.power_weighted(-delta)
    if k == 0:
        shifted: Measure = Measure(
            atoms=reweighted.atoms, pieces=reweighted.pieces, signed=True
        )
        return shifted, positivity_scan(shifted, grid)
    if mu.has_atoms:
        raise NotAMeasureError(
            f"the distributional derivative of an atom is not a measure ({k = })"
        )

    pieces: list[DensityPiece] = list()
    for p in mu.pieces:
        terms: tuple[SmoothDensity, ...] = tuple(
            MonomialDerivativeDensity(
                base=p.density,
                q=j - delta,
                m=j,
                coef=binomial(k, j) * pochhammer(delta, k - j) * (-1.0) ** j,
            )
            for j in range(k + 1)
        )
        pieces.append(DensityPiece(a=p.a, b=p.b, density=SumDensity(terms=terms)))
    jump_atoms: tuple[tuple[float, float], ...] = derived_measure(reweighted, k).atoms

    shifted = Measure(atoms=jump_atoms, pieces=tuple(pieces), signed=True)
    return shifted, positivity_scan(shifted, grid)


def _member_rank(report: ClassReport) -> int:
    return -1 if report.member_of is None else report.member_of


@serializable_dataclass(
    frozen=True,
    kw_only=True,
    properties_to_serialize=["degraded_shifts", "verdict"],
)
class InclusionReport(SerializableDataclass):
    """class membership of one function at `λ1` and at `λ1 + shift` for each shift

    membership can only grow with `λ`, so a shifted report with a smaller `member_of` is a degradation
    """

    lam1: float
    N: int
    base: ClassReport = serializable_field(
        serialization_fn=lambda r: r if isinstance(r, dict) else r.serialize(),
        loading_fn=lambda data: ClassReport.load(data["base"]),
    )
    shifted: tuple[ClassReport, ...] = serializable_field(
        serialization_fn=lambda reports: [r.serialize() for r in reports],
        loading_fn=lambda data: tuple(ClassReport.load(r) for r in data["shifted"]),
    )

    @property
    def degraded_shifts(self) -> list[float]:
        """the `λ` values at which membership is smaller than at `λ1`"""
        base_rank: int = _member_rank(self.base)
        return [r.lam for r in self.shifted if _member_rank(r) < base_rank]

    @property
    def verdict(self) -> Verdict:
        return Verdict.FAIL if self.degraded_shifts else Verdict.PASS


def class_inclusion_check(
    f: GSFunction,
    lam1: float | None = None,
    N: int = DEFAULT_CLASS_N,
    grid: ScanGrid | None = None,
    shifts: tuple[float, ...] = (0.5, 1.0, 2.0),
    derivative_orders: int | None = None,
    verbose: bool = False,
) -> InclusionReport:
    """compare `class_membership` of `f` at `λ1` with its membership at `λ1 + shift`"""
    print_log: Callable = print if verbose else lambda *_a, **_kw: None
    lam1 = f.lam if lam1 is None else lam1
    if not all(s > 0 for s in shifts):
        raise ValueError(f"shifts must be positive, got {shifts}")
    grid = ScanGrid.log_spaced() if grid is None else grid

    def membership(lam: float) -> ClassReport:
        report: ClassReport = class_membership(
            f, N=N, grid=grid, lam=lam, derivative_orders=derivative_orders
        )
        print_log(f"lam={lam}: {report.summary()}")
        return report

    base: ClassReport = membership(lam1)
    shifted: tuple[ClassReport, ...] = tuple(membership(lam1 + s) for s in shifts)
    return InclusionReport(lam1=lam1, N=N, base=base, shifted=shifted)
