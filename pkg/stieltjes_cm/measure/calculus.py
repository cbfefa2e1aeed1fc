"""moments, tails, admissibility and the distributional transform `μ_k = (-1)^k s^k ∂^k μ`"""

import math
from typing import Callable

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)

from stieltjes_cm.constants import (
    DerivativeCapabilityError,
    NotAMeasureError,
)
from stieltjes_cm.measure.densities import (
    MonomialDerivativeDensity,
    Provenance,
    ReciprocalImageDensity,
)
from stieltjes_cm.measure.measure import (
    DensityPiece,
    Measure,
    ScanGrid,
    ScanReport,
    Verdict,
)
from stieltjes_cm.special.quadrature import integrate_with_divergence_probe

# relative size below which a jump between adjacent pieces is treated as zero
_JUMP_RTOL: dict[Provenance, float] = {
    Provenance.CLOSED_FORM: 1e-10,
    Provenance.FINITE_DIFFERENCE: 1e-6,
}


def integrate_measure(
    mu: Measure,
    g: Callable[[float], float],
    lower: float = 0.0,
    upper: float = math.inf,
    g_exponent_at_zero: float = 0.0,
    include_lower: bool = False,
) -> float:
    """`∫ g dμ` over `(lower, upper)` (closed at `lower` if `include_lower`), `math.inf` on divergence

    meant for non-negative integrands, divergence is decided by `integrate_with_divergence_probe`
    """
    total: float = 0.0
    for s, w in mu.atoms:
        in_lower: bool = s >= lower if include_lower else s > lower
        if in_lower and s < upper and w != 0.0:
            total += w * g(s)
    for piece in mu.pieces:
        lo: float = max(piece.a, lower)
        hi: float = min(piece.b, upper)
        if not lo < hi:
            continue
        density = piece.density
        value: float = integrate_with_divergence_probe(
            lambda s: g(s) * density.eval(0, s),
            lo,
            hi,
            singular_exponent=g_exponent_at_zero + density.exponent_at_zero(0),
        )
        if math.isinf(value):
            return math.inf
        total += value
    return total


def moment(mu: Measure, k: int) -> float:
    """`s_k(μ) = ∫ s^k dμ(s)`, `math.inf` if it diverges"""
    if k < 0:
        raise ValueError(f"moment order must be non-negative, got {k = }")
    return integrate_measure(mu, lambda s: s**k, g_exponent_at_zero=float(k))


def derived_measure(mu: Measure, k: int) -> Measure:
    """the signed measure `μ_k = (-1)^k s^k ∂^k μ` for `dμ = w(s) ds`

    on each piece the density is `(-1)^k s^k w^{(k)}(s)`. at a boundary `s0` shared by pieces (or where a
    piece ends), the jumps `J_i = w^{(i)}(s0+) - w^{(i)}(s0-)` are measured:
    - a nonzero `J_i` with `i < k-1` makes `∂^k μ` a non-measure distribution
    - a nonzero `J_{k-1}` contributes the atom `(-1)^k s0^k J_{k-1} δ_{s0}`

    # Raises:
     - `NotAMeasureError` : if `mu` has atoms and `k >= 1`, or for a low-order jump as above
     - `DerivativeCapabilityError` : if a density does not provide `k` derivatives
    """
    if k < 0:
        raise ValueError(f"derived measure order must be non-negative, got {k = }")
    if k == 0:
        return mu
    if mu.has_atoms:
        raise NotAMeasureError(
            f"the distributional derivative of an atom is not a measure (atoms at {[s for s, _ in mu.atoms]}, {k = })"
        )
    for i, piece in enumerate(mu.pieces):
        if piece.density.max_derivative_order < k:
            raise DerivativeCapabilityError(
                f"density piece {i} ({piece.density.family}) provides {piece.density.max_derivative_order} derivatives, {k} needed"
            )

    sign: float = (-1.0) ** k
    pieces: tuple[DensityPiece, ...] = tuple(
        DensityPiece(
            a=p.a,
            b=p.b,
            density=MonomialDerivativeDensity(base=p.density, q=float(k), m=k, coef=sign),
        )
        for p in mu.pieces
    )

    jump_atoms: list[tuple[float, float]] = list()
    boundaries: set[float] = {
        e for p in mu.pieces for e in (p.a, p.b) if 0.0 < e < math.inf
    }
    for s0 in sorted(boundaries):
        left: DensityPiece | None = next((p for p in mu.pieces if p.b == s0), None)
        right: DensityPiece | None = next((p for p in mu.pieces if p.a == s0), None)
        for i in range(k):
            left_val: float = left.density.eval(i, s0) if left is not None else 0.0
            right_val: float = right.density.eval(i, s0) if right is not None else 0.0
            jump: float = right_val - left_val
            provenance: Provenance = Provenance.CLOSED_FORM
            if any(
                p is not None and p.density.provenance == Provenance.FINITE_DIFFERENCE
                for p in (left, right)
            ):
                provenance = Provenance.FINITE_DIFFERENCE
            if abs(jump) <= _JUMP_RTOL[provenance] * max(1.0, abs(left_val), abs(right_val)):
                continue
            if i < k - 1:
                raise NotAMeasureError(
                    f"density derivative of order {i} jumps by {jump} at s={s0}, so the order-{k} derivative is not a measure"
                )
            jump_atoms.append((s0, sign * s0**k * jump))

    return Measure(atoms=tuple(jump_atoms), pieces=pieces, signed=True)


def positivity_scan(mu_signed: Measure, grid: ScanGrid) -> ScanReport:
    """sample the densities of a signed measure on the grid (and its atom weights) and report the minimum

    inconclusive when no grid point falls in the support and there are no atoms
    """
    samples: list[tuple[float, float]] = list()
    for s in grid.points:
        for piece in mu_signed.pieces:
            if piece.contains(s):
                samples.append((s, piece.density.eval(0, s)))
    samples.extend((s, w) for s, w in mu_signed.atoms)

    if not samples:
        return ScanReport(
            verdict=Verdict.INCONCLUSIVE,
            min_value=math.nan,
            witness=None,
            n_samples=0,
            tolerance=grid.tolerance,
        )
    witness, min_value = min(samples, key=lambda sv: sv[1])
    return ScanReport(
        verdict=Verdict.PASS if min_value >= -grid.tolerance else Verdict.FAIL,
        min_value=min_value,
        witness=witness,
        n_samples=len(samples),
        tolerance=grid.tolerance,
    )


def tail_power_integral(mu: Measure, lam: float, u: float) -> float:
    """`∫_{(u, ∞)} s^{-lam} dμ(s)`, `math.inf` if the tail diverges"""
    if not u > 0:
        raise ValueError(f"tail integral needs u > 0, got {u = }")
    return integrate_measure(mu, lambda s: s ** (-lam), lower=u)


@serializable_dataclass(frozen=True, kw_only=True)
class AdmissibilityReport(SerializableDataclass):
    """integrability of `μ` near `0` (`∫_0^1 dμ`) and of `t^{-λ} dμ` near infinity"""

    lam: float
    mass_near_zero: float
    tail_integral: float
    admissible: bool = serializable_field(default=False)

    def __bool__(self) -> bool:
        return self.admissible

    @property
    def failing_condition(self) -> str | None:
        if math.isinf(self.mass_near_zero):
            return "measure is not integrable at 0: ∫_0^1 dμ diverges"
        if math.isinf(self.tail_integral):
            return f"∫_1^∞ t^(-{self.lam}) dμ(t) diverges"
        return None


def levy_admissibility(mu: Measure, lam: float) -> AdmissibilityReport:
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam = }")
    # atoms at exactly 1 count toward the first integral
    near_zero: float = integrate_measure(
        mu, lambda s: 1.0, upper=math.nextafter(1.0, math.inf)
    )
    tail: float = integrate_measure(mu, lambda s: s ** (-lam), lower=1.0)
    return AdmissibilityReport(
        lam=lam,
        mass_near_zero=near_zero,
        tail_integral=tail,
        admissible=math.isfinite(near_zero) and math.isfinite(tail),
    )


def image_reciprocal(mu: Measure) -> Measure:
    """push-forward under `s -> 1/s`"""
    return Measure(
        atoms=tuple((1.0 / s, w) for s, w in mu.atoms),
        pieces=tuple(
            DensityPiece(
                a=0.0 if math.isinf(p.b) else 1.0 / p.b,
                b=math.inf if p.a == 0.0 else 1.0 / p.a,
                density=ReciprocalImageDensity(base=p.density),
            )
            for p in mu.pieces
        ),
        signed=mu.signed,
    )
