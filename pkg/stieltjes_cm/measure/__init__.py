from stieltjes_cm.measure.calculus import (
    AdmissibilityReport,
    derived_measure,
    image_reciprocal,
    integrate_measure,
    levy_admissibility,
    moment,
    positivity_scan,
    tail_power_integral,
)
from stieltjes_cm.measure.densities import (
    DENSITY_FAMILIES,
    ExpDensity,
    ExprDensity,
    MonomialDerivativeDensity,
    PolyDensity,
    PowerDensity,
    Provenance,
    RationalDensity,
    ReciprocalImageDensity,
    SmoothDensity,
    SumDensity,
    density_from_spec,
    register_density_family,
)
from stieltjes_cm.measure.measure import (
    DensityPiece,
    Measure,
    ScanGrid,
    ScanReport,
    Verdict,
)

__all__ = [
    "AdmissibilityReport",
    "DENSITY_FAMILIES",
    "DensityPiece",
    "ExpDensity",
    "ExprDensity",
    "Measure",
    "MonomialDerivativeDensity",
    "PolyDensity",
    "PowerDensity",
    "Provenance",
    "RationalDensity",
    "ReciprocalImageDensity",
    "ScanGrid",
    "ScanReport",
    "SmoothDensity",
    "SumDensity",
    "Verdict",
    "density_from_spec",
    "derived_measure",
    "image_reciprocal",
    "integrate_measure",
    "levy_admissibility",
    "moment",
    "positivity_scan",
    "register_density_family",
    "tail_power_integral",
]
