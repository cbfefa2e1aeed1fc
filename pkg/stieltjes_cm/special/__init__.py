from stieltjes_cm.special.quadrature import (
    integrate_with_divergence_probe,
    quad_interval,
    quad_semiinfinite,
)
from stieltjes_cm.special.specfun import (
    binomial,
    falling_factorial,
    gamma_ratio,
    lower_incomplete_gamma,
    pochhammer,
)

__all__ = [
    "binomial",
    "falling_factorial",
    "gamma_ratio",
    "integrate_with_divergence_probe",
    "lower_incomplete_gamma",
    "pochhammer",
    "quad_interval",
    "quad_semiinfinite",
]
