import numpy as np
from jaxtyping import Bool, Float

# array aliases
GridPoints = Float[np.ndarray, "n_points"]
GridMask = Bool[np.ndarray, "n_points"]
RouteValues = Float[np.ndarray, "route n k n_points"]

# grids
DEFAULT_GRID_MIN: float = 1e-3
DEFAULT_GRID_MAX: float = 1e3
DEFAULT_GRID_N: int = 64
DEFAULT_TOLERANCE: float = 1e-9

# derivative caps
QUADRATURE_DERIVATIVE_CAP: int = 12
CLOSED_FORM_DERIVATIVE_CAP: int = 30
FINITE_DIFFERENCE_MAX_ORDER: int = 6

# quadrature
QUAD_EPSREL: float = 1e-10
QUAD_EPSABS: float = 1e-15
QUAD_LIMIT: int = 2**14
# relative error estimate above which a quadrature result is rejected
QUAD_FAIL_RTOL: float = 1e-6
DIVERGENCE_PROBE_STEPS: int = 24
DIVERGENCE_RELATIVE_CHANGE: float = 0.01

# limit probes, as powers of ten
PROBE_DECADES_ZERO: tuple[int, ...] = (-2, -3, -4, -5, -6)
PROBE_DECADES_INFINITY: tuple[int, ...] = (2, 3, 4)

# default class membership depth
DEFAULT_CLASS_N: int = 8

# small-x region where the recursion route loses accuracy for lam < 1
LOW_CONFIDENCE_X: float = 1e-6

THREADS_ENV_VAR: str = "STIELTJES_THREADS"



class SpecialFunctionDomainError(ValueError):
    """raised when a gamma-family function is called outside its domain"""

    pass


class NotAMeasureError(ValueError):
    """raised when a distributional derivative of a measure is not itself a measure"""

    pass


class DerivativeCapabilityError(ValueError):
    """raised when a derivative order above the available cap is requested"""

    pass


class QuadratureError(ArithmeticError):
    """raised when adaptive quadrature does not reach its tolerance"""

    pass


class DivergentIntegralError(QuadratureError):
    """raised when an integral is detected to diverge"""

    pass


class EvaluationError(ValueError):
    """raised when evaluating a function fails, naming the failing component"""

    pass


class InadmissibleMeasureError(ValueError):
    """raised when a measure does not satisfy the integrability conditions of the bernstein builders"""

    pass


class SpecValidationError(ValueError):
    """raised when a spec file does not validate. `diagnostics` holds field-level messages"""

    def __init__(self, diagnostics: list[str]) -> None:
        self.diagnostics: list[str] = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))
