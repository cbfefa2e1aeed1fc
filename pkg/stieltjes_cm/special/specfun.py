"""gamma-family quantities: gamma ratios, rising and falling factorials, the lower incomplete gamma function"""

import math

import numpy as np
from scipy import special

from stieltjes_cm.constants import SpecialFunctionDomainError

# product loops are exact enough up to this many factors
_POCHHAMMER_PRODUCT_MAX_K: int = 64


def gamma_ratio(a: float, b: float) -> float:
    """`Γ(a)/Γ(b)` for `a, b > 0`

    uses `scipy.special.poch(b, a - b)`, which avoids forming either gamma value.
    falls back to a log-gamma difference if that overflows
    """
    if not (a > 0 and b > 0):
        raise SpecialFunctionDomainError(
            f"gamma_ratio needs positive arguments, got {a = }, {b = }"
        )
    if a == b:
        return 1.0
    value: float = float(special.poch(b, a - b))
    if math.isfinite(value) and value != 0.0:
        return value
    return math.exp(special.gammaln(a) - special.gammaln(b))


def pochhammer(a: float, k: int) -> float:
    """rising factorial `(a)_k = a(a+1)...(a+k-1)`, with `(a)_0 = 1`

    any real base is accepted, since the key-identity coefficients need `(λ-1)_m` with `λ < 1`
    """
    if k < 0:
        raise SpecialFunctionDomainError(f"pochhammer index must be non-negative, got {k = }")
    if k <= _POCHHAMMER_PRODUCT_MAX_K:
        out: float = 1.0
        for i in range(k):
            out *= a + i
        return out
    if a > 0:
        return gamma_ratio(a + k, a)
    return float(special.poch(a, k))


def falling_factorial(a: float, k: int) -> float:
    """`a(a-1)...(a-k+1)`, the coefficient of `s^(a-k)` in the `k`-th derivative of `s^a`"""
    if k < 0:
        raise SpecialFunctionDomainError(f"falling factorial index must be non-negative, got {k = }")
    out: float = 1.0
    for i in range(k):
        out *= a - i
    return out


def binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return 0.0
    return float(math.comb(n, k))


def lower_incomplete_gamma(lam: float, x: float) -> float:
    """`γ(lam, x) = ∫_0^x e^{-u} u^{lam-1} du`

    the regularized `scipy.special.gammainc` times `Γ(lam)`, combined in log space when `Γ(lam)` would overflow
    """
    if not lam > 0:
        raise SpecialFunctionDomainError(f"lower_incomplete_gamma needs lam > 0, got {lam = }")
    if x < 0:
        raise SpecialFunctionDomainError(f"lower_incomplete_gamma needs x >= 0, got {x = }")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return float(special.gamma(lam))
    regularized: float = float(special.gammainc(lam, x))
    if lam < 170.0:
        return regularized * float(special.gamma(lam))
    if regularized == 0.0:
        return 0.0
    return float(np.exp(np.log(regularized) + special.gammaln(lam)))
