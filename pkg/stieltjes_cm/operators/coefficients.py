"""coefficients of the three evaluation routes of `T_{n,k}^λ`, cached per `(λ, n, k)`

every route writes `(-1)^n T_{n,k}^λ(f)(x)` as a combination of terms `x^m f^{(n+m)}(x)`:
- leibniz: `C(k,m) Γ(n+k+λ)/Γ(n+m+λ)`
- key identity: `Σ_{j=m}^k (λ-1)_{k-j} C(k,j) C(n+j, j-m) j!/m!`, from expanding `Σ_j (λ-1)_{k-j} C(k,j) (x^j f)^{(j+n)}`
- recursion: built from `c_k = (λ+k-1) c_{k-1} + x c_{k-1}'`, differentiated `n` times term by term

the leibniz and key identity coefficients agree by a corollary of the Chu-Vandermonde identity
"""

import functools
import math

from muutils.json_serialize import SerializableDataclass, serializable_dataclass

from stieltjes_cm.special.specfun import (
    binomial,
    falling_factorial,
    gamma_ratio,
    pochhammer,
)


@functools.lru_cache(maxsize=None)
def leibniz_coefficients(lam: float, n: int, k: int) -> tuple[float, ...]:
    return tuple(
        binomial(k, m) * gamma_ratio(n + k + lam, n + m + lam) for m in range(k + 1)
    )


def _key_identity_coefficient(lam: float, n: int, k: int, m: int) -> float:
    return sum(
        pochhammer(lam - 1.0, k - j)
        * binomial(k, j)
        * binomial(n + j, j - m)
        * math.factorial(j)
        / math.factorial(m)
        for j in range(m, k + 1)
    )


@functools.lru_cache(maxsize=None)
def key_identity_coefficients(lam: float, n: int, k: int) -> tuple[float, ...]:
    return tuple(_key_identity_coefficient(lam, n, k, m) for m in range(k + 1))


@functools.lru_cache(maxsize=None)
def recursion_c_coefficients(lam: float, k: int) -> tuple[float, ...]:
    """`a_j` with `c_k^λ(f) = Σ_j a_j x^j f^{(j)}`, from `a^{(k)}_j = (λ+k-1+j) a^{(k-1)}_j + a^{(k-1)}_{j-1}`"""
    if k == 0:
        return (1.0,)
    previous: tuple[float, ...] = recursion_c_coefficients(lam, k - 1)
    return tuple(
        (lam + k - 1 + j) * (previous[j] if j < k else 0.0)
        + (previous[j - 1] if j >= 1 else 0.0)
        for j in range(k + 1)
    )


@functools.lru_cache(maxsize=None)
def recursion_coefficients(lam: float, n: int, k: int) -> tuple[float, ...]:
    """coefficients of `x^m f^{(n+m)}` in `(c_k^λ f)^{(n)}`, by Leibniz on each `x^j f^{(j)}`"""
    a: tuple[float, ...] = recursion_c_coefficients(lam, k)
    out: list[float] = [0.0] * (k + 1)
    for j, a_j in enumerate(a):
        # (x^j f^{(j)})^{(n)} = Σ_i C(n,i) j!/(j-i)! x^{j-i} f^{(j+n-i)}
        for i in range(min(n, j) + 1):
            out[j - i] += a_j * binomial(n, i) * falling_factorial(j, i)
    return tuple(out)


@serializable_dataclass(frozen=True, kw_only=True)
class ChuVandermondeReport(SerializableDataclass):
    """both sides of `Σ_{j=m}^k (λ-1)_{k-j} C(k,j) C(n+j,j-m) j!/m! = C(k,m) Γ(n+k+λ)/Γ(n+m+λ)`

    `gap` is relative to `max(1, |rhs|)`, `abs_gap` is `|lhs - rhs|`
    """

    lam: float
    n: int
    k: int
    m: int
    lhs: float
    rhs: float
    abs_gap: float
    gap: float


def chu_vandermonde_check(lam: float, n: int, k: int, m: int) -> ChuVandermondeReport:
    if not 0 <= m <= k:
        raise ValueError(f"need 0 <= m <= k, got {m = }, {k = }")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n = }")
    lhs: float = _key_identity_coefficient(lam, n, k, m)
    rhs: float = binomial(k, m) * gamma_ratio(n + k + lam, n + m + lam)
    return ChuVandermondeReport(
        lam=lam,
        n=n,
        k=k,
        m=m,
        lhs=lhs,
        rhs=rhs,
        abs_gap=abs(lhs - rhs),
        gap=abs(lhs - rhs) / max(1.0, abs(rhs)),
    )


def chu_vandermonde_sweep(lam: float, max_order: int) -> list[ChuVandermondeReport]:
    """all checks with `0 <= m <= k <= max_order`, `n <= max_order`"""
    return [
        chu_vandermonde_check(lam, n, k, m)
        for n in range(max_order + 1)
        for k in range(max_order + 1)
        for m in range(k + 1)
    ]
