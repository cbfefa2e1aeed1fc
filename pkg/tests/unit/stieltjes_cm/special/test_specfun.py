import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from stieltjes_cm.constants import SpecialFunctionDomainError
from stieltjes_cm.special.specfun import (
    binomial,
    falling_factorial,
    gamma_ratio,
    lower_incomplete_gamma,
    pochhammer,
)


def test_gamma_ratio_examples():
    assert gamma_ratio(4.5, 2.5) == pytest.approx(8.75, rel=1e-12)
    assert gamma_ratio(1.0, 1.0) == 1.0
    assert gamma_ratio(5.0, 3.0) == pytest.approx(12.0, rel=1e-12)


def test_gamma_ratio_large_arguments():
    # both gamma values overflow a float
    assert gamma_ratio(201.0, 200.0) == pytest.approx(200.0, rel=1e-10)


@given(st.floats(min_value=1e-3, max_value=150.0))
def test_gamma_ratio_recurrence(a: float):
    assert gamma_ratio(a + 1.0, a) == pytest.approx(a, rel=1e-12)


@pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, -2.0), (-0.5, -0.5)])
def test_gamma_ratio_domain(a: float, b: float):
    with pytest.raises(SpecialFunctionDomainError):
        gamma_ratio(a, b)


def test_pochhammer_examples():
    assert pochhammer(0.5, 2) == pytest.approx(0.75)
    assert pochhammer(3.7, 0) == 1.0
    assert pochhammer(2.0, 3) == 24.0
    # zero and negative bases appear in the key-identity coefficients
    assert pochhammer(0.0, 0) == 1.0
    assert pochhammer(0.0, 3) == 0.0
    assert pochhammer(-0.5, 2) == pytest.approx(-0.25)


def test_pochhammer_matches_scipy():
    for a in (0.3, 1.0, 2.5, 7.0):
        for k in (1, 5, 20, 80):
            assert pochhammer(a, k) == pytest.approx(float(special.poch(a, k)), rel=1e-10)


@given(st.floats(min_value=1e-2, max_value=50.0), st.integers(min_value=0, max_value=30))
def test_pochhammer_recurrence(a: float, k: int):
    assert pochhammer(a, k + 1) == pytest.approx(pochhammer(a, k) * (a + k), rel=1e-12)


def test_pochhammer_negative_index():
    with pytest.raises(SpecialFunctionDomainError):
        pochhammer(1.0, -1)


def test_falling_factorial():
    assert falling_factorial(5.0, 2) == 20.0
    assert falling_factorial(2.0, 3) == 0.0
    assert falling_factorial(0.5, 2) == pytest.approx(-0.25)
    with pytest.raises(SpecialFunctionDomainError):
        falling_factorial(1.0, -1)


def test_binomial():
    assert binomial(5, 2) == 10.0
    assert binomial(3, 0) == 1.0
    assert binomial(3, 4) == 0.0
    assert binomial(3, -1) == 0.0


def test_lower_incomplete_gamma_examples():
    assert lower_incomplete_gamma(1.0, math.log(2.0)) == pytest.approx(0.5, rel=1e-12)
    assert lower_incomplete_gamma(2.5, 0.0) == 0.0
    assert lower_incomplete_gamma(2.0, 50.0) == pytest.approx(1.0, abs=1e-10)
    assert lower_incomplete_gamma(1.5, math.inf) == pytest.approx(math.gamma(1.5))


def test_lower_incomplete_gamma_large_order():
    # Γ(200) overflows, the log-space path keeps the ratio to the complete gamma function
    ratio: float = math.exp(math.log(lower_incomplete_gamma(200.0, 400.0)) - special.gammaln(200.0))
    assert ratio == pytest.approx(1.0, rel=1e-10)


@given(st.floats(min_value=0.1, max_value=20.0), st.floats(min_value=1e-3, max_value=30.0))
def test_lower_incomplete_gamma_recurrence(lam: float, x: float):
    # γ(λ+1, x) = λ γ(λ, x) - x^λ e^{-x}
    lhs: float = lower_incomplete_gamma(lam + 1.0, x)
    rhs: float = lam * lower_incomplete_gamma(lam, x) - x**lam * math.exp(-x)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("lam, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
def test_lower_incomplete_gamma_domain(lam: float, x: float):
    with pytest.raises(SpecialFunctionDomainError):
        lower_incomplete_gamma(lam, x)
