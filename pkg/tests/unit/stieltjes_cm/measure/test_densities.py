import math

import numpy as np
import pytest

from stieltjes_cm.constants import DerivativeCapabilityError
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
    SumDensity,
    density_from_spec,
    register_density_family,
)

_POINTS: list[float] = [0.1, 0.5, 1.0, 2.0, 7.5]


def _rational_second_derivative(s: float) -> float:
    return (6.0 * s**2 - 2.0) / (1.0 + s**2) ** 3


def test_families_registered():
    for family in ("exp", "powerlaw", "poly", "rational", "expr", "monomial_derivative", "sum"):
        assert family in DENSITY_FAMILIES


def test_register_duplicate_family():
    with pytest.raises(ValueError):
        register_density_family(ExpDensity)


@pytest.mark.parametrize("s", _POINTS)
def test_rational_derivatives(s: float):
    w = RationalDensity()
    assert w.eval(0, s) == pytest.approx(1.0 / (1.0 + s**2), rel=1e-12)
    assert w.eval(1, s) == pytest.approx(-2.0 * s / (1.0 + s**2) ** 2, rel=1e-12)
    assert w.eval(2, s) == pytest.approx(_rational_second_derivative(s), rel=1e-10, abs=1e-14)


def test_rational_scale():
    w = RationalDensity(a=3.0, c=2.0)
    assert w(2.0) == pytest.approx(1.5)
    assert w.eval(1, 2.0) == pytest.approx(-0.75)
    with pytest.raises(ValueError):
        RationalDensity(c=0.0)


@pytest.mark.parametrize("s", _POINTS)
def test_exp_density_leibniz(s: float):
    # s^2 e^{-3s}
    w = ExpDensity(a=1.0, b=3.0, p=2.0)
    expected_first: float = (2.0 * s - 3.0 * s**2) * math.exp(-3.0 * s)
    expected_second: float = (2.0 - 12.0 * s + 9.0 * s**2) * math.exp(-3.0 * s)
    assert w.eval(1, s) == pytest.approx(expected_first, rel=1e-12, abs=1e-15)
    assert w.eval(2, s) == pytest.approx(expected_second, rel=1e-12, abs=1e-15)


def test_power_and_poly():
    assert PowerDensity(a=2.0, p=-0.5).eval(1, 4.0) == pytest.approx(2.0 * -0.5 * 4.0**-1.5)
    assert PowerDensity(p=2.0).eval(3, 1.3) == 0.0
    assert PowerDensity(p=-0.5).exponent_at_zero() == -0.5
    assert PowerDensity(p=-0.5, shift=1.0).exponent_at_zero() == 0.0
    poly = PolyDensity(coefficients=[1.0, 0.0, 3.0])
    assert poly(2.0) == 13.0
    assert poly.eval(1, 2.0) == 12.0
    assert poly.eval(3, 2.0) == 0.0
    assert PolyDensity().eval(0, 5.0) == 0.0


def test_derivative_cap():
    w = ExpDensity(max_order=2)
    with pytest.raises(DerivativeCapabilityError):
        w.eval(3, 1.0)
    with pytest.raises(DerivativeCapabilityError):
        MonomialDerivativeDensity(base=w, m=3)


class TestExprDensity:
    @pytest.mark.parametrize("j", [0, 1, 2, 3])
    def test_matches_closed_form(self, j: int):
        expr = ExprDensity(expr="exp(-s) * s", max_order=3)
        exact = ExpDensity(p=1.0)
        for s in (0.3, 1.0, 4.0):
            assert expr.eval(j, s) == pytest.approx(exact.eval(j, s), rel=1e-4, abs=1e-6)

    def test_provenance(self):
        assert ExprDensity(expr="1/(1+s**2)").provenance == Provenance.FINITE_DIFFERENCE
        assert RationalDensity().provenance == Provenance.CLOSED_FORM

    @pytest.mark.parametrize(
        "expr",
        [
            "__import__('os')",
            "s.real",
            "open(s)",
            "[s]",
            "t + 1",
            "'a'",
        ],
    )
    def test_rejects_unsafe(self, expr: str):
        with pytest.raises(ValueError):
            ExprDensity(expr=expr)

    def test_order_limit(self):
        with pytest.raises(ValueError):
            ExprDensity(expr="s", max_order=7)


def test_monomial_derivative_and_sum():
    w = RationalDensity()
    # μ_2 density of 1/(1+s^2)
    mu2 = MonomialDerivativeDensity(base=w, q=2.0, m=2, coef=1.0)
    assert mu2(0.5) == pytest.approx(-0.064, rel=1e-10)
    assert mu2.max_derivative_order == w.max_derivative_order - 2
    total = SumDensity(terms=(w, mu2))
    assert total(0.5) == pytest.approx(0.8 - 0.064)
    assert total.eval(1, 0.5) == pytest.approx(w.eval(1, 0.5) + mu2.eval(1, 0.5))


def test_reciprocal_image_values():
    image = ReciprocalImageDensity(base=PolyDensity(coefficients=[1.0]))
    assert image(0.5) == pytest.approx(4.0)
    assert image.max_derivative_order == 0


@pytest.mark.parametrize(
    "density",
    [
        ExpDensity(a=2.0, b=0.5, p=1.5),
        PowerDensity(a=1.0, p=-0.3, shift=0.2),
        PolyDensity(coefficients=[1.0, 2.0]),
        RationalDensity(a=0.5, c=3.0),
        ExprDensity(expr="exp(-s)", max_order=4),
        MonomialDerivativeDensity(base=RationalDensity(), q=1.0, m=1, coef=-1.0),
        SumDensity(terms=(ExpDensity(), PolyDensity(coefficients=[0.5]))),
    ],
)
def test_spec_rebuilds_density(density):
    rebuilt = density_from_spec(density.to_spec())
    assert rebuilt.family == density.family
    np.testing.assert_allclose(rebuilt.eval_array(0, _POINTS), density.eval_array(0, _POINTS))


def test_unknown_family():
    with pytest.raises(ValueError):
        density_from_spec({"family": "gaussian", "params": {}})
