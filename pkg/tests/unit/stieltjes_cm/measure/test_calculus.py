import math

import pytest
from scipy import special

from stieltjes_cm.constants import DerivativeCapabilityError, NotAMeasureError
from stieltjes_cm.measure.calculus import (
    derived_measure,
    image_reciprocal,
    integrate_measure,
    levy_admissibility,
    moment,
    positivity_scan,
    tail_power_integral,
)
from stieltjes_cm.measure.densities import (
    ExpDensity,
    ExprDensity,
    PolyDensity,
    PowerDensity,
    RationalDensity,
)
from stieltjes_cm.measure.measure import DensityPiece, Measure, ScanGrid, Verdict

EXP_MEASURE: Measure = Measure.with_density(ExpDensity())
RATIONAL_MEASURE: Measure = Measure.with_density(RationalDensity())


class TestMoment:
    def test_examples(self):
        assert moment(Measure.dirac(2.0, 3.0), 2) == 12.0
        assert moment(EXP_MEASURE, 3) == pytest.approx(6.0, abs=1e-8)
        assert moment(Measure.dirac(1.0), 0) == 1.0

    def test_divergent(self):
        # 1/(1+s^2) has no first moment
        assert math.isinf(moment(RATIONAL_MEASURE, 1))
        assert moment(RATIONAL_MEASURE, 0) == pytest.approx(math.pi / 2.0, rel=1e-8)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            moment(EXP_MEASURE, -1)


def test_integrate_measure_bounds():
    mu = Measure(atoms=((1.0, 2.0), (3.0, 5.0)))
    assert integrate_measure(mu, lambda s: 1.0, lower=1.0) == 5.0
    assert integrate_measure(mu, lambda s: 1.0, lower=1.0, include_lower=True) == 7.0
    assert integrate_measure(mu, lambda s: s, upper=3.0) == 2.0


class TestDerivedMeasure:
    @pytest.mark.parametrize("s", [0.1, 1.0, 2.5, 10.0])
    def test_exponential_density(self, s: float):
        mu_2 = derived_measure(EXP_MEASURE, 2)
        assert mu_2.signed
        assert not mu_2.has_atoms
        assert mu_2.eval_density(s) == pytest.approx(s**2 * math.exp(-s), rel=1e-12)

    def test_order_zero_is_identity(self):
        assert derived_measure(RATIONAL_MEASURE, 0) is RATIONAL_MEASURE
        delta = Measure.dirac(1.0)
        assert derived_measure(delta, 0) is delta

    def test_atom_is_not_a_measure(self):
        with pytest.raises(NotAMeasureError):
            derived_measure(Measure.dirac(1.0), 1)

    def test_capability(self):
        with pytest.raises(DerivativeCapabilityError):
            derived_measure(Measure.with_density(ExprDensity(expr="exp(-s)", max_order=2)), 3)

    def test_jump_contributes_atom(self):
        # w = 1 on (1, 2): w jumps by +1 at s=1 and by -1 at s=2
        box = Measure(pieces=(DensityPiece(a=1.0, b=2.0, density=PolyDensity(coefficients=[1.0])),))
        mu_1 = derived_measure(box, 1)
        assert [s for s, _ in mu_1.atoms] == [1.0, 2.0]
        assert [w for _, w in mu_1.atoms] == pytest.approx([-1.0, 2.0])
        assert mu_1.eval_density(1.5) == 0.0

    def test_spliced_density(self):
        # (1 - s) on (0, 1) is continuous at 1 with a derivative jump of +1
        tent = Measure(pieces=(DensityPiece(a=0.0, b=1.0, density=PolyDensity(coefficients=[1.0, -1.0])),))
        mu_2 = derived_measure(tent, 2)
        assert [s for s, _ in mu_2.atoms] == [1.0]
        assert [w for _, w in mu_2.atoms] == pytest.approx([1.0])
        mu_1 = derived_measure(tent, 1)
        assert mu_1.eval_density(0.5) == pytest.approx(0.5)
        assert not mu_1.has_atoms

    def test_low_order_jump(self):
        box = Measure(pieces=(DensityPiece(a=1.0, b=2.0, density=PolyDensity(coefficients=[1.0])),))
        with pytest.raises(NotAMeasureError):
            derived_measure(box, 2)


class TestPositivityScan:
    def test_first_order_of_rational_passes(self):
        report = positivity_scan(derived_measure(RATIONAL_MEASURE, 1), ScanGrid())
        assert report.verdict == Verdict.PASS
        assert report.min_value >= 0.0

    def test_second_order_of_rational_fails(self):
        report = positivity_scan(
            derived_measure(RATIONAL_MEASURE, 2), ScanGrid(points=(0.5, 2.0))
        )
        assert report.verdict == Verdict.FAIL
        assert report.witness == 0.5
        assert report.min_value == pytest.approx(-0.064, rel=1e-10)

    def test_zero_density(self):
        zero = Measure.with_density(PolyDensity())
        report = positivity_scan(zero, ScanGrid())
        assert report.verdict == Verdict.PASS
        assert report.min_value == 0.0

    def test_negative_atom(self):
        signed = Measure(atoms=((1.0, -0.5),), signed=True)
        report = positivity_scan(signed, ScanGrid(points=(2.0,)))
        assert report.verdict == Verdict.FAIL
        assert report.witness == 1.0

    def test_empty_support_is_inconclusive(self):
        report = positivity_scan(
            Measure(pieces=(DensityPiece(a=5.0, b=6.0, density=ExpDensity()),)),
            ScanGrid(points=(1.0, 2.0)),
        )
        assert report.verdict == Verdict.INCONCLUSIVE


class TestTailPowerIntegral:
    def test_examples(self):
        assert tail_power_integral(Measure.dirac(1.0), 2.5, 0.5) == 1.0
        assert tail_power_integral(Measure.dirac(1.0), 2.5, 2.0) == 0.0
        assert tail_power_integral(EXP_MEASURE, 1.0, 1.0) == pytest.approx(0.2193839, abs=1e-7)
        assert tail_power_integral(EXP_MEASURE, 1.0, 1.0) == pytest.approx(float(special.exp1(1.0)), rel=1e-9)

    def test_open_at_u(self):
        assert tail_power_integral(Measure.dirac(1.0), 1.0, 1.0) == 0.0

    def test_divergent(self):
        assert math.isinf(tail_power_integral(Measure.with_density(PolyDensity(coefficients=[1.0])), 1.0, 1.0))

    def test_invalid_u(self):
        with pytest.raises(ValueError):
            tail_power_integral(EXP_MEASURE, 1.0, 0.0)


class TestLevyAdmissibility:
    def test_finite_measure(self):
        report = levy_admissibility(Measure.dirac(1.0), 2.0)
        assert report.admissible
        assert report.mass_near_zero == 1.0
        assert report.failing_condition is None

    def test_singular_at_zero(self):
        mu = Measure(pieces=(DensityPiece(a=0.0, b=1.0, density=PowerDensity(p=-1.0)),))
        report = levy_admissibility(mu, 1.0)
        assert not report
        assert "integrable at 0" in report.failing_condition

    def test_unit_density_on_tail(self):
        mu = Measure(pieces=(DensityPiece(a=1.0, b=math.inf, density=PolyDensity(coefficients=[1.0])),))
        report = levy_admissibility(mu, 2.0)
        assert report.admissible
        assert report.tail_integral == pytest.approx(1.0, rel=1e-8)
        assert not levy_admissibility(mu, 1.0).admissible

    def test_invalid_lambda(self):
        with pytest.raises(ValueError):
            levy_admissibility(EXP_MEASURE, 0.0)


class TestImageReciprocal:
    def test_atom(self):
        assert image_reciprocal(Measure.dirac(2.0)).atoms == ((0.5, 1.0),)

    def test_box(self):
        box = Measure(pieces=(DensityPiece(a=1.0, b=2.0, density=PolyDensity(coefficients=[1.0])),))
        image = image_reciprocal(box)
        assert [(p.a, p.b) for p in image.pieces] == [(0.5, 1.0)]
        assert image.eval_density(0.8) == pytest.approx(1.0 / 0.64)
        assert moment(image, 0) == pytest.approx(1.0, rel=1e-10)

    def test_involution(self):
        twice = image_reciprocal(image_reciprocal(EXP_MEASURE))
        for s in (0.1, 1.0, 4.0):
            assert twice.eval_density(s) == pytest.approx(EXP_MEASURE.eval_density(s), rel=1e-10)

    @pytest.mark.parametrize("k", [1, 2])
    def test_moments_of_image(self, k: int):
        # ∫ s^k d(image) = ∫ s^{-k} dμ, finite for s^3 e^{-s}
        mu = Measure.with_density(ExpDensity(p=3.0))
        expected: float = math.gamma(4.0 - k)
        assert moment(image_reciprocal(mu), k) == pytest.approx(expected, rel=1e-6)
