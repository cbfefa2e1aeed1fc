import math

import pytest

from stieltjes_cm.constants import DerivativeCapabilityError, EvaluationError, QuadratureError
from stieltjes_cm.funcspace.closed_form import ClosedForm
from stieltjes_cm.funcspace.gs_function import (
    GSFunction,
    derivative,
    eval_f,
    laplace_transform,
    stieltjes_to_laplace_phi,
    stieltjes_transform,
)
from stieltjes_cm.measure.densities import ExpDensity, PolyDensity, RationalDensity
from stieltjes_cm.measure.measure import DensityPiece, Measure, ScanGrid
from stieltjes_cm.special.quadrature import quad_semiinfinite

_BRIDGE_PARAMETRIZATION: tuple[str, list] = (
    "nu, lam",
    [
        (Measure.dirac(1.0), 2.0),
        (Measure.dirac(0.5, 3.0), 0.5),
        (Measure.with_density(ExpDensity()), 1.5),
        (Measure(pieces=(DensityPiece(a=0.0, b=2.0, density=PolyDensity(coefficients=(1.0,))),)), 1.0),
        (Measure(atoms=((2.0, 1.0),), pieces=(DensityPiece(a=0.0, b=math.inf, density=RationalDensity()),)), 2.5),
    ],
)


class TestEval:
    def test_stieltjes_atom(self):
        f = GSFunction.from_stieltjes(Measure.dirac(1.0), lam=2.0)
        assert f.route == "stieltjes"
        assert eval_f(f, 1.0) == pytest.approx(0.25, rel=1e-14)

    def test_lebesgue_laplace_side(self):
        f = GSFunction.from_laplace(Measure.with_density(PolyDensity(coefficients=(1.0,))), lam=1.5)
        assert f(2.0) == pytest.approx(math.gamma(1.5) * 2.0**-1.5, rel=1e-8)
        assert f(2.0) == pytest.approx(0.3133, abs=1e-4)

    def test_constant(self):
        f = GSFunction.constant(5.0)
        for x in (1e-3, 1.0, 1e3):
            assert f(x) == 5.0
            assert derivative(f, 2, x) == 0.0

    def test_zero_atom(self):
        f = GSFunction(lam=1.5, zero_atom=2.0, laplace_measure=Measure())
        assert f(4.0) == pytest.approx(2.0 * 4.0**-1.5)
        assert f.derivative(1, 4.0) == pytest.approx(-1.5 * 2.0 * 4.0**-2.5)
        assert f.derivative(0, 4.0, include_zero_atom=False) == 0.0

    def test_domain(self):
        f = GSFunction.from_laplace(Measure.dirac(1.0), lam=1.0)
        with pytest.raises(ValueError):
            f(0.0)
        with pytest.raises(ValueError):
            f.derivative(-1, 1.0)


class TestDerivative:
    def test_laplace_atom(self):
        f = GSFunction.from_laplace(Measure.dirac(1.0), lam=1.0)
        assert derivative(f, 3, 2.0) == pytest.approx(-math.exp(-2.0), rel=1e-14)

    def test_stieltjes_atom(self):
        f = GSFunction.from_stieltjes(Measure.dirac(1.0), lam=2.0)
        assert f.derivative(1, 1.0) == pytest.approx(-0.25, rel=1e-14)

    def test_matches_laplace_route(self):
        f = GSFunction.from_stieltjes(Measure.dirac(1.0), lam=2.0)
        for n in range(4):
            assert f.derivative(n, 1.5, route="laplace") == pytest.approx(
                f.derivative(n, 1.5, route="stieltjes"), rel=1e-8
            )

    def test_caps(self):
        density_f = GSFunction.from_laplace(Measure.with_density(ExpDensity()), lam=1.0)
        atom_f = GSFunction.from_laplace(Measure.dirac(1.0), lam=1.0)
        assert density_f.derivative_cap() == 12
        assert atom_f.derivative_cap() == 30
        with pytest.raises(DerivativeCapabilityError):
            density_f.derivative(13, 1.0)

    def test_memoized(self):
        f = GSFunction.from_laplace(Measure.with_density(ExpDensity()), lam=1.0)
        f.derivative(2, 1.0)
        assert ("laplace", 2, 1.0) in f.__dict__["_derivative_cache"]
        f.clear_cache()
        assert not f.__dict__["_derivative_cache"]


class TestBridge:
    def test_phi_of_atom(self):
        assert stieltjes_to_laplace_phi(Measure.dirac(2.0), 1.0, 1.0) == pytest.approx(math.exp(-2.0))

    def test_phi_reproduces_kernel(self):
        nu = Measure.dirac(1.0)
        value: float = quad_semiinfinite(
            lambda s: math.exp(-s) * s * stieltjes_to_laplace_phi(nu, 2.0, s),
            lam_singularity=1.0,
        )
        assert value == pytest.approx(0.25, abs=1e-8)

    @pytest.mark.parametrize(*_BRIDGE_PARAMETRIZATION)
    def test_bridge_identity(self, nu: Measure, lam: float):
        f = GSFunction.from_stieltjes(nu, lam)
        for x in ScanGrid.log_spaced(1e-1, 1e1, 6):
            assert f.eval(x, route="laplace") == pytest.approx(f.eval(x, route="stieltjes"), rel=1e-6)
        assert f.check_representations(tol=1e-6) <= 1e-6

    def test_phi_domain(self):
        with pytest.raises(ValueError):
            stieltjes_to_laplace_phi(Measure.dirac(1.0), 1.0, 0.0)


def test_transforms_of_signed_measures():
    signed = Measure(atoms=((1.0, -1.0),), signed=True)
    assert laplace_transform(signed, 1.0, 1.0) == pytest.approx(-math.exp(-1.0))
    assert stieltjes_transform(signed, 1.0, 1.0, n=1) == pytest.approx(0.25)


def test_evaluation_error_names_component(mocker):
    bounded = Measure(pieces=(DensityPiece(a=0.0, b=1.0, density=PolyDensity(coefficients=(1.0,))),))
    f = GSFunction.from_laplace(bounded, lam=1.0)
    assert f(1.0) == pytest.approx(1.0 - math.exp(-1.0))
    mocker.patch(
        "stieltjes_cm.funcspace.gs_function.quad_interval",
        side_effect=QuadratureError("did not converge"),
    )
    with pytest.raises(EvaluationError, match="laplace_measure piece 0"):
        laplace_transform(bounded, 1.0, 2.0)
    with pytest.raises(EvaluationError, match="stieltjes_measure piece 0"):
        stieltjes_transform(bounded, 1.0, 2.0)


class TestConstructors:
    def test_validation(self):
        with pytest.raises(ValueError):
            GSFunction(lam=0.0, laplace_measure=Measure())
        with pytest.raises(ValueError):
            GSFunction(lam=1.0, c=-1.0, laplace_measure=Measure())
        with pytest.raises(ValueError):
            GSFunction(lam=1.0)
        with pytest.raises(ValueError):
            GSFunction(lam=1.0, laplace_measure=Measure(atoms=((1.0, -1.0),), signed=True))

    def test_closed_form_moves_constants(self):
        cf = ClosedForm.from_spec(
            [{"kind": "constant", "weight": 2.0}, {"kind": "power_kernel", "t": 1.0, "p": 2.0}]
        )
        f = GSFunction.from_closed_form(cf, lam=2.0, c=1.0)
        assert f.c == 3.0
        assert f.route == "closed_form"
        assert f(1.0) == pytest.approx(3.25)
        assert f.eval(1.0, route="laplace") == pytest.approx(0.25, rel=1e-8)

    def test_laplace_measure_at_other_order(self):
        f = GSFunction(lam=2.0, zero_atom=1.0, laplace_measure=Measure.dirac(1.0))
        mu = f.laplace_measure_at(1.0)
        g = GSFunction.from_laplace(mu, lam=1.0)
        for x in (0.5, 1.0, 3.0):
            assert g(x) == pytest.approx(f(x), rel=1e-8)

    def test_serialize_load(self):
        f = GSFunction.from_laplace(Measure.with_density(ExpDensity(p=1.0)), lam=1.5, c=0.5, zero_atom=0.25)
        loaded = GSFunction.load(f.serialize())
        assert loaded.lam == 1.5
        assert loaded(2.0) == pytest.approx(f(2.0), rel=1e-12)
