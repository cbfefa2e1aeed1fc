import math

import pytest

from stieltjes_cm.funcspace.closed_form import ClosedForm, ClosedFormKind, ClosedFormTerm
from stieltjes_cm.funcspace.gs_function import laplace_transform


def test_term_kinds():
    assert ClosedFormTerm(kind="power_kernel", t=1.0, p=2.0).derivative(0, 1.0) == pytest.approx(0.25)
    assert ClosedFormTerm(kind="power_kernel", t=1.0, p=2.0).derivative(2, 1.0) == pytest.approx(6.0 / 16.0)
    assert ClosedFormTerm(kind="exponential", weight=2.0, t=3.0).derivative(1, 1.0) == pytest.approx(
        -6.0 * math.exp(-3.0)
    )
    assert ClosedFormTerm(kind="constant", weight=4.0).derivative(0, 7.0) == 4.0
    assert ClosedFormTerm(kind="constant", weight=4.0).derivative(1, 7.0) == 0.0


@pytest.mark.parametrize(
    "spec",
    [
        dict(kind="power_kernel", t=-1.0, p=1.0),
        dict(kind="power_kernel", t=1.0, p=0.0),
        dict(kind="exponential", t=0.0),
        dict(kind="constant", weight=-1.0),
    ],
)
def test_invalid_terms(spec: dict):
    with pytest.raises(ValueError):
        ClosedFormTerm.from_spec(spec)


def test_unknown_kind():
    with pytest.raises(ValueError):
        ClosedFormTerm(kind="gaussian")


class TestClosedForm:
    cf: ClosedForm = ClosedForm.from_spec(
        {
            "terms": [
                {"kind": "power_kernel", "weight": 2.0, "t": 0.5, "p": 1.5},
                {"kind": "exponential", "weight": 1.0, "t": 2.0},
                {"kind": "constant", "weight": 3.0},
            ]
        }
    )

    def test_parse_list_and_dict(self):
        assert ClosedForm.from_spec(self.cf.spec()["terms"]) == self.cf
        assert ClosedForm.from_spec(self.cf.spec()) == self.cf
        assert self.cf.terms[0].kind is ClosedFormKind.POWER_KERNEL

    def test_constants(self):
        assert self.cf.constant_part == 3.0
        assert len(self.cf.without_constants().terms) == 2
        assert self.cf.eval(1.0) == pytest.approx(self.cf.without_constants().eval(1.0) + 3.0)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.5])
    def test_laplace_measure(self, lam: float):
        mu = self.cf.laplace_measure(lam)
        for x in (0.2, 1.0, 5.0):
            for n in range(3):
                assert laplace_transform(mu, lam, x, n) == pytest.approx(
                    self.cf.without_constants().derivative(n, x), rel=1e-8
                )

    def test_serialize_load(self):
        assert ClosedForm.load(self.cf.serialize()) == self.cf
