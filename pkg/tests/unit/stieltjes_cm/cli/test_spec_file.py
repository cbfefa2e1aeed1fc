import math

import pytest

from stieltjes_cm.cli.spec_file import (
    build_function,
    build_grid,
    build_measure,
    load_spec_file,
    validate_spec,
)
from stieltjes_cm.constants import DEFAULT_GRID_N, SpecValidationError

ATOM_SPEC: dict = {"lambda": 2, "stieltjes_measure": {"atoms": [{"s": 1, "w": 1}]}}


def _diagnostics(spec) -> list[str]:
    with pytest.raises(SpecValidationError) as exc_info:
        validate_spec(spec)
    return exc_info.value.diagnostics


class TestValidate:
    def test_minimal_atom_spec(self):
        normalized = validate_spec(ATOM_SPEC)
        assert normalized["lambda"] == 2.0
        assert normalized["c"] == 0.0
        assert normalized["grid"]["n"] == DEFAULT_GRID_N
        assert normalized["bernstein"] == {"alpha": 0.0, "beta": 0.0}
        assert "stieltjes_measure" in normalized

    def test_negative_weight(self):
        spec = {"lambda": 1, "measure": {"atoms": [{"s": 1, "w": 1}, {"s": 2, "w": -1}]}}
        diagnostics = _diagnostics(spec)
        assert len(diagnostics) == 1
        assert "measure.atoms[1].w" in diagnostics[0]

    @pytest.mark.parametrize("lam", [0, -1.5])
    def test_nonpositive_lambda(self, lam):
        diagnostics = _diagnostics({**ATOM_SPEC, "lambda": lam})
        assert any("lambda must be positive" in d for d in diagnostics)

    def test_missing_lambda(self):
        assert "lambda: required" in _diagnostics({"measure": {"atoms": []}})

    def test_representation_count(self):
        assert any("exactly one" in d for d in _diagnostics({"lambda": 1}))
        spec = {"lambda": 1, "measure": {}, "laplace_measure": {}}
        assert any("exactly one" in d for d in _diagnostics(spec))

    def test_collects_all_fields(self):
        spec = {
            "lambda": "one",
            "c": -1,
            "color": "blue",
            "measure": {"density": [{"interval": [2, 1], "family": "exp"}]},
            "grid": {"min": 10, "max": 1},
        }
        diagnostics = _diagnostics(spec)
        assert len(diagnostics) == 5
        assert any(d.startswith("color:") for d in diagnostics)
        assert any(d.startswith("measure.density[0].interval") for d in diagnostics)

    def test_unknown_family(self):
        spec = {"lambda": 1, "measure": {"density": [{"family": "gaussian"}]}}
        assert "unknown density family 'gaussian'" in _diagnostics(spec)[0]

    def test_bad_params(self):
        spec = {"lambda": 1, "measure": {"density": [{"family": "exp", "params": {"q": 1}}]}}
        assert _diagnostics(spec)[0].startswith("measure.density[0]: TypeError")

    def test_overlap(self):
        spec = {
            "lambda": 1,
            "measure": {
                "density": [
                    {"interval": [0, 2], "family": "exp"},
                    {"interval": [1, 3], "family": "exp"},
                ]
            },
        }
        assert _diagnostics(spec)[0].startswith("measure:")

    def test_closed_form(self):
        spec = {"lambda": 1, "closed_form": [{"kind": "exponential", "t": 1}, {"kind": "exponential", "t": -1}]}
        diagnostics = _diagnostics(spec)
        assert diagnostics[0].startswith("closed_form[1]")

    def test_grid_points(self):
        normalized = validate_spec({**ATOM_SPEC, "grid": {"points": [3, 1, 2, 1]}})
        assert normalized["grid"]["points"] == [1.0, 2.0, 3.0]
        assert build_grid(normalized).points == (1.0, 2.0, 3.0)


class TestFiles:
    def test_parse_error_has_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "lambda": 1,\n  "measure": \n}\n')
        diagnostics = _diagnostics(path)
        assert "line 4" in diagnostics[0]

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecValidationError, match="cannot read"):
            load_spec_file(tmp_path / "missing.json")

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        assert "must be a JSON object" in _diagnostics(str(path))[0]


class TestBuild:
    def test_stieltjes_function(self):
        f = build_function(validate_spec(ATOM_SPEC))
        assert f.route == "stieltjes"
        assert f(1.0) == pytest.approx(0.25)

    def test_lambda_override(self):
        f = build_function(validate_spec(ATOM_SPEC), lam=1.0)
        assert f(1.0) == pytest.approx(0.5)

    def test_bare_measure_is_laplace(self):
        normalized = validate_spec({"lambda": 1, "measure": {"atoms": [{"s": 1, "w": 1}]}, "c": 2})
        f = build_function(normalized)
        assert f.route == "laplace"
        assert f(1.0) == pytest.approx(2.0 + math.exp(-1.0))
        assert build_measure(normalized).atoms == ((1.0, 1.0),)

    def test_closed_form_function(self):
        normalized = validate_spec(
            {"lambda": 2, "closed_form": {"terms": [{"kind": "power_kernel", "t": 1, "p": 2}]}}
        )
        assert build_function(normalized)(1.0) == pytest.approx(0.25)
        with pytest.raises(SpecValidationError):
            build_measure(normalized)

    def test_grid_overrides(self):
        grid = build_grid(validate_spec(ATOM_SPEC), min=1.0, max=100.0, n=3, tolerance=None)
        assert grid.points == pytest.approx((1.0, 10.0, 100.0))
