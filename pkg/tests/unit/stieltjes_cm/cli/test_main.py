import json
from pathlib import Path

import pytest

from stieltjes_cm.cli.config import RunConfig, RunConfigError
from stieltjes_cm.cli.main import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_PASS,
    EXIT_USAGE,
    build_parser,
    main,
)

SMALL_GRID: list[str] = ["--grid-min", "1e-2", "--grid-max", "1e2", "--grid-n", "17"]


def _write(tmp_path: Path, name: str, spec: dict) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return str(path)


@pytest.fixture
def atom_spec(tmp_path) -> str:
    return _write(tmp_path, "atom.json", {"lambda": 2, "stieltjes_measure": {"atoms": [{"s": 1, "w": 1}]}})


@pytest.fixture
def rational_spec(tmp_path) -> str:
    return _write(
        tmp_path,
        "rational.json",
        {"lambda": 1, "measure": {"density": [{"family": "rational", "params": {"a": 1, "c": 1}}]}},
    )


@pytest.fixture
def exp_spec(tmp_path) -> str:
    return _write(
        tmp_path,
        "exp.json",
        {"lambda": 1, "measure": {"density": [{"interval": [0, None], "family": "exp"}]}},
    )


def _report(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_eval(atom_spec, capsys):
    assert main(["eval", atom_spec, "--x", "1"]) == EXIT_PASS
    report = _report(capsys)
    assert report["command"] == "eval"
    assert report["exit_code"] == 0
    assert report["result"]["route"] == "stieltjes"
    assert report["result"]["values"][0]["f"] == 0.25


def test_eval_derivative(atom_spec, capsys):
    assert main(["eval", atom_spec, "--x", "1", "2", "--n", "1"]) == EXIT_PASS
    values = _report(capsys)["result"]["values"]
    assert [v["x"] for v in values] == [1.0, 2.0]
    assert values[0]["derivative"] == -0.25


def test_class_fails_with_witness(rational_spec, capsys):
    code = main(["class", rational_spec, "--lambda", "1", "--N", "2", *SMALL_GRID])
    assert code == EXIT_FAIL
    report = _report(capsys)
    assert report["exit_code"] == 1
    assert report["result"]["summary"] == "member of C_1, fails at k=2"
    assert report["result"]["witness"]["k"] == 2


def test_identities(capsys):
    assert main(["identities", "--lambda", "1.5", "--max", "8"]) == EXIT_PASS
    result = _report(capsys)["result"]
    assert result["chu_vandermonde_max_gap"] <= 1e-10
    assert result["n_checks"] == 9 * 45
    assert "witness" not in result


def test_identities_with_spec(atom_spec, capsys):
    assert main(["identities", atom_spec, "--k", "3", *SMALL_GRID]) == EXIT_PASS
    result = _report(capsys)["result"]
    assert [r["k"] for r in result["route_agreement"]] == [0, 1, 2, 3]
    assert all(g["gap"] <= 1e-9 for g in result["g_recurrence"])


def test_identities_needs_lambda(capsys):
    assert main(["identities"]) == EXIT_USAGE
    assert "--lambda" in capsys.readouterr().err


def test_cm_check_csv(atom_spec, capsys):
    code = main(["cm-check", atom_spec, "--k", "0", "--N", "4", "--format", "csv", *SMALL_GRID])
    assert code == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "order,min,witness,tolerance,verdict"
    assert len(lines) == 6
    assert all(line.endswith(",pass") for line in lines[1:])


def test_cm_check_finite_difference(atom_spec, capsys):
    code = main(["cm-check", atom_spec, "--k", "1", "--N", "2", "--method", "finite_difference", *SMALL_GRID])
    assert code == EXIT_PASS
    assert _report(capsys)["result"]["report"]["method"] == "finite_difference"


def test_operator(atom_spec, capsys):
    assert main(["operator", atom_spec, "--k", "2", "--n", "1", *SMALL_GRID]) == EXIT_PASS
    result = _report(capsys)["result"]
    assert result["discrepancy"] <= 1e-8
    assert len(result["c_values"]) == 3


def test_asymptotics(atom_spec, capsys):
    assert main(["asymptotics", atom_spec, "--n", "2"]) == EXIT_PASS
    result = _report(capsys)["result"]
    assert result["expansion"]["coefficients"] == [1.0, -2.0]
    assert result["decay_probe"][0]["r_n"] == pytest.approx(0.0026446, abs=1e-7)


def test_asymptotics_divergent_moment(rational_spec, capsys):
    assert main(["asymptotics", rational_spec, "--n", "3"]) == EXIT_INCONCLUSIVE
    assert "order 1" in capsys.readouterr().err


def test_bernstein(tmp_path, capsys):
    spec = _write(tmp_path, "levy.json", {"lambda": 2, "measure": {"atoms": [{"s": 1, "w": 1}]}})
    assert main(["bernstein", spec, "--x", "1", *SMALL_GRID]) == EXIT_PASS
    value = _report(capsys)["result"]["values"][0]
    assert value["x^(1-lam) g'"] == pytest.approx(0.367879441171, rel=1e-11)


def test_bernstein_inadmissible(tmp_path, capsys):
    spec = _write(
        tmp_path,
        "bad.json",
        {"lambda": 1, "measure": {"density": [{"interval": [0, 1], "family": "powerlaw", "params": {"p": -1}}]}},
    )
    assert main(["bernstein", spec]) == EXIT_USAGE
    assert "integrable at 0" in capsys.readouterr().err


def test_chain(exp_spec, capsys):
    assert main(["chain", exp_spec, "--k", "2", "--x", "1", *SMALL_GRID]) == EXIT_PASS
    result = _report(capsys)["result"]
    assert result["reconstruction"][0]["gap"] <= 1e-6


def test_chain_of_exponential_is_inconclusive(tmp_path, capsys):
    spec = _write(tmp_path, "dirac.json", {"lambda": 1, "measure": {"atoms": [{"s": 1, "w": 1}]}})
    assert main(["chain", spec, "--k", "1"]) == EXIT_INCONCLUSIVE
    assert "NotAMeasureError" in capsys.readouterr().err


def test_chain_csv(exp_spec, capsys):
    code = main(["chain", exp_spec, "--k", "2", "--format", "csv", *SMALL_GRID])
    assert code == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "j,min,witness,tolerance,verdict"
    assert len(lines) == 2
    assert lines[1].startswith("1,")
    assert lines[1].endswith(",pass")


def test_validate_rejects_csv(atom_spec, capsys):
    assert main(["validate", atom_spec, "--format", "csv"]) == EXIT_USAGE
    assert "no csv output" in capsys.readouterr().err


class TestLambdaOverride:
    def test_eval(self, atom_spec, capsys):
        assert main(["eval", atom_spec, "--x", "1", "--lambda", "1"]) == EXIT_PASS
        report = _report(capsys)
        assert report["config"]["lam"] == 1.0
        assert report["result"]["values"][0]["f"] == 0.5

    def test_operator_uses_the_same_order(self, atom_spec, capsys):
        assert main(["operator", atom_spec, "--k", "1", "--lambda", "1", *SMALL_GRID]) == EXIT_PASS
        result = _report(capsys)["result"]
        assert result["lam"] == 1.0
        # c_0 is f itself, so the override reaches the function and not only the operator
        assert result["c_values"][0][8] == pytest.approx(0.5, rel=1e-10)

class TestValidate:
    def test_normalized(self, atom_spec, capsys):
        assert main(["validate", atom_spec]) == EXIT_PASS
        report = _report(capsys)
        assert report["result"] == {"valid": True}
        assert report["spec"]["grid"] == {"min": 0.001, "max": 1000.0, "n": 64, "tolerance": 1e-9}

    def test_negative_weight(self, tmp_path, capsys):
        spec = _write(tmp_path, "neg.json", {"lambda": 1, "measure": {"atoms": [{"s": 1, "w": -1}]}})
        assert main(["validate", spec]) == EXIT_USAGE
        assert "measure.atoms[0].w" in capsys.readouterr().err

    def test_zero_lambda(self, tmp_path, capsys):
        spec = _write(tmp_path, "zero.json", {"lambda": 0, "measure": {"atoms": [{"s": 1, "w": 1}]}})
        assert main(["validate", spec]) == EXIT_USAGE
        assert "lambda must be positive" in capsys.readouterr().err

    def test_unreadable(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{\n  \"lambda\": ,\n}")
        assert main(["validate", str(path)]) == EXIT_USAGE
        assert "line 2" in capsys.readouterr().err


def test_deterministic_output(rational_spec, tmp_path):
    paths = [tmp_path / "out" / f"report_{i}.json" for i in range(2)]
    for path in paths:
        main(["class", rational_spec, "--N", "1", "-o", str(path), *SMALL_GRID])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_bad_option_value(atom_spec, capsys):
    assert main(["eval", atom_spec, "--x", "-1"]) == EXIT_USAGE
    assert main(["eval", atom_spec, "--lambda", "0"]) == EXIT_USAGE


def test_parser_requires_spec():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["eval"])


class TestRunConfig:
    def test_validation(self):
        with pytest.raises(RunConfigError):
            RunConfig(command="plot", spec_path="a.json")
        with pytest.raises(RunConfigError):
            RunConfig(command="class")
        with pytest.raises(RunConfigError):
            RunConfig(command="class", spec_path="a.json", N=-1)
        with pytest.raises(RunConfigError):
            RunConfig(command="class", spec_path="a.json", output_format="xml")
        assert RunConfig(command="identities").spec_path is None

    def test_fname(self):
        cfg = RunConfig(command="class", spec_path="specs/rational.json", N=2)
        fname = cfg.to_fname()
        assert fname.startswith("class-rational-h")
        assert fname.endswith(".json")
        assert fname == RunConfig(command="class", spec_path="specs/rational.json", N=2).to_fname()
        assert fname != RunConfig(command="class", spec_path="specs/rational.json", N=3).to_fname()

    def test_serialize_load(self):
        cfg = RunConfig(command="eval", spec_path="a.json", x=(1.0, 2.0), lam=1.5)
        assert RunConfig.load(cfg.serialize()) == cfg
