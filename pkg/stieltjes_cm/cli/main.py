"""command line front end: load a spec, run one check, write a JSON or CSV report

exit codes: 0 pass, 1 a sign condition or identity fails (the report carries a witness),
2 usage or spec error, 3 numerically inconclusive
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable

from stieltjes_cm.cli.config import RunConfig, RunConfigError
from stieltjes_cm.cli.spec_file import (
    build_function,
    build_grid,
    build_measure,
    validate_spec,
)
from stieltjes_cm.cmtest.cm_check import (
    class_membership,
    cm_check_derivatives,
    cm_check_differences,
)
from stieltjes_cm.cmtest.reports import ClassReport, CMReport
from stieltjes_cm.constants import (
    DerivativeCapabilityError,
    EvaluationError,
    InadmissibleMeasureError,
    NotAMeasureError,
    QuadratureError,
    SpecValidationError,
)
from stieltjes_cm.funcspace.gs_function import GSFunction
from stieltjes_cm.measure.measure import Measure, ScanGrid, Verdict
from stieltjes_cm.operators.coefficients import chu_vandermonde_sweep
from stieltjes_cm.operators.operators import (
    OperatorImage,
    g_recurrence_check,
    route_agreement,
)
from stieltjes_cm.operators.table import OperatorTable
from stieltjes_cm.represent.asymptotics import AsymptoticExpansion, asymptotic_expand
from stieltjes_cm.represent.bernstein import BernsteinFunction, build_bernstein_function
from stieltjes_cm.represent.chains import (
    MChain,
    alternating_chain_sign_check,
    n_chain,
)
from stieltjes_cm.utils import round_floats

EXIT_PASS: int = 0
EXIT_FAIL: int = 1
EXIT_USAGE: int = 2
EXIT_INCONCLUSIVE: int = 3

_VERDICT_EXIT: dict[Verdict, int] = {
    Verdict.PASS: EXIT_PASS,
    Verdict.FAIL: EXIT_FAIL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

IDENTITY_TOLERANCE: float = 1e-10
ROUTE_TOLERANCE: float = 1e-8


class RunResult:
    """report body, CSV rows when the command has a table, and the exit code"""

    def __init__(self, body: dict, exit_code: int, csv_rows: list[list] | None = None) -> None:
        self.body: dict = body
        self.exit_code: int = exit_code
        self.csv_rows: list[list] | None = csv_rows


def _grid(cfg: RunConfig, spec: dict) -> ScanGrid:
    return build_grid(
        spec, min=cfg.grid_min, max=cfg.grid_max, n=cfg.grid_n, tolerance=cfg.tolerance
    )


def _lam(cfg: RunConfig, spec: dict | None) -> float:
    if cfg.lam is not None:
        return cfg.lam
    if spec is None:
        raise RunConfigError("--lambda is required without a spec file")
    return spec["lambda"]


# commands
# ============================================================


def _cmd_eval(cfg: RunConfig, spec: dict) -> RunResult:
    f: GSFunction = build_function(spec, lam=cfg.lam)
    values: list[dict] = [
        {"x": x, "f": f.eval(x), "derivative_order": cfg.n, "derivative": f.derivative(cfg.n, x)}
        for x in cfg.x
    ]
    rows: list[list] = [["x", "f", "n", "f^(n)"]]
    rows.extend([v["x"], v["f"], v["derivative_order"], v["derivative"]] for v in values)
    return RunResult({"route": f.route, "values": values}, EXIT_PASS, rows)


def _cmd_operator(cfg: RunConfig, spec: dict) -> RunResult:
    f: GSFunction = build_function(spec, lam=cfg.lam)
    table: OperatorTable = OperatorTable.compute(
        f,
        k_max=cfg.k,
        n_max=cfg.n,
        grid=_grid(cfg, spec),
        parallel=cfg.parallel,
        verbose=cfg.verbose,
    )
    discrepancy: float = table.discrepancy
    body: dict = {
        "lam": table.lam,
        "n_max": table.n_max,
        "k_max": table.k_max,
        "discrepancy": discrepancy,
        "low_confidence_points": int(table.low_confidence.sum()),
        "c_values": table.c_values().tolist(),
    }
    exit_code: int = EXIT_PASS if math.isfinite(discrepancy) else EXIT_INCONCLUSIVE
    return RunResult(body, exit_code, table.to_csv_rows())


def _cmd_cm_check(cfg: RunConfig, spec: dict) -> RunResult:
    f: GSFunction = build_function(spec, lam=cfg.lam)
    image: OperatorImage = OperatorImage(f, cfg.k)
    grid: ScanGrid = _grid(cfg, spec)
    report: CMReport
    if cfg.method == "finite_difference":
        report = cm_check_differences(image, N=cfg.N, grid=grid)
    else:
        report = cm_check_derivatives(image, N=min(cfg.N, image.derivative_cap()), grid=grid)
    body: dict = {"k": cfg.k, "report": report.serialize()}
    return RunResult(body, _VERDICT_EXIT[report.verdict], report.to_csv_rows())


def _cmd_class(cfg: RunConfig, spec: dict) -> RunResult:
    f: GSFunction = build_function(spec, lam=cfg.lam)
    report: ClassReport = class_membership(
        f, N=cfg.N, grid=_grid(cfg, spec), verbose=cfg.verbose
    )
    body: dict = {
        "summary": report.summary(),
        "witness": report.witness,
        "report": report.serialize(),
    }
    return RunResult(body, _VERDICT_EXIT[report.verdict], report.to_csv_rows())


def _cmd_identities(cfg: RunConfig, spec: dict | None) -> RunResult:
    lam: float = _lam(cfg, spec)
    sweep = chu_vandermonde_sweep(lam, cfg.max_order)
    worst = max(sweep, key=lambda r: r.gap)
    body: dict = {
        "lam": lam,
        "max_order": cfg.max_order,
        "n_checks": len(sweep),
        "chu_vandermonde_max_gap": worst.gap,
    }
    failed: bool = worst.gap > IDENTITY_TOLERANCE
    if spec is not None:
        f: GSFunction = build_function(spec, lam=lam)
        grid: ScanGrid = _grid(cfg, spec)
        routes: list[dict] = list()
        for k in range(cfg.k + 1):
            gaps: dict = route_agreement(f, k, grid)
            routes.append({"k": k, **gaps})
            failed = failed or max(gaps.values()) > ROUTE_TOLERANCE
        body["route_agreement"] = routes
        body["g_recurrence"] = [
            {"k": k, "gap": g_recurrence_check(f, k, grid)} for k in range(2, cfg.k + 1)
        ]
    if failed:
        body["witness"] = worst.serialize()
    rows: list[list] = [["n", "k", "m", "lhs", "rhs", "gap"]]
    rows.extend([r.n, r.k, r.m, r.lhs, r.rhs, r.gap] for r in sweep)
    return RunResult(body, EXIT_FAIL if failed else EXIT_PASS, rows)


def _cmd_asymptotics(cfg: RunConfig, spec: dict) -> RunResult:
    mu: Measure = build_measure(spec)
    # a divergent moment surfaces as a QuadratureError and exits inconclusive
    expansion: AsymptoticExpansion = asymptotic_expand(mu, _lam(cfg, spec), cfg.n)
    probe: list[tuple[float, float, float]] = expansion.decay_probe()
    body: dict = {
        "expansion": expansion.serialize(),
        "decay_probe": [{"x": x, "r_n": r, "x^n r_n": xr} for x, r, xr in probe],
    }
    if not expansion.decays:
        body["witness"] = body["decay_probe"]
    return RunResult(body, EXIT_PASS if expansion.decays else EXIT_FAIL, expansion.to_csv_rows())


def _cmd_bernstein(cfg: RunConfig, spec: dict) -> RunResult:
    mu: Measure = build_measure(spec)
    lam: float = _lam(cfg, spec)
    g: BernsteinFunction = build_bernstein_function(
        spec["bernstein"]["alpha"], spec["bernstein"]["beta"], lam, mu
    )
    report: CMReport = cm_check_derivatives(
        g.scaled_derivative_function(), N=cfg.N, grid=_grid(cfg, spec)
    )
    values: list[dict] = [
        {"x": x, "g": g.eval(x), "g'": g.derivative(1, x), "x^(1-lam) g'": g.scaled_derivative(x)}
        for x in cfg.x
    ]
    body: dict = {
        "admissibility": g.admissibility.serialize(),
        "values": values,
        "scaled_derivative_cm": report.serialize(),
    }
    return RunResult(body, _VERDICT_EXIT[report.verdict], report.to_csv_rows())


def _cmd_chain(cfg: RunConfig, spec: dict) -> RunResult:
    f: GSFunction = build_function(spec, lam=cfg.lam)
    chain: MChain = MChain.from_function(f, cfg.k)
    grid: ScanGrid = _grid(cfg, spec)
    signs = alternating_chain_sign_check(chain, j_max=cfg.k - 1, grid=grid)
    n_report = n_chain(chain)
    limit = chain.limit_probe()
    reconstruction: list[dict] = list()
    for x in cfg.x:
        value: float = f.eval(x)
        rebuilt: float = chain.reconstruct(x)
        reconstruction.append(
            {"x": x, "f": value, "reconstructed": rebuilt, "gap": abs(rebuilt - value) / max(1.0, abs(value))}
        )
    verdicts: list[Verdict] = [signs.verdict, n_report.verdict, limit.verdict]
    verdict: Verdict = Verdict.PASS
    if Verdict.FAIL in verdicts:
        verdict = Verdict.FAIL
    elif signs.orders and Verdict.INCONCLUSIVE in verdicts:
        verdict = Verdict.INCONCLUSIVE
    body: dict = {
        "chain": chain.serialize(),
        "sign_check": signs.serialize(),
        "n_chain": n_report.serialize(),
        "limit_probe": limit.serialize(),
        "reconstruction": reconstruction,
    }
    if verdict == Verdict.FAIL:
        body["witness"] = next(
            (o.serialize() for o in signs.orders if o.verdict == Verdict.FAIL),
            limit.serialize() if limit.verdict == Verdict.FAIL else n_report.serialize(),
        )
    return RunResult(body, _VERDICT_EXIT[verdict], signs.to_csv_rows())


def _cmd_validate(cfg: RunConfig, spec: dict) -> RunResult:
    return RunResult({"valid": True}, EXIT_PASS)


COMMAND_HANDLERS: dict[str, Callable[[RunConfig, Any], RunResult]] = {
    "eval": _cmd_eval,
    "operator": _cmd_operator,
    "cm-check": _cmd_cm_check,
    "class": _cmd_class,
    "identities": _cmd_identities,
    "asymptotics": _cmd_asymptotics,
    "bernstein": _cmd_bernstein,
    "chain": _cmd_chain,
    "validate": _cmd_validate,
}


# output
# ============================================================


def format_report(cfg: RunConfig, spec: dict | None, result: RunResult) -> str:
    """the report as text: JSON with floats at 12 significant digits, or CSV when requested and available"""
    if cfg.output_format == "csv" and result.csv_rows is not None:
        buffer: io.StringIO = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerows(round_floats(result.csv_rows))
        return buffer.getvalue()
    report: dict = {
        "command": cfg.command,
        "exit_code": result.exit_code,
        "config": cfg.summary(),
        "spec": spec,
        "result": result.body,
    }
    return json.dumps(round_floats(report), indent=2, ensure_ascii=False) + "\n"


def run(cfg: RunConfig) -> int:
    """dispatch one command, write its report, and return the exit code"""
    print_log = print if cfg.verbose else lambda *_a, **_kw: None
    try:
        spec: dict | None = None if cfg.spec_path is None else validate_spec(cfg.spec_path)
        print_log(f"running {cfg.command!r} with {cfg.summary()}", file=sys.stderr)
        result: RunResult = COMMAND_HANDLERS[cfg.command](cfg, spec)
    except SpecValidationError as e:
        for diagnostic in e.diagnostics:
            print(f"spec error: {diagnostic}", file=sys.stderr)
        return EXIT_USAGE
    except (RunConfigError, InadmissibleMeasureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (
        NotAMeasureError,
        DerivativeCapabilityError,
        EvaluationError,
        QuadratureError,
    ) as e:
        print(f"inconclusive: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE

    text: str = format_report(cfg, spec, result)
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        Path(cfg.output).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.output).write_text(text, encoding="utf-8")
        print_log(f"wrote report to {cfg.output}", file=sys.stderr)
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stieltjes-cm",
        description="generalized Stieltjes functions: operators, complete monotonicity and class membership",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=None,
        help="order of the function, replaces the spec order for every command",
    )
    common.add_argument("--grid-min", type=float, default=None)
    common.add_argument("--grid-max", type=float, default=None)
    common.add_argument("--grid-n", type=int, default=None)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", type=str, default=None, help="report path, stdout if omitted")
    common.add_argument("--verbose", "-v", action="store_true")

    def add(name: str, help: str, spec_required: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        if spec_required:
            p.add_argument("spec", type=str, help="function or measure spec file (JSON)")
        else:
            p.add_argument("spec", type=str, nargs="?", default=None)
        return p

    p_eval = add("eval", "evaluate f and one derivative")
    p_eval.add_argument("--x", type=float, nargs="+", default=[1.0])
    p_eval.add_argument("--n", type=int, default=0, help="derivative order")

    p_op = add("operator", "tabulate T_{n,k} by every route")
    p_op.add_argument("--k", type=int, default=3)
    p_op.add_argument("--n", type=int, default=0)
    p_op.add_argument("--parallel", action="store_true")

    p_cm = add("cm-check", "complete monotonicity of c_k(f)")
    p_cm.add_argument("--k", type=int, default=0)
    p_cm.add_argument("--N", type=int, default=8, help="number of derivative orders")
    p_cm.add_argument("--method", choices=("derivative_sign", "finite_difference"), default="derivative_sign")

    p_class = add("class", "membership in C_N")
    p_class.add_argument("--N", type=int, default=8)

    p_id = add("identities", "coefficient identities, and route agreement for a spec", spec_required=False)
    p_id.add_argument("--max", dest="max_order", type=int, default=8)
    p_id.add_argument("--k", type=int, default=4)

    p_asym = add("asymptotics", "large-x expansion from the moments")
    p_asym.add_argument("--n", type=int, default=3)

    p_bern = add("bernstein", "generalized bernstein function and its scaled derivative")
    p_bern.add_argument("--x", type=float, nargs="+", default=[1.0])
    p_bern.add_argument("--N", type=int, default=6)

    p_chain = add("chain", "M/N chains of c_k(f) and the reconstruction of f")
    p_chain.add_argument("--k", type=int, default=2)
    p_chain.add_argument("--x", type=float, nargs="+", default=[1.0])

    add("validate", "check a spec file and print it normalized")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    options: dict = vars(args)
    return RunConfig(
        command=options["command"],
        spec_path=options.get("spec"),
        lam=options.get("lam"),
        N=options.get("N", 8),
        k=options.get("k", 1),
        n=options.get("n", 0),
        x=tuple(options.get("x", (1.0,))),
        max_order=options.get("max_order", 8),
        method=options.get("method", "derivative_sign"),
        grid_min=options.get("grid_min"),
        grid_max=options.get("grid_max"),
        grid_n=options.get("grid_n"),
        tolerance=options.get("tolerance"),
        output_format=options["output_format"],
        output=options.get("output"),
        parallel=options.get("parallel", False),
        verbose=options.get("verbose", False),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg: RunConfig = config_from_args(args)
    except RunConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
