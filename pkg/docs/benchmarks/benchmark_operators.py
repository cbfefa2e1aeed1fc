import json
import random
import timeit
from pathlib import Path

from tqdm import tqdm

from stieltjes_cm import ClosedForm, GSFunction, Measure, t_op
from stieltjes_cm.measure.densities import ExpDensity, RationalDensity
from stieltjes_cm.operators.operators import OPERATOR_ROUTES

_BENCHMARK_FUNCTIONS: dict[str, GSFunction] = {
    "atom": GSFunction.from_laplace(Measure.dirac(1.0), lam=2.0),
    "exp_density": GSFunction.from_laplace(Measure.with_density(ExpDensity()), lam=1.5),
    "rational_density": GSFunction.from_laplace(
        Measure.with_density(RationalDensity()), lam=1.0
    ),
    "closed_form": GSFunction.from_closed_form(
        ClosedForm.from_spec({"terms": [{"kind": "power_kernel", "t": 1.0, "p": 2.0}]}),
        lam=2.0,
    ),
}


def time_operators(
    function_names: list[str],
    n_vals: list[int],
    k_vals: list[int],
    x_vals: list[float],
    trials: int = 5,
    verbose: bool = False,
) -> list[dict]:
    # (function, route, n, k, x)
    cases: list[tuple[str, str, int, int, float]] = [
        (name, route, n, k, x)
        for name in function_names
        for route in OPERATOR_ROUTES
        for n in n_vals
        for k in k_vals
        for x in x_vals
    ]
    # otherwise the progress bar is uneven
    random.shuffle(cases)

    times: list[dict] = list()
    for name, route, n, k, x in tqdm(
        cases,
        desc="Timing operator routes",
        unit="case",
        total=len(cases),
        disable=verbose,
    ):
        f: GSFunction = _BENCHMARK_FUNCTIONS[name]

        def stmt() -> float:
            # memoized derivatives would hide the cost after the first trial
            f.clear_cache()
            return t_op(f, n, k, x, route=route)

        t: float = timeit.timeit(stmt=stmt, number=trials) / trials
        if verbose:
            print(f"{name} {route} n={n} k={k} x={x}: {t * 1e3:.3f} ms")
        times.append(
            dict(function=name, route=route, n=n, k=k, x=x, trials=trials, time=t)
        )

    return times


def run_benchmark(
    save_path: str = "tests/_temp/benchmark_operators.jsonl",
    function_names: list[str] | None = None,
    n_vals: list[int] = [0, 1, 2],
    k_vals: list[int] = [0, 1, 2, 4, 6],
    x_vals: list[float] = [1e-2, 1.0, 1e2],
    trials: int = 5,
    verbose: bool = True,
) -> list[dict]:
    if function_names is None:
        function_names = list(_BENCHMARK_FUNCTIONS)

    times: list[dict] = time_operators(
        function_names=function_names,
        n_vals=n_vals,
        k_vals=k_vals,
        x_vals=x_vals,
        trials=trials,
        verbose=verbose,
    )

    Path(save_path).parent.mkdir(parents=True, exist_ok=True)
    with open(save_path, "w") as f:
        for row in times:
            f.write(json.dumps(row) + "\n")

    return times


if __name__ == "__main__":
    run_benchmark()
