"""`OperatorTable`: values of `T_{n,k}^λ(f)` on a grid for every route, with cross-route discrepancies"""

import multiprocessing
import typing
from pathlib import Path

import numpy as np
import tqdm
from muutils.json_serialize import JSONitem, json_serialize
from zanj import ZANJ
from zanj.loading import LoaderHandler, load_item_recursive, register_loader_handler

from stieltjes_cm.constants import LOW_CONFIDENCE_X, GridMask, RouteValues
from stieltjes_cm.funcspace.gs_function import GSFunction
from stieltjes_cm.measure.measure import ScanGrid
from stieltjes_cm.operators.operators import OPERATOR_ROUTES, OperatorRoute, t_op
from stieltjes_cm.utils import get_process_count

_GLOBAL_WORKER_TABLE_ARGS: dict


def _table_init_worker(f: GSFunction, lam: float, n_max: int, k_max: int) -> None:
    global _GLOBAL_WORKER_TABLE_ARGS
    _GLOBAL_WORKER_TABLE_ARGS = dict(f=f, lam=lam, n_max=n_max, k_max=k_max)


def _operator_table_helper(x: float) -> np.ndarray:
    """all `(route, n, k)` values at one grid point"""
    args: dict = _GLOBAL_WORKER_TABLE_ARGS
    out: np.ndarray = np.empty(
        (len(OPERATOR_ROUTES), args["n_max"] + 1, args["k_max"] + 1), dtype=np.float64
    )
    for r, route in enumerate(OPERATOR_ROUTES):
        for n in range(args["n_max"] + 1):
            for k in range(args["k_max"] + 1):
                out[r, n, k] = t_op(args["f"], n, k, x, lam=args["lam"], route=route)
    return out


class OperatorTable:
    """values of `T_{n,k}^λ(f)` indexed by `(route, n, k, grid point)`

    `c_k^λ` is the `n = 0` slice
    """

    def __init__(
        self,
        f: GSFunction,
        lam: float,
        n_max: int,
        k_max: int,
        grid: ScanGrid,
        values: RouteValues,
    ) -> None:
        self.f: GSFunction = f
        self.lam: float = lam
        self.n_max: int = n_max
        self.k_max: int = k_max
        self.grid: ScanGrid = grid
        self.values: RouteValues = np.asarray(values, dtype=np.float64)
        expected: tuple[int, ...] = (len(OPERATOR_ROUTES), n_max + 1, k_max + 1, len(grid))
        assert self.values.shape == expected, f"{self.values.shape = }, {expected = }"

    @classmethod
    def compute(
        cls,
        f: GSFunction,
        k_max: int,
        n_max: int = 0,
        grid: ScanGrid | None = None,
        lam: float | None = None,
        parallel: bool = False,
        pool_kwargs: dict | None = None,
        verbose: bool = False,
    ) -> "OperatorTable":
        """evaluate every route at every `(n, k, x)`, optionally over a process pool

        the pool size is capped by `STIELTJES_THREADS` when set
        """
        lam = f.lam if lam is None else lam
        grid = ScanGrid.log_spaced() if grid is None else grid
        if n_max < 0 or k_max < 0:
            raise ValueError(f"need non-negative orders, got {n_max = }, {k_max = }")
        print_log = print if verbose else lambda *_a, **_kw: None
        print_log(f"computing operator table: {lam = }, {n_max = }, {k_max = }, {len(grid)} points")

        tqdm_kwargs: dict = dict(
            total=len(grid),
            unit="point",
            desc="evaluating operator routes",
            disable=not verbose,
        )
        rows: list[np.ndarray]
        if parallel:
            pool_kwargs = dict() if pool_kwargs is None else dict(pool_kwargs)
            pool_kwargs["processes"] = get_process_count(pool_kwargs.get("processes"))
            with multiprocessing.Pool(
                **pool_kwargs,
                initializer=_table_init_worker,
                initargs=(f, lam, n_max, k_max),
            ) as pool:
                rows = list(
                    tqdm.tqdm(
                        pool.imap(_operator_table_helper, grid.points),
                        **tqdm_kwargs,
                    )
                )
        else:
            _table_init_worker(f, lam, n_max, k_max)
            rows = list(
                tqdm.tqdm(
                    map(_operator_table_helper, grid.points),
                    **tqdm_kwargs,
                )
            )

        return cls(
            f=f,
            lam=lam,
            n_max=n_max,
            k_max=k_max,
            grid=grid,
            values=np.stack(rows, axis=-1),
        )

    # queries
    # ============================================================

    def route_index(self, route: OperatorRoute) -> int:
        return OPERATOR_ROUTES.index(route)

    def c_values(self, route: OperatorRoute = "leibniz") -> np.ndarray:
        """`c_k` values, shape `(k, grid point)`"""
        return self.values[self.route_index(route), 0]

    def route_discrepancy(self, route: OperatorRoute) -> float:
        """largest `|v_route - v_leibniz| / (1 + |v_leibniz|)` over identical `(n, k, x)`"""
        reference: np.ndarray = self.values[0]
        other: np.ndarray = self.values[self.route_index(route)]
        return float(np.max(np.abs(other - reference) / (1.0 + np.abs(reference))))

    @property
    def discrepancy(self) -> float:
        return max(self.route_discrepancy(r) for r in OPERATOR_ROUTES[1:])

    @property
    def low_confidence(self) -> GridMask:
        """grid points where the recursion route loses accuracy (small `x` with `λ < 1`)"""
        if self.lam >= 1:
            return np.zeros(len(self.grid), dtype=bool)
        return self.grid.as_array() < LOW_CONFIDENCE_X

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["route", "n", "k", "x", "value"]]
        for r, route in enumerate(OPERATOR_ROUTES):
            for n in range(self.n_max + 1):
                for k in range(self.k_max + 1):
                    for i, x in enumerate(self.grid.points):
                        rows.append([route, n, k, x, float(self.values[r, n, k, i])])
        return rows

    def __eq__(self, other: typing.Any) -> bool:
        if not isinstance(other, OperatorTable):
            return NotImplemented
        return (
            self.f == other.f
            and self.lam == other.lam
            and self.n_max == other.n_max
            and self.k_max == other.k_max
            and self.grid == other.grid
            and np.array_equal(self.values, other.values)
        )

    # serialization
    # ============================================================

    def serialize(self) -> JSONitem:
        """serialize to zanj/json"""
        return {
            "__format__": "OperatorTable",
            "f": self.f.serialize(),
            "lam": self.lam,
            "n_max": self.n_max,
            "k_max": self.k_max,
            "grid": self.grid.serialize(),
            "routes": list(OPERATOR_ROUTES),
            "values": json_serialize(self.values),
            "discrepancy": self.discrepancy,
        }

    @classmethod
    def load(cls, data: JSONitem) -> "OperatorTable":
        """load from zanj/json"""
        assert data["__format__"] == "OperatorTable"
        return cls(
            f=GSFunction.load(data["f"]),
            lam=float(data["lam"]),
            n_max=int(data["n_max"]),
            k_max=int(data["k_max"]),
            grid=ScanGrid.load(data["grid"]),
            values=load_item_recursive(data["values"], tuple()),
        )

    def save(self, file_path: Path | str, zanj: ZANJ | None = None) -> None:
        if zanj is None:
            zanj = ZANJ()
        zanj.save(self.serialize(), file_path)

    @classmethod
    def read(cls, file_path: Path | str, zanj: ZANJ | None = None) -> "OperatorTable":
        if zanj is None:
            zanj = ZANJ()
        return zanj.read(file_path)


register_loader_handler(
    LoaderHandler(
        check=lambda json_item, path=None, z=None: (
            isinstance(json_item, typing.Mapping)
            and "__format__" in json_item
            and json_item["__format__"].startswith("OperatorTable")
        ),
        load=lambda json_item, path=None, z=None: OperatorTable.load(json_item),
        uid="OperatorTable",
        source_pckg="stieltjes_cm.operators.table",
        desc="OperatorTable",
    )
)
