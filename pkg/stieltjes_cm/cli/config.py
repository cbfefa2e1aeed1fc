import json

from muutils.json_serialize import (
    SerializableDataclass,
    serializable_dataclass,
    serializable_field,
)
from muutils.misc import sanitize_fname, stable_hash

from stieltjes_cm.constants import DEFAULT_CLASS_N

COMMANDS: tuple[str, ...] = (
    "eval",
    "operator",
    "cm-check",
    "class",
    "identities",
    "asymptotics",
    "bernstein",
    "chain",
    "validate",
)
# commands that run without a spec file
SPECLESS_COMMANDS: frozenset[str] = frozenset({"identities"})
OUTPUT_FORMATS: tuple[str, ...] = ("json", "csv")
# commands whose report has no table
JSON_ONLY_COMMANDS: frozenset[str] = frozenset({"validate"})


class RunConfigError(ValueError):
    """raised when a run configuration is inconsistent (bad command, missing spec, out-of-range option)"""

    pass


@serializable_dataclass(frozen=True, kw_only=True)
class RunConfig(SerializableDataclass):
    """everything a single CLI run needs. `lam` and the grid fields override the spec when set"""

    command: str
    spec_path: str | None = serializable_field(default=None)
    lam: float | None = serializable_field(default=None)
    N: int = serializable_field(default=DEFAULT_CLASS_N)
    k: int = serializable_field(default=1)
    n: int = serializable_field(default=0)
    x: tuple[float, ...] = serializable_field(
        default=(1.0,),
        serialization_fn=lambda xs: list(xs),
        loading_fn=lambda data: tuple(data["x"]),
    )
    max_order: int = serializable_field(default=8)
    method: str = serializable_field(default="derivative_sign")
    grid_min: float | None = serializable_field(default=None)
    grid_max: float | None = serializable_field(default=None)
    grid_n: int | None = serializable_field(default=None)
    tolerance: float | None = serializable_field(default=None)
    output_format: str = serializable_field(default="json")
    output: str | None = serializable_field(default=None)
    parallel: bool = serializable_field(default=False)
    verbose: bool = serializable_field(default=False)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise RunConfigError(f"unknown command {self.command!r}, expected one of {COMMANDS}")
        if self.spec_path is None and self.command not in SPECLESS_COMMANDS:
            raise RunConfigError(f"command {self.command!r} needs a spec file")
        if self.lam is not None and not self.lam > 0:
            raise RunConfigError(f"lambda must be positive, got {self.lam}")
        for name in ("N", "k", "n", "max_order"):
            if getattr(self, name) < 0:
                raise RunConfigError(f"{name} must be non-negative, got {getattr(self, name)}")
        if not all(x > 0 for x in self.x):
            raise RunConfigError(f"evaluation points must be positive, got {self.x}")
        if self.method not in ("derivative_sign", "finite_difference"):
            raise RunConfigError(f"unknown method {self.method!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise RunConfigError(f"unknown output format {self.output_format!r}, expected one of {OUTPUT_FORMATS}")
        if self.output_format == "csv" and self.command in JSON_ONLY_COMMANDS:
            raise RunConfigError(f"command {self.command!r} has no csv output")
        if self.grid_n is not None and self.grid_n < 1:
            raise RunConfigError(f"grid_n must be positive, got {self.grid_n}")

    def summary(self) -> dict:
        """the options that determine the report, without output plumbing"""
        return dict(
            command=self.command,
            spec_path=self.spec_path,
            lam=self.lam,
            N=self.N,
            k=self.k,
            n=self.n,
            x=list(self.x),
            max_order=self.max_order,
            method=self.method,
            grid=dict(
                min=self.grid_min, max=self.grid_max, n=self.grid_n, tolerance=self.tolerance
            ),
        )

    def stable_hash_cfg(self) -> int:
        return stable_hash(json.dumps(self.summary()))

    def to_fname(self) -> str:
        """a report filename from the command, the spec name and a hash of the summary"""
        spec_name: str = "nospec" if self.spec_path is None else self.spec_path.rsplit("/", 1)[-1].removesuffix(".json")
        return sanitize_fname(
            f"{self.command}-{spec_name}-h{self.stable_hash_cfg() % 10**5}.{self.output_format}"
        )
