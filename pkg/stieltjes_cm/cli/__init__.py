from stieltjes_cm.cli.config import RunConfig, RunConfigError
from stieltjes_cm.cli.main import build_parser, main, run
from stieltjes_cm.cli.spec_file import (
    build_function,
    build_grid,
    build_measure,
    load_spec_file,
    validate_spec,
)

__all__ = [
    "RunConfig",
    "RunConfigError",
    "build_function",
    "build_grid",
    "build_measure",
    "build_parser",
    "load_spec_file",
    "main",
    "run",
    "validate_spec",
]
