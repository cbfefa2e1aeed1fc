import math

import numpy as np
import pytest

from stieltjes_cm.constants import THREADS_ENV_VAR
from stieltjes_cm.measure.measure import Verdict
from stieltjes_cm.utils import (
    aitken_limit,
    decade_points,
    get_process_count,
    is_cauchy_stable,
    is_monotone_decay,
    log_grid,
    round_floats,
)


def test_log_grid():
    grid = log_grid(1e-2, 1e2, 5)
    assert grid.tolist() == pytest.approx([1e-2, 1e-1, 1.0, 1e1, 1e2], rel=1e-12)
    assert log_grid(3.0, 4.0, 1).tolist() == [3.0]
    with pytest.raises(ValueError):
        log_grid(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        log_grid(1.0, 2.0, 0)


def test_decade_points():
    assert decade_points((-2, 0, 1)) == [0.01, 1.0, 10.0]


@pytest.mark.parametrize(
    "values, expected",
    [
        ([1e-4, 1e-5, 1e-6], 0.0),
        ([2.0, 2.0, 2.0], 2.0),
        ([5.0], 5.0),
        # partial sums of a geometric series with ratio 1/2 tending to 2
        ([1.0, 1.5, 1.75], 2.0),
    ],
)
def test_aitken_limit(values, expected):
    assert aitken_limit(values) == pytest.approx(expected, abs=1e-12)


def test_decay_and_stability():
    assert is_monotone_decay([1.0, 0.1, 0.01])
    assert is_monotone_decay([0.0, 0.0, 0.0])
    assert not is_monotone_decay([1.0, 1.0, 1.0])
    assert not is_monotone_decay([0.1, 1.0, 0.01])
    assert is_cauchy_stable([1.0, 1.001, 1.0011])
    assert not is_cauchy_stable([1.0, 2.0, 4.0])
    assert not is_cauchy_stable([1.0, math.inf, 1.0])


def test_round_floats():
    data = {
        "a": 1.0 / 3.0,
        "b": [math.inf, -math.inf, math.nan],
        "c": np.array([0.1 + 0.2]),
        "d": (np.int64(3), np.bool_(True)),
        "e": Verdict.PASS,
    }
    assert round_floats(data) == {
        "a": 0.333333333333,
        "b": ["inf", "-inf", "nan"],
        "c": [0.3],
        "d": [3, True],
        "e": "pass",
    }


class TestProcessCount:
    def test_unset(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        assert get_process_count() is None
        assert get_process_count(4) == 4

    def test_cap(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "2")
        assert get_process_count() == 2
        assert get_process_count(4) == 2
        assert get_process_count(1) == 1

    @pytest.mark.parametrize("raw", ["zero", "0", "-3"])
    def test_invalid(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_ENV_VAR, raw)
        with pytest.raises(ValueError):
            get_process_count()
