import pytest
from hypothesis import given
from hypothesis import strategies as st

from stieltjes_cm.operators.coefficients import (
    chu_vandermonde_check,
    chu_vandermonde_sweep,
    key_identity_coefficients,
    leibniz_coefficients,
    recursion_c_coefficients,
    recursion_coefficients,
)


def test_example():
    report = chu_vandermonde_check(1.5, 1, 2, 0)
    assert report.lhs == pytest.approx(8.75, rel=1e-14)
    assert report.rhs == pytest.approx(8.75, rel=1e-14)
    assert report.gap <= 1e-12


@pytest.mark.parametrize("k", [0, 1, 4, 8])
def test_m_equals_k(k: int):
    report = chu_vandermonde_check(0.7, 3, k, k)
    assert report.lhs == pytest.approx(1.0)
    assert report.rhs == pytest.approx(1.0)


def test_sweep_lambda_one():
    reports = chu_vandermonde_sweep(1.0, 8)
    assert len(reports) == 9 * sum(k + 1 for k in range(9))
    assert max(r.gap for r in reports) <= 1e-10


@given(
    lam=st.floats(min_value=0.05, max_value=6.0),
    n=st.integers(min_value=0, max_value=8),
    k=st.integers(min_value=0, max_value=8),
    data=st.data(),
)
def test_identity_holds(lam: float, n: int, k: int, data):
    m: int = data.draw(st.integers(min_value=0, max_value=k))
    assert chu_vandermonde_check(lam, n, k, m).gap <= 1e-10


def test_invalid_indices():
    with pytest.raises(ValueError):
        chu_vandermonde_check(1.0, 0, 2, 3)
    with pytest.raises(ValueError):
        chu_vandermonde_check(1.0, -1, 2, 1)


def test_recursion_c_coefficients():
    assert recursion_c_coefficients(2.0, 0) == (1.0,)
    assert recursion_c_coefficients(2.0, 1) == (2.0, 1.0)
    # c_2 = λ(λ+1) f + 2(λ+1) x f' + x^2 f''
    assert recursion_c_coefficients(2.0, 2) == pytest.approx((6.0, 6.0, 1.0))


@pytest.mark.parametrize("lam", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("n", [0, 2, 5])
@pytest.mark.parametrize("k", [0, 1, 3, 6])
def test_routes_agree(lam: float, n: int, k: int):
    expected = leibniz_coefficients(lam, n, k)
    assert len(expected) == k + 1
    assert list(key_identity_coefficients(lam, n, k)) == pytest.approx(list(expected), rel=1e-12)
    assert list(recursion_coefficients(lam, n, k)) == pytest.approx(list(expected), rel=1e-12)
