import math

import pytest
from hypothesis import given, strategies as st
from scipy.special import poch as scipy_poch

from lauricella.series import pochhammer


GRID = [-5.5, -3.0, -1.25, -0.5, 0.0, 0.3, 1.0, 2.5, 7.0]


@pytest.mark.parametrize("a", GRID)
@pytest.mark.parametrize("m", [0, 1, 2, 5, 13, 30])
def test_matches_scipy(a, m):
    ours = pochhammer(a, m)
    ref = scipy_poch(a, m)
    assert ours == pytest.approx(ref, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("a", GRID)
def test_recurrence_exact(a):
    # (a)_{m+1} = (a)_m (a + m), exact in floats for the small-m product path
    for m in range(31):
        assert pochhammer(a, m + 1) == pochhammer(a, m) * (a + m)


def test_empty_product():
    assert pochhammer(0.0, 0) == 1.0
    assert pochhammer(-4.0, 0) == 1.0


def test_negative_integer_truncation():
    assert pochhammer(-3.0, 4) == 0.0
    assert pochhammer(-3.0, 3) == -6.0   # (-3)(-2)(-1)
    assert pochhammer(-3.0, 2) == 6.0


def test_large_m_stability():
    # the log-gamma branch must agree with scipy far beyond the product cut
    for a in (0.7, 2.3, 15.0):
        for m in (100, 500):
            ref = scipy_poch(a, m)
            if math.isinf(ref):
                assert math.isinf(pochhammer(a, m))
            else:
                assert pochhammer(a, m) == pytest.approx(ref, rel=1e-12)
    assert pochhammer(-7.5, 200) == pytest.approx(
        scipy_poch(-7.5, 200), rel=1e-11)
    assert pochhammer(-12.0, 80) == 0.0


@given(st.floats(min_value=-8, max_value=8,
                 allow_nan=False, allow_infinity=False),
       st.integers(min_value=0, max_value=40))
def test_recurrence_property(a, m):
    lhs = pochhammer(a, m + 1)
    rhs = pochhammer(a, m) * (a + m)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-290)
