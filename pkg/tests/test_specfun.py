import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csltrap.specfun import erf, erfc_positive

mpmath.mp.dps = 40


def test_erf_matches_high_precision_reference_on_0_6():
    xs = np.linspace(0.0, 6.0, 20)
    for x in xs:
        ref = float(mpmath.erf(mpmath.mpf(float(x))))
        assert abs(erf(float(x)) - ref) <= 1e-10


@pytest.mark.parametrize("x", [1e-300, 1e-8, 0.3, 2.4999, 2.5, 2.5001, 4.0, 8.0, 30.0])
def test_erf_relative_accuracy_across_branches(x):
    ref = float(mpmath.erf(x))
    assert erf(x) == pytest.approx(ref, rel=5e-15, abs=0)


@pytest.mark.parametrize("x", [0.5, 2.0, 3.0, 6.0, 20.0])
def test_erfc_keeps_relative_precision_in_the_tail(x):
    assert erfc_positive(x) == pytest.approx(float(mpmath.erfc(x)), rel=1e-13)


@given(st.floats(-50, 50, allow_nan=False))
def test_erf_odd_bounded_and_close_to_libm(x):
    v = erf(x)
    assert -1.0 <= v <= 1.0
    assert erf(-x) == -v
    assert v == pytest.approx(math.erf(x), abs=1e-15)


def test_erf_vectorised_and_scalar_agree():
    xs = np.array([-3.0, -0.1, 0.0, 0.7, 2.6])
    assert np.array_equal(erf(xs), np.array([erf(float(x)) for x in xs]))
    assert isinstance(erf(0.7), float)


def test_erf_rejects_nan():
    with pytest.raises(ValueError):
        erf(float("nan"))
