import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csltrap.constants import K_B, AMU
from csltrap.csl import (
    CUBE_SERIES_CUTOFF,
    SPHERE_SERIES_CUTOFF,
    CslParameters,
    RigidBody,
    Shape,
    body_mass,
    chi_argmax,
    chi_cube,
    chi_sphere,
    csl_param_convert,
    energy_raising_rate,
)
from csltrap.errors import DomainError

# Frozen from a 50-digit mpmath evaluation of the closed forms.
SPHERE_REF = {
    1e-3: 1.0471970275979792e-9,
    0.1: 0.0010419772365595375,
    1.0: 0.65117879156594383,
    2.38: 1.7202438299471255,
    100.0: 0.062819286701181506,
}
CUBE_REF = {
    1e-3: 1.9999983333341889e-9,
    0.1: 0.0019834185550535476,
    1.0: 0.93835767158232183,
    100.0: 0.062124871531433658,
}


@pytest.mark.parametrize("x,ref", SPHERE_REF.items())
def test_chi_sphere_against_high_precision(x, ref):
    assert chi_sphere(x) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("x,ref", CUBE_REF.items())
def test_chi_cube_against_high_precision(x, ref):
    assert chi_cube(x) == pytest.approx(ref, rel=1e-12)


def test_chi_sphere_reference_point():
    assert chi_sphere(2.38) == pytest.approx(1.7202, abs=1e-3)


def test_chi_cube_reference_point():
    assert chi_cube(1.92) == pytest.approx(1.5943, abs=1e-3)


def test_small_x_limits():
    x = 0.1
    assert chi_sphere(x) == pytest.approx(math.pi * x**3 / 3, rel=0.01)
    assert chi_cube(x) == pytest.approx(2 * x**3, rel=0.02)


def test_large_x_limits():
    x = 100.0
    assert chi_sphere(x) == pytest.approx(2 * math.pi / x, rel=1e-3)
    # cube: I12 -> (sqrt(pi) x - 1)^2, so the 1/x correction is 2/(sqrt(pi) x) ~ 1.1% here
    assert chi_cube(x) == pytest.approx(2 * math.pi / x * (1 - 1 / (math.sqrt(math.pi) * x)) ** 2, rel=1e-6)
    assert chi_cube(x) == pytest.approx(2 * math.pi / x, rel=0.012)


def test_branches_agree_at_switchover():
    for fn, cut in ((chi_sphere, SPHERE_SERIES_CUTOFF), (chi_cube, CUBE_SERIES_CUTOFF)):
        below = fn(np.nextafter(cut, 0))
        at = fn(cut)
        assert below == pytest.approx(at, rel=1e-9)


@pytest.mark.parametrize("fn", [chi_sphere, chi_cube])
def test_nonnegative_vanishing_and_unimodal_on_log_grid(fn):
    x = np.logspace(-2, 2, 10_000)
    y = fn(x)
    assert np.all(y >= 0)
    signs = np.sign(np.diff(y))
    assert np.count_nonzero(np.diff(signs) != 0) == 1
    assert fn(1e-6) < 1e-15 and fn(1e8) < 1e-7


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_chi_domain_errors(bad):
    with pytest.raises(DomainError):
        chi_sphere(bad)
    with pytest.raises(DomainError):
        chi_cube(bad)


def test_chi_argmax_sphere():
    x, c = chi_argmax(Shape.SPHERE)
    assert x == pytest.approx(2.38, abs=0.01)
    assert c == pytest.approx(1.7202, abs=5e-4)


def test_chi_argmax_cube():
    x, c = chi_argmax(Shape.CUBE)
    assert x == pytest.approx(1.92, abs=0.01)
    assert c == pytest.approx(1.5943, abs=5e-4)


def test_chi_argmax_narrow_bracket_same_answer():
    wide = chi_argmax(Shape.SPHERE)
    narrow = chi_argmax(Shape.SPHERE, 2.0, 3.0)
    assert narrow[0] == pytest.approx(wide[0], abs=1e-4)
    assert narrow[1] == pytest.approx(wide[1], rel=1e-9)


def _osmium(L=2.38e-7):
    return RigidBody(Shape.SPHERE, L)


def test_energy_raising_rate_reference():
    ups = energy_raising_rate(_osmium(), CslParameters.grw())
    assert ups == pytest.approx(1.57e-33, rel=0.01)
    assert ups * 60 / K_B * 1e9 == pytest.approx(6.8, rel=0.02)


def test_energy_raising_rate_linear_in_lambda():
    body = _osmium()
    a = energy_raising_rate(body, CslParameters(1e-16, 1e-7))
    b = energy_raising_rate(body, CslParameters(2e-16, 1e-7))
    assert b == 2 * a


def test_cube_rate_is_a_little_lower_at_its_optimum():
    sphere = energy_raising_rate(_osmium(), CslParameters.grw())
    cube = energy_raising_rate(RigidBody(Shape.CUBE, 1.92e-7), CslParameters.grw())
    assert 0.85 * sphere < cube < sphere


def test_param_conversion():
    gamma, alpha = csl_param_convert(CslParameters(1e-16, 1e-7))
    assert alpha == pytest.approx(1e14, rel=1e-15)
    assert gamma == pytest.approx(4.4546623974653663e-36, rel=1e-13)


@given(
    st.floats(1e-25, 1e5, allow_nan=False),
    st.floats(1e-12, 1e-2, allow_nan=False),
)
def test_param_round_trip(lam, r_c):
    csl = CslParameters(lam, r_c)
    back = CslParameters.from_gamma_alpha(*csl_param_convert(csl))
    assert back.lam == pytest.approx(lam, rel=1e-12)
    assert back.r_c == pytest.approx(r_c, rel=1e-12)


@pytest.mark.parametrize("lam,r_c", [(0.0, 1e-7), (1e-16, 0.0), (-1.0, 1e-7), (float("nan"), 1e-7)])
def test_csl_parameters_reject_nonpositive(lam, r_c):
    with pytest.raises(DomainError):
        CslParameters(lam, r_c)


def test_reference_mass():
    body = RigidBody.reference_sphere()
    assert body_mass(body) == pytest.approx(1.275e-15, rel=0.01)
    assert body.mass / AMU == pytest.approx(7.7e11, rel=0.01)


def test_cube_mass_and_scaling():
    cube = RigidBody(Shape.CUBE, 1.0, density=1.0)
    assert body_mass(cube) == 8.0
    s = RigidBody(Shape.SPHERE, 1e-6)
    assert s.with_size(2e-6).mass == pytest.approx(8 * s.mass, rel=1e-15)


@pytest.mark.parametrize(
    "kwargs", [dict(L=0.0), dict(L=-1e-6), dict(L=1e-6, density=0.0), dict(L=1e-6, magnetic_moment=-1.0)]
)
def test_rigid_body_invariants(kwargs):
    with pytest.raises(DomainError):
        RigidBody(Shape.SPHERE, **kwargs)
