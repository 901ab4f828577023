import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from relmaser import _kernels
from relmaser.errors import DomainError
from relmaser.occupation import (
    BathParams,
    directional_temperature,
    effective_temperature,
    planck_occupation,
    relativistic_occupation,
    solid_angle_average_factor,
    u_over_sinh,
)

omegas = st.floats(0.01, 10.0)
betas = st.floats(0.01, 10.0)


def occ(omega, beta, u):
    return relativistic_occupation(omega, BathParams(beta, u))


# --------------------------------------------------------------------- Planck


def test_planck_unit_point():
    assert planck_occupation(1.0, 1.0) == pytest.approx(0.5819767068693264, rel=1e-15)


def test_planck_high_temperature():
    assert planck_occupation(1.0, 1e-8) == pytest.approx(1e8, rel=1e-6)


def test_planck_deep_quantum():
    assert planck_occupation(10.0, 10.0) == pytest.approx(math.exp(-100.0), rel=1e-13)


def test_planck_beyond_overflow_threshold():
    assert planck_occupation(800.0, 1.0) == 0.0 or planck_occupation(800.0, 1.0) == pytest.approx(math.exp(-800))
    assert planck_occupation(701.0, 1.0) == pytest.approx(math.exp(-701.0), rel=1e-14)


@pytest.mark.parametrize("omega,beta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0), (math.nan, 1.0)])
def test_planck_domain(omega, beta):
    with pytest.raises(DomainError):
        planck_occupation(omega, beta)


@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.3, 0.69, 0.7, 1.0, 5.0, 50.0, 300.0])
def test_planck_against_mpmath(x):
    assert _kernels.planck(x) == pytest.approx(float(oracles.planck(x)), rel=2e-15)


# ----------------------------------------------------------- moving bath


def test_small_rapidity_is_planck():
    assert occ(1.0, 1.0, 1e-9) == pytest.approx(planck_occupation(1.0, 1.0), rel=1e-9)


def test_hot_moving_bath_value():
    # Frozen from the 50-digit evaluation of the closed form.
    assert occ(1.0, 0.01, 1.0) == pytest.approx(84.593098716398244, rel=1e-13)


def test_hot_moving_bath_leading_order():
    # Stated tolerance is 0.5%; the true gap to the leading term is 0.59%
    # because the next term, -1/2, is not included.
    assert occ(1.0, 0.01, 1.0) == pytest.approx(1.0 / (0.01 * math.sinh(1.0)), rel=5e-3)


def test_hot_moving_bath_series():
    # Two-term high-temperature series u/(x sinh u) - 1/2.
    lead = 1.0 / (0.01 * math.sinh(1.0))
    assert lead == pytest.approx(85.0918128239, rel=1e-10)
    assert occ(1.0, 0.01, 1.0) == pytest.approx(lead - 0.5, rel=5e-3)


def test_even_in_rapidity_example():
    assert occ(1.0, 1.0, -2.0) == occ(1.0, 1.0, 2.0)


@pytest.mark.parametrize("x", [1e-4, 0.01, 0.5, 1.0, 7.0, 40.0])
@pytest.mark.parametrize("u", [2e-7, 9.99e-7, 1.001e-6, 1e-5, 9.99e-4, 1.001e-3, 0.01, 0.3, 1.0, 3.0, 8.0])
def test_against_mpmath(x, u):
    got = _kernels.rel_occupation(x, u)
    want = float(oracles.rel_occupation(x, u))
    # Planck branch below 1e-6 carries a relative error up to (x u)^2/6.
    tol = max(1e-11, (x * u) ** 2) if abs(u) < _kernels.U_PLANCK else 1e-11
    assert got == pytest.approx(want, rel=tol)


@pytest.mark.parametrize("threshold", [_kernels.U_PLANCK, _kernels.U_SERIES])
@pytest.mark.parametrize("x", [1e-3, 0.2, 0.9])
def test_continuity_across_switchovers(threshold, x):
    below = _kernels.rel_occupation(x, threshold * (1 - 1e-9))
    above = _kernels.rel_occupation(x, threshold * (1 + 1e-9))
    assert below == pytest.approx(above, rel=1e-11)


def test_large_argument_is_overflow_safe():
    # x e^|u| far beyond the exp overflow point of e^{-x}.
    val = _kernels.rel_occupation(5.0, 5.0)
    assert val == pytest.approx(float(oracles.rel_occupation(5.0, 5.0)), rel=1e-12)
    assert val > 0


def test_domain_errors():
    with pytest.raises(DomainError):
        relativistic_occupation(0.0, BathParams(1.0))
    with pytest.raises(DomainError):
        BathParams(-1.0)
    with pytest.raises(DomainError):
        BathParams(1.0, gamma=0.0)
    with pytest.raises(DomainError):
        BathParams(1.0, u=math.inf)


def test_bath_params_helpers():
    b = BathParams.from_temperature(4.0, u=0.5)
    assert b.beta == 0.25 and b.temperature == 4.0
    assert b.velocity == pytest.approx(math.tanh(0.5))
    assert abs(BathParams(1.0, u=30.0).velocity) <= 1.0


@settings(max_examples=300, deadline=None)
@given(omegas, betas, st.floats(1e-8, 1e-4))
def test_continuity_at_rest(omega, beta, eps):
    n0 = planck_occupation(omega, beta)
    assert abs(occ(omega, beta, eps) - n0) / n0 <= 10 * eps


@settings(max_examples=300, deadline=None)
@given(omegas, betas, st.floats(-4.0, 4.0))
def test_even_in_u(omega, beta, u):
    assert occ(omega, beta, u) == occ(omega, beta, -u)


@settings(max_examples=300, deadline=None)
@given(omegas, betas, st.floats(0.0, 4.0), st.floats(1.001, 3.0))
def test_decreasing_in_omega(omega, beta, u, factor):
    assert occ(omega * factor, beta, u) < occ(omega, beta, u)


@settings(max_examples=300, deadline=None)
@given(omegas, betas, st.floats(0.0, 4.0), st.floats(0.01, 1.0))
def test_decreasing_in_abs_u(omega, beta, u, du):
    # Stated over the full (omega, beta) box. Fails once beta*omega exceeds
    # the root of x coth(x/2) = 3, where the blue-shifted forward half wins.
    assert occ(omega, beta, u + du) < occ(omega, beta, u)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, 2.5), st.floats(0.0, 6.0), st.floats(0.01, 1.0))
def test_decreasing_in_abs_u_below_crossover(x, u, du):
    assert _kernels.rel_occupation(x, u + du) < _kernels.rel_occupation(x, u)


def test_crossover_point():
    # Small-u curvature of N changes sign where x coth(x/2) = 3.
    x0 = float(mp.findroot(lambda x: x * mp.coth(x / 2) - 3, 2.5))
    assert x0 == pytest.approx(2.5756789099, abs=1e-9)
    below, above = x0 - 0.05, x0 + 0.05
    assert _kernels.rel_occupation(below, 0.1) < _kernels.rel_occupation(below, 0.0)
    assert _kernels.rel_occupation(above, 0.1) > _kernels.rel_occupation(above, 0.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 1e-3), st.floats(0.0, 3.0))
def test_high_temperature_law(x, u):
    lead = float(oracles.u_over_sinh(u)) / x
    assert _kernels.rel_occupation(x, u) == pytest.approx(lead, rel=1e-2)


def test_strictly_positive_on_grid():
    x = np.geomspace(1e-4, 100, 60)
    u = np.linspace(-3, 3, 61)
    vals = _kernels.occupation_array(*np.meshgrid(x, u))
    assert (vals > 0).all()


# ------------------------------------------------------ effective temperature


def test_effective_temperature_examples():
    assert effective_temperature(300.0, 0.0) == 300.0
    assert effective_temperature(1.0, 1.0) == pytest.approx(0.8509181282393216, rel=1e-14)
    assert effective_temperature(1.0, -1.0) == effective_temperature(1.0, 1.0)
    with pytest.raises(DomainError):
        effective_temperature(0.0, 1.0)


@pytest.mark.parametrize("u", [1e-9, 5e-5, 9.9e-5, 1.01e-4, 0.01, 2.0])
def test_u_over_sinh_against_mpmath(u):
    assert u_over_sinh(u) == pytest.approx(float(oracles.u_over_sinh(u)), rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.01, 1.0))
def test_effective_temperature_decreasing(u, du):
    assert effective_temperature(1.0, u + du) < effective_temperature(1.0, u)


@pytest.mark.parametrize("u", [-2.0, 0.0, 0.7, 3.0])
def test_directional_side_on(u):
    assert directional_temperature(1.0, math.pi / 2, u) == pytest.approx(1.0 / math.cosh(u), rel=1e-15)


def test_directional_examples():
    assert directional_temperature(1.0, 0.0, 1.0) == pytest.approx(math.e, rel=1e-14)
    assert directional_temperature(5.0, math.pi, 0.0) == 5.0
    with pytest.raises(DomainError):
        directional_temperature(1.0, -0.1, 1.0)
    with pytest.raises(DomainError):
        directional_temperature(1.0, 4.0, 1.0)
    with pytest.raises(DomainError):
        directional_temperature(-1.0, 1.0, 1.0)


@pytest.mark.parametrize(
    "u,analytic",
    [(1.0, 1.3130352854993313), (3.0, 3.0149094699410675), (0.1, 0.1 / math.tanh(0.1)), (-1.0, 1.3130352854993313)],
)
def test_solid_angle_average(u, analytic):
    assert solid_angle_average_factor(u) == pytest.approx(analytic, abs=1e-10)


def test_solid_angle_average_at_rest():
    assert solid_angle_average_factor(0.0) == 1.0


@pytest.mark.parametrize("u", [0.05, 0.5, 1.0, 2.0, 3.0])
def test_directional_average_is_effective_temperature(u):
    avg = solid_angle_average_factor(u) / math.cosh(u)
    assert avg == pytest.approx(effective_temperature(1.0, u), abs=1e-10)
    # same average done directly over the directional temperature
    direct = 0.5 * mp.quad(lambda th: mp.sin(th) * directional_temperature(1.0, float(th), u), [0, mp.pi])
    assert float(direct) == pytest.approx(u / math.sinh(u), abs=1e-10)
