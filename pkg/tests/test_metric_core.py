"""Unit tests for the scalar hyperbolic kernel.

Expected values are frozen from a 40-digit mpmath oracle; the oracle formulas
are recomputed here where cheap so the frozen literals stay honest.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmetric import (
    DomainError,
    atanh_derivative,
    atanh_second_derivative,
    atanh_stable,
    convexity_margin,
    mobius_centering,
    poincare_distance,
    poincare_distance_many,
)

mp.mp.dps = 40

# mpmath oracle values, frozen as the nearest doubles
ATANH_HALF = 0.5493061443340549  # atanh(0.5) = ln(3)/2
TWO_ATANH_HALF = 1.0986122886681098  # ln(3)
OMEGA_03_06 = 0.3836275763568336  # atanh(0.3 / 0.82)
MARGIN_05_1 = 0.09900841857299313  # 0.5 - atanh(0.5 * tanh(1))


def mp_omega(z, w):
    z, w = mp.mpc(z), mp.mpc(w)
    return float(mp.atanh(abs((z - w) / (1 - mp.conj(w) * z))))


# -- atanh_stable --------------------------------------------------------------


def test_atanh_zero_is_exact():
    assert atanh_stable(0.0) == 0.0


def test_atanh_half_matches_oracle():
    assert float(mp.atanh(mp.mpf("0.5"))) == ATANH_HALF
    assert atanh_stable(0.5) == pytest.approx(ATANH_HALF, rel=1e-15)


def test_atanh_double_angle_point():
    # 2r/(1 + r^2) at r = 0.5 is exactly 0.8
    assert atanh_stable(0.8) == pytest.approx(2 * atanh_stable(0.5), rel=1e-14)
    assert atanh_stable(0.8) == pytest.approx(TWO_ATANH_HALF, rel=1e-15)


def test_atanh_strictly_increasing():
    xs = np.linspace(0.0, 0.999, 200)
    vals = [atanh_stable(x) for x in xs]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_atanh_against_high_precision_oracle():
    rng = np.random.default_rng(11)
    for x in rng.random(300) * 0.999999:
        assert atanh_stable(x) == pytest.approx(float(mp.atanh(mp.mpf(x))), rel=1e-14, abs=1e-300)


@pytest.mark.parametrize("bad", [-1e-12, -0.5, 1.0, 1.5, 1 - 1e-16, float("nan"), float("inf")])
def test_atanh_rejects_out_of_domain(bad):
    with pytest.raises(DomainError):
        atanh_stable(bad)


@given(st.floats(min_value=0.0, max_value=0.99))
def test_double_angle_identity(r):
    lhs = atanh_stable(2 * r / (1 + r * r))
    assert lhs == pytest.approx(2 * atanh_stable(r), abs=1e-12)


# -- poincare_distance ---------------------------------------------------------


def test_distance_identical_points_is_zero():
    assert poincare_distance(0.3 + 0.4j, 0.3 + 0.4j) == 0.0
    assert poincare_distance(0, 0) == 0.0


def test_distance_from_origin_reduces_to_atanh():
    assert poincare_distance(0, 0.5) == pytest.approx(ATANH_HALF, rel=1e-15)


def test_distance_real_pair_matches_oracle():
    # |z - w| / |1 - wz| = 0.3 / 0.82 for the pair (0.3, 0.6)
    assert float(mp.atanh(mp.mpf("0.3") / mp.mpf("0.82"))) == OMEGA_03_06
    assert poincare_distance(0.3, 0.6) == pytest.approx(OMEGA_03_06, rel=1e-14)


def test_distance_matches_oracle_on_random_pairs():
    rng = np.random.default_rng(3)
    for _ in range(200):
        z = complex(*rng.uniform(-0.68, 0.68, 2))
        w = complex(*rng.uniform(-0.68, 0.68, 2))
        assert poincare_distance(z, w) == pytest.approx(mp_omega(z, w), rel=1e-13, abs=1e-300)


complex_in_disk = st.builds(
    complex,
    st.floats(min_value=-0.7, max_value=0.7),
    st.floats(min_value=-0.7, max_value=0.7),
)


@given(complex_in_disk, complex_in_disk)
def test_distance_symmetry_is_bit_exact(z, w):
    assert poincare_distance(z, w) == poincare_distance(w, z)


@given(complex_in_disk, complex_in_disk)
def test_distance_nonnegative_and_separating(z, w):
    d = poincare_distance(z, w)
    assert d >= 0.0
    if abs(z.real - w.real) > 2e-15 or abs(z.imag - w.imag) > 2e-15:
        assert d > 0.0


def test_triangle_inequality_on_sampled_triples():
    rng = np.random.default_rng(17)
    for _ in range(500):
        z, w, v = (complex(*rng.uniform(-0.69, 0.69, 2)) for _ in range(3))
        assert poincare_distance(z, w) <= (
            poincare_distance(z, v) + poincare_distance(v, w) + 1e-12
        )


@pytest.mark.parametrize("bad", [1.0, -1.0, 1 + 0j, 0.8 + 0.7j, complex("nan"), 2.0])
def test_distance_rejects_points_outside_open_disk(bad):
    with pytest.raises(DomainError):
        poincare_distance(bad, 0.1)
    with pytest.raises(DomainError):
        poincare_distance(0.1, bad)


def test_many_matches_scalar_to_rounding():
    rng = np.random.default_rng(23)
    zs = (rng.uniform(-0.6, 0.6, 50) + 1j * rng.uniform(-0.6, 0.6, 50)).astype(complex)
    ws = (rng.uniform(-0.6, 0.6, 50) + 1j * rng.uniform(-0.6, 0.6, 50)).astype(complex)
    vec = poincare_distance_many(zs, ws)
    for i in range(50):
        scalar = poincare_distance(complex(zs[i]), complex(ws[i]))
        assert vec[i] == pytest.approx(scalar, rel=1e-15, abs=1e-300)


# -- mobius_centering ----------------------------------------------------------


def test_centering_at_zero_is_identity():
    m = mobius_centering(0)
    for z in (0.1, -0.4 + 0.2j, 0.7j):
        assert m.evaluate((z,))[0] == z


def test_centering_sends_parameter_to_origin():
    m = mobius_centering(0.5)
    assert m.evaluate((0.5,))[0] == 0.0
    assert m.evaluate((0.0,))[0] == -0.5


def test_centering_preserves_distance_example():
    assert poincare_distance(0, 0.5) == pytest.approx(
        poincare_distance(-0.5, 0), rel=1e-12
    )


def test_centering_is_an_isometry():
    rng = np.random.default_rng(29)
    for _ in range(200):
        a, z, w = (0.95 * complex(*rng.uniform(-0.7, 0.7, 2)) for _ in range(3))
        m = mobius_centering(a)
        mz = m.evaluate((z,))[0]
        mw = m.evaluate((w,))[0]
        d0 = poincare_distance(z, w)
        assert poincare_distance(mz, mw) == pytest.approx(d0, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("bad", [1.0, -1.0, 1.2 + 0.3j, complex("inf")])
def test_centering_rejects_parameters_outside_disk(bad):
    with pytest.raises(DomainError):
        mobius_centering(bad)


# -- convexity_margin ----------------------------------------------------------


def test_margin_vanishes_on_axes():
    assert convexity_margin(0.0, 5.0) == 0.0
    assert convexity_margin(0.7, 0.0) == 0.0


def test_margin_frozen_value():
    assert float(mp.mpf("0.5") - mp.atanh(mp.mpf("0.5") * mp.tanh(1))) == MARGIN_05_1
    assert convexity_margin(0.5, 1.0) == pytest.approx(MARGIN_05_1, rel=1e-14)


@settings(max_examples=300)
@given(
    st.floats(min_value=0.0, max_value=1 - 1e-6),
    st.floats(min_value=0.0, max_value=20.0),
)
def test_margin_is_nonnegative(r, x):
    assert convexity_margin(r, x) >= -1e-12


def test_margin_grid_is_nonnegative():
    for r in np.linspace(0.0, 1 - 1e-6, 101):
        for x in np.linspace(0.0, 20.0, 41):
            assert convexity_margin(float(r), float(x)) >= -1e-12


@pytest.mark.parametrize("x", [0.5, 2.0, 10.0])
def test_chord_slope_monotone_in_r(x):
    # atanh(r tanh x) / r is nondecreasing in r: the convexity behind the margin
    rs = np.linspace(1e-6, 1 - 1e-6, 400)
    vals = [atanh_stable(float(r) * math.tanh(x)) / float(r) for r in rs]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize(
    "r, x", [(1.0, 1.0), (-0.1, 1.0), (0.5, -1.0), (float("nan"), 1.0), (0.5, float("inf"))]
)
def test_margin_rejects_out_of_domain(r, x):
    with pytest.raises(DomainError):
        convexity_margin(r, x)


# -- derivatives ---------------------------------------------------------------


def _fd_first(f, x, h=1e-4):
    # five-point central stencil, O(h^4)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def _fd_second(f, x, h=1e-4):
    # five-point central stencil, O(h^4)
    return (
        -f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)
    ) / (12 * h * h)


def test_second_derivative_value_at_half():
    # 2 * 0.5 / (1 - 0.25)^2 = 1 / 0.5625
    assert atanh_second_derivative(0.5) == pytest.approx(1.0 / 0.5625, rel=1e-15)


def test_second_derivative_vanishes_at_origin_limit():
    assert atanh_second_derivative(1e-12) == pytest.approx(2e-12, rel=1e-12)


def test_second_derivative_positive_on_open_interval():
    for x in np.linspace(1e-6, 1 - 1e-6, 200):
        assert atanh_second_derivative(float(x)) > 0.0


def test_first_derivative_matches_finite_differences():
    for x in np.linspace(0.01, 0.95, 95):
        x = float(x)
        fd = _fd_first(lambda t: atanh_stable(t), x)
        assert atanh_derivative(x) == pytest.approx(fd, rel=1e-6)


def test_second_derivative_matches_finite_differences():
    for x in np.linspace(0.01, 0.95, 95):
        x = float(x)
        fd = _fd_second(lambda t: atanh_stable(t), x)
        assert atanh_second_derivative(x) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.5, float("nan")])
def test_second_derivative_rejects_out_of_domain(bad):
    with pytest.raises(DomainError):
        atanh_second_derivative(bad)


@pytest.mark.parametrize("bad", [1.0, -0.5, float("nan")])
def test_first_derivative_rejects_out_of_domain(bad):
    with pytest.raises(DomainError):
        atanh_derivative(bad)
