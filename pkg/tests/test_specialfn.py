import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from rissnr.specialfn import (
    cross_moment_term,
    gamma_fn,
    hyp2f1_direct,
    reg_lower_incomplete_gamma,
)

from conftest import bivariate_abs_product

# pi/4 * 2F1(-1/2,-1/2;1;x) at 30 digits (mpmath)
FROZEN_CROSS = {
    0.25: 0.83530582628470364,
    0.49: 0.88500916598640097,
    0.81: 0.95504488463145098,
    0.9025: 0.97645860074903166,
}


def test_cross_moment_endpoints():
    assert cross_moment_term(0.0) == pytest.approx(math.pi / 4, abs=1e-15)
    assert cross_moment_term(1.0) == 1.0


@pytest.mark.parametrize("x, expected", sorted(FROZEN_CROSS.items()))
def test_cross_moment_frozen(x, expected):
    assert cross_moment_term(x) == pytest.approx(expected, abs=1e-14)


def test_cross_moment_against_mpmath_grid():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    for x in np.linspace(0.0, 1.0, 101):
        ref = float(mpmath.pi / 4 * mpmath.hyp2f1(-0.5, -0.5, 1, x))
        assert abs(cross_moment_term(x) - ref) <= 1e-12


def test_cross_moment_mc_oracle_at_049():
    mean, se = bivariate_abs_product(0.7, 10_000_000, seed=11)
    assert abs(cross_moment_term(0.49) - mean) <= 3 * se


@pytest.mark.parametrize("x", np.linspace(0.0, 0.9, 19))
def test_transformed_series_matches_defining_series(x):
    direct = math.pi / 4 * (1 - x) ** 2 * hyp2f1_direct(1.5, 1.5, 1.0, x)
    assert cross_moment_term(x) == pytest.approx(direct, abs=1e-9)


def test_cross_moment_monotone_and_bounded():
    values = np.array([cross_moment_term(x) for x in np.linspace(0, 1, 1000)])
    assert np.all(np.diff(values) >= 0)
    assert values.min() >= math.pi / 4 - 1e-15
    assert values.max() <= 1.0


def test_cross_moment_near_switch_is_continuous():
    eps = 1e-9
    assert cross_moment_term(0.5 - eps) == pytest.approx(cross_moment_term(0.5 + eps), abs=1e-9)


def test_cross_moment_clamps_and_rejects():
    assert cross_moment_term(1 + 5e-13) == 1.0
    assert cross_moment_term(-5e-13) == pytest.approx(math.pi / 4)
    with pytest.raises(ValueError):
        cross_moment_term(1.001)
    with pytest.raises(ValueError):
        cross_moment_term(-0.01)
    with pytest.raises(ValueError):
        cross_moment_term(float("nan"))


@pytest.mark.parametrize("z, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi)), (5.0, 24.0)])
def test_gamma_fn(z, expected):
    assert gamma_fn(z) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5])
def test_gamma_fn_domain(z):
    with pytest.raises(ValueError):
        gamma_fn(z)


def test_incomplete_gamma_trivial():
    assert reg_lower_incomplete_gamma(1.0, 0.0) == 0.0
    assert reg_lower_incomplete_gamma(1.0, math.log(2)) == pytest.approx(0.5, abs=1e-14)


def test_incomplete_gamma_quadrature_oracle():
    shape, x = 2.5, 2.5
    integral, _ = integrate.quad(lambda t: t ** (shape - 1) * math.exp(-t), 0, x, epsabs=1e-14)
    assert reg_lower_incomplete_gamma(shape, x) == pytest.approx(integral / math.gamma(shape), abs=1e-8)
    assert reg_lower_incomplete_gamma(shape, x) == pytest.approx(0.58411981300449208, abs=1e-14)


@given(st.floats(0.05, 200.0), st.floats(0.0, 400.0))
def test_incomplete_gamma_vs_scipy(shape, x):
    assert reg_lower_incomplete_gamma(shape, x) == pytest.approx(special.gammainc(shape, x), abs=1e-10)


@given(st.floats(0.1, 80.0))
def test_incomplete_gamma_is_cdf(shape):
    xs = np.linspace(0, shape + 40 * math.sqrt(shape) + 40, 300)
    vals = [reg_lower_incomplete_gamma(shape, x) for x in xs]
    assert vals[0] == 0.0
    assert np.all(np.diff(vals) >= -1e-15)
    assert vals[-1] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("shape, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5), (1.0, float("nan"))])
def test_incomplete_gamma_domain(shape, x):
    with pytest.raises(ValueError):
        reg_lower_incomplete_gamma(shape, x)
