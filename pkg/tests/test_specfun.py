from pathlib import Path
import math
import sys

import pytest
from scipy.special import erfcx

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.errors import ConvergenceError, DivergenceError, DomainError, PoleError
from src.potential.green import time_integral_numeric
from src.process.params import ModelParams
from src.special.constants import green_constant, time_kernel_constant
from src.special.specfun import (
    gamma,
    m_wright,
    m_wright_expectation,
    m_wright_moment,
    m_wright_range,
    m_wright_series_mp,
    m_wright_tail_bound,
    mittag_leffler,
)

SQRT_PI = math.sqrt(math.pi)


def test_gamma_values_and_poles():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-15)
    assert gamma(0.5) == pytest.approx(SQRT_PI, rel=1e-14)
    assert gamma(1.0 / 3.0) == pytest.approx(2.678938534707747, rel=1e-12)
    assert gamma(-0.5) == pytest.approx(-2.0 * SQRT_PI, rel=1e-13)
    for x in (0.0, -1.0, -2.0):
        with pytest.raises(PoleError):
            gamma(x)


def test_mittag_leffler_closed_forms():
    assert mittag_leffler(0.7, 0.0).value == 1.0
    assert mittag_leffler(1.0, -1.0).value == pytest.approx(0.3678794412, abs=1e-10)
    assert mittag_leffler(0.5, -1.0).value == pytest.approx(0.4275835762, abs=1e-10)
    # series branch and integral branch against exp(x^2) erfc(x)
    for x in (0.2, 1.0, 3.0, 10.0, 40.0):
        res = mittag_leffler(0.5, -x)
        assert res.value == pytest.approx(float(erfcx(x)), abs=1e-10)
        assert res.est_abs_error >= 0.0


def test_mittag_leffler_decreasing_and_bounded():
    for beta in (0.3, 0.6, 0.9):
        vals = [mittag_leffler(beta, -0.5 * k).value for k in range(0, 101)]
        assert all(0.0 < v <= 1.0 for v in vals)
        assert all(b < a for a, b in zip(vals, vals[1:]))


def test_mittag_leffler_large_argument():
    for beta in (0.3, 0.9):
        value = mittag_leffler(beta, -10.5).value
        laplace, _ = m_wright_expectation(beta, lambda tau: math.exp(-10.5 * tau))
        assert value == pytest.approx(laplace, abs=1e-8)
        # E_beta(-x) ~ 1 / (x Gamma(1 - beta)) for large x
        assert mittag_leffler(beta, -1e4).value == pytest.approx(1e-4 / math.gamma(1.0 - beta), rel=1e-3)


def test_mittag_leffler_rejects_positive_argument():
    with pytest.raises(DomainError):
        mittag_leffler(0.5, 0.1)
    with pytest.raises(DomainError):
        mittag_leffler(1.5, -1.0)


def test_m_wright_values():
    assert m_wright(0.5, 0.0).value == pytest.approx(1.0 / SQRT_PI, rel=1e-12)
    assert m_wright(0.5, 2.0).value == pytest.approx(math.exp(-1.0) / SQRT_PI, rel=1e-10)
    assert m_wright(0.3, 0.0).value == pytest.approx(1.0 / math.gamma(0.7), rel=1e-12)
    # far tail of the half Gaussian, from the angular integral
    assert m_wright(0.5, 8.0).value == pytest.approx(math.exp(-16.0) / SQRT_PI, rel=1e-9)
    assert m_wright(0.5, 40.0).value == pytest.approx(math.exp(-400.0) / SQRT_PI, rel=1e-8)


def test_m_wright_matches_extended_precision_series():
    for beta in (0.3, 0.5, 0.7):
        for tau in (0.5, 1.5, 2.0, 4.0):
            assert m_wright(beta, tau).value == pytest.approx(m_wright_series_mp(beta, tau), rel=1e-9)


def test_m_wright_continuous_where_the_method_switches():
    for beta in (0.2, 0.6, 0.9):
        below = m_wright(beta, 1.0).value
        above = m_wright(beta, 1.0 + 1e-10).value
        assert above == pytest.approx(below, rel=1e-8)


def test_m_wright_close_to_brownian():
    for beta in (0.85, 0.9, 0.95):
        assert m_wright_range(beta) > 1.5
        assert m_wright(beta, 0.5).value > 0.0
        mass, _ = m_wright_expectation(beta, lambda tau: 1.0)
        assert mass == pytest.approx(1.0, rel=1e-8)
        mean, _ = m_wright_expectation(beta, lambda tau: tau)
        assert mean == pytest.approx(m_wright_moment(beta, 1.0), rel=1e-7)
        inverse, _ = m_wright_expectation(beta, lambda tau: 1.0, delta=-0.5)
        assert inverse == pytest.approx(m_wright_moment(beta, -0.5), rel=1e-7)


def test_m_wright_refuses_outside_reliable_range():
    t_max = m_wright_range(0.5)
    assert t_max == pytest.approx(math.sqrt(4.0 * 690.0), rel=1e-12)
    with pytest.raises(ConvergenceError):
        m_wright(0.5, 2.0 * t_max)
    with pytest.raises(DomainError):
        m_wright(1.0, 1.0)


def test_m_wright_moments():
    assert m_wright_moment(0.5, 1.0) == pytest.approx(2.0 / SQRT_PI, rel=1e-12)
    assert m_wright_moment(0.3, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert m_wright_moment(1.0, 2.0) == 1.0
    with pytest.raises(DivergenceError):
        m_wright_moment(0.5, -1.0)


def test_laplace_identity_by_quadrature():
    for beta in (0.3, 0.5, 0.7):
        for s in (0.1, 1.0, 5.0):
            value, err = m_wright_expectation(beta, lambda tau, s=s: math.exp(-s * tau))
            assert value == pytest.approx(mittag_leffler(beta, -s).value, abs=1e-6)
            assert err < 1e-6


def test_moment_identity_by_quadrature():
    for beta in (0.3, 0.5, 0.7):
        for delta in (-0.6, 0.5, 1.0, 2.0):
            value, _ = m_wright_expectation(beta, lambda tau: 1.0, delta=delta)
            assert value == pytest.approx(m_wright_moment(beta, delta), rel=1e-6)


def test_tail_bound_is_a_bound():
    beta = 0.5
    # P(Y > T) for M_1/2 is erfc(T/2)
    for T in (1.0, 3.0, 6.0):
        exact = math.erfc(T / 2.0)
        assert exact <= m_wright_tail_bound(beta, T) + 1e-300
    assert m_wright_tail_bound(1.0, 2.0) == 0.0
    assert m_wright_tail_bound(1.0, 0.5) == 1.0


def test_time_kernel_constant():
    assert time_kernel_constant(1.0, 3) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-12)
    assert time_kernel_constant(2.0, 2) == pytest.approx(2.0**-1.5 / SQRT_PI, rel=1e-12)
    expected = (2.0 / 3.0) * 2.0 ** (-2.0 / 3.0) / math.pi * math.gamma(1.0 / 3.0)
    assert time_kernel_constant(1.5, 2) == pytest.approx(expected, rel=1e-12)
    assert time_kernel_constant(1.5, 2) == pytest.approx(time_integral_numeric(1.5, 2, 1.0, 1.0), rel=1e-8)
    with pytest.raises(DomainError, match="requires d\\*alpha > 2"):
        time_kernel_constant(1.0, 2)


def test_green_constant():
    assert green_constant(ModelParams(1.0, 1.0, 3)) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-12)
    assert green_constant(ModelParams(0.5, 1.5, 2)) == pytest.approx(0.7085, abs=5e-4)
    for beta, alpha, d in ((0.5, 1.5, 2), (0.8, 1.2, 3), (0.9, 2.0, 2)):
        D = green_constant(ModelParams(beta, alpha, d))
        assert D == time_kernel_constant(alpha, d) * m_wright_moment(beta, -1.0 / alpha)
    with pytest.raises(DomainError, match="alpha > 1"):
        green_constant(ModelParams(0.5, 1.0, 3))
    with pytest.raises(DomainError, match="d\\*alpha > 2"):
        green_constant(ModelParams(0.5, 1.5, 1))
