from pathlib import Path
import math
import sys

import numpy as np
import pytest
from scipy import integrate

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.errors import DomainError, SingularityError
from src.potential import testfunctions
from src.potential.green import (
    continuity_constant,
    green_density,
    green_density_at,
    green_measure_of_ball,
    potential,
    time_integral_kernel,
    time_integral_numeric,
)
from src.potential.quadrature import RadialPotentialSpec, sphere_area, sphere_rule
from src.process.params import ModelParams
from src.special.constants import green_constant, time_kernel_constant

TRIPLES = [(0.5, 1.5, 3), (0.8, 1.2, 2), (0.9, 2.0, 2)]


def gaussian_potential(gd, sigma=1.0):
    alpha, d = gd.params.alpha, gd.d
    return gd.D * sphere_area(d) * 2.0 ** (1.0 / alpha - 1.0) * math.gamma(1.0 / alpha) * sigma ** (2.0 / alpha)


def test_quadrature_rules_integrate_constants():
    for d in (2, 3, 4):
        pts, w = sphere_rule(d, 8)
        assert np.sum(w) == pytest.approx(sphere_area(d), rel=1e-12)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    # second moment of a coordinate: |S^{d-1}| / d
    pts, w = sphere_rule(3, 8)
    assert w @ pts[:, 0] ** 2 == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)


def test_green_density_values():
    gd = green_density(ModelParams(1.0, 1.0, 3))
    assert green_density_at(gd, [0, 0, 0], [1, 0, 0]) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-12)
    for triple in TRIPLES:
        gd = green_density(ModelParams(*triple))
        assert gd.D == green_constant(gd.params)
        y = np.zeros(gd.d)
        y[0] = 1.0
        assert green_density_at(gd, np.zeros(gd.d), y) == gd.D
        assert 0.0 < gd.exponent < gd.d
    gd = green_density(ModelParams(0.5, 2.0, 2))
    assert gd.exponent == 1.0
    assert green_density_at(gd, [0, 0], [0, 4]) == pytest.approx(gd.D / 4.0, rel=1e-14)
    with pytest.raises(SingularityError):
        green_density_at(gd, [1, 1], [1, 1])
    with pytest.raises(DomainError, match="alpha > 1"):
        green_density(ModelParams(0.5, 1.0, 3))


def test_time_integral_kernel_identity():
    assert time_integral_kernel(1.0, 3, 1.0, 1.0) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-12)
    assert time_integral_kernel(1.5, 2, 2.0, 1.0) == pytest.approx(time_kernel_constant(1.5, 2) * 2.0 ** (-2.0 / 3.0))
    for alpha, d in ((1.2, 2), (1.5, 2), (2.0, 2), (1.1, 3), (1.8, 3), (1.0, 3)):
        for tau in (0.3, 1.0, 2.0):
            for r in (0.5, 1.0, 3.0):
                closed = time_integral_kernel(alpha, d, tau, r)
                assert time_integral_numeric(alpha, d, tau, r) == pytest.approx(closed, rel=1e-8)
                assert closed == pytest.approx(time_integral_kernel(alpha, d, 1.0, r) * tau ** (-1.0 / alpha), rel=1e-13)
    with pytest.raises(DomainError):
        time_integral_kernel(1.0, 2, 1.0, 1.0)


@pytest.mark.parametrize("triple", TRIPLES)
def test_potential_of_gaussian_at_center(triple):
    gd = green_density(ModelParams(*triple))
    f = testfunctions.gaussian(gd.d)
    v = potential(gd, f, np.zeros(gd.d))
    assert v.method == "radial"
    assert v.value == pytest.approx(gaussian_potential(gd), rel=1e-8)
    assert v.tail_bound <= 1e-10
    wide = potential(gd, testfunctions.gaussian(gd.d, sigma=2.5), np.zeros(gd.d))
    assert wide.value == pytest.approx(gaussian_potential(gd, 2.5), rel=1e-8)


def test_off_center_rules_agree():
    gd = green_density(ModelParams(0.5, 1.5, 3))
    f = testfunctions.gaussian(3, center=[0.8, -0.3, 0.2])
    general = testfunctions.custom(3, f.eval, f.sup_norm, f.l1_norm, center=f.center, tail=f.tail)
    x = np.array([0.1, 0.2, -0.4])
    axi = potential(gd, f, x)
    sph = potential(gd, general, x, RadialPotentialSpec(n_polar=32))
    assert axi.method == "axisymmetric"
    assert sph.method == "spherical"
    assert axi.value == pytest.approx(sph.value, rel=1e-6)


def test_translation_invariance():
    gd = green_density(ModelParams(0.8, 1.2, 2))
    f = testfunctions.gaussian(2, sigma=0.7, center=[0.4, 0.0])
    h = np.array([1.5, -2.0])
    x = np.array([0.3, 0.9])
    a = potential(gd, f, x).value
    b = potential(gd, f.shifted(h), x - h).value
    assert b == pytest.approx(a, rel=1e-10)


def test_positivity_and_decay():
    gd = green_density(ModelParams(0.5, 1.5, 3))
    near = potential(gd, testfunctions.bump(3), np.zeros(3)).value
    assert near > 0.0
    values = []
    for dist in (5.0, 20.0, 80.0):
        v = potential(gd, testfunctions.bump(3, center=[dist, 0.0, 0.0]), np.zeros(3)).value
        assert v >= 0.0
        values.append(v)
    assert values[0] > values[1] > values[2]
    assert values[2] < 1e-2 * near


def test_continuity_bound_over_gaussian_family():
    for triple in TRIPLES:
        gd = green_density(ModelParams(*triple))
        K = continuity_constant(gd)
        for sigma in np.logspace(-1.0, 1.0, 10):
            f = testfunctions.gaussian(gd.d, sigma=float(sigma))
            v = potential(gd, f, np.zeros(gd.d))
            assert v.continuity_constant == K
            assert abs(v.value) <= v.continuity_bound(f)


def test_ball_measure_at_center():
    gd = green_density(ModelParams(1.0, 1.0, 3))
    assert green_measure_of_ball(gd, [0, 0, 0], [0, 0, 0], 1.0) == pytest.approx(1.0, rel=1e-12)
    assert green_measure_of_ball(gd, [0, 0, 0], [0, 0, 0], 1e-6) < 1e-5
    gd = green_density(ModelParams(0.5, 1.5, 3))
    ball = green_measure_of_ball(gd, [1, 2, 3], [1, 2, 3], 0.8)
    ind = potential(gd, testfunctions.indicator_ball(3, 0.8, center=[1, 2, 3]), [1, 2, 3]).value
    assert ind == pytest.approx(ball, rel=1e-8)
    with pytest.raises(DomainError):
        green_measure_of_ball(gd, [0, 0, 0], [0, 0, 0], 0.0)


def test_ball_measure_off_center_against_cubature_2d():
    gd = green_density(ModelParams(0.8, 1.2, 2))
    x, c, r = np.array([0.0, 0.0]), np.array([1.5, 0.5]), 0.6

    def integrand(phi, s):
        y = c + s * np.array([math.cos(phi), math.sin(phi)])
        return green_density_at(gd, x, y) * s

    oracle, _ = integrate.dblquad(integrand, 0.0, r, 0.0, 2 * math.pi, epsabs=1e-12, epsrel=1e-10)
    assert green_measure_of_ball(gd, x, c, r) == pytest.approx(oracle, rel=1e-6)


def test_ball_measure_off_center_against_cubature_3d():
    gd = green_density(ModelParams(0.5, 1.5, 3))
    x, c, r = np.zeros(3), np.array([0.0, 0.0, 2.0]), 0.9

    def integrand(phi, theta, s):
        y = c + s * np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        return green_density_at(gd, x, y) * s * s * math.sin(theta)

    oracle, _ = integrate.tplquad(integrand, 0.0, r, 0.0, math.pi, 0.0, 2 * math.pi, epsabs=1e-10, epsrel=1e-8)
    assert green_measure_of_ball(gd, x, c, r) == pytest.approx(oracle, rel=1e-6)


def test_ball_measure_with_start_inside_off_center():
    gd = green_density(ModelParams(0.9, 2.0, 2))
    for x in ([0.2, 0.0], [0.0, -0.7]):
        inside = green_measure_of_ball(gd, x, [0.0, 0.0], 1.0)
        ind = potential(gd, testfunctions.indicator_ball(2, 1.0), x)
        assert ind.method == "axisymmetric"
        assert inside == pytest.approx(ind.value, rel=1e-6)
    gd = green_density(ModelParams(0.5, 1.5, 3))
    inside = green_measure_of_ball(gd, [0.0, 0.3, 0.0], [0.0, 0.0, 0.0], 0.8)
    ind = potential(gd, testfunctions.indicator_ball(3, 0.8), [0.0, 0.3, 0.0]).value
    assert inside == pytest.approx(ind, rel=1e-6)
    assert inside < green_measure_of_ball(gd, [0.0, 0.0, 0.0], [0.0, 0.0, 0.0], 0.8)


def test_test_function_norms():
    for d in (1, 2, 3):
        f = testfunctions.gaussian(d, sigma=0.8)
        assert f.l1_norm == pytest.approx((2 * math.pi * 0.64) ** (d / 2), rel=1e-14)
        assert f.cl_norm == pytest.approx(1.0 + f.l1_norm)
    f = testfunctions.gaussian(3)
    shell, _ = integrate.quad(lambda r: 4 * math.pi * r * r * math.exp(-0.5 * r * r), 2.0, np.inf)
    assert f.tail_l1(2.0) == pytest.approx(shell, rel=1e-10)
    ind = testfunctions.indicator_ball(3, 2.0)
    assert ind.l1_norm == pytest.approx(4.0 * math.pi * 8.0 / 3.0)
    assert not ind.continuous
    b = testfunctions.bump(2, radius=1.0)
    mass, _ = integrate.quad(lambda r: 2 * math.pi * r * float(b.profile(r)), 0.0, 1.0)
    assert b.l1_norm == pytest.approx(mass, rel=1e-10)
    assert b.tail_l1(1.0) == 0.0
    with pytest.raises(DomainError):
        testfunctions.gaussian(3, center=[0.0, 1.0])
