from pathlib import Path
import math
import sys

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.errors import DomainError
from src.sampling.randvar import draw_one_sided_stable, draw_y_beta, sample_one_sided_stable, sample_y_beta
from src.sampling.streams import SeedSpec
from src.special.specfun import m_wright_moment, mittag_leffler

N = 200_000


def within(samples, expected, band=4.0):
    samples = np.asarray(samples, dtype=float)
    se = samples.std(ddof=1) / math.sqrt(samples.size)
    return abs(samples.mean() - expected) <= band * se


def test_seed_streams_are_deterministic_and_distinct():
    a = SeedSpec(42, 3).stream().random(8)
    b = SeedSpec(42, 3).stream().random(8)
    c = SeedSpec(42, 4).stream().random(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert SeedSpec(42).child(5) == SeedSpec(42, 5)
    with pytest.raises(DomainError):
        SeedSpec(-1)
    with pytest.raises(DomainError):
        SeedSpec(1, -2)


def test_y_beta_point_mass():
    rng = SeedSpec(1).stream()
    assert sample_y_beta(1.0, rng).value == 1.0
    assert np.all(draw_y_beta(1.0, rng, 5) == 1.0)


def test_stable_requires_beta_below_one():
    with pytest.raises(DomainError):
        sample_one_sided_stable(1.0, SeedSpec(0).stream())
    assert sample_one_sided_stable(0.5, SeedSpec(0).stream()) > 0.0


def test_stable_laplace_transform():
    s = draw_one_sided_stable(0.5, SeedSpec(11).stream(), N)
    assert np.all(s > 0.0)
    emp = float(np.mean(np.exp(-s)))
    assert abs(emp - math.exp(-1.0)) / math.exp(-1.0) < 0.01


def test_y_beta_moments():
    y = draw_y_beta(0.5, SeedSpec(12).stream(), N)
    assert within(y, 2.0 / math.sqrt(math.pi))
    y = draw_y_beta(0.7, SeedSpec(13).stream(), N)
    assert within(y**2, math.gamma(3.0) / math.gamma(2.4))
    assert within(y**0.5, m_wright_moment(0.7, 0.5))


def test_y_beta_laplace_law():
    for beta in (0.3, 0.5, 0.8):
        y = draw_y_beta(beta, SeedSpec(20, int(beta * 10)).stream(), N)
        for s in (0.5, 1.0, 2.0):
            assert within(np.exp(-s * y), mittag_leffler(beta, -s).value)


@pytest.mark.parametrize("alpha", [1.5, 2.0])
def test_y_beta_negative_moment(alpha):
    # E[Y^(-2/alpha)] is infinite for beta < 1, so the sample mean converges slowly
    y = draw_y_beta(0.5, SeedSpec(14, int(alpha * 10)).stream(), N)
    emp = float(np.mean(y ** (-1.0 / alpha)))
    assert emp == pytest.approx(m_wright_moment(0.5, -1.0 / alpha), rel=0.05)
    y = draw_y_beta(0.9, SeedSpec(15, int(alpha * 10)).stream(), N)
    emp = float(np.mean(y ** (-1.0 / alpha)))
    assert emp == pytest.approx(m_wright_moment(0.9, -1.0 / alpha), rel=0.05)
