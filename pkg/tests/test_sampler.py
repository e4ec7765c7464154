import math

import numpy as np
import pytest

from skewmax import sampler
from skewmax.exceptions import DomainError, WrongMdaError
from skewmax.limitlaws import weibull_margin
from skewmax.marginal import GumbelNorming, WeibullNorming, norming_weibull, rho_from_lambda_weibull, survival_X
from skewmax.mcharness import ks_distance
from skewmax.radius import BetaRadius, KotzTypeI, Rayleigh, TableLaw, Uniform01, Weibull
from skewmax.sampler import (
    Elliptical,
    HalfSkew,
    MaximaResult,
    RngStream,
    Skew,
    TwoSkew,
    normalize,
    row_maxima,
    sample_pair,
    sample_pairs,
)

LN2 = math.log(2)


def test_model_validation():
    for bad in (0.0, -0.3, 1.2):
        with pytest.raises(DomainError):
            HalfSkew(bad)
    with pytest.raises(DomainError):
        TwoSkew(0.5, 0.0)
    with pytest.raises(DomainError):
        RngStream(-1, 0)


def test_stream_positions():
    a = RngStream(1, 2)
    first = a.uniform_pairs(10)
    second = a.uniform_pairs(5)
    assert a.position == 15
    both = RngStream(1, 2).uniform_pairs(15)
    assert np.array_equal(np.vstack([first, second]), both)
    assert not np.array_equal(RngStream(1, 3).uniform_pairs(15), both)


def test_halfskew_degenerate():
    x, z = sample_pairs(Rayleigh(), HalfSkew(1.0), RngStream(0, 0), 1000)
    np.testing.assert_array_equal(z, np.abs(x))


def test_models_share_the_polar_draw():
    law = BetaRadius(2, 3)
    ex, ez = sample_pairs(law, Elliptical(0.6), RngStream(4, 1), 500)
    sx, sz = sample_pairs(law, Skew(0.6), RngStream(4, 1), 500)
    hx, hz = sample_pairs(law, HalfSkew(0.6), RngStream(4, 1), 500)
    tx, tz = sample_pairs(law, TwoSkew(0.6, 0.6), RngStream(4, 1), 500)
    np.testing.assert_array_equal(sx, np.abs(ex))
    np.testing.assert_array_equal(hx, ex)
    np.testing.assert_allclose(tx, sz, rtol=1e-15)
    np.testing.assert_allclose(tz, hz, rtol=1e-15)
    y = (ez - 0.6 * ex) / 0.8
    np.testing.assert_allclose(hz, 0.6 * np.abs(ex) + 0.8 * y, atol=1e-14)


def test_sample_pair_matches_vector_draw():
    law = KotzTypeI(c=1.3, tau=0.7, sigma_exp=0.4)
    rng = RngStream(8, 0)
    pairs = [sample_pair(law, Skew(0.4), rng) for _ in range(3)]
    x, z = sample_pairs(law, Skew(0.4), RngStream(8, 0), 3)
    np.testing.assert_allclose(pairs, np.column_stack([x, z]), rtol=1e-15)


def test_elliptical_gaussian_correlation():
    rho, count = 0.35, 10**6
    x, z = sample_pairs(Rayleigh(), Elliptical(rho), RngStream(21, 0), count)
    r = np.corrcoef(x, z)[0, 1]
    # standard error of a Gaussian sample correlation
    assert abs(r - rho) <= 3 * (1 - rho * rho) / math.sqrt(count)


@pytest.mark.parametrize("model", [Elliptical(0.5), HalfSkew(0.5)])
def test_first_coordinate_marginal(model):
    law = BetaRadius(2, 3)
    x, _ = sample_pairs(law, model, RngStream(3, 0), 10**6)
    grid = np.linspace(-0.95, 0.95, 77)
    ecdf = np.searchsorted(np.sort(x), grid, side="right") / x.size

    def cdf(t):
        return 1 - survival_X(law, t) if t > 0 else (survival_X(law, -t) if t < 0 else 0.5)

    assert np.max(np.abs(ecdf - np.array([cdf(t) for t in grid]))) < 0.002


def test_row_maxima_single_pair():
    law = Rayleigh()
    res = row_maxima(law, HalfSkew(0.7), 1, RngStream(5, 3))
    x, z = sample_pairs(law, HalfSkew(0.7), RngStream(5, 3), 1)
    assert res.m1 == pytest.approx(x[0], rel=1e-14) and res.m2 == pytest.approx(z[0], rel=1e-14)
    assert res.n == 1 and res.mda_kind == "gumbel"


@pytest.mark.parametrize("law", [Rayleigh(), Uniform01(), BetaRadius(2, 3)], ids=lambda l: type(l).__name__)
def test_row_maxima_monotone_in_prefix(law):
    prev = (-math.inf, -math.inf)
    for n in (1, 10, 1000, 70000):
        res = row_maxima(law, TwoSkew(0.9, 0.4), n, RngStream(2, 9))
        assert res.m1 >= prev[0] and res.m2 >= prev[1]
        prev = (res.m1, res.m2)


def test_halfskew_one_second_dominates():
    for law in (Rayleigh(), Uniform01()):
        res = row_maxima(law, HalfSkew(1.0), 5000, RngStream(1, 1))
        assert res.m2 >= res.m1


def test_row_maxima_matches_direct_max():
    law = BetaRadius(2, 3)
    model = HalfSkew(0.8)
    x, z = sample_pairs(law, model, RngStream(7, 4), 100000)
    res = row_maxima(law, model, 100000, RngStream(7, 4))
    assert res.m1 == pytest.approx(x.max(), rel=1e-15) and res.m2 == pytest.approx(z.max(), rel=1e-15)


def test_fused_and_generic_paths_agree(monkeypatch):
    law, model = Rayleigh(), Skew(0.5)
    fused = row_maxima(law, model, 50000, RngStream(3, 3))
    monkeypatch.setattr(sampler, "_radius_code", lambda law: None)
    generic = row_maxima(law, model, 50000, RngStream(3, 3))
    assert generic.m1 == pytest.approx(fused.m1, rel=1e-12)
    assert generic.m2 == pytest.approx(fused.m2, rel=1e-12)


def test_reproducible():
    law = KotzTypeI(c=0.5, tau=2.0, sigma_exp=1.0)
    a = row_maxima(law, HalfSkew(0.9), 3000, RngStream(99, 5))
    b = row_maxima(law, HalfSkew(0.9), 3000, RngStream(99, 5))
    assert a == b


def test_row_length_checked():
    with pytest.raises(DomainError):
        row_maxima(Rayleigh(), HalfSkew(0.5), 0, RngStream(0, 0))


def test_normalize_examples():
    g = GumbelNorming(n=100, a_n=0.4, b_n=2.5)
    res = MaximaResult(m1=2.5, m2=2.5 + 0.4 * LN2, n=100, mda_kind="gumbel")
    assert normalize(res, g, HalfSkew(0.5)) == pytest.approx((0.0, 0.0), abs=1e-15)
    assert normalize(res, g, Elliptical(0.5)) == pytest.approx((0.0, LN2), abs=1e-15)
    assert normalize(res, g, TwoSkew(0.5, 0.2)) == pytest.approx((-LN2, 0.0), abs=1e-15)
    w = WeibullNorming(n=100, u_n=0.01)
    res = MaximaResult(m1=0.99, m2=1 - 0.01 * 0.5, n=100, mda_kind="weibull")
    assert normalize(res, w, HalfSkew(0.5)) == pytest.approx((-1.0, -0.5), rel=1e-12)


def test_normalize_wrong_mda():
    res = MaximaResult(m1=0.9, m2=0.9, n=10, mda_kind="weibull")
    with pytest.raises(WrongMdaError):
        normalize(res, GumbelNorming(n=10, a_n=1, b_n=1), HalfSkew(0.5))


def test_table_law_row_maxima():
    law = TableLaw((0.0, 0.5, 1.0), (1.0, 0.5, 0.0), Weibull(1.0))
    res = row_maxima(law, HalfSkew(0.9), 2000, RngStream(1, 0))
    assert res.m1 <= 1.0 and res.m2 <= 1.0 and res.mda_kind == "weibull"


@pytest.mark.slow
def test_weibull_marginal_convergence():
    law, n, reps = Uniform01(), 2**16, 2000
    nc = norming_weibull(law, n)
    model = HalfSkew(rho_from_lambda_weibull(1.0, nc))
    z = np.array([normalize(row_maxima(law, model, n, RngStream(17, r)), nc, model)[1] for r in range(reps)])
    assert ks_distance(z, lambda t: weibull_margin(1.0, t, 2.0)) < 0.05
