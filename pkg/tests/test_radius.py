import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from skewmax.exceptions import DomainError, UnclassifiableError
from skewmax.mcharness import ks_distance
from skewmax.radius import (
    BetaRadius,
    Gumbel,
    KotzTypeI,
    Rayleigh,
    TableLaw,
    Uniform01,
    Weibull,
    law_from_config,
    mda,
    quantile,
    sample_radius,
    survival,
)
from skewmax.sampler import RngStream

LAWS = [
    Rayleigh(),
    Uniform01(),
    BetaRadius(2.0, 3.0),
    BetaRadius(0.7, 1.5),
    KotzTypeI(c=0.5, tau=2.0),
    KotzTypeI(c=1.3, tau=0.7, sigma_exp=0.4),
    TableLaw((0.0, 0.5, 1.0, 2.0, 4.0), (1.0, 0.8, 0.4, 0.05, 1e-5), Weibull(1.0)),
]


def test_survival_examples():
    assert survival(Uniform01(), 0.75) == pytest.approx(0.25, abs=1e-15)
    assert survival(Rayleigh(), 0.0) == 1.0
    mp.mp.dps = 30
    ref = mp.quad(lambda t: t * (1 - t) ** 2, [0.5, 1]) / mp.beta(2, 3)
    assert survival(BetaRadius(2, 3), 0.5) == pytest.approx(float(ref), rel=1e-13)


def test_finite_endpoint_is_zero():
    for law in (Uniform01(), BetaRadius(2, 3)):
        assert survival(law, 1.0) == 0.0
        assert survival(law, 1.5) == 0.0


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        survival(Rayleigh(), -0.1)


def test_quantile_examples():
    assert quantile(Uniform01(), 0.5) == 0.5
    assert quantile(Rayleigh(), 1 - math.exp(-0.5)) == pytest.approx(1.0, rel=1e-14)
    assert sample_radius(Uniform01(), 0.25) == 0.25
    u = np.array([1e-9, 0.1, 0.5, 0.9, 1 - 1e-9])
    np.testing.assert_allclose(sample_radius(Rayleigh(), u), np.sqrt(-2 * np.log1p(-u)), rtol=1e-13)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_quantile_domain(p):
    with pytest.raises(DomainError):
        quantile(Rayleigh(), p)


@pytest.mark.parametrize("law", LAWS, ids=lambda l: type(l).__name__)
@settings(max_examples=60, deadline=None)
@given(p=st.floats(min_value=1e-9, max_value=1 - 1e-9))
def test_inverse_identity(law, p):
    assert survival(law, quantile(law, p)) == pytest.approx(1 - p, abs=1e-10)


@pytest.mark.parametrize("law", LAWS, ids=lambda l: type(l).__name__)
def test_survival_monotone(law):
    top = 1.2 if law.endpoint == 1 else 8.0
    s = survival(law, np.linspace(0, top, 1000))
    assert np.all(np.diff(s) <= 0)
    assert np.all((s >= 0) & (s <= 1))


@pytest.mark.parametrize("law", LAWS, ids=lambda l: type(l).__name__)
def test_quantile_monotone(law):
    p = np.linspace(0.001, 0.999, 500)
    assert np.all(np.diff(quantile(law, p)) > 0)


def test_mda_classes():
    k = mda(KotzTypeI(K=1, c=0.5, tau=2, sigma_exp=0))
    assert isinstance(k, Gumbel)
    for x in (0.3, 1.0, 5.0):
        assert k.w(x) == pytest.approx(x)
    g = mda(KotzTypeI(c=1.3, tau=0.7))
    assert g.w(2.0) == pytest.approx(1.3 * 0.7 * 2.0 ** (-0.3))
    assert mda(Rayleigh()).w(3.0) == pytest.approx(3.0)
    assert mda(BetaRadius(2, 3)) == Weibull(3.0)
    assert mda(Uniform01()) == Weibull(1.0)


def test_table_without_class_unclassifiable():
    law = TableLaw((0.0, 1.0, 2.0), (1.0, 0.3, 0.01))
    with pytest.raises(UnclassifiableError):
        mda(law)


def test_kotz_tail_shape():
    law = KotzTypeI(c=0.5, tau=2.0, sigma_exp=0.4)
    x = float(law.isf(1e-8))
    ratio = survival(law, x) * x ** (-0.4) * math.exp(0.5 * x * x) / law.tail_constant
    assert abs(ratio - 1) < 0.05


def test_kotz_inconsistent_constant_rejected():
    with pytest.raises(ValueError):
        KotzTypeI(K=2.0, c=0.5, tau=2.0)


def test_beta_tail_shape():
    a, b = 2.0, 3.0
    x = 1e-4
    const = math.gamma(a + b) / (b * math.gamma(a) * math.gamma(b))
    assert survival(BetaRadius(a, b), 1 - x) / (const * x**b) == pytest.approx(1, rel=0.01)


def test_beta_tail_at_endpoint_precise():
    law = BetaRadius(2.0, 3.0)
    u = 1e-12
    assert law.tail_at_endpoint(u) == pytest.approx(special.betainc(3.0, 2.0, u), rel=1e-13)
    assert law.tail_at_endpoint(u) > 0


def test_sample_radius_ecdf():
    rng = RngStream(seed=11, stream_id=0)
    u = rng.uniform_pairs(10**6)[:, 0]
    r = sample_radius(Rayleigh(), u)
    assert ks_distance(r, lambda t: 1 - survival(Rayleigh(), t)) < 0.002


def test_config_round_trip():
    for law in LAWS[:-1]:
        again = law_from_config(law.to_config())
        np.testing.assert_allclose(survival(again, [0.2, 0.6]), survival(law, [0.2, 0.6]), rtol=1e-15)


def test_config_rejects_unknown():
    with pytest.raises(ValueError, match="unknown"):
        law_from_config({"kind": "beta", "a": 1, "b": 2, "shape": 3})
    with pytest.raises(ValueError, match="unknown radius kind"):
        law_from_config({"kind": "gamma"})


def test_table_law_interpolation():
    law = TableLaw((0.0, 1.0, 2.0), (1.0, 0.1, 0.01), Gumbel(lambda x: x))
    # log-linear between nodes
    assert survival(law, 1.5) == pytest.approx(math.sqrt(0.1 * 0.01))
    # extrapolates with the last log-slope
    assert survival(law, 3.0) == pytest.approx(0.001)
