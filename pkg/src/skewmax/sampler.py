"""Sampling of the bivariate triangular-array models and their row maxima.

A draw is a pair of uniforms ``(u_R, u_T)`` produced by Philox4x32-10
keyed by the seed, with counter ``(draw index, stream id)``. The radius is
``quantile(law, u_R)`` and the angle ``T = (2 u_T - 1) π``. Because every
draw is addressed by its index, a replication's output does not depend
on how replications are scheduled across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ._backend import kernels
from ._fallback import transform
from .exceptions import DomainError, WrongMdaError
from .marginal import GumbelNorming, NormingConstants, WeibullNorming
from .radius import BetaRadius, Gumbel, KotzTypeI, RadiusLaw, Rayleigh, Uniform01

__all__ = [
    "Elliptical",
    "Skew",
    "HalfSkew",
    "TwoSkew",
    "ArrayModel",
    "MaximaResult",
    "RngStream",
    "model_from_name",
    "sample_pair",
    "sample_pairs",
    "row_maxima",
    "normalize",
    "centering",
]

LN2 = math.log(2.0)
_U64 = 1 << 64


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"model correlation must lie in (0, 1], got {rho}")
    return rho


@dataclass(frozen=True)
class Elliptical:
    """``(X, ρX + sqrt(1-ρ²) Y)``."""

    rho: float
    kind = "elliptical"
    skewed = (False, False)

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class Skew:
    """``(|X|, ρ|X| + sqrt(1-ρ²) Y)``."""

    rho: float
    kind = "skew"
    skewed = (True, True)

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class HalfSkew:
    """``(X, ρ|X| + sqrt(1-ρ²) Y)``."""

    rho: float
    kind = "half-skew"
    skewed = (False, True)

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class TwoSkew:
    """``(ρ1|X| + sqrt(1-ρ1²) Y, ρ2|X| + sqrt(1-ρ2²) Y)``."""

    rho1: float
    rho2: float
    kind = "two-skew"
    skewed = (True, True)

    def __post_init__(self):
        _check_rho(self.rho1)
        _check_rho(self.rho2)


ArrayModel = Union[Elliptical, Skew, HalfSkew, TwoSkew]

MODEL_NAMES = ("elliptical", "skew", "half-skew", "two-skew")


def model_from_name(name: str, rho: float = 1.0, rho2: float = 1.0) -> ArrayModel:
    """Build a model by its CLI name; ``two-skew`` takes ``(rho, rho2)``."""
    if name == "elliptical":
        return Elliptical(rho)
    if name == "skew":
        return Skew(rho)
    if name == "half-skew":
        return HalfSkew(rho)
    if name == "two-skew":
        return TwoSkew(rho, rho2)
    raise ValueError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")


@dataclass(frozen=True)
class MaximaResult:
    m1: float
    m2: float
    n: int
    mda_kind: str


class RngStream:
    """Position in the counter-based stream ``(seed, stream_id)``.

    ``position`` is the index of the next draw; reading pairs advances it.
    Two streams with equal ``(seed, stream_id, position)`` yield identical
    draws.
    """

    def __init__(self, seed: int, stream_id: int, position: int = 0):
        for name, value in (("seed", seed), ("stream_id", stream_id), ("position", position)):
            if int(value) != value or not 0 <= value < _U64:
                raise DomainError(f"{name} must be an integer in [0, 2**64), got {value}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.position = int(position)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, position={self.position})"

    def uniform_pairs(self, count: int) -> np.ndarray:
        out = kernels.philox_pairs(self.seed, self.stream_id, self.position, count)
        self.position += count
        return out

    def advance(self, count: int) -> int:
        """Skip ``count`` draws; return the index of the first skipped draw."""
        start = self.position
        self.position += count
        return start


def _model_params(model: ArrayModel) -> Tuple[int, float, float, float, float]:
    def s(rho):
        return math.sqrt((1.0 - rho) * (1.0 + rho))

    if isinstance(model, TwoSkew):
        return 3, model.rho1, s(model.rho1), model.rho2, s(model.rho2)
    code = {"elliptical": 0, "skew": 1, "half-skew": 2}[model.kind]
    return code, model.rho, s(model.rho), 0.0, 0.0


def _radius_code(law: RadiusLaw):
    """Closed-form quantile recipe the fused kernel can evaluate, or ``None``."""
    if isinstance(law, Rayleigh):
        return 1, 0.0, 0.0
    if isinstance(law, Uniform01):
        return 2, 0.0, 0.0
    if isinstance(law, KotzTypeI) and law.sigma_exp == 0:
        return 3, law.c, 1.0 / law.tau
    if isinstance(law, BetaRadius) and law.b == 1:
        return 4, 1.0 / law.a, 0.0
    if isinstance(law, BetaRadius) and law.a == 1:
        return 5, 1.0 / law.b, 0.0
    return None


def _mda_kind(law: RadiusLaw) -> str:
    return "gumbel" if isinstance(law.mda(), Gumbel) else "weibull"


def sample_pairs(law: RadiusLaw, model: ArrayModel, rng: RngStream, count: int):
    """Draw ``count`` pairs of the model; returns two arrays."""
    u = rng.uniform_pairs(count)
    radii = np.asarray(law.quantile(u[:, 0]), dtype=float).reshape(count)
    return transform(radii, u[:, 1], *_model_params(model))


def sample_pair(law: RadiusLaw, model: ArrayModel, rng: RngStream) -> Tuple[float, float]:
    a, b = sample_pairs(law, model, rng, 1)
    return float(a[0]), float(b[0])


def row_maxima(law: RadiusLaw, model: ArrayModel, n: int, rng: RngStream) -> MaximaResult:
    """Componentwise maxima of the next ``n`` pairs of ``rng``."""
    if int(n) != n or n < 1:
        raise DomainError(f"row length must be a positive integer, got {n}")
    n = int(n)
    params = _model_params(model)
    recipe = _radius_code(law)
    start = rng.advance(n)
    if recipe is not None:
        m1, m2 = kernels.row_maxima_fused(rng.seed, rng.stream_id, start, n, *recipe, *params)
    else:
        m1 = m2 = -math.inf
        for lo in range(start, start + n, 1 << 16):
            count = min(1 << 16, start + n - lo)
            u = kernels.philox_pairs(rng.seed, rng.stream_id, lo, count)
            radii = np.ascontiguousarray(law.quantile(u[:, 0]), dtype=float)
            a, b = kernels.row_maxima_polar(radii, np.ascontiguousarray(u[:, 1]), *params)
            m1, m2 = max(m1, a), max(m2, b)
    return MaximaResult(m1=float(m1), m2=float(m2), n=n, mda_kind=_mda_kind(law))


def centering(nc: NormingConstants, model: ArrayModel):
    """Return ``(c1, c2, scale)`` so that coordinate ``i`` maps to ``(m_i - c_i) / scale``.

    Gumbel norming centres unskewed coordinates at ``b_n`` and ``|X|``-based
    ones at ``b_n + a_n ln 2``; Weibull norming centres at the endpoint 1.
    """
    if isinstance(nc, GumbelNorming):
        c = [nc.b_n + nc.a_n * LN2 if sk else nc.b_n for sk in model.skewed]
        return c[0], c[1], nc.a_n
    return 1.0, 1.0, nc.u_n


def normalize(res: MaximaResult, nc: NormingConstants, model: ArrayModel) -> Tuple[float, float]:
    expected = GumbelNorming if res.mda_kind == "gumbel" else WeibullNorming
    if not isinstance(nc, expected):
        raise WrongMdaError(f"{type(nc).__name__} does not match a {res.mda_kind}-class radius law")
    c1, c2, scale = centering(nc, model)
    return (res.m1 - c1) / scale, (res.m2 - c2) / scale
