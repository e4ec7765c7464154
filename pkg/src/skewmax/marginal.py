"""Marginal tail of ``X = R cos T`` and the normalising sequences.

All tail probabilities reduce to angular integrals
``∫ F̄(x / cos θ) dθ`` over sub-intervals of ``(-π/2, π/2)``; those are
computed by :func:`angular_integral`, which the oracle module reuses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import integrate, optimize

from .exceptions import DomainError, InfeasibleError, UnclassifiableError, WrongMdaError
from .radius import Gumbel, RadiusLaw, Weibull

__all__ = [
    "GumbelNorming",
    "WeibullNorming",
    "NormingConstants",
    "angular_integral",
    "survival_X",
    "norming_gumbel",
    "norming_weibull",
    "rho_from_lambda_gumbel",
    "rho_from_lambda_weibull",
]

HALF_PI = 0.5 * math.pi

# quadrature tolerances for the integrand scaled to a maximum of 1
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-11
QUAD_LIMIT = 200


@dataclass(frozen=True)
class GumbelNorming:
    n: int
    a_n: float
    b_n: float


@dataclass(frozen=True)
class WeibullNorming:
    n: int
    u_n: float


NormingConstants = Union[GumbelNorming, WeibullNorming]


def _scaling_function(law: RadiusLaw):
    try:
        cls = law.mda()
    except UnclassifiableError:
        return None
    return cls.w if isinstance(cls, Gumbel) else None


def _decay_width(w, x: float, a: float) -> Optional[float]:
    """Angular distance over which ``F̄(x / cos θ)`` drops by about e from ``θ = a``."""
    if w is None:
        return None
    g = x / math.cos(a)
    wg = w(g)
    if not (wg > 0 and math.isfinite(wg)):
        return None
    slope = x * math.sin(a) / math.cos(a) ** 2
    curv = x / math.cos(a)
    # solve (wg curv / 2) d^2 + wg slope d - 1 = 0 for d > 0
    qa, qb = 0.5 * wg * curv, wg * slope
    return 2.0 / (qb + math.sqrt(qb * qb + 4.0 * qa))


def _piece(law: RadiusLaw, x: float, a: float, b: float, w) -> float:
    """``∫_a^b F̄(x / cos θ) dθ`` for ``0 <= a < b`` inside the support cut."""
    scale = float(law.survival(x / math.cos(a)))
    if scale == 0.0:
        return 0.0

    def integrand(theta):
        return float(law.survival(x / math.cos(theta))) / scale

    width = _decay_width(w, x, a)
    points = None
    if width is not None:
        pts = [a + k * width for k in (1.0, 3.0, 10.0, 30.0)]
        pts = [p for p in pts if a < p < b]
        points = pts or None
    value, _ = integrate.quad(
        integrand, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, points=points
    )
    return value * scale


def angular_integral(law: RadiusLaw, x: float, lo: float, hi: float) -> float:
    """Return ``∫_lo^hi F̄(x / cos θ) dθ`` for ``x > 0`` and ``[lo, hi] ⊂ [-π/2, π/2]``.

    The interval is first cut to ``{θ : x / cos θ < x_F}`` and folded onto
    ``θ >= 0`` using the evenness of the cosine. An empty or reversed
    interval integrates to 0.
    """
    if not x > 0:
        raise DomainError("angular integral needs x > 0")
    if x >= law.endpoint:
        return 0.0
    theta_max = HALF_PI if math.isinf(law.endpoint) else math.acos(x / law.endpoint)
    lo = max(lo, -theta_max)
    hi = min(hi, theta_max)
    if not hi > lo:
        return 0.0
    w = _scaling_function(law)
    if hi <= 0.0:
        return _piece(law, x, -hi, -lo, w)
    if lo >= 0.0:
        return _piece(law, x, lo, hi, w)
    return _piece(law, x, 0.0, -lo, w) + _piece(law, x, 0.0, hi, w)


def survival_X(law: RadiusLaw, x: float) -> float:
    """``P(R cos T > x) = (1/π) ∫_0^{π/2} F̄(x / cos θ) dθ`` for ``x > 0``."""
    if not x > 0:
        raise DomainError("survival_X is implemented for x > 0 only")
    return angular_integral(law, x, 0.0, HALF_PI) / math.pi


def _check_n(n: int) -> int:
    if int(n) != n or n < 2:
        raise DomainError(f"norming needs an integer n >= 2, got {n}")
    return int(n)


def norming_gumbel(law: RadiusLaw, n: int) -> GumbelNorming:
    """Solve ``P(X > b_n) = 1/n`` exactly and set ``a_n = 1 / w(b_n)``."""
    n = _check_n(n)
    cls = law.mda()
    if not isinstance(cls, Gumbel):
        raise WrongMdaError("norming_gumbel needs a Gumbel-class radius law")
    if n == 2:
        b = 0.0
    else:
        target = -math.log(n)
        hi = float(law.isf(1.0 / n))
        b = optimize.brentq(
            lambda t: math.log(survival_X(law, t)) - target if t > 0 else math.log(0.5) - target,
            0.0,
            hi,
            xtol=1e-14 * hi,
            rtol=8 * np.finfo(float).eps,
            maxiter=200,
        )
    wb = cls.w(b)
    if not (wb > 0 and math.isfinite(wb)):
        raise DomainError(f"scaling function vanishes at b_n={b}; use a larger n")
    return GumbelNorming(n=n, a_n=1.0 / wb, b_n=b)


def norming_weibull(law: RadiusLaw, n: int) -> WeibullNorming:
    """Solve ``u^(1/2) F̄(1 - u) = 1/n`` for ``u`` in ``(0, 1)``."""
    n = _check_n(n)
    if not isinstance(law.mda(), Weibull):
        raise WrongMdaError("norming_weibull needs a Weibull-class radius law")
    target = -math.log(n)

    def g(v):
        tail = float(law.tail_at_endpoint(math.exp(v)))
        if tail <= 0.0:
            return -math.inf
        return 0.5 * v + math.log(tail) - target

    hi = 0.0  # g(0) = log n > 0
    lo = -1.0
    while g(lo) > 0:
        hi, lo = lo, 2.0 * lo
    v = optimize.brentq(g, lo, hi, xtol=1e-14, rtol=8 * np.finfo(float).eps, maxiter=200)
    return WeibullNorming(n=n, u_n=math.exp(v))


def _fixed_rho(rho_fixed: Optional[float]) -> float:
    if rho_fixed is None or not 0.0 < rho_fixed < 1.0:
        raise DomainError("lambda = inf needs a fixed correlation rho in (0, 1)")
    return float(rho_fixed)


def _check_lambda(lam: float) -> None:
    if math.isnan(lam) or lam < 0:
        raise DomainError(f"lambda must lie in [0, inf], got {lam}")


def rho_from_lambda_gumbel(lam: float, nc: GumbelNorming, rho_fixed: Optional[float] = None) -> float:
    """``rho_n = 1 - 2 λ² a_n / b_n``; ``λ = inf`` returns ``rho_fixed``."""
    _check_lambda(lam)
    if math.isinf(lam):
        return _fixed_rho(rho_fixed)
    if lam == 0:
        return 1.0
    if not nc.b_n > 0:
        raise InfeasibleError(f"n={nc.n}: b_n={nc.b_n} is not positive")
    rho = 1.0 - 2.0 * lam * lam * nc.a_n / nc.b_n
    if not rho > 0:
        raise InfeasibleError(f"n={nc.n}: lambda={lam} gives rho_n={rho} <= 0")
    return rho


def rho_from_lambda_weibull(lam: float, nc: WeibullNorming, rho_fixed: Optional[float] = None) -> float:
    """``rho_n = 1 - 2 λ² u_n``; ``λ = inf`` returns ``rho_fixed``."""
    _check_lambda(lam)
    if math.isinf(lam):
        return _fixed_rho(rho_fixed)
    if lam == 0:
        return 1.0
    rho = 1.0 - 2.0 * lam * lam * nc.u_n
    if not rho > 0:
        raise InfeasibleError(f"n={nc.n}: lambda={lam} gives rho_n={rho} <= 0")
    return rho
