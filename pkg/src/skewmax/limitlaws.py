"""Closed-form limit distribution functions.

Every bivariate evaluator broadcasts over numpy arrays. ``lam = math.inf``
selects the independence branch explicitly before any arithmetic, and
``lam = 0`` the comonotone branch, so neither limit is approached through
a huge or tiny float.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .exceptions import DomainError

__all__ = [
    "FAMILIES",
    "gumbel_df",
    "std_normal_cdf",
    "husler_reiss",
    "half_skew_gumbel_limit",
    "two_skew_gumbel_limit",
    "i_alpha",
    "i_alpha_quadrature",
    "upsilon",
    "weibull_margin",
    "weibull_half_skew_limit",
    "weibull_two_skew_limit",
]

FAMILIES = ("hr", "half-skew-gumbel", "two-skew-gumbel", "weibull-half-skew", "weibull-two-skew")

LN2 = math.log(2.0)


def _unwrap(arr):
    arr = np.asarray(arr, dtype=float)
    return arr[()] if arr.ndim == 0 else arr


def _check_lambda(lam) -> float:
    lam = float(lam)
    if math.isnan(lam) or lam < 0:
        raise DomainError(f"lambda must lie in [0, inf], got {lam}")
    return lam


def gumbel_df(x):
    """Unit Gumbel df ``exp(-exp(-x))``."""
    return _unwrap(np.exp(-np.exp(-np.asarray(x, dtype=float))))


def std_normal_cdf(x):
    """Standard normal df via the complementary error function.

    ``erfc`` keeps relative accuracy in the lower tail, which the products
    ``Φ(·) e^{-y}`` need far out in the Hüsler-Reiss exponent.
    """
    return _unwrap(0.5 * special.erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0)))


def _hr_exponent(lam: float, x, y):
    """``-log H_λ(x, y)`` for finite positive ``λ``."""
    return std_normal_cdf(lam + (x - y) / (2.0 * lam)) * np.exp(-y) + std_normal_cdf(
        lam + (y - x) / (2.0 * lam)
    ) * np.exp(-x)


def husler_reiss(lam, x, y):
    """Hüsler-Reiss df ``H_λ(x, y)``; ``λ = 0`` is ``Λ(min(x, y))``, ``λ = inf`` is ``Λ(x) Λ(y)``."""
    lam = _check_lambda(lam)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if lam == 0:
        return _unwrap(np.exp(-np.exp(-np.minimum(x, y))))
    if math.isinf(lam):
        return _unwrap(np.exp(-np.exp(-x) - np.exp(-y)))
    return _unwrap(np.exp(-_hr_exponent(lam, x, y)))


def half_skew_gumbel_limit(lam, x, y):
    """Limit of the half-skew array under Gumbel norming.

    Equals ``H_λ(x, y + ln 2) Λ(y + ln 2)``; evaluated here directly from
    the exponent, with ``e^{-(y + ln 2)} = e^{-y} / 2``.
    """
    lam = _check_lambda(lam)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    half_ey = 0.5 * np.exp(-y)
    if lam == 0:
        shifted = y + LN2
        return _unwrap(np.exp(-np.exp(-np.minimum(x, shifted)) - half_ey))
    if math.isinf(lam):
        return _unwrap(np.exp(-np.exp(-x) - 2.0 * half_ey))
    d = x - y - LN2
    expo = (
        std_normal_cdf(lam + d / (2.0 * lam)) * half_ey
        + std_normal_cdf(lam - d / (2.0 * lam)) * np.exp(-x)
        + half_ey
    )
    return _unwrap(np.exp(-expo))


def two_skew_gumbel_limit(lam1, lam2, x, y):
    """Two-skew Gumbel limit: ``H_λ`` with ``λ = |λ1 - λ2|``."""
    lam1 = _check_lambda(lam1)
    lam2 = _check_lambda(lam2)
    if math.isinf(lam1) or math.isinf(lam2):
        raise DomainError("two-skew limits need finite lambda1 and lambda2")
    return husler_reiss(abs(lam1 - lam2), x, y)


def i_alpha(alpha):
    """``Γ(α + 1) / (sqrt(2π) Γ(α + 3/2))``."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0):
        raise DomainError("i_alpha needs alpha >= 0")
    return _unwrap(np.exp(special.gammaln(alpha + 1.0) - special.gammaln(alpha + 1.5)) / math.sqrt(2 * math.pi))


def i_alpha_quadrature(alpha: float) -> float:
    """``(sqrt 2 / π) ∫_0^1 (1 - s²)^α ds`` by adaptive quadrature."""
    if alpha < 0:
        raise DomainError("i_alpha needs alpha >= 0")
    value, _ = integrate.quad(lambda s: (1.0 - s * s) ** alpha, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return math.sqrt(2.0) / math.pi * value


def upsilon(alpha, t):
    """Df on ``[-1, 1]`` proportional to ``(1 - s²)^α``, clamped to 0 / 1 outside.

    With ``s = 2v - 1`` the ratio of integrals is the regularised
    incomplete beta ``I_{(t+1)/2}(α + 1, α + 1)``.
    """
    alpha = float(alpha)
    if alpha < 0:
        raise DomainError("upsilon needs alpha >= 0")
    t = np.asarray(t, dtype=float)
    v = np.clip(0.5 * (t + 1.0), 0.0, 1.0)
    return _unwrap(special.betainc(alpha + 1.0, alpha + 1.0, v))


def _check_negative(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x >= 0) or np.any(y >= 0):
        raise DomainError("Weibull-case limits are defined for x < 0 and y < 0")
    return x, y


def weibull_margin(alpha, x, factor: float = 1.0):
    """``exp(-factor I_α |x|^(1/2+α))`` for ``x < 0`` and 1 for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    p = 0.5 + float(alpha)
    mag = np.abs(np.minimum(x, 0.0))
    return _unwrap(np.exp(-factor * i_alpha(alpha) * mag**p))


def _upsilon_pair(alpha: float, lam: float, x, y):
    """``(Υ_α(t_xy), Υ_α(t_yx))`` with ``t_xy = (λ + (y-x)/(2λ)) / sqrt(2|x|)``.

    ``λ = 0`` follows the sign of ``y - x``: ``y > x`` gives ``(1, 0)``, and
    ``y <= x`` gives ``(0, 1)``. ``λ = inf`` sends both arguments to +inf.
    """
    if lam == 0:
        above = (y > x).astype(float)
        return above, 1.0 - above
    if math.isinf(lam):
        ones = np.ones(np.broadcast(x, y).shape)
        return ones, ones
    t_xy = (lam + (y - x) / (2.0 * lam)) / np.sqrt(2.0 * np.abs(x))
    t_yx = (lam + (x - y) / (2.0 * lam)) / np.sqrt(2.0 * np.abs(y))
    return upsilon(alpha, t_xy), upsilon(alpha, t_yx)


def weibull_half_skew_limit(alpha, lam, x, y):
    """Joint limit of the half-skew array under Weibull norming, ``x, y < 0``.

    ``exp(-I_α (|x|^p Υ(t_xy) + |y|^p (1 + Υ(t_yx))))`` with ``p = 1/2 + α``.
    """
    alpha = float(alpha)
    lam = _check_lambda(lam)
    x, y = _check_negative(x, y)
    p = 0.5 + alpha
    ups_x, ups_y = _upsilon_pair(alpha, lam, x, y)
    expo = i_alpha(alpha) * (np.abs(x) ** p * ups_x + np.abs(y) ** p * (1.0 + ups_y))
    return _unwrap(np.exp(-expo))


def weibull_two_skew_limit(alpha, lam1, lam2, x, y):
    """Joint limit of the two-skew array under Weibull norming, ``λ = |λ1 - λ2|``.

    ``exp(-2 I_α (|x|^p Υ(t_xy) + |y|^p Υ(t_yx)))``.
    """
    alpha = float(alpha)
    lam1 = _check_lambda(lam1)
    lam2 = _check_lambda(lam2)
    if math.isinf(lam1) or math.isinf(lam2):
        raise DomainError("two-skew limits need finite lambda1 and lambda2")
    lam = abs(lam1 - lam2)
    x, y = _check_negative(x, y)
    p = 0.5 + alpha
    ups_x, ups_y = _upsilon_pair(alpha, lam, x, y)
    expo = 2.0 * i_alpha(alpha) * (np.abs(x) ** p * ups_x + np.abs(y) ** p * ups_y)
    return _unwrap(np.exp(-expo))
