"""Exact finite-n tail probabilities by angular decomposition.

For ``(X, Y) = R (cos T, sin T)`` with ``T`` uniform on ``(-π, π)`` and
``Z = ρ|X| + sqrt(1-ρ²) Y``, the events ``{X > x, Z > y}`` and ``{Z > x}``
split into arcs of ``T`` on which ``R`` must exceed ``x / cos(·)``. Each arc
becomes one :func:`~skewmax.marginal.angular_integral`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError, WrongMdaError
from .marginal import (
    HALF_PI,
    angular_integral,
    norming_weibull,
    rho_from_lambda_weibull,
    survival_X,
)
from .radius import RadiusLaw, Weibull

__all__ = ["AngleDecomposition", "beta_angle", "psi_angle", "joint_tail", "skew_margin_tail", "res00_ratio"]


@dataclass(frozen=True)
class AngleDecomposition:
    beta: float
    psi: float


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    return rho


def psi_angle(rho: float) -> float:
    """``arccos ρ`` computed as ``atan2(sqrt((1-ρ)(1+ρ)), ρ)`` to keep precision near 1."""
    rho = _check_rho(rho)
    return math.atan2(math.sqrt((1.0 - rho) * (1.0 + rho)), rho)


def beta_angle(x: float, y: float, rho: float) -> AngleDecomposition:
    """Crossing angle ``β = arctan((y/x - ρ) / sqrt(1 - ρ²))`` and ``ψ = arccos ρ``.

    At ``ρ = 1`` the ratio is a signed infinity: ``β = ±π/2`` by the sign of
    ``y/x - 1`` and ``β = 0`` when ``y = x``.
    """
    if x == 0:
        raise DomainError("beta_angle needs x != 0")
    rho = _check_rho(rho)
    psi = psi_angle(rho)
    num = y / x - rho
    if rho == 1.0:
        beta = 0.0 if num == 0 else math.copysign(HALF_PI, num)
    else:
        beta = math.atan(num / math.sqrt((1.0 - rho) * (1.0 + rho)))
    return AngleDecomposition(beta=beta, psi=psi)


def joint_tail(law: RadiusLaw, rho: float, x: float, y: float) -> float:
    """``P(X > x, ρ|X| + sqrt(1-ρ²) Y > y)`` for ``x, y > 0``.

    Equals ``(1/2π) [∫_β^{π/2} F̄(x/cos θ) dθ + ∫_{-π/2}^{β-ψ} F̄(y/cos θ) dθ]``.
    """
    if not (x > 0 and y > 0):
        raise DomainError("joint_tail needs x > 0 and y > 0")
    rho = _check_rho(rho)
    if rho == 1.0:
        return survival_X(law, max(x, y))
    ang = beta_angle(x, y, rho)
    first = angular_integral(law, x, ang.beta, HALF_PI)
    second = angular_integral(law, y, -HALF_PI, ang.beta - ang.psi)
    return (first + second) / (2.0 * math.pi)


def skew_margin_tail(law: RadiusLaw, rho: float, x: float) -> float:
    """``P(ρ|X| + sqrt(1-ρ²) Y > x)`` for ``x > 0``.

    Two arcs of ``T``: ``T - ψ ∈ (-π/2, π/2 - ψ)`` with ``R cos(T - ψ) > x``,
    and ``T ∈ (π/2, π) ∪ (-π, -π/2 - ψ)`` with ``-R cos(T + ψ) > x``. With
    ``φ = T + ψ ∓ π`` the second arc maps onto ``φ ∈ (ψ - π/2, π/2)``.
    """
    if not x > 0:
        raise DomainError("skew_margin_tail needs x > 0")
    rho = _check_rho(rho)
    if rho == 1.0:
        return 2.0 * survival_X(law, x)
    psi = psi_angle(rho)
    first = angular_integral(law, x, -HALF_PI, HALF_PI - psi)
    # (π/2, π) -> (ψ - π/2, ψ) and (-π, -π/2 - ψ) -> (ψ, π/2)
    second = angular_integral(law, x, psi - HALF_PI, psi) + angular_integral(law, x, psi, HALF_PI)
    return (first + second) / (2.0 * math.pi)


def res00_ratio(law: RadiusLaw, lam: float, x: float, n: int) -> float:
    """``P(Z_n > 1 + u_n x) / (u_n^{1/2} F̄(1 - u_n))`` with ``ρ_n = 1 - 2λ² u_n``.

    Tends to ``2 I_α |x|^{1/2+α}`` for a Weibull-class radius and ``x < 0``.
    """
    if not isinstance(law.mda(), Weibull):
        raise WrongMdaError("res00_ratio needs a Weibull-class radius law")
    if not x < 0:
        raise DomainError("res00_ratio needs x < 0")
    nc = norming_weibull(law, n)
    rho = rho_from_lambda_weibull(lam, nc)
    level = 1.0 + nc.u_n * x
    if not level > 0:
        raise DomainError(f"1 + u_n x = {level} is not positive; use a larger n")
    denom = math.sqrt(nc.u_n) * float(law.tail_at_endpoint(nc.u_n))
    return skew_margin_tail(law, rho, level) / denom
