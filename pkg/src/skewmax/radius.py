"""Radius laws for the polar representation ``(X, Y) = R (cos T, sin T)``.

Every law lives on ``(0, x_F)`` with right endpoint ``x_F`` equal to 1 or
infinity. Laws with another finite endpoint must be rescaled by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import optimize, special

from .exceptions import DomainError, UnclassifiableError

__all__ = [
    "Gumbel",
    "Weibull",
    "MdaClass",
    "RadiusLaw",
    "KotzTypeI",
    "BetaRadius",
    "Rayleigh",
    "Uniform01",
    "TableLaw",
    "survival",
    "quantile",
    "mda",
    "sample_radius",
    "law_from_config",
]


@dataclass(frozen=True)
class Gumbel:
    """Gumbel max-domain of attraction with scaling function ``w``."""

    w: Callable[[float], float]


@dataclass(frozen=True)
class Weibull:
    """Weibull max-domain of attraction with index ``alpha`` (endpoint 1)."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"Weibull index must be positive, got {self.alpha}")


MdaClass = Union[Gumbel, Weibull]


def _unwrap(arr: np.ndarray):
    return arr[()] if arr.ndim == 0 else arr


class RadiusLaw:
    """Common interface of the radius distributions.

    Subclasses implement ``_sf`` (survival on the support), ``_ppf`` and
    ``_isf`` (quantile from the lower and upper side), ``_pdf`` and
    ``mda``. The public methods take scalars or arrays.
    """

    kind: str = ""
    endpoint: float = math.inf

    # -- public surface -------------------------------------------------
    def survival(self, x):
        """Return ``P(R > x)``; exactly 0 at and beyond a finite endpoint."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(np.isnan(x)):
            raise DomainError("radius survival is defined for x >= 0")
        out = np.zeros_like(x)
        inside = x < self.endpoint
        if np.any(inside):
            out[inside] = np.clip(self._sf(x[inside]), 0.0, 1.0)
        return _unwrap(out)

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def quantile(self, p):
        """Return ``x`` with ``F(x) = p`` for ``p`` in ``(0, 1)``."""
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0) & (p < 1))):
            raise DomainError("quantile requires p in the open interval (0, 1)")
        out = np.empty_like(p)
        low = p <= 0.5
        if np.any(low):
            out[low] = self._ppf(p[low])
        if np.any(~low):
            out[~low] = self._isf(1.0 - p[~low])
        return _unwrap(out)

    def isf(self, q):
        """Inverse survival function; accurate for tiny ``q``."""
        q = np.asarray(q, dtype=float)
        if np.any(~((q > 0) & (q < 1))):
            raise DomainError("isf requires q in the open interval (0, 1)")
        return _unwrap(np.asarray(self._isf(q), dtype=float))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = (x > 0) & (x < self.endpoint)
        if np.any(inside):
            out[inside] = self._pdf(x[inside])
        return _unwrap(out)

    def tail_at_endpoint(self, u):
        """Return ``F̄(1 - u)`` for a law with endpoint 1, ``u`` in ``(0, 1]``."""
        if self.endpoint != 1.0:
            raise DomainError("tail_at_endpoint needs a law with endpoint 1")
        u = np.asarray(u, dtype=float)
        if np.any(~((u > 0) & (u <= 1))):
            raise DomainError("tail_at_endpoint requires u in (0, 1]")
        return _unwrap(np.asarray(self._tail_at_endpoint(u), dtype=float))

    def mda(self) -> MdaClass:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    # -- defaults for subclasses ----------------------------------------
    def _tail_at_endpoint(self, u):
        return self._sf(1.0 - u)

    def _ppf(self, p):
        return _invert_survival(self, 1.0 - p)

    def _isf(self, q):
        return _invert_survival(self, q)


def _invert_survival(law: RadiusLaw, q):
    """Solve ``F̄(x) = q`` by bracketed Brent iteration (bisection + secant).

    The bracket starts at ``[0, 1]`` and doubles while the upper end is
    still above the target, unless the endpoint caps it.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    out = np.empty_like(q)
    for i, target in enumerate(q):
        lo, hi = 0.0, min(1.0, law.endpoint)
        while law.endpoint == math.inf and law.survival(hi) > target:
            lo, hi = hi, 2.0 * hi
        out[i] = optimize.brentq(
            lambda x: law.survival(x) - target, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500
        )
    return out


@dataclass(frozen=True)
class KotzTypeI(RadiusLaw):
    """Kotz type I radius with density proportional to ``x^(sigma+tau-1) exp(-c x^tau)``.

    ``c R^tau`` is Gamma distributed with shape ``1 + sigma_exp / tau``, so
    ``F̄(x) = Q(shape, c x^tau) ~ K x^sigma exp(-c x^tau)`` where the tail
    constant ``K = c^(sigma/tau) / Gamma(shape)`` is fixed by normalisation.
    Passing ``K`` only validates it against that value.
    """

    c: float
    tau: float
    sigma_exp: float = 0.0
    K: Optional[float] = None

    kind = "kotz"

    def __post_init__(self):
        if not (self.c > 0 and self.tau > 0):
            raise ValueError("Kotz type I needs c > 0 and tau > 0")
        if not self.shape > 0:
            raise ValueError("Kotz type I needs sigma_exp > -tau for a proper density")
        if self.K is not None and not math.isclose(self.K, self.tail_constant, rel_tol=1e-9):
            raise ValueError(
                f"K={self.K} is inconsistent with c, tau, sigma_exp; "
                f"the normalised density implies K={self.tail_constant!r}"
            )

    @property
    def shape(self) -> float:
        return 1.0 + self.sigma_exp / self.tau

    @property
    def tail_constant(self) -> float:
        return math.exp(self.sigma_exp / self.tau * math.log(self.c) - special.gammaln(self.shape))

    def _sf(self, x):
        return special.gammaincc(self.shape, self.c * x**self.tau)

    def _ppf(self, p):
        return (special.gammaincinv(self.shape, p) / self.c) ** (1.0 / self.tau)

    def _isf(self, q):
        return (special.gammainccinv(self.shape, q) / self.c) ** (1.0 / self.tau)

    def _pdf(self, x):
        k = self.shape
        logd = (
            math.log(self.tau)
            + k * math.log(self.c)
            + (k * self.tau - 1.0) * np.log(x)
            - self.c * x**self.tau
            - special.gammaln(k)
        )
        return np.exp(logd)

    def mda(self) -> Gumbel:
        c, tau = self.c, self.tau
        return Gumbel(lambda x: c * tau * x ** (tau - 1.0))

    def to_config(self) -> dict:
        return {"kind": "kotz", "c": self.c, "tau": self.tau, "sigma_exp": self.sigma_exp}


@dataclass(frozen=True)
class Rayleigh(RadiusLaw):
    """Radius with ``R^2`` chi-square(2); then ``X`` and ``Y`` are iid N(0, 1)."""

    kind = "rayleigh"

    def _sf(self, x):
        return np.exp(-0.5 * x * x)

    def _ppf(self, p):
        return np.sqrt(-2.0 * np.log1p(-p))

    def _isf(self, q):
        return np.sqrt(-2.0 * np.log(q))

    def _pdf(self, x):
        return x * np.exp(-0.5 * x * x)

    def mda(self) -> Gumbel:
        return Gumbel(lambda x: x)

    def to_config(self) -> dict:
        return {"kind": "rayleigh"}


@dataclass(frozen=True)
class Uniform01(RadiusLaw):
    kind = "uniform01"
    endpoint = 1.0

    def _sf(self, x):
        return 1.0 - x

    def _tail_at_endpoint(self, u):
        return u

    def _ppf(self, p):
        return p

    def _isf(self, q):
        return 1.0 - q

    def _pdf(self, x):
        return np.ones_like(x)

    def mda(self) -> Weibull:
        return Weibull(1.0)

    def to_config(self) -> dict:
        return {"kind": "uniform01"}


@dataclass(frozen=True)
class BetaRadius(RadiusLaw):
    """Beta(a, b) radius on (0, 1); Weibull MDA with index ``b``."""

    a: float
    b: float

    kind = "beta"
    endpoint = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("Beta radius needs a > 0 and b > 0")

    def _sf(self, x):
        return special.betainc(self.b, self.a, 1.0 - x)

    def _tail_at_endpoint(self, u):
        return special.betainc(self.b, self.a, u)

    def _ppf(self, p):
        return special.betaincinv(self.a, self.b, p)

    def _isf(self, q):
        return 1.0 - special.betaincinv(self.b, self.a, q)

    def _pdf(self, x):
        return np.exp(
            (self.a - 1.0) * np.log(x) + (self.b - 1.0) * np.log1p(-x) - special.betaln(self.a, self.b)
        )

    def mda(self) -> Weibull:
        return Weibull(float(self.b))

    def to_config(self) -> dict:
        return {"kind": "beta", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class TableLaw(RadiusLaw):
    """Survival function tabulated on a grid, interpolated log-linearly.

    ``x`` must start at 0 with ``sf`` equal to 1 there. If the last survival
    value is 0 the law has endpoint ``x[-1]`` (which must be 1); otherwise
    the last segment's log-slope is extrapolated and the endpoint is
    infinite. Segments ending at a zero are interpolated linearly.
    """

    x: Tuple[float, ...]
    sf: Tuple[float, ...]
    mda_class: Optional[MdaClass] = None

    kind = "table"

    def __post_init__(self):
        xs = np.asarray(self.x, dtype=float)
        sfs = np.asarray(self.sf, dtype=float)
        if xs.ndim != 1 or xs.shape != sfs.shape or xs.size < 2:
            raise ValueError("table needs matching 1-d x and sf with at least two points")
        if xs[0] != 0.0 or sfs[0] != 1.0:
            raise ValueError("table must start at x=0 with sf=1")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("table x must be strictly increasing")
        if np.any(np.diff(sfs) > 0) or np.any(sfs < 0):
            raise ValueError("table sf must be non-increasing and non-negative")
        if np.any(sfs[:-1] == 0):
            raise ValueError("only the last table point may carry sf=0")
        if sfs[-1] == 0 and xs[-1] != 1.0:
            raise ValueError("a finite endpoint must be normalised to 1; rescale the table")
        if sfs[-1] > 0 and not sfs[-1] < sfs[-2]:
            raise ValueError("an unbounded table needs a strictly decaying last segment")
        object.__setattr__(self, "x", tuple(float(v) for v in xs))
        object.__setattr__(self, "sf", tuple(float(v) for v in sfs))
        object.__setattr__(self, "endpoint", 1.0 if sfs[-1] == 0 else math.inf)

    def _sf(self, x):
        xs = np.asarray(self.x)
        sfs = np.asarray(self.sf)
        last = xs.size - 1
        i = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, last - 1)
        x0, x1 = xs[i], xs[i + 1]
        s0, s1 = sfs[i], sfs[i + 1]
        t = (x - x0) / (x1 - x0)
        with np.errstate(divide="ignore", invalid="ignore"):
            loglin = np.exp(np.log(s0) + t * (np.log(s1) - np.log(s0)))
        return np.where(s1 > 0, loglin, s0 * (1.0 - t))

    def _pdf(self, x):
        h = 1e-7 * np.maximum(x, 1e-3)
        lo = np.maximum(x - h, 0.0)
        return (self.survival(lo) - self.survival(np.minimum(x + h, self.endpoint))) / (
            np.minimum(x + h, self.endpoint) - lo
        )

    def mda(self) -> MdaClass:
        if self.mda_class is None:
            raise UnclassifiableError("a tabulated law needs an explicitly declared MDA class")
        return self.mda_class

    def to_config(self) -> dict:
        cfg = {"kind": "table", "x": list(self.x), "sf": list(self.sf)}
        if isinstance(self.mda_class, Weibull):
            cfg["mda"] = {"weibull": self.mda_class.alpha}
        return cfg


# -- operation-style functions --------------------------------------------


def survival(law: RadiusLaw, x):
    return law.survival(x)


def quantile(law: RadiusLaw, p):
    return law.quantile(p)


def mda(law: RadiusLaw) -> MdaClass:
    return law.mda()


def sample_radius(law: RadiusLaw, u):
    """Inverse-transform draw: the radius at uniform level ``u``."""
    return law.quantile(u)


_CONFIG_KEYS = {
    "kotz": {"c", "tau", "sigma_exp", "K"},
    "beta": {"a", "b"},
    "rayleigh": set(),
    "uniform01": set(),
    "table": {"x", "sf", "mda"},
}
_REQUIRED_KEYS = {"kotz": {"c", "tau"}, "beta": {"a", "b"}, "table": {"x", "sf"}}


def law_from_config(cfg: dict) -> RadiusLaw:
    """Build a law from its JSON description, e.g. ``{"kind": "beta", "a": 2, "b": 3}``.

    Tabulated laws accept ``"mda": {"weibull": alpha}`` or
    ``"mda": {"gumbel": {"coef": k, "power": p}}`` meaning ``w(x) = k x^p``.
    """
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    if kind not in _CONFIG_KEYS:
        raise ValueError(f"unknown radius kind {kind!r}; expected one of {sorted(_CONFIG_KEYS)}")
    unknown = set(cfg) - _CONFIG_KEYS[kind]
    if unknown:
        raise ValueError(f"unknown key(s) for radius kind {kind!r}: {', '.join(sorted(unknown))}")
    missing = _REQUIRED_KEYS.get(kind, set()) - set(cfg)
    if missing:
        raise ValueError(f"radius kind {kind!r} needs key(s): {', '.join(sorted(missing))}")
    if kind == "kotz":
        return KotzTypeI(
            c=float(cfg["c"]),
            tau=float(cfg["tau"]),
            sigma_exp=float(cfg.get("sigma_exp", 0.0)),
            K=None if cfg.get("K") is None else float(cfg["K"]),
        )
    if kind == "beta":
        return BetaRadius(float(cfg["a"]), float(cfg["b"]))
    if kind == "rayleigh":
        return Rayleigh()
    if kind == "uniform01":
        return Uniform01()
    mda_cfg = cfg.get("mda")
    mda_class: Optional[MdaClass] = None
    if mda_cfg is not None:
        if "weibull" in mda_cfg:
            mda_class = Weibull(float(mda_cfg["weibull"]))
        elif "gumbel" in mda_cfg:
            coef = float(mda_cfg["gumbel"]["coef"])
            power = float(mda_cfg["gumbel"]["power"])
            mda_class = Gumbel(lambda x: coef * x**power)
        else:
            raise ValueError("table mda must be {'weibull': alpha} or {'gumbel': {...}}")
    return TableLaw(tuple(cfg["x"]), tuple(cfg["sf"]), mda_class)
