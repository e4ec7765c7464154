"""Monte Carlo convergence experiments for normalized componentwise maxima.

For every row size ``n`` in a schedule the harness computes the norming
constants and ``ρ_n``, simulates ``reps`` rows, normalizes their maxima
and compares the empirical joint df on a grid with the matching limit
law. Replication ``r`` always reads stream ``r`` of the seed, starting at
draw 0, so all row sizes share common random numbers and the result does
not depend on the number of worker threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import limitlaws
from .exceptions import DomainError, InfeasibleError
from .marginal import (
    GumbelNorming,
    norming_gumbel,
    norming_weibull,
    rho_from_lambda_gumbel,
    rho_from_lambda_weibull,
)
from .oracle import skew_margin_tail
from .radius import Gumbel, RadiusLaw, Rayleigh, Weibull, law_from_config
from .sampler import MODEL_NAMES, RngStream, TwoSkew, centering, model_from_name, row_maxima

__all__ = [
    "ExperimentConfig",
    "ConvergenceReport",
    "LimitFamily",
    "limit_family",
    "default_grid",
    "simulate_maxima",
    "run_convergence",
    "ks_distance",
    "appendix_gaussian_check",
    "fmt",
    "round15",
]

MIN_REPS = 100
GUMBEL_GRID_PROBS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
WEIBULL_GRID_AXIS = (-2.0, -1.5, -1.0, -0.5, -0.25, -0.1)


def fmt(value: float) -> str:
    """Fifteen significant digits, the machine-output convention."""
    return "%.15g" % value


def round15(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return float(fmt(value))
    if isinstance(value, dict):
        return {k: round15(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round15(v) for v in value]
    return value


def _parse_lambda(value) -> Optional[float]:
    if value is None:
        return None
    lam = float(value)  # accepts "inf"
    if math.isnan(lam) or lam < 0:
        raise DomainError(f"lambda must lie in [0, inf], got {value}")
    return lam


@dataclass(frozen=True)
class ExperimentConfig:
    """One convergence experiment.

    ``radius`` is a radius-law description as accepted by
    :func:`~skewmax.radius.law_from_config`. ``lam2`` is required for the
    two-skew model and ``rho_fixed`` when a ``λ`` is infinite. An empty
    ``grid`` selects the family's default grid.
    """

    radius: dict
    model: str
    lam: float
    n_schedule: Tuple[int, ...]
    reps: int
    seed: int
    lam2: Optional[float] = None
    rho_fixed: Optional[float] = None
    grid: Tuple[Tuple[float, float], ...] = ()

    KEYS = ("radius", "model", "lam", "lam2", "rho_fixed", "n_schedule", "reps", "seed", "grid")

    def __post_init__(self):
        if self.model not in MODEL_NAMES:
            raise DomainError(f"unknown model {self.model!r}; expected one of {MODEL_NAMES}")
        object.__setattr__(self, "lam", _parse_lambda(self.lam))
        object.__setattr__(self, "lam2", _parse_lambda(self.lam2))
        if self.lam is None:
            raise DomainError("lambda is required")
        if self.model == "two-skew" and self.lam2 is None:
            raise DomainError("the two-skew model needs lambda2")
        if int(self.reps) != self.reps or self.reps < MIN_REPS:
            raise DomainError(f"reps must be an integer >= {MIN_REPS}, got {self.reps}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an integer in [0, 2**64), got {self.seed}")
        sched = tuple(int(n) for n in self.n_schedule)
        if not sched or any(n < 2 for n in sched):
            raise DomainError("n_schedule must be a non-empty list of integers >= 2")
        object.__setattr__(self, "n_schedule", sched)
        object.__setattr__(self, "grid", tuple((float(x), float(y)) for x, y in self.grid))
        fam = limit_family(self.law(), self.model)
        if fam.mda == "weibull" and any(x >= 0 or y >= 0 for x, y in self.grid):
            raise DomainError("Weibull-family grid points need x < 0 and y < 0")

    def law(self) -> RadiusLaw:
        return law_from_config(self.radius)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - set(cls.KEYS)
        if unknown:
            raise DomainError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        return cls(**d)

    def to_dict(self) -> dict:
        return {
            "radius": dict(self.radius),
            "model": self.model,
            "lam": self.lam,
            "lam2": self.lam2,
            "rho_fixed": self.rho_fixed,
            "n_schedule": list(self.n_schedule),
            "reps": self.reps,
            "seed": self.seed,
            "grid": [list(p) for p in self.resolved_grid()],
        }

    def family(self) -> "LimitFamily":
        return limit_family(self.law(), self.model)

    def resolved_grid(self) -> Tuple[Tuple[float, float], ...]:
        return self.grid if self.grid else default_grid(self.family().mda)


@dataclass(frozen=True)
class LimitFamily:
    """Limit df and its margins for a (radius MDA, model) combination."""

    name: str
    mda: str
    alpha: Optional[float]

    def joint(self, cfg: ExperimentConfig) -> Callable:
        lam, lam2 = cfg.lam, cfg.lam2
        if self.name == "hr":
            return lambda x, y: limitlaws.husler_reiss(lam, x, y)
        if self.name == "half-skew-gumbel":
            return lambda x, y: limitlaws.half_skew_gumbel_limit(lam, x, y)
        if self.name == "two-skew-gumbel":
            return lambda x, y: limitlaws.two_skew_gumbel_limit(lam, lam2, x, y)
        if self.name == "weibull-half-skew":
            return lambda x, y: limitlaws.weibull_half_skew_limit(self.alpha, lam, x, y)
        return lambda x, y: limitlaws.weibull_two_skew_limit(self.alpha, lam, lam2, x, y)

    def margins(self) -> Tuple[Callable, Callable]:
        if self.mda == "gumbel":
            return limitlaws.gumbel_df, limitlaws.gumbel_df
        a = self.alpha
        first = 1.0 if self.name == "weibull-half-skew" else 2.0
        return (lambda t: limitlaws.weibull_margin(a, t, first)), (lambda t: limitlaws.weibull_margin(a, t, 2.0))


def limit_family(law: RadiusLaw, model: str) -> LimitFamily:
    """Select the limit law matching the radius MDA and the array model.

    Gumbel radii: Hüsler-Reiss for the elliptical and skew models (the skew
    model after the ``a_n ln 2`` shift of both coordinates), the half-skew
    limit, and ``H_{|λ1-λ2|}`` for two-skew. Weibull radii: the half-skew
    and two-skew surfaces; the other models have no registered limit.
    """
    cls = law.mda()
    if isinstance(cls, Gumbel):
        name = {"elliptical": "hr", "skew": "hr", "half-skew": "half-skew-gumbel", "two-skew": "two-skew-gumbel"}[
            model
        ]
        return LimitFamily(name=name, mda="gumbel", alpha=None)
    assert isinstance(cls, Weibull)
    if model == "half-skew":
        return LimitFamily(name="weibull-half-skew", mda="weibull", alpha=cls.alpha)
    if model == "two-skew":
        return LimitFamily(name="weibull-two-skew", mda="weibull", alpha=cls.alpha)
    raise DomainError(f"no limit law is registered for the {model} model with a Weibull-class radius")


def default_grid(mda_kind: str) -> Tuple[Tuple[float, float], ...]:
    if mda_kind == "gumbel":
        axis = [-math.log(-math.log(p)) for p in GUMBEL_GRID_PROBS]
    else:
        axis = list(WEIBULL_GRID_AXIS)
    return tuple((x, y) for x in axis for y in axis)


def _norming(law: RadiusLaw, n: int):
    if isinstance(law.mda(), Gumbel):
        return norming_gumbel(law, n)
    return norming_weibull(law, n)


def _rho(lam: float, nc, rho_fixed: Optional[float]) -> float:
    try:
        if isinstance(nc, GumbelNorming):
            return rho_from_lambda_gumbel(lam, nc, rho_fixed)
        return rho_from_lambda_weibull(lam, nc, rho_fixed)
    except InfeasibleError as exc:
        raise InfeasibleError(f"infeasible correlation at n={nc.n}: {exc}") from None


def _model_at(cfg_model: str, lam: float, lam2: Optional[float], nc, rho_fixed):
    rho = _rho(lam, nc, rho_fixed)
    if cfg_model == "two-skew":
        return model_from_name("two-skew", rho, _rho(lam2, nc, rho_fixed))
    return model_from_name(cfg_model, rho)


@dataclass
class MaximaSample:
    """Raw and normalized maxima of ``reps`` rows of length ``n``."""

    n: int
    model: object
    norming: object
    m1: np.ndarray
    m2: np.ndarray
    z1: np.ndarray
    z2: np.ndarray


def simulate_maxima(
    law: RadiusLaw,
    model: str,
    lam: float,
    n: int,
    reps: int,
    seed: int,
    lam2: Optional[float] = None,
    rho_fixed: Optional[float] = None,
    workers: int = 1,
) -> MaximaSample:
    """Row maxima for replications ``0 .. reps-1``, each on its own stream."""
    nc = _norming(law, n)
    arr = _model_at(model, lam, lam2, nc, rho_fixed)
    m1 = np.empty(reps)
    m2 = np.empty(reps)

    def one(r: int):
        res = row_maxima(law, arr, n, RngStream(seed, r))
        m1[r] = res.m1
        m2[r] = res.m2

    workers = max(1, int(workers))
    if workers == 1:
        for r in range(reps):
            one(r)
    else:
        # each replication writes only its own slot, so order of completion is irrelevant
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, range(reps), chunksize=max(1, reps // (8 * workers))))
    c1, c2, scale = centering(nc, arr)
    return MaximaSample(n=n, model=arr, norming=nc, m1=m1, m2=m2, z1=(m1 - c1) / scale, z2=(m2 - c2) / scale)


def ks_distance(samples: Sequence[float], df: Callable) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the sample df and ``df``."""
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    k = s.size
    if k == 0:
        raise DomainError("ks_distance needs at least one sample")
    f = np.asarray(df(s), dtype=float).reshape(k)
    i = np.arange(1, k + 1)
    return float(max(np.max(i / k - f), np.max(f - (i - 1) / k), 0.0))


@dataclass
class ConvergenceReport:
    rows: List[Tuple[int, float, float, float, float, float]]
    per_n: List[dict]
    family: str
    config: dict
    wall_time: float = 0.0
    meta: dict = field(default_factory=dict)

    def sup_gaps(self) -> List[float]:
        return [p["sup_gap"] for p in self.per_n]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "x", "y", "empirical", "theoretical", "gap"])
        for n, x, y, emp, theo, gap in self.rows:
            w.writerow([n, fmt(x), fmt(y), fmt(emp), fmt(theo), fmt(gap)])
        return buf.getvalue()

    def summary(self) -> dict:
        """JSON-ready summary; ``runtime`` is the only non-deterministic part."""
        return round15(
            {
                "family": self.family,
                "seed": self.config["seed"],
                "config": self.config,
                "per_n": self.per_n,
                "runtime": {"wall_time_s": self.wall_time, **self.meta},
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def run_convergence(cfg: ExperimentConfig, workers: int = 1) -> ConvergenceReport:
    """Compare empirical and limiting joint dfs of normalized maxima for every ``n``."""
    start = time.perf_counter()
    law = cfg.law()
    fam = cfg.family()
    grid = np.array(cfg.resolved_grid(), dtype=float)
    gx, gy = grid[:, 0], grid[:, 1]
    theo = np.asarray(fam.joint(cfg)(gx, gy), dtype=float).reshape(len(grid))
    marg1, marg2 = fam.margins()

    # fail before simulating anything if some n is infeasible
    for n in cfg.n_schedule:
        _model_at(cfg.model, cfg.lam, cfg.lam2, _norming(law, n), cfg.rho_fixed)

    rows = []
    per_n = []
    for n in cfg.n_schedule:
        smp = simulate_maxima(law, cfg.model, cfg.lam, n, cfg.reps, cfg.seed, cfg.lam2, cfg.rho_fixed, workers)
        below = (smp.z1[None, :] <= gx[:, None]) & (smp.z2[None, :] <= gy[:, None])
        emp = below.mean(axis=1)
        gaps = np.abs(emp - theo)
        for j in range(len(grid)):
            rows.append((n, gx[j], gy[j], float(emp[j]), float(theo[j]), float(gaps[j])))
        nc = smp.norming
        entry = {
            "n": n,
            "sup_gap": float(gaps.max()),
            "ks_x": ks_distance(smp.z1, marg1),
            "ks_y": ks_distance(smp.z2, marg2),
            "norming": {"a_n": nc.a_n, "b_n": nc.b_n} if isinstance(nc, GumbelNorming) else {"u_n": nc.u_n},
        }
        if isinstance(smp.model, TwoSkew):
            entry["rho_n"] = [smp.model.rho1, smp.model.rho2]
        else:
            entry["rho_n"] = smp.model.rho
        per_n.append(entry)
    wall = time.perf_counter() - start
    return ConvergenceReport(
        rows=rows, per_n=per_n, family=fam.name, config=cfg.to_dict(), wall_time=wall, meta={"workers": workers}
    )


def appendix_gaussian_check(
    n_schedule: Sequence[int], y_grid: Sequence[float], lam: float = 1.0
) -> List[Dict[str, float]]:
    """``n P(ρ_n|X| + sqrt(1-ρ_n²) Y > a_n y + b_n)`` for the Gaussian case versus ``2 e^{-y}``.

    Uses the Rayleigh radius, so ``X`` is standard normal.
    """
    law = Rayleigh()
    out = []
    for n in n_schedule:
        nc = norming_gumbel(law, n)
        rho = rho_from_lambda_gumbel(lam, nc)
        for y in y_grid:
            value = n * skew_margin_tail(law, rho, nc.a_n * y + nc.b_n)
            target = 2.0 * math.exp(-y)
            out.append({"n": n, "y": y, "value": value, "target": target, "rel_error": abs(value / target - 1.0)})
    return out
