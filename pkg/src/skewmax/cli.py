"""Command-line front end: ``skewmax <subcommand> ...``.

Exit codes: 0 success, 2 usage or domain error, 3 infeasible parameter
regime (a ``λ`` that drives some ``ρ_n`` out of ``(0, 1]``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from importlib import resources
from typing import List, Optional

from . import limitlaws, oracle
from .exceptions import InfeasibleError
from .marginal import norming_gumbel, norming_weibull
from .mcharness import ExperimentConfig, round15, fmt, run_convergence, simulate_maxima
from .radius import Gumbel, law_from_config
from .sampler import MODEL_NAMES, TwoSkew

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3

PRESETS = ("rayleigh-half-skew", "rayleigh-two-skew", "uniform01-half-skew", "uniform01-two-skew")

SIMULATE_KEYS = {"radius", "model", "lambda", "lambda2", "rho_fixed", "n", "reps", "seed", "workers", "out"}
CONVERGE_KEYS = {"radius", "model", "lambda", "lambda2", "rho_fixed", "n_schedule", "reps", "seed", "grid", "workers", "out"}


class UsageError(Exception):
    pass


def parse_radius(spec) -> dict:
    """``"beta:a=2,b=3"`` -> ``{"kind": "beta", "a": 2.0, "b": 3.0}``; dicts pass through."""
    if isinstance(spec, dict):
        return dict(spec)
    kind, _, rest = str(spec).partition(":")
    cfg = {"kind": kind.strip()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise UsageError(f"bad radius parameter {item!r}; expected key=value")
        try:
            cfg[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"radius parameter {key!r} needs a number, got {value!r}") from None
    return cfg


def _law(spec):
    return law_from_config(parse_radius(spec))


def _default_workers() -> int:
    env = os.environ.get("SKEWMAX_WORKERS")
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise UsageError(f"SKEWMAX_WORKERS must be an integer, got {env!r}") from None


def _load_config(path: Optional[str], preset: Optional[str], allowed: set) -> dict:
    if path and preset:
        raise UsageError("use either --config or --preset, not both")
    if preset:
        text = resources.files("skewmax").joinpath("configs", f"{preset}.json").read_text()
    elif path:
        with open(path) as fh:
            text = fh.read()
    else:
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    return doc


def _merge(doc: dict, args: argparse.Namespace, mapping: dict) -> dict:
    """Flags that were given override config values."""
    out = dict(doc)
    for key, attr in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            out[key] = value
    return out


def _write(prefix: str, csv_text: str, summary: dict):
    folder = os.path.dirname(prefix)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(prefix + ".csv", "w", newline="") as fh:
        fh.write(csv_text)
    with open(prefix + ".json", "w") as fh:
        fh.write(json.dumps(round15(summary), indent=2, sort_keys=True) + "\n")


# subcommands


def cmd_eval_limit(args) -> int:
    fam = args.family
    x, y = args.x, args.y

    def need(*names):
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise UsageError(f"family {fam} needs --{', --'.join(m.replace('_', '-') for m in missing)}")

    if fam == "hr":
        need("lam")
        value = limitlaws.husler_reiss(args.lam, x, y)
    elif fam == "half-skew-gumbel":
        need("lam")
        value = limitlaws.half_skew_gumbel_limit(args.lam, x, y)
    elif fam == "two-skew-gumbel":
        need("lambda1", "lambda2")
        value = limitlaws.two_skew_gumbel_limit(args.lambda1, args.lambda2, x, y)
    elif fam == "weibull-half-skew":
        need("alpha", "lam")
        value = limitlaws.weibull_half_skew_limit(args.alpha, args.lam, x, y)
    else:
        need("alpha", "lambda1", "lambda2")
        value = limitlaws.weibull_two_skew_limit(args.alpha, args.lambda1, args.lambda2, x, y)
    print(fmt(float(value)))
    return EXIT_OK


def cmd_norming(args) -> int:
    law = _law(args.radius)
    kind = args.mda or ("gumbel" if isinstance(law.mda(), Gumbel) else "weibull")
    if kind == "gumbel":
        nc = norming_gumbel(law, args.n)
        out = {"a_n": nc.a_n, "b_n": nc.b_n}
    else:
        nc = norming_weibull(law, args.n)
        out = {"u_n": nc.u_n}
    print(json.dumps(round15(out), sort_keys=True))
    return EXIT_OK


def cmd_oracle(args) -> int:
    law = _law(args.radius)
    if args.kind == "joint-tail":
        value = oracle.joint_tail(law, args.rho, args.x, args.y)
    elif args.kind == "skew-margin":
        value = oracle.skew_margin_tail(law, args.rho, args.x)
    else:
        value = oracle.res00_ratio(law, args.lam, args.x, args.n)
    print(fmt(value))
    return EXIT_OK


_SIM_FLAGS = {
    "radius": "radius",
    "model": "model",
    "lambda": "lam",
    "lambda2": "lambda2",
    "rho_fixed": "rho_fixed",
    "n": "n",
    "reps": "reps",
    "seed": "seed",
    "workers": "workers",
    "out": "out",
}


def _require(cfg: dict, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError(f"missing required setting(s): {', '.join(missing)}")


def cmd_simulate(args) -> int:
    cfg = _merge(_load_config(args.config, None, SIMULATE_KEYS), args, _SIM_FLAGS)
    _require(cfg, "radius", "model", "lambda", "n", "reps", "seed")
    radius = parse_radius(cfg["radius"])
    law = law_from_config(radius)
    reps, n, seed = int(cfg["reps"]), int(cfg["n"]), int(cfg["seed"])
    if reps < 1:
        raise UsageError("reps must be positive")
    lam = float(cfg["lambda"])
    lam2 = None if cfg.get("lambda2") is None else float(cfg["lambda2"])
    if cfg["model"] == "two-skew" and lam2 is None:
        raise UsageError("the two-skew model needs --lambda2")
    workers = int(cfg.get("workers") or _default_workers())
    smp = simulate_maxima(law, cfg["model"], lam, n, reps, seed, lam2, cfg.get("rho_fixed"), workers)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rep", "n", "m1", "m2", "z1", "z2"])
    for r in range(reps):
        w.writerow([r, n, fmt(smp.m1[r]), fmt(smp.m2[r]), fmt(smp.z1[r]), fmt(smp.z2[r])])
    nc = smp.norming
    rho = [smp.model.rho1, smp.model.rho2] if isinstance(smp.model, TwoSkew) else smp.model.rho
    echo = {
        "radius": radius,
        "model": cfg["model"],
        "lambda": lam,
        "lambda2": lam2,
        "rho_fixed": cfg.get("rho_fixed"),
        "n": n,
        "reps": reps,
        "seed": seed,
    }
    summary = {"config": echo, "seed": seed, "norming": vars(nc), "rho_n": rho, "runtime": {"workers": workers}}
    prefix = cfg.get("out") or "skewmax-simulate"
    _write(prefix, buf.getvalue(), summary)
    print(f"simulate: {reps} rows of n={n} -> {prefix}.csv, {prefix}.json")
    return EXIT_OK


_CONV_FLAGS = {
    "radius": "radius",
    "model": "model",
    "lambda": "lam",
    "lambda2": "lambda2",
    "rho_fixed": "rho_fixed",
    "n_schedule": "n_schedule",
    "reps": "reps",
    "seed": "seed",
    "workers": "workers",
    "out": "out",
}


def cmd_converge(args) -> int:
    doc = _load_config(args.config, args.preset, CONVERGE_KEYS)
    if not doc and not args.config:
        doc = _load_config(None, "rayleigh-half-skew", CONVERGE_KEYS)
    cfg = _merge(doc, args, _CONV_FLAGS)
    if cfg.get("seed") is None:
        raise UsageError("converge needs --seed (or a seed in the config file)")
    _require(cfg, "radius", "model", "lambda", "n_schedule", "reps")
    exp = ExperimentConfig(
        radius=parse_radius(cfg["radius"]),
        model=cfg["model"],
        lam=cfg["lambda"],
        lam2=cfg.get("lambda2"),
        rho_fixed=cfg.get("rho_fixed"),
        n_schedule=tuple(cfg["n_schedule"]),
        reps=int(cfg["reps"]),
        seed=int(cfg["seed"]),
        grid=tuple(tuple(p) for p in cfg.get("grid") or ()),
    )
    workers = int(cfg.get("workers") or _default_workers())
    report = run_convergence(exp, workers=workers)
    prefix = cfg.get("out") or "skewmax-converge"
    _write(prefix, report.to_csv(), report.summary())
    gaps = ", ".join(fmt(g) for g in report.sup_gaps())
    print(f"converge: family={report.family} sup_gap=[{gaps}] -> {prefix}.csv, {prefix}.json")
    return EXIT_OK


def _n_schedule(text: str) -> List[int]:
    try:
        return [int(float(s)) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n schedule {text!r}; expected e.g. 256,4096,65536") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewmax", description="Maxima of skew elliptical triangular arrays.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval-limit", help="evaluate a bivariate limit df")
    e.add_argument("--family", required=True, choices=limitlaws.FAMILIES)
    e.add_argument("--lambda", dest="lam", type=float)
    e.add_argument("--lambda1", type=float)
    e.add_argument("--lambda2", type=float)
    e.add_argument("--alpha", type=float)
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--y", type=float, required=True)
    e.set_defaults(func=cmd_eval_limit)

    nm = sub.add_parser("norming", help="norming constants of the first coordinate's maxima")
    nm.add_argument("--radius", required=True, help="radius law, e.g. rayleigh, uniform01, beta:a=2,b=3")
    nm.add_argument("--n", type=int, required=True)
    nm.add_argument("--mda", choices=("gumbel", "weibull"), help="assert the domain of attraction")
    nm.set_defaults(func=cmd_norming)

    o = sub.add_parser("oracle", help="exact finite-n probabilities by angular quadrature")
    o.add_argument("kind", choices=("joint-tail", "skew-margin", "res00"))
    o.add_argument("--radius", required=True)
    o.add_argument("--rho", type=float)
    o.add_argument("--lambda", dest="lam", type=float)
    o.add_argument("--x", type=float, required=True)
    o.add_argument("--y", type=float)
    o.add_argument("--n", type=int)
    o.set_defaults(func=cmd_oracle)

    for name, func, helptext in (
        ("simulate", cmd_simulate, "simulate normalized row maxima"),
        ("converge", cmd_converge, "convergence experiment against the limit df"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--config", help="JSON config file; flags override its values")
        s.add_argument("--radius")
        s.add_argument("--model", choices=MODEL_NAMES)
        s.add_argument("--lambda", dest="lam", type=float)
        s.add_argument("--lambda2", type=float)
        s.add_argument("--rho-fixed", dest="rho_fixed", type=float, help="correlation used when lambda is inf")
        s.add_argument("--reps", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--workers", type=int, help="thread count (default: $SKEWMAX_WORKERS or 1)")
        s.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
        if name == "simulate":
            s.add_argument("--n", type=int)
        else:
            s.add_argument("--n-schedule", dest="n_schedule", type=_n_schedule)
            s.add_argument("--preset", choices=PRESETS)
        s.set_defaults(func=func)
    return p


def _oracle_args_check(args):
    if args.command != "oracle":
        return
    need = {"joint-tail": ("rho", "y"), "skew-margin": ("rho",), "res00": ("lam", "n")}[args.kind]
    missing = [k for k in need if getattr(args, k) is None]
    if missing:
        flags = ", ".join("--lambda" if k == "lam" else f"--{k}" for k in missing)
        raise UsageError(f"oracle {args.kind} needs {flags}")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _attach_negative_values(argv: List[str]) -> List[str]:
    """Rewrite ``--y -1e-9`` as ``--y=-1e-9``.

    argparse only recognises plain negative decimals as values, not
    exponent forms such as ``-1e-9`` or ``-inf``.
    """
    out: List[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if tok.startswith("-") and _is_number(tok) and prev.startswith("--") and "=" not in prev:
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        _oracle_args_check(args)
        return args.func(args)
    except InfeasibleError as exc:
        print(f"skewmax: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, ValueError, OSError) as exc:
        print(f"skewmax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
