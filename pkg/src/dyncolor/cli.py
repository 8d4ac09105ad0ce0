"""Command-line front end: trace generation, metered runs, scaling fits.

Exit codes: 0 clean, 1 invariant violation detected, 2 usage error,
3 engine failure.  Operation counts (not wall clock) are the primary
measurand; wall-clock timings live under the "timing" key so that
everything else is byte-stable for a fixed (seed, trace, config).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import statistics
import sys
import time
from fractions import Fraction

import numpy as np

from . import adversary as adv
from .config import Config, auto_zeta
from .engine import Engine, EngineFailure, Update
from .report import summarize

METRICS_SCHEMA = "dyncolor-metrics/1"
EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_ENGINE = 3

# epsilon = 1/110 needs Delta*eps^2 >= 1 before the dense machinery can
# engage at all; below that the small-graph fallback 1/8 is used
EPS_LARGE = Fraction(1, 110)
EPS_SMALL = Fraction(1, 8)
EPS_DELTA_FLOOR = 110 * 110


class UsageError(Exception):
    pass


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("COLOR_SEED")
    if env is not None:
        return int(env)
    return 0


def resolve_epsilon(delta: int, flag: str | None) -> tuple[Fraction, str]:
    if flag is not None:
        eps = Fraction(flag)
        return eps, "explicit"
    if delta >= EPS_DELTA_FLOOR:
        return EPS_LARGE, "default-large-delta"
    return EPS_SMALL, "fallback-small-delta"


def resolve_zeta(n: int, flag: str) -> int:
    if flag == "auto":
        return auto_zeta(n)
    z = int(flag)
    if z < 1:
        raise UsageError("zeta must be >= 1 or 'auto'")
    return z


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args: argparse.Namespace) -> int:
    if args.n < 2 or args.delta < 1 or args.delta > args.n - 1:
        raise UsageError("need n >= 2 and 1 <= delta <= n-1")
    if args.steps < 0:
        raise UsageError("steps must be >= 0")
    seed = resolve_seed(args.seed)
    stream = adv.oblivious_adversary(args.n, args.delta, args.steps, args.density, seed)
    adv.record_trace(args.out, args.n, args.delta, stream)
    print(f"wrote {len(stream)} updates to {args.out}")
    return EXIT_OK


def _aggregate(values: list[int]) -> dict:
    if not values:
        return {"mean": 0.0, "median": 0.0, "max": 0}
    return {
        "mean": statistics.fmean(values),
        "median": statistics.median(values),
        "max": max(values),
    }


def run_engine(
    *,
    n: int,
    delta: int,
    cfg: Config,
    seed: int,
    mode: str,
    verify: str,
    updates=None,
    adversary: str | None = None,
    steps: int = 0,
    initial_edges=None,
    certify=None,
    reset_meter: bool = False,
) -> dict:
    """Drive one engine run and return the metrics document.

    With reset_meter=True the cost of coloring the initial graph is
    dropped, so amortized figures cover update work only (including the
    phase-boundary recolorings triggered by the updates themselves).
    """
    t0 = time.perf_counter()
    eng = Engine(
        n,
        delta,
        cfg,
        seed=seed,
        mode=mode,
        verify="off" if verify == "off" else "phase",
        initial_edges=initial_edges,
        certify_decomposition=certify,
    )
    if reset_meter:
        from .engine import CostMeter

        eng.meter = CostMeter()
    view = adv.AdversaryView(eng)
    dview = adv.DecompositionView(eng)
    arng = None
    if adversary is not None:
        import random as _random

        arng = _random.Random(seed ^ 0x5EED)

    trials: list[int] = []
    scans: list[int] = []
    probes: list[int] = []
    violations = []
    applied = 0
    last_fresh = eng.meter.fresh_runs

    def sweep() -> None:
        nonlocal violations
        violations += eng.verify_now()

    def step(upd: Update) -> None:
        nonlocal applied, last_fresh
        rep = eng.apply(upd)
        applied += 1
        trials.append(rep.color_trials)
        scans.append(rep.class_scans)
        probes.append(rep.palette_probes)
        if verify == "every":
            sweep()
        elif verify == "phase" and eng.meter.fresh_runs != last_fresh:
            sweep()
        last_fresh = eng.meter.fresh_runs

    if updates is not None:
        for upd in updates:
            step(upd)
    else:
        gens = {
            "conflict": lambda: adv.conflict_adversary(view, arng),
            "matching": lambda: adv.matching_attacker(view, dview, arng),
        }
        if adversary == "oblivious":
            for upd in adv.oblivious_adversary(n, delta, steps, 0.5, seed ^ 0x5EED):
                step(upd)
        elif adversary in gens:
            for _ in range(steps):
                step(gens[adversary]())
        else:
            raise UsageError(f"unknown adversary {adversary!r}")

    if verify != "off":
        sweep()
    wall = time.perf_counter() - t0

    m = eng.meter
    doc = {
        "schema": METRICS_SCHEMA,
        "header": {
            "n": n,
            "delta": delta,
            "mode": eng.mode,
            "seed": seed,
            "verify": verify,
            "adversary": adversary,
            "config": cfg.to_dict(),
        },
        "updates": applied,
        "meter": {
            "color_trials": m.color_trials,
            "class_scans": m.class_scans,
            "palette_probes": m.palette_probes,
            "recolorings": m.recolorings,
            "fresh_cost": m.fresh_cost,
            "fresh_runs": m.fresh_runs,
            "restarts": m.restarts,
            "total_ops": m.total_ops(),
        },
        "per_update": {
            "color_trials": _aggregate(trials),
            "class_scans": _aggregate(scans),
            "palette_probes": _aggregate(probes),
        },
        "amortized_ops": m.total_ops() / max(1, applied),
        "amortized_trials": m.color_trials / max(1, applied),
        "fresh_reports": [r.to_dict() for r in eng.fresh_reports],
        "violations": {
            "count": len(violations),
            "first": summarize(violations, limit=10),
        },
        "state": eng.snapshot(),
        "timing": {"wall_clock_s": wall, "wall_clock_per_update_s": wall / max(1, applied)},
    }
    return doc


def cmd_run(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    if args.trace is not None:
        reader = adv.replay_trace(args.trace)
        n, delta = reader.n, reader.delta
        updates, adversary = iter(reader), None
    else:
        if args.adversary is None:
            raise UsageError("need --trace or --adversary")
        if args.n is None or args.delta is None:
            raise UsageError("need --n and --delta with --adversary")
        n, delta = args.n, args.delta
        updates, adversary = None, args.adversary
    if delta < 1 or delta > n - 1:
        raise UsageError("need 1 <= delta <= n-1")

    eps, eps_origin = resolve_epsilon(delta, args.epsilon)
    zeta = resolve_zeta(n, args.zeta)
    cfg = Config(epsilon=eps, zeta=zeta, gamma=Fraction(args.gamma))
    doc = run_engine(
        n=n,
        delta=delta,
        cfg=cfg,
        seed=seed,
        mode=args.mode,
        verify=args.verify,
        updates=updates,
        adversary=adversary,
        steps=args.steps,
    )
    doc["header"]["epsilon_origin"] = eps_origin
    payload = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as f:
            f.write(payload + "\n")
    else:
        print(payload)
    return EXIT_VIOLATION if doc["violations"]["count"] else EXIT_OK


def scaling_row(
    n: int, steps: int, rep_seed: int, engine_kind: str
) -> dict:
    """One scaling measurement: conflict adversary on a dense instance."""
    from .instances import random_graph

    delta = n // 4
    edges = random_graph(n, delta, 0.8, seed=rep_seed * 7919 + n)
    if engine_kind == "phased":
        cfg = Config(
            epsilon=EPS_SMALL,
            zeta=max(1, math.ceil(n ** (1.0 / 3.0))),
            gamma=Fraction(1),
        )
        mode = "phased"
    else:
        cfg = Config(epsilon=EPS_SMALL, zeta=1)
        mode = "naive"
    doc = run_engine(
        n=n,
        delta=delta,
        cfg=cfg,
        seed=rep_seed,
        mode=mode,
        verify="off",
        adversary="conflict",
        steps=steps,
        initial_edges=edges,
        certify=False,
        reset_meter=True,
    )
    return {
        "n": n,
        "delta": delta,
        "adversary": "conflict",
        "engine": engine_kind,
        "amortized_ops": doc["amortized_ops"],
        "amortized_trials": doc["amortized_trials"],
    }


def fit_slope(rows: list[dict]) -> float:
    xs = np.log([r["n"] for r in rows])
    ys = np.log([r["amortized_ops"] for r in rows])
    return float(np.polyfit(xs, ys, 1)[0])


def cmd_scaling(args: argparse.Namespace) -> int:
    grid = [int(x) for x in args.n_grid.split(",") if x.strip()]
    if not grid:
        raise UsageError("empty --n-grid")
    seed = resolve_seed(args.seed)
    rows: list[dict] = []
    for kind in ("phased", "naive"):
        for n in grid:
            per_rep = [
                scaling_row(n, args.steps, seed + r, kind) for r in range(args.reps)
            ]
            row = dict(per_rep[0])
            row["amortized_ops"] = statistics.fmean(
                r["amortized_ops"] for r in per_rep
            )
            row["amortized_trials"] = statistics.fmean(
                r["amortized_trials"] for r in per_rep
            )
            rows.append(row)
            print(
                f"{kind:>6} n={n:>6} amortized_ops={row['amortized_ops']:.1f}",
                file=sys.stderr,
            )
    slopes = {
        kind: fit_slope([r for r in rows if r["engine"] == kind])
        for kind in ("phased", "naive")
    }
    for r in rows:
        r["slope"] = slopes[r["engine"]]
    doc = {
        "schema": "dyncolor-scaling/1",
        "grid": grid,
        "steps": args.steps,
        "reps": args.reps,
        "seed": seed,
        "rows": rows,
        "slope_phased": slopes["phased"],
        "slope_naive": slopes["naive"],
    }
    if args.out_json:
        with open(args.out_json, "w") as f:
            json.dump(doc, f, indent=2, sort_keys=True)
            f.write("\n")
    if args.out_csv:
        with open(args.out_csv, "w", newline="") as f:
            w = csv.DictWriter(
                f,
                fieldnames=[
                    "n", "delta", "adversary", "engine",
                    "amortized_ops", "amortized_trials", "slope",
                ],
            )
            w.writeheader()
            w.writerows(rows)
    print(json.dumps({"slope_phased": slopes["phased"], "slope_naive": slopes["naive"]}))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dyncolor",
        description="dynamic (Delta+1)-coloring engine: traces, runs, scaling",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate an oblivious update trace")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=int, required=True)
    g.add_argument("--steps", type=int, required=True)
    g.add_argument("--adversary", choices=["oblivious"], default="oblivious")
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run the engine on a trace or adversary")
    r.add_argument("--trace", default=None)
    r.add_argument("--adversary", choices=["oblivious", "conflict", "matching"], default=None)
    r.add_argument("--steps", type=int, default=1000)
    r.add_argument("--n", type=int, default=None)
    r.add_argument("--delta", type=int, default=None)
    r.add_argument("--epsilon", default=None, help="fraction like 1/8 (default: auto)")
    r.add_argument("--zeta", default="auto", help="integer or 'auto' = ceil(n^(2/3))")
    r.add_argument("--gamma", default="1/16")
    r.add_argument("--mode", choices=["auto", "naive", "phased"], default="auto")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--verify", choices=["off", "phase", "every"], default="off")
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("scaling", help="amortized-cost scaling fit over an n grid")
    s.add_argument("--n-grid", required=True, help="comma-separated sizes")
    s.add_argument("--steps", type=int, default=2000)
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out-csv", default=None)
    s.add_argument("--out-json", default=None)
    s.set_defaults(func=cmd_scaling)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except adv.ParseError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EngineFailure as exc:
        print(f"engine failure: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
