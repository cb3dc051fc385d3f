"""Command line: ``lclimit {run,sweep,modes,acoustics,report}``.

Exit status 0 on success, 2 for configuration or usage errors, 3 for
numerical failures.  Files go to ``--output-dir``, else to
``$LCLIMIT_OUTPUT_DIR``, else to ``./lclimit-out``.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from .errors import ConfigError, SolverError

log = logging.getLogger("lclimit")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
MODE_COLUMNS = ("domain", "index", "lambda0", "boundary_integral", "Re_lambda1", "Im_lambda1",
                "h_condition_active")


def _outdir(args) -> str:
    d = args.output_dir or os.environ.get("LCLIMIT_OUTPUT_DIR") or "lclimit-out"
    os.makedirs(d, exist_ok=True)
    return d


def _config(args):
    from .config import RunConfig, load_config
    return load_config(args.config) if args.config else RunConfig()


def cmd_run(args) -> int:
    from .compressible import run, well_prepared_initial
    from .incompressible import run_inc

    cfg = _config(args)
    p = cfg.params
    init = well_prepared_initial(cfg.grid, p, cfg.seed)
    traj = (run_inc if args.incompressible else run)(init, p, cfg.scheme)
    out = _outdir(args)
    tag = "incompressible" if args.incompressible else f"eps{p.eps:g}"
    csv_path = os.path.join(out, f"run_{tag}.csv")
    traj.write_csv(csv_path)
    if args.snapshots:
        traj.write_snapshots(os.path.join(out, f"snapshots_{tag}"))
    print(csv_path)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .sweep import sweep, sweep_config_from
    from .trajectory import COLUMNS

    cfg = _config(args)
    if args.workers:
        cfg.workers = args.workers
    try:
        scfg = sweep_config_from(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rep = sweep(scfg)
    out = _outdir(args)
    path = os.path.join(out, "sweep.json")
    with open(path, "w") as fh:
        fh.write(rep.to_json())
    for key, rows in rep.rows.items():
        with open(os.path.join(out, f"sweep_eps{float(key):g}.csv"), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(COLUMNS)
            w.writerows([[repr(float(x)) for x in r] for r in rows])
    print(path)
    if rep.failures:
        for k, msg in rep.failures.items():
            log.error("eps=%s failed: %s", k, msg)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_modes(args) -> int:
    from .acoustics.modes import mode_expansion, neumann_modes

    size = tuple(args.size) if args.size else None
    if args.domain == "rectangle" and size is not None and len(size) != 2:
        raise ConfigError("--size for a rectangle needs two numbers")
    if args.count < 1:
        raise ConfigError("--count must be at least 1")
    modes = neumann_modes(args.domain, args.count, size)
    out = _outdir(args)
    path = os.path.join(out, f"modes_{args.domain}.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MODE_COLUMNS)
        for m in modes:
            e = mode_expansion(m, args.mu)
            il = e.i_lambda1_plus
            w.writerow([args.domain, ":".join(str(i) for i in m.index), repr(m.lambda0),
                        repr(e.boundary_integral), repr(il.real), repr(il.imag),
                        int(e.h_condition_active)])
    print(path)
    return EXIT_OK


def cmd_acoustics(args) -> int:
    from .acoustics import (AcousticVec, direct_solve, duhamel_solve, mollifier_rates,
                            semigroup_L)
    from .fields import Grid, ScalarField

    g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
    X, Y = g.coords
    rng = np.random.default_rng(args.seed)
    phi0 = np.cos(X) + 0.3 * np.sin(2 * Y) + 0.1 * rng.standard_normal() * np.cos(X + Y)
    m0 = np.stack([0.2 * np.sin(Y), 0.1 * np.cos(X)])
    v0 = AcousticVec.from_arrays(g, phi0, m0)
    B = 1.0
    e0 = v0.weighted_energy(B)
    drift = max(abs(semigroup_L(t, v0, B).weighted_energy(B) - e0) / e0
                for t in (1.0, 10.0, 100.0))
    group = semigroup_L(0.7, semigroup_L(0.4, v0, B), B).max_abs_diff(semigroup_L(1.1, v0, B))
    forcing = lambda t: AcousticVec.from_arrays(g, 0 * X, np.stack([np.sin(t) * np.cos(X),
                                                                     0 * X]))
    eps = 0.1
    duh = duhamel_solve(v0, forcing, 1.0, eps, B)
    ref = direct_solve(v0, forcing, 1.0, eps, B)
    G = Grid((8.0, 8.0), (512, 512))
    gx, gy = G.coords
    bump = ScalarField(G, np.exp(-((gx - 4) ** 2 + (gy - 4) ** 2)))
    rates = mollifier_rates(bump, 2.0, (0.4, 0.2, 0.1, 0.05))
    result = {"weighted_energy_drift": drift, "group_law_error": group,
              "duhamel_vs_direct": duh.max_abs_diff(ref),
              "mollifier_slope": rates["slope"],
              "mollifier_errors": list(map(float, rates["errors"]))}
    if args.damping:
        from .acoustics import damping_run, predicted_excess_rate
        rows = []
        for e in args.damping_eps:
            r2, r1 = damping_run(e, 2), damping_run(e, 1)
            rows.append({"eps": e, "rectangle_rate": r2.rate, "interval_rate": r1.rate,
                         "excess": r2.rate - r1.rate, "predicted": predicted_excess_rate(e)})
        result["damping"] = rows
    out = _outdir(args)
    path = os.path.join(out, "acoustics.json")
    with open(path, "w") as fh:
        json.dump(result, fh, indent=1, sort_keys=True)
    print(json.dumps(result, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import render

    for p in args.inputs:
        if not os.path.exists(p):
            raise ConfigError(f"no such input {p}")
    try:
        res = render(args.inputs, _outdir(args))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for s in res["svg"]:
        print(s)
    if res["summary"]:
        print(res["summary"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lclimit", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        sp.add_argument("--output-dir", default=None)
        if config:
            sp.add_argument("--config", default=None, help="INI file")

    r = sub.add_parser("run", help="one simulation, diagnostics CSV and optional snapshots")
    common(r)
    r.add_argument("--incompressible", action="store_true", help="run the limit system instead")
    r.add_argument("--snapshots", action="store_true")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="eps sweep with fitted rates (JSON + CSV)")
    common(s)
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("modes", help="Neumann modes and their viscous corrections (CSV)")
    common(m, config=False)
    m.add_argument("--domain", choices=("rectangle", "disk"), default="rectangle")
    m.add_argument("--count", type=int, default=10)
    m.add_argument("--size", type=float, nargs="+", default=None)
    m.add_argument("--mu", type=float, default=1.0)
    m.set_defaults(func=cmd_modes)

    a = sub.add_parser("acoustics", help="semigroup, Duhamel and mollifier checks (JSON)")
    common(a, config=False)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--damping", action="store_true", help="also run the boundary damping study")
    a.add_argument("--damping-eps", type=float, nargs="+", default=[0.04, 0.01])
    a.set_defaults(func=cmd_acoustics)

    rp = sub.add_parser("report", help="render CSV/JSON outputs to SVG and a summary table")
    common(rp, config=False)
    rp.add_argument("inputs", nargs="+")
    rp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except SolverError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
