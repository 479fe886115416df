"""Command-line front end.

    fracnls <command> [--config FILE] [--out DIR] [--threads N] [--seed S] [--<key> VALUE ...]

Values come from the schema defaults, then the config file, then command-line flags.
Every run writes ``config.ini`` (the full effective configuration) to the output
directory. Exit codes: 0 pass, 1 audit failure or instability, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import audits, selftest
from .audits.report import AuditReport, _plain
from .audits.threads import set_threads
from .config import COMMANDS, SCHEMAS, RunConfig, defaults, evolution_config, highlow_config, load_config, parse_value, validate
from .errors import ConfigurationError, FracNLSError, InstabilityError
from .evolution import evolve
from .grid import GridSpec, random_field
from .highlow import audit_highlow

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

HELP = {
    "simulate": "evolve seeded random data and write the trajectory CSV",
    "audit-phi": "growth regimes of the partial sums phi_beta(k)",
    "audit-sums": "two-weight convolution sum bound, stability under truncation",
    "audit-gap": "lower bound on the four-frequency gap g(j,k,n)",
    "audit-strichartz": "L4 space-time ratio along a resolution ladder",
    "audit-mn": "boundedness in n of the multiplier sum M_n",
    "audit-smoothing-sum": "boundedness in n of the smoothing sum M(n), with failure probe",
    "audit-smoothing-run": "nonlinear smoothing along computed trajectories",
    "highlow": "high-low frequency decomposition experiment",
    "selftest": "run the closed-form example checks",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracnls", description="Fractional cubic NLS simulator and estimate audits.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for cmd in COMMANDS:
        p = sub.add_parser(cmd, help=HELP[cmd], description=HELP[cmd])
        p.add_argument("--config", help="INI config file")
        p.add_argument("--out", help="output directory (default fracnls-out)")
        p.add_argument("--threads", type=int, help="worker threads (default: all available)")
        p.add_argument("--seed", type=int, help="random seed (default 0)")
        for key, (kind, default) in SCHEMAS[cmd].items():
            shown = ",".join(map(str, default)) if isinstance(default, tuple) else default
            p.add_argument(f"--{key}", dest=f"p_{key}", metavar=kind.upper(), help=f"{kind}, default {shown}")
    return parser


def resolve(args) -> RunConfig:
    cfg = load_config(args.config, args.command) if args.config else RunConfig(args.command, defaults(args.command))
    for key in SCHEMAS[args.command]:
        val = getattr(args, f"p_{key}")
        if val is not None:
            cfg.params[key] = parse_value(args.command, key, val)
    if args.out is not None:
        cfg.out = args.out
    if args.threads is not None:
        cfg.threads = args.threads
    if args.seed is not None:
        cfg.seed = args.seed
    validate(cfg)
    return cfg


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(_plain(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n")


def run_simulate(cfg: RunConfig) -> int:
    p = cfg.params
    grid = GridSpec(p["M"])
    u0 = random_field(grid, p["sigma"], cfg.seed, p["amplitude"])
    ecfg = evolution_config(p)
    t0 = time.perf_counter()
    rec = evolve(u0, p["T"], ecfg, norms=p["norms"])
    elapsed = time.perf_counter() - t0
    rec.to_csv(os.path.join(cfg.out, "trajectory.csv"))
    summary = {
        "name": "simulate",
        "params": {**p, "seed": cfg.seed},
        "P": rec.P,
        "samples": len(rec.times),
        "mass_drift": rec.relative_drift("mass"),
        "energy_drift": rec.relative_drift("energy"),
        "final": rec.snapshots[-1].as_dict(),
    }
    _write_json(os.path.join(cfg.out, "simulate.json"), summary)
    _write_json(os.path.join(cfg.out, "simulate.timing.json"), {"runtime_seconds": elapsed})
    print(f"simulate: {len(rec.times)} samples, mass drift {summary['mass_drift']:.3e}, energy drift {summary['energy_drift']:.3e}")
    return EXIT_PASS


def _audit(cfg: RunConfig) -> AuditReport:
    c, p, seed = cfg.command, cfg.params, cfg.seed
    if c == "audit-phi":
        return audits.phi_growth_audit(p["beta"], p["k_lo"], p["k_hi"], tol=p["tol"])
    if c == "audit-sums":
        return audits.sum_lemma_scan(p["beta"], p["gamma"], p["kmax"], p["K"], p["tol"])
    if c == "audit-gap":
        return audits.audit_freq_lower_bound(p["alpha"], p["jmax"], p["kmax"], p["nmax"], p["tol"])
    if c == "audit-strichartz":
        return audits.audit_strichartz(p["alpha"], p["s"], p["probe_s"], p["ladder"], seed, p["method"],
                                       p["Mt_factor"] if p["method"] == "trapezoid" else None, p["growth"])
    if c == "audit-mn":
        return audits.audit_Mn_sum(p["alpha"], p["s"], p["bprime"], p["nmax"], p["K"], p["tol"])
    if c == "audit-smoothing-sum":
        return audits.audit_smoothing_sum(p["alpha"], p["s"], p["c"], p["nmax"], p["K"], p["eps"], p["tol"], p["probe_offset"])
    if c == "audit-smoothing-run":
        return audits.audit_smoothing_trajectory(p["alpha"], p["s"], p["c"], p["T"], p["ladder"], seed, p["dt"], p["integrator"],
                                                 p["decay_offset"], p["tol"], p["growth"], p["phase_margin"])
    if c == "highlow":
        return audit_highlow(p["M"], p["N"], highlow_config(p, p["N"][0]), seed, p["decay_offset"], p["H_tol"])
    raise ConfigurationError(f"unknown command {c!r}", key="run.command")


def execute(cfg: RunConfig) -> int:
    set_threads(cfg.threads)
    if cfg.command == "selftest":
        results = selftest.run(verbose=True)
        return EXIT_PASS if all(ok for _, ok in results) else EXIT_FAIL
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "config.ini"), "w", encoding="utf-8") as fh:
        fh.write(cfg.echo())
    if cfg.command == "simulate":
        return run_simulate(cfg)
    rep = _audit(cfg)
    rep.write(cfg.out)
    print(rep.summary_line())
    for name, ok in rep.checks.items():
        print(f"  {'ok ' if ok else 'BAD'} {name}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return execute(cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except FracNLSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
