"""Run configuration: INI files with a ``[run]`` section and one section per subcommand.

    [run]
    command = audit-gap
    seed = 0
    out = results/gap
    threads = 0

    [audit-gap]
    alpha = 0.75
    jmax = 50

Missing keys take schema defaults; unknown keys, bad types and violated invariants raise
:class:`ConfigurationError` naming the offending ``section.key``.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from .audits.multipliers import check_smoothing_params
from .errors import ConfigurationError, FracNLSError
from .evolution import INTEGRATORS, EvolutionConfig, check_step_size
from .grid import GridSpec, NormSpec
from .highlow import DELTA_RULES, REBUILD_MODES, HighLowConfig
from .nonlinearity import DEALIAS_POLICIES
from .operators import check_alpha


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    v = float(text) if any(ch in text.lower() for ch in ".e") else int(text)
    if int(v) != v:
        raise ValueError(f"not an integer: {text!r}")
    return int(v)


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


PARSERS = {
    "float": float,
    "int": _parse_int,
    "bool": _parse_bool,
    "str": lambda t: t.strip(),
    "ints": lambda t: tuple(_parse_int(x) for x in _split(t)),
    "strs": lambda t: tuple(_split(t)),
}


def _format(kind: str, value) -> str:
    if kind == "float":
        return repr(float(value))
    if kind == "bool":
        return "true" if value else "false"
    if kind in ("ints", "strs"):
        return ",".join(str(v) for v in value)
    return str(value)


EVOLUTION_KEYS = {
    "alpha": ("float", 0.75),
    "mu": ("int", -1),
    "gauged": ("bool", False),
    "dt": ("float", 1e-3),
    "integrator": ("str", "strang_split"),
    "dealias": ("str", "auto"),
}

SCHEMAS: dict[str, dict[str, tuple[str, object]]] = {
    "simulate": {
        **EVOLUTION_KEYS,
        "M": ("int", 512),
        "sigma": ("float", 1.2),
        "amplitude": ("float", 1.0),
        "T": ("float", 1.0),
        "sample_every": ("int", 1),
        "norms": ("strs", ()),
        "comparison": ("bool", False),
    },
    "audit-phi": {"beta": ("float", 0.5), "k_lo": ("int", 100), "k_hi": ("int", 10_000), "tol": ("float", 0.05)},
    "audit-sums": {
        "beta": ("float", 1.2), "gamma": ("float", 0.9), "kmax": ("int", 200),
        "K": ("ints", (1000, 10_000)), "tol": ("float", 0.01),
    },
    "audit-gap": {"alpha": ("float", 0.75), "jmax": ("int", 50), "kmax": ("int", 50), "nmax": ("int", 500), "tol": ("float", 0.02)},
    "audit-strichartz": {
        "alpha": ("float", 0.75), "s": ("float", 0.1125), "probe_s": ("float", 0.0),
        "ladder": ("ints", (64, 128, 256, 512, 1024)), "method": ("str", "exact"),
        "Mt_factor": ("float", 1.0), "growth": ("float", 0.25),
    },
    "audit-mn": {
        "alpha": ("float", 0.75), "s": ("float", 0.2), "bprime": ("float", 0.49),
        "nmax": ("int", 256), "K": ("int", 2048), "tol": ("float", 0.05),
    },
    "audit-smoothing-sum": {
        "alpha": ("float", 0.75), "s": ("float", 0.6), "c": ("float", 0.2), "eps": ("float", 0.01),
        "nmax": ("int", 256), "K": ("int", 1024), "tol": ("float", 0.05), "probe_offset": ("float", 0.1),
    },
    "audit-smoothing-run": {
        "alpha": ("float", 0.75), "s": ("float", 0.6), "c": ("float", 0.2), "T": ("float", 0.5),
        "ladder": ("ints", (256, 512)), "dt": ("float", 1e-3), "integrator": ("str", "strang_split"),
        "decay_offset": ("float", 0.05), "tol": ("float", 0.10), "growth": ("float", 0.25),
        "phase_margin": ("float", 1.1),
    },
    "highlow": {
        "alpha": ("float", 0.75), "s": ("float", 0.9), "s0": ("float", 0.51), "N": ("ints", (16, 32)),
        "M": ("int", 256), "stages": ("int", 4), "delta_rule": ("str", "heuristic"), "c0": ("float", 1.0),
        "dt": ("float", 2.5e-4), "integrator": ("str", "strang_split"), "rebuild": ("str", "carry"),
        "decay_offset": ("float", 0.05), "H_tol": ("float", 1e-6),
    },
    "selftest": {},
}

RUN_KEYS = {"command": ("str", ""), "seed": ("int", 0), "out": ("str", "fracnls-out"), "threads": ("int", 0)}

COMMANDS = tuple(SCHEMAS)


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out: str = "fracnls-out"
    threads: int = 0

    def echo(self) -> str:
        """INI text that :func:`loads_config` turns back into an equal RunConfig."""
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        cp["run"] = {"command": self.command, "seed": str(self.seed), "out": self.out, "threads": str(self.threads)}
        schema = SCHEMAS[self.command]
        if schema:
            cp[self.command] = {k: _format(kind, self.params[k]) for k, (kind, _) in schema.items()}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def defaults(command: str) -> dict:
    if command not in SCHEMAS:
        raise ConfigurationError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}", key="run.command")
    return {k: v for k, (_, v) in SCHEMAS[command].items()}


def parse_value(command: str, key: str, text: str):
    schema = SCHEMAS[command]
    if key not in schema:
        raise ConfigurationError(f"unknown key (allowed: {', '.join(schema) or 'none'})", key=f"{command}.{key}")
    kind = schema[key][0]
    try:
        return PARSERS[kind](text)
    except (ValueError, TypeError) as exc:
        raise ConfigurationError(f"expected {kind}, got {text!r} ({exc})", key=f"{command}.{key}") from None


def _run_value(key: str, text: str):
    kind = RUN_KEYS[key][0]
    try:
        return PARSERS[kind](text)
    except ValueError:
        raise ConfigurationError(f"expected {kind}, got {text!r}", key=f"run.{key}") from None


def loads_config(text: str, command: str | None = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    run = dict(cp["run"]) if cp.has_section("run") else {}
    for k in run:
        if k not in RUN_KEYS:
            raise ConfigurationError(f"unknown key (allowed: {', '.join(RUN_KEYS)})", key=f"run.{k}")
    cmd = run.get("command", "").strip() or command
    if not cmd:
        raise ConfigurationError("missing key", key="run.command")
    if command is not None and cmd != command:
        raise ConfigurationError(f"config is for {cmd!r}, not {command!r}", key="run.command")
    params = defaults(cmd)
    for section in cp.sections():
        if section not in ("run", cmd):
            raise ConfigurationError(f"unexpected section [{section}] for command {cmd!r}", key=section)
    if cp.has_section(cmd):
        for k, v in cp[cmd].items():
            params[k] = parse_value(cmd, k, v)
    cfg = RunConfig(
        command=cmd,
        params=params,
        seed=_run_value("seed", run["seed"]) if "seed" in run else 0,
        out=run.get("out", RUN_KEYS["out"][1]).strip(),
        threads=_run_value("threads", run["threads"]) if "threads" in run else 0,
    )
    validate(cfg)
    return cfg


def load_config(path, command: str | None = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file: {exc}") from None
    return loads_config(text, command)


def _guard(key, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigurationError as exc:
        if exc.key is not None:
            raise
        raise ConfigurationError(str(exc), key=key) from None
    except FracNLSError as exc:
        raise ConfigurationError(str(exc), key=key) from None


def _require(cond, key, msg):
    if not cond:
        raise ConfigurationError(msg, key=key)


def evolution_config(p: dict) -> EvolutionConfig:
    return EvolutionConfig(
        alpha=p["alpha"], mu=p["mu"], gauged=p["gauged"], dt=p["dt"], integrator=p["integrator"],
        dealias=None if p["dealias"] == "auto" else p["dealias"], sample_every=p.get("sample_every", 1),
        comparison=p.get("comparison", False),
    )


def validate(cfg: RunConfig) -> None:
    """Check every embedded invariant, reporting the key that breaks it."""
    c, p = cfg.command, cfg.params
    _require(cfg.threads >= 0, "run.threads", "must be >= 0 (0 = all available)")
    _require(c in SCHEMAS, "run.command", f"unknown command {c!r}")
    for k in SCHEMAS[c]:
        _require(k in p, f"{c}.{k}", "missing key")
    if "alpha" in p:
        _guard(f"{c}.alpha", check_alpha, p["alpha"], p.get("comparison", False))
    if c == "simulate":
        _guard(f"{c}.M", GridSpec, p["M"])
        _require(p["integrator"] in INTEGRATORS, f"{c}.integrator", f"must be one of {INTEGRATORS}")
        _require(p["dealias"] == "auto" or p["dealias"] in DEALIAS_POLICIES, f"{c}.dealias", "must be auto, strict or none")
        _require(p["T"] >= 0, f"{c}.T", "must be nonnegative")
        for n in p["norms"]:
            _guard(f"{c}.norms", NormSpec.parse, n)
        ecfg = _guard(c, evolution_config, p)
        _guard(f"{c}.dt", check_step_size, ecfg, GridSpec(p["M"]))
    elif c == "audit-phi":
        _require(p["beta"] >= 0, f"{c}.beta", "must be >= 0")
        _require(1 <= p["k_lo"] < p["k_hi"], f"{c}.k_hi", "need 1 <= k_lo < k_hi")
    elif c == "audit-sums":
        _require(p["beta"] >= p["gamma"] >= 0 and p["beta"] + p["gamma"] > 1, f"{c}.gamma",
                 "need beta >= gamma >= 0 and beta + gamma > 1")
        _require(len(p["K"]) >= 2 and all(K >= p["kmax"] for K in p["K"]), f"{c}.K",
                 "need at least two truncations, each >= kmax")
    elif c == "audit-gap":
        for k in ("jmax", "kmax", "nmax"):
            _require(p[k] >= 1, f"{c}.{k}", "must be positive")
    elif c == "audit-strichartz":
        _require(p["method"] in ("exact", "trapezoid"), f"{c}.method", "must be exact or trapezoid")
        lad = p["ladder"]
        _require(len(lad) >= 2 and all(b == 2 * a for a, b in zip(lad, lad[1:])), f"{c}.ladder", "must be a doubling sequence")
        for M in lad:
            _guard(f"{c}.ladder", GridSpec, M)
        _require(p["Mt_factor"] >= 1.0, f"{c}.Mt_factor", "must be >= 1 (time quadrature would be under-resolved)")
    elif c == "audit-mn":
        _require(p["s"] > (1 - p["alpha"]) / 2, f"{c}.s", "need s > (1-alpha)/2")
        _require(0 <= p["bprime"] < 0.5, f"{c}.bprime", "need 0 <= bprime < 1/2")
        _require(p["K"] >= 4 * p["nmax"], f"{c}.K", "need K >= 4*nmax")
    elif c == "audit-smoothing-sum":
        _guard(f"{c}.c", check_smoothing_params, p["alpha"], p["s"], p["c"])
        _require(0 < p["eps"] < 1, f"{c}.eps", "need 0 < eps < 1")
        _require(p["K"] >= 4 * p["nmax"], f"{c}.K", "need K >= 4*nmax")
    elif c == "audit-smoothing-run":
        _guard(f"{c}.c", check_smoothing_params, p["alpha"], p["s"], p["c"])
        _require(p["T"] > 0, f"{c}.T", "must be positive")
        _require(len(p["ladder"]) >= 2, f"{c}.ladder", "need at least two resolutions")
        for M in p["ladder"]:
            _guard(f"{c}.ladder", GridSpec, M)
        _guard(f"{c}.dt", EvolutionConfig, alpha=p["alpha"], dt=p["dt"], integrator=p["integrator"])
    elif c == "highlow":
        _require(p["delta_rule"] in DELTA_RULES, f"{c}.delta_rule", f"must be one of {DELTA_RULES}")
        _require(p["rebuild"] in REBUILD_MODES, f"{c}.rebuild", f"must be one of {REBUILD_MODES}")
        _require(p["s0"] < p["s"], f"{c}.s0", "need s0 < s (ordering 1/2 < s0 < s)")
        _require(len(p["N"]) >= 1, f"{c}.N", "need at least one cutoff")
        for N in p["N"]:
            _require(N < p["M"] // 2, f"{c}.N", f"cutoff {N} not resolved by M={p['M']} (need N < M/2)")
            _guard(c, highlow_config, p, N)
        _guard(f"{c}.M", GridSpec, p["M"])


def highlow_config(p: dict, N: int) -> HighLowConfig:
    return HighLowConfig(N=int(N), s=p["s"], s0=p["s0"], alpha=p["alpha"], stages=p["stages"], delta_rule=p["delta_rule"],
                         c0=p["c0"], dt=p["dt"], integrator=p["integrator"], rebuild=p["rebuild"])
