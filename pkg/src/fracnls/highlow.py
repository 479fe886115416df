"""High-low frequency decomposition experiment for the gauged defocusing equation.

The data is split as u₀ = Φ₀ + Ψ₀ with Φ₀ = P_N u₀. Over one stage of length δ the low
part v solves the full (gauged) equation from Φ, the full solution u solves it from
Φ + Ψ, and the nonlinear high-frequency correction is

    w_nl(δ) = u(δ) - v(δ) - e^{iδ(-Δ)^α} Ψ.

The next stage starts from Φ' = v(δ) + w_nl(δ) and Ψ' = e^{iδ(-Δ)^α} Ψ. In gauged variables
the high-frequency part is carried by the plain free flow, so Ψ picks up no P phase.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .audits.report import AuditReport, Table, _plain
from .errors import ConfigurationError, InputError, InstabilityError
from .evolution import EvolutionConfig, evolve_to, local_existence_heuristic
from .grid import GridSpec, SpectralField, norm, NormSpec, random_field, sobolev_norm
from .invariants import hamiltonian
from .nonlinearity import resonant_constant
from .operators import Projection, check_alpha, project, propagate_linear

DELTA_RULES = ("heuristic", "power")
REBUILD_MODES = ("carry", "reproject")


def first_threshold(alpha: float) -> float:
    return 7 * alpha / 8 + 1 / 16


def improved_threshold(alpha: float) -> float:
    return 5 * alpha / 6 + 1 / 12


@dataclass(frozen=True)
class HighLowConfig:
    """Settings of one high-low experiment.

    Requires 1/2 < s₀ < s and α - s₀ < min(2s₀ + α - 1, α - 1/2). The ``power`` δ rule
    δ = N^{-4(α-s)} is only meaningful for s < α and is rejected otherwise; the
    ``heuristic`` rule uses δ = c₀ ‖Φ₀‖_{H^α}^{-4}.
    """

    N: int
    s: float = 0.9
    s0: float = 0.51
    alpha: float = 0.75
    stages: int = 4
    delta_rule: str = "heuristic"
    c0: float = 1.0
    dt: float = 2.5e-4
    integrator: str = "strang_split"
    rebuild: str = "carry"

    def __post_init__(self):
        check_alpha(self.alpha)
        if int(self.N) != self.N or self.N < 1:
            raise ConfigurationError(f"N must be a positive integer, got {self.N}")
        if not 0.5 < self.s0 < self.s:
            raise ConfigurationError(f"need 1/2 < s0 < s, got s0={self.s0}, s={self.s}")
        lhs, rhs = self.alpha - self.s0, min(2 * self.s0 + self.alpha - 1, self.alpha - 0.5)
        if not lhs < rhs:
            raise ConfigurationError(f"admissibility alpha - s0 < min(2 s0 + alpha - 1, alpha - 1/2) fails: {lhs:g} >= {rhs:g}")
        if self.delta_rule not in DELTA_RULES:
            raise ConfigurationError(f"delta_rule must be one of {DELTA_RULES}")
        if self.delta_rule == "power" and not self.s < self.alpha:
            raise ConfigurationError(f"delta_rule 'power' needs s < alpha, got s={self.s}, alpha={self.alpha}")
        if not 1 <= self.stages <= 64:
            raise ConfigurationError("stages must lie in [1, 64]")
        if self.rebuild not in REBUILD_MODES:
            raise ConfigurationError(f"rebuild must be one of {REBUILD_MODES}")
        if not self.c0 > 0:
            raise ConfigurationError("c0 must be positive")

    def evolution(self, P: float) -> EvolutionConfig:
        return EvolutionConfig(alpha=self.alpha, mu=-1, gauged=True, dt=self.dt, integrator=self.integrator, P=P)

    def exponents(self) -> dict:
        a, s, s0 = self.alpha, self.s, self.s0
        return {
            "phi_H_alpha": a - s,
            "psi_H_s0": s0 - s,
            "delta": -4 * (a - s),
            "wnl_H_alpha": 2 * a + s0 - 3 * s,
            "wnl_L2": a + s0 - 2 * s,
            "hamiltonian_increment": 5 * a + s0 - 6 * s,
            "hamiltonian_budget": 2 * a - 2 * s,
        }


def decompose_initial(u0: SpectralField, N: int) -> tuple[SpectralField, SpectralField]:
    """Φ₀ = P_N u₀ and Ψ₀ = u₀ - Φ₀."""
    phi = project(u0, Projection(N, "low"))
    return phi, u0 - phi


def stage_length(phi0: SpectralField, cfg: HighLowConfig) -> float:
    if cfg.delta_rule == "power":
        return float(cfg.N) ** (-4 * (cfg.alpha - cfg.s))
    return local_existence_heuristic(phi0, cfg.alpha, cfg.c0)


STAGE_COLUMNS = ("stage", "t_start", "t_end", "delta", "phi_H_alpha", "psi_H_s0", "psi_L2", "H_v_start", "H_v_end",
                 "H_v_rel_change", "wnl_H_alpha", "wnl_L2", "H_next", "H_increment", "reconstruction_error")


@dataclass
class StageRow:
    stage: int
    t_start: float
    t_end: float
    delta: float
    phi_H_alpha: float
    psi_H_s0: float
    psi_L2: float
    H_v_start: float
    H_v_end: float
    H_v_rel_change: float
    wnl_H_alpha: float
    wnl_L2: float
    H_next: float
    H_increment: float
    reconstruction_error: float

    def values(self) -> list:
        return [getattr(self, c) for c in STAGE_COLUMNS]


def run_stage(v_in: SpectralField, psi: SpectralField, delta: float, cfg: HighLowConfig, P: float,
              stage: int = 1, t_start: float = 0.0):
    """Advance one stage; returns (v(δ), w_nl(δ), u(δ), e^{iδ(-Δ)^α}Ψ, row)."""
    if not delta > 0:
        raise ConfigurationError("stage length must be positive")
    ecfg = cfg.evolution(P)
    try:
        u = evolve_to(v_in + psi, delta, ecfg)
        v = evolve_to(v_in, delta, ecfg)
    except InstabilityError as exc:
        raise InstabilityError(exc.step, exc.dt, stage=stage) from exc
    psi_lin = propagate_linear(psi, delta, cfg.alpha)
    wnl = u - v - psi_lin
    pad = ecfg.pad
    h0, h1 = hamiltonian(v_in, cfg.alpha, pad), hamiltonian(v, cfg.alpha, pad)
    h_next = hamiltonian(v + wnl, cfg.alpha, pad)
    recon = sobolev_norm(v + psi_lin + wnl - u, 0) / max(sobolev_norm(u, 0), 1e-300)
    row = StageRow(
        stage=stage, t_start=t_start, t_end=t_start + delta, delta=delta,
        phi_H_alpha=sobolev_norm(v_in, cfg.alpha), psi_H_s0=sobolev_norm(psi, cfg.s0),
        psi_L2=norm(psi, NormSpec("L2")), H_v_start=h0, H_v_end=h1,
        H_v_rel_change=abs(h1 - h0) / abs(h0) if h0 else abs(h1),
        wnl_H_alpha=sobolev_norm(wnl, cfg.alpha), wnl_L2=norm(wnl, NormSpec("L2")),
        H_next=h_next, H_increment=h_next - h1, reconstruction_error=recon,
    )
    return v, wnl, u, psi_lin, row


@dataclass
class StageLedger:
    config: HighLowConfig
    M: int
    P: float
    delta: float
    H_phi0: float
    rows: list[StageRow] = field(default_factory=list)

    @property
    def T(self) -> float:
        return self.delta * len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def cumulative_increment(self) -> float:
        return float(np.sum(np.abs(self.column("H_increment"))))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(STAGE_COLUMNS)
        for r in self.rows:
            w.writerow([v if isinstance(v, int) else f"{v:.17g}" for v in r.values()])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def summary(self) -> dict:
        cfg, N = self.config, self.config.N
        ex = cfg.exponents()
        n_stages = len(self.rows)
        return {
            "config": asdict(cfg),
            "M": self.M,
            "P": self.P,
            "delta": self.delta,
            "T": self.T,
            "H_phi0": self.H_phi0,
            "exponents": ex,
            "thresholds": {"first": first_threshold(cfg.alpha), "improved": improved_threshold(cfg.alpha)},
            "cumulative_H_increment": self.cumulative_increment(),
            "increments_below_H_phi0": self.cumulative_increment() < self.H_phi0,
            "budget": {
                "predicted_total_increment": n_stages * float(N) ** ex["hamiltonian_increment"],
                "reference_H_level": float(N) ** ex["hamiltonian_budget"],
            },
            "wnl_L2_reference": float(N) ** ex["wnl_L2"],
            "max_reconstruction_error": float(np.max(self.column("reconstruction_error"))),
            "max_low_H_rel_change": float(np.max(self.column("H_v_rel_change"))),
            "psi_norm_spread": float(np.ptp(self.column("psi_H_s0")) / max(self.rows[0].psi_H_s0, 1e-300)),
        }


def run_highlow(u0: SpectralField, cfg: HighLowConfig, T: float | None = None) -> StageLedger:
    """Iterate :func:`run_stage` ``cfg.stages`` times. If T is given it must equal stages·δ."""
    phi, psi = decompose_initial(u0, cfg.N)
    delta = stage_length(phi, cfg)
    if T is not None and abs(T - cfg.stages * delta) > 1e-12 * max(T, 1.0):
        raise ConfigurationError(f"T={T} is not stages*delta={cfg.stages * delta}")
    P = resonant_constant(u0)
    led = StageLedger(cfg, u0.grid.M, P, delta, hamiltonian(phi, cfg.alpha, cfg.evolution(P).pad))
    t = 0.0
    for i in range(1, cfg.stages + 1):
        v, wnl, u, psi_lin, row = run_stage(phi, psi, delta, cfg, P, stage=i, t_start=t)
        led.rows.append(row)
        t += delta
        if cfg.rebuild == "carry":
            phi, psi = v + wnl, psi_lin
        else:
            phi, psi = decompose_initial(u, cfg.N)
    return led


def hamiltonian_difference_bound_check(f: SpectralField, g: SpectralField, alpha: float) -> float:
    """|H(f+g) - H(f)| / (‖g‖² + ‖g‖‖f‖ + ‖g‖⁴ + ‖g‖‖f‖³), norms in H^α, defocusing H."""
    a, b = sobolev_norm(f, alpha), sobolev_norm(g, alpha)
    if a == 0 and b == 0:
        raise InputError("both fields vanish: the ratio is 0/0")
    if b == 0:
        return 0.0
    num = abs(hamiltonian(f + g, alpha) - hamiltonian(f, alpha))
    return num / (b * b + b * a + b ** 4 + b * a ** 3)


def highlow_sweep(M: int, Ns, cfg: HighLowConfig, seed: int = 0, decay_offset: float = 0.05) -> dict:
    """Run the experiment for each N on the same σ = s + 1/2 + decay_offset data.

    Returns the ledgers and the fitted log-log slopes against N of the first-stage
    ‖w_nl‖_{H^α}, ‖w_nl‖_{L²} and ‖Φ₀‖_{H^α}.
    """
    grid = GridSpec(M)
    u0 = random_field(grid, cfg.s + 0.5 + decay_offset, seed)
    ledgers = {}
    for N in Ns:
        c = HighLowConfig(**{**asdict(cfg), "N": int(N)})
        ledgers[int(N)] = run_highlow(u0, c)
    Ns = sorted(ledgers)
    logN = np.log2(Ns)

    def slope(col):
        y = np.log2([getattr(ledgers[N].rows[0], col) for N in Ns])
        return float(np.polyfit(logN, y, 1)[0]) if len(Ns) > 1 else math.nan

    return {
        "M": M, "seed": seed, "sigma": cfg.s + 0.5 + decay_offset, "Ns": Ns,
        "slopes": {"wnl_H_alpha": slope("wnl_H_alpha"), "wnl_L2": slope("wnl_L2"), "phi_H_alpha": slope("phi_H_alpha")},
        "predicted": cfg.exponents(),
        "ledgers": ledgers,
    }


def sweep_summary_json(sweep: dict) -> str:
    body = {k: v for k, v in sweep.items() if k != "ledgers"}
    body["runs"] = {str(N): led.summary() for N, led in sweep["ledgers"].items()}
    return json.dumps(_plain(body), indent=2, allow_nan=False) + "\n"


def audit_highlow(M: int = 256, Ns=(16, 32), cfg: HighLowConfig | None = None, seed: int = 0,
                  decay_offset: float = 0.05, H_tol: float = 1e-6, recon_tol: float = 1e-12) -> AuditReport:
    """Sweep over N with pass/fail checks on the stage ledgers.

    Checks: exact reconstruction, low-part Hamiltonian conserved within ``H_tol`` per stage,
    Ψ norms unchanged across stages, cumulative Hamiltonian increments below H(Φ₀), and a
    negative log-log slope of the first-stage ‖w_nl‖_{H^α} in N when the exponent
    2α + s₀ - 3s predicts one.
    """
    t0 = time.perf_counter()
    cfg = cfg or HighLowConfig(N=int(Ns[0]))
    sweep = highlow_sweep(M, Ns, cfg, seed, decay_offset)
    led = sweep["ledgers"]
    summaries = {N: l.summary() for N, l in led.items()}
    scaling = [[N, l.delta, l.rows[0].phi_H_alpha, l.rows[0].psi_H_s0, l.rows[0].wnl_H_alpha, l.rows[0].wnl_L2,
                l.H_phi0, l.cumulative_increment()] for N, l in led.items()]
    predicted = cfg.exponents()["wnl_H_alpha"]
    Ns_sorted = sorted(led)
    log2_ratio = (math.log2(led[Ns_sorted[-1]].rows[0].wnl_H_alpha / led[Ns_sorted[0]].rows[0].wnl_H_alpha)
                  if len(Ns_sorted) > 1 else math.nan)
    checks = {
        "reconstruction": all(s["max_reconstruction_error"] <= recon_tol for s in summaries.values()),
        "low_hamiltonian_conserved": all(s["max_low_H_rel_change"] <= H_tol for s in summaries.values()),
        "psi_ledger_constant": all(s["psi_norm_spread"] <= 1e-12 for s in summaries.values()),
        "increments_below_H_phi0": all(s["increments_below_H_phi0"] for s in summaries.values()),
    }
    if len(Ns_sorted) > 1 and predicted < 0:
        checks["wnl_decreases_with_N"] = log2_ratio < 0
    tables = [Table("scaling", ["N", "delta", "phi_H_alpha", "psi_H_s0", "wnl_H_alpha", "wnl_L2", "H_phi0", "cumulative_H_increment"], scaling)]
    for N, l in led.items():
        tables.append(Table(f"stages_N{N}", list(STAGE_COLUMNS), [r.values() for r in l.rows]))
    rep = AuditReport(
        name="highlow",
        params={"M": M, "Ns": list(Ns_sorted), "seed": seed, "decay_offset": decay_offset, "H_tol": H_tol,
                "recon_tol": recon_tol, **{k: v for k, v in asdict(cfg).items() if k != "N"}},
        extremals=[{"label": "log2_ratio_wnl_H_alpha", "value": log2_ratio, "N_low": Ns_sorted[0], "N_high": Ns_sorted[-1]},
                   {"label": "slope_wnl_H_alpha", "value": sweep["slopes"]["wnl_H_alpha"], "predicted": predicted},
                   {"label": "slope_wnl_L2", "value": sweep["slopes"]["wnl_L2"], "predicted": cfg.exponents()["wnl_L2"]},
                   {"label": "max_low_H_rel_change", "value": max(s["max_low_H_rel_change"] for s in summaries.values())},
                   {"label": "max_reconstruction_error", "value": max(s["max_reconstruction_error"] for s in summaries.values())}],
        tables=tables,
        checks=checks,
        notes=[f"thresholds: first {first_threshold(cfg.alpha):.6g}, improved {improved_threshold(cfg.alpha):.6g}; s = {cfg.s:g}"],
    )
    rep.verdict = "scaling sign as predicted" if checks.get("wnl_decreases_with_N", True) else "scaling sign not observed"
    rep.runtime_seconds = time.perf_counter() - t0
    return rep
