"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one PASS/FAIL line (printed in the terminal summary) before asserting,
so a failing criterion still reports its measured numbers.
"""

import filecmp
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from fracnls.audits import (audit_freq_lower_bound, audit_Mn_sum, audit_smoothing_sum, audit_smoothing_trajectory,
                            audit_strichartz, sum_lemma_scan)
from fracnls.evolution import EvolutionConfig, evolve
from fracnls.grid import GridSpec, random_field
from fracnls.highlow import HighLowConfig, audit_highlow
from fracnls.nonlinearity import cubic, cubic_oracle, resonant_decompose

from conftest import record_acceptance

pytestmark = pytest.mark.acceptance

# reports produced by criteria 3-8, keyed by the CLI arguments that reproduce them
_REPORTS: dict[tuple, object] = {}

SUM_PAIRS = ((1.2, 0.9), (2.0, 2.0), (1.01, 0.5))
GAP_ALPHAS = (0.6, 0.75, 0.9)
MN_K, SMOOTHING_K = 2048, 1024


def _report(args: tuple, build):
    if args not in _REPORTS:
        _REPORTS[args] = build()
    return _REPORTS[args]


def _rel(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def test_criterion_1_decomposition_identity():
    t0 = time.perf_counter()
    worst_id, worst_oracle, count = 0.0, 0.0, 0
    for M in (16, 32, 64):
        for seed in range(200):
            f = random_field(GridSpec(M), 0.5 + (seed % 5) * 0.5, seed)
            fast = cubic(f)
            parts = resonant_decompose(f, oracle=True)
            worst_id = max(worst_id, _rel(parts.reconstruct(f).coeffs, fast.coeffs))
            worst_oracle = max(worst_oracle, _rel(fast.coeffs, cubic_oracle(f).coeffs))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst_id <= 1e-12 and worst_oracle <= 1e-12 and elapsed < 60
    record_acceptance(1, "decomposition identity", ok,
                      f"{count} fields, identity {worst_id:.2e}, oracle {worst_oracle:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_conservation():
    t0 = time.perf_counter()
    u0 = random_field(GridSpec(512), 3.0, 0)
    drifts = {}
    for dt in (1e-3, 5e-4):
        rec = evolve(u0, 1.0, EvolutionConfig(alpha=0.75, mu=-1, dt=dt))
        drifts[dt] = (rec.relative_drift("mass"), rec.relative_drift("energy"))
    order = math.log2(drifts[1e-3][1] / drifts[5e-4][1])
    elapsed = time.perf_counter() - t0
    mass, en = drifts[1e-3]
    ok = mass <= 1e-10 and en <= 1e-6 and 1.9 <= order <= 2.1 and elapsed < 120
    record_acceptance(2, "conservation", ok,
                      f"mass {mass:.2e}, energy {en:.2e}, order {order:.3f}, {elapsed:.1f}s")
    assert ok


def test_criterion_3_gap_lower_bound():
    t0 = time.perf_counter()
    details, ok = [], True
    for a in GAP_ALPHAS:
        rep = _report(("audit-gap", "--alpha", str(a)), lambda a=a: audit_freq_lower_bound(a, 50, 50, 500, 0.02))
        m0 = rep.extremal("min_ratio")["value"]
        m1 = rep.extremal("min_ratio_doubled")["value"]
        change = abs(m1 - m0) / m0
        ok &= m0 > 0 and m1 > 0 and change < 0.02
        details.append(f"a={a}: min {m0:.5f}, change {change:.2e}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    record_acceptance(3, "gap lower bound", ok, "; ".join(details) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_4_two_weight_sum():
    t0 = time.perf_counter()
    details, ok = [], True
    for b, g in SUM_PAIRS:
        rep = _report(("audit-sums", "--beta", str(b), "--gamma", str(g)),
                      lambda b=b, g=g: sum_lemma_scan(b, g, 200, (1000, 10_000), 0.01))
        sups = rep.table("truncation").column("sup_ratio")
        change = abs(sups[1] - sups[0]) / sups[0]
        ok &= change < 0.01
        details.append(f"({b},{g}): sup {sups[1]:.4f}, change {change:.2e}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    record_acceptance(4, "two-weight sum stability", ok, "; ".join(details) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_5_strichartz():
    t0 = time.perf_counter()
    rep = _report(("audit-strichartz",), lambda: audit_strichartz(alpha=0.75))
    elapsed = time.perf_counter() - t0
    lad = rep.table("ladder")
    q, qp = lad.column("sup_Q"), lad.column("sup_Q_probe")
    g = [b / a - 1 for a, b in zip(q, q[1:])]
    gp = [b / a - 1 for a, b in zip(qp, qp[1:])]
    ok = max(g) < 0.25 and max(gp) > 0.25 and elapsed < 600
    record_acceptance(5, "Strichartz ratio", ok,
                      f"growth at s={rep.params['s']:g}: max {max(g):+.4f}; at s=0: max {max(gp):+.4f} "
                      f"(needs > 0.25); {elapsed:.1f}s")
    assert ok


def test_criterion_6_multiplier_sums():
    t0 = time.perf_counter()
    mn = _report(("audit-mn", "--K", str(MN_K)), lambda: audit_Mn_sum(0.75, 0.2, 0.49, 256, MN_K, 0.05))
    sm = _report(("audit-smoothing-sum", "--K", str(SMOOTHING_K)),
                 lambda: audit_smoothing_sum(0.75, 0.6, 0.2, 256, SMOOTHING_K, 0.01, 0.05, 0.1))
    elapsed = time.perf_counter() - t0
    c_mn = mn.extremal("relative_change_K_to_2K")["value"]
    c_sm = sm.extremal("relative_change_K_to_2K")["value"]
    probe = sm.table("probe").column("M_probe")
    monotone = all(b > a for a, b in zip(probe, probe[1:]))
    ok = c_mn < 0.05 and c_sm < 0.05 and monotone and elapsed < 600
    record_acceptance(6, "multiplier sums", ok,
                      f"M_n change {c_mn:.3e} (K={MN_K}), M(n) change {c_sm:.3e} (K={SMOOTHING_K}), "
                      f"probe monotone {monotone}; {elapsed:.1f}s")
    assert ok


def test_criterion_7_smoothing_trajectory():
    t0 = time.perf_counter()
    rep = _report(("audit-smoothing-run",), lambda: audit_smoothing_trajectory(0.75, 0.6, 0.2, 0.5, (256, 512)))
    elapsed = time.perf_counter() - t0
    res = rep.table("resolution")
    sup_w, sup_np, u0n = res.column("sup_w"), res.column("sup_w_no_phase"), res.column("u0_Hsc")
    change = abs(sup_w[1] - sup_w[0]) / sup_w[0]
    growth = u0n[1] / u0n[0] - 1
    inflation = min(b / a for a, b in zip(sup_w, sup_np))
    ok = change < 0.10 and growth > 0.25 and inflation > 1.0 and elapsed < 300
    record_acceptance(7, "smoothing trajectory", ok,
                      f"sup_t|w| change {change:.3e}, u0 H^0.8 growth {growth:+.4f} (needs > 0.25), "
                      f"no-phase inflation x{inflation:.3f}; {elapsed:.1f}s")
    assert ok


def test_criterion_8_highlow():
    t0 = time.perf_counter()
    rep = _report(("highlow",), lambda: audit_highlow(256, (16, 32), HighLowConfig(N=16, s=0.9, s0=0.51, alpha=0.75,
                                                                                    stages=4, dt=2.5e-4)))
    elapsed = time.perf_counter() - t0
    recon = rep.extremal("max_reconstruction_error")["value"]
    dH = rep.extremal("max_low_H_rel_change")["value"]
    ratio = rep.extremal("log2_ratio_wnl_H_alpha")["value"]
    ok = recon <= 1e-12 and dH <= 1e-6 and ratio < 0 and elapsed < 600
    record_acceptance(8, "high-low decomposition", ok,
                      f"reconstruction {recon:.2e}, low H change {dH:.2e}, log2 ratio {ratio:+.3f} "
                      f"(predicted {2 * 0.75 + 0.51 - 3 * 0.9:+.2f}); {elapsed:.1f}s")
    assert ok


def _cli(args, out, threads):
    env = {**os.environ, "NUMBA_NUM_THREADS": "4"}
    cmd = [sys.executable, "-m", "fracnls", *args, "--out", os.fspath(out), "--threads", str(threads)]
    return subprocess.run(cmd, env=env, capture_output=True, text=True)


def test_criterion_9_reproducibility(tmp_path):
    """Full-size reruns through the CLI with 4 threads against the in-process reports
    (single-threaded here), plus two CLI runs of simulate and audit-phi."""
    t0 = time.perf_counter()
    mismatches, compared = [], 0
    keys = [("audit-gap", "--alpha", str(a)) for a in GAP_ALPHAS] + \
           [("audit-sums", "--beta", str(b), "--gamma", str(g)) for b, g in SUM_PAIRS] + \
           [("audit-strichartz",), ("audit-mn", "--K", str(MN_K)), ("audit-smoothing-sum", "--K", str(SMOOTHING_K)),
            ("audit-smoothing-run",), ("highlow",)]
    for i, key in enumerate(keys):
        if key not in _REPORTS:
            pytest.skip("criteria 3-8 must run first in the same session")
        ref_dir = tmp_path / f"ref{i}"
        _REPORTS[key].write(os.fspath(ref_dir))
        out = tmp_path / f"cli{i}"
        r = _cli(list(key), out, 4)
        assert r.returncode in (0, 1), r.stderr
        for name in sorted(os.listdir(ref_dir)):
            if "timing" in name:
                continue
            compared += 1
            if not filecmp.cmp(ref_dir / name, out / name, shallow=False):
                mismatches.append(f"{key[0]}:{name}")
    for args in (["simulate"], ["audit-phi"]):
        a, b = tmp_path / f"{args[0]}-1", tmp_path / f"{args[0]}-4"
        _cli(args, a, 1)
        _cli(args, b, 4)
        for name in sorted(os.listdir(a)):
            if "timing" in name or name == "config.ini":
                continue
            compared += 1
            if not filecmp.cmp(a / name, b / name, shallow=False):
                mismatches.append(f"{args[0]}:{name}")
    elapsed = time.perf_counter() - t0
    ok = not mismatches and compared > 0
    record_acceptance(9, "reproducibility", ok,
                      f"{compared} JSON/CSV files byte-identical across 1 and 4 threads"
                      + (f"; mismatches: {', '.join(mismatches)}" if mismatches else "") + f"; {elapsed:.1f}s")
    assert ok
