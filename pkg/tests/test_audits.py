import filecmp
import json
import math
import os

import numpy as np
import pytest

from fracnls.audits import (AuditReport, Mn_bruteforce, Mn_term, Table, audit_freq_lower_bound, audit_Mn_sum, audit_phi,
                            audit_smoothing_sum, audit_strichartz, audit_sum_lemma, cross_check_Mn_smoothing, gap_ratio,
                            l4_spacetime_norm, phi_growth_audit, shell_sums, smoothing_series, smoothing_term,
                            strichartz_profiles, strichartz_ratio, sum_lemma_scan)
from fracnls.audits.multipliers import KIND_MN, KIND_SMOOTHING, truncated_sums
from fracnls.audits.report import format_float, relative_change
from fracnls.audits.strichartz import min_time_samples
from fracnls.errors import ConfigurationError, InputError
from fracnls.evolution import EvolutionConfig
from fracnls.grid import TWO_PI, GridSpec, SpectralField, random_field


# --- partial sums and the two-weight sum ---------------------------------------------

def test_phi_closed_forms():
    assert audit_phi(1.3, 0) == 1
    assert audit_phi(2, 3) == pytest.approx(1 + 2 * (1 / 2 + 1 / 5 + 1 / 10), rel=1e-15)
    assert audit_phi(0, 7) == 15
    assert audit_phi(2, -3) == audit_phi(2, 3)
    with pytest.raises(InputError):
        audit_phi(-0.5, 3)


@pytest.mark.parametrize("beta,regime", [(0.5, "power"), (1.0, "log"), (2.0, "bounded"), (1.2, "bounded")])
def test_phi_regimes(beta, regime):
    rep = phi_growth_audit(beta)
    assert rep.verdict == regime and rep.passed, rep.extremals


def test_sum_lemma_closed_form():
    # sum over Z of (1+n^2)^-2
    exact = math.pi / 2 / math.tanh(math.pi) + math.pi ** 2 / 2 / math.sinh(math.pi) ** 2
    assert audit_sum_lemma(2, 2, 0, 0, 10_000) == pytest.approx(exact, rel=1e-11)
    assert exact == pytest.approx(1.61367, abs=1e-5)


def test_sum_lemma_translation_and_domain():
    a = audit_sum_lemma(1.2, 0.9, 4, -7, 500)
    assert a == audit_sum_lemma(1.2, 0.9, 15, 4, 500)
    for beta, gamma in ((0.9, 1.2), (0.5, 0.4), (1.0, -0.1)):
        with pytest.raises(InputError):
            audit_sum_lemma(beta, gamma, 0, 1, 100)
    with pytest.raises(InputError):
        audit_sum_lemma(1.2, 0.9, 200, 0, 100)


def test_sum_lemma_scan_small():
    rep = sum_lemma_scan(2, 2, kmax=20, K_values=(200, 2000))
    assert rep.passed
    assert rep.table("truncation").column("K") == [200, 2000]


# --- four-frequency gap ----------------------------------------------------------------

def test_gap_ratio_values():
    assert gap_ratio(1, 1, 0, 0.75) == pytest.approx(abs(2 - 2 ** 1.5) * 2 ** 0.5, rel=1e-14)
    assert gap_ratio(3, -7, 11, 0.6) == gap_ratio(-7, 3, 11, 0.6)


def test_gap_audit_small_box():
    rep = audit_freq_lower_bound(0.75, 10, 10, 100)
    assert rep.passed
    assert rep.extremal("min_ratio")["value"] > 0
    # the minimum over large |n| approaches 2a(2a-1) from above
    far = rep.extremal("min_ratio_far_n")["value"]
    assert far >= 2 * 0.75 * 0.5 * 0.98
    with pytest.raises(ConfigurationError):
        audit_freq_lower_bound(1.2, 5, 5, 5)


# --- Strichartz ratio ------------------------------------------------------------------

def _two_mode_Q(a, b, K, s):
    num = (4 * math.pi ** 2 * ((abs(a) ** 2 + abs(b) ** 2) ** 2 + 2 * abs(a) ** 2 * abs(b) ** 2)) ** 0.25
    return num / math.sqrt(abs(a) ** 2 + (1 + K * K) ** s * abs(b) ** 2)


@pytest.mark.parametrize("method", ["exact", "trapezoid"])
@pytest.mark.parametrize("a,b,K", [(1, 1, 3), (0.5, 2 - 1j, 7), (1j, 0.3, -5)])
def test_two_mode_strichartz(method, a, b, K):
    f = SpectralField.from_modes(GridSpec(16), {0: a, K: b})
    assert strichartz_ratio(f, 0.75, 0.3, method=method) == pytest.approx(_two_mode_Q(a, b, K, 0.3), rel=1e-10)


def test_single_mode_strichartz():
    f = SpectralField.from_modes(GridSpec(16), {1: 1})
    assert strichartz_ratio(f, 0.75, 0.3) == pytest.approx(math.sqrt(TWO_PI) / 2 ** 0.15, rel=1e-12)
    assert strichartz_ratio(SpectralField.zeros(GridSpec(8)), 0.75, 0.3) == 0


def test_trapezoid_matches_exact():
    f = random_field(GridSpec(32), 0.5, 3)
    # the time integrand is not periodic, so the rule is second order in the node spacing
    for T in (TWO_PI, 1.3):
        exact = l4_spacetime_norm(f, 0.75, T)
        n0 = min_time_samples(f.grid, 0.75, T)
        e1 = abs(l4_spacetime_norm(f, 0.75, T, "trapezoid") / exact - 1)
        e2 = abs(l4_spacetime_norm(f, 0.75, T, "trapezoid", Mt=4 * n0) / exact - 1)
        assert e1 < 1e-4 and e2 < e1 / 8
    with pytest.raises(ConfigurationError):
        l4_spacetime_norm(f, 0.75, method="trapezoid", Mt=min_time_samples(f.grid, 0.75) - 1)
    with pytest.raises(ConfigurationError):
        l4_spacetime_norm(f, 0.75, method="simpson")


def test_profiles():
    p = strichartz_profiles(GridSpec(64), 0.75)
    assert set(p) == {"near_extremal", "dirichlet", "random_phase", "wave_packet"}
    assert all(f.coeffs[f.grid.nyquist_index] == 0 for f in p.values())
    assert np.count_nonzero(p["wave_packet"].coeffs) == int(16 ** 0.25)


def test_strichartz_audit_small_ladder():
    rep = audit_strichartz(ladder=(16, 32, 64))
    assert rep.checks["bounded_above_threshold"]
    assert len(rep.table("ladder").rows) == 3
    with pytest.raises(ConfigurationError):
        audit_strichartz(ladder=(16, 48))


# --- multiplier sums -------------------------------------------------------------------

@pytest.mark.parametrize("n,s", [(0, 1.0), (3, 0.2), (-4, 0.5)])
def test_Mn_kernel_matches_bruteforce(n, s):
    K = 8
    shells = shell_sums([n], K, 0.75, s, 0.98, KIND_MN)
    kernel = shells.sum() * (1 + n * n) ** s
    assert kernel == pytest.approx(Mn_bruteforce(n, 0.75, s, 0.49, K), rel=1e-12)
    direct = sum(Mn_term(n, j, k, 0.75, s, 0.49) for j in range(-K, K + 1) for k in range(-K, K + 1) if j and k)
    assert kernel == pytest.approx(direct, rel=1e-12)


def test_smoothing_kernel_matches_direct():
    n, K, s, c = 5, 10, 0.6, 0.2
    kernel = shell_sums([n], K, 0.75, s, 0.99, KIND_SMOOTHING).sum() * (1 + n * n) ** (s + c)
    direct = sum(smoothing_term(n, j, k, 0.75, s, c) for j in range(-K, K + 1) for k in range(-K, K + 1) if j and k)
    assert kernel == pytest.approx(direct, rel=1e-12)


def test_shells_fold_and_truncation():
    a = shell_sums([0, 2, 7], 12, 0.75, 0.3, 0.98, KIND_MN, fold=True)
    b = shell_sums([0, 2, 7], 12, 0.75, 0.3, 0.98, KIND_MN, fold=False)
    assert np.allclose(a, b, rtol=1e-13, atol=0)
    t = truncated_sums(a, [3, 12])
    assert np.allclose(t[:, 1], a.sum(axis=1)) and np.all(t[:, 0] <= t[:, 1])


def test_cross_check_dominance():
    tab = cross_check_Mn_smoothing(0.75, 0.3, [0, 1, 5, 20], 40)
    assert all(tab.column("ok"))


def test_multiplier_audits_small():
    rep = audit_Mn_sum(n_max=16)
    assert rep.checks["symmetric_in_jk"] and rep.checks["monotone_in_K"]
    rep = audit_smoothing_sum(n_max=16)
    assert rep.checks["probe_grows"] and rep.checks["monotone_in_K"]
    with pytest.raises(InputError):
        audit_Mn_sum(n_max=16, K=32)
    with pytest.raises(InputError):
        audit_smoothing_sum(c=0.3)
    with pytest.raises(InputError):
        audit_Mn_sum(bprime=0.5)


# --- smoothing along trajectories ------------------------------------------------------

@pytest.mark.parametrize("gauged", [False, True])
def test_single_mode_smoothing_closed_form(gauged):
    a, k, s, c = 0.9, 2, 0.6, 0.2
    u0 = SpectralField.from_modes(GridSpec(32), {k: a})
    ser = smoothing_series(u0, EvolutionConfig(dt=1e-3, gauged=gauged), s, c, 0.3)
    t = np.array(ser["t"])
    # gauged: u = a e^{i(omega t + x)} exactly in the gauged frame, so w carries the remaining phase
    rate = 2 * a * a - a * a if not gauged else a * a
    exact = a * (1 + k * k) ** ((s + c) / 2) * 2 * np.abs(np.sin(rate * t / 2))
    assert np.allclose(ser["w"], exact, atol=1e-10)
    assert ser["w"][0] == 0


def test_smoothing_requires_defocusing():
    u0 = random_field(GridSpec(32), 1.2, 0)
    with pytest.raises(InputError):
        smoothing_series(u0, EvolutionConfig(mu=1), 0.6, 0.2, 0.01)


# --- reports ---------------------------------------------------------------------------

def test_report_serialisation_is_deterministic(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        sum_lemma_scan(1.2, 0.9, kmax=10, K_values=(50, 100)).write(os.fspath(d))
    names = sorted(os.listdir(d1))
    assert "sum_lemma.json" in names and "sum_lemma.truncation.csv" in names
    for n in names:
        if "timing" not in n:
            assert filecmp.cmp(d1 / n, d2 / n, shallow=False)
    data = json.loads((d1 / "sum_lemma.json").read_text())
    assert data["runtime_seconds"] is None
    assert set(data) >= {"name", "params", "extremals", "tables", "checks", "verdict", "pass"}


def test_report_helpers():
    rep = AuditReport("x", {"a": np.float64(1.5)}, [{"label": "m", "value": np.int64(3)}],
                      [Table("t", ["a", "b"], [[1, 0.1], [2, np.float64(0.2)]])], {"ok": np.bool_(True)})
    assert rep.passed and rep.extremal("m")["value"] == 3
    assert rep.table("t").to_csv().splitlines() == ["a,b", "1,0.10000000000000001", "2,0.20000000000000001"]
    assert json.loads(rep.to_json())["checks"]["ok"] is True
    assert format_float(1 / 3) == "0.33333333333333331"
    assert relative_change(2.0, 2.1) == pytest.approx(0.05)
    assert "x" in rep.summary_line()
