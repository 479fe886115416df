"""The multiplier sums behind the trilinear estimates.

With k₁ = n+j, k₂ = n+j+k, k₃ = n+k (so k₁ - k₂ + k₃ = n) and jk ≠ 0 (the non-resonant
restriction k₁ ≠ n, k₂ ≠ k₁):

    M_n  = Σ ⟨n⟩^{2s} / (⟨k₁⟩^{2s}⟨k₂⟩^{2s}⟨k₃⟩^{2s} ⟨ω₁ - ω₂ + ω₃ - ω_n⟩^{2b'})
    M(n) = Σ ⟨n⟩^{2s+2c} / (⟨n+j⟩^{2s}⟨n+k⟩^{2s}⟨n+j+k⟩^{2s} ⟨|jk|/(|n|+|j|+|k|)^{2-2α}⟩^{1-ε})

truncated to |j|, |k| ≤ K. The compiled kernel accumulates terms into shells
r = max(|j|,|k|), so one pass yields the sum for every truncation K' ≤ K. The terms are
symmetric in j ↔ k; the kernel sums k ≥ j with weight 2 off the diagonal.
"""

from __future__ import annotations

import math
import time

import numba
import numpy as np

from ..errors import InputError
from ..operators import check_alpha
from .lemmas import gap_ratio
from .report import AuditReport, Table, relative_change

KIND_MN, KIND_SMOOTHING = 0, 1


@numba.njit(parallel=True, cache=True)
def _shell_sums(nvals, K, alpha, s, expo, kind, fold):
    """Per-n shell sums of the (j,k) terms without the ⟨n⟩ prefactor.

    kind 0: weight ⟨phase⟩^{-expo} with expo = 2b'; kind 1: ⟨x⟩^{-expo} with expo = 1-ε.
    fold: sum k ≥ j with weight 2 (True) or the full square (False).
    """
    nn = nvals.shape[0]
    out = np.zeros((nn, K + 1))
    nabs = 0
    for a in range(nn):
        nabs = max(nabs, abs(nvals[a]))
    off = nabs + 2 * K + 1
    L = 2 * off + 1
    br = np.empty(L)
    pw = np.empty(L)
    dn = np.empty(L)
    for i in range(L):
        m = i - off
        br[i] = (1.0 + m * m) ** (-s)
        pw[i] = abs(m) ** (2.0 * alpha)
        dn[i] = abs(m) ** (2.0 - 2.0 * alpha) if m != 0 else 1.0
    hexp = 0.5 * expo
    for a in numba.prange(nn):
        n = nvals[a]
        for j in range(-K, K + 1):
            if j == 0:
                continue
            aj = abs(j)
            k0 = j if fold else -K
            for k in range(k0, K + 1):
                if k == 0:
                    continue
                ak = abs(k)
                t = br[n + j + off] * br[n + k + off] * br[n + j + k + off]
                if kind == 0:
                    ph = pw[n + j + off] - pw[n + j + k + off] + pw[n + k + off] - pw[n + off]
                    t *= (1.0 + ph * ph) ** (-hexp)
                else:
                    x = aj * ak / dn[abs(n) + aj + ak + off]
                    t *= (1.0 + x * x) ** (-hexp)
                if fold and k != j:
                    t *= 2.0
                out[a, max(aj, ak)] += t
    return out


def shell_sums(nvals, K: int, alpha: float, s: float, expo: float, kind: int, fold: bool = True) -> np.ndarray:
    return _shell_sums(np.asarray(nvals, dtype=np.int64), int(K), float(alpha), float(s), float(expo), int(kind), bool(fold))


def truncated_sums(shells: np.ndarray, K_values) -> np.ndarray:
    """Rows: n; columns: cumulative sums up to each truncation in ``K_values``."""
    cs = np.cumsum(shells, axis=1)
    return cs[:, list(K_values)]


def _bracket(x):
    return np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2)


def Mn_term(n, j, k, alpha, s, bprime):
    """One term of M_n (prefactor included), evaluated directly."""
    k1, k2, k3 = n + j, n + j + k, n + k
    a = lambda m: abs(m) ** (2 * alpha)
    ph = a(k1) - a(k2) + a(k3) - a(n)
    return float(_bracket(n) ** (2 * s) / ((_bracket(k1) * _bracket(k2) * _bracket(k3)) ** (2 * s) * _bracket(ph) ** (2 * bprime)))


def smoothing_term(n, j, k, alpha, s, c, eps=0.01):
    """One term of M(n) (prefactor included), evaluated directly."""
    x = abs(j * k) / (abs(n) + abs(j) + abs(k)) ** (2 - 2 * alpha)
    den = (_bracket(n + j) * _bracket(n + k) * _bracket(n + j + k)) ** (2 * s) * _bracket(x) ** (1 - eps)
    return float(_bracket(n) ** (2 * s + 2 * c) / den)


def Mn_bruteforce(n: int, alpha: float, s: float, bprime: float, K: int) -> float:
    """Independent check: loop over triples (k₁,k₂,k₃) with k₁-k₂+k₃ = n, k₁ ≠ n, k₂ ≠ k₁,
    |k₁-n| ≤ K, |k₂-k₁| ≤ K."""
    tot = 0.0
    for k1 in range(n - K, n + K + 1):
        for k2 in range(k1 - K, k1 + K + 1):
            if k1 == n or k2 == k1:
                continue
            k3 = n - k1 + k2
            a = lambda m: abs(m) ** (2 * alpha)
            ph = a(k1) - a(k2) + a(k3) - a(n)
            tot += _bracket(n) ** (2 * s) / ((_bracket(k1) * _bracket(k2) * _bracket(k3)) ** (2 * s) * _bracket(ph) ** (2 * bprime))
    return float(tot)


def _symmetry_check(alpha, s, expo, kind, K=16, nvals=(0, 1, 5)):
    a = shell_sums(nvals, K, alpha, s, expo, kind, fold=True).sum(axis=1)
    b = shell_sums(nvals, K, alpha, s, expo, kind, fold=False).sum(axis=1)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def _trend_slope(n, vals, frac=0.25):
    """Least-squares slope of log(value) against log n over the top (1-frac) of the n-range."""
    n = np.asarray(n, float)
    sel = n >= max(1.0, frac * n.max())
    return float(np.polyfit(np.log(n[sel]), np.log(np.asarray(vals)[sel]), 1)[0])


def _stability_report(name, params, nvals, prefactor, sums, K_values, tol, extra_checks=None, extra_tables=(), notes=()):
    vals = sums * prefactor[:, None]
    maxes = vals.max(axis=0)
    argmax = nvals[vals.argmax(axis=0)]
    change = relative_change(maxes[-2], maxes[-1])
    final = vals[:, -1]
    slope = _trend_slope(nvals, final)
    monotone_K = bool(np.all(np.diff(vals, axis=1) >= 0))
    checks = {"monotone_in_K": monotone_K, "stable_K_to_2K": bool(change < tol), "nonincreasing_trend": bool(slope <= 0.0)}
    checks.update(extra_checks or {})
    rep = AuditReport(
        name=name,
        params=params,
        extremals=[{"label": "max_over_n", "value": float(maxes[-1]), "n": int(argmax[-1]), "K": int(K_values[-1])},
                   {"label": "max_over_n_at_K", "value": float(maxes[-2]), "n": int(argmax[-2]), "K": int(K_values[-2])},
                   {"label": "relative_change_K_to_2K", "value": float(change)},
                   {"label": "large_n_log_slope", "value": slope}],
        tables=[Table("truncation", ["K", "max_over_n", "argmax_n"], [[int(K), float(m), int(a)] for K, m, a in zip(K_values, maxes, argmax)]),
                Table("by_n", ["n"] + [f"K={K}" for K in K_values], [[int(n)] + [float(v) for v in row] for n, row in zip(nvals, vals)]),
                *extra_tables],
        checks=checks,
        notes=list(notes),
    )
    return rep


def _K_ladder(K):
    return [K // 4, K // 2, K, 2 * K]


def audit_Mn_sum(alpha: float = 0.75, s: float = 0.2, bprime: float = 0.49, n_max: int = 256, K: int | None = None, tol: float = 0.05) -> AuditReport:
    """max_{0≤n≤n_max} M_n at truncations K/4, K/2, K, 2K; pass iff K → 2K moves it by < tol
    and the large-n trend is non-increasing. Default K = 4·n_max."""
    t0 = time.perf_counter()
    check_alpha(alpha)
    if not s > (1 - alpha) / 2:
        raise InputError(f"need s > (1-alpha)/2 = {(1 - alpha) / 2:g}, got {s}")
    if not 0 <= bprime < 0.5:
        raise InputError(f"need 0 <= bprime < 1/2, got {bprime}")
    K = 4 * n_max if K is None else int(K)
    if K < 4 * n_max:
        raise InputError(f"truncation K={K} below 4*n_max={4 * n_max}")
    nvals = np.arange(n_max + 1)
    Ks = _K_ladder(K)
    sums = truncated_sums(shell_sums(nvals, 2 * K, alpha, s, 2 * bprime, KIND_MN), Ks)
    pre = _bracket(nvals) ** (2 * s)
    sym = _symmetry_check(alpha, s, 2 * bprime, KIND_MN)
    rep = _stability_report("Mn_sum", {"alpha": alpha, "s": s, "bprime": bprime, "n_max": n_max, "K": K, "tol": tol},
                            nvals, pre, sums, Ks, tol, {"symmetric_in_jk": sym < 1e-12})
    rep.extremals.append({"label": "jk_symmetry_defect", "value": sym})
    rep.verdict = "consistent with bounded" if rep.passed else "growth detected or truncation not converged"
    rep.runtime_seconds = time.perf_counter() - t0
    return rep


def check_smoothing_params(alpha, s, c):
    if not s > (1 - alpha) / 2:
        raise InputError(f"need s > (1-alpha)/2 = {(1 - alpha) / 2:g}, got {s}")
    bound = min(alpha - 0.5, 2 * s + alpha - 1)
    if not c < bound:
        raise InputError(f"need c < min(alpha-1/2, 2s+alpha-1) = {bound:g}, got {c}")


def audit_smoothing_sum(alpha: float = 0.75, s: float = 0.6, c: float = 0.2, n_max: int = 256, K: int | None = None,
                        eps: float = 0.01, tol: float = 0.05, probe_offset: float = 0.1) -> AuditReport:
    """Same protocol as :func:`audit_Mn_sum` for M(n), plus the failure probe at
    c = α - 1/2 + probe_offset, which is expected to increase strictly in n."""
    t0 = time.perf_counter()
    check_alpha(alpha)
    check_smoothing_params(alpha, s, c)
    K = 4 * n_max if K is None else int(K)
    if K < 4 * n_max:
        raise InputError(f"truncation K={K} below 4*n_max={4 * n_max}")
    nvals = np.arange(n_max + 1)
    Ks = _K_ladder(K)
    sums = truncated_sums(shell_sums(nvals, 2 * K, alpha, s, 1 - eps, KIND_SMOOTHING), Ks)
    c_probe = alpha - 0.5 + probe_offset
    probe = sums[:, -1] * _bracket(nvals) ** (2 * s + 2 * c_probe)
    probe_grows = bool(np.all(np.diff(probe) > 0))
    sym = _symmetry_check(alpha, s, 1 - eps, KIND_SMOOTHING)
    rep = _stability_report(
        "smoothing_sum",
        {"alpha": alpha, "s": s, "c": c, "eps": eps, "n_max": n_max, "K": K, "tol": tol, "c_probe": c_probe},
        nvals, _bracket(nvals) ** (2 * s + 2 * c), sums, Ks, tol,
        {"symmetric_in_jk": sym < 1e-12, "probe_grows": probe_grows},
        [Table("probe", ["n", "M_probe"], [[int(n), float(v)] for n, v in zip(nvals, probe)])],
    )
    rep.extremals += [{"label": "probe_max", "value": float(probe.max()), "n": int(nvals[probe.argmax()])},
                      {"label": "jk_symmetry_defect", "value": sym}]
    if not probe_grows:
        rep.notes.append("anomaly: failure probe did not grow monotonically in n")
    rep.verdict = "consistent with bounded" if rep.passed else "growth detected or truncation not converged"
    rep.runtime_seconds = time.perf_counter() - t0
    return rep


def gap_constant(alpha: float, n_values, K: int) -> float:
    """min of g·(|j|+|k|+|n|)^{2-2α}/(|j||k|) over the truncated box and the given n."""
    j = np.arange(-K, K + 1)
    j = j[j != 0]
    jj, kk = np.meshgrid(j, j, indexing="ij")
    return float(min(np.min(gap_ratio(jj, kk, int(n), alpha)) for n in n_values))


def cross_check_Mn_smoothing(alpha: float, s: float, n_values, K: int, eps: float = 0.01) -> Table:
    """On identical truncations, M_n with 2b' = 1-ε is dominated termwise by
    min(1,C)^{-(1-ε)} M(n)|_{c=0}, C being the gap constant over the same box."""
    n_values = np.asarray(n_values, dtype=np.int64)
    C = gap_constant(alpha, n_values, K)
    pre = _bracket(n_values) ** (2 * s)
    mn = shell_sums(n_values, K, alpha, s, 1 - eps, KIND_MN).sum(axis=1) * pre
    sm = shell_sums(n_values, K, alpha, s, 1 - eps, KIND_SMOOTHING).sum(axis=1) * pre
    bound = min(1.0, C) ** -(1 - eps) * sm
    rows = [[int(n), float(a), float(b), bool(a <= b * (1 + 1e-12))] for n, a, b in zip(n_values, mn, bound)]
    return Table("cross_check", ["n", "Mn", "bound", "ok"], rows)
