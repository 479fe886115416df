"""Quick end-to-end check of the closed-form examples (one-mode fields, constants, identities)."""

from __future__ import annotations

import math

import numpy as np

from . import audits
from .config import loads_config
from .errors import ConfigurationError
from .evolution import EvolutionConfig, evolve, local_existence_heuristic
from .grid import TWO_PI, GridSpec, NormSpec, SpectralField, forward_transform, inverse_transform, norm, random_field, sobolev_norm
from .highlow import HighLowConfig, decompose_initial, hamiltonian_difference_bound_check, run_stage
from .invariants import energy, gagliardo_nirenberg_ratio, mass
from .nonlinearity import cubic, cubic_oracle, resonant_decompose, resonant_decompose_multilinear, rho_sobolev_norm
from .operators import Projection, apply_frac_derivative, freq_quadruple_gap, project, propagate_linear, symbol_laplacian

TOL = 1e-12


def _close(a, b, tol=TOL):
    return bool(np.allclose(a, b, rtol=tol, atol=tol))


def _single(M=16, k=1, a=1.0):
    return SpectralField.from_modes(GridSpec(M), {k: a})


def _transforms():
    g8, g16 = GridSpec(8), GridSpec(16)
    yield "forward: e^{ix}", _close(forward_transform(np.exp(1j * g8.x), g8).coeffs, _single(8).coeffs)
    yield "forward: constant", _close(forward_transform(np.ones(8), g8).coeffs, _single(8, 0).coeffs)
    f = forward_transform(np.cos(2 * g16.x), g16)
    yield "forward: cos 2x", _close(f.coeffs, SpectralField.from_modes(g16, {2: 0.5, -2: 0.5}).coeffs)
    yield "inverse: single mode", _close(inverse_transform(_single(8)), np.exp(1j * g8.x))
    yield "inverse: zero", _close(inverse_transform(SpectralField.zeros(g8)), np.zeros(8))


def _norms():
    e1, one = _single(), _single(k=0)
    two = SpectralField.from_modes(GridSpec(16), {1: 1, 2: 1})
    s = 0.7
    yield "norm: H^s of e^{ix}", _close(sobolev_norm(e1, s), 2 ** (s / 2))
    yield "norm: L2 of e^{ix}", _close(norm(e1, NormSpec("L2")), math.sqrt(TWO_PI))
    yield "norm: H^s of 1", _close(sobolev_norm(one, s), 1.0)
    yield "norm: H^1 of two modes", _close(sobolev_norm(two, 1.0), math.sqrt(7))
    yield "norm: L4 of a e^{3ix}", _close(norm(_single(k=3, a=2.0), NormSpec("L4")), 2 * TWO_PI ** 0.25, 1e-10)
    g = GridSpec(64)
    yield "random field: determinism", _close(random_field(g, 1.2, 5).coeffs, random_field(g, 1.2, 5).coeffs, 0)
    bound = math.sqrt(1 + 2 * sum((1 + k * k) ** (1 - 10) for k in range(1, 32)))
    yield "random field: sigma=10 H^1 bound", sobolev_norm(random_field(g, 10, 1), 1.0) <= bound * (1 + TOL)


def _operators():
    f = random_field(GridSpec(32), 1.0, 2)
    yield "symbol: n=0", symbol_laplacian(0, 0.75) == 0
    yield "symbol: n=-1", symbol_laplacian(-1, 0.75) == 1
    yield "symbol: n=2", _close(symbol_laplacian(2, 0.75), 2 ** 1.5)
    yield "frac derivative: constant", _close(apply_frac_derivative(_single(k=0), 0.6).coeffs, 0)
    yield "frac derivative: c_1", _close(apply_frac_derivative(_single(), 0.6).coeffs, _single().coeffs)
    yield "propagator: t=0", _close(propagate_linear(f, 0.0, 0.75).coeffs, f.coeffs, 0)
    yield "propagator: single mode", _close(propagate_linear(_single(), 0.3, 0.75).coefficient(1), np.exp(0.3j))
    yield "propagator: unitary", _close(sobolev_norm(propagate_linear(f, 1.7, 0.75), 1.3), sobolev_norm(f, 1.3))
    yield "projection: N=0", _close(project(f, Projection(0)).coeffs, np.where(f.grid.k == 0, f.coeffs, 0), 0)
    yield "projection: N large", _close(project(f, Projection(15)).coeffs, f.coeffs, 0)
    yield "gap: j=0 vanishes", freq_quadruple_gap(0, 5, 7, 0.75) == 0
    yield "gap: (1,1,0)", _close(freq_quadruple_gap(1, 1, 0, 0.75), abs(2 - 2 ** 1.5))


def _nonlinearity():
    a = 0.8 - 0.3j
    u = _single(k=3, a=a)
    zero = SpectralField.zeros(GridSpec(16))
    yield "cubic: single mode", _close(cubic(u).coeffs, _single(k=3, a=abs(a) ** 2 * a).coeffs)
    yield "oracle: zero", _close(cubic_oracle(zero).coeffs, 0, 0)
    yield "oracle: single mode", _close(cubic_oracle(u).coeffs, _single(k=3, a=abs(a) ** 2 * a).coeffs)
    parts = resonant_decompose(u)
    yield "decompose: single mode P", _close(parts.P, 2 * abs(a) ** 2)
    yield "decompose: single mode rho", _close(parts.rho.coefficient(3), -abs(a) ** 2 * a)
    yield "decompose: single mode R", _close(parts.R.coeffs, 0)
    z = resonant_decompose(zero)
    yield "decompose: zero", z.P == 0 and not z.rho.coeffs.any() and not z.R.coeffs.any()
    f = random_field(GridSpec(16), 1.0, 3)
    rho, R = resonant_decompose_multilinear(f, f, f)
    p = resonant_decompose(f)
    yield "multilinear: diagonal", _close(rho.coeffs, p.rho.coeffs) and _close(R.coeffs, p.R.coeffs)
    rho, R = resonant_decompose_multilinear(f, f, zero)
    yield "multilinear: w=0", _close(rho.coeffs, 0) and _close(R.coeffs, 0)
    yield "rho norm: single mode", _close(rho_sobolev_norm(_single(k=1, a=a), 0.5, 0.3), abs(a) ** 3 * 2 ** 0.4)
    yield "rho norm: zero", rho_sobolev_norm(zero, 0.5, 0.3) == 0


def _invariants():
    a, k, al = 0.6, 2, 0.75
    u = _single(k=k, a=a)
    yield "mass: constant", _close(mass(_single(k=0)), TWO_PI)
    yield "mass: single mode", _close(mass(u), TWO_PI * a * a)
    yield "energy: single mode defocusing", _close(energy(u, al, -1).energy, TWO_PI * a * a * k ** (2 * al) + math.pi * a ** 4)
    zs = energy(SpectralField.zeros(GridSpec(16)), al, -1)
    yield "energy: zero", zs.mass == zs.kinetic == zs.potential == zs.energy == 0
    yield "GN ratio: e^{ix}", _close(gagliardo_nirenberg_ratio(_single(), al), 1 / TWO_PI)
    f = random_field(GridSpec(32), 1.0, 4)
    yield "GN ratio: scale invariance", _close(gagliardo_nirenberg_ratio(3.0 * f, al), gagliardo_nirenberg_ratio(f, al))


def _evolution():
    f = random_field(GridSpec(32), 1.5, 6)
    rec = evolve(f, 0.37, EvolutionConfig(alpha=0.75, mu=0, dt=0.01), store_fields=True)
    yield "evolve: mu=0 equals propagator", _close(rec.final.coeffs, propagate_linear(f, 0.37, 0.75).coeffs)
    rec0 = evolve(f, 0.0, EvolutionConfig(), store_fields=True)
    yield "evolve: T=0", len(rec0.times) == 1 and _close(rec0.final.coeffs, f.coeffs, 0)
    unit = _single(k=0, a=1.0)
    yield "local existence: unit norm", _close(local_existence_heuristic(unit, 0.9, 2.5), 2.5)
    yield "local existence: scaling", _close(local_existence_heuristic(f, 0.9) / local_existence_heuristic(2 * f, 0.9), 16)


def _audits():
    yield "phi: k=0", audits.audit_phi(1.3, 0) == 1
    yield "phi: beta=2, k=3", _close(audits.audit_phi(2, 3), 2.6)
    yield "sum lemma: translation", _close(audits.audit_sum_lemma(1.2, 0.9, 4, -7, 500), audits.audit_sum_lemma(1.2, 0.9, 15, 4, 500), 1e-10)
    yield "gap ratio: (1,1,0)", _close(audits.gap_ratio(1, 1, 0, 0.75), abs(2 - 2 ** 1.5) * 2 ** 0.5)
    yield "gap ratio: symmetry", audits.gap_ratio(3, -7, 11, 0.6) == audits.gap_ratio(-7, 3, 11, 0.6)
    s = 0.3
    yield "Strichartz: e^{ix}", _close(audits.strichartz_ratio(_single(), 0.75, s), math.sqrt(TWO_PI) / 2 ** (s / 2), 1e-10)
    yield "M_n: single term", _close(audits.Mn_term(0, 1, 1, 0.75, 1.0, 0.49),
                                     1 / ((2 * 5 * 2) * (1 + (1 - 2 ** 1.5 + 1) ** 2) ** 0.49))
    al, sm, c, eps = 0.75, 0.6, 0.2, 0.01
    x = 1 / 2 ** (2 - 2 * al)
    yield "M(n): single term", _close(audits.smoothing_term(0, 1, 1, al, sm, c, eps),
                                      1 / ((2 * 2 * 5) ** sm * (1 + x * x) ** ((1 - eps) / 2)))
    u0 = random_field(GridSpec(32), 1.15, 0)
    ser = audits.smoothing_series(u0, EvolutionConfig(alpha=al, dt=0.01), sm, c, 0.02)
    yield "smoothing: w(0)=0", ser["w"][0] == 0


def _highlow():
    g = GridSpec(64)
    u0 = random_field(g, 1.45, 1)
    band = project(u0, Projection(10))
    phi, psi = decompose_initial(band, 10)
    yield "decompose: band-limited", not psi.coeffs.any()
    phi, psi = decompose_initial(u0, 10)
    yield "decompose: Pythagoras", _close(sobolev_norm(phi, 0.8) ** 2 + sobolev_norm(psi, 0.8) ** 2, sobolev_norm(u0, 0.8) ** 2)
    cfg = HighLowConfig(N=10, dt=1e-3)
    v, wnl, u, lin, row = run_stage(phi, SpectralField.zeros(g), 0.01, cfg, 1.0)
    yield "stage: zero carry gives w_nl=0", not wnl.coeffs.any()
    yield "Hamiltonian difference: g=0", hamiltonian_difference_bound_check(phi, SpectralField.zeros(g), 0.75) == 0


def _config():
    cfg = loads_config("[run]\ncommand = simulate\n")
    yield "config: defaults", cfg.params["alpha"] == 0.75 and loads_config(cfg.echo()) == cfg
    for text, needle in (("[run]\ncommand = audit-gap\n[audit-gap]\nalpha = 1.2\n", "alpha out of (1/2,1)"),
                         ("[run]\ncommand = highlow\n[highlow]\ns0 = 0.95\n", "s0 < s")):
        try:
            loads_config(text)
            ok = False
        except ConfigurationError as exc:
            ok = needle in str(exc)
        yield f"config: rejects ({needle})", ok


GROUPS = (_transforms, _norms, _operators, _nonlinearity, _invariants, _evolution, _audits, _highlow, _config)


def run(verbose: bool = True) -> list[tuple[str, bool]]:
    results = []
    for group in GROUPS:
        try:
            for name, ok in group():
                results.append((name, bool(ok)))
        except Exception as exc:  # a crash inside a group fails that group
            results.append((f"{group.__name__.strip('_')}: {type(exc).__name__}: {exc}", False))
    if verbose:
        for name, ok in results:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
        print(f"{sum(ok for _, ok in results)}/{len(results)} checks passed")
    return results
