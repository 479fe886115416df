"""The cubic nonlinearity and its resonant splitting |u|²u = P·u + ρ(u) + R(u).

On the Fourier side, with P = (1/π)‖u‖²_{L²} = 2Σ|c_k|²,

    (|u|²u)^(k) = Σ_{k1,k2} c_{k1} conj(c_{k2}) c_{k-k1+k2}
                = P c_k  -  |c_k|² c_k  +  Σ_{k1≠k, k2≠k1} c_{k1} conj(c_{k2}) c_{k-k1+k2}.

The fast path forms the full cubic on a 2×-padded grid (which makes it exactly the
triple convolution restricted to the grid frequencies) and obtains R by subtraction.
The literal sums are kept as O(M³) oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, CostError
from .grid import SpectralField, _check_same_grid, from_physical, sobolev_norm, to_physical

ORACLE_MAX_M = 256
DEALIAS_POLICIES = ("strict", "none")


def _pad_for(dealias: str) -> int:
    if dealias not in DEALIAS_POLICIES:
        raise ConfigurationError(f"unknown dealias policy {dealias!r}; choose from {DEALIAS_POLICIES}")
    return 2 if dealias == "strict" else 1


def cubic(f: SpectralField, dealias: str = "strict") -> SpectralField:
    """Transform of |u|²u. ``"none"`` multiplies on the native grid and aliases."""
    pad = _pad_for(dealias)
    u = to_physical(f, pad)
    return from_physical(np.abs(u) ** 2 * u, f.grid)


def trilinear(u: SpectralField, v: SpectralField, w: SpectralField, dealias: str = "strict") -> SpectralField:
    """Transform of u·conj(v)·w, i.e. Σ_{k1,k2} û(k1) conj(v̂(k2)) ŵ(k-k1+k2) on the grid."""
    _check_same_grid(u, v, w)
    pad = _pad_for(dealias)
    prod = to_physical(u, pad) * np.conj(to_physical(v, pad)) * to_physical(w, pad)
    return from_physical(prod, u.grid)


def _by_frequency(f: SpectralField) -> np.ndarray:
    # index m + M/2 holds the coefficient of frequency m
    return np.fft.fftshift(f.coeffs)


def _check_oracle_size(M: int) -> None:
    if M > ORACLE_MAX_M:
        raise CostError(f"O(M^3) oracle refused for M={M} (limit {ORACLE_MAX_M})")


def trilinear_oracle(u: SpectralField, v: SpectralField, w: SpectralField, restricted: bool = False) -> SpectralField:
    """Direct triple sum, optionally restricted to k1 ≠ k and k2 ≠ k1."""
    _check_same_grid(u, v, w)
    M = u.grid.M
    _check_oracle_size(M)
    h = M // 2
    U, V, W = (_by_frequency(x) for x in (u, v, w))
    freqs = np.arange(-h, h)
    k1, k2 = np.meshgrid(freqs, freqs, indexing="ij")
    base = U[k1 + h] * np.conj(V[k2 + h])
    out = np.zeros(M, complex)
    for k in freqs:
        k3 = k - k1 + k2
        ok = (k3 >= -h) & (k3 < h)
        if restricted:
            ok &= (k1 != k) & (k2 != k1)
        out[k + h] = np.sum(base[ok] * W[k3[ok] + h])
    return SpectralField(u.grid, np.fft.ifftshift(out))


def cubic_oracle(f: SpectralField) -> SpectralField:
    """Ground truth for :func:`cubic`: the full triple convolution over the grid frequencies."""
    return trilinear_oracle(f, f, f)


def resonant_constant(f: SpectralField) -> float:
    """P = (1/π)‖u‖²_{L²} = 2 Σ|c_k|²."""
    return float(2.0 * np.sum(np.abs(f.coeffs) ** 2))


@dataclass(frozen=True)
class ResonantParts:
    P: float
    rho: SpectralField
    R: SpectralField

    def reconstruct(self, u: SpectralField) -> SpectralField:
        return self.P * u + self.rho + self.R


def rho(f: SpectralField) -> SpectralField:
    """ρ̂(u)(k) = -|c_k|² c_k."""
    return f.with_coeffs(-np.abs(f.coeffs) ** 2 * f.coeffs)


def resonant_decompose(f: SpectralField, oracle: bool = False) -> ResonantParts:
    """Split the cubic into P·u, ρ(u) and R(u).

    With ``oracle=True`` R is the literal restricted double sum instead of the difference.
    """
    P = resonant_constant(f)
    r = rho(f)
    if oracle:
        R = trilinear_oracle(f, f, f, restricted=True)
    else:
        R = cubic(f) - P * f - r
    return ResonantParts(P, r, R)


def resonant_decompose_multilinear(u: SpectralField, v: SpectralField, w: SpectralField):
    """Trilinear ρ(u,v,w) and R(u,v,w); on the diagonal they coincide with ρ(u), R(u).

    ρ̂(u,v,w)(k) = -û(k) conj(v̂(k)) ŵ(k). The restricted sum is the full trilinear
    transform minus the k1 = k and k2 = k1 slices plus their overlap.
    """
    _check_same_grid(u, v, w)
    a, b, c = u.coeffs, v.coeffs, w.coeffs
    diag = a * np.conj(b) * c
    vw = np.sum(np.conj(b) * c)
    uv = np.sum(a * np.conj(b))
    R = trilinear(u, v, w).coeffs - a * vw - c * uv + diag
    return u.with_coeffs(-diag), u.with_coeffs(R)


def rho_sobolev_norm(f: SpectralField, s: float, c: float) -> float:
    """‖ρ(u)‖_{H^{s+c}} = (Σ_k |c_k|⁶ ⟨k⟩^{2s+2c})^{1/2}."""
    val = float(np.sqrt(np.sum(np.abs(f.coeffs) ** 6 * f.grid.bracket ** (2 * s + 2 * c))))
    direct = sobolev_norm(rho(f), s + c)
    if abs(val - direct) > 1e-12 * max(val, 1e-300):
        raise ArithmeticError(f"closed form {val!r} disagrees with the direct norm {direct!r}")
    return val
