"""Fourier multipliers: fractional Laplacian, |∇|^α, the free propagator and sharp projections.

Real powers of negative frequencies are read as powers of |n|, i.e. the symbol of
(-Δ)^α is |n|^{2α}; this is the reading under which x ↦ (x+c)^{2α} - (x-c)^{2α} is odd.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import SpectralField

#: beyond this frequency magnitude the four-term gap is evaluated in 80-bit precision
EXTENDED_PRECISION_THRESHOLD = 10_000


def check_alpha(alpha: float, comparison: bool = False) -> float:
    """Validate the dispersion exponent: 1/2 < α < 1, or α = 1 in comparison mode."""
    a = float(alpha)
    if 0.5 < a < 1.0:
        return a
    if comparison and a == 1.0:
        return a
    raise ConfigurationError(
        f"alpha out of (1/2,1): {a:g}" + ("" if comparison else " (alpha = 1 needs comparison mode)")
    )


def symbol_laplacian(n, alpha: float):
    """|n|^{2α}, elementwise for arrays."""
    return np.abs(np.asarray(n, dtype=float)) ** (2.0 * alpha)


def dispersion(f_or_grid, alpha: float) -> np.ndarray:
    grid = getattr(f_or_grid, "grid", f_or_grid)
    return symbol_laplacian(grid.k, alpha)


def apply_frac_derivative(f: SpectralField, alpha: float) -> SpectralField:
    """c_k ↦ |k|^α c_k."""
    return f.with_coeffs(np.abs(f.grid.k.astype(float)) ** alpha * f.coeffs)


def propagate_linear(f: SpectralField, t: float, alpha: float, gauge_P: float = 0.0) -> SpectralField:
    """c_k ↦ e^{it|k|^{2α}} e^{-i·gauge_P·t} c_k.

    ``gauge_P`` is a real phase rate; ``μP`` reproduces the resonant phase picked up by
    solutions of ``iu_t + (-Δ)^α u = μ|u|²u`` (see :func:`fracnls.evolution.resonant_phase_rate`).
    """
    phase = t * dispersion(f, alpha) - gauge_P * t
    return f.with_coeffs(np.exp(1j * phase) * f.coeffs)


@dataclass(frozen=True)
class Projection:
    """Sharp Fourier cutoff: ``low`` keeps |n| ≤ N, ``high`` keeps |n| > N."""

    N: int
    mode: str = "low"

    def __post_init__(self):
        if self.mode not in ("low", "high"):
            raise ConfigurationError(f"projection mode must be 'low' or 'high', got {self.mode!r}")
        if self.N < 0:
            raise ConfigurationError("projection cutoff must be nonnegative")

    def mask(self, grid) -> np.ndarray:
        low = np.abs(grid.k) <= self.N
        return low if self.mode == "low" else ~low


def project(f: SpectralField, p: Projection) -> SpectralField:
    if p.N >= f.grid.M // 2:
        raise ConfigurationError(f"cutoff N={p.N} not resolved by grid M={f.grid.M} (need N < M/2)")
    return f.with_coeffs(np.where(p.mask(f.grid), f.coeffs, 0.0))


def _abs_pow(x, p):
    return np.abs(x) ** p


def freq_quadruple_gap(j, k, n, alpha: float):
    """g(j,k,n) = | |n+k|^{2α} - |n+j+k|^{2α} + |n+j|^{2α} - |n|^{2α} |.

    Vectorised over broadcastable integer inputs. When any frequency exceeds
    ``EXTENDED_PRECISION_THRESHOLD`` the sum is formed in long double, since g can be many
    orders of magnitude smaller than each of the four terms.
    """
    j, k, n = np.broadcast_arrays(*(np.asarray(v, dtype=np.int64) for v in (j, k, n)))
    big = max(np.max(np.abs(n + j + k), initial=0), np.max(np.abs(n), initial=0),
              np.max(np.abs(n + j), initial=0), np.max(np.abs(n + k), initial=0))
    dtype = np.longdouble if big > EXTENDED_PRECISION_THRESHOLD else np.float64
    p = dtype(2.0) * dtype(alpha)
    a = lambda m: _abs_pow(m.astype(dtype), p)
    # grouped so that swapping j and k gives a bitwise-identical result
    g = np.abs((a(n + k) + a(n + j)) - (a(n + j + k) + a(n)))
    g = g.astype(np.float64)
    return g if g.ndim else float(g)
