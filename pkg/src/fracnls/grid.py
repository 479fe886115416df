"""Periodic grid, Fourier transforms and Sobolev/Lebesgue norms on the 2π-torus.

Conventions
-----------
Coefficients follow the continuum normalisation

    c_k = (1/2π) ∫ f(x) e^{-ikx} dx  ≈  (1/M) Σ_j f(x_j) e^{-ik x_j},   x_j = 2πj/M,

so that ``f(x) = Σ_k c_k e^{ikx}`` and Plancherel reads ``∫|f|² = 2π Σ|c_k|²``.

* The H^s norm carries no 2π: ``‖f‖_{H^s}² = Σ ⟨k⟩^{2s} |c_k|²`` with ``⟨k⟩ = (1+k²)^{1/2}``.
* The L² norm is the continuum integral and does carry it: ``‖f‖_{L²}² = 2π Σ|c_k|²``.

Coefficient arrays are stored in FFT order (0, 1, …, M/2-1, -M/2, …, -1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, InputError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridSpec:
    """M equispaced collocation points on [0, 2π); frequencies K = {-M/2, …, M/2-1}."""

    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 4 or self.M % 2:
            raise ConfigurationError(f"grid size must be an even integer >= 4, got {self.M}")
        object.__setattr__(self, "M", int(self.M))

    @cached_property
    def k(self) -> np.ndarray:
        """Integer frequencies in FFT order."""
        k = np.fft.fftfreq(self.M, 1.0 / self.M).round().astype(np.int64)
        k.flags.writeable = False
        return k

    @cached_property
    def x(self) -> np.ndarray:
        return TWO_PI * np.arange(self.M) / self.M

    @cached_property
    def bracket(self) -> np.ndarray:
        """⟨k⟩ = (1+k²)^{1/2} for every frequency."""
        return np.sqrt(1.0 + self.k.astype(float) ** 2)

    @property
    def kmax(self) -> int:
        return self.M // 2 - 1

    @property
    def nyquist_index(self) -> int:
        return self.M // 2


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients of a periodic function on ``grid`` (FFT order, read-only)."""

    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.M,):
            raise ConfigurationError(f"expected {self.grid.M} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InputError("spectral field contains NaN or Inf")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.M, complex))

    @classmethod
    def from_modes(cls, grid: GridSpec, modes: dict[int, complex]) -> "SpectralField":
        """Build a field from a ``{frequency: amplitude}`` mapping."""
        c = np.zeros(grid.M, complex)
        for k, a in modes.items():
            if not -grid.M // 2 <= k < grid.M // 2:
                raise ConfigurationError(f"frequency {k} not resolved on M={grid.M}")
            c[k % grid.M] = a
        return cls(grid, c)

    def coefficient(self, k: int) -> complex:
        return complex(self.coeffs[k % self.grid.M])

    def with_coeffs(self, coeffs) -> "SpectralField":
        return SpectralField(self.grid, coeffs)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)


def _check_same_grid(*fields: SpectralField) -> None:
    M = fields[0].grid.M
    if any(f.grid.M != M for f in fields):
        raise ConfigurationError("fields live on different grids: " + ", ".join(str(f.grid.M) for f in fields))


def forward_transform(values, grid: GridSpec) -> SpectralField:
    """Samples at x_j = 2πj/M → coefficients c_k = (1/M) Σ_j u_j e^{-ik x_j}."""
    v = np.asarray(values, dtype=np.complex128)
    if v.shape != (grid.M,):
        raise ConfigurationError(f"expected {grid.M} samples, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError("samples contain NaN or Inf")
    return SpectralField(grid, np.fft.fft(v) / grid.M)


def inverse_transform(f: SpectralField) -> np.ndarray:
    """Coefficients → samples u(x_j) = Σ_k c_k e^{ik x_j}."""
    return np.fft.ifft(f.coeffs) * f.grid.M


def pad_coeffs(coeffs: np.ndarray, Mp: int) -> np.ndarray:
    """Embed FFT-ordered coefficients of length M into a zero-padded array of length Mp ≥ M."""
    M = coeffs.shape[-1]
    out = np.zeros(coeffs.shape[:-1] + (Mp,), complex)
    h = M // 2
    out[..., :h] = coeffs[..., :h]
    out[..., Mp - h:] = coeffs[..., M - h:]
    return out


def truncate_coeffs(coeffs: np.ndarray, M: int) -> np.ndarray:
    """Inverse of :func:`pad_coeffs`: keep the frequencies of the M-point grid."""
    Mp = coeffs.shape[-1]
    h = M // 2
    return np.concatenate([coeffs[..., :h], coeffs[..., Mp - h:]], axis=-1)


def to_physical(f: SpectralField, pad: int = 1) -> np.ndarray:
    """Samples of the trigonometric interpolant on a grid ``pad`` times finer."""
    if pad == 1:
        return inverse_transform(f)
    Mp = pad * f.grid.M
    return np.fft.ifft(pad_coeffs(f.coeffs, Mp)) * Mp


def from_physical(values: np.ndarray, grid: GridSpec) -> SpectralField:
    """Forward transform of samples on a (possibly padded) grid, truncated to ``grid``."""
    Mp = values.shape[-1]
    c = np.fft.fft(values) / Mp
    if Mp != grid.M:
        c = truncate_coeffs(c, grid.M)
    return SpectralField(grid, c)


@dataclass(frozen=True)
class NormSpec:
    """Which norm to take. ``kind`` is one of ``sobolev``, ``L2``, ``L4``, ``Linf``."""

    kind: str
    s: float = 0.0

    KINDS = ("sobolev", "L2", "L4", "Linf")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown norm kind {self.kind!r}; choose from {self.KINDS}")
        if not np.isfinite(self.s):
            raise ConfigurationError("regularity exponent must be finite")

    @property
    def label(self) -> str:
        return f"H^{self.s:g}" if self.kind == "sobolev" else self.kind

    @classmethod
    def parse(cls, text: str) -> "NormSpec":
        """``"H1.5"``/``"H^1.5"`` → Sobolev, otherwise ``L2``/``L4``/``Linf``."""
        t = text.strip()
        if t.startswith("H"):
            return cls("sobolev", float(t[1:].lstrip("^")))
        return cls(t)


def sobolev_norm(f: SpectralField, s: float) -> float:
    return float(np.sqrt(np.sum(f.grid.bracket ** (2 * s) * np.abs(f.coeffs) ** 2)))


def norm(f: SpectralField, spec: NormSpec, pad: int = 2) -> float:
    """Evaluate ``spec`` on ``f``; L⁴ and L^∞ use a ``pad``-times refined grid."""
    if spec.kind == "sobolev":
        return sobolev_norm(f, spec.s)
    if spec.kind == "L2":
        return float(np.sqrt(TWO_PI * np.sum(np.abs(f.coeffs) ** 2)))
    if pad < 2:
        raise ConfigurationError("L4/Linf need a padding factor >= 2")
    u = to_physical(f, pad)
    if spec.kind == "L4":
        return float((TWO_PI / u.size * np.sum(np.abs(u) ** 4)) ** 0.25)
    return float(np.max(np.abs(u)))


def phase_sequence(n: int, seed: int) -> np.ndarray:
    """Uniform phases in [0, 2π) assigned to frequencies in the order 0, 1, -1, 2, -2, ….

    The ordering is resolution independent: the phase of a given frequency does not
    depend on M, so the same seed describes the same function at every resolution.
    """
    return TWO_PI * np.random.default_rng(seed).random(n)


def _nested_index(k: np.ndarray) -> np.ndarray:
    # 0 -> 0, 1 -> 1, -1 -> 2, 2 -> 3, -2 -> 4, ...
    return np.where(k > 0, 2 * k - 1, -2 * k)


def random_field(grid: GridSpec, sigma: float, seed: int, amplitude: float = 1.0) -> SpectralField:
    """Random-phase field with c_k = amplitude·⟨k⟩^{-σ} e^{iθ_k}; the -M/2 mode is zero.

    Lies in H^s uniformly in M iff s < σ - 1/2.
    """
    k = grid.k
    theta = phase_sequence(grid.M + 1, seed)[_nested_index(k)]
    c = amplitude * grid.bracket ** (-float(sigma)) * np.exp(1j * theta)
    c[grid.nyquist_index] = 0.0
    return SpectralField(grid, c)
