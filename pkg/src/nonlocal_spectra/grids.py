"""Uniform symmetric grids and continuum Fourier transforms via the FFT.

Conventions. A grid holds nodes x_j = (j - n/2) dx for j = 0..n-1 (n even),
so 0 is a node and the box is [-W, W) with W = n dx / 2. The dual nodes are
the FFT frequencies k_m = 2 pi m / (n dx). The forward transform approximates
fhat(k) = int f(x) e^{-ikx} dx by the trapezoidal sum dx * sum_j f(x_j)
e^{-ik x_j}, which for decaying integrands is spectrally accurate (Poisson
summation: the only errors are box truncation and dual-box aliasing).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    """Symmetric uniform grid on the line with an even number of nodes."""

    n: int
    dx: float

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise InvalidParameterError(f"grid size must be even and >= 4, got {self.n}")
        if self.dx <= 0:
            raise InvalidParameterError(f"grid spacing must be positive, got {self.dx}")

    @classmethod
    def from_half_width(cls, half_width: float, n: int) -> "Grid1D":
        return cls(n=n, dx=2.0 * half_width / n)

    @classmethod
    def from_dual_half_width(cls, k_half_width: float, n: int) -> "Grid1D":
        """Grid whose FFT frequencies cover [-K, K) with K = k_half_width."""
        return cls(n=n, dx=np.pi / k_half_width)

    @property
    def half_width(self) -> float:
        return 0.5 * self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.dx * (np.arange(self.n) - self.n // 2)

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / (self.n * self.dx)

    @property
    def k_fft(self) -> np.ndarray:
        """Dual nodes in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @property
    def k_sorted(self) -> np.ndarray:
        return np.fft.fftshift(self.k_fft)

    @property
    def k_half_width(self) -> float:
        return np.pi / self.dx

    def index_of_zero(self) -> int:
        return self.n // 2

    def with_padding(self, factor: float) -> "Grid1D":
        """Wider grid (same spacing) whose size is the next power of two."""
        if factor < 1:
            raise InvalidParameterError("padding factor must be >= 1")
        target = int(np.ceil(self.n * factor))
        m = 2
        while m < target:
            m *= 2
        return Grid1D(n=m, dx=self.dx)

    def embed(self, f: np.ndarray, padded: "Grid1D") -> np.ndarray:
        """Zero-extend nodal values onto a wider grid with the same spacing."""
        out = np.zeros(padded.n, dtype=f.dtype)
        lo = padded.n // 2 - self.n // 2
        out[lo:lo + self.n] = f
        return out

    def restrict(self, f: np.ndarray, padded: "Grid1D") -> np.ndarray:
        lo = padded.n // 2 - self.n // 2
        return f[lo:lo + self.n]

    def quad_mass(self, f: np.ndarray) -> float:
        """Trapezoid-equal Riemann mass of nodal values."""
        return float(np.sum(f) * self.dx)


def _signs(n: int) -> np.ndarray:
    s = np.ones(n)
    s[1::2] = -1.0
    return s


def space_to_freq(f: np.ndarray, grid: Grid1D) -> np.ndarray:
    """fhat(k_m) in FFT order for nodal values f on ``grid``."""
    return _signs(grid.n) * np.fft.fft(f) * grid.dx


def freq_to_space(fhat: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Inverse of :func:`space_to_freq`; returns complex nodal values."""
    return np.fft.ifft(fhat * _signs(grid.n)) / grid.dx


def freq_to_space_real(fhat: np.ndarray, grid: Grid1D, imag_tol: float = 1e-8) -> np.ndarray:
    out = freq_to_space(fhat, grid)
    scale = max(1.0, float(np.max(np.abs(out.real))))
    if np.max(np.abs(out.imag)) > imag_tol * scale:
        raise FloatingPointError(
            "inverse transform of an even real spectrum produced a spurious "
            f"imaginary part (max {np.max(np.abs(out.imag)):.3e})"
        )
    return out.real


def gauss_legendre_panels(edges: np.ndarray, nodes_per_panel: int = 16):
    """Composite Gauss-Legendre rule over consecutive panels.

    Returns flattened (nodes, weights) covering [edges[0], edges[-1]].
    """
    base_x, base_w = np.polynomial.legendre.leggauss(nodes_per_panel)
    lo = np.asarray(edges[:-1])
    hi = np.asarray(edges[1:])
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    weights = (half[:, None] * base_w[None, :]).ravel()
    return nodes, weights
