"""Uniform grids, sampled signals and Fourier analysis on the 2-torus.

Angles follow the convention theta_k = 2*pi*k/n, k = 0..n-1, identified
with (-pi, pi] by wrapping.  Even n places a sample at theta = pi, where
tan(theta/2) diverges; functions lifted from the plane take their limit
value there (0 for decaying wavelets).  The plane-wave basis is

    phi_{n1,n2}(t1, t2) = (1/2pi) * exp(i*(n1*t1 + n2*t2)),

orthonormal for the inner product <f|g> = integral of conj(f)*g dt1 dt2,
so Fourier coefficients are f_hat^{n1,n2} = <phi_{n1,n2}|f>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(theta):
    """Map angles to the fundamental interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), TWO_PI)


@dataclass(frozen=True)
class TorusGrid:
    """Uniform n1 x n2 sampling grid on the torus."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError(f"grid needs at least 2 samples per axis, got ({self.n1}, {self.n2})")

    @property
    def step1(self) -> float:
        return TWO_PI / self.n1

    @property
    def step2(self) -> float:
        return TWO_PI / self.n2

    @property
    def cell_weight(self) -> float:
        """Riemann weight of one grid cell, (2pi/n1)*(2pi/n2)."""
        return self.step1 * self.step2

    def angles(self):
        """Wrapped angle arrays (theta1 of length n1, theta2 of length n2)."""
        t1 = wrap_angle(TWO_PI * np.arange(self.n1) / self.n1)
        t2 = wrap_angle(TWO_PI * np.arange(self.n2) / self.n2)
        return t1, t2

    def meshgrid(self):
        """Wrapped angles broadcast to the full (n1, n2) grid."""
        t1, t2 = self.angles()
        return np.meshgrid(t1, t2, indexing="ij")


def make_grid(n1: int, n2: int) -> TorusGrid:
    return TorusGrid(int(n1), int(n2))


@dataclass(frozen=True)
class TorusSignal:
    """Complex samples of a function on a TorusGrid, row-major (n1, n2)."""

    grid: TorusGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.n1, self.grid.n2):
            raise ValueError(
                f"samples shape {samples.shape} does not match grid ({self.grid.n1}, {self.grid.n2})"
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal contains non-finite samples")
        object.__setattr__(self, "samples", samples)

    def norm(self) -> float:
        """L2 norm via the Riemann sum."""
        return float(np.sqrt(self.grid.cell_weight * np.sum(np.abs(self.samples) ** 2)))


def sample(f, grid: TorusGrid) -> TorusSignal:
    """Sample a pointwise function f(theta1, theta2) on the grid."""
    m1, m2 = grid.meshgrid()
    values = np.asarray(f(m1, m2), dtype=complex)
    values = np.broadcast_to(values, (grid.n1, grid.n2)).copy()
    if not np.all(np.isfinite(values)):
        raise ValueError("function returned non-finite values on the grid")
    return TorusSignal(grid, values)


def inner_product(f: TorusSignal, g: TorusSignal) -> complex:
    """Riemann-sum inner product, conjugate-linear in the first slot."""
    if f.grid != g.grid:
        raise ValueError("inner_product requires signals on the same grid")
    return complex(f.grid.cell_weight * np.sum(np.conj(f.samples) * g.samples))


@dataclass(frozen=True)
class FourierTable:
    """Coefficients f_hat^{n1,n2} on the window |n1| <= l1, |n2| <= l2.

    coeffs has shape (2*l1+1, 2*l2+1); row i holds index n1 = i - l1.
    """

    l1: int
    l2: int
    coeffs: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.l1 < 0 or self.l2 < 0:
            raise ValueError("window sizes must be nonnegative")
        shape = (2 * self.l1 + 1, 2 * self.l2 + 1)
        coeffs = self.coeffs
        if coeffs is None:
            coeffs = np.zeros(shape, dtype=complex)
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != shape:
            raise ValueError(f"coeffs shape {coeffs.shape} does not match window {shape}")
        object.__setattr__(self, "coeffs", coeffs)

    def index_arrays(self):
        return np.arange(-self.l1, self.l1 + 1), np.arange(-self.l2, self.l2 + 1)

    def __getitem__(self, key):
        n1, n2 = key
        if abs(n1) > self.l1 or abs(n2) > self.l2:
            raise IndexError(f"index ({n1}, {n2}) outside window ({self.l1}, {self.l2})")
        return self.coeffs[n1 + self.l1, n2 + self.l2]

    def with_entry(self, n1: int, n2: int, value: complex) -> "FourierTable":
        out = self.coeffs.copy()
        out[n1 + self.l1, n2 + self.l2] = value
        return FourierTable(self.l1, self.l2, out)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def fourier_coefficients(f: TorusSignal, l1: int, l2: int) -> FourierTable:
    """Windowed Fourier coefficients of a sampled signal.

    f_hat^{n1,n2} = (2pi/(n1*n2)) * sum_k f(theta_k) exp(-i*(n1*t1 + n2*t2)),
    exact for signals band-limited within the window (requires 2*l < n).
    """
    grid = f.grid
    if 2 * l1 >= grid.n1 or 2 * l2 >= grid.n2:
        raise ValueError(
            f"window ({l1}, {l2}) too large for grid ({grid.n1}, {grid.n2}); need 2*l < n"
        )
    t1, t2 = grid.angles()
    n1_idx = np.arange(-l1, l1 + 1)
    n2_idx = np.arange(-l2, l2 + 1)
    e1 = np.exp(-1j * np.outer(n1_idx, t1))  # (2*l1+1, n1)
    e2 = np.exp(-1j * np.outer(n2_idx, t2))  # (2*l2+1, n2)
    coeffs = TWO_PI / (grid.n1 * grid.n2) * (e1 @ f.samples @ e2.T)
    return FourierTable(l1, l2, coeffs)


def inverse_fourier(table: FourierTable, grid: TorusGrid) -> TorusSignal:
    """Synthesize f(theta) = sum f_hat^{n1,n2} phi_{n1,n2}(theta) on the grid."""
    if 2 * table.l1 >= grid.n1 or 2 * table.l2 >= grid.n2:
        raise ValueError(
            f"window ({table.l1}, {table.l2}) too large for grid ({grid.n1}, {grid.n2})"
        )
    t1, t2 = grid.angles()
    n1_idx, n2_idx = table.index_arrays()
    e1 = np.exp(1j * np.outer(t1, n1_idx))  # (n1, 2*l1+1)
    e2 = np.exp(1j * np.outer(t2, n2_idx))  # (n2, 2*l2+1)
    values = (e1 @ table.coeffs @ e2.T) / TWO_PI
    return TorusSignal(grid, values)


def evaluate_fourier(table: FourierTable, theta1, theta2):
    """Evaluate the trigonometric polynomial of a table at arbitrary angles."""
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    shape = np.broadcast_shapes(theta1.shape, theta2.shape)
    t1 = np.broadcast_to(theta1, shape).ravel()
    t2 = np.broadcast_to(theta2, shape).ravel()
    n1_idx, n2_idx = table.index_arrays()
    e1 = np.exp(1j * np.outer(t1, n1_idx))
    e2 = np.exp(1j * np.outer(n2_idx, t2))
    values = np.einsum("pj,jk,kp->p", e1, table.coeffs, e2) / TWO_PI
    return values.reshape(shape)


@dataclass(frozen=True)
class PanelQuadrature:
    """Composite Gauss-Legendre rule on [-pi, pi] (per axis)."""

    panels: int = 64
    nodes: int = 8

    def __post_init__(self):
        if self.panels < 1 or self.nodes < 1:
            raise ValueError("quadrature needs at least one panel and one node")

    def rule(self, lo: float = -np.pi, hi: float = np.pi):
        """Nodes and weights for the composite rule on [lo, hi]."""
        x, w = np.polynomial.legendre.leggauss(self.nodes)
        edges = np.linspace(lo, hi, self.panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wts = (half[:, None] * w[None, :]).ravel()
        return pts, wts


def continuous_fourier(f, alpha1: float, alpha2: float, quad: PanelQuadrature | None = None) -> complex:
    """(1/2pi) * integral of f(theta) * exp(-i*(alpha1*t1 + alpha2*t2)) over [-pi, pi]^2.

    The indices may be non-integer, so f is treated on the fundamental
    square without periodization.  f must accept array arguments.
    """
    quad = quad or PanelQuadrature()
    pts, wts = quad.rule()
    m1, m2 = np.meshgrid(pts, pts, indexing="ij")
    values = np.asarray(f(m1, m2), dtype=complex)
    values = np.broadcast_to(values, m1.shape)
    phase = np.exp(-1j * (alpha1 * m1 + alpha2 * m2))
    total = np.einsum("i,ij,j->", wts, values * phase, wts)
    if not np.isfinite(total):
        raise ValueError("continuous_fourier quadrature produced a non-finite value")
    return complex(total / TWO_PI)


def random_bandlimited(grid: TorusGrid, l1: int, l2: int, seed: int = 0) -> TorusSignal:
    """Random band-limited signal with iid complex Gaussian coefficients."""
    rng = np.random.default_rng(seed)
    shape = (2 * l1 + 1, 2 * l2 + 1)
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return inverse_fourier(FourierTable(l1, l2, coeffs), grid)
