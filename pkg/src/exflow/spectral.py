"""Periodic Fourier fields on [0,1) and [0,1)^2.

A field is represented by its half-complex spectrum (``rfft`` layout along
the last axis) normalized so that u(x) = sum_k uhat_k exp(2*pi*i k.x); the
conjugate modes are implied by reality.  All nonlinear products go through
physical space and are cut by the 2/3 rule, so retained coefficients of a
product of band-limited fields are exact convolutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.fft as _fft

from .errors import GridMismatchError, SizeMismatchError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: `n` points per direction on the unit domain."""

    dim: int
    n: int
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        kmax = self.kmax
        if not 1 <= kmax < self.n // 2:
            raise ValueError(
                f"dealias cutoff {kmax} out of range [1, {self.n // 2}) for n={self.n}"
            )

    @property
    def kmax(self) -> int:
        """Largest retained wavenumber under the dealias rule."""
        return int(self.dealias_fraction * (self.n // 2))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def spectral_shape(self) -> tuple[int, ...]:
        return (self.n,) * (self.dim - 1) + (self.n // 2 + 1,)

    def refined(self, factor: int = 2) -> "GridSpec":
        return replace(self, n=self.n * factor)

    def x(self, axis: int = 0) -> np.ndarray:
        """Grid coordinates along `axis`, shaped for broadcasting."""
        pts = np.arange(self.n) / self.n
        if self.dim == 1:
            return pts
        return pts[:, None] if axis == 0 else pts[None, :]


@lru_cache(maxsize=64)
def _wavenumbers(grid: GridSpec) -> tuple[np.ndarray, ...]:
    """Integer wavenumbers per axis, shaped to broadcast over the spectrum."""
    half = np.arange(grid.n // 2 + 1, dtype=np.float64)
    if grid.dim == 1:
        return (half,)
    full = np.fft.fftfreq(grid.n, d=1.0 / grid.n).astype(np.float64)
    return (full[:, None], half[None, :])


@lru_cache(maxsize=64)
def _ksq(grid: GridSpec) -> np.ndarray:
    ks = _wavenumbers(grid)
    out = sum(k * k for k in ks)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=64)
def _dealias_mask(grid: GridSpec) -> np.ndarray:
    kmax = grid.kmax
    mask = np.ones(grid.spectral_shape, dtype=bool)
    for k in _wavenumbers(grid):
        mask &= np.abs(k) <= kmax
    mask.flags.writeable = False
    return mask


@lru_cache(maxsize=64)
def _pair_weights(grid: GridSpec) -> np.ndarray:
    """Multiplicity of each stored mode in full-spectrum sums.

    The half axis stores k >= 0 only; interior columns stand for a
    conjugate pair, the k=0 and Nyquist columns for themselves.
    """
    w_half = np.full(grid.n // 2 + 1, 2.0)
    w_half[0] = 1.0
    w_half[-1] = 1.0
    if grid.dim == 1:
        w = w_half
    else:
        w = np.broadcast_to(w_half[None, :], grid.spectral_shape).copy()
    w.flags.writeable = False
    return w


@lru_cache(maxsize=64)
def _deriv_symbol(grid: GridSpec, order: int, direction: int) -> np.ndarray:
    k = _wavenumbers(grid)[direction].copy()
    if order % 2:
        # odd derivatives have no consistent real image for the Nyquist mode
        if direction == grid.dim - 1:
            k[..., -1] = 0.0
        else:
            k[grid.n // 2, ...] = 0.0
    sym = (TWO_PI * 1j * k) ** order
    sym.flags.writeable = False
    return sym


@dataclass(frozen=True)
class PhysicsParams:
    """Viscosity and fractional dissipation exponent (unit domain, L = 1)."""

    nu: float
    alpha: float = 1.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not 0.25 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [1/4, 1], got {self.alpha}")


@dataclass(frozen=True)
class SpectralField:
    """Immutable real periodic scalar field held as Fourier coefficients."""

    grid: GridSpec
    coeffs: np.ndarray
    zero_mean: bool = True

    def __post_init__(self):
        if self.coeffs.shape != self.grid.spectral_shape:
            raise SizeMismatchError(
                f"coefficient shape {self.coeffs.shape} does not match "
                f"grid {self.grid.spectral_shape}"
            )
        if self.coeffs.flags.writeable:
            self.coeffs.flags.writeable = False

    @property
    def physical(self) -> np.ndarray:
        return to_physical(self)

    def coefficient(self, k) -> complex:
        """Coefficient at integer wavenumber `k`; negative k via conjugacy."""
        if self.grid.dim == 1:
            kk = int(k)
            if abs(kk) > self.grid.n // 2:
                return 0.0 + 0.0j
            c = self.coeffs[abs(kk)]
            return complex(c) if kk >= 0 else complex(np.conj(c))
        k1, k2 = (int(v) for v in k)
        if k2 < 0:
            k1, k2 = -k1, -k2
            conj = True
        else:
            conj = False
        c = self.coeffs[k1 % self.grid.n, k2]
        return complex(np.conj(c)) if conj else complex(c)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs,
                             self.zero_mean and other.zero_mean)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs,
                             self.zero_mean and other.zero_mean)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar, self.zero_mean)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return self * -1.0


def _check_same_grid(f: SpectralField, g: SpectralField) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")


def to_spectral(samples: np.ndarray, grid: GridSpec, *,
                zero_mean: bool = False) -> SpectralField:
    """Transform physical samples to a coefficient field."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape != grid.shape:
        raise SizeMismatchError(
            f"sample shape {samples.shape} does not match grid {grid.shape}"
        )
    if grid.dim == 1:
        coeffs = _fft.rfft(samples) / grid.n
    else:
        coeffs = _fft.rfft2(samples) / grid.n**2
    if zero_mean:
        coeffs[(0,) * grid.dim] = 0.0
    return SpectralField(grid, coeffs, zero_mean=zero_mean)


def to_physical(f: SpectralField) -> np.ndarray:
    """Evaluate the field on its grid."""
    n = f.grid.n
    if f.grid.dim == 1:
        return _fft.irfft(f.coeffs * n, n)
    return _fft.irfft2(f.coeffs * n**2, f.grid.shape)


def from_callable(fn, grid: GridSpec, *, zero_mean: bool = False) -> SpectralField:
    """Sample fn(x) (1D) or fn(x, y) (2D) on the grid and transform."""
    if grid.dim == 1:
        vals = fn(grid.x())
    else:
        vals = fn(grid.x(0), grid.x(1))
    return to_spectral(np.broadcast_to(vals, grid.shape).copy(), grid,
                       zero_mean=zero_mean)


def zeros(grid: GridSpec) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.spectral_shape, dtype=complex))


def dealias(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, f.coeffs * _dealias_mask(f.grid), f.zero_mean)


def remove_mean(f: SpectralField) -> SpectralField:
    if f.zero_mean:
        return f
    coeffs = f.coeffs.copy()
    coeffs[(0,) * f.grid.dim] = 0.0
    return SpectralField(f.grid, coeffs, zero_mean=True)


def derivative(f: SpectralField, order: int, direction: int = 0) -> SpectralField:
    """Spectral derivative of the given order along `direction`."""
    if order < 1:
        raise ValueError(f"order must be a positive integer, got {order}")
    if not 0 <= direction < f.grid.dim:
        raise ValueError(f"direction {direction} invalid for dim {f.grid.dim}")
    sym = _deriv_symbol(f.grid, order, direction)
    return SpectralField(f.grid, sym * f.coeffs, zero_mean=True)


def laplacian(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, -(TWO_PI**2) * _ksq(f.grid) * f.coeffs,
                         zero_mean=True)


def fractional_laplacian(f: SpectralField, alpha: float) -> SpectralField:
    """Apply (-Laplacian)^alpha, i.e. multiply mode k by (2*pi*|k|)^(2*alpha)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 0.0:
        return f
    sym = (TWO_PI**2 * _ksq(f.grid)) ** alpha
    return SpectralField(f.grid, sym * f.coeffs, zero_mean=f.zero_mean)


def pointwise_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Dealiased product computed in physical space."""
    _check_same_grid(f, g)
    prod = to_physical(f) * to_physical(g)
    scale = f.grid.n ** f.grid.dim
    if f.grid.dim == 1:
        coeffs = _fft.rfft(prod) / scale
    else:
        coeffs = _fft.rfft2(prod) / scale
    coeffs *= _dealias_mask(f.grid)
    return SpectralField(f.grid, coeffs, zero_mean=False)


def translate(f: SpectralField, shift) -> SpectralField:
    """Shifted field u(x + s) for a shift s (scalar in 1D, pair in 2D)."""
    shifts = np.atleast_1d(np.asarray(shift, dtype=float))
    if shifts.size != f.grid.dim:
        raise ValueError(f"expected {f.grid.dim} shift components, got {shifts.size}")
    phase = np.ones(f.grid.spectral_shape, dtype=complex)
    for axis, s in enumerate(shifts):
        phase = phase * np.exp(TWO_PI * 1j * s * _wavenumbers(f.grid)[axis])
    return SpectralField(f.grid, phase * f.coeffs, f.zero_mean)


# ---------------------------------------------------------------------------
# quadratic functionals
# ---------------------------------------------------------------------------

def _weighted_sum(f: SpectralField, mu_power: int) -> float:
    """sum over all modes of (2*pi*|k|)^(2*mu_power) |uhat_k|^2."""
    w = _pair_weights(f.grid)
    mag = (f.coeffs.real**2 + f.coeffs.imag**2)
    if mu_power == 0:
        return float(np.sum(w * mag))
    sym = (TWO_PI**2 * _ksq(f.grid)) ** mu_power
    return float(np.sum(w * sym * mag))


def energy(f: SpectralField) -> float:
    """(1/2) integral of u^2."""
    return 0.5 * _weighted_sum(f, 0)


def enstrophy_1d(f: SpectralField) -> float:
    """(1/2) integral of (du/dx)^2."""
    return 0.5 * _weighted_sum(f, 1)


def kinetic_energy_2d(psi: SpectralField) -> float:
    """(1/2) integral of |grad psi|^2 for a streamfunction psi."""
    return 0.5 * _weighted_sum(psi, 1)


def palinstrophy_2d(psi: SpectralField) -> float:
    """(1/2) integral of |grad Laplacian(psi)|^2."""
    return 0.5 * _weighted_sum(psi, 3)


@dataclass(frozen=True)
class SobolevSpec:
    """Inner-product weight: L2, H1 with scale ell1, or H2 with (ell1, ell2)."""

    space: str = "l2"
    ell1: float = 0.05
    ell2: float = 0.05

    def __post_init__(self):
        if self.space not in ("l2", "h1", "h2"):
            raise ValueError(f"space must be 'l2', 'h1' or 'h2', got {self.space!r}")
        if self.space != "l2" and not (0.0 < self.ell1 < math.inf):
            raise ValueError(f"ell1 must be positive and finite, got {self.ell1}")
        if self.space == "h2" and not (0.0 < self.ell2 < math.inf):
            raise ValueError(f"ell2 must be positive and finite, got {self.ell2}")

    def weight(self, grid: GridSpec) -> np.ndarray:
        lam = TWO_PI**2 * _ksq(grid)
        if self.space == "l2":
            return np.ones(grid.spectral_shape)
        if self.space == "h1":
            return 1.0 + self.ell1**2 * lam
        return 1.0 + self.ell1**2 * lam + self.ell2**4 * lam**2


L2 = SobolevSpec("l2")


def inner_product(f: SpectralField, g: SpectralField,
                  space: SobolevSpec = L2) -> float:
    """Weighted coefficient inner product; L2 by default."""
    _check_same_grid(f, g)
    w = _pair_weights(f.grid)
    prod = (f.coeffs.real * g.coeffs.real + f.coeffs.imag * g.coeffs.imag)
    if space.space == "l2":
        return float(np.sum(w * prod))
    return float(np.sum(w * space.weight(f.grid) * prod))


def norm(f: SpectralField, space: SobolevSpec = L2) -> float:
    return math.sqrt(max(inner_product(f, f, space), 0.0))


# ---------------------------------------------------------------------------
# resolution diagnostics
# ---------------------------------------------------------------------------

def spectrum_tail_fraction(f: SpectralField, mu_power: int = 1) -> float:
    """Fraction of the weighted spectrum carried by the top octave of
    retained modes (max-norm shells kmax/2 < |k| <= kmax)."""
    grid = f.grid
    w = _pair_weights(grid)
    sym = (TWO_PI**2 * _ksq(grid)) ** mu_power
    dens = w * sym * (f.coeffs.real**2 + f.coeffs.imag**2)
    kinf = np.zeros(grid.spectral_shape)
    for k in _wavenumbers(grid):
        kinf = np.maximum(kinf, np.abs(k))
    retained = kinf <= grid.kmax
    total = float(np.sum(dens[retained]))
    if total <= 0.0:
        return 0.0
    top = retained & (kinf > grid.kmax / 2)
    return float(np.sum(dens[top])) / total


def enstrophy_tail_fraction(f: SpectralField) -> float:
    return spectrum_tail_fraction(f, mu_power=1)


def palinstrophy_tail_fraction(psi: SpectralField) -> float:
    return spectrum_tail_fraction(psi, mu_power=3)


def resolution_adequate(f: SpectralField, threshold: float = 1e-10,
                        mu_power: int = 1) -> bool:
    return spectrum_tail_fraction(f, mu_power) < threshold


def upsample(f: SpectralField, grid: GridSpec) -> SpectralField:
    """Spectral interpolation onto a finer grid (zero padding)."""
    if grid.dim != f.grid.dim or grid.n < f.grid.n:
        raise ValueError("target grid must be a refinement of the source grid")
    if grid.n == f.grid.n:
        return f
    src = f.grid.n
    coeffs = np.zeros(grid.spectral_shape, dtype=complex)
    if grid.dim == 1:
        coeffs[: src // 2 + 1] = f.coeffs
        coeffs[src // 2] = 0.0
    else:
        h = src // 2
        coeffs[:h, : h + 1] = f.coeffs[:h, :]
        coeffs[grid.n - h:, : h + 1] = f.coeffs[h:, :]
        coeffs[:, h] = 0.0
        coeffs[grid.n - h, :] = 0.0
        coeffs[h, :] = 0.0
    return dealias(SpectralField(grid, coeffs, f.zero_mean))


def random_band_limited(grid: GridSpec, rng: np.random.Generator,
                        k_lo: int = 1, k_hi: int | None = None,
                        zero_mean: bool = True) -> SpectralField:
    """Unit-amplitude random field supported on wavenumbers in [k_lo, k_hi]."""
    f = to_spectral(rng.standard_normal(grid.shape), grid, zero_mean=zero_mean)
    if k_hi is None:
        k_hi = max(k_lo, grid.kmax // 2)
    kinf = np.zeros(grid.spectral_shape)
    for k in _wavenumbers(grid):
        kinf = np.maximum(kinf, np.abs(k))
    band = (kinf >= k_lo) & (kinf <= k_hi)
    coeffs = np.where(band, f.coeffs, 0.0)
    if zero_mean:
        coeffs[(0,) * grid.dim] = 0.0
    out = SpectralField(grid, coeffs, zero_mean=zero_mean)
    peak = float(np.max(np.abs(to_physical(out)))) or 1.0
    return out * (1.0 / peak)
