"""Independent numerical oracles used only by the test suite.

These deliberately avoid the package's solver paths: the Burgers reference
comes from quadrature of the exact log-transform solution, and functional
references come from refined-grid physical-space quadrature.
"""

import numpy as np

from exflow import spectral as sp

TWO_PI = 2.0 * np.pi


def cole_hopf_solution(u0: sp.SpectralField, nu: float, T: float,
                       x: np.ndarray, n_quad: int = 16384,
                       images: int = 2) -> np.ndarray:
    """Evaluate the exact viscous Burgers solution at time T on points x.

    Uses the heat-kernel integral of the log-transformed equation with a
    softmax-stabilized trapezoid rule; exact up to quadrature error for
    zero-mean periodic initial data.
    """
    grid = u0.grid
    # antiderivative of u0 (periodic since u0 has zero mean)
    psi_coeffs = np.zeros(n_quad // 2 + 1, dtype=complex)
    k = np.arange(grid.n // 2 + 1)
    src = np.zeros_like(u0.coeffs)
    src[1:] = u0.coeffs[1:] / (TWO_PI * 1j * k[1:])
    psi_coeffs[: grid.n // 2 + 1] = src
    psi0 = np.fft.irfft(psi_coeffs * n_quad, n_quad)
    y = np.arange(n_quad) / n_quad

    out = np.empty_like(x)
    chunk = max(1, 2**22 // n_quad)
    ms = np.arange(-images, images + 1)
    for lo in range(0, len(x), chunk):
        xs = x[lo: lo + chunk][:, None]
        num = np.zeros(xs.shape[0])
        den = np.zeros(xs.shape[0])
        bmax = np.full(xs.shape[0], -np.inf)
        # first pass: find the max exponent for stabilization
        exps = []
        for m in ms:
            z = xs - y[None, :] + m
            a = -(z * z / (2 * T) + psi0[None, :]) / (2 * nu)
            exps.append((z, a))
            bmax = np.maximum(bmax, a.max(axis=1))
        for z, a in exps:
            w = np.exp(a - bmax[:, None])
            den += w.sum(axis=1)
            num += (w * (z / T)).sum(axis=1)
        out[lo: lo + chunk] = num / den
    return out


def quadrature_integral(f: sp.SpectralField, power: int,
                        refine: int = 4) -> float:
    """integral of f(x)^power via refined-grid trapezoid quadrature."""
    fine = sp.upsample(f, f.grid.refined(refine))
    vals = sp.to_physical(fine) ** power
    return float(np.mean(vals))
