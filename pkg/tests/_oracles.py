"""Independent numerical oracles shared by unit and acceptance tests."""

import math

import numpy as np
from scipy import integrate

from chronocollapse.kernels import kernel_dp_fourier


def dp_inverse_fourier(model, r):
    """Radial 3-D inverse transform of the DP Fourier kernel at separation r.

    D(r) = 1 / (2 pi^2 r) * int_0^inf k D~(k) sin(k r) dk, evaluated in
    q = k sigma; the Gaussian factor makes q > 12 negligible.
    """
    s = model.sigma
    u = r / s

    def integrand(q):
        return q * kernel_dp_fourier(model, q / s) * math.sin(q * u)

    val, _ = integrate.quad(integrand, 0.0, 12.0, limit=2000, epsabs=0.0, epsrel=1e-12)
    return val / (2.0 * math.pi ** 2 * r * s ** 2)


def gaussian_self_convolution(x, sigma):
    """(g_sigma * g_sigma)(x) for a normalized 3-D Gaussian, x along one axis.

    The 3-D Gaussian factorizes, so this is a product of three 1-D
    convolutions, each done by quadrature in units of sigma.
    """
    g1 = lambda y: math.exp(-y * y / 2) / math.sqrt(2 * math.pi)
    v = x / sigma
    at_zero, _ = integrate.quad(lambda y: g1(y) ** 2, -40.0, 40.0, points=[0.0], epsabs=0.0, epsrel=1e-13)
    along, _ = integrate.quad(
        lambda y: g1(y) * g1(v - y), v / 2 - 40.0, v / 2 + 40.0,
        points=[v / 2], epsabs=0.0, epsrel=1e-13, limit=500,
    )
    return at_zero ** 2 * along / sigma ** 3


def csl_smeared_by_convolution(model, r):
    """g * D_CSL * g with D_CSL = hbar^2 gamma / m0^2 delta."""
    k = model.constants
    return (k.hbar / k.m0) ** 2 * model.gamma * gaussian_self_convolution(r, model.sigma)


def uniform_ball_rejection(rng, n, radius=1.0):
    """Uniform points in a ball by rejection from the enclosing cube."""
    out = []
    have = 0
    while have < n:
        pts = rng.uniform(-radius, radius, size=(2 * (n - have) + 16, 3))
        pts = pts[np.einsum("ij,ij->i", pts, pts) <= radius * radius]
        out.append(pts)
        have += len(pts)
    return np.concatenate(out)[:n]
