"""Gaussian quadrature helpers.

Gauss-Hermite for expectations of g(N(0, v)) and tensor Gauss-Legendre for
integrals over rectangles [0, t1] x [0, t2]. Node counts follow the package
defaults (64 Hermite, 128 x 128 Legendre); both rules are validated against
closed forms in the test suite.
"""

from __future__ import annotations

import numpy as np

GH_NODES = 64
GL_NODES = 128


def gauss_hermite_mean(g, v: float, nodes: int = GH_NODES) -> float:
    """E[g(X)] for X ~ N(0, v), by Gauss-Hermite quadrature.

    Change of variables x = sqrt(2 v) u against the weight e^{-u^2}.
    """
    if v < 0.0:
        raise ValueError("variance must be non-negative")
    u, w = np.polynomial.hermite.hermgauss(nodes)
    x = np.sqrt(2.0 * v) * u
    return float(np.sum(w * g(x)) / np.sqrt(np.pi))


def gauss_legendre_2d(g, t1: float, t2: float, nodes: int = GL_NODES) -> float:
    """Integral of g(u, v) over [0, t1] x [0, t2] by tensor Gauss-Legendre."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * t1 * (x + 1.0)
    v = 0.5 * t2 * (x + 1.0)
    vals = g(u[:, None], v[None, :])
    return float(0.25 * t1 * t2 * w @ vals @ w)
