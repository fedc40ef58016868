"""Small numerical helpers: extrapolation, circle sampling, quadrature nodes."""
from functools import lru_cache

import numpy as np


def neville(xs, ys, x0=0.0):
    """Polynomial extrapolation of (xs, ys) to x0.

    Returns (value, err) where err is the change contributed by the last
    interpolation order, the usual Richardson error estimate.
    """
    xs = np.asarray(xs, dtype=float)
    p = [complex(y) for y in ys]
    n = len(p)
    prev = p[-1]
    for k in range(1, n):
        for i in range(n - k):
            p[i] = ((x0 - xs[i + k]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + k])
        if k == n - 2:
            prev = p[1]
    if n == 1:
        return p[0], float("inf")
    return p[0], abs(p[0] - prev)


def circle(center, radius, n=64):
    phi = 2 * np.pi * np.arange(n) / n
    return center + radius * np.exp(1j * phi)


def circle_mean(f, center, radius, n=64):
    """Mean of (z - center) f(z) over a circle: the residue of f at center
    when it is the only singularity inside."""
    z = circle(center, radius, n)
    vals = np.array([f(zz) for zz in z])
    return complex(np.mean((z - center) * vals))


@lru_cache(maxsize=8)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def loglog_slope(x, y):
    return float(np.polyfit(np.log(np.abs(x)), np.log(np.abs(y)), 1)[0])
