"""Weierstrass functions for the square lattice with invariants g2 = 4, g3 = 0.

Arguments are reduced to the centred period square and evaluated through
Jacobi theta series with nome q = exp(-pi).  At |Im v| <= pi/2 eight terms
already reach double precision.  The zeta function picks up the
quasi-period constants of the reduction, so it is evaluated at the literal
argument.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import elliprf, gamma

from .errors import NoConvergence, NotOnCubic, PoleAtLattice

G2, G3 = 4.0, 0.0
OMEGA = float(gamma(0.25) ** 2 / (4 * np.sqrt(2 * np.pi)))   # real half-period
OMEGA_I = 1j * OMEGA
U0 = 1j * OMEGA                 # wp(U0) = -1
ETA = np.pi / (4 * OMEGA)       # zeta_w(OMEGA); zeta_w(i OMEGA) = -i ETA

_NOME = np.exp(-np.pi)
_N = 8
_n = np.arange(_N)
_m = np.arange(1, _N)
_A = _NOME ** ((_n + 0.5) ** 2)
_B = _NOME ** (_m ** 2)
_SGN = (-1.0) ** _n
_C = np.pi / (2 * OMEGA)


def _theta(v):
    v = v[..., None]
    odd = (2 * _n + 1) * v
    t1 = 2 * np.sum(_SGN * _A * np.sin(odd), -1)
    t1p = 2 * np.sum(_SGN * _A * (2 * _n + 1) * np.cos(odd), -1)
    t2 = 2 * np.sum(_A * np.cos(odd), -1)
    c2 = np.cos(2 * _m * v)
    t3 = 1 + 2 * np.sum(_B * c2, -1)
    t4 = 1 + 2 * np.sum((-1.0) ** _m * _B * c2, -1)
    return t1, t1p, t2, t3, t4


_, _, _T2, _T3, _T4 = (float(np.real(x)) for x in _theta(np.float64(0.0)))
_K_WP = (_C * _T3 * _T4) ** 2
_K_WPP = -2 * _C ** 3 * (_T2 * _T3 * _T4) ** 2


@dataclass(frozen=True)
class LatticeData:
    omega_r: float
    omega_i: complex
    u0: complex
    eta: float
    g2: float = G2
    g3: float = G3


def half_periods():
    return LatticeData(omega_r=OMEGA, omega_i=OMEGA_I, u0=U0, eta=ETA)


def _counts(u):
    a = np.floor(u.real / (2 * OMEGA) + 0.5)
    b = np.floor(u.imag / (2 * OMEGA) + 0.5)
    return a, b


def reduce(u):
    """Canonical representative in [0, 2w) x [0, 2w) i."""
    u = np.asarray(u, dtype=complex)
    p = 2 * OMEGA
    re = np.mod(u.real, p)
    im = np.mod(u.imag, p)
    re = np.where(re >= p, 0.0, re)
    im = np.where(im >= p, 0.0, im)
    out = re + 1j * im
    return complex(out) if out.ndim == 0 else out


def reduce_centered(u, center=0.0):
    """Representative of u closest to ``center`` (within the square of side 2w)."""
    u = np.asarray(u, dtype=complex)
    d = u - center
    a, b = _counts(d)
    out = center + d - 2 * OMEGA * a - 2j * OMEGA * b
    return complex(out) if out.ndim == 0 else out


def lattice_distance(u):
    u = np.asarray(u, dtype=complex)
    return np.abs(reduce_centered(u))


def _prep(u, pole_guard):
    u = np.asarray(u, dtype=complex)
    a, b = _counts(u)
    uc = u - 2 * OMEGA * a - 2j * OMEGA * b
    if np.any(np.abs(uc) < pole_guard):
        raise PoleAtLattice(f"argument within {pole_guard:g} of a lattice point")
    return u, uc, a, b


def _out(x, u):
    return complex(x) if np.ndim(u) == 0 else x


def wp(u, pole_guard=1e-8):
    u, uc, _, _ = _prep(u, pole_guard)
    t1, _, t2, _, _ = _theta(_C * uc)
    return _out(1 + _K_WP * (t2 / t1) ** 2, u)


def wp_prime(u, pole_guard=1e-8):
    u, uc, _, _ = _prep(u, pole_guard)
    t1, _, t2, t3, t4 = _theta(_C * uc)
    return _out(_K_WPP * t2 * t3 * t4 / t1 ** 3, u)


def wp_second(u, pole_guard=1e-8):
    p = wp(u, pole_guard)
    return 6 * p * p - 2


def zeta_w(u, pole_guard=1e-8):
    u, uc, a, b = _prep(u, pole_guard)
    t1, t1p, _, _, _ = _theta(_C * uc)
    z = ETA * uc / OMEGA + _C * t1p / t1 + 2 * a * ETA - 2j * b * ETA
    return _out(z, u)


def wp_all(u, pole_guard=1e-8):
    """(wp, wp', zeta_w) from one theta evaluation."""
    u, uc, a, b = _prep(u, pole_guard)
    t1, t1p, t2, t3, t4 = _theta(_C * uc)
    p = 1 + _K_WP * (t2 / t1) ** 2
    pp = _K_WPP * t2 * t3 * t4 / t1 ** 3
    z = ETA * uc / OMEGA + _C * t1p / t1 + 2 * a * ETA - 2j * b * ETA
    return _out(p, u), _out(pp, u), _out(z, u)


def cubic_residual(x, y_half):
    x = complex(x)
    return abs(complex(y_half) ** 2 - x ** 3 + x) / max(1.0, abs(x)) ** 3


def _seeds(x):
    # Carlson's R_F gives the incomplete Abel integral for most x; each
    # alternative covers a region where all but one argument is negative.
    w2 = OMEGA + OMEGA_I
    out = [OMEGA, OMEGA_I, w2]
    with np.errstate(all="ignore"):
        cands = [elliprf(x - 1, x, x + 1), 1j * elliprf(-x - 1, -x, -x + 1)]
        if x != 0:
            xi = -1 / x
            cands += [elliprf(xi - 1, xi, xi + 1) + w2, 1j * elliprf(-xi - 1, -xi, -xi + 1) + w2]
    out = [complex(c) for c in cands if np.isfinite(c)] + out
    return out


def _polish(u, x, y, steps=8):
    for _ in range(steps):
        try:
            p, pp = wp(u, 0.0), wp_prime(u, 0.0)
        except (ZeroDivisionError, FloatingPointError):
            return u
        if not (np.isfinite(p) and np.isfinite(pp)):
            return u
        if abs(pp / 2 - y) > abs(pp / 2 + y):
            u, pp = -u, -pp
        p2 = 6 * p * p - 2
        if abs(pp) >= abs(p2):
            du = (p - x) / pp
        else:
            du = (pp / 2 - y) / (p2 / 2)
        u = u - du
        if abs(du) < 1e-16 * max(1.0, abs(u)):
            break
    return u


def invert_wp(x, y_half, tol_ell=1e-10, tol_curve=1e-12):
    """Torus coordinate u, reduced to [0, 2w)^2, with wp(u) = x and wp'(u)/2 = y_half."""
    x, y = complex(x), complex(y_half)
    if not (np.isfinite(x) and np.isfinite(y)):
        raise NotOnCubic("non-finite cubic point")
    if cubic_residual(x, y) > tol_curve:
        raise NotOnCubic(f"cubic residual {cubic_residual(x, y):.3e} exceeds {tol_curve:g}")
    scale = max(1.0, abs(x))
    best, best_err = None, np.inf
    for s in _seeds(x):
        u = _polish(s, x, y)
        with np.errstate(all="ignore"):
            try:
                p, pp = wp(u, 0.0), wp_prime(u, 0.0)
            except ZeroDivisionError:
                continue
        err = abs(p - x) / scale + abs(pp / 2 - y) / scale ** 1.5
        if np.isfinite(err) and err < best_err:
            best, best_err = u, err
        if best_err < 1e-14:
            break
    if best is None or best_err > tol_ell:
        raise NoConvergence(f"inversion residual {best_err:.3e}")
    return reduce(best)
