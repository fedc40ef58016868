"""The lemniscatic Snell surface Y^2 = 2(t^4 + 1) and its maps to the torus.

Two sheets matter.  The physical one carries Y = -sqrt2 sqrt(1 + t^4) on
|t| < 1 and lifts to a square of side w centred on U0.  Its image under
tau(t, Y) = (it, -Y) carries Y = +sqrt2 sqrt(1 + t^4) and lifts to the
square centred on OMEGA.  Lifts are returned as the representative nearest
the centre of their sheet, so that non-elliptic sums over forcing poles are
evaluated on a fixed branch.
"""
from dataclasses import dataclass

import numpy as np

from . import elliptic as ell
from .config import THETA_W, Tolerances
from .errors import BranchPoint, DivisionNearZero, UniformizationPole, UnitModulusRoot
from .numerics import gauss_legendre

SQRT2 = np.sqrt(2.0)
PHYSICAL = "physical-plus"
OTHER = "other"
_TOL = Tolerances()


@dataclass(frozen=True)
class CurvePoint:
    t: complex
    Y: complex
    component: str = OTHER

    @property
    def residual(self):
        return abs(self.Y ** 2 - 2 * (self.t ** 4 + 1))


def _root(t):
    return np.sqrt(1 + complex(t) ** 4)


def on_physical_branch(t, Y):
    """True when Y sits on -sqrt2 sqrt(1 + t^4) (principal root), the sheet through (0, -sqrt2)."""
    r = SQRT2 * _root(t)
    return abs(Y + r) <= abs(Y - r)


def classify(t, Y):
    return PHYSICAL if abs(t) < 1 and on_physical_branch(t, Y) else OTHER


def make_point(t, Y):
    t, Y = complex(t), complex(Y)
    return CurvePoint(t, Y, classify(t, Y))


def _continue_physical(t, steps=256):
    # follow -sqrt2 sqrt(1 + s^4) along the segment [0, t], choosing at each
    # step the square root nearest the previous value
    y = -SQRT2 + 0j
    for s in np.linspace(0, 1, steps + 1)[1:] * t:
        r = SQRT2 * np.sqrt(1 + s ** 4)
        y = r if abs(r - y) < abs(-r - y) else -r
    return complex(y)


def curve_lift(t, branch="physical"):
    """Point over t.  ``branch`` is "physical", +1 or -1 (sign of the principal root)."""
    t = complex(t)
    w = 1 + t ** 4
    if abs(w) < 1e-15:
        return CurvePoint(t, 0j, OTHER)
    if branch == "physical":
        Y = -SQRT2 * np.sqrt(w) if abs(t) <= 1 else _continue_physical(t)
    elif branch in (1, -1, "+", "-"):
        sgn = 1 if branch in (1, "+") else -1
        Y = sgn * SQRT2 * np.sqrt(w)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return make_point(t, Y)


def snell_s(p, pole_guard=_TOL.pole_guard):
    t, Y = p.t, p.Y
    den = t * t + 1 - Y / SQRT2
    if p.component == PHYSICAL or abs(den) > abs(SQRT2 * (t * t + 1) + Y):
        # rationalized form: no 0/0 at t = 0 on the physical sheet
        if abs(den) < pole_guard:
            raise DivisionNearZero("Snell exponential denominator vanishes")
        return SQRT2 * t / den
    if abs(t) < pole_guard:
        raise DivisionNearZero("Snell exponential at t = 0 off the physical sheet")
    return (SQRT2 * (t * t + 1) + Y) / (2 * t)


def snell_s_raw(p):
    return (SQRT2 * (p.t ** 2 + 1) + p.Y) / (2 * p.t)


def g_prime(p, pole_guard=_TOL.pole_guard):
    if abs(p.Y) < pole_guard:
        raise BranchPoint("Snell derivative at a branch point (Y = 0)")
    return SQRT2 * (p.t ** 2 - 1) / p.Y


def tau(p):
    return make_point(1j * p.t, -p.Y)


def _basepoint_ratio(t, Y):
    # D / t^2 with D = Y + sqrt2, written as 2 t^2 / (Y - sqrt2) near Y = -sqrt2
    return 2 * t * t / (Y - SQRT2)


def uniformize(p, pole_guard=_TOL.pole_guard):
    """Weierstrass cubic point (x, y_half) with y_half^2 = x^3 - x."""
    t, Y = p.t, p.Y
    if abs(Y - SQRT2) > abs(Y + SQRT2):
        k = _basepoint_ratio(t, Y)
        den = k - SQRT2
        if abs(den) < pole_guard:
            raise UniformizationPole("uniformization denominator vanishes")
        x = (k + SQRT2) / den
        y = -8 * t / ((Y - SQRT2) * den ** 2)
    else:
        D = Y + SQRT2
        den = D - SQRT2 * t * t
        if abs(den) < pole_guard:
            raise UniformizationPole("uniformization denominator vanishes")
        x = (D + SQRT2 * t * t) / den
        y = -4 * t * D / den ** 2
    return complex(x), complex(y)


def sheet_center(p):
    return ell.U0 if (abs(p.t) <= 1 and on_physical_branch(p.t, p.Y)) else ell.OMEGA


def abel_offset(t, nodes=40):
    """u - U0 for the physical point over t: the integral of ds / sqrt(2(1 + s^4)) from 0 to t."""
    x, w = gauss_legendre(nodes)
    t = complex(t)
    s = t * (x + 1) / 2
    return complex(np.sum(w / np.sqrt(2 * (1 + s ** 4))) * t / 2)


def lift_u(p, tol=_TOL, center=None):
    """Torus coordinate of p, as the representative nearest its sheet centre."""
    if center is None:
        center = sheet_center(p)
    if abs(p.t) < 0.5:
        # near either sheet centre wp' vanishes and inversion loses digits;
        # the Abel integral (du/dt = -1/Y) is exact to rounding there
        phys = on_physical_branch(p.t, p.Y)
        if phys and center == ell.U0:
            return ell.U0 + abel_offset(p.t)
        if not phys and center == ell.OMEGA:
            return ell.OMEGA - abel_offset(p.t)
    x, y = uniformize(p, tol.pole_guard)
    u = ell.invert_wp(x, y, tol.tol_ell, tol.tol_curve)
    return ell.reduce_centered(u, center)


def _physical_point_at(d):
    # physical curve point at u = U0 + d, d centred; cancellation-free
    # through the shifted functions P = wp(d), P' = wp'(d)
    if abs(d) < 1e-4:
        d4 = d ** 4
        return SQRT2 * d * (1 + 0.4 * d4), -SQRT2 * (1 + 2 * d4)
    P, Pp = ell.wp(d, 0.0), ell.wp_prime(d, 0.0)
    if abs(Pp) < 1e-300:
        raise DivisionNearZero("t(u) is infinite at this half-period")
    return -2 * SQRT2 * P / Pp, -SQRT2 * (1 + 8 * P / Pp ** 2)


def point_of_u(u):
    """Curve point over the torus coordinate u (inverse uniformization).

    t = -2 sqrt2 P / P' and Y = -sqrt2 (1 + 8 P / P'^2) with P = wp(u - U0).
    Near OMEGA the same formula is used through tau, which acts on the
    torus as u - OMEGA -> i (u - OMEGA) + U0 - OMEGA.
    """
    u = complex(u)
    d0 = ell.reduce_centered(u - ell.U0)
    d1 = ell.reduce_centered(u - ell.OMEGA)
    if abs(d0) <= abs(d1):
        t, Y = _physical_point_at(d0)
        return make_point(t, Y)
    t, Y = _physical_point_at(1j * d1)
    return make_point(1j * t, -Y)


def t_of_u(u):
    return point_of_u(u).t


def s_of_zeta(zeta):
    return np.exp(1j * (complex(zeta) - THETA_W))


def quadratic_roots(b):
    """Roots of t^2 - B t + 1 = 0 with B = (b^2 + 1)/(sqrt2 b), as (small, large)."""
    b = complex(b)
    B = (b * b + 1) / (SQRT2 * b)
    d = np.sqrt(B * B - 4 + 0j)
    big = (B + d) / 2 if abs(B + d) >= abs(B - d) else (B - d) / 2
    return 1 / big, big


def point_of_zeta(zeta, tol=_TOL):
    """Curve point with s(t, Y) = exp(i(zeta - pi/4)) and |t| < 1.

    For Im zeta > 0 this is the physical branch; below the real axis the
    same root selection lands on the other sheet.
    """
    b = s_of_zeta(zeta)
    t_in, t_out = quadratic_roots(b)
    if abs(abs(t_in) - 1) < tol.pole_guard:
        raise UnitModulusRoot("both roots on the unit circle; displace zeta off the real axis")
    Y = 2 * b * t_in - SQRT2 * (t_in * t_in + 1)
    return make_point(t_in, Y)


def boundary_point_of_zeta(theta, tol=_TOL):
    """Limit of point_of_zeta(theta + i eta) as eta -> 0+ for real theta.

    Both roots lie on |t| = 1; the one kept is the root that moves inside as
    eta grows, i.e. Im(B' / (2t - B)) > 0 with B = sqrt2 cos(zeta - pi/4).
    """
    theta = float(theta)
    b = s_of_zeta(theta)
    r1, r2 = quadratic_roots(b)
    B = np.sqrt(2) * np.cos(theta - THETA_W)
    dB = -np.sqrt(2) * np.sin(theta - THETA_W)
    g = [np.imag(dB / (2 * r - B)) for r in (r1, r2)]
    if max(g) < tol.pole_guard:
        raise UnitModulusRoot("boundary root selection is degenerate (branch point direction)")
    t = r1 if g[0] >= g[1] else r2
    Y = 2 * b * t - SQRT2 * (t * t + 1)
    return CurvePoint(complex(t), complex(Y), OTHER)


def u_of_zeta(zeta, tol=_TOL):
    return lift_u(point_of_zeta(zeta, tol), tol)
