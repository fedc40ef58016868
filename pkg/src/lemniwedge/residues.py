"""Per-pole coefficients r_I, alpha, beta, C, d.

The closed-form tables are the production path.  ``coeff_from_modes``
rebuilds alpha, beta and C from the 2x2 mode systems and is used as an
independent check of the tables.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DivisionNearZero, SingularModeMatrix, ZeroOrbitDerivative
from .poles import scattered_poles
from .surface import SQRT2, CurvePoint, g_prime, tau

OMEGA_DFT = 1j


@dataclass(frozen=True)
class ResidueRecord:
    label: object
    r_I: complex
    alpha: complex
    beta: complex
    C: complex
    d: complex
    pole: object = None


@dataclass(frozen=True)
class ModeMatrices:
    k: int
    M_U: np.ndarray
    M_V: np.ndarray
    det_U: complex
    det_V: complex
    M_U_inv: np.ndarray
    M_V_inv: np.ndarray


def phase_symbols(m):
    """(chi_m, psi_m, kappa_m) = (i^m, i^m, i^(m+1))."""
    im = (1j) ** m
    return im, im, (1j) ** (m + 1)


def w_m_prime(m, p, pole_guard=1e-8):
    t = p.t
    if abs(t) < pole_guard:
        raise DivisionNearZero("orbit derivative at t = 0")
    if m % 2 == 0:
        return 1j * SQRT2 * (t - 1 / t)
    return -1j * SQRT2 * (t + 1 / t)


def r_I_of(l, rec, pole_guard=1e-8):
    w = w_m_prime(l.m, rec.point if hasattr(rec, "point") else rec, pole_guard)
    if abs(w) < pole_guard:
        raise ZeroOrbitDerivative(f"orbit derivative vanishes at {l}")
    return l.eps_j / w


def r_I_explicit(l, t):
    if l.m % 2 == 0:
        return -l.eps_j * 1j * t / (SQRT2 * (t * t - 1))
    return l.eps_j * 1j * t / (SQRT2 * (t * t + 1))


def beta_ch(p):
    return 1j * p.Y / SQRT2 * (p.t ** 2 - 1)


def alpha_table(l, rec, r_I=None):
    t, Y = rec.t, rec.Y
    rI = r_I_of(l, rec) if r_I is None else r_I
    chi, psi, kap = phase_symbols(l.m)
    j = l.j
    if l.m % 2 == 0:
        if j == 1:
            return -chi * rI * t ** 2
        if j == 2:
            return -chi * rI * (t ** 4 - t ** 2 + 1)
        if j == 3:
            return 0j
        return -chi * rI * 1j * Y / SQRT2 * (t * t - 1)
    if j == 1:
        return psi * rI * t ** 4
    if j == 2:
        return psi * rI
    if j == 3:
        return kap * rI * Y / SQRT2 * t * t
    return -kap * rI * Y / SQRT2


def beta_table(l, rec, r_I=None):
    t, Y = rec.t, rec.Y
    rI = r_I_of(l, rec) if r_I is None else r_I
    chi, psi, kap = phase_symbols(l.m)
    j = l.j
    if l.m % 2 == 0:
        if j == 1:
            return chi * rI * 1j / SQRT2 * Y * t * t
        if j == 2:
            return chi * rI * 1j / SQRT2 * Y
        if j == 3:
            return -chi * rI * t ** 4
        return -chi * rI
    if j == 1:
        return 0j
    if j == 2:
        return kap * rI / SQRT2 * Y * (t * t + 1)
    if j == 3:
        return psi * rI * t * t
    return -psi * rI * (t ** 4 + t * t + 1)


def C_table(l, rec, r_I=None):
    t, Y = rec.t, rec.Y
    rI = r_I_of(l, rec) if r_I is None else r_I
    chi, psi, kap = phase_symbols(l.m)
    j = l.j
    if l.m % 2 == 0:
        if j == 1:
            return -chi * rI / (2 * t * t)
        if j == 2:
            if l.m == 0:
                return -rI / 2 * (2 * t ** 4 - 2 * t * t + 1) / t ** 4
            return rI / (2 * t ** 4)
        return 0j
    if j in (1, 2):
        return 0j
    if j == 3:
        return rI / 2 * (1 + kap * Y / (SQRT2 * t * t))
    return -rI / (2 * t * t) * (1 + kap * Y / (SQRT2 * t * t))


def d_table(l, rec, r_I=None):
    t, Y = rec.t, rec.Y
    rI = r_I_of(l, rec) if r_I is None else r_I
    chi, psi, kap = phase_symbols(l.m)
    j = l.j
    if l.m % 2 == 0:
        if j == 1:
            return chi * rI / (4 * t * t) * (t ** 6 - t ** 4 + t * t - 2)
        if j == 2:
            return chi * rI / (4 * t ** 4) * (t ** 6 - 2 * t ** 4 + 2 * t * t - 2)
        if j == 3:
            return chi * rI / 4 * 1j * Y / SQRT2 * (t * t - 1)
        return 0j
    if j == 1:
        return psi * rI / 4
    if j == 2:
        return psi * rI / 4 * t ** 4
    if j == 3:
        return kap * rI / 4 * Y / SQRT2 * (2 - t * t) / (t * t)
    return kap * rI / 4 * Y / SQRT2 * (t ** 6 - 2) / t ** 4


def d_from_def(alpha, beta, p):
    """Residue of the singular channel: (alpha - beta_ch beta) / (4 t^4)."""
    return (alpha - beta_ch(p) * beta) / (4 * p.t ** 4)


def mode_halves(p):
    """(A0, B0, A1, B1) from the Snell derivative at p and at tau(p)."""
    g0 = g_prime(p, 0.0)
    g1 = g_prime(tau(p), 0.0)
    return (1 + g0) / 2, (1 - g0) / 2, (1 - g1) / 2, (1 + g1) / 2


def mode_matrices(k, p, pole_guard=1e-8):
    A0, B0, A1, B1 = mode_halves(p)
    w = OMEGA_DFT
    MU = np.array([[-w ** (-k) * A1, A0], [-w ** k * B1, B0]])
    MV = np.array([[-w ** (-k) * B1, B0], [-w ** k * A1, A0]])
    dU = w ** k * A0 * B1 - w ** (-k) * A1 * B0
    dV = w ** k * A1 * B0 - w ** (-k) * A0 * B1
    if abs(dU) < pole_guard:
        raise SingularModeMatrix(f"mode matrix determinant {abs(dU):.2e} at k={k}")
    MUi = np.array([[B0, -A0], [w ** k * B1, -w ** (-k) * A1]]) / dU
    MVi = np.array([[A0, -B0], [w ** k * A1, -w ** (-k) * B1]]) / dV if abs(dV) > 0 else None
    return ModeMatrices(k, MU, MV, complex(dU), complex(dV), MUi, MVi)


def forcing_residue_vector(k, l, p, r_I=None):
    A0, B0, A1, B1 = mode_halves(p)
    Am, Bm = (A0, B0) if l.m % 2 == 0 else (A1, B1)
    w = OMEGA_DFT
    v = {1: (w ** (-k) * Am, w ** k * Bm),
         2: (w ** (-k) * Bm, w ** k * Am),
         3: (-Am, -Bm),
         4: (-Bm, -Am)}[l.j]
    rI = r_I_of(l, p) if r_I is None else r_I
    return w ** (-k * l.m) * rI * np.array(v, dtype=complex)


def coeff_from_modes(l, rec, pole_guard=1e-8, solver="explicit"):
    """(alpha, beta, C) from the mode residue vectors g_k = M_U,k^-1 Res H_k."""
    p = rec.point if hasattr(rec, "point") else rec
    rI = r_I_of(l, p)
    g = []
    for k in range(4):
        mm = mode_matrices(k, p, pole_guard)
        rhs = forcing_residue_vector(k, l, p, rI)
        g.append(np.linalg.solve(mm.M_U, rhs) if solver == "solve" else mm.M_U_inv @ rhs)
    t4 = p.t ** 4
    alpha = t4 * g[1][0]
    beta = t4 * g[3][1]
    C = sum(gk[0] for gk in g) / 4
    return complex(alpha), complex(beta), complex(C)


def residue_record(l, rec, path="table"):
    rI = r_I_of(l, rec)
    if path == "table":
        a, b, c = alpha_table(l, rec, rI), beta_table(l, rec, rI), C_table(l, rec, rI)
        d = d_table(l, rec, rI)
    elif path == "modes":
        a, b, c = coeff_from_modes(l, rec)
        d = d_from_def(a, b, rec.point)
    else:
        raise ValueError(f"unknown path {path!r}")
    return ResidueRecord(l, complex(rI), complex(a), complex(b), complex(c), complex(d), rec)


def residue_records(cfg, path="table"):
    return tuple(residue_record(r.label, r, path) for r in scattered_poles(cfg))
