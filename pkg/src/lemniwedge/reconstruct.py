"""Singular channel, remainder and the canonical scattered density Q_scat.

Q_scat(u) = sum_l C_l [zeta_w(u - u_l) - zeta_w(U0 - u_l)] + R(u) - R(U0)

where R = P13 - sum_l d_l [zeta_w(u - u_l) - zeta_w(U0 - u_l)] and
P13 = (A + p)/(4t^4) - beta_ch (B + q)/(4t^4).  The zeta differences vanish
at U0 but P13 does not, so the constant R(U0) is subtracted to put the
density in the gauge Q_scat(U0) = 0 (``gauge=False`` keeps the raw sum).

A, B and Q are not elliptic: the weights do not sum to zero, so every
evaluation uses the literal torus coordinate.  Physical-sheet points live in
the square of side w around U0.
"""
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import elliptic as ell
from .errors import EvaluationAtPole, IncidentPole
from .jet import jet_coeffs, shift_data
from .poles import incident_pole
from .residues import residue_records
from .surface import (SQRT2, abel_offset, boundary_point_of_zeta, curve_lift, g_prime,
                      lift_u, point_of_u, snell_s, u_of_zeta)
from .config import THETA_W

# Cauchy circle in the t-disk used near the basepoint, where (A + p)/t^4
# cancels catastrophically; forcing poles sit near |t| = 1
_CAUCHY_RADIUS = 0.5
_CAUCHY_NODES = 64
_NEAR_BASE = 0.2


@dataclass(frozen=True)
class SpectralSolution:
    cfg: object
    records: tuple
    shifts: tuple
    jets: object
    lattice: object
    ul: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    C: np.ndarray
    d: np.ndarray
    R0: complex = 0j
    gauge: bool = True
    path: str = "table"

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


def _arrays(records):
    return (np.array([r.pole.u for r in records]), np.array([r.alpha for r in records]),
            np.array([r.beta for r in records]), np.array([r.C for r in records]),
            np.array([r.d for r in records]))


def assemble(cfg, path="table", gauge=True, records=None):
    if records is None:
        records = residue_records(cfg, path)
    shifts = tuple(shift_data(r.label, r.pole, cfg.tol.pole_guard) for r in records)
    jets = jet_coeffs(records, shifts)
    ul, a, b, c, d = _arrays(records)
    sol = SpectralSolution(cfg, tuple(records), shifts, jets, ell.half_periods(),
                           ul, a, b, c, d, 0j, gauge, path)
    if gauge:
        sol = replace(sol, R0=R_remainder(ell.U0, replace(sol, gauge=False)))
    return sol


@lru_cache(maxsize=64)
def solution(cfg, path="table", gauge=True):
    return assemble(cfg, path, gauge)


def shifted_representatives(sol, lattice_shifts):
    """Same solution with each u_l moved by the given lattice vectors."""
    recs = tuple(replace(r, pole=replace(r.pole, u=r.pole.u + s))
                 for r, s in zip(sol.records, lattice_shifts))
    return assemble(sol.cfg, sol.path, sol.gauge, recs)


def _zdiff(u, sol):
    u = np.asarray(u, dtype=complex)
    diff = u[..., None] - sol.ul
    if np.any(ell.lattice_distance(diff) < sol.cfg.tol.pole_guard):
        raise EvaluationAtPole("evaluation point coincides with a forcing pole")
    return ell.zeta_w(diff, 0.0) - ell.zeta_w(ell.U0 - sol.ul, 0.0)


def beta_ch_tY(t, Y):
    return 1j * Y / SQRT2 * (t * t - 1)


def _P13_direct(u, t, Y, sol):
    z = _zdiff(u, sol)
    A = z @ sol.alpha
    B = z @ sol.beta
    j = sol.jets
    t4 = 4 * t ** 4
    return (A + j.p(t)) / t4 - beta_ch_tY(t, Y) * (B + j.q(t)) / t4, z


def _in_base_square(u):
    d = complex(u) - ell.U0
    return abs(d.real) < ell.OMEGA / 2 and abs(d.imag) < ell.OMEGA / 2


def _P13_cauchy(t, sol):
    # P13 is analytic in t on the physical disk inside the forcing poles
    phi = 2 * np.pi * np.arange(_CAUCHY_NODES) / _CAUCHY_NODES
    s = _CAUCHY_RADIUS * np.exp(1j * phi)
    us = ell.U0 + np.array([abel_offset(x) for x in s])
    Ys = -SQRT2 * np.sqrt(1 + s ** 4)
    vals, _ = _P13_direct(us, s, Ys, sol)
    return complex(np.mean(vals * s / (s - t)))


def P13(u, sol):
    u = complex(u)
    p = point_of_u(u)
    if abs(p.t) < _NEAR_BASE and _in_base_square(u):
        _zdiff(u, sol)  # pole check only
        return _P13_cauchy(p.t, sol)
    if abs(p.t) < sol.cfg.tol.pole_guard:
        raise EvaluationAtPole("singular channel pole at a basepoint translate")
    val, _ = _P13_direct(u, p.t, p.Y, sol)
    return complex(val)


def R_remainder(u, sol):
    u = complex(u)
    raw = P13(u, sol) - complex(_zdiff(u, sol) @ sol.d)
    return raw - sol.R0 if sol.gauge else raw


def Q_scat_u(u, sol):
    u = complex(u)
    return complex(_zdiff(u, sol) @ sol.C) + R_remainder(u, sol)


def Q_scat_zeta(zeta, sol):
    return Q_scat_u(u_of_zeta(zeta, sol.cfg.tol), sol)


def Q_scat_boundary(theta, sol):
    """Boundary value at real zeta = theta, approached from Im zeta > 0."""
    p = boundary_point_of_zeta(theta, sol.cfg.tol)
    return Q_scat_u(lift_u(p, sol.cfg.tol), sol)


def Q_total(zeta, sol):
    zeta = complex(zeta)
    zi = sol.cfg.zeta_i
    if abs(zeta - zi) < sol.cfg.tol.pole_guard:
        raise IncidentPole("evaluation at the incident spectral point")
    return 1 / (zeta - zi) + Q_scat_zeta(zeta, sol)


def incident_u(sol):
    return incident_pole(sol.cfg).u


def snell_map(z):
    """(w, w') with cos w = sqrt2 cos z and w ~ z + i log sqrt2 as Im z -> +inf."""
    z = complex(z)
    t = np.exp(1j * z)
    p = curve_lift(t, "physical")
    s = snell_s(p)
    w = z - 1j * np.log(s / t)
    return complex(w), complex(g_prime(p))


def S_from_Q(face, z, sol, Q=None):
    """Medium-1 density on face theta_b = face * pi/4 from the medium-0 density.

    Returns (S(theta_b + z), S(theta_b - z)) together with the inputs used.
    """
    if Q is None:
        Q = lambda zeta: Q_total(zeta, sol)
    tb = face * THETA_W
    w, wp = snell_map(z)
    Qp, Qm = Q(tb + w), Q(tb - w)
    Sp = 0.5 * ((1 + wp) * Qp + (1 - wp) * Qm)
    Sm = 0.5 * ((1 - wp) * Qp + (1 + wp) * Qm)
    return complex(Sp), complex(Sm), dict(w=w, w_prime=wp, Q_plus=Qp, Q_minus=Qm)
