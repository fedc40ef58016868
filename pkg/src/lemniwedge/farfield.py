"""Far-field diffraction coefficient with the vanishing-absorption limit."""
from dataclasses import dataclass, field

import numpy as np

from .config import THETA_W
from .errors import ExtrapolationUnstable, NearPoleDirection, WedgeError
from .numerics import neville
from .poles import scattered_poles
from .reconstruct import Q_scat_boundary, solution
from .surface import snell_s

EPS_FACTORS = (1.0, 0.1, 0.01)


def prefactor(k0):
    return np.exp(-3j * np.pi / 4) * np.sqrt(2 / (np.pi * k0))


def Q_boundary(theta, cfg):
    return Q_scat_boundary(theta, solution(cfg))


def D_direct(theta, cfg):
    """Coefficient at the configured eps, without extrapolation."""
    return complex(prefactor(cfg.k0) * Q_boundary(theta, cfg))


def pole_directions(cfg):
    """Spectral images pi/4 - i log s(t_l, Y_l) of the scattered poles, extrapolated to eps = 0."""
    e1, e2 = cfg.eps, cfg.eps * EPS_FACTORS[1]
    z1 = [THETA_W - 1j * np.log(snell_s(r.point, 0.0)) for r in scattered_poles(cfg.with_eps(e1))]
    z2 = [THETA_W - 1j * np.log(snell_s(r.point, 0.0)) for r in scattered_poles(cfg.with_eps(e2))]
    z0 = [b - (a - b) * e2 / (e1 - e2) for a, b in zip(z1, z2)]
    return np.array(z0)


def _angle_gap(a, b):
    d = np.mod(a - b + np.pi, 2 * np.pi) - np.pi
    return np.abs(d)


def pole_distance(theta, cfg):
    z0 = pole_directions(cfg)
    return float(np.min(_angle_gap(theta, z0.real) + np.abs(z0.imag)))


def Q_limit(theta, cfg, factors=EPS_FACTORS):
    """Boundary value Q_scat(theta) extrapolated to eps -> 0 (Richardson in eps)."""
    eps = [cfg.eps * f for f in factors]
    vals = [Q_boundary(theta, cfg.with_eps(e)) for e in eps]
    q0, err = neville(eps, vals, 0.0)
    return q0, err, eps, vals


def D_coefficient(theta, cfg, details=False):
    theta = float(theta)
    guard = 10 * cfg.tol.pole_guard
    dist = pole_distance(theta, cfg)
    if dist < guard:
        raise NearPoleDirection(f"theta={theta:.12g} within {dist:.2e} of a pole direction")
    q0, err, eps, vals = Q_limit(theta, cfg)
    if err > 10 * cfg.tol.tol_eval:
        raise ExtrapolationUnstable(f"eps extrapolation residual {err:.2e} at theta={theta:.12g}")
    D = complex(prefactor(cfg.k0) * q0)
    if details:
        return D, dict(Q=complex(q0), residual=float(err), eps=eps, Q_eps=[complex(v) for v in vals],
                       pole_distance=dist)
    return D


@dataclass
class FarFieldRow:
    theta: float
    D: complex
    flag: str = ""
    residual: float = 0.0


@dataclass
class FarFieldTable:
    rows: list
    metadata: dict = field(default_factory=dict)

    def thetas(self):
        return np.array([r.theta for r in self.rows])

    def values(self):
        return np.array([r.D for r in self.rows])


def farfield_sweep(grid, cfg):
    grid = [float(g) for g in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    rows = []
    for th in grid:
        try:
            D, info = D_coefficient(th, cfg, details=True)
            rows.append(FarFieldRow(th, D, "", info["residual"]))
        except WedgeError as e:
            rows.append(FarFieldRow(th, complex(np.nan, np.nan), e.name, float("nan")))
    meta = dict(eps_sequence=[cfg.eps * f for f in EPS_FACTORS], extrapolation="polynomial in eps to 0",
                pole_direction_threshold=10 * cfg.tol.pole_guard,
                unstable_threshold=10 * cfg.tol.tol_eval)
    return FarFieldTable(rows, meta)


def default_reciprocity_grid(n=13, margin=0.2):
    """Exterior angles strictly between the faces at pi/4 and 7pi/4."""
    return np.linspace(THETA_W + margin, 2 * np.pi - THETA_W - margin, n)


def reciprocity_report(grid, cfg):
    """Asymmetry |D(theta; theta') - D(theta'; theta)| over a grid of angle pairs.

    Entry [a, b] of ``D`` is the coefficient at theta = grid[a] for incidence
    theta_i = grid[b].  Flagged evaluations are NaN and excluded from the
    summary statistics.
    """
    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    D = np.full((n, n), np.nan + 0j)
    flags = {}
    for b, thi in enumerate(grid):
        c = cfg.with_theta_i(thi)
        for a, th in enumerate(grid):
            try:
                D[a, b] = D_coefficient(th, c)
            except WedgeError as e:
                flags[(a, b)] = e.name
    delta = np.abs(D - D.T)
    ok = np.isfinite(delta)
    return dict(grid=grid, D=D, delta=delta, flags=flags,
                max_delta=float(np.max(delta[ok])) if ok.any() else float("nan"),
                mean_delta=float(np.mean(delta[ok])) if ok.any() else float("nan"),
                n_flagged=len(flags))
