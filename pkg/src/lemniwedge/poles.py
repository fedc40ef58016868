"""Forcing labels, forcing phases and the sixteen forcing pole points."""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import THETA_W
from .errors import DegenerateEps, DoubleRoot, UnitModulusRoot
from .surface import SQRT2, CurvePoint, classify, lift_u, quadratic_roots

_JMAP = {(1, 1): 3, (1, -1): 1, (-1, 1): 4, (-1, -1): 2}


@dataclass(frozen=True, order=True)
class Label:
    m: int
    sigma: int
    eps_w: int

    @property
    def j(self):
        return _JMAP[(self.sigma, self.eps_w)]

    @property
    def eps_j(self):
        return 1 if self.j in (1, 3) else -1

    def partner(self):
        """Label of the tau^2 image: (m + 2 mod 4, sigma, eps_w)."""
        return Label((self.m + 2) % 4, self.sigma, self.eps_w)

    def __str__(self):
        sg = lambda s: "+" if s > 0 else "-"
        return f"({self.m},{sg(self.sigma)},{sg(self.eps_w)})"


INCIDENT = Label(0, 1, -1)


def all_labels():
    return [Label(m, s, e) for m in range(4) for s in (1, -1) for e in (1, -1)]


def scattered_labels():
    return [l for l in all_labels() if l != INCIDENT]


@dataclass(frozen=True)
class PoleRecord:
    label: Label
    b: complex
    t: complex
    Y: complex
    u: complex
    component: str

    @property
    def point(self):
        return CurvePoint(self.t, self.Y, self.component)

    @property
    def curve_residual(self):
        return abs(self.Y ** 2 - 2 * (self.t ** 4 + 1))


def forcing_phase(l, cfg):
    if not cfg.eps > 0:
        raise DegenerateEps(f"absorption shift must be positive, got {cfg.eps!r}")
    a = np.exp(1j * l.sigma * (cfg.zeta_i + l.eps_w * THETA_W))
    return complex(a if l.m % 2 == 0 else 1 / a)


def pole_roots(b, pole_guard=1e-8):
    """(t_in, t_out) of t^2 - (b^2+1)/(sqrt2 b) t + 1 = 0 with |t_in| < 1 < |t_out|."""
    b = complex(b)
    if b == 0:
        raise DoubleRoot("forcing phase is zero")
    if abs(b ** 4 - 6 * b ** 2 + 1) < pole_guard:
        raise DoubleRoot("pole quadratic has a double root")
    t_in, t_out = quadratic_roots(b)
    if abs(abs(t_in) - 1) < pole_guard:
        raise UnitModulusRoot("pole root on the unit circle")
    return t_in, t_out


def pole_record(l, cfg):
    b = forcing_phase(l, cfg)
    tq, _ = pole_roots(b, cfg.tol.pole_guard)
    Yq = 2 * b * tq - SQRT2 * (tq * tq + 1)
    t = (1j) ** (-l.m) * tq
    Y = (-1) ** l.m * Yq
    comp = classify(t, Y)
    u = lift_u(CurvePoint(t, Y, comp), cfg.tol)
    return PoleRecord(l, b, complex(t), complex(Y), complex(u), comp)


@lru_cache(maxsize=256)
def pole_set(cfg):
    """All sixteen pole records, in label order."""
    return tuple(pole_record(l, cfg) for l in all_labels())


def scattered_poles(cfg):
    return tuple(r for r in pole_set(cfg) if r.label != INCIDENT)


def incident_pole(cfg):
    return next(r for r in pole_set(cfg) if r.label == INCIDENT)
