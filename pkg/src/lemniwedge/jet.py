"""Half-period shift data, the zeta sums A and B, and the jet-killing cubics p, q."""
from dataclasses import dataclass

import numpy as np

from . import elliptic as ell
from .errors import EvaluationAtPole, ShiftSingularity
from .poles import Label
from .surface import SQRT2, abel_offset

BROKEN_PARTNER = Label(2, 1, -1)


@dataclass(frozen=True)
class ShiftData:
    label: object
    W0: complex
    W1: complex
    W2: complex


@dataclass(frozen=True)
class JetCoeffs:
    p1: complex
    p2: complex
    p3: complex
    q1: complex
    q2: complex
    q3: complex

    def p(self, t):
        return self.p1 * t + self.p2 * t ** 2 + self.p3 * t ** 3

    def q(self, t):
        return self.q1 * t + self.q2 * t ** 2 + self.q3 * t ** 3


def shift_data(l, rec, pole_guard=1e-8):
    """wp, wp', wp'' at U0 - u_l, written algebraically in (t_l, Y_l)."""
    t, Y = rec.t, rec.Y
    D = Y + SQRT2
    if abs(D) < pole_guard:
        raise ShiftSingularity(f"pole {l} sits over the basepoint fibre")
    return ShiftData(l, complex(-SQRT2 * t * t / D), complex(-4 * t / D),
                     complex(12 * t ** 4 / D ** 2 - 2))


def shift_data_elliptic(rec):
    d = ell.U0 - rec.u
    return ell.wp(d), ell.wp_prime(d), ell.wp_second(d)


def jet_summands(res, sh):
    """Per-pole contributions (p1, p2, p3, q1, q2, q3)."""
    a, b = res.alpha, res.beta
    return (a * sh.W0 / SQRT2, a * sh.W1 / 4, a * sh.W2 / (12 * SQRT2),
            b * sh.W0 / SQRT2, b * sh.W1 / 4, b * sh.W2 / (12 * SQRT2))


def jet_coeffs(records, shifts):
    tot = np.zeros(6, dtype=complex)
    for r, s in zip(records, shifts):
        tot += np.array(jet_summands(r, s))
    return JetCoeffs(*(complex(x) for x in tot))


def zeta_sum(u, poles, weights, pole_guard=1e-8):
    """sum_l w_l [zeta_w(u - u_l) - zeta_w(U0 - u_l)], vectorized over u."""
    u = np.asarray(u, dtype=complex)
    ul = np.array([p.u for p in poles])
    w = np.asarray(weights, dtype=complex)
    diff = u[..., None] - ul
    if np.any(ell.lattice_distance(diff) < pole_guard):
        raise EvaluationAtPole("evaluation point coincides with a forcing pole")
    z = ell.zeta_w(diff, 0.0) - ell.zeta_w(ell.U0 - ul, 0.0)
    out = np.sum(w * z, -1)
    return complex(out) if out.ndim == 0 else out


def A_sum(u, records, pole_guard=1e-8):
    return zeta_sum(u, [r.pole for r in records], [r.alpha for r in records], pole_guard)


def B_sum(u, records, pole_guard=1e-8):
    return zeta_sum(u, [r.pole for r in records], [r.beta for r in records], pole_guard)


def delta_of_t(t):
    """u(t) - U0 on the physical sheet."""
    return abel_offset(t)
