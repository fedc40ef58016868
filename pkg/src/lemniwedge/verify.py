"""Acceptance checks shared by the test-suite and the ``verify`` command.

Each criterion returns a CheckResult made of named parts; a criterion passes
when every part is within its threshold.
"""
from dataclasses import dataclass, field, replace
import math

import numpy as np

from . import elliptic as ell
from . import surface as sf
from .config import WedgeConfig
from .errors import WedgeError
from .farfield import (D_coefficient, D_direct, Q_limit, default_reciprocity_grid,
                       prefactor, reciprocity_report)
from .jet import A_sum, B_sum, BROKEN_PARTNER, delta_of_t, jet_summands, shift_data, shift_data_elliptic
from .numerics import circle_mean, loglog_slope, neville
from .poles import INCIDENT, all_labels, pole_roots, pole_set, scattered_labels, forcing_phase
from .reconstruct import (P13, Q_scat_u, Q_total, R_remainder, S_from_Q, incident_u, snell_map,
                          solution)
from .residues import coeff_from_modes, d_from_def, residue_record, residue_records

RADII = (1e-2, 1e-3, 1e-4)
DEFAULT_THETA_I = math.pi / 2


@dataclass
class Part:
    name: str
    value: float
    threshold: float
    passed: bool
    relation: str = "<"


@dataclass
class CheckResult:
    criterion: int
    name: str
    parts: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(p.passed for p in self.parts)

    def add(self, name, value, threshold, relation="<"):
        value = float(value)
        ok = {"<": value < threshold, ">=": value >= threshold, ">": value > threshold,
              "==": value == threshold}[relation] and math.isfinite(value)
        self.parts.append(Part(name, value, float(threshold), bool(ok), relation))
        return ok

    def failing(self):
        return [p.name for p in self.parts if not p.passed]

    def to_dict(self):
        return dict(criterion=self.criterion, check=self.name, passed=self.passed,
                    parts=[dict(name=p.name, value=p.value, threshold=p.threshold,
                                relation=p.relation, passed=p.passed) for p in self.parts],
                    info=self.info)


def random_configs(n, seed, eps_range=(1e-3, 1e-1)):
    rng = np.random.default_rng(seed)
    th = rng.uniform(math.pi / 4 + 0.1, 7 * math.pi / 4 - 0.1, n)
    ep = np.exp(rng.uniform(math.log(eps_range[0]), math.log(eps_range[1]), n))
    return [WedgeConfig(float(a), float(b)) for a, b in zip(th, ep)]


def _random_torus(rng, n, min_dist=0.25):
    out = []
    while len(out) < n:
        u = rng.uniform(0, 2 * ell.OMEGA) + 1j * rng.uniform(0, 2 * ell.OMEGA)
        if ell.lattice_distance(u) > min_dist:
            out.append(u)
    return np.array(out)


def _rel(a, b, floor=1e-300):
    return abs(a - b) / max(abs(b), floor)


def _pole_radius(u, others, cap=RADII[0]):
    # keep the largest sampling circle well inside the nearest other pole
    d = [abs(ell.reduce_centered(u - v)) for v in others if v != u]
    return min(cap, 0.3 * min(d)) if d else cap


def residue_limit(f, center, r0=RADII[0], n=64):
    """Residue of f at center from circle means at r0 * {1, 0.1, 0.01}, extrapolated to r = 0."""
    radii = [r0, r0 / 10, r0 / 100]
    vals = [circle_mean(f, center, r, n) for r in radii]
    return neville(radii, vals, 0.0)


def product_limit(f, center, r0=RADII[1], n=16):
    """Per direction, (u - c) f(u) extrapolated to r -> 0 from r0 * {1, 0.1, 0.01}.

    Returns the largest extrapolated magnitude and the raw magnitude on the
    starting circle.
    """
    radii = [r0, r0 / 10, r0 / 100]
    worst, raw = 0.0, 0.0
    for phi in 2 * np.pi * np.arange(n) / n:
        e = np.exp(1j * phi)
        g = [r * e * f(center + r * e) for r in radii]
        v, _ = neville(radii, g, 0.0)
        worst = max(worst, abs(v))
        raw = max(raw, abs(g[0]))
    return worst, raw


# ---------------------------------------------------------------- criteria


def check_elliptic(cfg, seed):
    res = CheckResult(1, "elliptic_kernel")
    rng = np.random.default_rng(seed)
    u = _random_torus(rng, 1000)
    p, pp = ell.wp(u), ell.wp_prime(u)
    res.add("ode_residual", np.max(np.abs(pp ** 2 - 4 * p ** 3 + 4 * p)), 1e-10)
    h = 1e-5
    fd = (ell.zeta_w(u + h) - ell.zeta_w(u - h)) / (2 * h)
    res.add("zeta_derivative_fd", np.max(np.abs(fd + p)), 1e-6)
    res.add("wp_u0", abs(ell.wp(ell.U0) + 1), 1e-9)
    res.add("wp_prime_u0", abs(ell.wp_prime(ell.U0)), 1e-9)
    res.add("wp_second_u0", abs(ell.wp_second(ell.U0) - 4), 1e-9)
    return res


def check_curve(cfg, seed, n=300):
    res = CheckResult(2, "curve_uniformization")
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        t = rng.uniform(0, 0.98) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        pts.append(sf.curve_lift(t, "physical"))
        pts.append(sf.curve_lift(t, 1))
    for c in random_configs(5, seed):
        pts += [r.point for r in pole_set(c)]
    for _ in range(n // 3):
        z = rng.uniform(-np.pi, np.pi) + 1j * rng.uniform(0.05, 3)
        pts.append(sf.point_of_zeta(z))
    res.add("curve_residual", max(p.residual for p in pts), 1e-12)
    cub = 0.0
    lift = 0.0
    for p in pts:
        x, y = sf.uniformize(p)
        cub = max(cub, ell.cubic_residual(x, y))
        u = sf.lift_u(p)
        q = sf.point_of_u(u)
        lift = max(lift, abs(q.t - p.t) + abs(q.Y - p.Y),
                   (abs(ell.wp(u) - x) + abs(ell.wp_prime(u) / 2 - y)) / max(1.0, abs(x)) ** 1.5)
    res.add("cubic_residual", cub, 1e-12)
    v = _random_torus(rng, 300, 0.05)
    inv = max(abs(ell.reduce_centered(ell.invert_wp(ell.wp(x), ell.wp_prime(x) / 2) - x)) for x in v)
    res.add("invert_roundtrip", inv, 1e-10)
    res.add("lift_roundtrip", lift, 1e-10)
    return res


def check_poles(cfg, seed):
    res = CheckResult(3, "pole_set")
    res.add("label_count", len(all_labels()), 16, "==")
    res.add("scattered_count", len(scattered_labels()), 15, "==")
    prod, pair, mind = 0.0, 0.0, np.inf
    for c in [cfg] + random_configs(10, seed):
        recs = {r.label: r for r in pole_set(c)}
        for l, r in recs.items():
            ti, to = pole_roots(forcing_phase(l, c))
            prod = max(prod, abs(ti * to - 1))
            q = recs[l.partner()]
            pair = max(pair, abs(q.t + r.t), abs(q.Y - r.Y))
        us = [r.u for r in recs.values()]
        for i in range(len(us)):
            for j in range(i + 1, len(us)):
                mind = min(mind, abs(ell.reduce_centered(us[i] - us[j])))
    res.add("root_product", prod, 1e-14)
    res.add("pairing_transport", pair, 1e-13)
    res.add("min_pole_separation", mind, 1e-6, ">")
    return res


def check_tables(cfg, seed, corrupt=None):
    res = CheckResult(4, "table_oracle_equivalence")
    worst = 0.0
    for c in random_configs(20, seed):
        for r in residue_records(c):
            a, b, C = coeff_from_modes(r.label, r.pole)
            ta, tb, tc = r.alpha, r.beta, r.C
            if corrupt is not None and r.label == corrupt:
                ta = ta * (1 + 1e-6) + 1e-6
            for tbl, mode in ((ta, a), (tb, b), (tc, C)):
                err = abs(mode) if tbl == 0 else _rel(mode, tbl)
                worst = max(worst, err)
    res.add("table_vs_modes_rel", worst, 1e-9)
    return res


def check_shifts(cfg, seed):
    res = CheckResult(5, "half_period_shifts")
    worst = 0.0
    for c in [cfg] + random_configs(19, seed):
        for l, r in ((r.label, r) for r in pole_set(c) if r.label != INCIDENT):
            s = shift_data(l, r)
            e = shift_data_elliptic(r)
            for a, b in zip((s.W0, s.W1, s.W2), e):
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    res.add("W_shift_vs_elliptic", worst, 1e-9)
    rng = np.random.default_rng(seed)
    u = _random_torus(rng, 500)
    u = u[np.abs(ell.reduce_centered(u - ell.U0)) > 0.25]
    lhs = ell.wp(u + ell.U0)
    rhs = -1 + 2 / (ell.wp(u) + 1)
    res.add("halfperiod_shift_identity", np.max(np.abs(lhs - rhs) / np.maximum(1, np.abs(lhs))), 1e-10)
    return res


def jet_slopes(sol, n_rays=8):
    ts = np.geomspace(1e-3, 1e-2, 6)
    sa, sb, sd, K = [], [], [], 0.0
    j = sol.jets
    for k in range(n_rays):
        e = np.exp(1j * (2 * np.pi * k / n_rays + 0.1))
        t = ts * e
        u = ell.U0 + np.array([delta_of_t(x) for x in t])
        A = np.array([A_sum(x, sol.records) for x in u]) + j.p(t)
        B = np.array([B_sum(x, sol.records) for x in u]) + j.q(t)
        dl = np.array([delta_of_t(x) for x in t]) - t / sf.SQRT2
        sa.append(loglog_slope(ts, A))
        sb.append(loglog_slope(ts, B))
        sd.append(loglog_slope(ts, dl))
        K = max(K, float(np.max(np.abs(A) / ts ** 4)))
    return sa, sb, sd, K


def check_jets(cfg, seed):
    res = CheckResult(6, "jet_cancellation")
    sa, sb, sd, K = jet_slopes(solution(cfg))
    res.add("slope_A_plus_p", min(sa), 3.9, ">=")
    res.add("slope_B_plus_q", min(sb), 3.9, ">=")
    res.add("slope_delta_minus_linear", min(sd), 4.9, ">=")
    res.info["t4_constant_A"] = K
    return res


def check_pairing(cfg, seed):
    res = CheckResult(7, "pairing_compression")
    w16, w15 = 0.0, 0.0
    for c in [cfg] + random_configs(5, seed):
        poles = pole_set(c)
        recs = [residue_record(r.label, r) for r in poles]
        summ = {r.label: jet_summands(r, shift_data(r.label, r.pole)) for r in recs}
        p2_16 = sum(s[1] for s in summ.values())
        q2_16 = sum(s[4] for s in summ.values())
        p2_15 = sum(s[1] for l, s in summ.items() if l != INCIDENT)
        q2_15 = sum(s[4] for l, s in summ.items() if l != INCIDENT)
        w16 = max(w16, abs(p2_16), abs(q2_16))
        w15 = max(w15, abs(p2_15 - summ[BROKEN_PARTNER][1]), abs(q2_15 - summ[BROKEN_PARTNER][4]))
    res.add("full_p2_q2", w16, 1e-10)
    res.add("broken_pair_p2_q2", w15, 1e-10)
    return res


def _rel_or_abs(a, b):
    return abs(a - b) / max(abs(b), 1.0) if abs(b) < 1e-8 else abs(a - b) / abs(b)


def check_singular_channel(cfg, seed):
    res = CheckResult(8, "singular_channel")
    sol = solution(cfg)
    us = list(sol.ul)
    worst, dd = 0.0, 0.0
    for r in sol.records:
        r0 = _pole_radius(r.pole.u, us)
        val, _ = residue_limit(lambda u: P13(u, sol), r.pole.u, r0)
        worst = max(worst, _rel_or_abs(val, r.d))
    for c in [cfg] + random_configs(10, seed):
        for r in residue_records(c):
            dd = max(dd, _rel_or_abs(d_from_def(r.alpha, r.beta, r.pole.point), r.d))
    res.add("P13_residue_vs_d", worst, 1e-6)
    res.add("d_table_vs_definition", dd, 1e-9)
    return res


def check_decomposition(cfg, seed):
    res = CheckResult(9, "canonical_decomposition")
    sol = solution(cfg)
    us = list(sol.ul)
    worst, prod, raw = 0.0, 0.0, 0.0
    for r in sol.records:
        r0 = _pole_radius(r.pole.u, us)
        val, _ = residue_limit(lambda u: Q_scat_u(u, sol), r.pole.u, r0)
        worst = max(worst, _rel_or_abs(val, r.C))
        lim, rr = product_limit(lambda u: R_remainder(u, sol), r.pole.u, min(r0, RADII[1]))
        prod, raw = max(prod, lim), max(raw, rr)
    res.add("Q_residue_vs_C", worst, 1e-6)
    res.add("R_product_limit", prod, 1e-8)
    res.add("gauge_Q_at_u0", abs(Q_scat_u(ell.U0, sol)), 1e-8)
    res.info["R_product_raw_max_on_1e-3_circle"] = raw
    res.info["R_raw_at_u0"] = [sol.R0.real, sol.R0.imag]
    return res


def check_incident(cfg, seed):
    res = CheckResult(10, "incident_analyticity")
    sol = solution(cfg)
    ui = incident_u(sol)
    r0 = _pole_radius(ui, list(sol.ul))
    lim, raw = product_limit(lambda u: Q_scat_u(u, sol), ui, min(r0, RADII[1]))
    res.add("incident_product_limit", lim, 1e-8)
    res.info["incident_product_raw_max_on_1e-3_circle"] = raw
    zi = cfg.zeta_i
    rad = min(1e-4, cfg.eps / 10)
    val = circle_mean(lambda z: Q_total(z, sol), zi, rad)
    res.add("Q_total_residue_at_zeta_i", abs(val - 1), 1e-6)
    return res


def check_face_coupling(cfg, seed, n=100):
    res = CheckResult(11, "face_coupling")
    sol = solution(cfg)
    rng = np.random.default_rng(seed)
    s_res, d_res, snell = 0.0, 0.0, 0.0
    done = 0
    while done < n:
        z = rng.uniform(-np.pi, np.pi) + 1j * rng.uniform(0.2, 1.5)
        face = 1 if done % 2 == 0 else -1
        try:
            Sp, Sm, info = S_from_Q(face, z, sol)
        except WedgeError:
            continue
        Qp, Qm, wp = info["Q_plus"], info["Q_minus"], info["w_prime"]
        sc = max(1.0, abs(Qp), abs(Qm))
        s_res = max(s_res, abs((Sp + Sm) - (Qp + Qm)) / sc)
        d_res = max(d_res, abs((Sp - Sm) - wp * (Qp - Qm)) / (sc * max(1.0, abs(wp))))
        w = info["w"]
        snell = max(snell, abs(np.cos(w) - math.sqrt(2) * np.cos(z)) / max(1.0, abs(np.cos(w))))
        done += 1
    res.add("sum_relation", s_res, 1e-8)
    res.add("difference_relation", d_res, 1e-8)
    res.info["snell_map_residual"] = snell
    return res


def check_farfield(cfg, seed, n_theta=20, reciprocity=True):
    res = CheckResult(12, "far_field")
    rng = np.random.default_rng(seed)
    th = np.sort(rng.uniform(math.pi / 4 + 0.15, 7 * math.pi / 4 - 0.15, n_theta))
    pre = prefactor(cfg.k0)
    exact, stab = 0.0, 0.0
    c2 = cfg.with_eps(1e-2)
    for t in th:
        try:
            D, info = D_coefficient(t, c2, details=True)
        except WedgeError:
            continue
        exact = max(exact, abs(D / info["Q"] - pre) / abs(pre))
        direct = D_direct(t, cfg.with_eps(1e-5))
        stab = max(stab, abs(D - direct))
    res.add("prefactor_exactness", exact, 1e-14)
    res.add("eps_extrapolation_stability", stab, 1e-7)
    if reciprocity:
        rep = reciprocity_report(default_reciprocity_grid(), cfg)
        res.add("reciprocity_max_asymmetry", rep["max_delta"], 0.0, ">")
        res.info["reciprocity_max_asymmetry"] = rep["max_delta"]
        res.info["reciprocity_flagged"] = rep["n_flagged"]
    return res


CRITERIA = (check_elliptic, check_curve, check_poles, check_tables, check_shifts, check_jets,
            check_pairing, check_singular_channel, check_decomposition, check_incident,
            check_face_coupling, check_farfield)


def run_all(cfg=None, seed=0, corrupt=None, only=None):
    cfg = cfg or WedgeConfig(DEFAULT_THETA_I)
    out = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        if fn is check_tables:
            out.append(fn(cfg, seed, corrupt=corrupt))
        else:
            out.append(fn(cfg, seed))
    return out
