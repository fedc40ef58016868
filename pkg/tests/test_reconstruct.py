import math

import numpy as np
import pytest
from hypothesis import given

from strategies import upper_zeta
from lemniwedge import elliptic as ell
from lemniwedge.errors import EvaluationAtPole, IncidentPole
from lemniwedge.numerics import circle_mean, neville
from lemniwedge.reconstruct import (P13, Q_scat_boundary, Q_scat_u, Q_scat_zeta, Q_total, R_remainder,
                                    S_from_Q, _P13_cauchy, _P13_direct, assemble, incident_u,
                                    shifted_representatives, snell_map, solution)
from lemniwedge.surface import abel_offset, curve_lift, point_of_zeta

W = 2 * ell.OMEGA


def residue(f, c, radii=(1e-3, 1e-4, 1e-5), n=32):
    vals = [circle_mean(f, c, r, n) for r in radii]
    return neville(radii, vals, 0.0)[0]


def test_gauge_at_basepoint(sol):
    assert abs(Q_scat_u(ell.U0, sol)) < 1e-8
    assert abs(R_remainder(ell.U0, sol)) < 1e-12


def test_raw_remainder_at_basepoint_is_nonzero(cfg):
    # the zeta differences vanish at U0 but the singular channel does not,
    # so without the gauge constant the density is not zero there
    raw = assemble(cfg, gauge=False)
    r0 = R_remainder(ell.U0, raw)
    assert abs(r0) > 0.1
    assert r0 == pytest.approx(solution(cfg).R0, abs=1e-14)
    assert Q_scat_u(0.3 + 0.2j + ell.U0, raw) - Q_scat_u(0.3 + 0.2j + ell.U0, solution(cfg)) == \
        pytest.approx(r0, abs=1e-12)


def test_remainder_analytic_at_basepoint(sol):
    for phi in np.pi / 2 * np.arange(4) + 0.2:
        e = np.exp(1j * phi)
        # two-sided values agree with the gauge value to O(h^2)
        sym = [(R_remainder(ell.U0 + h * e, sol) + R_remainder(ell.U0 - h * e, sol)) / 2
               for h in (1e-3, 1e-4)]
        assert abs(sym[-1]) < 1e-8
        assert abs(sym[0]) > 10 * abs(sym[1])


def test_cauchy_and_direct_singular_channel_agree(sol):
    for t in (0.25, 0.3j, 0.28 * np.exp(2.1j)):
        u = ell.U0 + abel_offset(t)
        p = curve_lift(t)
        direct, _ = _P13_direct(np.array(u), p.t, p.Y, sol)
        assert _P13_cauchy(t, sol) == pytest.approx(complex(direct), rel=1e-10)


def test_singular_channel_finite_near_basepoint(sol):
    vals = [P13(ell.U0 + abel_offset(t), sol) for t in (1e-2, 1e-4, 1e-6)]
    assert np.all(np.isfinite(vals))
    # the limit is the gauge constant, approached linearly in t
    assert abs(vals[2] - sol.R0) < 1e-5
    assert abs(vals[1] - sol.R0) < 150 * abs(vals[2] - sol.R0)


def test_Q_residues_equal_C(sol):
    for r in sol.records[::2]:
        val = residue(lambda u: Q_scat_u(u, sol), r.pole.u)
        assert abs(val - r.C) <= 1e-6 * max(abs(r.C), 1.0)


def test_remainder_products_vanish(sol):
    for r in sol.records[1::2]:
        for phi in (0.3, 2.0, 4.1):
            e = np.exp(1j * phi)
            g = [h * e * R_remainder(r.pole.u + h * e, sol) for h in (1e-3, 1e-4, 1e-5)]
            assert abs(neville([1e-3, 1e-4, 1e-5], g, 0.0)[0]) < 1e-8


def test_evaluation_at_pole_raises(sol):
    with pytest.raises(EvaluationAtPole):
        Q_scat_u(sol.ul[0], sol)


def test_incident_point_is_regular(sol):
    ui = incident_u(sol)
    vals = [Q_scat_u(ui + 1e-3 * np.exp(1j * p), sol) for p in np.linspace(0, 2 * np.pi, 8)]
    assert np.all(np.isfinite(vals))
    assert max(abs(v) for v in vals) < 1e3


def test_incident_spectral_point(sol, cfg):
    zi = cfg.zeta_i
    q0 = Q_scat_zeta(zi, sol)
    for d in (1e-4, 1e-4j, -1e-4):
        assert Q_scat_zeta(zi + d, sol) == pytest.approx(q0, abs=1e-2 * max(1, abs(q0)))
    with pytest.raises(IncidentPole):
        Q_total(zi, sol)
    z = zi + 1e-3
    assert Q_total(z, sol) - 1 / (z - zi) == pytest.approx(Q_scat_zeta(z, sol), abs=1e-12)
    assert circle_mean(lambda x: Q_total(x, sol), zi, 1e-4) == pytest.approx(1, abs=1e-6)


def test_decays_to_gauge_at_large_imaginary_part(sol):
    assert abs(Q_scat_zeta(1.0 + 40j, sol)) < 1e-8
    assert abs(Q_scat_zeta(1.0 + 10j, sol)) < 1e-3


@given(upper_zeta)
def test_periodicity_in_real_part(z):
    from lemniwedge.config import WedgeConfig
    sol = solution(WedgeConfig(math.pi / 2))
    try:
        a = Q_scat_zeta(z, sol)
    except EvaluationAtPole:
        return
    assert Q_scat_zeta(z + 2 * math.pi, sol) == pytest.approx(a, rel=1e-8, abs=1e-8)


def test_lattice_representatives_do_not_matter(sol):
    shifts = [(k % 3 - 1) * W + 1j * (k % 2) * W for k in range(15)]
    moved = shifted_representatives(sol, shifts)
    for u in (ell.U0 + 0.3 + 0.1j, ell.U0 - 0.2 + 0.35j, 0.7 + 0.4j):
        assert Q_scat_u(u, moved) == pytest.approx(Q_scat_u(u, sol), abs=1e-9)


def test_mode_path_solution_agrees(cfg, sol):
    alt = solution(cfg, "modes")
    for z in (1.0 + 0.5j, 2.5 + 0.2j, 4.0 + 1.0j):
        assert Q_scat_zeta(z, alt) == pytest.approx(Q_scat_zeta(z, sol), rel=1e-8)


def test_boundary_value_is_upper_limit(sol):
    th = math.pi / 2 + 0.3
    b = Q_scat_boundary(th, sol)
    vals = [Q_scat_zeta(th + 1j * h, sol) for h in (1e-4, 1e-5, 1e-6)]
    assert abs(vals[-1] - b) < 1e-4
    assert abs(vals[-1] - b) < abs(vals[0] - b)


# ---------------------------------------------------------------- face coupling


@pytest.mark.parametrize("z", [0.4 + 0.3j, -1.2 + 0.8j, 2.0 + 0.5j])
def test_snell_map(z):
    w, wp = snell_map(z)
    assert np.cos(w) == pytest.approx(math.sqrt(2) * np.cos(z), rel=1e-13)
    h = 1e-6
    fd = (snell_map(z + h)[0] - snell_map(z - h)[0]) / (2 * h)
    assert fd == pytest.approx(wp, rel=1e-7)


@pytest.mark.parametrize("face", [1, -1])
def test_face_coupling_relations(face, sol):
    for z in (0.4 + 0.3j, -1.2 + 0.8j, 2.0 + 0.5j):
        Sp, Sm, info = S_from_Q(face, z, sol)
        Qp, Qm, wp = info["Q_plus"], info["Q_minus"], info["w_prime"]
        assert Sp + Sm == pytest.approx(Qp + Qm, rel=1e-12)
        assert Sp - Sm == pytest.approx(wp * (Qp - Qm), rel=1e-12)


def test_face_coupling_identity_when_derivative_is_one(sol):
    # far up the strip the Snell derivative tends to 1 and S copies Q
    Sp, Sm, info = S_from_Q(1, 0.5 + 25j, sol, Q=lambda zeta: np.exp(1j * zeta.real))
    assert info["w_prime"] == pytest.approx(1, abs=1e-12)
    assert Sp == pytest.approx(info["Q_plus"], abs=1e-12)
    assert Sm == pytest.approx(info["Q_minus"], abs=1e-12)
