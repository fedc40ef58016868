import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strategies import disk_points, exterior_angles
from lemniwedge.config import WedgeConfig
from lemniwedge.poles import Label, pole_set
from lemniwedge.residues import (OMEGA_DFT, alpha_table, beta_ch, beta_table, C_table, coeff_from_modes,
                                 d_from_def, d_table, forcing_residue_vector, mode_halves, mode_matrices,
                                 phase_symbols, r_I_explicit, r_I_of, residue_records, w_m_prime)
from lemniwedge.surface import curve_lift, make_point, tau

R2 = math.sqrt(2)
configs = st.builds(WedgeConfig, exterior_angles, st.floats(1e-3, 1e-1))


def test_w_m_prime_examples():
    assert w_m_prime(0, make_point(1j, R2 * 0)) == pytest.approx(-2 * R2, abs=1e-15)
    assert w_m_prime(1, make_point(1, 2)) == pytest.approx(-2j * R2, abs=1e-15)


@given(disk_points(rmin=0.1, rmax=0.95))
def test_w_m_prime_partner_sign(t):
    for m in range(4):
        assert w_m_prime(m + 2, make_point(-t, 0)) == pytest.approx(-w_m_prime(m, make_point(t, 0)))


def test_phase_symbols():
    for m in range(4):
        chi, psi, kap = phase_symbols(m)
        assert chi == psi == (1j) ** m and kap == (1j) ** (m + 1)


@given(configs)
def test_r_I_forms_and_pairing(cfg):
    recs = {r.label: r for r in pole_set(cfg)}
    for l, r in recs.items():
        a = r_I_of(l, r)
        assert a == pytest.approx(r_I_explicit(l, r.t), rel=1e-13)
        assert r_I_of(l.partner(), recs[l.partner()]) == pytest.approx(-a, rel=1e-12)


def test_r_I_sign_follows_eps_j():
    p = curve_lift(0.4 + 0.3j)
    for m in range(4):
        a, b = Label(m, 1, -1), Label(m, -1, -1)   # eps_j = +1 and -1
        assert r_I_of(a, p) == pytest.approx(-r_I_of(b, p), rel=1e-15)


def test_beta_ch_examples():
    assert beta_ch(curve_lift(0)) == pytest.approx(1j, abs=1e-15)
    assert beta_ch(make_point(1, 2)) == 0
    p = curve_lift(0.3 + 0.2j)
    assert beta_ch(tau(p)) == pytest.approx(1j * (-p.Y) / R2 * (-p.t ** 2 - 1), rel=1e-15)


# ---------------------------------------------------------------- closed-form tables


@given(configs)
def test_table_structural_entries(cfg):
    by = {r.label: r for r in pole_set(cfg)}
    for l, r in by.items():
        rI = r_I_of(l, r)
        chi, psi, kap = phase_symbols(l.m)
        t, Y = r.t, r.Y
        if l.m % 2 == 0:
            if l.j == 3:
                assert alpha_table(l, r) == 0
            if l.j == 4:
                assert beta_table(l, r) == pytest.approx(-chi * rI)
                assert d_table(l, r) == 0
            if l.j in (3, 4):
                assert C_table(l, r) == 0
        else:
            if l.j == 2:
                assert alpha_table(l, r) == pytest.approx(psi * rI)
            if l.j == 1:
                assert beta_table(l, r) == 0
                assert d_table(l, r) == pytest.approx(psi * rI / 4)
            if l.j == 4:
                ref = -(rI / (2 * t * t)) * (1 + kap * Y / (R2 * t * t))
                assert C_table(l, r) == pytest.approx(ref, rel=1e-14)


@given(configs)
def test_d_table_matches_definition(cfg):
    for r in pole_set(cfg):
        l = r.label
        d = d_from_def(alpha_table(l, r), beta_table(l, r), r.point)
        assert abs(d - d_table(l, r)) <= 1e-9 * max(1, abs(d))


@given(configs)
def test_tables_match_mode_path(cfg):
    for r in pole_set(cfg):
        l = r.label
        table = np.array([alpha_table(l, r), beta_table(l, r), C_table(l, r)])
        modes = np.array(coeff_from_modes(l, r))
        for a, b in zip(table, modes):
            if a == 0:
                assert abs(b) < 1e-12
            else:
                assert abs(a - b) <= 1e-9 * abs(a)


def test_solver_choice_agrees(cfg):
    for r in pole_set(cfg):
        a = np.array(coeff_from_modes(r.label, r, solver="explicit"))
        b = np.array(coeff_from_modes(r.label, r, solver="solve"))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


# ---------------------------------------------------------------- mode systems


@given(disk_points(rmin=0.1, rmax=0.9))
def test_mode_halves_sum_to_one(t):
    A0, B0, A1, B1 = mode_halves(curve_lift(t))
    assert A0 + B0 == pytest.approx(1) and A1 + B1 == pytest.approx(1)


@given(disk_points(rmin=0.1, rmax=0.9), st.integers(0, 3))
def test_mode_matrix_inverse_and_determinants(t, k):
    p = curve_lift(t)
    mm = mode_matrices(k, p)
    assert np.allclose(mm.M_U_inv @ mm.M_U, np.eye(2), atol=1e-10)
    assert mm.det_U == pytest.approx(np.linalg.det(mm.M_U), rel=1e-10, abs=1e-14)
    assert mm.det_V == pytest.approx(np.linalg.det(mm.M_V), rel=1e-10, abs=1e-14)
    A0, B0, A1, B1 = mode_halves(p)
    w = OMEGA_DFT
    assert mm.det_V == pytest.approx(w ** k * A1 * B0 - w ** (-k) * A0 * B1, rel=1e-12, abs=1e-14)


def test_forcing_vector_examples():
    p = curve_lift(0.5 + 0.2j)
    A0, B0, A1, B1 = mode_halves(p)
    w = OMEGA_DFT
    for m in range(4):
        l3 = Label(m, 1, 1)          # j = 3
        rI = r_I_of(l3, p)
        Am, Bm = (A0, B0) if m % 2 == 0 else (A1, B1)
        for k in range(4):
            v = forcing_residue_vector(k, l3, p)
            assert v == pytest.approx(np.array([-Am, -Bm]) * w ** (-k * m) * rI)
        l1 = Label(m, 1, -1)         # j = 1
        v = forcing_residue_vector(0, l1, p)
        assert v == pytest.approx(np.array([Am, Bm]) * r_I_of(l1, p))


def test_residue_records_paths(cfg):
    a = residue_records(cfg, "table")
    b = residue_records(cfg, "modes")
    assert len(a) == len(b) == 15
    for x, y in zip(a, b):
        for f in ("alpha", "beta", "C", "d"):
            u, v = getattr(x, f), getattr(y, f)
            assert abs(u - v) <= 1e-9 * max(abs(u), 1e-3)
    with pytest.raises(ValueError):
        residue_records(cfg, "guess")
