import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eulermaxwell import _kernels_py, kernels
from eulermaxwell.flux import (
    ELECTRON,
    ION,
    analytic_flux,
    cfl_timestep,
    implicit_mass_flux_onefluid,
    implicit_mass_flux_twofluid,
    llf_flux_onefluid,
    llf_flux_twofluid,
    padded_fluxes,
    wave_speed_mu,
)
from eulermaxwell.model import PressureLaw

T1 = PressureLaw.isothermal(1.0)
dens = st.floats(1e-3, 10.0)
vel = st.floats(-5.0, 5.0)
state = st.tuples(dens, vel, vel).map(lambda s: (s[0], s[0] * s[1], s[0] * s[2]))
laws = st.sampled_from([PressureLaw.isothermal(1.0), PressureLaw.isothermal(2.5), PressureLaw.polytropic(1.0, 5 / 3)])


def test_mu_quiescent():
    w = wave_speed_mu((1, 0, 0), (1, 0, 0), T1)
    assert w.mu == 1.0


def test_mu_colliding_streams():
    w = wave_speed_mu((1, 1, 0), (1, -1, 0), T1)
    assert (w.nu_plus, w.nu_minus, w.mu) == (1.0, -1.0, 1.0)


@given(state, state, laws)
def test_mu_mirror_symmetry(left, right, law):
    a = wave_speed_mu(left, right, law)
    mirror = lambda s: (s[0], -s[1], s[2])
    b = wave_speed_mu(mirror(right), mirror(left), law)
    assert b.nu_plus == pytest.approx(-a.nu_minus, abs=1e-12)
    assert b.nu_minus == pytest.approx(-a.nu_plus, abs=1e-12)
    assert b.mu == pytest.approx(a.mu, abs=1e-12)


@given(state, state, st.floats(-3, 3), laws)
def test_mu_galilean_shift(left, right, s, law):
    shift = lambda st_: (st_[0], st_[1] + s * st_[0], st_[2])
    a = wave_speed_mu(left, right, law)
    b = wave_speed_mu(shift(left), shift(right), law)
    assert b.nu_plus == pytest.approx(a.nu_plus + s, abs=1e-9)
    assert b.nu_minus == pytest.approx(a.nu_minus + s, abs=1e-9)
    assert b.mu == pytest.approx(max(abs(a.nu_plus + s), abs(a.nu_minus + s)), abs=1e-9)


def test_mu_rejects_bad_input():
    with pytest.raises(ValueError):
        wave_speed_mu((np.nan, 0, 0), (1, 0, 0), T1)
    with pytest.raises(ValueError):
        wave_speed_mu((0.0, 0, 0), (1, 0, 0), T1)


def test_llf_hand_example():
    f = llf_flux_onefluid((1, 1, 0), (1, -1, 0), 1.0, T1)
    assert f.as_tuple() == (0.0, 3.0, 0.0)


def test_llf_quiescent():
    assert llf_flux_onefluid((1, 0, 0), (1, 0, 0), 1.0, T1).as_tuple() == (0.0, 1.0, 0.0)


@given(state, laws, st.floats(0, 10))
def test_llf_consistency(u, law, mu):
    f = llf_flux_onefluid(u, u, mu, law)
    exact = analytic_flux(u, law)
    assert f.f_n == pytest.approx(exact[0], rel=1e-14, abs=1e-14)
    assert f.f_ux == pytest.approx(exact[1], rel=1e-14, abs=1e-14)
    assert f.f_uy == pytest.approx(exact[2], rel=1e-14, abs=1e-14)


@given(state, state, laws)
def test_llf_mirror_symmetry(left, right, law):
    mu = wave_speed_mu(left, right, law).mu
    a = llf_flux_onefluid(left, right, mu, law)
    mirror = lambda s: (s[0], -s[1], s[2])
    b = llf_flux_onefluid(mirror(right), mirror(left), mu, law)
    tol = 1e-10 * (1 + abs(a.f_ux))
    assert b.f_n == pytest.approx(-a.f_n, abs=tol)
    assert b.f_ux == pytest.approx(a.f_ux, abs=tol)
    assert b.f_uy == pytest.approx(-a.f_uy, abs=tol)


def test_electron_flux_examples():
    f = llf_flux_twofluid(ELECTRON, (1, 0, 0), (1, 0, 0), 1.0, T1, 1e-4)
    assert f.as_tuple() == (0.0, 1.0, 0.0)
    f = llf_flux_twofluid(ELECTRON, (1, 1, 0), (1, -1, 0), 1.0, T1, 1e-4)
    assert f.f_ux == pytest.approx(1.0001 + 1.0, rel=1e-15)


@given(state, state, laws)
def test_electron_flux_unit_mass_ratio(left, right, law):
    mu = wave_speed_mu(left, right, law).mu
    a = llf_flux_twofluid(ELECTRON, left, right, mu, law, 1.0).as_tuple()
    b = llf_flux_onefluid(left, right, mu, law).as_tuple()
    c = llf_flux_twofluid(ION, left, right, mu, law, 1e-4).as_tuple()
    assert a == b == c


def test_twofluid_species_checked():
    with pytest.raises(ValueError):
        llf_flux_twofluid("positron", (1, 0, 0), (1, 0, 0), 1.0, T1, 1.0)
    with pytest.raises(ValueError):
        implicit_mass_flux_twofluid("positron", 0, 0, 1, 1, 0, 0, 0, 0, 0, 1.0, 1.0)


def _implicit_args(seed):
    r = np.random.default_rng(seed).normal(size=8)
    return dict(f_n=r[0], ex_new=r[1], n_left=1 + abs(r[2]), n_right=1 + abs(r[3]), fux_far_left=r[4],
                fux_far_right=r[5], qy_left=r[6], qy_right=r[7], bz=0.4)


def test_implicit_flux_zero_step_is_explicit():
    a = _implicit_args(1)
    assert implicit_mass_flux_onefluid(**a, delta=0.0, h=0.1) == a["f_n"]
    for sp in (ION, ELECTRON):
        assert implicit_mass_flux_twofluid(sp, **a, delta=0.0, h=0.1, eps2=1e-4) == a["f_n"]


def test_implicit_flux_quiescent_is_zero():
    assert implicit_mass_flux_onefluid(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.01, 0.1) == 0.0


def test_implicit_flux_hand_cases():
    # four cells n = (1, 2, 1, 3), qy = (0, 1, 2, 0), interface between cells 1 and 2
    # fux at the interfaces left and right of that pair: 0.5 and 2.5, Ex_new = 0.2, Bz = 0.1
    d, h = 0.01, 0.1
    val = implicit_mass_flux_onefluid(0.3, 0.2, 2.0, 1.0, 0.5, 2.5, 1.0, 2.0, 0.1, d, h)
    expected = 0.3 - 0.005 * 3.0 * 0.2 - 0.05 * 2.0 - 0.005 * 3.0 * 0.1
    assert val == pytest.approx(expected, rel=1e-14)
    ion = implicit_mass_flux_twofluid(ION, 0.3, 0.2, 2.0, 1.0, 0.5, 2.5, 1.0, 2.0, 0.1, d, h)
    assert ion == pytest.approx(0.3 + 0.003 - 0.1 + 0.0015, rel=1e-14)
    ele = implicit_mass_flux_twofluid(ELECTRON, 0.3, 0.2, 2.0, 1.0, 0.5, 2.5, 1.0, 2.0, 0.1, d, h, eps2=1e-4)
    s = 0.005 / 1e-4
    assert ele == pytest.approx(0.3 - s * 3 * 0.2 - s / h * 2.0 - s * 3 * 0.1, rel=1e-14)
    one = implicit_mass_flux_twofluid(ELECTRON, 0.3, 0.2, 2.0, 1.0, 0.5, 2.5, 1.0, 2.0, 0.1, d, h, eps2=1.0)
    assert one == pytest.approx(val, rel=1e-14)


def test_cfl_examples():
    assert cfl_timestep([1.0, 2.0], 0.01, 0.5, 1.0, "ap") == pytest.approx(2.5e-3)
    assert cfl_timestep([1.0, 2.0], 0.01, 0.5, 1e-2, "classical") == pytest.approx(5e-5)
    with pytest.raises(ValueError):
        cfl_timestep([1.0], 0.01, 0.5, 0.0, "classical")
    with pytest.raises(ValueError):
        cfl_timestep([1.0], 0.01, 0.5, 1.0, "implicit")


def test_reference_pos_step_is_tiny_in_seconds():
    from eulermaxwell.model import ELECTRON_MASS, compute_scaling
    s = compute_scaling(0.1, 1e16, 5.0, ELECTRON_MASS)
    h = 2.0 / 10_000
    d = cfl_timestep([1.0], h, 0.5, s.lam, "classical") * s.t0
    assert 1e-15 < d < 1e-13


def test_padded_fluxes_match_pointwise():
    rng = np.random.default_rng(3)
    n = 0.5 + rng.random(9)
    qx, qy = rng.normal(size=9), rng.normal(size=9)
    fn, fux, fuy, mu = padded_fluxes(n, qx, qy, T1)
    for j in range(8):
        L, R = (n[j], qx[j], qy[j]), (n[j + 1], qx[j + 1], qy[j + 1])
        m = wave_speed_mu(L, R, T1).mu
        f = llf_flux_onefluid(L, R, m, T1)
        assert mu[j] == pytest.approx(m, rel=1e-14)
        assert (fn[j], fux[j], fuy[j]) == pytest.approx(f.as_tuple(), rel=1e-13, abs=1e-14)


def test_padded_fluxes_electron_viscosity_scale():
    n = np.array([1.0, 1.0, 1.0])
    qx = np.array([1.0, 0.0, -1.0])
    qy = np.zeros(3)
    fn, fux, _, mu = padded_fluxes(n, qx, qy, T1, inertia=1e-4, mom_visc_scale=1e-4)
    L, R = (1.0, 1.0, 0.0), (1.0, 0.0, 0.0)
    m = wave_speed_mu(L, R, T1, inertia=1e-4).mu
    f = llf_flux_twofluid(ELECTRON, L, R, m, T1, 1e-4, momentum_viscosity=1e-4 * m)
    assert (fn[0], fux[0]) == pytest.approx((f.f_n, f.f_ux), rel=1e-14)


@given(st.lists(st.tuples(dens, vel, vel), min_size=3, max_size=12), laws, st.sampled_from([1.0, 1e-4]))
def test_compiled_kernel_matches_reference(cells, law, inertia):
    arr = np.array(cells)
    n, qx, qy = arr[:, 0], arr[:, 0] * arr[:, 1], arr[:, 0] * arr[:, 2]
    k = law.kernel_params()
    a = kernels.llf_fluxes(n, qx, qy, *k, inertia, inertia)
    b = _kernels_py.llf_fluxes(n, qx, qy, *k, inertia, inertia)
    for x, y in zip(a, b):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-13)
