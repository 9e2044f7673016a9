import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulermaxwell.stability import (
    STABILITY_COLUMNS,
    TRIPLES,
    StabilityConfig,
    default_gamma,
    dispersion_modes,
    dispersion_oracle,
    em_polynomial,
    em_polynomial_eval,
    es_polynomial,
    es_polynomial_eval,
    find_stability_ratio,
    growth_profile,
    is_stable,
    limit_root_110,
    max_growth_factor,
    polynomial_roots,
    stability_region_scan,
    write_stability_csv,
)

configs = st.builds(
    StabilityConfig,
    a=st.sampled_from([0, 1]), b=st.sampled_from([0, 1]), c=st.sampled_from([0, 1]),
    lam=st.floats(1e-4, 2.0), delta=st.floats(1e-3, 0.5), h=st.floats(1e-2, 0.5),
    gamma=st.floats(0.0, 1.0), T=st.floats(0.5, 2.0), xi=st.floats(0.0, 10.0),
)


def test_config_validation():
    with pytest.raises(ValueError):
        StabilityConfig(2, 0, 0, 1.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        StabilityConfig(1, 1, 1, 1.0, 0.0, 0.1)
    c = StabilityConfig(1, 0, 1, 1.0, 0.1, 0.2, gamma=0.5)
    assert c.d == 1 and c.beta == pytest.approx(0.1) and c.xi_max == pytest.approx(math.pi / 0.2)
    assert default_gamma(4.0) == 1.0


@settings(max_examples=40)
@given(configs, st.integers(0, 1000))
def test_expansion_matches_product_form(cfg, seed):
    rng = np.random.default_rng(seed)
    q = rng.normal(size=5) + 1j * rng.normal(size=5)
    for coeffs, ev in ((em_polynomial(cfg), em_polynomial_eval), (es_polynomial(cfg), es_polynomial_eval)):
        scale = np.max(np.abs(coeffs)) * np.max(np.abs(q)) ** 3 + 1e-300
        assert np.allclose(np.polyval(coeffs, q), ev(cfg, q), atol=1e-12 * scale, rtol=0)


@pytest.mark.parametrize("a", [0, 1])
def test_zero_wavenumber_factorization(a):
    lam, d = 0.4, 0.07
    cfg = StabilityConfig(a, 1, 0, lam, d, 0.1)
    inner = np.polyadd(lam**2 * np.poly([1.0, 1.0]), d**2 * np.eye(1, a + 2)[0])
    expected = np.polymul(inner, [1.0, -1.0])
    assert np.allclose(em_polynomial(cfg), np.pad(expected, (4 - expected.size, 0)), atol=1e-15)
    assert np.min(np.abs(polynomial_roots(em_polynomial(cfg)).roots - 1)) < 1e-12


def test_a1_zero_wavenumber_modulus():
    lam, d = 0.3, 0.05
    cfg = StabilityConfig(0, 0, 0, lam, d, 0.1)
    target = lam * (lam + 1j * d) / (lam**2 + d**2)
    cfg1 = StabilityConfig(1, 0, 0, lam, d, 0.1)
    roots = polynomial_roots(em_polynomial(cfg1)).roots
    nonunit = roots[np.abs(roots - 1) > 1e-8]
    assert nonunit.size == 2
    assert np.min(np.abs(nonunit - target)) < 1e-12 and np.min(np.abs(nonunit - target.conjugate())) < 1e-12
    assert np.allclose(np.abs(nonunit), lam / math.hypot(lam, d), rtol=1e-12)
    assert len(roots) == 3 and len(polynomial_roots(em_polynomial(cfg)).roots) == 3


def test_es_at_zero_lambda():
    for a in (0, 1):
        cfg = StabilityConfig(a, 1, 1, 0.0, 0.1, 0.1, xi=3.0)
        c = es_polynomial(cfg)
        expected = np.zeros(4)
        expected[3 - (a + 1)] = 0.01
        assert np.allclose(c, expected)
        assert np.allclose(polynomial_roots(c).roots, 0.0)
        assert polynomial_roots(c).degree == a + 1


def test_es_root_grows_as_lambda_vanishes_for_a0():
    # the large root behaves like -delta^2 / lambda^2
    d, xi = 0.1, 2.0
    for lam in (1e-3, 1e-4):
        cfg = StabilityConfig(0, 1, 1, lam, d, 0.1, gamma=0.5, xi=xi)
        r = polynomial_roots(es_polynomial(cfg)).max_modulus
        assert r == pytest.approx(d**2 / lam**2, rel=1e-3)


def test_root_examples():
    r = polynomial_roots(np.poly([1.0, 2.0, 3.0])).roots
    assert np.allclose(np.sort(r.real), [1, 2, 3], atol=1e-12) and np.allclose(r.imag, 0, atol=1e-12)
    r = polynomial_roots([1.0, 0.0, 1.0]).roots
    assert np.allclose(np.sort_complex(r), [-1j, 1j], atol=1e-14)
    assert polynomial_roots([0.0, 0.0, 2.0]).degree == 0
    with pytest.raises(ValueError):
        polynomial_roots([0.0, 0.0])


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_construct_then_solve(true_roots):
    r = np.sort(np.array(true_roots))
    if np.min(np.diff(r)) < 1e-2:
        return
    got = np.sort(polynomial_roots(np.poly(r)).roots.real)
    assert np.allclose(got, r, atol=1e-10)


@settings(max_examples=200)
@given(configs)
def test_root_residual_and_conjugate_symmetry(cfg):
    for coeffs in (em_polynomial(cfg), es_polynomial(cfg)):
        rs = polynomial_roots(coeffs)
        c = np.trim_zeros(coeffs, "f")
        assert rs.degree == c.size - 1
        # backward-error form: a root of size r can only be pinned to about eps * r
        scale = np.max(np.abs(c)) * np.maximum(1.0, np.abs(rs.roots)) ** (c.size - 1)
        assert np.all(np.abs(np.polyval(c, rs.roots)) <= 1e-10 * scale)
        assert np.allclose(np.sort_complex(rs.roots), np.sort_complex(rs.roots.conjugate()), atol=1e-7)


def test_ap_triple_stable_under_small_step():
    assert max_growth_factor((1, 1, 1), 1.0, 0.01, 0.1, gamma=0.5) <= 1 + 1e-10


def test_classical_triple_unstable_at_small_lambda():
    g = max_growth_factor((0, 0, 1), 1e-3, 1e-2, 1e-2, gamma=0.5)
    assert g > 1e4
    # growth like delta^2 (1 + xi^2) / lambda^2 at the top of the range
    xi = math.pi / 1e-2
    assert g == pytest.approx(1e-4 * (1 + xi**2) / 1e-6, rel=0.1)


def test_110_limit_root():
    lo, hi = sorted(limit_root_110(2.0, 0.0, 0.01))
    assert (lo, hi) == (pytest.approx(-4.0), pytest.approx(1.0))
    cfg = StabilityConfig(1, 1, 0, 1e-6, 0.01, 1.0, gamma=0.0, xi=2.0)
    roots = polynomial_roots(em_polynomial(cfg)).roots
    assert np.min(np.abs(roots + 4.0)) < 1e-6
    h = 1.0
    xi, prof = growth_profile((1, 1, 0), 1e-6, 0.01, h, 0.0, 1.0, n_xi=2049)
    assert np.any(np.isclose(xi, 2.0, atol=2e-3)) and prof.max() >= 4.0 - 1e-3


def test_growth_profile_needs_two_samples():
    with pytest.raises(ValueError):
        growth_profile((1, 1, 1), 1.0, 0.01, 0.1, 0.5, 1.0, n_xi=1)


def test_scan_rows_and_csv():
    rows = stability_region_scan((1, 1, 1), [1.0, 1e-4], [0.1, 3.0], 0.01, gamma=0.5, n_xi=257)
    assert len(rows) == 4
    assert [r["stable"] for r in rows] == [True, False, True, False]
    buf = io.StringIO()
    write_stability_csv(rows, buf)
    read = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert tuple(read[0].keys()) == STABILITY_COLUMNS
    assert float(read[1]["max_growth"]) == rows[1]["max_growth"]


def test_classical_scan_boundary_tracks_lambda():
    rows = stability_region_scan((0, 0, 1), [1e-2], [0.1 * 1e-2, 10 * 1e-2], 0.01, gamma=0.5, n_xi=257)
    assert rows[0]["stable"] and not rows[1]["stable"]


def test_ap_boundary_lambda_independent():
    g4 = find_stability_ratio((1, 1, 1), 1e-4, 0.01, gamma=0.5, n_xi=513)
    g8 = find_stability_ratio((1, 1, 1), 1e-8, 0.01, gamma=0.5, n_xi=513)
    assert abs(g4 - g8) <= 0.1 * g8
    assert g8 <= 2 / (0.5 * math.pi**2) + 1e-3


def test_find_ratio_edges():
    assert find_stability_ratio((0, 0, 0), 1e-4, 0.01, gamma=0.5, n_xi=65) == 0.0
    assert is_stable(1.0) and not is_stable(1.0 + 1e-6)


@pytest.mark.parametrize("triple", [t for t in TRIPLES if t not in ((1, 1, 1), (0, 0, 0), (1, 0, 0), (0, 1, 1))])
def test_other_triples_blow_up_at_small_lambda(triple):
    assert max_growth_factor(triple, 1e-4, 2.5e-3, 1e-2, gamma=0.5, n_xi=513) > 1.5


def test_dispersion_examples():
    m = dispersion_modes(1.0, 1.0, 0.0)
    assert m.em_plus == pytest.approx(1j) and m.es_minus == pytest.approx(-1j)
    m = dispersion_modes(0.5, 1.0, 1.0)
    assert m.em_plus == pytest.approx(2 * math.sqrt(2) * 1j, rel=1e-14)
    assert m.es_plus == pytest.approx(math.sqrt(5) * 1j, rel=1e-14)
    z = dispersion_modes(0.0, 1.0, 1.0)
    assert math.isinf(z.em_plus.imag)


@given(st.floats(1e-3, 10), st.floats(0, 50))
def test_dispersion_scales_inverse_lambda(lam, xi):
    a = dispersion_modes(lam, 1.3, xi).as_array()
    b = dispersion_modes(2 * lam, 1.3, xi).as_array()
    # at fixed xi the EM mode scales exactly as 1/lambda
    assert a[0] == pytest.approx(2 * b[0], rel=1e-12)


def test_dispersion_matches_ode_eigenvalues():
    rng = np.random.default_rng(7)
    for _ in range(100):
        lam, T = 10 ** rng.uniform(-2, 0.5), rng.uniform(0.2, 3.0)
        xi = rng.normal(size=3) * rng.uniform(0.1, 5)
        eig = dispersion_oracle(lam, T, xi)
        modes = dispersion_modes(lam, T, xi).as_array()
        for s in modes:
            assert np.min(np.abs(eig - s)) <= 1e-10 * abs(s)
