import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalegauge.errors import PathOutOfBounds, ZeroCoupling
from scalegauge.gauge_actions import (
    GAMMA,
    Couplings,
    FieldStrength,
    GaugeTransform,
    a_mass_change,
    apply_gauge_scalar,
    b_mass_violation,
    check_covariance,
    covariance_residuals,
    dirac_density,
    dirac_terms,
    field_strength,
    klein_gordon_density,
    metric,
    qed_density,
    transform_fields,
    u1_redundancy_check,
    yang_mills_density,
)
from scalegauge.generators import generate_fields, make_rng, smooth_phase, smooth_scalar, smooth_spinor
from scalegauge.lattice_gauge import GaugeFields, Lattice

LAT = Lattice((4, 4, 4, 4), 0.1)
C = Couplings(g_R=0.5, g_I=1.3, m=0.7, lambda_A=0.4)


@pytest.fixture(scope="module")
def setup():
    rng = make_rng(21)
    gf = generate_fields("random_smooth", LAT, 21).fields
    return gf, smooth_phase(LAT, rng), smooth_scalar(LAT, rng), smooth_spinor(LAT, rng)


def test_gamma_matrices():
    eta = metric(4)
    for mu, nu in itertools.product(range(4), repeat=2):
        anti = GAMMA[mu] @ GAMMA[nu] + GAMMA[nu] @ GAMMA[mu]
        assert np.array_equal(anti, 2 * eta[mu, nu] * np.eye(4))


# --- phase transformations ------------------------------------------------


def test_phase_transform_of_matter(setup):
    _, phi, psi, _ = setup
    assert np.array_equal(apply_gauge_scalar(psi, GaugeTransform(LAT, np.zeros(LAT.dims))), psi)
    const = apply_gauge_scalar(psi, GaugeTransform(LAT, np.full(LAT.dims, 0.9)))
    assert np.allclose(np.abs(const) ** 2, np.abs(psi) ** 2, rtol=1e-15, atol=0)
    rot = apply_gauge_scalar(psi, GaugeTransform(LAT, phi))
    assert np.max(np.abs(np.abs(rot) - np.abs(psi))) <= 1e-15


def test_field_transformation_law(setup):
    gf, phi, _, _ = setup
    same = transform_fields(gf, GaugeTransform(LAT, np.full(LAT.dims, 2.5)), C)
    assert np.array_equal(same.A, gf.A) and np.array_equal(same.B, gf.B)

    k = 0.6
    lin = GaugeTransform(LAT, k * LAT.coords()[..., 1])
    out = transform_fields(gf, lin, Couplings(g_I=1.0))
    assert np.allclose(out.B[:, :-1, :, :, 1], gf.B[:, :-1, :, :, 1] - k, rtol=0, atol=1e-12)
    assert np.array_equal(out.B[..., 0], gf.B[..., 0])

    assert np.array_equal(transform_fields(gf, GaugeTransform(LAT, phi), C).A, gf.A)
    with pytest.raises(ZeroCoupling):
        transform_fields(gf, lin, Couplings(g_I=0.0))


def test_covariance(setup):
    gf, phi, psi, _ = setup
    zero = GaugeTransform(LAT, np.zeros(LAT.dims))
    assert check_covariance(psi, gf, zero, C, (1, 1, 1, 1), 2) == 0
    const = GaugeTransform(LAT, np.full(LAT.dims, -1.1))
    assert check_covariance(psi, gf, const, C, (0, 2, 1, 1), 0, "first_order") <= 1e-13
    res = covariance_residuals(psi, gf, GaugeTransform(LAT, phi), C, "exact")
    assert np.nanmax(res) <= 1e-12
    assert np.isnan(res[-1, ..., 0]).all()


def test_first_order_covariance_is_approximate(setup):
    gf, phi, psi, _ = setup
    res = covariance_residuals(psi, gf, GaugeTransform(LAT, phi), C, "first_order")
    assert np.nanmax(res) > 1e-6


# --- field strength ---------------------------------------------------------


def test_field_strength_examples():
    lat = Lattice((4, 4, 4), 0.2)
    shape = lat.dims + (3,)
    const = GaugeFields(lat, np.zeros(shape), np.full(shape, 0.3))
    assert np.nanmax(np.abs(field_strength(const).upper)) == 0

    k = 0.9
    B = np.zeros(shape)
    B[..., 1] = k * lat.coords()[..., 2]
    G = field_strength(GaugeFields(lat, np.zeros(shape), B))
    assert np.allclose(G.component(1, 2)[:-1, :-1, :-1], -k, rtol=0, atol=1e-12)
    assert np.allclose(G.component(2, 1)[:-1, :-1, :-1], k, rtol=0, atol=1e-12)

    pot = generate_fields("potential", lat, 8).fields
    assert np.nanmax(np.abs(field_strength(pot).upper)) <= 1e-12


def test_field_strength_antisymmetric(setup):
    G = field_strength(setup[0])
    for mu, nu in itertools.product(range(4), repeat=2):
        assert np.array_equal(G.component(mu, nu), -G.component(nu, mu), equal_nan=True)


def test_yang_mills_density():
    lat = Lattice((3, 3, 3), 0.1)
    zero = FieldStrength(lat, np.zeros(lat.dims + (3,)))
    assert yang_mills_density(zero, (1, 1, 1)) == 0
    k = 1.7
    up = np.zeros(lat.dims + (3,))
    up[..., 2] = k  # pair (1, 2)
    assert yang_mills_density(FieldStrength(lat, up), (0, 0, 0)) == pytest.approx(k * k / 2, rel=1e-15)
    with pytest.raises(PathOutOfBounds):
        yang_mills_density(zero, (2, 0, 0))
    pot = generate_fields("potential", lat, 2).fields
    assert abs(yang_mills_density(field_strength(pot), (1, 1, 1))) <= 1e-12


# --- Lagrangian densities ---------------------------------------------------


def test_klein_gordon_simple():
    lat = Lattice((3, 3), 0.1)
    ones = np.ones(lat.dims)
    zero = GaugeFields.zeros(lat)
    assert klein_gordon_density(ones, zero, Couplings(m=0), (0, 0)) == 0
    assert klein_gordon_density(ones, zero, Couplings(m=1), (0, 0)) == -1


def test_klein_gordon_plane_wave_converges():
    k = np.array([0.0, 1.3])
    m = 0.4
    want = -(k[0] ** 2 - k[1] ** 2) - m * m
    errs = []
    for dx in (0.1, 0.05, 0.025):
        lat = Lattice((3, 3), dx)
        psi = np.exp(1j * lat.coords() @ k)
        got = klein_gordon_density(psi, GaugeFields.zeros(lat), Couplings(m=m), (0, 0))
        errs.append(abs(got - want))
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 0.9, (errs, orders)


def test_dirac_examples():
    lat = Lattice((3, 3, 3, 3), 0.1)
    zero = GaugeFields.zeros(lat)
    c = Couplings(m=1.5)
    pot = generate_fields("potential", lat, 3).fields
    B_pot = GaugeFields(lat, np.zeros_like(pot.A), pot.B)
    assert abs(dirac_density(np.zeros(lat.dims + (4,)), B_pot, c, (1, 1, 1, 1))) <= 1e-12

    u = np.array([1 + 1j, 0.5, -2j, 0.3])
    psi = np.broadcast_to(u, lat.dims + (4,))
    ubar_u = (u.conj() @ GAMMA[0] @ u).real
    assert dirac_density(psi, zero, c, (0, 0, 0, 0)) == pytest.approx(-1.5 * ubar_u, abs=1e-14)


def test_dirac_reduces_to_qed_without_A(setup):
    gf, _, _, spinor = setup
    B_only = GaugeFields(LAT, np.zeros_like(gf.A), gf.B)
    c = Couplings(g_R=0.5, g_I=1.3, m=0.7, lambda_A=0.0)
    for site in [(0, 0, 0, 0), (1, 2, 0, 1), (2, 2, 2, 2)]:
        assert abs(dirac_density(spinor, B_only, c, site) - qed_density(spinor, B_only, c, site)) <= 1e-12


def test_dirac_invariance(setup):
    gf, phi, _, spinor = setup
    g = GaugeTransform(LAT, phi)
    gf2 = transform_fields(gf, g, C)
    spinor2 = apply_gauge_scalar(spinor, g)
    for site in LAT.interior():
        a, b = dirac_terms(spinor, gf, C, site), dirac_terms(spinor2, gf2, C, site)
        assert abs((a["kinetic"] + a["interaction"]) - (b["kinetic"] + b["interaction"])) <= 1e-10
        assert abs(a["mass"] - b["mass"]) <= 1e-12
        assert a["a_mass"] == b["a_mass"]


def test_klein_gordon_invariance(setup):
    gf, phi, psi, _ = setup
    g = GaugeTransform(LAT, phi)
    gf2, psi2 = transform_fields(gf, g, C), apply_gauge_scalar(psi, g)
    for site in LAT.interior(depth=2):
        assert abs(klein_gordon_density(psi, gf, C, site) - klein_gordon_density(psi2, gf2, C, site)) <= 1e-10


# --- mass terms and the U(1) redundancy -------------------------------------


def test_mass_terms(setup):
    gf, phi, _, _ = setup
    const = GaugeTransform(LAT, np.full(LAT.dims, 0.3))
    before, after = b_mass_violation(gf, const, C)
    assert before == after

    k, g_I = 0.5, 2.0
    lin = GaugeTransform(LAT, k * LAT.coords()[..., 1])
    before, after = b_mass_violation(GaugeFields.zeros(LAT), lin, Couplings(g_I=g_I))
    assert before == 0
    # 3^4 sites with every index short of the far face; axis 1 is spatial
    assert after == pytest.approx(-81 * (k / g_I) ** 2, rel=1e-12)

    assert a_mass_change(gf, GaugeTransform(LAT, phi), C) == 0


def test_u1_redundancy(setup):
    gf, _, psi, _ = setup
    assert u1_redundancy_check(gf, np.zeros(LAT.dims + (4,)), psi, C, (1, 1, 1, 1), 0) == 0
    rng = make_rng(4)
    rough = generate_fields("random_rough", LAT, 4).fields
    gamma = rng.uniform(-1, 1, size=LAT.dims + (4,))
    for mode in ("first_order", "exact"):
        for site in LAT.interior():
            for mu in range(4):
                assert u1_redundancy_check(rough, gamma, psi, C, site, mu, mode) <= 1e-13


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 3.0), st.floats(-2, 2))
def test_exact_covariance_property(seed, g_I, g_R):
    lat = Lattice((3, 3, 3), 0.2)
    rng = make_rng(seed)
    gf = generate_fields("random_rough", lat, seed).fields
    phi = rng.uniform(-math.pi, math.pi, size=lat.dims)
    psi = rng.normal(size=lat.dims) + 1j * rng.normal(size=lat.dims)
    res = covariance_residuals(psi, gf, GaugeTransform(lat, phi), Couplings(g_R, g_I), "exact")
    assert np.nanmax(res) <= 1e-12 * max(1.0, np.nanmax(np.abs(psi)) / 0.2)
