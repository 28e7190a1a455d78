import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalegauge.errors import DimensionMismatch, ZeroScale
from scalegauge.scaled_hilbert import (
    BasisMap,
    HVector,
    ScaledHilbertRep,
    check_hilbert_equivalences,
    local_rep_vector,
    random_unitary,
    scaled_add_vec,
    scaled_inner,
    scaled_smul,
    tuple_equiv_check,
)


def rep(c, n=2, V=None, site="x"):
    return ScaledHilbertRep(c, V or BasisMap.identity(n), site)


def test_local_rep_identity_cases():
    psi = HVector([1 + 1j, -2], "y")
    assert np.array_equal(local_rep_vector(psi, rep(1)).components, psi.components)
    assert np.array_equal(local_rep_vector(HVector([1, 0], "y"), rep(2)).components, [2, 0])
    assert local_rep_vector(psi, rep(1)).site == "x"


def test_local_rep_matches_matvec():
    rng = np.random.default_rng(5)
    V = random_unitary(3, rng)
    psi = HVector(rng.normal(size=3) + 1j * rng.normal(size=3), "y")
    got = local_rep_vector(psi, rep(1j, 3, V)).components
    want = 1j * np.array([sum(V.matrix[i, j] * psi.components[j] for j in range(3)) for i in range(3)])
    assert np.allclose(got, want, rtol=0, atol=1e-14)


def test_smul_identity_scalar():
    r = rep(3 - 1j)
    psi = HVector([0.2, 1j], "x")
    assert np.allclose(scaled_smul(3 - 1j, psi, r).components, psi.components, rtol=0, atol=1e-15)
    assert np.array_equal(scaled_smul(2, psi, rep(1)).components, 2 * psi.components)


def test_smul_chain_example():
    r = rep(3)
    v = local_rep_vector(HVector([1, 1], "y"), r)
    got = scaled_smul(2 * 3, v, r)
    assert np.allclose(got.components, local_rep_vector(HVector([2, 2], "y"), r).components, rtol=0, atol=1e-14)


def test_inner_examples():
    rng = np.random.default_rng(9)
    V = random_unitary(4, rng)
    r = rep(2, 4, V)
    e1 = local_rep_vector(HVector([1, 0, 0, 0], "y"), r)
    assert abs(scaled_inner(e1, e1, r) - 2) <= 1e-14

    phi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    c = 1 + 1j
    r = rep(c, 4, V)
    got = scaled_inner(local_rep_vector(HVector(phi), r), local_rep_vector(HVector(psi), r), r)
    assert abs(got - c * np.vdot(phi, psi)) <= 1e-12 * abs(c * np.vdot(phi, psi))

    plain = rep(1, 2)
    a, b = HVector([1j, 2]), HVector([3, -1j])
    assert scaled_inner(a, b, plain) == np.vdot(a.components, b.components)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        local_rep_vector(HVector([1, 2, 3]), rep(1, 2))
    with pytest.raises(DimensionMismatch):
        scaled_add_vec(HVector([1, 2]), HVector([1]), rep(1, 2))
    with pytest.raises(ZeroScale):
        ScaledHilbertRep(0, BasisMap.identity(2))


def test_basis_map_validation():
    with pytest.raises(ValueError):
        BasisMap(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        BasisMap(np.diag([1j, 1]), special=True)
    with pytest.raises(DimensionMismatch):
        BasisMap(np.ones((2, 3)))
    u = random_unitary(3, np.random.default_rng(0), special=True)
    assert abs(np.linalg.det(u.matrix) - 1) <= 1e-12


def test_tuple_equivalence():
    assert tuple_equiv_check(rep(1, 1)).passed
    assert tuple_equiv_check(rep(2, 4), samples=200).passed
    skipped = tuple_equiv_check(rep(2, 2, random_unitary(2, np.random.default_rng(1))))
    assert skipped.status == "skipped" and "identity" in skipped.detail


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_equivalence_chains(n):
    res = check_hilbert_equivalences(n, samples=100, seed=n)
    assert max(res.values()) <= 1e-12, res


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(0.1, 10), st.floats(-3.1, 3.1))
def test_norm_square_property(n, seed, r, theta):
    rng = np.random.default_rng(seed)
    c = r * np.exp(1j * theta)
    V = random_unitary(n, rng)
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    rr = rep(c, n, V)
    v = local_rep_vector(HVector(psi), rr)
    got = scaled_inner(v, v, rr)
    want = c * np.vdot(psi, psi).real
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))
