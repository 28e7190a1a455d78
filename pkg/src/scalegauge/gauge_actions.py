"""Local phase transformations, the A/B transformation law, field strength,
and the Klein-Gordon and Dirac Lagrangian densities on the lattice.

Axis 0 is time; the metric is diag(+, -, -, -) truncated to the lattice
dimension.  Gauge checks default to the exact-link covariant derivative, for
which covariance holds identically on the lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PathOutOfBounds, ShapeMismatch, ZeroCoupling
from .lattice_gauge import (
    GaugeFields,
    Lattice,
    covariant_derivative_field,
    covariant_derivative_scalar,
    forward_difference,
)

# Dirac basis
_I2 = np.eye(2)
_Z2 = np.zeros((2, 2))
_SIGMA = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
GAMMA = np.array(
    [np.block([[_I2, _Z2], [_Z2, -_I2]]).astype(complex)]
    + [np.block([[_Z2, s], [-s, _Z2]]) for s in _SIGMA]
)
GAMMA.setflags(write=False)


def metric(d: int = 4) -> np.ndarray:
    return np.diag([1.0] + [-1.0] * (d - 1))


def check_clifford() -> None:
    """{gamma^mu, gamma^nu} = 2 eta^{mu nu} I for all ten pairs, exactly;
    gamma^0 hermitian, gamma^k antihermitian."""
    eta = metric(4)
    for mu, nu in itertools.combinations_with_replacement(range(4), 2):
        anti = GAMMA[mu] @ GAMMA[nu] + GAMMA[nu] @ GAMMA[mu]
        if not np.array_equal(anti, 2 * eta[mu, nu] * np.eye(4)):
            raise AssertionError(f"Clifford relation fails for ({mu}, {nu})")
    if not np.array_equal(GAMMA[0], GAMMA[0].conj().T):
        raise AssertionError("gamma^0 is not hermitian")
    for k in (1, 2, 3):
        if not np.array_equal(GAMMA[k], -GAMMA[k].conj().T):
            raise AssertionError(f"gamma^{k} is not antihermitian")


check_clifford()


@dataclass(frozen=True)
class Couplings:
    g_R: float = 1.0
    g_I: float = 1.0
    m: float = 0.0
    lambda_A: float = 0.0


@dataclass(frozen=True)
class GaugeTransform:
    lattice: Lattice
    phi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.lattice.check_site_data(self.phi, what="phi"), dtype=float)
        if phi.shape != self.lattice.dims:
            raise ShapeMismatch(f"phase field has shape {phi.shape}, expected {self.lattice.dims}")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @property
    def lam(self) -> np.ndarray:
        """Lambda(x) = exp(i phi(x)); unit modulus by construction."""
        return np.exp(1j * self.phi)

    def lambda_of(self, site: Sequence[int]) -> complex:
        return complex(np.exp(1j * self.phi[tuple(site)]))


def apply_gauge_scalar(psi, g: GaugeTransform) -> np.ndarray:
    """psi'(x) = Lambda(x) psi(x); trailing component axes are rotated together."""
    psi = np.asarray(g.lattice.check_site_data(psi, what="psi"), dtype=complex)
    lam = g.lam.reshape(g.lattice.dims + (1,) * (psi.ndim - g.lattice.ndim))
    return lam * psi


def transform_fields(gf: GaugeFields, g: GaugeTransform, c: Couplings) -> GaugeFields:
    """A' = A; B'_mu = B_mu - d'_mu phi / g_I with the forward difference.

    On the far face of each axis there is no forward difference and B is left
    unchanged there; those components never enter a covariant derivative.
    """
    if c.g_I == 0:
        raise ZeroCoupling("g_I must be nonzero to transform B")
    lat = gf.lattice
    B = np.array(gf.B)
    for mu in range(lat.ndim):
        d = forward_difference(g.phi, lat, mu)
        ok = np.isfinite(d)
        B[..., mu][ok] = B[..., mu][ok] - d[ok] / c.g_I
    return GaugeFields(lat, gf.A, B)


def check_covariance(
    psi, gf: GaugeFields, g: GaugeTransform, c: Couplings, site: Sequence[int], axis: int, mode: str = "exact"
) -> float:
    """|D'_mu(Lambda psi) - Lambda(x) D_mu psi| at one site."""
    gf2 = transform_fields(gf, g, c)
    psi2 = apply_gauge_scalar(psi, g)
    lhs = covariant_derivative_scalar(psi2, gf2, c.g_R, c.g_I, site, axis, mode)
    rhs = g.lambda_of(site) * covariant_derivative_scalar(psi, gf, c.g_R, c.g_I, site, axis, mode)
    return abs(lhs - rhs)


def covariance_residuals(psi, gf: GaugeFields, g: GaugeTransform, c: Couplings, mode: str = "exact") -> np.ndarray:
    """Covariance residual at every (site, axis), shape dims + (d,); NaN on far faces."""
    lat = gf.lattice
    gf2 = transform_fields(gf, g, c)
    psi2 = apply_gauge_scalar(psi, g)
    out = np.empty(lat.dims + (lat.ndim,))
    for mu in range(lat.ndim):
        lhs = covariant_derivative_field(psi2, gf2, c.g_R, c.g_I, mu, mode)
        rhs = g.lam * covariant_derivative_field(psi, gf, c.g_R, c.g_I, mu, mode)
        out[..., mu] = np.abs(lhs - rhs)
    return out


# --------------------------------------------------------------------------
# Field strength


@dataclass(frozen=True)
class FieldStrength:
    """Upper-triangle storage: ``upper[..., k]`` holds G_{mu nu} for the k-th
    pair mu < nu; the lower triangle is implied by antisymmetry."""

    lattice: Lattice
    upper: np.ndarray

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.lattice.ndim), 2))

    def component(self, mu: int, nu: int) -> np.ndarray:
        if mu == nu:
            return np.zeros(self.lattice.dims)
        if mu < nu:
            return self.upper[..., self.pairs.index((mu, nu))]
        return -self.upper[..., self.pairs.index((nu, mu))]

    def at(self, site: Sequence[int], mu: int, nu: int) -> float:
        return float(self.component(mu, nu)[tuple(site)])


def field_strength(gf: GaugeFields, which: str = "B") -> FieldStrength:
    """G_{mu nu} = d'_mu F_nu - d'_nu F_mu with forward differences
    (NaN where a forward neighbor is missing)."""
    if which not in ("A", "B"):
        raise ValueError("which must be 'A' or 'B'")
    F = gf.A if which == "A" else gf.B
    lat = gf.lattice
    pairs = list(itertools.combinations(range(lat.ndim), 2))
    upper = np.empty(lat.dims + (len(pairs),))
    for k, (mu, nu) in enumerate(pairs):
        upper[..., k] = forward_difference(F[..., nu], lat, mu) - forward_difference(F[..., mu], lat, nu)
    upper.setflags(write=False)
    return FieldStrength(lat, upper)


def _require_interior(lat: Lattice, site, depth: int = 1):
    if not lat.is_interior(site, depth):
        raise PathOutOfBounds(f"site {tuple(site)} needs {depth} forward neighbor(s) along every axis")


def yang_mills_density(G: FieldStrength, site: Sequence[int]) -> float:
    """1/4 G_{mu nu} G^{mu nu}, indices raised with the metric."""
    lat = G.lattice
    _require_interior(lat, site)
    eta = np.diag(metric(lat.ndim))
    total = 0.0
    for mu, nu in G.pairs:
        g = G.at(site, mu, nu)
        # (mu, nu) and (nu, mu) contribute equally
        total += 2 * eta[mu] * eta[nu] * g * g
    return 0.25 * total


# --------------------------------------------------------------------------
# Lagrangian densities


def klein_gordon_density(psi, gf: GaugeFields, c: Couplings, site: Sequence[int], mode: str = "exact") -> complex:
    """psi^dag (D^mu D_mu psi) - m^2 psi^dag psi for a complex scalar field."""
    lat = gf.lattice
    _require_interior(lat, site, depth=2)
    psi = np.asarray(lat.check_site_data(psi, what="psi"), dtype=complex)
    x = tuple(site)
    eta = np.diag(metric(lat.ndim))
    box = 0j
    for mu in range(lat.ndim):
        d1 = covariant_derivative_field(psi, gf, c.g_R, c.g_I, mu, mode)
        d2 = covariant_derivative_scalar(d1, gf, c.g_R, c.g_I, x, mu, mode)
        box += eta[mu] * d2
    p = complex(psi[x])
    return p.conjugate() * box - c.m**2 * (p.conjugate() * p)


def _spinor(psi, lat: Lattice) -> np.ndarray:
    psi = np.asarray(lat.check_site_data(psi, (4,), what="spinor"), dtype=complex)
    if psi.shape != lat.dims + (4,):
        raise ShapeMismatch(f"spinor field has shape {psi.shape}, expected {lat.dims + (4,)}")
    return psi


def dirac_terms(psi, gf: GaugeFields, c: Couplings, site: Sequence[int], mode: str = "exact") -> dict[str, complex]:
    """Separate pieces of the extended Dirac density at one site.

    kinetic:     psibar i gamma^mu d'_mu psi
    interaction: psibar i gamma^mu (D_mu - d'_mu) psi
    mass:        -m psibar psi
    a_mass:      -1/2 lambda^2 A^mu A_mu
    yang_mills:  -1/4 G_{mu nu} G^{mu nu} (G built from B)
    """
    lat = gf.lattice
    _require_interior(lat, site)
    psi = _spinor(psi, lat)
    x = tuple(site)
    d = lat.ndim
    eta = np.diag(metric(d))
    p = psi[x]
    pbar = p.conj() @ GAMMA[0]
    kin = 0j
    inter = 0j
    for mu in range(d):
        y = lat.shift(x, mu)
        dpsi = (psi[y] - p) / lat.spacing[mu]
        Dpsi = covariant_derivative_field(psi, gf, c.g_R, c.g_I, mu, mode)[x]
        kin += complex(pbar @ (1j * GAMMA[mu]) @ dpsi)
        inter += complex(pbar @ (1j * GAMMA[mu]) @ (Dpsi - dpsi))
    A = gf.A[x]
    return {
        "kinetic": kin,
        "interaction": inter,
        "mass": -c.m * complex(pbar @ p),
        "a_mass": complex(-0.5 * c.lambda_A**2 * float(np.sum(eta * A * A))),
        "yang_mills": complex(-yang_mills_density(field_strength(gf, "B"), x)),
    }


def dirac_density(psi, gf: GaugeFields, c: Couplings, site: Sequence[int], mode: str = "exact") -> complex:
    return sum(dirac_terms(psi, gf, c, site, mode).values())


def qed_density(psi, gf: GaugeFields, c: Couplings, site: Sequence[int], mode: str = "exact") -> complex:
    """Standard QED density with photon field B (no A anywhere), built
    independently of :func:`dirac_terms` for comparison."""
    lat = gf.lattice
    _require_interior(lat, site)
    psi = _spinor(psi, lat)
    x = tuple(site)
    p = psi[x]
    pbar = p.conj() @ GAMMA[0]
    B_only = GaugeFields(lat, np.zeros_like(gf.A), gf.B)
    total = 0j
    for mu in range(lat.ndim):
        Dpsi = covariant_derivative_field(psi, B_only, 0.0, c.g_I, mu, mode)[x]
        total += complex(pbar @ (1j * GAMMA[mu]) @ Dpsi)
    total -= c.m * complex(pbar @ p)
    total -= yang_mills_density(field_strength(B_only, "B"), x)
    return total


# --------------------------------------------------------------------------
# Mass terms and the U(1) redundancy


def _interior_sum_vv(F: np.ndarray, lat: Lattice) -> float:
    eta = np.diag(metric(lat.ndim))
    region = tuple(slice(None, n - 1) for n in lat.dims)
    return float(np.sum(F[region] ** 2 * eta))


def b_mass_violation(gf: GaugeFields, g: GaugeTransform, c: Couplings) -> tuple[float, float]:
    """Sum over interior sites of B^mu B_mu before and after the transformation."""
    after = transform_fields(gf, g, c)
    lat = gf.lattice
    return _interior_sum_vv(gf.B, lat), _interior_sum_vv(after.B, lat)


def a_mass_change(gf: GaugeFields, g: GaugeTransform, c: Couplings) -> float:
    """Largest per-site change of lambda^2 A^mu A_mu under the transformation."""
    after = transform_fields(gf, g, c)
    eta = np.diag(metric(gf.lattice.ndim))
    before_t = c.lambda_A**2 * np.sum(gf.A**2 * eta, axis=-1)
    after_t = c.lambda_A**2 * np.sum(after.A**2 * eta, axis=-1)
    return float(np.max(np.abs(after_t - before_t)))


def u1_redundancy_check(
    gf: GaugeFields, gamma_field, psi, c: Couplings, site: Sequence[int], axis: int, mode: str = "first_order"
) -> float:
    """|D psi with (B, Gamma) coupled separately - D psi with (B + Gamma, 0)|.

    The separate route adds one i g_I coupling term per field (first-order)
    or multiplies one exponential per field (exact); the combined route goes
    through the ordinary covariant derivative with B + Gamma.
    """
    lat = gf.lattice
    gam = np.asarray(lat.check_site_data(gamma_field, (lat.ndim,), what="Gamma"), dtype=float)
    psi = np.asarray(lat.check_site_data(psi, what="psi"), dtype=complex)
    x = tuple(site)
    y = lat.neighbor(x, axis)
    if y is None:
        raise PathOutOfBounds(f"no forward neighbor of {x} along axis {axis}")
    dx = lat.spacing[axis]
    a, b, gm = gf.A[x + (axis,)], gf.B[x + (axis,)], gam[x + (axis,)]
    py, px = complex(psi[y]), complex(psi[x])
    if mode == "first_order":
        sep = (py - px) / dx + (c.g_R * a) * py + (1j * c.g_I * b) * py + (1j * c.g_I * gm) * py
    elif mode == "exact":
        sep = (np.exp(c.g_R * a * dx) * np.exp(1j * c.g_I * b * dx) * np.exp(1j * c.g_I * gm * dx) * py - px) / dx
    else:
        raise ValueError(f"unknown mode {mode!r}")
    combined = GaugeFields(lat, gf.A, gf.B + gam)
    comb = covariant_derivative_scalar(psi, combined, c.g_R, c.g_I, x, axis, mode)
    return abs(complex(sep) - comb)
