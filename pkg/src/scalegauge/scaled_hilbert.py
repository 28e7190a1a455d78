"""Finite-dimensional scaled Hilbert-space representations.

A neighbor vector psi(y) is represented at x as ``c * V @ psi(y)_x``, where
psi(y)_x is the same component list relabeled to site x (the part of the
transport that has no matrix form is carried purely as a site tag).  Scalar
multiplication divides by ``c`` and the inner product divides by ``conj(c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .errors import DimensionMismatch, ZeroScale
from .scaled_numbers import (
    ScaledStructure,
    element_with_value,
    scaled_add,
    scaled_conj,
    scaled_mul,
    scaled_sub,
)

UNITARY_TOL = 1e-12


def _rel(got, want) -> float:
    return float(np.linalg.norm(np.asarray(got) - np.asarray(want)) / max(1.0, np.linalg.norm(want)))


@dataclass(frozen=True)
class HVector:
    components: np.ndarray
    site: Hashable = None

    def __post_init__(self):
        comps = np.array(self.components, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(comps)):
            raise ValueError("vector components must be finite")
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def relabel(self, site) -> HVector:
        return HVector(self.components, site)


@dataclass(frozen=True)
class BasisMap:
    matrix: np.ndarray
    special: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"basis map must be square, got shape {m.shape}")
        n = m.shape[0]
        if np.max(np.abs(m @ m.conj().T - np.eye(n))) > UNITARY_TOL:
            raise ValueError("basis map is not unitary")
        if self.special and abs(np.linalg.det(m) - 1) > UNITARY_TOL:
            raise ValueError("basis map is not special (det != 1)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n: int) -> BasisMap:
        return cls(np.eye(n), special=True)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim)))


def random_unitary(n: int, rng: np.random.Generator, special: bool = False) -> BasisMap:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    if special:
        q = q / np.linalg.det(q) ** (1.0 / n)
    return BasisMap(q, special=special)


@dataclass(frozen=True)
class ScaledHilbertRep:
    scale: complex
    basis: BasisMap
    site: Hashable = None

    def __post_init__(self):
        c = complex(self.scale)
        if c == 0:
            raise ZeroScale("scale factor must be nonzero")
        object.__setattr__(self, "scale", c)

    @property
    def dimension(self) -> int:
        return self.basis.dim

    @property
    def numbers(self) -> ScaledStructure:
        return ScaledStructure(self.scale, self.site)


def _check_dim(rep: ScaledHilbertRep, *vectors: HVector):
    for v in vectors:
        if v.dim != rep.dimension:
            raise DimensionMismatch(f"vector has dimension {v.dim}, representation {rep.dimension}")


def local_rep_vector(psi_y: HVector, rep: ScaledHilbertRep) -> HVector:
    _check_dim(rep, psi_y)
    same = psi_y.relabel(rep.site)
    return HVector(rep.scale * (rep.basis.matrix @ same.components), rep.site)


def scaled_smul(a, psi: HVector, rep: ScaledHilbertRep) -> HVector:
    """Scalar multiplication of representation elements: (a * psi) / c."""
    _check_dim(rep, psi)
    return HVector(complex(a) * psi.components / rep.scale, psi.site)


def scaled_inner(phi: HVector, psi: HVector, rep: ScaledHilbertRep) -> complex:
    """<phi, psi> / conj(c), antilinear in the first slot."""
    _check_dim(rep, phi, psi)
    return complex(np.vdot(phi.components, psi.components) / rep.scale.conjugate())


def scaled_add_vec(phi: HVector, psi: HVector, rep: ScaledHilbertRep) -> HVector:
    _check_dim(rep, phi, psi)
    return HVector(phi.components + psi.components, phi.site)


def scaled_sub_vec(phi: HVector, psi: HVector, rep: ScaledHilbertRep) -> HVector:
    _check_dim(rep, phi, psi)
    return HVector(phi.components - psi.components, phi.site)


@dataclass
class EquivalenceReport:
    status: str
    cases: int = 0
    max_residual: float = 0.0
    tol: float = 1e-12
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "ok" and self.max_residual <= self.tol


def _random_complex(rng, size=None):
    return rng.uniform(-1, 1, size=size) + 1j * rng.uniform(-1, 1, size=size)


def tuple_equiv_check(rep: ScaledHilbertRep, samples: int = 100, seed: int = 0, tol: float = 1e-12) -> EquivalenceReport:
    """Compare every vector operation with the same operation applied
    component-wise in the scaled number structure (V must be the identity)."""
    if not rep.basis.is_identity:
        return EquivalenceReport(
            "skipped",
            tol=tol,
            detail="basis map is not the identity; the tuple picture is checked with V = 1",
        )
    rng = np.random.default_rng(seed)
    s = rep.numbers
    n = rep.dimension
    worst = 0.0
    for _ in range(samples):
        a = complex(_random_complex(rng))
        u, w = _random_complex(rng, n), _random_complex(rng, n)
        # tuples of scaled numbers with values u_i, w_i
        U = [element_with_value(x, s) for x in u]
        W = [element_with_value(x, s) for x in w]
        hu, hw = HVector([x.element for x in U], s.site), HVector([x.element for x in W], s.site)
        ea = element_with_value(a, s)

        pairs = [
            (scaled_add_vec(hu, hw, rep).components, [scaled_add(x, y).element for x, y in zip(U, W)]),
            (scaled_sub_vec(hu, hw, rep).components, [scaled_sub(x, y).element for x, y in zip(U, W)]),
            (scaled_smul(ea.element, hw, rep).components, [scaled_mul(ea, y).element for y in W]),
        ]
        inner = s.vacuum
        for x, y in zip(U, W):
            inner = scaled_add(inner, scaled_mul(scaled_conj(x), y))
        pairs.append(([scaled_inner(hu, hw, rep)], [inner.element]))
        # and the tuple of scaled numbers corresponds to c times the plain tuple
        pairs.append((hu.components, rep.scale * u))
        for got, want in pairs:
            worst = max(worst, _rel(got, want))
    return EquivalenceReport("ok", samples, worst, tol)


def check_hilbert_equivalences(
    n: int,
    samples: int = 500,
    seed: int = 0,
) -> dict[str, float]:
    """Max relative residual of each equivalence chain over random (c, V, phi, psi, a).

    Keys: ``smul_forward`` (scaled product of represented vectors equals the
    representation of the plain product), ``smul_inverse`` (undoing c V on the
    scaled product recovers a * psi), ``inner`` (scaled inner product of
    representations equals c <phi, psi>), ``norm_square``, and ``unitarity``
    (the scaled inner product read as a value equals <phi, psi>).
    """
    rng = np.random.default_rng(seed)
    out = dict.fromkeys(["smul_forward", "smul_inverse", "inner", "norm_square", "unitarity"], 0.0)
    for _ in range(samples):
        c = complex(10 ** rng.uniform(-1, 1) * np.exp(1j * rng.uniform(-math.pi, math.pi)))
        V = random_unitary(n, rng)
        rep = ScaledHilbertRep(c, V, site="x")
        phi = HVector(_random_complex(rng, n), "y")
        psi = HVector(_random_complex(rng, n), "y")
        a = complex(_random_complex(rng))

        rphi, rpsi = local_rep_vector(phi, rep), local_rep_vector(psi, rep)
        prod = scaled_smul(c * a, rpsi, rep)
        plain = HVector(a * psi.components, "y")
        out["smul_forward"] = max(out["smul_forward"], _rel(prod.components, local_rep_vector(plain, rep).components))
        recovered = V.matrix.conj().T @ prod.components / c
        out["smul_inverse"] = max(out["smul_inverse"], _rel(recovered, plain.components))

        ip = np.vdot(phi.components, psi.components)
        got = scaled_inner(rphi, rpsi, rep)
        out["inner"] = max(out["inner"], _rel(got, c * ip))
        out["unitarity"] = max(out["unitarity"], _rel(got / c, ip))
        nsq = scaled_inner(rpsi, rpsi, rep)
        out["norm_square"] = max(out["norm_square"], _rel(nsq, c * np.vdot(psi.components, psi.components).real))
    return out
