"""Seeded gauge-field generators.

Every generator draws from numpy's PCG64 bit generator, so a given
(kind, dims, spacing, seed) always produces bitwise identical fields.
Reference draws for seed 7, ``make_rng(7).random(3)``::

    0.625095466604667, 0.8972138009695755, 0.7756856902451935
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import UnknownGenerator
from .lattice_gauge import GaugeFields, Lattice

GENERATORS = ("zero", "constant", "potential", "linear_phase", "random_smooth", "random_rough")
INTEGRABLE = frozenset({"zero", "constant", "potential"})


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class Quadratic:
    """c0 + sum_i c_i x_i + sum_{i<=j} c_ij x_i x_j on physical coordinates."""

    const: float
    linear: np.ndarray
    quad: np.ndarray  # upper-triangular

    @classmethod
    def random(cls, rng: np.random.Generator, d: int, amplitude: float = 1.0) -> Quadratic:
        const = amplitude * rng.uniform(-1, 1)
        linear = amplitude * rng.uniform(-1, 1, size=d)
        quad = np.zeros((d, d))
        for i, j in itertools.combinations_with_replacement(range(d), 2):
            quad[i, j] = amplitude * rng.uniform(-1, 1)
        return cls(const, linear, quad)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.const + x @ self.linear + np.einsum("...i,ij,...j->...", x, self.quad, x)


@dataclass(frozen=True)
class GeneratedFields:
    fields: GaugeFields
    # complex potential whose differences give the link phases (integrable kinds only)
    potential: np.ndarray | None = None


def _gradient_fields(lat: Lattice, PA: Quadratic, PB: Quadratic) -> GaugeFields:
    """A_mu(x) = (PA(x + mu) - PA(x)) / dx, same for B; the polynomials are
    evaluated off-lattice too so the far-face links stay integrable."""
    X = lat.coords()
    A = np.empty(lat.dims + (lat.ndim,))
    B = np.empty_like(A)
    for mu, h in enumerate(lat.spacing):
        step = np.zeros(lat.ndim)
        step[mu] = h
        A[..., mu] = (PA(X + step) - PA(X)) / h
        B[..., mu] = (PB(X + step) - PB(X)) / h
    return GaugeFields(lat, A, B)


def generate_fields(kind: str, lat: Lattice, seed: int, amplitude: float = 1.0) -> GeneratedFields:
    if kind not in GENERATORS:
        raise UnknownGenerator(f"unknown field generator {kind!r}; expected one of {GENERATORS}")
    rng = make_rng(seed)
    d = lat.ndim
    shape = lat.dims + (d,)
    X = lat.coords()

    if kind == "zero":
        return GeneratedFields(GaugeFields.zeros(lat), np.zeros(lat.dims, dtype=complex))
    if kind == "constant":
        a = amplitude * rng.uniform(-1, 1, size=d)
        b = amplitude * rng.uniform(-1, 1, size=d)
        gf = GaugeFields(lat, np.broadcast_to(a, shape), np.broadcast_to(b, shape))
        return GeneratedFields(gf, X @ (a + 1j * b))
    if kind == "potential":
        PA = Quadratic.random(rng, d, amplitude)
        PB = Quadratic.random(rng, d, amplitude)
        return GeneratedFields(_gradient_fields(lat, PA, PB), PA(X) + 1j * PB(X))
    if kind == "linear_phase":
        K = amplitude * rng.uniform(-1, 1, size=(d, d))
        return GeneratedFields(GaugeFields(lat, np.zeros(shape), X @ K.T))
    if kind == "random_smooth":
        A = np.empty(shape)
        B = np.empty(shape)
        for mu in range(d):
            A[..., mu] = Quadratic.random(rng, d, amplitude)(X)
        for mu in range(d):
            B[..., mu] = Quadratic.random(rng, d, amplitude)(X)
        return GeneratedFields(GaugeFields(lat, A, B))
    # random_rough
    A = amplitude * rng.uniform(-1, 1, size=shape)
    B = amplitude * rng.uniform(-1, 1, size=shape)
    return GeneratedFields(GaugeFields(lat, A, B))


def smooth_scalar(lat: Lattice, rng: np.random.Generator, amplitude: float = 1.0) -> np.ndarray:
    """Smooth complex scalar field: exp(i Q1(x)) * (1 + Q2(x) / 4)."""
    X = lat.coords()
    q1 = Quadratic.random(rng, lat.ndim, amplitude)
    q2 = Quadratic.random(rng, lat.ndim, amplitude)
    return np.exp(1j * q1(X)) * (1 + q2(X) / 4)


def smooth_phase(lat: Lattice, rng: np.random.Generator, amplitude: float = 1.0) -> np.ndarray:
    return Quadratic.random(rng, lat.ndim, amplitude)(lat.coords())


def smooth_spinor(lat: Lattice, rng: np.random.Generator, amplitude: float = 1.0) -> np.ndarray:
    return np.stack([smooth_scalar(lat, rng, amplitude) for _ in range(4)], axis=-1)
