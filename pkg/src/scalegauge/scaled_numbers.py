"""Scaled complex number structures and the scaled-naturals toy model.

A structure with scale ``c`` shares its base set with the reference structure
(scale 1).  Every base element is stored by its reference value, called the
*element* here; the same element reads as ``element / c`` inside the scaled
structure.  Operations compensate for the scale::

    p + q   ->  p + q
    p * q   ->  (p * q) / c
    p / q   ->  c * p / q
    conj(p) ->  c * conj(p / c)

so that the scaled structure has identity element ``c`` and satisfies the
field axioms exactly when the reference structure does.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Hashable

import numpy as np

from .errors import (
    DivisionByVacuum,
    NonFiniteValue,
    NotInBaseSet,
    SiteMismatch,
    StructureMismatch,
    ZeroScale,
)

# |c| outside this band is accepted but flagged as badly conditioned.
CONDITIONING_BAND = (1e-6, 1e6)


def _finite(z: complex, what: str) -> complex:
    if not cmath.isfinite(z):
        raise NonFiniteValue(f"{what} produced a non-finite value {z!r}")
    return z


@dataclass(frozen=True, slots=True)
class ScaledStructure:
    scale: complex
    site: Hashable = None

    def __post_init__(self):
        c = complex(self.scale)
        if c == 0:
            raise ZeroScale("scale factor must be nonzero")
        _finite(c, "scale")
        object.__setattr__(self, "scale", c)

    @property
    def identity(self) -> ScaledNumber:
        return ScaledNumber(self.scale, self)

    @property
    def vacuum(self) -> ScaledNumber:
        return ScaledNumber(0j, self)

    @property
    def is_reference(self) -> bool:
        return self.scale == 1

    @property
    def well_conditioned(self) -> bool:
        lo, hi = CONDITIONING_BAND
        return lo <= abs(self.scale) <= hi

    def element(self, value) -> ScaledNumber:
        """The number whose value in this structure is ``value``."""
        return element_with_value(value, self)


@dataclass(frozen=True, slots=True)
class ScaledNumber:
    element: complex
    structure: ScaledStructure

    @property
    def value(self) -> complex:
        return value_of(self)

    def __add__(self, other):
        return scaled_add(self, other)

    def __sub__(self, other):
        return scaled_sub(self, other)

    def __mul__(self, other):
        return scaled_mul(self, other)

    def __truediv__(self, other):
        return scaled_div(self, other)

    def __neg__(self):
        return ScaledNumber(-self.element, self.structure)

    def conjugate(self):
        return scaled_conj(self)


def make_structure(c, site: Hashable = None) -> ScaledStructure:
    return ScaledStructure(c, site)


def value_of(n: ScaledNumber) -> complex:
    return n.element / n.structure.scale


def element_with_value(a, s: ScaledStructure) -> ScaledNumber:
    return ScaledNumber(_finite(s.scale * complex(a), "embedding"), s)


def _same(p: ScaledNumber, q: ScaledNumber) -> ScaledStructure:
    if p.structure != q.structure:
        raise StructureMismatch(
            f"operands live in different structures ({p.structure} vs {q.structure})"
        )
    return p.structure


def scaled_add(p: ScaledNumber, q: ScaledNumber) -> ScaledNumber:
    s = _same(p, q)
    return ScaledNumber(_finite(p.element + q.element, "addition"), s)


def scaled_sub(p: ScaledNumber, q: ScaledNumber) -> ScaledNumber:
    s = _same(p, q)
    return ScaledNumber(_finite(p.element - q.element, "subtraction"), s)


def scaled_mul(p: ScaledNumber, q: ScaledNumber) -> ScaledNumber:
    s = _same(p, q)
    return ScaledNumber(_finite((p.element * q.element) / s.scale, "multiplication"), s)


def scaled_div(p: ScaledNumber, q: ScaledNumber) -> ScaledNumber:
    s = _same(p, q)
    if q.element == 0:
        raise DivisionByVacuum("division by the number vacuum")
    return ScaledNumber(_finite(s.scale * p.element / q.element, "division"), s)


def scaled_conj(p: ScaledNumber) -> ScaledNumber:
    # Conjugate the value, then re-embed; NOT conj(c) * conj(value).
    c = p.structure.scale
    return ScaledNumber(_finite(c * (p.element / c).conjugate(), "conjugation"), p.structure)


def correspondence(a, s: ScaledStructure) -> complex:
    """Reference value corresponding to value ``a`` of structure ``s``."""
    return s.scale * complex(a)


def sameness(a, s: ScaledStructure) -> complex:
    """Reference value that is the same as value ``a`` of ``s``: ``a`` itself."""
    return complex(a)


# --------------------------------------------------------------------------
# Transport between site structures


@dataclass(frozen=True, slots=True)
class TransportMap:
    from_site: Hashable
    to_site: Hashable
    factor: complex = 1 + 0j

    def then(self, other: TransportMap) -> TransportMap:
        """Compose ``self`` (x -> y) with ``other`` (y -> z)."""
        if self.to_site != other.from_site:
            raise SiteMismatch(f"cannot chain {self.to_site!r} into {other.from_site!r}")
        return TransportMap(self.from_site, other.to_site, self.factor * other.factor)


def transport(
    n: ScaledNumber,
    t: TransportMap,
    target: ScaledStructure | None = None,
    local: bool = False,
) -> ScaledNumber:
    """Move ``n`` along ``t``.

    The sameness part copies the value verbatim into ``target`` (the reference
    structure at ``t.to_site`` by default).  With ``local=True`` the value is
    first multiplied by ``t.factor``, which is the local representation map.
    """
    if n.structure.site != t.from_site:
        raise SiteMismatch(f"number lives at {n.structure.site!r}, map starts at {t.from_site!r}")
    if target is None:
        target = ScaledStructure(1, t.to_site)
    elif target.site != t.to_site:
        raise SiteMismatch(f"target structure at {target.site!r}, map ends at {t.to_site!r}")
    a = value_of(n)
    if local:
        a = t.factor * a
    return element_with_value(a, target)


# --------------------------------------------------------------------------
# Randomized axiom verification


@dataclass
class AxiomReport:
    scale: complex
    samples: int
    seed: int
    tol: float
    # max relative |lhs - rhs| of each axiom, evaluated with scaled operations
    defects: dict[str, float] = field(default_factory=dict)
    # max relative gap between the scaled evaluation (read out through
    # value_of) and the same expression evaluated on plain values
    residuals: dict[str, float] = field(default_factory=dict)
    well_conditioned: bool = True

    @property
    def max_defect(self) -> float:
        return max(self.defects.values(), default=0.0)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tol and self.max_residual <= self.tol


def _rel(x: complex, y: complex) -> float:
    return abs(x - y) / max(1.0, abs(y))


def _axioms(s: ScaledStructure) -> dict[str, Callable]:
    """Each entry maps scaled numbers (p, q, r), their plain values (a, b, c)
    and quadratic root data to (lhs_scaled, rhs_scaled, lhs_plain, rhs_plain)."""
    one, zero = s.identity, s.vacuum
    conj = scaled_conj

    def emb(v):
        return element_with_value(v, s)

    def quad_root(roots):
        # z is a root of z^2 + b z + d found in plain arithmetic
        b, d, z = roots
        bs, ds, zs = emb(b), emb(d), emb(z)
        lhs = scaled_add(scaled_add(scaled_mul(zs, zs), scaled_mul(bs, zs)), ds)
        return lhs, zero, (z * z + b * z) + d, 0j

    return {
        "add_commutative": lambda p, q, r, a, b, c, _: (p + q, q + p, a + b, b + a),
        "add_associative": lambda p, q, r, a, b, c, _: ((p + q) + r, p + (q + r), (a + b) + c, a + (b + c)),
        "mul_commutative": lambda p, q, r, a, b, c, _: (p * q, q * p, a * b, b * a),
        "mul_associative": lambda p, q, r, a, b, c, _: ((p * q) * r, p * (q * r), (a * b) * c, a * (b * c)),
        "distributive": lambda p, q, r, a, b, c, _: (p * (q + r), p * q + p * r, a * (b + c), a * b + a * c),
        "add_identity": lambda p, q, r, a, b, c, _: (p + zero, p, a + 0, a),
        "mul_identity": lambda p, q, r, a, b, c, _: (p * one, p, a * 1, a),
        "add_inverse": lambda p, q, r, a, b, c, _: (p + (zero - p), zero, a + (0 - a), 0j),
        "mul_inverse": lambda p, q, r, a, b, c, _: (p * (one / p), one, a * (1 / a), 1 + 0j),
        "div_mul_cancel": lambda p, q, r, a, b, c, _: ((p * q) / q, p, (a * b) / b, a),
        "conj_involution": lambda p, q, r, a, b, c, _: (conj(conj(p)), p, a.conjugate().conjugate(), a),
        "conj_additive": lambda p, q, r, a, b, c, _: (
            conj(p + q), conj(p) + conj(q), (a + b).conjugate(), a.conjugate() + b.conjugate()),
        "conj_multiplicative": lambda p, q, r, a, b, c, _: (
            conj(p * q), conj(p) * conj(q), (a * b).conjugate(), a.conjugate() * b.conjugate()),
        "conj_identity": lambda p, q, r, a, b, c, _: (conj(one), one, (1 + 0j).conjugate(), 1 + 0j),
        "conj_vacuum": lambda p, q, r, a, b, c, _: (conj(zero), zero, 0j.conjugate(), 0j),
        "closure_quadratic_root": lambda p, q, r, a, b, c, roots: quad_root(roots),
    }


def check_field_axioms(s: ScaledStructure, samples: int = 1000, seed: int = 0, tol: float = 1e-12) -> AxiomReport:
    """Randomized check of the complex field axioms inside ``s``.

    Values are drawn with components uniform in [-1, 1]; nonzero divisors are
    guaranteed by redrawing.  Failures are reported, never raised.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    report = AxiomReport(s.scale, samples, seed, tol, well_conditioned=s.well_conditioned)
    axioms = _axioms(s)
    for name in axioms:
        report.defects[name] = 0.0
        report.residuals[name] = 0.0

    draws = rng.uniform(-1.0, 1.0, size=(samples, 5, 2))
    for row in draws:
        a, b, c, qb, qd = (complex(x, y) for x, y in row)
        if a == 0 or b == 0:
            continue
        z = (-qb + cmath.sqrt(qb * qb - 4 * qd)) / 2
        p, q, r = element_with_value(a, s), element_with_value(b, s), element_with_value(c, s)
        for name, axiom in axioms.items():
            ls, rs, lv, rv = axiom(p, q, r, a, b, c, (qb, qd, z))
            d = _rel(ls.element, rs.element)
            res = max(_rel(value_of(ls), lv), _rel(value_of(rs), rv))
            if d > report.defects[name]:
                report.defects[name] = d
            if res > report.residuals[name]:
                report.residuals[name] = res
    return report


# --------------------------------------------------------------------------
# Scaled naturals: multiples of k with multiplication (p * q) / k


@dataclass(frozen=True, slots=True)
class ScaledNaturalStructure:
    """Multiples of ``k`` with ``+``, ``*/k`` and ``<``; ``k`` is the identity.

    All methods accept Python ints or numpy integer arrays and stay exact.
    """

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"scale must be a positive integer, got {self.k!r}")

    @property
    def zero(self) -> int:
        return 0

    @property
    def identity(self) -> int:
        return self.k

    def check(self, n):
        bad = np.asarray(n) % self.k != 0
        if np.any(bad) or np.any(np.asarray(n) < 0):
            raise NotInBaseSet(f"not a natural multiple of {self.k}")
        return n

    def embed(self, n):
        return self.k * n

    def value_of(self, e):
        return self.check(e) // self.k

    def add(self, p, q):
        return self.check(p) + self.check(q)

    def mul(self, p, q):
        return (self.check(p) * self.check(q)) // self.k

    def lt(self, p, q):
        return self.check(p) < self.check(q)


def nat_scaled_ops(k: int) -> ScaledNaturalStructure:
    return ScaledNaturalStructure(k)


@dataclass
class NaturalsReport:
    k: int
    limit: int
    cases: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def check_naturals_isomorphism(k: int, limit: int = 1000) -> NaturalsReport:
    """Exhaustively check that n -> k*n is a semiring-and-order isomorphism
    onto the scaled naturals for all n, m <= limit."""
    s = nat_scaled_ops(k)
    n = np.arange(limit + 1, dtype=np.int64)
    N, M = np.meshgrid(n, n, indexing="ij")
    eN, eM = s.embed(N), s.embed(M)
    checks = [
        s.add(eN, eM) == s.embed(N + M),
        s.mul(eN, eM) == s.embed(N * M),
        s.lt(eN, eM) == (N < M),
        s.mul(eN, s.identity) == eN,
        s.add(eN, s.zero) == eN,
        s.value_of(eN) == N,
    ]
    failures = int(sum(np.count_nonzero(~c) for c in checks))
    return NaturalsReport(k, limit, int(sum(c.size for c in checks)), failures)
