"""Evaluate rational terms and truncated power series inside a scaled structure.

Evaluating with the compensated operations of a structure of scale ``c``
yields the element ``c * t``, where ``t`` is the plain value of the same
expression.  Powers are built from repeated scaled multiplication on purpose
so the factor bookkeeping stays literal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scaled_numbers import (
    ScaledNumber,
    ScaledStructure,
    element_with_value,
    scaled_add,
    scaled_div,
    scaled_mul,
)


@dataclass(frozen=True)
class Summand:
    a: complex
    j: int
    b: complex
    k: int

    def __post_init__(self):
        if self.j < 1 or self.k < 1:
            raise ValueError("powers must be >= 1")
        if self.b == 0:
            raise ValueError("denominator value must be nonzero")


@dataclass(frozen=True)
class RationalTerm:
    """A finite sum of ratios a**j / b**k."""

    summands: tuple[Summand, ...]

    @classmethod
    def of(cls, *items) -> RationalTerm:
        return cls(tuple(s if isinstance(s, Summand) else Summand(*s) for s in items))

    def plain_value(self) -> complex:
        return sum((complex(s.a) ** s.j / complex(s.b) ** s.k for s in self.summands), 0j)


@dataclass(frozen=True)
class PowerSeries:
    coefficients: tuple[complex, ...]

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients)

    def plain_value(self, a) -> complex:
        acc = 0j
        for coef in reversed(self.coefficients):
            acc = acc * a + coef
        return acc


def exp_series(order: int = 30) -> PowerSeries:
    return PowerSeries(tuple(complex(1 / math.factorial(n)) for n in range(order)))


def geometric_series(order: int = 60) -> PowerSeries:
    return PowerSeries((1 + 0j,) * order)


def scaled_power(x: ScaledNumber, n: int) -> ScaledNumber:
    """x**n by n-1 scaled multiplications."""
    acc = x
    for _ in range(n - 1):
        acc = scaled_mul(acc, x)
    return acc


def eval_term_scaled(t: RationalTerm, s: ScaledStructure) -> ScaledNumber:
    acc = s.vacuum
    for term in t.summands:
        num = scaled_power(element_with_value(term.a, s), term.j)
        den = scaled_power(element_with_value(term.b, s), term.k)
        acc = scaled_add(acc, scaled_div(num, den))
    return acc


@dataclass(frozen=True)
class SeriesResult:
    number: ScaledNumber
    # bound on the element-level truncation residue: 2 * |last term| * |c|
    residue_bound: float

    @property
    def element(self) -> complex:
        return self.number.element


def eval_series_scaled(f: PowerSeries, a, s: ScaledStructure) -> SeriesResult:
    """Horner evaluation of ``f`` at value ``a`` with scaled operations."""
    x = element_with_value(a, s)
    coefs = [element_with_value(coef, s) for coef in f.coefficients]
    acc = s.vacuum
    for coef in reversed(coefs):
        acc = scaled_add(scaled_mul(acc, x), coef)
    n = f.truncation_order
    last = abs(f.coefficients[-1]) * abs(a) ** (n - 1) if n else 0.0
    return SeriesResult(acc, 2.0 * last * abs(s.scale))


def random_term(rng: np.random.Generator, summands: int = 5, max_power: int = 5) -> RationalTerm:
    """Random term with values on the annulus 0.5 <= |v| <= 2 (keeps powers tame)."""
    items = []
    for _ in range(summands):
        ra, rb = rng.uniform(0.5, 2.0, size=2)
        pa, pb = rng.uniform(-math.pi, math.pi, size=2)
        j, k = rng.integers(1, max_power + 1, size=2)
        items.append(Summand(complex(ra * np.exp(1j * pa)), int(j), complex(rb * np.exp(1j * pb)), int(k)))
    return RationalTerm(tuple(items))


@dataclass
class ScalingReport:
    cases: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def check_term_scaling(
    cases: int = 10_000,
    seed: int = 0,
    tol: float = 1e-10,
    summands: int = 5,
    max_power: int = 5,
    series_order: int = 20,
) -> ScalingReport:
    """``cases`` random (term, c) pairs and as many (series, a, c) triples.

    Each scaled element is compared with c times the plain value, relative to
    max(1, |c t|).
    """
    rng = np.random.default_rng(seed)

    def random_structure():
        mag = 10 ** rng.uniform(-1, 1)
        return ScaledStructure(complex(mag * np.exp(1j * rng.uniform(-math.pi, math.pi))))

    worst = 0.0
    for _ in range(cases):
        s = random_structure()
        t = random_term(rng, summands, max_power)
        got = eval_term_scaled(t, s).element
        want = s.scale * t.plain_value()
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    for _ in range(cases):
        s = random_structure()
        coefs = rng.uniform(-1, 1, size=(series_order, 2)) @ np.array([1, 1j])
        f = PowerSeries(tuple(complex(z) for z in coefs))
        a = complex(rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(-math.pi, math.pi)))
        got = eval_series_scaled(f, a, s).element
        want = s.scale * f.plain_value(a)
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return ScalingReport(2 * cases, worst, tol)
