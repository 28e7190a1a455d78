"""Open-boundary lattice carrying the real gauge fields A and B.

Each forward link x -> x + mu carries the factor exp((A_mu(x) + i B_mu(x)) dx_mu),
with the fields sampled at the tail site.  Stored values are transported by
sameness (no numeric change); all rescaling lives in the link factors.

Conventions: axis indices start at 0; physical coordinates are
``index * spacing``; arrays of per-site data have shape ``lattice.dims`` and
per-(site, axis) data has shape ``lattice.dims + (d,)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import DimensionMismatch, NotIntegrable, PathOutOfBounds, ShapeMismatch
from .scaled_hilbert import HVector

INTEGRABILITY_TOL = 1e-9

Site = tuple[int, ...]
Step = tuple[int, int]


@dataclass(frozen=True)
class Lattice:
    dims: tuple[int, ...]
    spacing: tuple[float, ...] = 1.0

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not 1 <= len(dims) <= 4:
            raise ValueError(f"lattice must have 1 to 4 axes, got {len(dims)}")
        if any(n < 2 for n in dims):
            raise ValueError(f"every extent must be >= 2, got {dims}")
        sp = self.spacing
        sp = (float(sp),) * len(dims) if np.isscalar(sp) else tuple(float(h) for h in sp)
        if len(sp) != len(dims) or any(not h > 0 for h in sp):
            raise ValueError(f"need one positive spacing per axis, got {sp}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", sp)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    def sites(self) -> Iterator[Site]:
        return itertools.product(*(range(n) for n in self.dims))

    def contains(self, site: Sequence[int]) -> bool:
        return len(site) == self.ndim and all(0 <= i < n for i, n in zip(site, self.dims))

    def shift(self, site: Sequence[int], axis: int, sign: int = 1) -> Site:
        s = list(site)
        s[axis] += sign
        return tuple(s)

    def neighbor(self, site: Sequence[int], axis: int, sign: int = 1) -> Site | None:
        s = self.shift(site, axis, sign)
        return s if self.contains(s) else None

    def coords(self) -> np.ndarray:
        """Physical coordinates, shape dims + (d,)."""
        axes = [np.arange(n) * h for n, h in zip(self.dims, self.spacing)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def interior(self, depth: int = 1) -> list[Site]:
        """Sites with at least ``depth`` forward neighbors along every axis."""
        return list(itertools.product(*(range(n - depth) for n in self.dims)))

    def is_interior(self, site: Sequence[int], depth: int = 1) -> bool:
        return self.contains(site) and all(i + depth < n for i, n in zip(site, self.dims))

    def check_site_data(self, arr, trailing: tuple[int, ...] = (), what: str = "field") -> np.ndarray:
        arr = np.asarray(arr)
        want = self.dims + trailing
        if arr.shape[: len(want)] != want:
            raise ShapeMismatch(f"{what} has shape {arr.shape}, expected {want}...")
        return arr


@dataclass(frozen=True)
class GaugeFields:
    lattice: Lattice
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        lat = self.lattice
        want = lat.dims + (lat.ndim,)
        for name in ("A", "B"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != want:
                raise ShapeMismatch(f"{name} has shape {arr.shape}, expected {want}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls, lattice: Lattice) -> GaugeFields:
        z = np.zeros(lattice.dims + (lattice.ndim,))
        return cls(lattice, z, z)

    def w(self, g_R: float = 1.0, g_I: float = 1.0) -> np.ndarray:
        """Complex coupling field g_R A + i g_I B."""
        return g_R * self.A + 1j * g_I * self.B


@dataclass(frozen=True)
class LinkField:
    """Forward link factors; entries whose head leaves the lattice may be NaN."""

    lattice: Lattice
    forward: np.ndarray

    def __post_init__(self):
        f = np.array(self.forward, dtype=complex)
        want = self.lattice.dims + (self.lattice.ndim,)
        if f.shape != want:
            raise ShapeMismatch(f"links have shape {f.shape}, expected {want}")
        f.setflags(write=False)
        object.__setattr__(self, "forward", f)

    def link(self, site: Sequence[int], axis: int, sign: int = 1) -> complex:
        """Factor for the step from ``site`` along ``sign * axis``."""
        lat = self.lattice
        head = lat.neighbor(site, axis, sign)
        if not lat.contains(site) or head is None:
            raise PathOutOfBounds(f"step {site} along {'+' if sign > 0 else '-'}{axis} leaves the lattice")
        if sign > 0:
            return complex(self.forward[tuple(site) + (axis,)])
        return 1.0 / complex(self.forward[head + (axis,)])


def links_from_fields(gf: GaugeFields) -> LinkField:
    dx = np.asarray(gf.lattice.spacing)
    return LinkField(gf.lattice, np.exp((gf.A + 1j * gf.B) * dx))


def links_from_potential(lat: Lattice, pot) -> LinkField:
    """Links exp(pot(x + mu) - pot(x)); every path product is then
    exp(pot(end) - pot(start)).  Links leaving the lattice are NaN."""
    pot = np.asarray(lat.check_site_data(pot, what="potential"), dtype=complex)
    fwd = np.full(lat.dims + (lat.ndim,), np.nan + 0j)
    for mu in range(lat.ndim):
        head = _slice(lat.ndim, mu, 1, None)
        tail = _slice(lat.ndim, mu, None, -1)
        fwd[tail + (mu,)] = np.exp(pot[head] - pot[tail])
    return LinkField(lat, fwd)


def _slice(ndim: int, axis: int, start, stop) -> tuple:
    idx = [slice(None)] * ndim
    idx[axis] = slice(start, stop)
    return tuple(idx)


def first_order_link(gf: GaugeFields, site: Sequence[int], axis: int) -> complex:
    w = complex(gf.A[tuple(site) + (axis,)], gf.B[tuple(site) + (axis,)])
    return 1 + w * gf.lattice.spacing[axis]


def first_order_error(w: complex, dx: float) -> float:
    """|exp(w dx) - (1 + w dx)|."""
    z = complex(w) * dx
    return abs(cmath.exp(z) - (1 + z))


def first_order_error_bound(w: complex, dx: float) -> float:
    z = abs(complex(w) * dx)
    return z * z * math.exp(z)


# --------------------------------------------------------------------------
# Paths


@dataclass(frozen=True)
class LatticePath:
    start: Site
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(int(i) for i in self.start))
        steps = tuple((int(a), 1 if s > 0 else -1) for a, s in self.steps)
        object.__setattr__(self, "steps", steps)

    def sites(self) -> list[Site]:
        out = [self.start]
        for axis, sign in self.steps:
            s = list(out[-1])
            s[axis] += sign
            out.append(tuple(s))
        return out

    @property
    def end(self) -> Site:
        return self.sites()[-1]

    def reversed(self) -> LatticePath:
        return LatticePath(self.end, tuple((a, -s) for a, s in reversed(self.steps)))

    def then(self, other: LatticePath) -> LatticePath:
        if other.start != self.end:
            raise ValueError(f"path ends at {self.end}, next starts at {other.start}")
        return LatticePath(self.start, self.steps + other.steps)


def path_factors(links: LinkField, p: LatticePath) -> list[complex]:
    factors = []
    site = p.start
    if not links.lattice.contains(site):
        raise PathOutOfBounds(f"path starts outside the lattice at {site}")
    for axis, sign in p.steps:
        factors.append(links.link(site, axis, sign))
        site = links.lattice.shift(site, axis, sign)
    return factors


def path_product(links: LinkField, p: LatticePath, order: Sequence[int] | None = None) -> complex:
    """Product of link factors along ``p``.  ``order`` optionally permutes the
    multiplication order; the factors commute, so the result does not care."""
    factors = path_factors(links, p)
    if order is not None:
        factors = [factors[i] for i in order]
    out = 1 + 0j
    for f in factors:
        out *= f
    return out


def staircase_path(start: Sequence[int], end: Sequence[int]) -> LatticePath:
    """Axis-ordered path: all of axis 0 first, then axis 1, and so on."""
    steps = []
    for axis, (a, b) in enumerate(zip(start, end)):
        sign = 1 if b >= a else -1
        steps.extend([(axis, sign)] * abs(b - a))
    return LatticePath(tuple(start), tuple(steps))


def monotone_paths(start: Sequence[int], end: Sequence[int]) -> Iterator[LatticePath]:
    """Every shortest lattice path from ``start`` to ``end``."""
    moves = [(axis, 1 if b >= a else -1, abs(b - a)) for axis, (a, b) in enumerate(zip(start, end))]
    counts = [m[2] for m in moves]
    total = sum(counts)

    def rec(prefix):
        if len(prefix) == total:
            yield LatticePath(tuple(start), tuple(prefix))
            return
        for i, (axis, sign, _) in enumerate(moves):
            if counts[i]:
                counts[i] -= 1
                prefix.append((axis, sign))
                yield from rec(prefix)
                prefix.pop()
                counts[i] += 1

    yield from rec([])


@dataclass(frozen=True)
class PathRecord:
    path_id: int
    steps: tuple[Step, ...]
    endpoint: Site
    product: complex
    log_defect: float


def enumerate_corner_paths(links: LinkField) -> tuple[list[PathRecord], dict[Site, float]]:
    """All monotone paths from the origin corner to every site.

    Returns one record per path (the log defect is measured against the
    staircase path to the same endpoint) and the relative spread
    max |p - p_staircase| / max(1, |p_staircase|) per endpoint.
    """
    lat = links.lattice
    origin = (0,) * lat.ndim
    ref = {}
    for site in lat.sites():
        ref[site] = path_product(links, staircase_path(origin, site))
    records: list[PathRecord] = []
    spread: dict[Site, float] = {}
    fwd = links.forward

    # depth-first over + steps; every prefix is itself a monotone path
    stack = [(origin, (), 1 + 0j)]
    while stack:
        site, steps, prod = stack.pop()
        r = ref[site]
        records.append(PathRecord(len(records), steps, site, prod, abs(cmath.log(prod / r))))
        spread[site] = max(spread.get(site, 0.0), abs(prod - r) / max(1.0, abs(r)))
        for axis in reversed(range(lat.ndim)):
            if site[axis] + 1 < lat.dims[axis]:
                nxt = site[:axis] + (site[axis] + 1,) + site[axis + 1:]
                stack.append((nxt, steps + ((axis, 1),), prod * complex(fwd[site + (axis,)])))
    return records, spread


# --------------------------------------------------------------------------
# Continuous paths


def _derivative(path_fn: Callable, s: np.ndarray, h: float = 1e-3) -> np.ndarray:
    # fourth-order central stencil; path_fn is sampled slightly outside [0, 1]
    f = lambda t: np.asarray(path_fn(t), dtype=float)  # noqa: E731
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h)


def line_integral_holonomy(
    A_fn: Callable,
    B_fn: Callable,
    path_fn: Callable,
    n_quad: int = 64,
    dpath_fn: Callable | None = None,
    rule: str = "midpoint",
) -> complex:
    """exp of the integral of (A + iB) . dP/ds over s in [0, 1].

    ``A_fn``/``B_fn`` map a point (shape (d,)) to a d-vector; ``path_fn`` maps
    a parameter to a point.  ``rule`` is ``"midpoint"`` (composite, order 2)
    or ``"gauss"`` (Gauss-Legendre with ``n_quad`` nodes).
    """
    if n_quad < 2:
        raise ValueError("n_quad must be >= 2")
    if rule == "midpoint":
        nodes = (np.arange(n_quad) + 0.5) / n_quad
        weights = np.full(n_quad, 1.0 / n_quad)
    elif rule == "gauss":
        x, w = np.polynomial.legendre.leggauss(n_quad)
        nodes, weights = (x + 1) / 2, w / 2
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    total = 0j
    for s, wt in zip(nodes, weights):
        p = np.asarray(path_fn(s), dtype=float)
        dp = np.asarray(dpath_fn(s), dtype=float) if dpath_fn else _derivative(path_fn, s)
        field = np.asarray(A_fn(p), dtype=float) + 1j * np.asarray(B_fn(p), dtype=float)
        total += wt * complex(np.dot(field, dp))
    return cmath.exp(total)


# --------------------------------------------------------------------------
# Integrability


def plaquette_defect(links: LinkField, site: Sequence[int], mu: int, nu: int) -> complex:
    """log of the product of the four links around the (mu, nu) square at ``site``."""
    if mu == nu:
        raise ValueError("plaquette needs two distinct axes")
    lat = links.lattice
    x = tuple(site)
    xm, xn = lat.shift(x, mu), lat.shift(x, nu)
    if not (lat.contains(x) and lat.contains(xm) and lat.contains(xn)):
        raise PathOutOfBounds(f"plaquette ({mu}, {nu}) at {x} leaves the lattice")
    loop = links.link(x, mu) * links.link(xm, nu) * links.link(lat.shift(xm, nu), mu, -1) * links.link(xn, nu, -1)
    return cmath.log(loop)


def plaquette_defects(links: LinkField) -> np.ndarray:
    """Defects of every in-bounds plaquette, flattened."""
    lat = links.lattice
    f = links.forward
    out = []
    for mu, nu in itertools.combinations(range(lat.ndim), 2):
        base = [slice(None)] * lat.ndim
        base[mu] = slice(None, -1)
        base[nu] = slice(None, -1)
        at_mu = list(base)
        at_mu[mu] = slice(1, None)
        at_nu = list(base)
        at_nu[nu] = slice(1, None)
        loop = f[tuple(base) + (mu,)] * f[tuple(at_mu) + (nu,)] / (f[tuple(at_nu) + (mu,)] * f[tuple(base) + (nu,)])
        out.append(np.log(loop).reshape(-1))
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


def max_plaquette_defect(links: LinkField) -> float:
    d = plaquette_defects(links)
    return float(np.max(np.abs(d))) if d.size else 0.0


def scaled_space_integral(phi, links: LinkField, ref_site: Sequence[int], tol: float = INTEGRABILITY_TOL) -> complex:
    """Sum over y of c_{y,x} phi(y) times the cell volume, c along the staircase path."""
    lat = links.lattice
    phi = lat.check_site_data(phi, what="phi")
    worst = max_plaquette_defect(links)
    if not worst <= tol:
        raise NotIntegrable(f"max plaquette defect {worst:.3e} exceeds {tol:.1e}")
    ref = tuple(ref_site)
    total = 0j
    for y in lat.sites():
        total += path_product(links, staircase_path(ref, y)) * complex(phi[y])
    return total * lat.cell_volume


# --------------------------------------------------------------------------
# Derivatives


def forward_shift(f: np.ndarray, axis: int) -> np.ndarray:
    """g[x] = f[x + axis]; NaN on the far face."""
    f = np.asarray(f)
    out = np.full(f.shape, np.nan, dtype=np.result_type(f.dtype, float))
    src = [slice(None)] * f.ndim
    dst = [slice(None)] * f.ndim
    src[axis] = slice(1, None)
    dst[axis] = slice(None, -1)
    out[tuple(dst)] = f[tuple(src)]
    return out


def forward_difference(f: np.ndarray, lat: Lattice, axis: int) -> np.ndarray:
    """(f(x + mu) - f(x)) / dx_mu over the whole lattice, NaN on the far face.
    Values at the neighbor are used as stored (sameness transport)."""
    return (forward_shift(f, axis) - np.asarray(f)) / lat.spacing[axis]


MODES = ("first_order", "exact")


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def covariant_derivative_field(psi, gf: GaugeFields, g_R: float, g_I: float, axis: int, mode: str = "first_order") -> np.ndarray:
    """D_mu psi at every site (NaN on the far face).  ``psi`` may carry
    trailing component axes; the same link multiplies every component.

    first_order: d'psi + (g_R A + i g_I B) psi(x + mu)
    exact:       (exp((g_R A + i g_I B) dx) psi(x + mu) - psi(x)) / dx
    """
    _check_mode(mode)
    lat = gf.lattice
    psi = np.asarray(lat.check_site_data(psi, what="psi"), dtype=complex)
    w = gf.w(g_R, g_I)[..., axis].reshape(lat.dims + (1,) * (psi.ndim - lat.ndim))
    nxt = forward_shift(psi, axis)
    dx = lat.spacing[axis]
    if mode == "first_order":
        return (nxt - psi) / dx + w * nxt
    return (np.exp(w * dx) * nxt - psi) / dx


def covariant_derivative_scalar(
    psi, gf: GaugeFields, g_R: float, g_I: float, site: Sequence[int], axis: int, mode: str = "first_order"
) -> complex:
    _check_mode(mode)
    lat = gf.lattice
    psi = lat.check_site_data(psi, what="psi")
    x = tuple(site)
    y = lat.neighbor(x, axis)
    if not lat.contains(x) or y is None:
        raise PathOutOfBounds(f"no forward neighbor of {x} along axis {axis}")
    w = complex(g_R * gf.A[x + (axis,)], g_I * gf.B[x + (axis,)])
    dx = lat.spacing[axis]
    if mode == "first_order":
        return (complex(psi[y]) - complex(psi[x])) / dx + w * complex(psi[y])
    return (cmath.exp(w * dx) * complex(psi[y]) - complex(psi[x])) / dx


def covariant_derivative_vector(psi, links: LinkField, V_links, site: Sequence[int], axis: int) -> HVector:
    """(c V psi(x + mu) - psi(x)) / dx_mu.

    ``psi`` has shape dims + (n,); ``V_links`` has shape dims + (d, n, n)
    holding the basis map of each forward link, or None for the identity.
    """
    lat = links.lattice
    psi = np.asarray(lat.check_site_data(psi, what="psi"), dtype=complex)
    if psi.ndim != lat.ndim + 1:
        raise DimensionMismatch("vector field needs exactly one component axis")
    n = psi.shape[-1]
    x = tuple(site)
    y = lat.neighbor(x, axis)
    if not lat.contains(x) or y is None:
        raise PathOutOfBounds(f"no forward neighbor of {x} along axis {axis}")
    nxt = psi[y]
    if V_links is not None:
        V = np.asarray(V_links)[x + (axis,)]
        if V.shape != (n, n):
            raise DimensionMismatch(f"basis map has shape {V.shape}, vectors have dimension {n}")
        nxt = V @ nxt
    c = links.link(x, axis)
    return HVector((c * nxt - psi[x]) / lat.spacing[axis], x)
