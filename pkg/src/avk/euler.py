"""Euler-characteristic integration on finite abstract simplicial complexes.

A constructible function assigns a value to every open simplex. The link
function evaluates, at each point, the Euler integral of the function over
the infinitesimal link of that point; it depends only on the open simplex
containing the point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .qforms import format_fraction, to_fraction

Simplex = frozenset


class ComplexError(ValueError):
    pass


class SimplicialComplex:
    """Downward-closed family of finite vertex sets.

    Listed simplices are closed under taking faces automatically.
    """

    __slots__ = ("simplices", "vertices", "_by_dim")

    def __init__(self, simplices: Iterable[Iterable[Hashable]]):
        closed: set[frozenset] = set()
        for s in simplices:
            s = frozenset(s)
            if not s:
                continue
            if s in closed:
                continue
            for k in range(1, len(s) + 1):
                closed.update(frozenset(c) for c in combinations(s, k))
        self.simplices = frozenset(closed)
        self.vertices = frozenset(v for s in closed for v in s)
        by_dim: dict[int, list] = {}
        for s in closed:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = by_dim

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def of_dim(self, k: int) -> list[frozenset]:
        return list(self._by_dim.get(k, []))

    def __contains__(self, s) -> bool:
        return frozenset(s) in self.simplices

    def __iter__(self):
        return iter(sorted(self.simplices, key=_simplex_key))

    def __len__(self) -> int:
        return len(self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def cofaces(self, s: frozenset) -> list[frozenset]:
        """Simplices strictly containing s."""
        return [t for t in self.simplices if len(t) > len(s) and s < t]

    def barycentric_subdivision(self) -> "SimplicialComplex":
        """Vertices are simplices of self; simplices are flags under inclusion."""
        return SimplicialComplex(flags(self))


def _simplex_key(s):
    return (len(s), sorted(map(str, s)))


def dim_of(s) -> int:
    return len(s) - 1


def flags(k: SimplicialComplex) -> list[frozenset]:
    """All strictly increasing chains of simplices, each as a frozenset of simplices."""
    return _flags_within(list(k.simplices))


class ConstructibleFunction:
    """Rational values on open simplices; simplices not listed carry 0."""

    __slots__ = ("values",)

    def __init__(self, values: Mapping[Iterable, object] | None = None):
        self.values = {
            frozenset(s): to_fraction(v) for s, v in (values or {}).items() if to_fraction(v) != 0
        }

    def __call__(self, s) -> Fraction:
        return self.values.get(frozenset(s), Fraction(0))

    @classmethod
    def constant(cls, k: SimplicialComplex, c=1) -> "ConstructibleFunction":
        return cls({s: c for s in k.simplices})

    @classmethod
    def indicator(cls, cells: Iterable[Iterable]) -> "ConstructibleFunction":
        return cls({frozenset(s): 1 for s in cells})

    def __add__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        keys = set(self.values) | set(other.values)
        return ConstructibleFunction({s: self(s) + other(s) for s in keys})

    def scaled(self, c) -> "ConstructibleFunction":
        c = to_fraction(c)
        return ConstructibleFunction({s: c * v for s, v in self.values.items()})


def chi_c_integral(k: SimplicialComplex, f: ConstructibleFunction, cells=None) -> Fraction:
    """Sum of (-1)^dim * f over the open simplices (optionally only those in `cells`)."""
    cells = k.simplices if cells is None else cells
    return sum(((-1) ** dim_of(s) * f(s) for s in cells), Fraction(0))


def chi_c(cells: Iterable[frozenset]) -> int:
    """Compactly supported Euler characteristic of a union of open simplices."""
    return sum((-1) ** dim_of(s) for s in cells)


class LinkFunction:
    """Values of the link function at barycenters, plus its pullback to the subdivision."""

    def __init__(self, complex_: SimplicialComplex, at_barycenter: dict[frozenset, Fraction]):
        self.complex = complex_
        self.at_barycenter = at_barycenter
        self._subdivision: SimplicialComplex | None = None

    def __call__(self, s) -> Fraction:
        return self.at_barycenter[frozenset(s)]

    @property
    def subdivision(self) -> SimplicialComplex:
        if self._subdivision is None:
            self._subdivision = self.complex.barycentric_subdivision()
        return self._subdivision

    def on_subdivision(self) -> ConstructibleFunction:
        # an open flag simplex lies inside the open simplex given by its largest member
        return ConstructibleFunction(
            {c: self.at_barycenter[max(c, key=len)] for c in self.subdivision.simplices}
        )


def _link_of_barycenter(k: SimplicialComplex, tau: frozenset) -> list[frozenset]:
    """Simplices of the subdivision's link of the barycenter of tau (as flags)."""
    below = [s for s in k.simplices if s < tau]
    above = k.cofaces(tau)
    lower_flags = _flags_within(below)
    upper_flags = _flags_within(above)
    link = []
    for lo in [frozenset()] + lower_flags:
        for hi in [frozenset()] + upper_flags:
            if lo or hi:
                link.append(lo | hi)
    return link


def _flags_within(family: list[frozenset]) -> list[frozenset]:
    ordered = sorted(family, key=len)
    result = []

    def extend(chain):
        result.append(frozenset(chain))
        top = chain[-1]
        for t in ordered:
            if len(t) > len(top) and top < t:
                extend(chain + [t])

    for s in ordered:
        extend([s])
    return result


def link_function(k: SimplicialComplex, f: ConstructibleFunction) -> LinkFunction:
    """Evaluate the link integral at every barycenter.

    A point y of the subdivision link of the barycenter of tau stands for the
    germ of the ray from the barycenter through y; that germ runs inside the
    open simplex max(flag(y) + [tau]), which is where f is read off.
    """
    values: dict[frozenset, Fraction] = {}
    for tau in k.simplices:
        total = Fraction(0)
        for c in _link_of_barycenter(k, tau):
            top = max(c | {tau}, key=len)
            total += (-1) ** (len(c) - 1) * f(top)
        values[tau] = total
    return LinkFunction(k, values)


def link_integral_defect(k: SimplicialComplex, f: ConstructibleFunction) -> Fraction:
    """Euler integral of the link function over the subdivision; always zero."""
    lf = link_function(k, f)
    return chi_c_integral(lf.subdivision, lf.on_subdivision())


def link_euler(k: SimplicialComplex) -> dict[frozenset, Fraction]:
    """Euler characteristic of the link at points of each open simplex."""
    return link_function(k, ConstructibleFunction.constant(k)).at_barycenter


def _as_cells(k: SimplicialComplex, cells) -> frozenset:
    cells = frozenset(frozenset(c) for c in cells)
    missing = [sorted(map(str, c)) for c in cells if c not in k.simplices]
    if missing:
        raise ComplexError(f"cells not in the complex: {missing}")
    return cells


def odd_dimension_reduction(k: SimplicialComplex, f: ConstructibleFunction) -> tuple[Fraction, Fraction]:
    """(integral of f, integral of f - link/2 over the codimension >= 1 skeleton)."""
    d = k.dim
    if d % 2 == 0:
        raise ComplexError(f"complex dimension must be odd, got {d}")
    lf = link_function(k, f)
    lhs = chi_c_integral(k, f)
    rhs = sum(
        ((-1) ** dim_of(s) * (f(s) - lf(s) / 2) for s in k.simplices if dim_of(s) <= d - 1),
        Fraction(0),
    )
    return lhs, rhs


def singular_link_integral(k: SimplicialComplex, sub) -> tuple[Fraction, Fraction]:
    """Integral over `sub` of the link Euler characteristic, and its predicted value.

    `sub` must contain every simplex whose link is not Euler-like a sphere of
    dimension dim(k) - 1.
    """
    sub = _as_cells(k, sub)
    d = k.dim
    sphere_chi = 1 - (-1) ** d
    lk = link_euler(k)
    bad = [s for s in k.simplices if s not in sub and lk[s] != sphere_chi]
    if bad:
        raise ComplexError(f"sub-complex misses singular simplices: {[sorted(map(str, s)) for s in bad]}")
    lhs = sum(((-1) ** dim_of(s) * lk[s] for s in sub), Fraction(0))
    rhs = Fraction(0) if d % 2 == 0 else Fraction(-2 * chi_c(k.simplices - sub))
    return lhs, rhs


def region_boundary_identity(k: SimplicialComplex, wall, singular) -> tuple[Fraction, Fraction]:
    """Link Euler integral over singular boundary points of a region, and its predicted value.

    `k` triangulates a closed region, `wall` is its part on the hypersurface and
    `singular` the singular points of the hypersurface lying in the region.
    """
    wall = _as_cells(k, wall)
    singular = _as_cells(k, singular)
    if not singular <= wall:
        raise ComplexError("singular cells must lie on the wall")
    d = k.dim
    lk = link_euler(k)
    interior_chi = 1 - (-1) ** d
    for s in k.simplices:
        if s in singular:
            continue
        expected = 1 if s in wall else interior_chi
        if lk[s] != expected:
            raise ComplexError(
                f"simplex {sorted(map(str, s))} has link Euler characteristic {lk[s]}, expected {expected}"
            )
    lhs = sum(((-1) ** dim_of(s) * lk[s] for s in singular), Fraction(0))
    smooth_wall = chi_c(wall - singular)
    if d % 2 == 0:
        rhs = Fraction(-smooth_wall)
    else:
        rhs = Fraction(-2 * chi_c(k.simplices - wall) - smooth_wall)
    return lhs, rhs


def boundary_reduction_check(k: SimplicialComplex, f: ConstructibleFunction | None = None, *,
                             kind: str = "odd", sub=None, wall=None, singular=None) -> bool:
    """Run one of the boundary-reduction identities; kind in {odd, link, region}."""
    if kind == "odd":
        if f is None:
            raise ComplexError("a constructible function is required")
        lhs, rhs = odd_dimension_reduction(k, f)
    elif kind == "link":
        if sub is None:
            raise ComplexError("a sub-complex is required")
        lhs, rhs = singular_link_integral(k, sub)
    elif kind == "region":
        if wall is None or singular is None:
            raise ComplexError("wall and singular cells are required")
        lhs, rhs = region_boundary_identity(k, wall, singular)
    else:
        raise ComplexError(f"unknown identity kind {kind!r}")
    return lhs == rhs


def _key_to_simplex(key: str) -> frozenset:
    return frozenset(p.strip() for p in key.split(",") if p.strip())


def load_json(data: dict) -> tuple[SimplicialComplex, ConstructibleFunction]:
    try:
        simplices = [[str(v) for v in s] for s in data["simplices"]]
    except (KeyError, TypeError) as exc:
        raise ComplexError(f"complex JSON needs 'simplices': {exc}") from None
    k = SimplicialComplex(simplices)
    values = {}
    for key, v in (data.get("values") or {}).items():
        s = _key_to_simplex(key)
        if s not in k.simplices:
            raise ComplexError(f"value given on a simplex not in the complex: {key!r}")
        values[s] = to_fraction(v)
    return k, ConstructibleFunction(values)


def simplex_key(s) -> str:
    return ",".join(sorted(map(str, s)))


def values_to_json(values: Mapping[frozenset, Fraction]) -> dict:
    return {simplex_key(s): format_fraction(v) for s, v in sorted(values.items(), key=lambda kv: _simplex_key(kv[0]))}
