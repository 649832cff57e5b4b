"""Generic real hyperplane arrangements in RP^d and their partition forms.

Regions of the complement are signed by the product of the defining linear
forms (the number of hyperplanes is even, so the sign is well defined). The
partition form on regions is computed three ways: from face counts of
pairwise intersections, by integrating local normal-crossing forms over the
strata, and (for d = 2) by summing node residues.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping, Sequence

from .localforms import node_residue, normal_crossing_form, smooth_point_form
from .qforms import FormError, InertiaTriple, SymmetricForm, format_fraction, inertia, solve, to_fraction


class ArrangementError(ValueError):
    pass


def _rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                t = m[r][col] / m[rank][col]
                m[r] = [a - t * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def _kernel_vector(rows: Sequence[Sequence[Fraction]], n: int) -> list[Fraction]:
    from .qforms import kernel

    ker = kernel([list(r) for r in rows], n)
    if len(ker) != 1:
        raise ArrangementError("expected a one-dimensional intersection")
    return list(ker[0])


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _normalize(sv: tuple[int, ...]) -> tuple[int, ...]:
    for s in sv:
        if s:
            return sv if s > 0 else tuple(-x for x in sv)
    return sv


@dataclass(frozen=True)
class Arrangement:
    """m = 2k hyperplanes of RP^d given by coefficient vectors of length d + 1."""

    d: int
    hyperplanes: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ArrangementError(f"d must be a positive integer, got {self.d!r}")
        hs = tuple(tuple(to_fraction(c) for c in h) for h in self.hyperplanes)
        object.__setattr__(self, "hyperplanes", hs)
        m = len(hs)
        if m % 2:
            raise ArrangementError(f"the number of hyperplanes must be even, got {m}")
        if m < self.d:
            raise ArrangementError(f"need at least d={self.d} hyperplanes, got {m}")
        for i, h in enumerate(hs):
            if len(h) != self.d + 1:
                raise ArrangementError(f"hyperplane {i} needs {self.d + 1} coefficients, got {len(h)}")
        size = min(m, self.d + 1)
        for subset in combinations(range(m), size):
            if _rank([hs[i] for i in subset]) < size:
                raise ArrangementError(f"not in general position: hyperplanes {list(subset)} are dependent")

    @property
    def m(self) -> int:
        return len(self.hyperplanes)

    @property
    def k(self) -> int:
        return self.m // 2

    def omega(self) -> int | None:
        """Index of the hyperplane carrying the twist cycle (the last one), or None."""
        return self.m - 1 if (self.d - self.k) % 2 == 0 else None

    @classmethod
    def from_json(cls, data: Mapping) -> "Arrangement":
        try:
            return cls(int(data["d"]), tuple(tuple(h) for h in data["hyperplanes"]))
        except (KeyError, TypeError) as exc:
            raise ArrangementError(f"arrangement JSON needs 'd' and 'hyperplanes': {exc}") from None

    def to_json(self) -> dict:
        return {"d": self.d, "hyperplanes": [[format_fraction(c) for c in h] for h in self.hyperplanes]}


def moment_arrangement(m: int, d: int = 2) -> Arrangement:
    """Hyperplanes (1, t, ..., t^d) for t = 1..m; any d + 1 of them are independent."""
    return Arrangement(d, tuple(tuple(Fraction(t) ** e for e in range(d + 1)) for t in range(1, m + 1)))


@dataclass(frozen=True)
class CellComplex:
    arrangement: Arrangement
    cells: Mapping[tuple[int, ...], int]  # normalized sign vector -> dimension
    regions: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return self.arrangement.d

    def region_labels(self) -> list[str]:
        return [f"W{i + 1}" for i in range(len(self.regions))]

    def region_sign(self, i: int) -> int:
        s = 1
        for x in self.regions[i]:
            s *= x
        return s

    def of_dim(self, k: int) -> list[tuple[int, ...]]:
        return sorted((c for c, dim in self.cells.items() if dim == k), reverse=True)

    def counts(self) -> list[int]:
        return [len(self.of_dim(k)) for k in range(self.d + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** dim for dim in self.cells.values())

    def closure(self, g: tuple[int, ...]) -> list[tuple[int, ...]]:
        return [f for f in self.cells if is_face(f, g)]


def is_face(f: Sequence[int], g: Sequence[int]) -> bool:
    """f lies in the closure of g (both sign vectors up to a global sign)."""
    for s in (1, -1):
        if all(a == 0 or a == s * b for a, b in zip(f, g)):
            return True
    return False


def local_rep(g: Sequence[int], f: Sequence[int]) -> tuple[int, ...]:
    """The representative of g that agrees with f wherever f is nonzero."""
    for s in (1, -1):
        rep = tuple(s * x for x in g)
        if all(a == 0 or a == b for a, b in zip(f, rep)):
            return rep
    raise ArrangementError("cell is not a face of the region")


def enumerate_cells(a: Arrangement) -> CellComplex:
    hs, d, m = a.hyperplanes, a.d, a.m
    cells: dict[tuple[int, ...], int] = {}
    for s in combinations(range(m), d):
        rows = [hs[i] for i in s]
        v = _kernel_vector(rows, d + 1)
        system = rows + [v]
        duals = {}
        for pos, h in enumerate(s):
            rhs = [[Fraction(int(pos == r))] for r in range(d)] + [[Fraction(0)]]
            duals[h] = [row[0] for row in solve(system, rhs)]
        others = [h for h in range(m) if h not in s]
        base = {h: _dot(hs[h], v) for h in others}
        spread = max((sum(abs(_dot(hs[h], duals[g])) for g in s) for h in others), default=Fraction(0))
        delta = Fraction(1) if spread == 0 else min(abs(x) for x in base.values()) / (2 * spread)
        for size in range(d + 1):
            for free in combinations(s, size):
                for signs in product((1, -1), repeat=size):
                    p = list(v)
                    for h, sg in zip(free, signs):
                        p = [x + delta * sg * u for x, u in zip(p, duals[h])]
                    sv = _normalize(tuple(_sgn(_dot(hs[h], p)) for h in range(m)))
                    cells[sv] = d - (m - sum(1 for x in sv if x))
    regions = tuple(sorted((c for c in cells if all(c)), reverse=True))
    return CellComplex(a, cells, regions)


def region_count(m: int, d: int) -> int:
    return sum(comb(m - 1, k) for k in range(d + 1))


@dataclass(frozen=True)
class FaceComponent:
    cells: tuple[tuple[int, ...], ...]
    coefficients: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.coefficients) - 1

    def at(self, t) -> Fraction:
        t = to_fraction(t)
        return sum((c * t ** k for k, c in enumerate(self.coefficients)), Fraction(0))


def face_polynomial(cc: CellComplex, i: int, j: int) -> list[FaceComponent]:
    """Connected components of W_i ∩ W_j with their face-count polynomials."""
    wi, wj = cc.regions[i], cc.regions[j]
    gamma = sorted(f for f in cc.cells if is_face(f, wi) and is_face(f, wj))
    parent = {f: f for f in gamma}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f, g in combinations(gamma, 2):
        if is_face(f, g) or is_face(g, f):
            parent[find(f)] = find(g)
    groups: dict = {}
    for f in gamma:
        groups.setdefault(find(f), []).append(f)
    out = []
    for members in sorted(groups.values(), key=lambda ms: sorted(ms, reverse=True)):
        top = max(cc.cells[f] for f in members)
        coeffs = [0] * (top + 1)
        for f in members:
            coeffs[cc.cells[f]] += 1
        out.append(FaceComponent(tuple(sorted(members, reverse=True)), tuple(coeffs)))
    return out


@dataclass(frozen=True)
class PhiResult:
    """Partition form on the regions: full matrix plus per-sign blocks."""

    basis: tuple[str, ...]
    signs: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    omega: int | None
    route: str

    def __call__(self, a, b) -> Fraction:
        return self.matrix[self.basis.index(a)][self.basis.index(b)]

    def block(self, sign: int) -> SymmetricForm:
        idx = [n for n, s in enumerate(self.signs) if s == sign]
        return SymmetricForm([self.basis[n] for n in idx], [[self.matrix[a][b] for b in idx] for a in idx])

    def cross_block_zero(self) -> bool:
        n = len(self.basis)
        return all(self.matrix[a][b] == 0 for a in range(n) for b in range(n) if self.signs[a] != self.signs[b])

    def is_symmetric(self) -> bool:
        n = len(self.basis)
        return all(self.matrix[a][b] == self.matrix[b][a] for a in range(n) for b in range(n))

    def form(self) -> SymmetricForm:
        if not self.is_symmetric():
            raise FormError("partition form is not symmetric in odd dimension")
        return SymmetricForm(self.basis, self.matrix)

    def same_matrix(self, other: "PhiResult") -> bool:
        return self.basis == other.basis and self.matrix == other.matrix

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "omega": self.omega,
            "basis": list(self.basis),
            "signs": ["+" if s > 0 else "-" for s in self.signs],
            "matrix": [[format_fraction(x) for x in row] for row in self.matrix],
        }


def _result(cc: CellComplex, rows, route: str) -> PhiResult:
    return PhiResult(
        tuple(cc.region_labels()),
        tuple(cc.region_sign(i) for i in range(len(cc.regions))),
        tuple(tuple(r) for r in rows),
        cc.arrangement.omega(),
        route,
    )


def _separated(cc: CellComplex, wi, wj, f, omega) -> bool:
    """Omega passes through f and puts the two regions on opposite sides near f."""
    if omega is None or f[omega] != 0:
        return False
    return local_rep(wi, f)[omega] != local_rep(wj, f)[omega]


def _require_regular(a: Arrangement):
    # with m <= d a region meets some face from two sides and the counts below break
    if a.m < a.d + 1:
        raise ArrangementError(f"partition forms need at least d+1={a.d + 1} hyperplanes, got {a.m}")


def phi_face_route(a: Arrangement, cc: CellComplex | None = None) -> PhiResult:
    _require_regular(a)
    cc = cc or enumerate_cells(a)
    d, omega = a.d, a.omega()
    n = len(cc.regions)
    scale = Fraction(2) ** (1 - d)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            total = Fraction(0)
            sgn = (cc.region_sign(i) - cc.region_sign(j)) // 2
            for comp in face_polynomial(cc, i, j):
                s = comp.dim
                twice = d * d - s + sgn
                if twice % 2:
                    raise ArrangementError(f"non-integral sign exponent for regions {i + 1}, {j + 1}")
                top = max(comp.cells, key=lambda c: cc.cells[c])
                eps = -1 if _separated(cc, cc.regions[i], cc.regions[j], top, omega) else 1
                total += eps * (-1) ** (twice // 2) * scale * comp.at(-2)
            rows[i][j] = total
    return _result(cc, rows, "face")


def _node_value(table, x, wi, wj) -> Fraction:
    """Value of a normal-crossing form at vertex x on the sectors of wi, wj."""
    a, b = [h for h, s in enumerate(x) if s == 0]
    c = 1
    for h, s in enumerate(x):
        if s:
            c *= s
    ri, rj = local_rep(wi, x), local_rep(wj, x)
    # the local germ is c * l_a * l_b; flipping l_a turns it into l_a * l_b
    return table((c * ri[a], ri[b]), (c * rj[a], rj[b]))


def _require_plane(a: Arrangement):
    if a.d != 2:
        raise ArrangementError(f"this route needs d = 2, got d = {a.d}")
    _require_regular(a)


def phi_integral_route(a: Arrangement, cc: CellComplex | None = None) -> PhiResult:
    _require_plane(a)
    cc = cc or enumerate_cells(a)
    omega = a.omega()
    lam_node = normal_crossing_form(2)
    lam_edge = smooth_point_form(2)
    n = len(cc.regions)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        wi = cc.regions[i]
        for j in range(n):
            wj = cc.regions[j]
            total = Fraction(0)
            for f in cc.closure(wi):
                if not is_face(f, wj):
                    continue
                dim = cc.cells[f]
                twist = -1 if _separated(cc, wi, wj, f, omega) else 1
                if dim == 0:
                    total += twist * _node_value(lam_node, f, wi, wj)
                elif dim == 1 and i != j:
                    si = "+" if cc.region_sign(i) > 0 else "-"
                    sj = "+" if cc.region_sign(j) > 0 else "-"
                    total -= twist * lam_edge(si, sj)  # times chi_c of an open edge
            if i == j:
                edges = sum(1 for f in cc.closure(wi) if cc.cells[f] == 1)
                total -= 2 * 1 - edges  # d(d-1)/2 = 1: -(2 chi_c(open cell) + chi_c(open edges))
            rows[i][j] = total
    return _result(cc, rows, "integral")


def phi_residue_route(a: Arrangement, cc: CellComplex | None = None) -> PhiResult:
    _require_plane(a)
    cc = cc or enumerate_cells(a)
    omega = a.omega()
    q = node_residue().q
    n = len(cc.regions)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        wi = cc.regions[i]
        for j in range(n):
            wj = cc.regions[j]
            total = Fraction(0)
            for f in cc.closure(wi):
                if cc.cells[f] == 0 and is_face(f, wj):
                    twist = -1 if _separated(cc, wi, wj, f, omega) else 1
                    total += twist * _node_value(q, f, wi, wj)
            if i == j:
                total -= 2
            rows[i][j] = total
    return _result(cc, rows, "residue")


ROUTES = {"face": phi_face_route, "integral": phi_integral_route, "residue": phi_residue_route}


def double_plane_b2(m: int) -> tuple[int, int]:
    """(b2+, b2-) of the double plane branched along m = 2k generic lines."""
    if m % 2:
        raise ArrangementError(f"m must be even, got {m}")
    k = m // 2
    return (k - 1) * (k - 2) + 1, 3 * k * (k - 1) + 1 - k * (2 * k - 1)


def middle_betti(m: int, d: int) -> int:
    return comb(m - 2, d) + (1 if d % 2 == 0 else 0)


def chi_real_double(m: int, regions_of_sign: int) -> int:
    """Euler characteristic of the real double cover over the regions of one sign (d = 2)."""
    return 2 * regions_of_sign - comb(m, 2)


def smith_bound(m: int, d: int) -> int:
    return sum(comb(m - 2, k) for k in range(d))


def predict_inertia(m: int, chi_rx: int, d: int = 2) -> InertiaTriple:
    """Exact inertia of one sign block of the partition form of 2k generic lines."""
    if m % 2:
        raise ArrangementError(f"m must be even, got {m}")
    if d != 2:
        raise ArrangementError("closed-form predictions are only available for d = 2")
    b_plus, b_minus = double_plane_b2(m)
    kappa = 1
    sigma_plus = Fraction(b_plus - kappa, 2)
    sigma_minus = Fraction(b_minus + kappa + chi_rx, 2) - 1
    if sigma_plus.denominator != 1 or sigma_minus.denominator != 1:
        raise ArrangementError("non-integral prediction")
    return InertiaTriple(int(sigma_plus), int(sigma_minus), smith_bound(m, d))


@dataclass(frozen=True)
class InertiaCheck:
    sign: int
    predicted: InertiaTriple
    computed: InertiaTriple

    @property
    def ok(self) -> bool:
        return self.predicted == self.computed


def check_inertia_prediction(a: Arrangement, phi: PhiResult | None = None) -> list[InertiaCheck]:
    phi = phi or phi_face_route(a)
    out = []
    for sign in (1, -1):
        block = phi.block(sign)
        pred = predict_inertia(a.m, chi_real_double(a.m, block.dim), a.d)
        out.append(InertiaCheck(sign, pred, inertia(block)))
    return out


def load_arrangement(path) -> Arrangement:
    with open(path, encoding="utf-8") as fh:
        try:
            return Arrangement.from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ArrangementError(f"{path}: invalid JSON: {exc}") from None
