"""Residue forms of real surface singularities from resolution data.

Plumbing graphs are contracted by Schur complements; the linking form on
the real link is then read off the real exceptional curves that cut the real
part of a partial resolution into pieces.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .qforms import DegenerateBlockError, SymmetricForm, complement_form, format_fraction, to_fraction


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    """Plumbing graph: vertex weights are self-intersections, edges carry intersection numbers."""

    vertices: tuple[tuple[str, Fraction, bool], ...]
    edges: Mapping[frozenset, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        verts = tuple((str(lab), to_fraction(w), bool(real)) for lab, w, real in self.vertices)
        labels = [v[0] for v in verts]
        if len(set(labels)) != len(labels):
            raise ResolutionError(f"duplicate vertex labels in {labels}")
        edges = {}
        for key, n in dict(self.edges).items():
            key = frozenset(key)
            if len(key) != 2 or not key <= set(labels):
                raise ResolutionError(f"edge {sorted(key)} must join two distinct known vertices")
            edges[key] = to_fraction(n)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    @property
    def labels(self) -> list[str]:
        return [v[0] for v in self.vertices]

    def gram(self) -> SymmetricForm:
        labels = self.labels
        w = {v[0]: v[1] for v in self.vertices}
        rows = [[w[a] if a == b else self.edges.get(frozenset((a, b)), Fraction(0)) for b in labels]
                for a in labels]
        return SymmetricForm(labels, rows)

    def nonreal(self) -> list[str]:
        return [v[0] for v in self.vertices if not v[2]]

    @classmethod
    def chain(cls, weights: Sequence, real: Sequence[bool] | None = None, prefix: str = "e") -> "WeightedGraph":
        real = real or [True] * len(weights)
        labels = [f"{prefix}{k}" for k in range(1, len(weights) + 1)]
        edges = {frozenset((a, b)): 1 for a, b in zip(labels, labels[1:])}
        return cls(tuple(zip(labels, weights, real)), edges)

    def to_json(self) -> dict:
        return {
            "vertices": [{"label": l, "weight": format_fraction(w), "real": r} for l, w, r in self.vertices],
            "edges": [{"ends": sorted(k), "n": format_fraction(n)} for k, n in
                      sorted(self.edges.items(), key=lambda kv: sorted(kv[0]))],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WeightedGraph":
        try:
            verts = [(v["label"], v["weight"], v.get("real", True)) for v in data["vertices"]]
            edges = {frozenset(e["ends"]): e.get("n", 1) for e in data.get("edges", [])}
        except (KeyError, TypeError) as exc:
            raise ResolutionError(f"bad graph JSON: {exc}") from None
        return cls(tuple(verts), edges)


def contract(g: WeightedGraph | SymmetricForm, subset: Iterable) -> SymmetricForm:
    """Intersection form after blowing down the curves in `subset`."""
    form = g.gram() if isinstance(g, WeightedGraph) else g
    try:
        return complement_form(form, subset)
    except DegenerateBlockError as exc:
        raise ResolutionError(f"cannot contract a degenerate configuration: {exc}") from None


def contract_nonreal(g: WeightedGraph) -> SymmetricForm:
    return contract(g, g.nonreal())


def chain_self_intersection(weights: Sequence) -> Fraction:
    """Weight of the first curve of a chain after blowing down the others: w1 - 1/(w2 - 1/(...))."""
    if not weights:
        raise ResolutionError("empty chain")
    ws = [to_fraction(w) for w in weights]
    acc = ws[-1]
    for w in reversed(ws[:-1]):
        if acc == 0:
            raise ResolutionError("degenerate tail in the continued fraction")
        acc = w - 1 / acc
    return acc


@dataclass(frozen=True)
class Wall:
    alpha: Fraction
    epsilon: int
    left: str
    right: str
    label: str = ""


@dataclass(frozen=True)
class BoundarySurfaceData:
    """Pieces of the cut real surface with their Euler characteristics, and the cutting curves."""

    pieces: tuple[tuple[str, Fraction], ...]
    walls: tuple[Wall, ...] = ()

    def __post_init__(self):
        pieces = tuple((str(l), to_fraction(c)) for l, c in self.pieces)
        names = {p[0] for p in pieces}
        if len(names) != len(pieces):
            raise ResolutionError("duplicate piece labels")
        walls = []
        for w in self.walls:
            if w.epsilon not in (1, -1):
                raise ResolutionError(f"wall sign must be +1 or -1, got {w.epsilon!r}")
            if w.left not in names or w.right not in names:
                raise ResolutionError(f"wall {w.label or '?'} touches an unknown piece")
            walls.append(Wall(to_fraction(w.alpha), w.epsilon, w.left, w.right, w.label))
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "walls", tuple(walls))

    @classmethod
    def from_json(cls, data: Mapping) -> "BoundarySurfaceData":
        try:
            pieces = [(p["label"], p["chi"]) for p in data["pieces"]]
            walls = [Wall(to_fraction(w["alpha"]), int(w["epsilon"]), w["left"], w["right"], w.get("label", ""))
                     for w in data.get("walls", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ResolutionError(f"bad boundary-surface JSON: {exc}") from None
        return cls(tuple(pieces), tuple(walls))

    def to_json(self) -> dict:
        return {
            "pieces": [{"label": l, "chi": format_fraction(c)} for l, c in self.pieces],
            "walls": [{"label": w.label, "alpha": format_fraction(w.alpha), "epsilon": w.epsilon,
                       "left": w.left, "right": w.right} for w in self.walls],
        }


def lambda_from_resolution(b: BoundarySurfaceData) -> SymmetricForm:
    """Linking form on the real link components, one per piece.

    Off the diagonal, -1/4 of the signed weights of the walls shared by two
    pieces; on it, +1/4 of those bounding the piece minus its Euler characteristic.
    A wall with the same piece on both sides is one-sided: the link circle
    covers it twice, so it enters the diagonal with its full weight.
    """
    labels = [p[0] for p in b.pieces]
    chi = dict(b.pieces)
    quarter = Fraction(1, 4)
    rows = []
    for a in labels:
        row = []
        for c in labels:
            if a == c:
                s = sum((w.epsilon * w.alpha * (4 if w.left == w.right else 1)
                         for w in b.walls if a in (w.left, w.right)), Fraction(0))
                row.append(quarter * s - chi[a])
            else:
                s = sum((w.epsilon * w.alpha for w in b.walls if {w.left, w.right} == {a, c}), Fraction(0))
                row.append(-quarter * s)
        rows.append(row)
    return SymmetricForm(labels, rows)


def lambda_imaginary_exceptional(alpha) -> Fraction:
    """Self-linking of the real link when no exceptional curve is real; alpha is the contracted weight."""
    alpha = to_fraction(alpha)
    if alpha == 0:
        raise ResolutionError("alpha must be nonzero")
    return -4 / alpha - 1


@dataclass(frozen=True)
class QuasicuspidalResidue:
    q: Fraction
    lam: Fraction


def quasicuspidal_residue(g: int) -> QuasicuspidalResidue:
    """One-component real link bounding an orientable genus-g surface: q = 2g, lambda = 2g - 1."""
    if not isinstance(g, int) or g < 0:
        raise ResolutionError(f"genus must be a non-negative integer, got {g!r}")
    return QuasicuspidalResidue(Fraction(2 * g), Fraction(2 * g - 1))


def residue_from_lambda(lam: SymmetricForm, arc_chi=1) -> SymmetricForm:
    """q = lambda + chi on the link arcs; positive arcs are pairwise disjoint, each with Euler characteristic arc_chi."""
    return lam + SymmetricForm.diagonal([to_fraction(arc_chi)] * lam.dim, list(lam.basis))


# ---------------------------------------------------------------------------
# resolution data for the cross-check against morsification diagrams

def a_odd_plus_graph(n: int) -> WeightedGraph:
    """A_{2n-1}: chain of 2n-1 (-2)-curves; only the middle one is real."""
    k = 2 * n - 1
    return WeightedGraph.chain([-2] * k, [i == n - 1 for i in range(k)])


def a_odd_plus_surface(n: int) -> BoundarySurfaceData:
    g = a_odd_plus_graph(n)
    form = contract_nonreal(g)
    (mid,) = form.basis
    alpha = form(mid, mid)
    # the real curve is two-sided; its collar halves are annuli
    return BoundarySurfaceData((("F1", 0), ("F2", 0)), (Wall(alpha, 1, "F1", "F2", mid),))


# number of real exceptional curves for the quasi-cuspidal cases
QUASICUSPIDAL_REAL_CURVES = {
    "A2-": 2, "A4-": 4, "A6-": 6,
    "D4+": 2, "D6+": 4, "D8+": 6,
    "E6+": 2, "E8": 8,
}


def resolution_route_q(name: str) -> SymmetricForm:
    """Positive residue block predicted from resolution data, for the supported names."""
    if name in QUASICUSPIDAL_REAL_CURVES:
        m = QUASICUSPIDAL_REAL_CURVES[name]
        res = quasicuspidal_residue(m // 2)
        # the single piece has Euler characteristic 1 - m
        lam = lambda_from_resolution(BoundarySurfaceData((("F", 1 - m),)))
        if lam("F", "F") != res.lam:
            raise ResolutionError("quasi-cuspidal routes disagree")
        return SymmetricForm(["F"], [[res.q]])
    if name.startswith("A") and name.endswith("+") and "o" not in name:
        k = int(name[1:-1])
        if k % 2 == 1:
            return residue_from_lambda(lambda_from_resolution(a_odd_plus_surface((k + 1) // 2)))
    raise ResolutionError(f"no resolution data for {name!r}")


RESOLUTION_NAMES = ("A1+", "A3+", "A5+", "A2-", "A4-", "D4+", "D6+", "E6+", "E8")


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ResolutionError(f"{path}: invalid JSON: {exc}") from None
