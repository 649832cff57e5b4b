"""Region diagrams of real morsifications of plane curve germs, and their boundary residue forms.

A diagram records, for the closed regions cut out of the Milnor disc by the
zero level of a morsification, their signs, the Euler characteristics of the
regions minus the boundary circle, and which regions meet at saddle points.
The boundary residue is the Schur complement of the region form over the
inner regions.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .localforms import parse_sign, sign_char
from .qforms import (
    DegenerateBlockError,
    SymmetricForm,
    complement_form,
    format_fraction,
    restrict,
    signed_perm_congruent,
    to_fraction,
)


class DiagramError(ValueError):
    pass


class NotQISError(ValueError):
    """The inner block of the region form is degenerate."""

    def __init__(self, message: str, witness=None, labels=()):
        super().__init__(message)
        self.witness = witness
        self.labels = tuple(labels)


@dataclass(frozen=True)
class Region:
    label: str
    sign: int
    chi_minus_rs: Fraction

    def to_json(self) -> dict:
        return {"label": self.label, "sign": sign_char(self.sign),
                "chi_minus_RS": format_fraction(self.chi_minus_rs)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Region":
        try:
            return cls(str(data["label"]), parse_sign(data["sign"]), to_fraction(data["chi_minus_RS"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DiagramError(f"bad region entry {data!r}: {exc}") from None


def _pair(a: str, b: str) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True)
class AGDiagram:
    """Regions of a morsification with all saddles on the zero level.

    `vertices`, when present, lists every saddle as its four local sectors in
    cyclic order; entries 0, 2 and 1, 3 are the opposite (same-sign) sectors.
    Missing saddle counts and boundary counts are then derived from it.
    """

    rho: int
    inner: tuple[Region, ...]
    outer: tuple[Region, ...]
    saddles: Mapping[frozenset, int] = field(default_factory=dict)
    same_sign_boundary: Mapping[str, int] = field(default_factory=dict)
    vertices: tuple[tuple[str, str, str, str], ...] | None = None

    def __post_init__(self):
        inner, outer = tuple(self.inner), tuple(self.outer)
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "outer", outer)
        if not isinstance(self.rho, int) or self.rho < 0:
            raise DiagramError(f"rho must be a non-negative integer, got {self.rho!r}")
        labels = [r.label for r in inner + outer]
        if len(set(labels)) != len(labels):
            raise DiagramError(f"duplicate region labels in {labels}")
        want = 2 * self.rho if self.rho else 1
        if len(outer) != want:
            raise DiagramError(f"rho={self.rho} needs {want} outer regions, got {len(outer)}")
        signs = {r.label: r.sign for r in inner + outer}
        if self.vertices is not None:
            verts = tuple(tuple(v) for v in self.vertices)
            for v in verts:
                if len(v) != 4 or any(x not in signs for x in v):
                    raise DiagramError(f"saddle {v!r} must name four known regions")
                if not (signs[v[0]] == signs[v[2]] == -signs[v[1]] == -signs[v[3]]):
                    raise DiagramError(f"saddle {v!r}: signs must alternate around the point")
            object.__setattr__(self, "vertices", verts)
        counts: dict[frozenset, int] = {}
        for key, n in dict(self.saddles).items():
            key = frozenset(key)
            if len(key) != 2 or any(x not in signs for x in key):
                raise DiagramError(f"saddle count key {sorted(key)!r} must name two distinct regions")
            if not isinstance(n, int) or n < 0:
                raise DiagramError(f"saddle count for {sorted(key)} must be a non-negative integer")
            if n:
                counts[key] = counts.get(key, 0) + n
        if self.vertices is not None:
            derived = _same_sign_counts(self.vertices)
            if counts:
                for key in set(derived) | {k for k in counts if _same(signs, k)}:
                    if derived.get(key, 0) != counts.get(key, 0):
                        raise DiagramError(
                            f"saddle count for {sorted(key)} is {counts.get(key, 0)}, "
                            f"the listed saddles give {derived.get(key, 0)}"
                        )
            else:
                counts = derived
        object.__setattr__(self, "saddles", counts)
        boundary = {lab: _boundary_from_counts(lab, signs, counts) for lab in labels}
        given = dict(self.same_sign_boundary)
        for lab, n in given.items():
            if lab not in signs:
                raise DiagramError(f"boundary count for unknown region {lab!r}")
            if n != boundary[lab]:
                raise DiagramError(
                    f"same-sign boundary count of {lab!r} is {n}, but its same-sign saddle "
                    f"neighbours account for {boundary[lab]} points"
                )
        object.__setattr__(self, "same_sign_boundary", boundary)

    @property
    def regions(self) -> tuple[Region, ...]:
        return self.inner + self.outer

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.regions)

    def region(self, label: str) -> Region:
        for r in self.regions:
            if r.label == label:
                return r
        raise DiagramError(f"unknown region {label!r}")

    def sign_of(self, label: str) -> int:
        return self.region(label).sign

    def saddle_count(self, a: str, b: str) -> int:
        return self.saddles.get(_pair(a, b), 0)

    def flipped(self) -> "AGDiagram":
        """The diagram of -f: every sign reversed."""
        flip = lambda rs: tuple(Region(r.label, -r.sign, r.chi_minus_rs) for r in rs)
        verts = None
        if self.vertices is not None:
            verts = tuple((v[1], v[2], v[3], v[0]) for v in self.vertices)
        return AGDiagram(self.rho, flip(self.inner), flip(self.outer), dict(self.saddles), {}, verts)

    def to_json(self) -> dict:
        out = {
            "rho": self.rho,
            "inner": [r.to_json() for r in self.inner],
            "outer": [r.to_json() for r in self.outer],
            "saddles": {",".join(sorted(k)): n for k, n in sorted(self.saddles.items(), key=lambda kv: sorted(kv[0]))},
            "same_sign_boundary": dict(self.same_sign_boundary),
        }
        if self.vertices is not None:
            out["vertices"] = [list(v) for v in self.vertices]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "AGDiagram":
        if not isinstance(data, Mapping):
            raise DiagramError("diagram JSON must be an object")
        try:
            rho = data["rho"]
            inner = [Region.from_json(r) for r in data.get("inner", [])]
            outer = [Region.from_json(r) for r in data["outer"]]
        except KeyError as exc:
            raise DiagramError(f"diagram JSON is missing {exc}") from None
        saddles = {}
        for key, n in (data.get("saddles") or {}).items():
            parts = [p.strip() for p in key.split(",")]
            if len(parts) != 2:
                raise DiagramError(f"saddle key {key!r} must be 'a,b'")
            saddles[_pair(*parts)] = n
        verts = data.get("vertices")
        return cls(rho, inner, outer, saddles, dict(data.get("same_sign_boundary") or {}),
                   None if verts is None else [tuple(v) for v in verts])


def _same(signs: Mapping[str, int], key: frozenset) -> bool:
    a, b = tuple(key)
    return signs[a] == signs[b]


def _same_sign_counts(vertices) -> dict[frozenset, int]:
    counts: dict[frozenset, int] = {}
    for v in vertices:
        for a, b in ((v[0], v[2]), (v[1], v[3])):
            if a != b:
                counts[_pair(a, b)] = counts.get(_pair(a, b), 0) + 1
    return counts


def _boundary_from_counts(label, signs, counts) -> int:
    # at a saddle only the two opposite sectors share a sign, so distinct
    # same-sign neighbours never share a point
    return sum(n for key, n in counts.items() if label in key and _same(signs, key))


def build_qtau(d: AGDiagram) -> SymmetricForm:
    labels = d.labels
    half = Fraction(1, 2)
    rows = []
    for a in labels:
        ra = d.region(a)
        row = []
        for b in labels:
            if a == b:
                row.append(half * d.same_sign_boundary[a] - 2 * ra.chi_minus_rs)
            elif ra.sign != d.sign_of(b):
                row.append(Fraction(0))
            else:
                row.append(half * d.saddle_count(a, b))
        rows.append(row)
    return SymmetricForm(labels, rows)


def _inner_labels(d: AGDiagram, sign: int | None = None) -> list[str]:
    return [r.label for r in d.inner if sign is None or r.sign == sign]


def is_qis(d: AGDiagram) -> bool:
    return restrict(build_qtau(d), _inner_labels(d)).is_nondegenerate()


def is_qbaris(d: AGDiagram) -> bool:
    return restrict(build_qtau(d), _inner_labels(d, 1)).is_nondegenerate()


@dataclass(frozen=True)
class BoundaryResidue:
    """Residue form on the outer regions, its sign blocks and the doubled positive block."""

    q: SymmetricForm | None
    q_plus: SymmetricForm
    q_minus: SymmetricForm | None
    q_bar: SymmetricForm

    def block(self, sign) -> SymmetricForm:
        s = parse_sign(sign)
        out = self.q_plus if s > 0 else self.q_minus
        if out is None:
            raise NotQISError("negative block unavailable: the inner block is degenerate")
        return out

    def to_json(self) -> dict:
        return {
            "q": None if self.q is None else self.q.to_json(),
            "q_plus": self.q_plus.to_json(),
            "q_minus": None if self.q_minus is None else self.q_minus.to_json(),
            "q_bar": self.q_bar.to_json(),
        }


def _sign_residue(qt: SymmetricForm, d: AGDiagram, sign: int) -> SymmetricForm:
    labels = [r.label for r in d.regions if r.sign == sign]
    block = restrict(qt, labels)
    try:
        return complement_form(block, _inner_labels(d, sign))
    except DegenerateBlockError as exc:
        raise NotQISError("essential singularity (not QI^S)", exc.witness, exc.labels) from None


def boundary_residue(d: AGDiagram, *, bar_only: bool = False) -> BoundaryResidue:
    """Residue on the outer regions; with bar_only only the positive inner block must be nondegenerate."""
    qt = build_qtau(d)
    plus = _sign_residue(qt, d, 1)
    minus = None
    if not bar_only or is_qis(d):
        minus = _sign_residue(qt, d, -1)
    outer = [r.label for r in d.outer]
    q = None
    if minus is not None:
        full = plus.direct_sum(minus)
        idx = {lab: i for i, lab in enumerate(full.basis)}
        q = SymmetricForm(outer, [[full.gram[idx[a]][idx[b]] for b in outer] for a in outer])
    return BoundaryResidue(q, plus, minus, plus.scaled(2))


def total_saddles(d: AGDiagram) -> int:
    if d.vertices is None:
        raise DiagramError("the saddle list is needed to count saddles")
    return len(d.vertices)


def milnor_consistent(d: AGDiagram, mu: int) -> bool:
    """Saddle count equals (mu + rho - 1)/2."""
    return 2 * total_saddles(d) == mu + d.rho - 1


def euler_consistent(d: AGDiagram) -> bool:
    """The region Euler characteristics add up to that of the open disc.

    Each saddle lies on four sectors and each zero-level edge on two regions,
    so the sum over regions exceeds 1 by V - rho minus the pinched sectors.
    """
    verts = d.vertices
    if verts is None:
        raise DiagramError("the saddle list is needed for the Euler check")
    pinches = sum(4 - len(set(v)) for v in verts)
    total = sum((r.chi_minus_rs for r in d.regions), Fraction(0))
    return total == 1 + len(verts) - d.rho - pinches


# ---------------------------------------------------------------------------
# ADE catalog

@dataclass(frozen=True)
class SingularityDescriptor:
    name: str
    polynomial: str
    mu: int
    diagram: AGDiagram
    expected: SymmetricForm
    block: str = "+"
    notes: str = ""

    def computed(self) -> SymmetricForm:
        return boundary_residue(self.diagram).block(self.block)

    def check(self):
        """(matches, witness) for the computed block against the expected matrix."""
        got = self.computed()
        if got.dim != self.expected.dim:
            return False, None
        return signed_perm_congruent(self.expected, got)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "polynomial": self.polynomial,
            "mu": self.mu,
            "block": self.block,
            "expected": self.expected.to_json(),
            "diagram": self.diagram.to_json(),
            "notes": self.notes,
        }


def _diagram(rho: int, regions: Sequence[tuple], vertices: Iterable[tuple]) -> AGDiagram:
    """regions: (label, sign, is_outer, chi_minus_rs)."""
    inner = [Region(lab, s, Fraction(chi)) for lab, s, out, chi in regions if not out]
    outer = [Region(lab, s, Fraction(chi)) for lab, s, out, chi in regions if out]
    return AGDiagram(rho, inner, outer, vertices=[tuple(v) for v in vertices])


def _chain_names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{k}" for k in range(1, n + 1)]


def a_odd_diagram(n: int) -> AGDiagram:
    """-x^(2n) + y^2: two graphs y = +-P(x) crossing n times, lenses between crossings."""
    lenses = _chain_names("lens", n - 1)
    regions = [("top", 1, True, 0), ("bottom", 1, True, 0),
               ("left", -1, True, 0), ("right", -1, True, 0)]
    regions += [(lab, -1, False, 1) for lab in lenses]
    between = ["left"] + lenses + ["right"]
    verts = [("top", between[k], "bottom", between[k + 1]) for k in range(n)]
    return _diagram(2, regions, verts)


def a_even_diagram(n: int) -> AGDiagram:
    """x^(2n+1) + y^2 type: a nodal branch with a loop, n - 1 lenses and a tail."""
    inside = ["loop"] + _chain_names("lens", n - 1) + ["tail"]
    regions = [("outside", 1, True, -n), ("tail", -1, True, 0)]
    regions += [(lab, -1, False, 1) for lab in inside[:-1]]
    verts = [("outside", inside[k], "outside", inside[k + 1]) for k in range(n)]
    return _diagram(1, regions, verts)


def a_dot_diagram(n: int) -> AGDiagram:
    """x^(2n) + y^2: a chain of n negative ovals touching at n - 1 saddles."""
    ovals = _chain_names("oval", n)
    regions = [("w0", 1, True, -(n - 1))] + [(lab, -1, False, 1) for lab in ovals]
    verts = [("w0", ovals[k], "w0", ovals[k + 1]) for k in range(n - 1)]
    return _diagram(0, regions, verts)


def d_even_minus_diagram(n: int) -> AGDiagram:
    """x(x^(2n) - y^2): a line crossing both graphs y = +-P(x) left of their n crossings."""
    lenses = _chain_names("lens", n - 1)
    regions = [
        ("upper_left", 1, True, 0), ("lower_left", 1, True, 0), ("right", 1, True, 0),
        ("middle_left", -1, True, 0), ("upper_right", -1, True, 0), ("lower_right", -1, True, 0),
        ("wedge", 1, False, 1),
    ] + [(lab, 1, False, 1) for lab in lenses]
    chain = ["wedge"] + lenses + ["right"]
    verts = [
        ("upper_left", "middle_left", "wedge", "upper_right"),
        ("lower_left", "middle_left", "wedge", "lower_right"),
    ]
    verts += [(chain[k], "upper_right", chain[k + 1], "lower_right") for k in range(n)]
    return _diagram(3, regions, verts)


def d_even_plus_diagram(n: int) -> AGDiagram:
    """x(x^(2n) + y^2): a line cutting the first of n touching negative ovals."""
    ovals = ["oval1_right"] + [f"oval{k}" for k in range(2, n + 1)]
    regions = [
        ("outside_right", 1, True, 1 - n), ("outside_left", -1, True, 0),
        ("oval1_left", 1, False, 1),
    ] + [(lab, -1, False, 1) for lab in ovals]
    verts = [("outside_right", "oval1_right", "oval1_left", "outside_left")] * 2
    verts += [("outside_right", ovals[k], "outside_right", ovals[k + 1]) for k in range(n - 1)]
    return _diagram(1, regions, verts)


def d_odd_diagram(n: int) -> AGDiagram:
    """x(x^(2n+1) - y^2): a vertical line cutting the loop of a nodal branch with n nodes."""
    chain = ["loop_right"] + _chain_names("lens", n - 1) + ["tail"]
    regions = [
        ("outside_left", 1, True, 0), ("tail", 1, True, 0),
        ("outside_top", -1, True, 0), ("outside_bottom", -1, True, 0),
        ("loop_left", -1, False, 1), ("loop_right", 1, False, 1),
    ] + [(lab, 1, False, 1) for lab in chain[1:-1]]
    verts = [
        ("outside_left", "outside_top", "loop_right", "loop_left"),
        ("outside_left", "outside_bottom", "loop_right", "loop_left"),
    ]
    verts += [(chain[k], "outside_top", chain[k + 1], "outside_bottom") for k in range(n)]
    return _diagram(2, regions, verts)


def e7_diagram() -> AGDiagram:
    """y(y^2 - x^3): a horizontal line through the loop and the tail of a nodal cubic."""
    regions = [
        ("top", 1, True, 0), ("tail_lower", 1, True, 0), ("loop_lower", 1, False, 1),
        ("bottom", -1, True, 0), ("tail_upper", -1, True, 0),
        ("loop_cap", -1, False, 1), ("notch", -1, False, 1),
    ]
    verts = [
        ("top", "loop_cap", "loop_lower", "bottom"),
        ("top", "notch", "loop_lower", "loop_cap"),
        ("top", "tail_upper", "tail_lower", "notch"),
        ("loop_lower", "notch", "tail_lower", "bottom"),
    ]
    return _diagram(2, regions, verts)


def e6_diagram() -> AGDiagram:
    """x^4 - y^3, from the Chebyshev divide T4(x) = T3(y)."""
    regions = [
        ("o_pos", 1, True, 0), ("o_neg", -1, True, 0),
        ("p1", 1, False, 1), ("n1", -1, False, 1), ("n2", -1, False, 1),
    ]
    verts = [("p1", "o_neg", "o_pos", "n1"), ("n2", "p1", "n1", "o_pos"), ("o_pos", "o_neg", "p1", "n2")]
    return _diagram(1, regions, verts)


def e8_diagram() -> AGDiagram:
    """x^5 - y^3, from the Chebyshev divide T5(x) = T3(y)."""
    regions = [
        ("o_pos", 1, True, 0), ("o_neg", -1, True, 0),
        ("p1", 1, False, 1), ("p2", 1, False, 1), ("n1", -1, False, 1), ("n2", -1, False, 1),
    ]
    verts = [
        ("p1", "o_neg", "o_pos", "n1"), ("n2", "p1", "n1", "o_pos"),
        ("p2", "o_neg", "p1", "n2"), ("o_neg", "p2", "n2", "o_pos"),
    ]
    return _diagram(1, regions, verts)


def _f(*rows) -> SymmetricForm:
    return SymmetricForm.from_matrix([[Fraction(x) for x in row] for row in rows])


def expected_matrix(family: str, n: int = 0) -> SymmetricForm:
    """Residue matrices of the simple real surface singularities, by family."""
    h = Fraction(1, 2)
    if family == "A_odd-":
        return _f([h * n, h * n], [h * n, h * n])
    if family == "A_odd+":
        m = Fraction(1, 2 * n)
        return _f([1 - m, m], [m, 1 - m])
    if family == "A_dot-":
        return _f([2 * n - 2])
    if family == "A_dot+":
        return SymmetricForm([], [])
    if family == "A_even-":
        return _f([2 * n])
    if family == "A_even+":
        return _f([Fraction(2 * n, 2 * n + 1)])
    if family == "D_even-":
        return _f([1, h, h], [h, h * (n + 1), h * n], [h, h * n, h * (n + 1)])
    if family == "D_even+":
        return _f([2 * n])
    if family == "D_odd-":
        return _f([2 * n + 1, 1], [1, 1])
    if family == "D_odd+":
        return _f([Fraction(2 * n + 3, 4), Fraction(2 * n + 1, 4)],
                  [Fraction(2 * n + 1, 4), Fraction(2 * n + 3, 4)])
    if family == "E6-":
        return _f([6])
    if family == "E6+":
        return _f([2])
    if family == "E7":
        return _f([Fraction(7, 2), Fraction(3, 2)], [Fraction(3, 2), Fraction(3, 2)])
    if family == "E8":
        return _f([8])
    raise DiagramError(f"unknown family {family!r}")


_NAME = re.compile(r"^([ADE])(\d+)(o|°)?([+-])?$")

DOT_NOTE = ("a negative dot has no positive region: the positive residue is the zero form "
            "on the trivial space, printed as (0)")


def descriptor(name: str) -> SingularityDescriptor:
    """Catalog entry for a simple singularity such as 'A5-', 'A3o+', 'D6-', 'E7'."""
    m = _NAME.match(name.strip())
    if not m:
        raise DiagramError(f"unknown singularity {name!r}")
    letter, k, dot, sign = m.group(1), int(m.group(2)), bool(m.group(3)), m.group(4)
    canon = f"{letter}{k}{'o' if dot else ''}{sign or ''}"

    def entry(poly, mu, diagram, family, n=0, notes=""):
        flip = sign == "+"
        fam = family if family in ("E7", "E8") else family + (sign or "")
        return SingularityDescriptor(canon, poly, mu, diagram.flipped() if flip else diagram,
                                     expected_matrix(fam, n), "+", notes)

    if letter == "A" and sign:
        if dot:
            if k % 2 == 0:
                raise DiagramError(f"dot singularities have odd index, got {name!r}")
            n = (k + 1) // 2
            poly = f"x^{2 * n} + y^2" if sign == "-" else f"-x^{2 * n} - y^2"
            return entry(poly, k, a_dot_diagram(n), "A_dot", n, DOT_NOTE if sign == "+" else "")
        if k % 2 == 1:
            n = (k + 1) // 2
            poly = f"-x^{2 * n} + y^2" if sign == "-" else f"x^{2 * n} - y^2"
            return entry(poly, k, a_odd_diagram(n), "A_odd", n)
        n = k // 2
        poly = f"x^{2 * n + 1} + y^2" if sign == "-" else f"x^{2 * n + 1} - y^2"
        return entry(poly, k, a_even_diagram(n), "A_even", n)
    if letter == "D" and sign and not dot and k >= 4:
        if k % 2 == 0:
            n = (k - 2) // 2
            if sign == "-":
                return SingularityDescriptor(canon, f"x(x^{2 * n} - y^2)", k, d_even_minus_diagram(n),
                                             expected_matrix("D_even-", n))
            return SingularityDescriptor(canon, f"x(x^{2 * n} + y^2)", k, d_even_plus_diagram(n),
                                         expected_matrix("D_even+", n))
        n = (k - 3) // 2
        poly = f"x(x^{2 * n + 1} - y^2)" if sign == "-" else f"-x(x^{2 * n + 1} - y^2)"
        return entry(poly, k, d_odd_diagram(n), "D_odd", n)
    if letter == "E" and not dot:
        if k == 6 and sign:
            poly = "x^4 - y^3" if sign == "-" else "-x^4 - y^3"
            return entry(poly, 6, e6_diagram(), "E6")
        if k == 7 and not sign:
            return entry("y(y^2 - x^3)", 7, e7_diagram(), "E7")
        if k == 8 and not sign:
            return entry("x^5 - y^3", 8, e8_diagram(), "E8")
    raise DiagramError(f"unknown singularity {name!r}")


CATALOG_NAMES = tuple(
    [f"A{2 * n - 1}{s}" for n in (1, 2, 3) for s in "-+"]
    + [f"A{2 * n - 1}o{s}" for n in (1, 2, 3) for s in "-+"]
    + [f"A{2 * n}{s}" for n in (1, 2) for s in "-+"]
    + [f"D{2 * n + 2}{s}" for n in (1, 2) for s in "-+"]
    + [f"D5{s}" for s in "-+"]
    + ["E6-", "E6+", "E7", "E8"]
)


def catalog(name: str) -> SingularityDescriptor:
    return descriptor(name)


def load_diagram(path) -> AGDiagram:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"{path}: invalid JSON: {exc}") from None
    return AGDiagram.from_json(data)
