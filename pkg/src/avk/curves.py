"""Real plane curves with isolated singularities: global partition forms and gap bookkeeping.

A curve is described combinatorially: the regions of RP^2 minus the curve
(sign and compactly supported Euler characteristic) and, for each real
singular point, a residue form on its local sectors together with the region
each sector belongs to. Nothing is computed from equations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .arrangements import Arrangement, PhiResult, enumerate_cells, is_face
from .localforms import node_residue
from .morsify import boundary_residue, descriptor
from .qforms import SymmetricForm, format_fraction, inertia, to_fraction


class CurveModelError(ValueError):
    pass


def _sign(value) -> int:
    if value in (1, "+", "+1"):
        return 1
    if value in (-1, "-", "-1"):
        return -1
    raise CurveModelError(f"bad sign {value!r}")


@dataclass(frozen=True)
class CurveRegion:
    label: str
    sign: int
    chi_c: Fraction  # of the open region
    omega_nonzero: bool = False  # such regions carry no partition class and drop out of the form


@dataclass(frozen=True)
class SingularPointBinding:
    """A real singular point: residue on its sectors and the region of each sector."""

    label: str
    residue: SymmetricForm
    sector_signs: Mapping[str, int]
    sector_to_region: Mapping[str, str]
    kind: str = "q"
    omega_sides: Mapping[str, int] | None = None
    singularity: str = ""

    def __post_init__(self):
        if self.kind not in ("q", "qbar"):
            raise CurveModelError(f"{self.label}: residue kind must be 'q' or 'qbar'")
        sectors = list(self.residue.basis)
        if set(self.sector_to_region) != set(sectors):
            raise CurveModelError(f"{self.label}: sectors {sorted(self.sector_to_region)} do not match "
                                  f"the residue basis {sectors}")
        for a in sectors:
            for b in sectors:
                if self.sector_signs[a] != self.sector_signs[b] and self.residue(a, b) != 0:
                    raise CurveModelError(f"{self.label}: residue couples sectors {a} and {b} of opposite sign")
        if self.omega_sides is not None and set(self.omega_sides) != set(sectors):
            raise CurveModelError(f"{self.label}: omega sides must be given for every sector")

    @classmethod
    def from_catalog(cls, label: str, name: str, sector_to_region: Mapping[str, str], kind: str = "q",
                     omega_sides: Mapping[str, int] | None = None) -> "SingularPointBinding":
        diagram = descriptor(name).diagram
        res = boundary_residue(diagram, bar_only=(kind == "qbar"))
        signs = {r.label: r.sign for r in diagram.outer}
        if kind == "q":
            form = res.q
        else:
            form = res.q_bar
            sector_to_region = {s: w for s, w in sector_to_region.items() if signs[s] > 0}
            if omega_sides is not None:
                omega_sides = {s: v for s, v in omega_sides.items() if signs[s] > 0}
        return cls(label, form, signs, dict(sector_to_region), kind, omega_sides, name)

    @classmethod
    def node(cls, label: str, sector_to_region: Mapping[str, str],
             omega_sides: Mapping[str, int] | None = None) -> "SingularPointBinding":
        """Transverse crossing of two real branches; sectors '++', '+-', '-+', '--' by side of each branch."""
        lf = node_residue().q
        names = {s: "".join("+" if x > 0 else "-" for x in s) for s in lf.basis}
        basis = [names[s] for s in lf.basis]
        form = SymmetricForm(basis, [[lf(a, b) for b in lf.basis] for a in lf.basis])
        signs = {names[s]: sg for s, sg in zip(lf.basis, lf.signs)}
        return cls(label, form, signs, dict(sector_to_region), "q", omega_sides, "node")

    def to_json(self) -> dict:
        out = {"label": self.label, "kind": self.kind, "sectors": dict(self.sector_to_region)}
        if self.singularity:
            out["singularity"] = self.singularity
        if self.omega_sides is not None:
            out["omega_sides"] = dict(self.omega_sides)
        return out


@dataclass(frozen=True)
class CurveModel:
    k: int
    regions: tuple[CurveRegion, ...]
    points: tuple[SingularPointBinding, ...] = ()
    chi_real_curve: int | None = None

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise CurveModelError(f"half-degree must be a positive integer, got {self.k!r}")
        labels = [r.label for r in self.regions]
        if len(set(labels)) != len(labels):
            raise CurveModelError("duplicate region labels")
        sign = {r.label: r.sign for r in self.regions}
        for p in self.points:
            for s, w in p.sector_to_region.items():
                if w not in sign:
                    raise CurveModelError(f"{p.label}: sector {s} maps to unknown region {w!r}")
                if sign[w] != p.sector_signs[s]:
                    raise CurveModelError(f"{p.label}: sector {s} has sign {p.sector_signs[s]:+d} "
                                          f"but region {w} has sign {sign[w]:+d}")
            if p.omega_sides is not None and self.k % 2:
                raise CurveModelError(f"{p.label}: omega is empty for odd half-degree, no side data allowed")
        if self.chi_real_curve is not None:
            total = sum((r.chi_c for r in self.regions), Fraction(0)) + self.chi_real_curve
            if total != 1:
                raise CurveModelError(f"Euler characteristics add up to {total}, not 1")

    def region(self, label: str) -> CurveRegion:
        for r in self.regions:
            if r.label == label:
                return r
        raise KeyError(label)

    def chi_real_double(self, sign: int) -> Fraction:
        """Euler characteristic of the real part of the double cover over the regions of this sign."""
        if self.chi_real_curve is None:
            raise CurveModelError("chi of the real curve is needed")
        own = sum((r.chi_c for r in self.regions if r.sign == sign), Fraction(0))
        return 2 * own + self.chi_real_curve

    @classmethod
    def from_json(cls, data: Mapping) -> "CurveModel":
        try:
            regions = tuple(CurveRegion(r["label"], _sign(r["sign"]), to_fraction(r["chi_c"]),
                                        bool(r.get("omega_nonzero", False)))
                            for r in data["regions"])
            points = []
            for p in data.get("points", []):
                sides = p.get("omega_sides")
                if p.get("singularity", "node") == "node":
                    points.append(SingularPointBinding.node(p["label"], p["sectors"], sides))
                else:
                    points.append(SingularPointBinding.from_catalog(
                        p["label"], p["singularity"], p["sectors"], p.get("kind", "q"), sides))
            chi = data.get("chi_real_curve")
            return cls(int(data["k"]), regions, tuple(points), None if chi is None else int(chi))
        except (KeyError, TypeError) as exc:
            raise CurveModelError(f"bad curve model JSON: missing or malformed {exc}") from None

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "regions": [{"label": r.label, "sign": "+" if r.sign > 0 else "-", "chi_c": format_fraction(r.chi_c),
                         **({"omega_nonzero": True} if r.omega_nonzero else {})}
                        for r in self.regions],
            "points": [p.to_json() for p in self.points],
        }
        if self.chi_real_curve is not None:
            out["chi_real_curve"] = self.chi_real_curve
        return out


def load_curve_model(path) -> CurveModel:
    with open(path, encoding="utf-8") as fh:
        try:
            return CurveModel.from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise CurveModelError(f"{path}: invalid JSON: {exc}") from None


def assemble_phi(model: CurveModel, kind: str = "q") -> PhiResult:
    """Sum of residue values over the singular points plus the self term on the diagonal.

    Regions flagged omega_nonzero are skipped. With kind='qbar' only positive regions enter and the self term doubles,
    so that the result is twice the positive block whenever q-residues exist.
    """
    regions = [r for r in model.regions if (kind == "q" or r.sign > 0) and not r.omega_nonzero]
    idx = {r.label: n for n, r in enumerate(regions)}
    n = len(regions)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for p in model.points:
        if p.kind != kind:
            raise CurveModelError(f"{p.label}: residue kind {p.kind!r} does not match the route {kind!r}")
        items = [(s, w) for s, w in p.sector_to_region.items() if w in idx]
        for a, wa in items:
            for b, wb in items:
                twist = 1
                if p.omega_sides is not None and p.omega_sides[a] != p.omega_sides[b]:
                    twist = -1
                rows[idx[wa]][idx[wb]] += twist * p.residue(a, b)
    self_coeff = -2 if kind == "q" else -4
    for r in regions:
        rows[idx[r.label]][idx[r.label]] += self_coeff * r.chi_c
    return PhiResult(tuple(idx), tuple(r.sign for r in regions), tuple(tuple(r) for r in rows),
                     None, "residue" if kind == "q" else "qbar")


def curve_model_from_arrangement(a: Arrangement) -> CurveModel:
    """Encode a generic line arrangement as a nodal curve model."""
    if a.d != 2:
        raise CurveModelError("only line arrangements are curves")
    cc = enumerate_cells(a)
    omega = a.omega()
    labels = cc.region_labels()
    regions = tuple(CurveRegion(labels[i], cc.region_sign(i), Fraction(1)) for i in range(len(cc.regions)))
    points = []
    for x in cc.of_dim(0):
        ha, hb = [h for h, s in enumerate(x) if s == 0]
        c = 1
        for s in x:
            c *= s or 1
        sectors, sides = {}, {}
        for i, w in enumerate(cc.regions):
            if not is_face(x, w):
                continue
            for sg in (1, -1):
                rep = tuple(sg * e for e in w)
                if all(p == 0 or p == q for p, q in zip(x, rep)):
                    key = ("+" if c * rep[ha] > 0 else "-") + ("+" if rep[hb] > 0 else "-")
                    sectors[key] = labels[i]
                    if omega is not None:
                        sides[key] = rep[omega]
        on_omega = omega is not None and x[omega] == 0
        points.append(SingularPointBinding.node(f"v{len(points) + 1}", sectors, sides if on_omega else None))
    return CurveModel(a.k, regions, tuple(points), -comb(a.m, 2))


# ---------------------------------------------------------------------------
# numeric invariants


@dataclass(frozen=True)
class PointInvariants:
    label: str
    mu: int
    branches: int  # complex branches r_x
    real_branches: int  # rho_x
    delta: int
    real: bool = True


def multiplicity_sequence(name: str) -> list[int]:
    """Multiplicities of the infinitely near singular points of a simple curve germ."""
    m = descriptor(name)
    letter, k = m.name[0], int("".join(ch for ch in m.name[1:] if ch.isdigit()))
    if letter == "A":
        return [2] * ((k + 1) // 2)
    if letter == "D":
        # one blow-up splits off the line and leaves an A_{k-5} germ
        return [3] + [2] * ((k - 4) // 2)
    return [3] if k == 6 else [3, 2]


def complex_branches(name: str) -> int:
    m = descriptor(name)
    letter, k = m.name[0], int("".join(ch for ch in m.name[1:] if ch.isdigit()))
    if letter == "A":
        return 2 if k % 2 else 1
    if letter == "D":
        return 3 if k % 2 == 0 else 2
    return 2 if k == 7 else 1


def milnor_splitting(name: str) -> tuple[int, int, int]:
    """(mu+, mu-, mu0) of the suspended germ; simple surface singularities are negative definite."""
    return 0, descriptor(name).mu, 0


def catalog_point(label: str, name: str, real: bool = True) -> PointInvariants:
    d = descriptor(name)
    delta = sum(m * (m - 1) // 2 for m in multiplicity_sequence(name))
    return PointInvariants(label, d.mu, complex_branches(name), d.diagram.rho, delta, real)


@dataclass(frozen=True)
class CurveInvariants:
    """Numeric data of a real curve on a surface with b1 = 0 (defaults describe a curve of degree 2k in CP^2)."""

    k: int
    r: int
    nu: int
    g: int
    g_a: int | None = None
    mu_plus: int = 0
    mu_minus: int = 0
    mu_zero: int = 0
    br_im: int | None = None
    alpha_im: int | None = None
    alpha_plus: int = 0
    points: tuple[PointInvariants, ...] = ()
    chi_real_curve: int | None = None
    b2_plus_surface: int = 1
    b2_minus_surface: int = 0
    l_k_l: int | None = None  # L.(K+L)
    l_k3l: int | None = None  # L.(K+3L)
    # per sign: chi(RX^eps), b1(Int RP_eps), b2(RP_eps), number of regions, regions carrying omega
    chi_rx: Mapping[int, int] = field(default_factory=dict)
    b1_interior: Mapping[int, int] = field(default_factory=dict)
    b2_real_part: Mapping[int, int] = field(default_factory=dict)
    n: Mapping[int, int] = field(default_factory=dict)
    n_omega: Mapping[int, int] = field(default_factory=dict)

    @property
    def b2_surface(self) -> int:
        return self.b2_plus_surface + self.b2_minus_surface

    @property
    def frak_p(self) -> Fraction:
        return Fraction(self.mu_plus + self.mu_zero, 2)

    @property
    def mu(self) -> int:
        return self.mu_plus + self.mu_minus + self.mu_zero

    def lkl(self) -> int:
        return self.k * (self.k - 3) if self.l_k_l is None else self.l_k_l

    def lk3l(self) -> int:
        return 3 * self.k * (self.k - 1) if self.l_k3l is None else self.l_k3l

    def arithmetic_genus(self) -> int:
        return (2 * self.k - 1) * (2 * self.k - 2) // 2 if self.g_a is None else self.g_a

    def imaginary_branch_pairs(self) -> int:
        if self.br_im is not None:
            return self.br_im
        twice = sum(p.branches if not p.real else p.branches - p.real_branches for p in self.points)
        return twice // 2

    def imaginary_point_pairs(self) -> int:
        if self.alpha_im is not None:
            return self.alpha_im
        return sum(1 for p in self.points if not p.real) // 2

    @classmethod
    def from_json(cls, data: Mapping) -> "CurveInvariants":
        def per_sign(key):
            return {_sign(s): int(v) for s, v in data.get(key, {}).items()}

        try:
            points = tuple(
                catalog_point(p.get("label", f"x{i + 1}"), p["catalog"], bool(p.get("real", True)))
                if "catalog" in p else
                PointInvariants(p.get("label", f"x{i + 1}"), int(p["mu"]), int(p["r"]),
                                int(p["rho"]), int(p["delta"]), bool(p.get("real", True)))
                for i, p in enumerate(data.get("points", [])))
            opt = {key: (None if data.get(key) is None else int(data[key]))
                   for key in ("g_a", "br_im", "alpha_im", "chi_real_curve", "l_k_l", "l_k3l")}
            return cls(
                int(data["k"]), int(data["r"]), int(data["nu"]), int(data["g"]),
                mu_plus=int(data.get("mu_plus", 0)), mu_minus=int(data.get("mu_minus", 0)),
                mu_zero=int(data.get("mu_zero", 0)), alpha_plus=int(data.get("alpha_plus", 0)),
                points=points, b2_plus_surface=int(data.get("b2_plus_surface", 1)),
                b2_minus_surface=int(data.get("b2_minus_surface", 0)),
                chi_rx=per_sign("chi_rx"), b1_interior=per_sign("b1_interior"),
                b2_real_part=per_sign("b2_real_part"), n=per_sign("n"), n_omega=per_sign("n_omega"),
                **opt,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CurveModelError(f"bad invariants JSON: {exc}") from None


def load_invariants(path) -> CurveInvariants:
    with open(path, encoding="utf-8") as fh:
        try:
            return CurveInvariants.from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise CurveModelError(f"{path}: invalid JSON: {exc}") from None


@dataclass(frozen=True)
class Check:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def milnor_pluecker_validate(ci: CurveInvariants) -> list[Check]:
    """Milnor's delta relation at each point and the four global counting identities."""
    out = [Check(f"milnor[{p.label}]", Fraction(2 * p.delta), Fraction(p.mu + p.branches - 1)) for p in ci.points]
    real = [p for p in ci.points if p.real]
    sum_delta = sum(p.delta for p in ci.points)
    sum_mu = sum(p.mu for p in ci.points)
    sum_r1 = sum(p.branches - 1 for p in ci.points)
    sum_rho1 = sum(p.real_branches - 1 for p in real)
    out.append(Check("delta-mu-branches", Fraction(2 * sum_delta - sum_mu), Fraction(sum_r1)))
    out.append(Check("imaginary-branches", Fraction(sum_r1 - sum_rho1),
                     Fraction(2 * ci.imaginary_branch_pairs() - 2 * ci.imaginary_point_pairs())))
    if ci.chi_real_curve is not None:
        out.append(Check("euler-real-curve", Fraction(ci.chi_real_curve), Fraction(-sum_rho1)))
    out.append(Check("genus", Fraction(ci.arithmetic_genus() + ci.r - 1), Fraction(ci.g + sum_delta)))
    return out


def gap_delta(ci: CurveInvariants, sign: int) -> Fraction:
    """Total gap of the three inequality families for the regions of one sign, from topology alone."""
    try:
        b1, b2, n_om = ci.b1_interior[sign], ci.b2_real_part[sign], ci.n_omega.get(sign, 0)
    except KeyError as exc:
        raise CurveModelError(f"missing per-sign data {exc} for sign {sign:+d}") from None
    return Fraction(ci.b2_surface - ci.nu + ci.g + ci.imaginary_branch_pairs()
                    - (ci.imaginary_point_pairs() + ci.alpha_plus) - b1 + n_om + b2)


@dataclass(frozen=True)
class Slacks:
    plus: Fraction
    minus: Fraction
    zero: Fraction

    @property
    def total(self) -> Fraction:
        return self.plus + self.minus + self.zero


def inequality_slacks(ci: CurveInvariants, sign: int, block: SymmetricForm) -> Slacks:
    """Right minus left sides of the sigma_+, sigma_- and sigma_0 estimates for one sign block."""
    if sign not in ci.chi_rx:
        raise CurveModelError(f"chi of the real double cover is missing for sign {sign:+d}")
    t = inertia(block)
    plus = ci.b2_plus_surface + Fraction(ci.lkl() - ci.mu_plus, 2) - t.sigma_plus
    minus = ci.b2_minus_surface + Fraction(ci.lk3l() + ci.chi_rx[sign] - ci.mu_minus, 2) - t.sigma_minus
    zero = Fraction(ci.r - ci.nu - t.sigma_zero)
    return Slacks(plus, minus, zero)


@dataclass(frozen=True)
class SharpnessReport:
    sign: int
    radical_rank: int
    expected: int
    hypotheses_asserted: bool

    @property
    def ok(self) -> bool:
        return self.radical_rank == self.expected


def sharpness_check(model: CurveModel, r: int, hypotheses_asserted: bool = True) -> list[SharpnessReport]:
    """Radical rank of each sign block against r - 1 (rational components, all singular branches real)."""
    phi = assemble_phi(model)
    return [SharpnessReport(s, inertia(phi.block(s)).sigma_zero, r - 1, hypotheses_asserted) for s in (1, -1)]


def invariants_from_arrangement(a: Arrangement) -> CurveInvariants:
    """Invariants of 2k generic lines in CP^2 (all nodes real, rational components, one of odd degree)."""
    if a.d != 2:
        raise CurveModelError("only line arrangements are curves")
    m = a.m
    cc = enumerate_cells(a)
    nodes = comb(m, 2)
    counts = {s: sum(1 for i in range(len(cc.regions)) if cc.region_sign(i) == s) for s in (1, -1)}
    pts = tuple(PointInvariants(f"x{i + 1}", 1, 2, 2, 1) for i in range(nodes))
    return CurveInvariants(
        k=a.k, r=m, nu=1, g=0, mu_minus=nodes, points=pts, chi_real_curve=-nodes,
        chi_rx={s: 2 * counts[s] - nodes for s in (1, -1)},
        b1_interior={1: 0, -1: 0}, b2_real_part={1: 0, -1: 0},
        n=counts, n_omega={1: 0, -1: 0},
    )


# ---------------------------------------------------------------------------
# the pentic with three A4 cusps plus the line through two of them


def pentic_line_model(regions: Sequence[tuple[str, int]], y_sectors, cusp1, cusp2, cusp3) -> CurveModel:
    """Pentic with cusps x1, x2, x3 plus the line through x1, x2, meeting the pentic again at y.

    At x1 and x2 the line is transverse to the cusp tangent, so the union has a
    D7 point there; each cusp tuple lists the regions of its sectors as
    (across the line, inside the cusp, beside the cusp, beside the cusp).
    The free cusp x3 is given as (inside, outside).
    """
    sign = dict(regions)
    pts = []
    y = {"top": y_sectors[0], "bottom": y_sectors[1], "left": y_sectors[2], "right": y_sectors[3]}
    pts.append(SingularPointBinding.from_catalog("y", "A1-" if sign[y["top"]] > 0 else "A1+", y))
    for lab, (half, narrow, wide1, wide2) in (("x1", cusp1), ("x2", cusp2)):
        sectors = {"outside_left": half, "tail": narrow, "outside_top": wide1, "outside_bottom": wide2}
        pts.append(SingularPointBinding.from_catalog(lab, "D7-" if sign[half] > 0 else "D7+", sectors))
    narrow, wide = cusp3
    pts.append(SingularPointBinding.from_catalog("x3", "A4-" if sign[narrow] < 0 else "A4+",
                                                 {"tail": narrow, "outside": wide}))
    return CurveModel(3, tuple(CurveRegion(l, s, Fraction(1)) for l, s in regions), tuple(pts), -3)


def pentic_same_side() -> CurveModel:
    """Both cusps on one side of the line: that side splits into three regions."""
    regions = [("B", 1), ("A_left", -1), ("A_mid", -1), ("A_right", -1)]
    return pentic_line_model(regions, ("B", "B", "A_left", "A_right"),
                   ("B", "B", "A_mid", "A_right"), ("B", "B", "A_left", "A_mid"),
                   ("B", "A_mid"))


def pentic_opposite_side() -> CurveModel:
    """The cusps on opposite sides of the line: each side splits into two regions."""
    regions = [("B_left", 1), ("B_right", 1), ("A_left", -1), ("A_right", -1)]
    return pentic_line_model(regions, ("B_left", "B_right", "A_left", "A_right"),
                   ("A_left", "A_right", "B_left", "B_right"), ("B_left", "B_left", "A_left", "A_right"),
                   ("A_left", "B_left"))


def pentic_line_invariants(model: CurveModel) -> CurveInvariants:
    """Sextic = pentic + line: two D7, one A4 and one node, all real with real branches."""
    pts = (catalog_point("x1", "D7-"), catalog_point("x2", "D7-"),
           catalog_point("x3", "A4-"), catalog_point("y", "A1-"))
    counts = {s: sum(1 for r in model.regions if r.sign == s) for s in (1, -1)}
    return CurveInvariants(
        k=3, r=2, nu=1, g=0, mu_minus=sum(p.mu for p in pts), points=pts, chi_real_curve=model.chi_real_curve,
        chi_rx={s: int(model.chi_real_double(s)) for s in (1, -1)},
        b1_interior={1: 0, -1: 0}, b2_real_part={1: 0, -1: 0}, n=counts, n_omega={1: 0, -1: 0},
    )


@dataclass(frozen=True)
class PenticVerdict:
    position: str
    sigma_zero: int
    verdict: str


def pentic_position_test(models: Mapping[str, CurveModel] | None = None) -> list[PenticVerdict]:
    """A reducible sextic must have a singular partition form; a nonsingular one rules the position out."""
    models = models or {"same-side": pentic_same_side(), "opposite-side": pentic_opposite_side()}
    out = []
    for name, model in models.items():
        phi = assemble_phi(model)
        s0 = sum(inertia(phi.block(s)).sigma_zero for s in (1, -1))
        out.append(PenticVerdict(name, s0, "consistent" if s0 >= 1 else "excluded"))
    return out
