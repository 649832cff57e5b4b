"""Right-hand sides of the Arnold-Viro, Petrovskii, Smith and Hodge type estimates.

Every function takes an InvariantBundle (a flat map of named exact numbers,
plus Betti tables as lists) and returns rows (id, lhs, rhs). Hypotheses such
as "the curve has only QI^S singularities" are never checked here; the
caller asserts them and the report echoes the assertion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .qforms import format_fraction, to_fraction


class BoundsError(ValueError):
    pass


HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Row:
    id: str
    lhs: Fraction | None
    rhs: Fraction
    relation: str = "<="

    @property
    def slack(self) -> Fraction | None:
        return None if self.lhs is None else self.rhs - self.lhs

    @property
    def verdict(self) -> str:
        if self.lhs is None:
            return "value"
        if self.relation == "=":
            return "holds" if self.slack == 0 else "fails"
        return "holds" if self.slack >= 0 else "fails"

    def to_json(self) -> dict:
        fmt = lambda x: None if x is None else format_fraction(x)
        return {"id": self.id, "relation": self.relation, "lhs": fmt(self.lhs), "rhs": fmt(self.rhs),
                "slack": fmt(self.slack), "verdict": self.verdict}


@dataclass(frozen=True)
class BoundsReport:
    rows: tuple[Row, ...]
    asserted: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(r.verdict != "fails" for r in self.rows)

    def row(self, id_: str) -> Row:
        for r in self.rows:
            if r.id == id_:
                return r
        raise KeyError(id_)

    def to_json(self) -> dict:
        return {"asserted": list(self.asserted), "rows": [r.to_json() for r in self.rows]}


@dataclass
class InvariantBundle:
    """Named invariants. Scalars are exact rationals; Betti tables are lists of integers."""

    values: dict = field(default_factory=dict)
    asserted: tuple[str, ...] = ()

    def __post_init__(self):
        clean = {}
        for key, v in dict(self.values).items():
            if isinstance(v, bool):
                clean[key] = v
            elif isinstance(v, (list, tuple)):
                clean[key] = [to_fraction(x) for x in v]
            else:
                clean[key] = to_fraction(v)
        if "n" in clean and "d" in clean and clean["d"] != 2 * clean["n"]:
            raise BoundsError(f"inconsistent dimensions: d={clean['d']} but n={clean['n']}")
        if "d" in clean and "n" not in clean and clean["d"] % 2 == 0:
            clean["n"] = clean["d"] / 2
        if "mu_plus" in clean and "mu_zero" in clean:
            p = HALF * (clean["mu_plus"] + clean["mu_zero"])
            if "frak_p" in clean and clean["frak_p"] != p:
                raise BoundsError(f"frak_p={clean['frak_p']} disagrees with (mu_plus + mu_zero)/2 = {p}")
            clean.setdefault("frak_p", p)
        self.values = clean

    def has(self, *names: str) -> bool:
        return all(n in self.values for n in names)

    def get(self, name: str, context: str):
        if name not in self.values:
            raise BoundsError(f"{context}: missing field {name!r}")
        return self.values[name]

    def opt(self, name: str, default=Fraction(0)):
        return self.values.get(name, default)

    def varkappa(self, context: str) -> int:
        n = self.get("n", context)
        return 1 if n % 2 == 0 else -1

    def kappa(self, context: str) -> int:
        return (1 - self.varkappa(context)) // 2

    def sigma(self, which: str, context: str) -> Fraction | None:
        return self.values.get(f"sigma_{which}")

    @classmethod
    def from_json(cls, data: Mapping) -> "InvariantBundle":
        data = dict(data)
        asserted = tuple(data.pop("asserted", ()))
        try:
            return cls(data, asserted)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise BoundsError(f"bad invariant bundle: {exc}") from None

    def to_json(self) -> dict:
        out = {}
        for key, v in sorted(self.values.items()):
            if isinstance(v, bool):
                out[key] = v
            elif isinstance(v, list):
                out[key] = [format_fraction(x) for x in v]
            else:
                out[key] = format_fraction(v)
        if self.asserted:
            out["asserted"] = list(self.asserted)
        return out


def load_bundle(path) -> InvariantBundle:
    with open(path, encoding="utf-8") as fh:
        try:
            return InvariantBundle.from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise BoundsError(f"{path}: invalid JSON: {exc}") from None


def _lhs(iv: InvariantBundle, *names: str) -> Fraction | None:
    vals = [iv.values.get(f"sigma_{n}") for n in names]
    return None if any(v is None for v in vals) else sum(vals, Fraction(0))


def _sigma_zero(iv: InvariantBundle, context: str) -> Fraction:
    return iv.get("sigma_zero", context)


# ---------------------------------------------------------------------------
# classical constants


def petrovskii_classic(k: int) -> tuple[Fraction, Fraction]:
    """Lower and upper bound for p - n on a smooth curve of degree 2k."""
    if k < 1:
        raise BoundsError(f"k must be positive, got {k}")
    low = Fraction(3 * k * (k - 1), 2)
    return low, low + 1


def double_plane_betti(k: int) -> tuple[int, int, int]:
    """(b2+, b2-, p_g) of the double plane branched along a smooth curve of degree 2k."""
    if k < 1:
        raise BoundsError(f"k must be positive, got {k}")
    p_g = (k - 1) * (k - 2) // 2
    return 2 * p_g + 1, 3 * k * (k - 1) + 1, p_g


# ---------------------------------------------------------------------------
# Arnold-Viro type estimates, one function per variant


def _plane_quotient(iv: InvariantBundle) -> list[Row]:
    ctx = "quotient-manifold-plane"
    k, p = iv.get("k", ctx), iv.get("frak_p", ctx)
    r_nu = iv.get("r", ctx) - iv.get("nu", ctx)
    beta = iv.get("beta", ctx)
    m = min(HALF * r_nu, HALF * iv.get("b0t_A2", ctx), iv.get("b0t_A1", ctx), beta)
    plus = HALF * (k - 1) * (k - 2) - p
    minus = Fraction(3, 2) * k * (k - 1) + HALF * iv.get("chi_RX", ctx) - HALF * iv.get("mu_minus", ctx)
    return [
        Row(f"{ctx}:sigma+", _lhs(iv, "plus"), plus + m),
        Row(f"{ctx}:sigma+zero", _lhs(iv, "plus", "zero"), plus + beta + r_nu),
        Row(f"{ctx}:sigma-", _lhs(iv, "minus"), minus + m),
        Row(f"{ctx}:sigma-zero", _lhs(iv, "minus", "zero"), minus + r_nu),
    ]


def _plane_no_essential(iv: InvariantBundle) -> list[Row]:
    ctx = "no-essential-plane"
    k = iv.get("k", ctx)
    r_nu = iv.get("r", ctx) - iv.get("nu", ctx)
    tail = min(Fraction(0), r_nu - _sigma_zero(iv, ctx))
    plus = HALF * (k - 1) * (k - 2) - HALF * iv.get("mu_plus", ctx)
    minus = Fraction(3, 2) * k * (k - 1) + HALF * iv.get("chi_RX", ctx) - HALF * iv.get("mu_minus", ctx)
    return [Row(f"{ctx}:sigma+", _lhs(iv, "plus"), plus + tail),
            Row(f"{ctx}:sigma-", _lhs(iv, "minus"), minus + tail)]


def _signed_rows(ctx: str, iv: InvariantBundle, anti: Fraction, same: Fraction) -> list[Row]:
    """Rows bounding sigma_{-varkappa} by `anti` and sigma_{varkappa} by `same`."""
    vk = iv.varkappa(ctx)
    anti_name, same_name = ("plus", "minus") if vk == -1 else ("minus", "plus")
    return [Row(f"{ctx}:sigma{'+' if anti_name == 'plus' else '-'}", _lhs(iv, anti_name), anti),
            Row(f"{ctx}:sigma{'+' if same_name == 'plus' else '-'}", _lhs(iv, same_name), same)]


def _complete_intersection(iv: InvariantBundle, ctx: str = "complete-intersection",
                           b_anti=None, b_same=None) -> list[Row]:
    vk, kp = iv.varkappa(ctx), iv.kappa(ctx)
    key = {1: "plus", -1: "minus"}
    if b_anti is None:
        b_anti = iv.get(f"b_d_{key[-vk]}_CX", ctx)
        b_same = iv.get(f"b_d_{key[vk]}_CX", ctx)
    tail = min(Fraction(0), iv.get("delta", ctx) - _sigma_zero(iv, ctx))
    anti = HALF * (b_anti - kp) + tail
    same = HALF * (b_same + iv.get("chi_RX", ctx) + kp) - 1 + tail
    return _signed_rows(ctx, iv, anti, same)


def _homology_manifold(iv: InvariantBundle) -> list[Row]:
    ctx = "homology-manifold-hypersurface"
    vk = iv.varkappa(ctx)
    key = {1: "plus", -1: "minus"}
    b_anti = iv.get(f"b_d_{key[-vk]}_Xtau", ctx) - iv.get(f"mu_{key[-vk]}", ctx)
    b_same = iv.get(f"b_d_{key[vk]}_Xtau", ctx) - iv.get(f"mu_{key[vk]}", ctx)
    return _complete_intersection(iv, ctx, b_anti, b_same)


def _isolated(iv: InvariantBundle) -> list[Row]:
    ctx = "isolated-singularities"
    vk, kp = iv.varkappa(ctx), iv.kappa(ctx)
    key = {1: "plus", -1: "minus"}
    gamma, beta = iv.get("gamma", ctx), iv.get("beta", ctx)
    s0 = _sigma_zero(iv, ctx)
    dp = iv.get("delta_prime", ctx)
    p = HALF * (iv.get(f"mu_{key[-vk]}", ctx) + iv.get("mu_zero", ctx))
    anti = HALF * (iv.get(f"b_d_{key[-vk]}_Xtau", ctx) - kp) - p + min(gamma, beta + dp - s0)
    same = (HALF * (iv.get(f"b_d_{key[vk]}_Xtau", ctx) + iv.get("chi_RX", ctx) + kp - iv.get(f"mu_{key[vk]}", ctx))
            - 1 + min(gamma - beta, dp - s0))
    return _signed_rows(ctx, iv, anti, same)


def _qbar_curve(iv: InvariantBundle) -> list[Row]:
    ctx = "qbar-curve"
    g = lambda n: iv.get(n, ctx)
    beta, t2 = g("beta"), g("t2")
    m = HALF * min(g("b0t_A2"), g("b0t_A") + 2 * beta, g("b2_A") - g("nu"))
    extra = 2 * t2 + g("b1_P") + (g("b2_A1") - g("nu_prime")) + max(Fraction(0), 3 * g("alpha_im0") - 1)
    plus = g("b2_plus_P") + HALF * g("l_k_l") - g("frak_p")
    minus = g("b2_minus_P") + HALF * (g("l_k3l") + g("chi_RX") - g("mu_minus"))
    return [
        Row(f"{ctx}:sigma+", _lhs(iv, "plus"), plus + t2 + m),
        Row(f"{ctx}:sigma+zero", _lhs(iv, "plus", "zero"), plus + extra + beta),
        Row(f"{ctx}:sigma-", _lhs(iv, "minus"), minus + t2 - beta + m),
        Row(f"{ctx}:sigma-zero", _lhs(iv, "minus", "zero"), minus + extra),
    ]


def _qis_curve(iv: InvariantBundle) -> list[Row]:
    ctx = "qis-curve"
    g = lambda n: iv.get(n, ctx)
    tail = min(g("r") - g("nu") - g("sigma_zero"), Fraction(0))
    plus = g("b2_plus_P") + HALF * g("l_k_l") - HALF * g("mu_plus")
    minus = g("b2_minus_P") + HALF * (g("l_k3l") + g("chi_RX") - g("mu_minus"))
    return [Row(f"{ctx}:sigma+", _lhs(iv, "plus"), plus + tail),
            Row(f"{ctx}:sigma-", _lhs(iv, "minus"), minus + tail)]


def _surface(iv: InvariantBundle) -> list[Row]:
    ctx = "surface"
    g = lambda n: iv.get(n, ctx)
    extra = max(Fraction(0), g("alpha_im2") - 1) + g("d_R2")
    return [
        Row(f"{ctx}:sigma+", _lhs(iv, "plus"), g("p_g")),
        Row(f"{ctx}:sigma+zero", _lhs(iv, "plus", "zero"), g("chi_a") + g("b1_res_Z2") + g("beta") + extra),
        Row(f"{ctx}:sigma-", _lhs(iv, "minus"),
            HALF * (g("b2_minus_res") - 1 + g("chi_RX") + g("chi_hat_RE")) - g("b2_Ebar")),
        Row(f"{ctx}:sigma-zero", _lhs(iv, "minus", "zero"),
            HALF * (g("b2_minus_res") + 1 + g("chi_RX") - g("chi_hat_CE")) + g("b1_res_Z2")
            - HALF * g("b1_res") + extra),
    ]


def _arrangement(iv: InvariantBundle) -> list[Row]:
    ctx = "arrangement"
    vk, kp = iv.varkappa(ctx), iv.kappa(ctx)
    key = {1: "plus", -1: "minus"}
    anti, same = key[-vk], key[vk]
    sym = {"plus": "+", "minus": "-"}
    return [
        Row(f"{ctx}:sigma{sym[anti]}zero", _lhs(iv, anti, "zero"),
            HALF * (iv.get(f"b_d_{anti}_X", ctx) - kp) + iv.get("delta", ctx)),
        Row(f"{ctx}:sigma{sym[same]}", _lhs(iv, same),
            HALF * (iv.get(f"b_d_{same}_X", ctx) + kp + iv.get("chi_RX", ctx)) - 1),
    ]


ARNOLD_VIRO: dict[str, Callable[[InvariantBundle], list[Row]]] = {
    "quotient-manifold-plane": _plane_quotient,
    "no-essential-plane": _plane_no_essential,
    "homology-manifold-hypersurface": _homology_manifold,
    "complete-intersection": _complete_intersection,
    "isolated-singularities": _isolated,
    "qbar-curve": _qbar_curve,
    "qis-curve": _qis_curve,
    "surface": _surface,
    "arrangement": _arrangement,
}


def arnold_viro_rhs(variant: str, iv: InvariantBundle) -> BoundsReport:
    try:
        fn = ARNOLD_VIRO[variant]
    except KeyError:
        raise BoundsError(f"unknown variant {variant!r}; choose from {', '.join(ARNOLD_VIRO)}") from None
    return BoundsReport(tuple(fn(iv)), iv.asserted)


# ---------------------------------------------------------------------------
# Smith theory


def _table(iv: InvariantBundle, name: str, ctx: str) -> list[Fraction]:
    t = iv.get(name, ctx)
    if not isinstance(t, list):
        raise BoundsError(f"{ctx}: {name!r} must be a list of Betti numbers")
    return t


def _b(t: Sequence[Fraction], k: int) -> Fraction:
    return t[k] if 0 <= k < len(t) else Fraction(0)


def smith_rhs(iv: InvariantBundle) -> BoundsReport:
    """Smith inequalities for an involution and the derived defect estimates, for whatever data is present."""
    rows: list[Row] = []
    if iv.has("betti_Z", "betti_F", "betti_ZcF"):
        ctx = "smith"
        z, f, q = (_table(iv, n, ctx) for n in ("betti_Z", "betti_F", "betti_ZcF"))
        top = max(len(z), len(f), len(q))
        for k in range(top):
            rows.append(Row(f"smith:pair[{k}]", _b(q, k) + _b(f, k), _b(q, k + 1) + _b(z, k)))
        for l in range(top):
            rows.append(Row(f"smith:tail[{l}]", _b(q, l) + sum(f[l:], Fraction(0)), sum(z[l:], Fraction(0))))
        rows.append(Row("smith:total", sum(f, Fraction(0)), sum(z, Fraction(0))))
        if iv.has("betti_Zc"):
            zc = _table(iv, "betti_Zc", ctx)
            for k in range(top):
                rows.append(Row(f"smith:quotient[{k}]", _b(z, k), _b(zc, k) + _b(q, k)))
            if iv.has("nu_k"):
                nu = _table(iv, "nu_k", ctx)
                for k in range(top):
                    rhs = 2 * _b(zc, k) + _b(f, k - 1) - _b(nu, k) - _b(nu, k - 1)
                    rows.append(Row(f"smith:inclusion[{k}]", _b(z, k), rhs))
            if iv.opt("top_class", False) is True:
                m = len(z) - 1
                reduced_f = _b(f, m - 2) - (1 if m - 2 == 0 else 0)
                rows.append(Row("smith:top-quotient", _b(zc, m), Fraction(1), "="))
                rows.append(Row("smith:top-pair", _b(q, m - 1), _b(z, m - 1) + 1))
                rows.append(Row("smith:top-refined", _b(z, m - 1), 2 * _b(zc, m - 1) + reduced_f - 1))
    if iv.has("n"):
        ctx = "defect"
        n = iv.get("n", ctx)
        d = 2 * n
        b_up = iv.opt("b_dplus1_Xbar")
        delta = iv.values.get("delta")
        if iv.has("betti_CX"):
            cx = _table(iv, "betti_CX", ctx)
            rows.append(Row("defect:variety", delta,
                            sum((_b(cx, j) for j in range(int(d) + 1, int(2 * d) + 1)), Fraction(0)) - b_up))
            rows.append(Row("defect:complete-intersection", delta, _b(cx, int(d) + 1) + n - b_up))
        if iv.has("betti_P_A"):
            pa = _table(iv, "betti_P_A", ctx)
            rows.append(Row("defect:double-cover", delta,
                            sum((_b(pa, j) for j in range(int(d) + 1, int(2 * d))), Fraction(0)) + n - 1 - b_up))
        if iv.has("b_d_A", "nu_d"):
            rows.append(Row("defect:isolated", delta, iv.get("b_d_A", ctx) - iv.get("nu_d", ctx) + n - b_up))
    if iv.has("b1_P_Z2", "b0t_A"):
        ctx = "double-cover"
        g = lambda name: iv.get(name, ctx)
        b1p = g("b1_P_Z2")
        if iv.has("b1_Xbar"):
            rows.append(Row("double-cover:b1", g("b1_Xbar"), b1p + HALF * g("b0t_A")))
        if iv.has("b3_Xbar", "b0t_A2", "beta", "b2_A", "nu"):
            m = min(g("b0t_A2"), g("b0t_A") + 2 * g("beta"), g("b2_A") - g("nu"))
            rows.append(Row("double-cover:b3", g("b3_Xbar"), b1p + HALF * m))
        if iv.has("b3_Xbar", "b0t_A1"):
            rows.append(Row("double-cover:b3-coarse", g("b3_Xbar"), b1p + g("b0t_A1")))
        if iv.has("b2_A1", "nu_prime", "alpha_im0"):
            im = max(Fraction(0), 3 * g("alpha_im0") - 1)
            base = g("b2_A1") - g("nu_prime") + im
            if iv.has("b1_Xbar"):
                rows.append(Row("double-cover:defect", iv.values.get("delta_prime"), 2 * b1p - g("b1_Xbar") + base))
            if iv.has("b3_Xbar", "beta", "b2_zero_Xbar"):
                lhs = None if "delta_prime" not in iv.values else g("b2_zero_Xbar") + g("delta_prime")
                rows.append(Row("double-cover:defect-nullity", lhs, 2 * b1p - g("b3_Xbar") + base + g("beta")))
    if not rows:
        raise BoundsError("smith: no Betti tables or defect data present")
    return BoundsReport(tuple(rows), iv.asserted)


# ---------------------------------------------------------------------------
# Hodge theory identities


def _half_integral(x: Fraction, what: str) -> Fraction:
    if x.denominator != 1:
        raise BoundsError(f"{what} = {x} is not an integer: inconsistent inputs")
    return x


def hodge_identities(iv: InvariantBundle) -> BoundsReport:
    """Middle Betti numbers of the quotient by complex conjugation, and the local Milnor-fibre version."""
    rows: list[Row] = []
    key = {1: "plus", -1: "minus"}
    sym = {"plus": "+", "minus": "-"}
    if iv.has("n") and (iv.has("b_d_plus_CX") or iv.has("b_d_minus_CX")):
        ctx = "hodge"
        vk, kp = iv.varkappa(ctx), iv.kappa(ctx)
        if iv.has("t"):
            t = iv.get("t", ctx)
        elif iv.opt("complete_intersection", False) is True:
            t = Fraction(kp)
        else:
            raise BoundsError("hodge: missing field 't' (or set complete_intersection)")
        anti, same = key[-vk], key[vk]
        if iv.has(f"b_d_{anti}_CX"):
            v = _half_integral(HALF * (iv.get(f"b_d_{anti}_CX", ctx) - t), f"b_d{sym[anti]} of the quotient")
            rows.append(Row(f"hodge:quotient-b{sym[anti]}", iv.values.get(f"b_d_{anti}_Xbar"), v, "="))
        if iv.has(f"b_d_{same}_CX"):
            v = _half_integral(HALF * (iv.get(f"b_d_{same}_CX", ctx) + iv.get("chi_RX", ctx) - t),
                               f"b_d{sym[same]} of the quotient")
            rows.append(Row(f"hodge:quotient-b{sym[same]}", iv.values.get(f"b_d_{same}_Xbar"), v, "="))
        if iv.has("chi_Xbar", "sigma_Xbar", "chi_CX", "sigma_CX"):
            d_minus = lambda s: (iv.get("chi_Xbar", ctx) + s * iv.get("sigma_Xbar", ctx)
                                 - HALF * (iv.get("chi_CX", ctx) + s * iv.get("sigma_CX", ctx)))
            rows.append(Row("hodge:defect-anti", d_minus(-vk), Fraction(0), "="))
            rows.append(Row("hodge:defect-same", d_minus(vk), iv.get("chi_RX", ctx), "="))
    if iv.has("n", "b_milnor_plus", "b_milnor_minus", "chi_real_milnor"):
        ctx = "hodge-local"
        vk = iv.varkappa(ctx)
        same = key[vk]
        v = _half_integral(HALF * (iv.get(f"b_milnor_{same}", ctx) + iv.get("chi_real_milnor", ctx) - 1),
                           "local quotient Betti number")
        rows.append(Row(f"hodge-local:quotient-b{sym[same]}", iv.values.get(f"b_milnor_{same}_quotient"), v, "="))
        anti = key[-vk]
        v2 = _half_integral(HALF * (iv.get(f"b_milnor_{anti}", ctx) + iv.opt("b_milnor_zero")),
                            "local quotient Betti number")
        lhs = None
        if iv.has(f"b_milnor_{anti}_quotient"):
            lhs = iv.get(f"b_milnor_{anti}_quotient", ctx) + iv.opt("b_milnor_zero_quotient")
        rows.append(Row(f"hodge-local:quotient-b{sym[anti]}zero", lhs, v2, "="))
    if not rows:
        raise BoundsError("hodge: need n with b_d_plus_CX/b_d_minus_CX, or local Milnor-fibre data")
    return BoundsReport(tuple(rows), iv.asserted)


# ---------------------------------------------------------------------------
# Petrovskii type estimates


def petrovskii_general(iv: InvariantBundle) -> BoundsReport:
    ctx = "petrovskii"
    g = lambda n: iv.get(n, ctx)
    rows: list[Row] = []
    cp2 = iv.opt("surface_is_CP2", False) is True
    if cp2:
        k = g("k")
        b2m, lk3l, lkl, t2, chi_p, b2p = Fraction(0), 3 * k * (k - 1), k * (k - 3), Fraction(0), Fraction(1), Fraction(1)
        b0t = iv.opt("b0t_A")
    else:
        b2m, lk3l, t2 = g("b2_minus_P"), g("l_k3l"), g("t2")
        lkl, b2p, chi_p = iv.values.get("l_k_l"), iv.values.get("b2_plus_P"), iv.values.get("chi_RP")
        b0t = g("b0t_A")
    beta, b0t2, b2a, nu = g("beta"), g("b0t_A2"), g("b2_A"), g("nu")
    half_min = HALF * min(b0t2, b0t + 2 * beta, b2a - nu)
    if b2p is not None and lkl is not None:
        rows.append(Row("petrovskii:genus", iv.values.get("frak_p"), b2p + HALF * lkl + t2 + half_min))
    base = b2m + HALF * lk3l - HALF * g("mu_minus") + t2 - beta + half_min
    for s, name in ((1, "plus"), (-1, "minus")):
        chi = iv.values.get(f"chi_RX_{name}")
        rows.append(Row(f"petrovskii:euler{'+' if s > 0 else '-'}", None if chi is None else -HALF * chi, base))
    lhs = None
    if iv.has("chi_RP_plus", "chi_RP_minus"):
        lhs = abs(g("chi_RP_plus") - g("chi_RP_minus"))
    if cp2:
        rhs = 3 * k * (k - 1) + 1 - g("mu_minus") + min(Fraction(0), b0t2 - 2 * beta, b2a - nu - 2 * beta)
        rows.append(Row("petrovskii:plane", lhs, rhs))
    elif chi_p is not None:
        rhs = (2 * b2m + chi_p + lk3l - g("mu_minus") + 2 * t2
               + min(b0t2 - 2 * beta, b0t, b2a - nu - 2 * beta))
        rows.append(Row("petrovskii:surface", lhs, rhs))
    return BoundsReport(tuple(rows), iv.asserted)


# ---------------------------------------------------------------------------
# curves with topologically non-singular real part


def cuspidal_bounds(iv: InvariantBundle) -> BoundsReport:
    """Oval-count estimates for quasi-cuspidal curves of degree 2k, and the cuspidal specialization."""
    ctx = "cuspidal"
    g = lambda n: iv.get(n, ctx)
    k = g("k")
    e_plus, e_zero, e_minus = g("eps_plus"), g("eps_zero"), g("eps_minus")
    if any(e not in (0, 1) for e in (e_plus, e_zero, e_minus)):
        raise BoundsError("cuspidal: indicators must be 0 or 1")
    expected = 0 if k % 2 == 0 else 1
    if e_plus + e_zero + e_minus != expected:
        raise BoundsError(f"cuspidal: indicators must add up to {expected} for k={k}")
    p_plus, p_zero, p_minus = g("p_plus"), g("p_zero"), g("p_minus")
    n_plus, n_zero, n_minus = g("n_plus"), g("n_zero"), g("n_minus")
    p, n = p_plus + p_zero + p_minus, n_plus + n_zero + n_minus
    mu_p, mu_m = g("mu_plus"), g("mu_minus")
    low = HALF * (k - 1) * (k - 2) - HALF * mu_p
    high = Fraction(3, 2) * k * (k - 1) - HALF * mu_m
    odd = HALF * (1 - (-1) ** int(k))
    even = HALF * (1 + (-1) ** int(k))
    refined = iv.opt("non_parabolic", False) is True
    rows = []
    if iv.has("r", "nu"):
        r_nu = g("r") - g("nu")
        parity = Fraction(1) if refined else odd
        rows += [
            Row("quasi-cuspidal:odd-hyperbolic", n_minus + n_zero + e_minus, low + min(n_zero, r_nu - 1)),
            Row("quasi-cuspidal:even-hyperbolic", p_minus + p_zero, low + min(p_zero, r_nu - parity)),
            Row("quasi-cuspidal:odd-minus-even", n - p_minus, high + min(p_zero, r_nu - parity)),
            Row("quasi-cuspidal:even-minus-odd", p - n_minus + e_plus, high + min(n_zero + 1, r_nu)),
        ]
    drop = Fraction(0) if refined else even
    rows += [
        Row("cuspidal:odd-hyperbolic", n_minus + n_zero + e_minus, low),
        Row("cuspidal:even-hyperbolic", p_minus + p_zero, low + drop),
        Row("cuspidal:odd-minus-even", n - p_minus, high + drop),
        Row("cuspidal:even-minus-odd", p - n_minus + e_plus, high + 1),
    ]
    return BoundsReport(tuple(rows), iv.asserted)


GROUPS = {
    "smith": smith_rhs,
    "hodge": hodge_identities,
    "petrovskii": petrovskii_general,
    "cuspidal": cuspidal_bounds,
}


def run(which: Sequence[str], iv: InvariantBundle) -> BoundsReport:
    """Evaluate several groups, e.g. ['arnold-viro:qis-curve', 'petrovskii']."""
    rows: list[Row] = []
    for item in which:
        item = item.strip()
        if item.startswith("arnold-viro:"):
            rows += arnold_viro_rhs(item.split(":", 1)[1], iv).rows
        elif item in GROUPS:
            rows += GROUPS[item](iv).rows
        else:
            raise BoundsError(f"unknown bound group {item!r}")
    return BoundsReport(tuple(rows), iv.asserted)


# ---------------------------------------------------------------------------
# bundles for line arrangements


def arrangement_bundle(m: int, sign_regions: int, sigma, delta=None) -> InvariantBundle:
    """Invariants of one sign block for 2k generic lines; `sigma` is the inertia triple of that block."""
    from .arrangements import chi_real_double, double_plane_b2, smith_bound

    b_plus, b_minus = double_plane_b2(m)
    return InvariantBundle({
        "n": 1, "k": m // 2, "b_d_plus_X": b_plus, "b_d_minus_X": b_minus,
        "chi_RX": chi_real_double(m, sign_regions),
        "delta": smith_bound(m, 2) if delta is None else delta,
        "sigma_plus": sigma[0], "sigma_minus": sigma[1], "sigma_zero": sigma[2],
    }, ("generic arrangement",))


def curve_bundle(ci, sign: int, sigma) -> InvariantBundle:
    """Bundle for one sign block of a curve, from a curves.CurveInvariants and an inertia triple."""
    if sign not in ci.chi_rx:
        raise BoundsError(f"chi of the real double cover is missing for sign {sign:+d}")
    return InvariantBundle({
        "n": 1, "k": ci.k, "r": ci.r, "nu": ci.nu,
        "mu_plus": ci.mu_plus, "mu_minus": ci.mu_minus, "mu_zero": ci.mu_zero,
        "b2_plus_P": ci.b2_plus_surface, "b2_minus_P": ci.b2_minus_surface,
        "l_k_l": ci.lkl(), "l_k3l": ci.lk3l(), "chi_RX": ci.chi_rx[sign],
        "sigma_plus": sigma[0], "sigma_minus": sigma[1], "sigma_zero": sigma[2],
    })
