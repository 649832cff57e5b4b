"""Local canonical forms at real hypersurface singularities.

Sectors (local partition regions) carry a sign. Forms are stored in the
sector basis: the basis vector of a sector is its characteristic cochain,
and the complexified basis multiplies negative sectors by i. The canonical
form is not symmetric across opposite signs, so LocalForm holds a general
square matrix; residue forms are symmetric and split by sign.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .qforms import FormError, SymmetricForm, format_fraction, restrict, to_fraction

KINDS = ("lambda", "lambda_bar", "chi", "q", "q_bar", "smooth")


class LocalFormError(ValueError):
    pass


@dataclass(frozen=True)
class Gaussian:
    """Exact Gaussian rational re + i*im."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other: "Gaussian") -> "Gaussian":
        return Gaussian(self.re + other.re, self.im + other.im)

    def __mul__(self, other) -> "Gaussian":
        if isinstance(other, Gaussian):
            return Gaussian(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        other = to_fraction(other)
        return Gaussian(self.re * other, self.im * other)

    __rmul__ = __mul__

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def real_value(self) -> Fraction:
        if self.im != 0:
            raise LocalFormError(f"expected a real value, got {self}")
        return self.re

    def __str__(self) -> str:
        return f"{self.re}+{self.im}i"


def i_power(k: int) -> Gaussian:
    return (Gaussian(Fraction(1)), Gaussian(Fraction(0), Fraction(1)),
            Gaussian(Fraction(-1)), Gaussian(Fraction(0), Fraction(-1)))[k % 4]


def sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


def parse_sign(s) -> int:
    if s in ("+", 1, "+1"):
        return 1
    if s in ("-", -1, "-1"):
        return -1
    raise LocalFormError(f"bad sign {s!r}")


@dataclass(frozen=True)
class LocalForm:
    """Square rational matrix over signed sectors.

    `i_powers[k]` records the complexified basis vector as i**i_powers[k]
    times the real one; it is 0/1 in the sector basis but accumulates under
    tensor products.
    """

    basis: tuple
    signs: tuple
    matrix: tuple
    kind: str = "lambda"
    ambient_d: int = 2
    i_powers: tuple = field(default=None)

    def __post_init__(self):
        n = len(self.basis)
        if len(self.signs) != n or len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise LocalFormError("basis, signs and matrix sizes disagree")
        if len(set(self.basis)) != n:
            raise LocalFormError("sector labels must be unique")
        if self.kind not in KINDS:
            raise LocalFormError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "matrix", tuple(tuple(to_fraction(x) for x in r) for r in self.matrix))
        object.__setattr__(self, "signs", tuple(parse_sign(s) for s in self.signs))
        if self.i_powers is None:
            object.__setattr__(self, "i_powers", tuple(0 if s > 0 else 1 for s in self.signs))
        for s, t in zip(self.signs, self.i_powers):
            if (s > 0) != (t % 2 == 0):
                raise LocalFormError("i-power parity must match the sector sign")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise LocalFormError(f"unknown sector {label!r}") from None

    def __call__(self, a, b) -> Fraction:
        return self.matrix[self.index(a)][self.index(b)]

    def sign_of(self, label) -> int:
        return self.signs[self.index(label)]

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(i))

    def as_symmetric(self) -> SymmetricForm:
        if not self.is_symmetric():
            raise LocalFormError(f"{self.kind} form is not symmetric")
        return SymmetricForm(self.basis, self.matrix)

    def block(self, sign: int) -> SymmetricForm:
        """Restriction to the sectors of one sign (always symmetric for lambda, chi, q)."""
        keep = [k for k, s in enumerate(self.signs) if s == sign]
        return SymmetricForm(
            [self.basis[k] for k in keep], [[self.matrix[a][b] for b in keep] for a in keep]
        )

    def complexified(self) -> list[list[Gaussian]]:
        n = self.dim
        return [
            [i_power(self.i_powers[a] + self.i_powers[b]) * self.matrix[a][b] for b in range(n)]
            for a in range(n)
        ]

    def replace(self, **changes) -> "LocalForm":
        data = dict(basis=self.basis, signs=self.signs, matrix=self.matrix, kind=self.kind,
                    ambient_d=self.ambient_d, i_powers=self.i_powers)
        data.update(changes)
        return LocalForm(**data)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.ambient_d,
            "basis": [_label_json(b) for b in self.basis],
            "signs": [sign_char(s) for s in self.signs],
            "matrix": [[format_fraction(x) for x in r] for r in self.matrix],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LocalForm":
        return cls(
            basis=tuple(data["basis"]),
            signs=tuple(parse_sign(s) for s in data["signs"]),
            matrix=tuple(tuple(to_fraction(x) for x in r) for r in data["matrix"]),
            kind=data.get("kind", "q"),
            ambient_d=int(data.get("d", 2)),
        )


def _label_json(label):
    if isinstance(label, tuple):
        return "".join(sign_char(x) for x in label) if all(x in (1, -1) for x in label) else list(label)
    return label


def from_complexified(
    basis, signs, i_powers, cmatrix: Sequence[Sequence[Gaussian]], kind: str, d: int
) -> LocalForm:
    n = len(basis)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            row.append((i_power(-(i_powers[a] + i_powers[b])) * cmatrix[a][b]).real_value())
        rows.append(row)
    return LocalForm(tuple(basis), tuple(signs), tuple(map(tuple, rows)), kind, d, tuple(i_powers))


# -- normal crossings -------------------------------------------------------


SEED_LAMBDA = ((1, -1), (1, 1))


def lambda_identity_seed() -> tuple[LocalForm, list[list[Gaussian]]]:
    """Canonical form of f(x) = x on the line, real and complexified."""
    lam = LocalForm(((1,), (-1,)), (1, -1), SEED_LAMBDA, "lambda", 1)
    return lam, lam.complexified()


def sign_vectors(d: int) -> list[tuple[int, ...]]:
    return list(itertools.product((1, -1), repeat=d))


def _sign_product(a) -> int:
    p = 1
    for x in a:
        p *= x
    return p


def lambda_normal_crossing(d: int, a: Sequence[int], b: Sequence[int]) -> Fraction:
    """Canonical form of x_1...x_d between the orthant classes of a and b.

    Real basis: the tensor product of the one-variable real bases, so the
    i-exponent subtracts the counts of negative coordinates.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != d or len(b) != d:
        raise LocalFormError("sign vectors must have length d")
    if d < 1:
        raise LocalFormError("d must be positive")
    dist = sum(1 for x, y in zip(a, b) if x != y)
    a_neg = sum(1 for x in a if x < 0)
    b_neg = sum(1 for x in b if x < 0)
    exponent = dist - a_neg - b_neg
    assert exponent % 2 == 0, "odd power of i in a normal-crossing value"
    unit = 1 if exponent % 4 == 0 else -1
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return Fraction(sign * unit * _sign_product(b), 2 ** (d - 1))


def lambda_normal_crossing_complex(d: int, a: Sequence[int], b: Sequence[int]) -> Gaussian:
    dist = sum(1 for x, y in zip(a, b) if x != y)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return i_power(dist) * Fraction(sign * _sign_product(b), 2 ** (d - 1))


def lambda_product(f: LocalForm, g: LocalForm) -> LocalForm:
    """Canonical form of the product germ f(x)g(y) from those of f and g."""
    if f.kind != "lambda" or g.kind != "lambda":
        raise LocalFormError("product formula applies to canonical forms")
    p, q = f.ambient_d, g.ambient_d
    c = Fraction((-1) ** (p * q), 2)
    cf, cg = f.complexified(), g.complexified()
    basis, signs, powers = [], [], []
    for a in range(f.dim):
        for b in range(g.dim):
            basis.append(_concat(f.basis[a], g.basis[b]))
            signs.append(f.signs[a] * g.signs[b])
            powers.append(f.i_powers[a] + g.i_powers[b])
    n = len(basis)
    pairs = [(a, b) for a in range(f.dim) for b in range(g.dim)]
    cmatrix = [[cf[a][a2] * cg[b][b2] * c for (a2, b2) in pairs] for (a, b) in pairs]
    assert len(cmatrix) == n
    return from_complexified(basis, signs, powers, cmatrix, "lambda", p + q)


def _concat(x, y) -> tuple:
    x = x if isinstance(x, tuple) else (x,)
    y = y if isinstance(y, tuple) else (y,)
    return x + y


def iterated_seed_product(d: int) -> LocalForm:
    seed, _ = lambda_identity_seed()
    lam = seed
    for _ in range(d - 1):
        lam = lambda_product(lam, seed)
    return lam


def to_sector_basis(lam: LocalForm) -> LocalForm:
    """Rescale basis vectors so each complexified vector is i^(0 or 1) times the real one."""
    scale = [1 if (t - (t % 2)) % 4 == 0 else -1 for t in lam.i_powers]
    n = lam.dim
    rows = [[scale[a] * scale[b] * lam.matrix[a][b] for b in range(n)] for a in range(n)]
    return lam.replace(matrix=tuple(map(tuple, rows)), i_powers=tuple(t % 2 for t in lam.i_powers))


def normal_crossing_form(d: int) -> LocalForm:
    """Canonical form of x_1...x_d in the sector basis, labeled by sign vectors."""
    vectors = sign_vectors(d)
    signs = [_sign_product(a) for a in vectors]
    rows = [[lambda_normal_crossing_complex(d, a, b) for b in vectors] for a in vectors]
    powers = [0 if s > 0 else 1 for s in signs]
    return from_complexified(vectors, signs, powers, rows, "lambda", d)


def normal_crossing_sectors(d: int) -> "SectorSystem":
    """Orthant sectors on the link sphere: closed spherical simplices."""
    vectors = sign_vectors(d)
    pair = {}
    for a, b in itertools.combinations(vectors, 2):
        dist = sum(1 for x, y in zip(a, b) if x != y)
        pair[(a, b)] = Fraction(1 if dist < d else 0)
    return SectorSystem(
        [(a, _sign_product(a), Fraction(1)) for a in vectors], pair, d
    )


def smooth_point_form(d: int = 2) -> LocalForm:
    """Canonical form at a nonsingular point of a real hypersurface in R^d, d even.

    Its residue vanishes (only singular points contribute to residue sums),
    which pins it down as (-1)^(d(d-1)/2) times the sector Euler form of the
    two half-spheres.
    """
    if d % 2:
        raise LocalFormError("smooth-point form is only provided for even d")
    sectors = SectorSystem(
        [("+", 1, Fraction(1)), ("-", -1, Fraction(1))],
        {("+", "-"): Fraction(1 + (-1) ** d)},  # the equator sphere S^(d-2)
        d,
    )
    chi = chi_form(sectors)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return chi.replace(
        matrix=tuple(tuple(sign * x for x in r) for r in chi.matrix), kind="smooth"
    )


# -- sector Euler form and residue ----------------------------------------


class SectorSystem:
    """Signed sectors with Euler characteristics of sectors and of pairwise intersections."""

    def __init__(self, sectors: Sequence[tuple], chi_pair: Mapping[tuple, object], ambient_d: int = 2):
        self.labels = tuple(s[0] for s in sectors)
        if len(set(self.labels)) != len(self.labels):
            raise LocalFormError("sector labels must be unique")
        self.signs = tuple(parse_sign(s[1]) for s in sectors)
        self.chi_self = tuple(to_fraction(s[2]) for s in sectors)
        self.ambient_d = ambient_d
        pairs: dict[frozenset, Fraction] = {}
        for key, v in chi_pair.items():
            a, b = key
            if a not in self.labels or b not in self.labels:
                raise LocalFormError(f"chi_pair refers to unknown sector in {key!r}")
            k = frozenset((a, b))
            v = to_fraction(v)
            if k in pairs and pairs[k] != v:
                raise LocalFormError(f"chi_pair not symmetric at {key!r}")
            pairs[k] = v
        self._pair = pairs

    def chi_between(self, a, b) -> Fraction:
        if a == b:
            return self.chi_self[self.labels.index(a)]
        return self._pair.get(frozenset((a, b)), Fraction(0))

    def sign_of(self, label) -> int:
        return self.signs[self.labels.index(label)]

    def to_json(self) -> dict:
        pairs = {}
        for i, a in enumerate(self.labels):
            for b in self.labels[i + 1:]:
                v = self.chi_between(a, b)
                if v:
                    pairs[f"{_label_json(a)},{_label_json(b)}"] = format_fraction(v)
        return {
            "d": self.ambient_d,
            "sectors": [
                {"label": _label_json(a), "sign": sign_char(s), "chi": format_fraction(c)}
                for a, s, c in zip(self.labels, self.signs, self.chi_self)
            ],
            "chi_pair": pairs,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SectorSystem":
        sectors = [(s["label"], s["sign"], s.get("chi", 1)) for s in data["sectors"]]
        pairs = {}
        for key, v in (data.get("chi_pair") or {}).items():
            a, b = (p.strip() for p in key.split(","))
            pairs[(a, b)] = v
        return cls(sectors, pairs, int(data.get("d", 2)))


def chi_form(s: SectorSystem) -> LocalForm:
    """Sector Euler form: chi(V_i) on the diagonal, signed half Euler characteristics off it.

    Off-diagonal entries carry the sign of the second sector; with that
    reading the residue form of a normal crossing splits by sign.
    """
    n = len(s.labels)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(s.chi_self[i])
            else:
                row.append(s.signs[j] * s.chi_between(s.labels[i], s.labels[j]) / 2)
        rows.append(row)
    return LocalForm(s.labels, s.signs, tuple(map(tuple, rows)), "chi", s.ambient_d)


@dataclass(frozen=True)
class Residue:
    q: LocalForm
    q_plus: SymmetricForm
    q_minus: SymmetricForm
    q_bar: SymmetricForm | None


def residue_form(lam: LocalForm, s: SectorSystem) -> Residue:
    """q = lambda - (-1)^(d(d-1)/2) chi; checks that q splits by sign."""
    if tuple(lam.basis) != tuple(s.labels):
        raise LocalFormError("canonical form and sector system must share the basis")
    if lam.ambient_d != s.ambient_d:
        raise LocalFormError("ambient dimensions differ")
    d = lam.ambient_d
    chi = chi_form(s)
    c = -1 if (d * (d - 1) // 2) % 2 else 1
    n = lam.dim
    rows = [[lam.matrix[i][j] - c * chi.matrix[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if lam.signs[i] != lam.signs[j] and rows[i][j] != 0:
                raise LocalFormError(
                    f"not a QI^S-consistent input: residue entry ({lam.basis[i]!r}, {lam.basis[j]!r}) "
                    f"across opposite signs is {rows[i][j]}, must vanish"
                )
    q = LocalForm(lam.basis, lam.signs, tuple(map(tuple, rows)), "q", d)
    q_plus, q_minus = q.block(1), q.block(-1)
    q_bar = q_plus.scaled(2) if d % 2 == 0 else None
    return Residue(q, q_plus, q_minus, q_bar)


def residue_from_blocks(plus: SymmetricForm, minus: SymmetricForm, d: int = 2) -> LocalForm:
    """Assemble a residue form from its positive and negative blocks."""
    basis = tuple(plus.basis) + tuple(minus.basis)
    n, m = plus.dim, minus.dim
    rows = [list(r) + [0] * m for r in plus.gram] + [[0] * n + list(r) for r in minus.gram]
    return LocalForm(basis, (1,) * n + (-1,) * m, tuple(map(tuple, rows)), "q", d)


def relative_twist(f: LocalForm, sides: Mapping[Hashable, int]) -> LocalForm:
    """Negate entry (i, j) when sectors i and j lie on opposite sides of the wall."""
    missing = [b for b in f.basis if b not in sides]
    if missing:
        raise LocalFormError(f"side bits missing for sectors {missing!r}")
    n = f.dim
    rows = [
        [f.matrix[i][j] * (-1 if sides[f.basis[i]] != sides[f.basis[j]] else 1) for j in range(n)]
        for i in range(n)
    ]
    return f.replace(matrix=tuple(map(tuple, rows)))


def twist_symmetric(f: SymmetricForm, sides: Mapping[Hashable, int]) -> SymmetricForm:
    n = f.dim
    return SymmetricForm(
        f.basis,
        [[f.gram[i][j] * (-1 if sides[f.basis[i]] != sides[f.basis[j]] else 1) for j in range(n)]
         for i in range(n)],
    )


def lambda_opposite_sign_value(s: SectorSystem, i, j) -> Fraction:
    """Value forced on an opposite-sign pair for an isolated singularity in even dimension 2n.

    Returns sign(v_i) (-1)^n chi(V_i & V_j) / 2. In the row convention used
    for canonical forms here this is the entry lambda(v_j, v_i).
    """
    if s.sign_of(i) == s.sign_of(j):
        raise LocalFormError("sectors have the same sign")
    d = s.ambient_d
    n = d // 2
    return s.sign_of(i) * (-1) ** n * s.chi_between(i, j) / 2


def check_opposite_sign_values(lam: LocalForm, s: SectorSystem) -> list[tuple]:
    """Opposite-sign pairs where lam disagrees with the forced value (empty when consistent)."""
    bad = []
    for a in lam.basis:
        for b in lam.basis:
            if lam.sign_of(a) != lam.sign_of(b):
                expected = lambda_opposite_sign_value(s, a, b)
                if lam(b, a) != expected:
                    bad.append((a, b, lam(b, a), expected))
    return bad


def node_residue() -> Residue:
    return residue_form(normal_crossing_form(2), normal_crossing_sectors(2))
