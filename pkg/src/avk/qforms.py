"""Exact symmetric bilinear forms over labeled bases."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence


class FormError(ValueError):
    pass


class DegenerateBlockError(FormError):
    """Raised when a block that must be nondegenerate has a radical."""

    def __init__(self, message: str, witness: list[Fraction], labels: Sequence):
        super().__init__(message)
        self.witness = witness
        self.labels = list(labels)


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass ints, Fractions or 'p/q' strings")
    return Fraction(value)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class InertiaTriple:
    sigma_plus: int
    sigma_minus: int
    sigma_zero: int

    def __iter__(self):
        return iter((self.sigma_plus, self.sigma_minus, self.sigma_zero))

    def __add__(self, other: "InertiaTriple") -> "InertiaTriple":
        return InertiaTriple(
            self.sigma_plus + other.sigma_plus,
            self.sigma_minus + other.sigma_minus,
            self.sigma_zero + other.sigma_zero,
        )

    @property
    def dimension(self) -> int:
        return self.sigma_plus + self.sigma_minus + self.sigma_zero


Matrix = tuple[tuple[Fraction, ...], ...]


def _freeze(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(to_fraction(x) for x in row) for row in rows)


class SymmetricForm:
    """Immutable symmetric Gram matrix of Fractions indexed by unique labels."""

    __slots__ = ("_basis", "_gram", "_index")

    def __init__(self, basis: Sequence[Hashable], gram: Iterable[Iterable]):
        basis = tuple(basis)
        gram = _freeze(gram)
        n = len(basis)
        if len(set(basis)) != n:
            raise FormError("basis labels must be unique")
        if len(gram) != n or any(len(row) != n for row in gram):
            raise FormError(f"gram must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise FormError(f"gram not symmetric at ({basis[i]!r}, {basis[j]!r})")
        self._basis = basis
        self._gram = gram
        self._index = {b: i for i, b in enumerate(basis)}

    @classmethod
    def diagonal(cls, values: Sequence, basis: Sequence | None = None) -> "SymmetricForm":
        n = len(values)
        basis = tuple(range(n)) if basis is None else basis
        return cls(basis, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, basis: Sequence) -> "SymmetricForm":
        n = len(basis)
        return cls(basis, [[0] * n for _ in range(n)])

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "SymmetricForm":
        return cls(range(len(rows)), rows)

    @property
    def basis(self) -> tuple:
        return self._basis

    @property
    def gram(self) -> Matrix:
        return self._gram

    @property
    def dim(self) -> int:
        return len(self._basis)

    def __len__(self) -> int:
        return len(self._basis)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise FormError(f"unknown label {label!r}") from None

    def __call__(self, a, b) -> Fraction:
        return self._gram[self.index(a)][self.index(b)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymmetricForm):
            return NotImplemented
        return self._basis == other._basis and self._gram == other._gram

    def __hash__(self) -> int:
        return hash((self._basis, self._gram))

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._gram)
        return f"SymmetricForm({list(self._basis)!r}, [{rows}])"

    def matrix_equal(self, other: "SymmetricForm") -> bool:
        return self._gram == other._gram

    def scaled(self, c) -> "SymmetricForm":
        c = to_fraction(c)
        return SymmetricForm(self._basis, [[c * x for x in row] for row in self._gram])

    def relabeled(self, labels: Sequence) -> "SymmetricForm":
        return SymmetricForm(labels, self._gram)

    def __add__(self, other: "SymmetricForm") -> "SymmetricForm":
        if self._basis != other._basis:
            raise FormError("cannot add forms on different bases")
        return SymmetricForm(
            self._basis,
            [[x + y for x, y in zip(r, s)] for r, s in zip(self._gram, other._gram)],
        )

    def __sub__(self, other: "SymmetricForm") -> "SymmetricForm":
        return self + other.scaled(-1)

    def direct_sum(self, other: "SymmetricForm") -> "SymmetricForm":
        n, m = self.dim, other.dim
        rows = [list(r) + [0] * m for r in self._gram]
        rows += [[0] * n + list(r) for r in other._gram]
        return SymmetricForm(self._basis + other._basis, rows)

    def is_nondegenerate(self) -> bool:
        return inertia(self).sigma_zero == 0

    def to_json(self) -> dict:
        return {
            "basis": [_label_to_json(b) for b in self._basis],
            "gram": [[format_fraction(x) for x in row] for row in self._gram],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymmetricForm":
        try:
            basis = [_label_from_json(b) for b in data["basis"]]
            gram = data["gram"]
        except (KeyError, TypeError) as exc:
            raise FormError(f"form JSON needs 'basis' and 'gram': {exc}") from None
        return cls(basis, [[to_fraction(x) for x in row] for row in gram])


def _label_to_json(label):
    if isinstance(label, tuple):
        return [_label_to_json(x) for x in label]
    return label


def _label_from_json(label):
    if isinstance(label, list):
        return tuple(_label_from_json(x) for x in label)
    return label


def _diagonalize(rows: list[list[Fraction]]) -> list[Fraction]:
    """Symmetric congruence reduction; returns the diagonal entries."""
    a = [list(r) for r in rows]
    n = len(a)
    diag: list[Fraction] = []
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            # zero diagonal: look for a nonzero off-diagonal entry, then add row/col j to i
            pair = next(
                ((i, j) for i in active for j in active if j != i and a[i][j] != 0), None
            )
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        pivot = a[p][p]
        for i in active:
            if i == p or a[i][p] == 0:
                continue
            factor = a[i][p] / pivot
            for k in active:
                a[i][k] -= factor * a[p][k]
            for k in active:
                a[k][i] = a[i][k]
        diag.append(pivot)
        active.remove(p)
    return diag


def inertia(f: SymmetricForm) -> InertiaTriple:
    diag = _diagonalize([list(r) for r in f.gram])
    return InertiaTriple(
        sum(1 for x in diag if x > 0),
        sum(1 for x in diag if x < 0),
        sum(1 for x in diag if x == 0),
    )


def kernel(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel via reduced row echelon form."""
    a = [[to_fraction(x) for x in r] for r in rows]
    ncols = len(a[0]) if a else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(a, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def radical_basis(f: SymmetricForm) -> list[list[Fraction]]:
    return kernel(f.gram, f.dim)


def restrict(f: SymmetricForm, labels: Iterable) -> SymmetricForm:
    wanted = set(labels)
    for lab in wanted:
        f.index(lab)
    keep = [i for i, b in enumerate(f.basis) if b in wanted]
    return SymmetricForm(
        [f.basis[i] for i in keep], [[f.gram[i][j] for j in keep] for i in keep]
    )


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Solve a X = b for square nonsingular a (columns of b solved together)."""
    n = len(a)
    m = len(b[0]) if b else 0
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[c])]
    return [row[n:n + m] for row in aug]


def complement_form(f: SymmetricForm, e_labels: Iterable) -> SymmetricForm:
    """Form on the orthogonal complement of span(e_labels) (Schur complement)."""
    e_set = set(e_labels)
    e_block = restrict(f, e_set)
    rest = [b for b in f.basis if b not in e_set]
    if e_block.dim == 0:
        return restrict(f, rest)
    rad = radical_basis(e_block)
    if rad:
        raise DegenerateBlockError(
            f"projected block on {list(e_block.basis)!r} is degenerate", rad[0], e_block.basis
        )
    ei = [f.index(b) for b in e_block.basis]
    ri = [f.index(b) for b in rest]
    coupling = [[f.gram[i][j] for j in ri] for i in ei]
    x = solve(e_block.gram, coupling)
    rows = []
    for a, i in enumerate(ri):
        row = []
        for b, j in enumerate(ri):
            row.append(f.gram[i][j] - sum(coupling[k][a] * x[k][b] for k in range(len(ei))))
        rows.append(row)
    return SymmetricForm(rest, rows)


def tensor_scaled(f: SymmetricForm, g: SymmetricForm, c=1) -> SymmetricForm:
    c = to_fraction(c)
    basis = [(a, b) for a in f.basis for b in g.basis]
    rows = []
    for fi in f.gram:
        for gi in g.gram:
            rows.append([c * x * y for x in fi for y in gi])
    return SymmetricForm(basis, rows)


@dataclass(frozen=True)
class CongruenceWitness:
    """g[i][j] == signs[i] * signs[j] * f[perm[i]][perm[j]]."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]


def signed_perm_congruent(
    f: SymmetricForm, g: SymmetricForm
) -> tuple[bool, CongruenceWitness | None]:
    n = f.dim
    if g.dim != n:
        raise FormError("forms must have the same dimension")
    if sorted(f.gram[i][i] for i in range(n)) != sorted(g.gram[i][i] for i in range(n)):
        return False, None
    for perm in itertools.permutations(range(n)):
        if any(f.gram[perm[i]][perm[i]] != g.gram[i][i] for i in range(n)):
            continue
        # first sign fixed to +1: the global flip does not change the form
        for tail in itertools.product((1, -1), repeat=max(n - 1, 0)):
            signs = (1,) + tail if n else ()
            if all(
                signs[i] * signs[j] * f.gram[perm[i]][perm[j]] == g.gram[i][j]
                for i in range(n)
                for j in range(i + 1, n)
            ):
                return True, CongruenceWitness(tuple(perm), signs)
    return False, None
