"""Exact root systems and Weyl groups for the crystallographic types A-G.

Roots are integer vectors in the simple-root basis, weights are rational
vectors in the fundamental-weight basis.  The Cartan matrix follows the
convention ``a[i][j] = <alpha_j, alpha_i^vee>`` so that the simple reflection
``s_i`` sends a root ``c`` to ``c - (sum_j a[i][j] c_j) e_i``.

A :class:`RootSystem` may be built from a decomposable Cartan matrix; this is
how restriction of scalars is modelled (several copies of one simple factor).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
RatVector = tuple[Fraction, ...]

SERIES = "ABCDEFG"

WEYL_ENUMERATION_CAP = 51840

# Dimension of the simple Lie algebra, used as an independent check.
_DIMENSION = {
    "A": lambda n: n * (n + 2),
    "B": lambda n: n * (2 * n + 1),
    "C": lambda n: n * (2 * n + 1),
    "D": lambda n: n * (2 * n - 1),
    "E": lambda n: {6: 78, 7: 133, 8: 248}[n],
    "F": lambda n: 52,
    "G": lambda n: 14,
}

_POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


class RootSystemError(ValueError):
    """Raised for invalid Cartan data."""


def _check_rank(series: str, rank: int) -> None:
    if series not in SERIES:
        raise RootSystemError(f"unknown series {series!r}; expected one of {SERIES}")
    if not isinstance(rank, int) or rank < 1:
        raise RootSystemError(f"rank must be a positive integer, got {rank!r}")
    lower = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}[series]
    upper = {"E": 8, "F": 4, "G": 2}.get(series)
    if rank < lower or (upper is not None and rank > upper):
        bound = f"{lower}" if upper is None else f"{lower}..{upper}"
        raise RootSystemError(f"type {series}{rank} not defined (rank must be {bound})")


def cartan_matrix(series: str, rank: int) -> tuple[Vector, ...]:
    """Cartan matrix of a simple type in Bourbaki numbering."""
    _check_rank(series, rank)
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j] = aij
        a[j][i] = aji

    if series in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if series == "B":
            # alpha_n short
            link(n - 2, n - 1, aij=-1, aji=-2)
        elif series == "C":
            # alpha_n long
            link(n - 2, n - 1, aij=-2, aji=-1)
    elif series == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif series == "E":
        # Bourbaki: 1-3-4-5-6(-7-8), 2 attached to 4
        link(0, 2)
        link(1, 3)
        link(2, 3)
        for i in range(3, n - 1):
            link(i, i + 1)
    elif series == "F":
        link(0, 1)
        link(1, 2, aij=-1, aji=-2)
        link(2, 3)
    elif series == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, aij=-3, aji=-1)
    return tuple(tuple(row) for row in a)


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> tuple[Vector, ...]:
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[offset + i][offset + j] = v
        offset += len(b)
    return tuple(tuple(row) for row in out)


@dataclass(frozen=True)
class CartanDatum:
    """A named simple type together with its Cartan matrix."""

    series: str
    rank: int
    cartan: tuple[Vector, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        expected = cartan_matrix(self.series, self.rank)
        if not self.cartan:
            object.__setattr__(self, "cartan", expected)
            return
        given = tuple(tuple(int(v) for v in row) for row in self.cartan)
        if given != expected:
            raise RootSystemError(
                f"Cartan matrix does not match the generated table for {self.series}{self.rank}"
            )
        object.__setattr__(self, "cartan", given)

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    def dimension(self) -> int:
        return _DIMENSION[self.series](self.rank)

    def classical_positive_root_count(self) -> int:
        return _POSITIVE_ROOT_COUNT[self.series](self.rank)


def _symmetrizer(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Half squared lengths d_i with d_i a_ij symmetric, short roots of each component at 1."""
    n = len(a)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        comp = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and a[i][j] != 0 and d[j] is None:
                    # d_i a_ij = d_j a_ji
                    d[j] = d[i] * a[i][j] / a[j][i]
                    stack.append(j)
                    comp.append(j)
        low = min(d[i] for i in comp)  # type: ignore[type-var]
        for i in comp:
            d[i] = d[i] / low  # type: ignore[operator]
    for i in range(n):
        for j in range(n):
            if d[i] * a[i][j] != d[j] * a[j][i]:  # type: ignore[operator]
                raise RootSystemError("Cartan matrix is not symmetrizable")
    out = []
    for x in d:
        assert x is not None and x.denominator == 1
        out.append(int(x))
    return tuple(out)


def _solve_rational(a: Sequence[Sequence[int]]) -> tuple[RatVector, ...]:
    """Exact inverse of a square integer matrix."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise RootSystemError("singular Cartan matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


@dataclass(frozen=True)
class RootVec:
    coords: Vector

    def __post_init__(self) -> None:
        if any(c != 0 for c in self.coords):
            signs = {c > 0 for c in self.coords if c != 0}
            if len(signs) != 1:
                raise RootSystemError(f"mixed-sign coordinates {self.coords} are not a root")

    @property
    def height(self) -> int:
        return sum(self.coords)

    def is_positive(self) -> bool:
        return self.height > 0

    def __neg__(self) -> RootVec:
        return RootVec(tuple(-c for c in self.coords))


@dataclass(frozen=True)
class WeightVec:
    """Weight in the fundamental-weight basis."""

    coords: RatVector

    @classmethod
    def of(cls, values: Iterable) -> WeightVec:
        return cls(tuple(Fraction(v) for v in values))

    def __add__(self, other: WeightVec) -> WeightVec:
        _same_rank(self.coords, other.coords)
        return WeightVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: WeightVec) -> WeightVec:
        _same_rank(self.coords, other.coords)
        return WeightVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> WeightVec:
        c = Fraction(c)
        return WeightVec(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)


def _same_rank(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise RootSystemError(f"rank mismatch: {len(a)} vs {len(b)}")


def _matmul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    n = len(y[0])
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, cols[j])) for j in range(n)) for row in x)


def _matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element: a word in simple reflections plus its action on root coordinates."""

    word: tuple[int, ...]
    matrix: tuple[Vector, ...]

    def act(self, root: Sequence[int]) -> Vector:
        return _matvec(self.matrix, root)


class RootSystem:
    """Root system attached to a (possibly decomposable) Cartan matrix."""

    def __init__(self, cartan: Sequence[Sequence[int]]):
        self.cartan = tuple(tuple(int(v) for v in row) for row in cartan)
        self.rank = len(self.cartan)
        for i, row in enumerate(self.cartan):
            if len(row) != self.rank or row[i] != 2:
                raise RootSystemError("Cartan matrix must be square with diagonal 2")
            for j, v in enumerate(row):
                if i != j and v not in (0, -1, -2, -3):
                    raise RootSystemError(f"off-diagonal entry {v} at ({i},{j})")
                if i != j and (v == 0) != (self.cartan[j][i] == 0):
                    raise RootSystemError(f"entries ({i},{j}) and ({j},{i}) must vanish together")
        self.half_lengths = _symmetrizer(self.cartan)
        self.inverse_cartan = _solve_rational(self.cartan)

    @classmethod
    def of(cls, datum: CartanDatum, copies: int = 1) -> RootSystem:
        return cls(block_diagonal([datum.cartan] * copies))

    # -- simple reflections -------------------------------------------------

    def reflect(self, i: int, root: Sequence[int]) -> Vector:
        k = sum(self.cartan[i][j] * root[j] for j in range(self.rank))
        return tuple(c - k if j == i else c for j, c in enumerate(root))

    def simple_reflection_matrix(self, i: int) -> tuple[Vector, ...]:
        n = self.rank
        return tuple(
            tuple(int(r == c) - (self.cartan[i][c] if r == i else 0) for c in range(n)) for r in range(n)
        )

    # -- roots ----------------------------------------------------------------

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        """Positive roots ordered by height, then lexicographically."""
        simple = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for r in frontier:
                for i in range(self.rank):
                    s = self.reflect(i, r)
                    if sum(s) > 0 and s not in found:
                        found.add(s)
                        nxt.append(s)
            frontier = nxt
        return tuple(sorted(found, key=lambda r: (sum(r), tuple(-c for c in r))))

    @cached_property
    def root_index(self) -> dict[Vector, int]:
        return {r: k for k, r in enumerate(self.positive_roots)}

    @cached_property
    def all_roots(self) -> frozenset[Vector]:
        pos = self.positive_roots
        return frozenset(pos) | frozenset(tuple(-c for c in r) for r in pos)

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.all_roots

    def coroot(self, root: Sequence[int]) -> Vector:
        """Coroot in the simple-coroot basis: coefficient of alpha_j^vee is c_j d_j / d_alpha."""
        d_alpha = Fraction(self.norm(root), 2)
        out = []
        for c, d in zip(root, self.half_lengths):
            x = Fraction(c * d) / d_alpha
            if x.denominator != 1:
                raise RootSystemError(f"{tuple(root)} is not a root")
            out.append(int(x))
        return tuple(out)

    def norm(self, root: Sequence) -> Fraction:
        """Squared length in the invariant form with short roots of squared length 2."""
        return self.inner_root(root, root)

    def inner_root(self, x: Sequence, y: Sequence) -> Fraction:
        total = Fraction(0)
        for i in range(self.rank):
            if x[i] == 0:
                continue
            for j in range(self.rank):
                if y[j]:
                    total += x[i] * self.half_lengths[i] * self.cartan[i][j] * y[j]
        return total

    def positive_root_table(self) -> list[dict]:
        return [
            {"root": RootVec(r), "coroot": self.coroot(r), "height": sum(r)} for r in self.positive_roots
        ]

    # -- weights --------------------------------------------------------------

    def root_to_weight(self, root: Sequence) -> WeightVec:
        # weight coordinate i is <alpha, alpha_i^vee>
        return WeightVec(tuple(Fraction(sum(self.cartan[i][j] * root[j] for j in range(self.rank))) for i in range(self.rank)))

    def weight_to_root(self, weight: WeightVec) -> RatVector:
        # root coords c solve A c = weight
        return tuple(
            sum((self.inverse_cartan[i][j] * weight.coords[j] for j in range(self.rank)), Fraction(0))
            for i in range(self.rank)
        )

    def pairing(self, weight: WeightVec, coroot: Sequence[int]) -> Fraction:
        _same_rank(weight.coords, coroot)
        return sum((w * c for w, c in zip(weight.coords, coroot)), Fraction(0))

    def inner(self, x: WeightVec, y: WeightVec) -> Fraction:
        """Invariant form on weights: (varpi_i, alpha_j) = d_j delta_ij."""
        _same_rank(x.coords, y.coords)
        yr = self.weight_to_root(y)
        return sum((x.coords[j] * self.half_lengths[j] * yr[j] for j in range(self.rank)), Fraction(0))

    def fundamental_weight(self, i: int) -> WeightVec:
        return WeightVec(tuple(Fraction(int(i == j)) for j in range(self.rank)))

    @cached_property
    def rho(self) -> WeightVec:
        rho = WeightVec(tuple(Fraction(1) for _ in range(self.rank)))
        half_sum = WeightVec(tuple(Fraction(0) for _ in range(self.rank)))
        for r in self.positive_roots:
            half_sum = half_sum + self.root_to_weight(r)
        half_sum = half_sum.scale(Fraction(1, 2))
        if half_sum != rho:
            raise RootSystemError("sum of fundamental weights differs from half the positive-root sum")
        return rho

    def weight_reflection_matrix(self, i: int) -> tuple[Vector, ...]:
        # s_i(lambda) = lambda - lambda_i alpha_i ; alpha_i has weight coords a[k][i]
        n = self.rank
        return tuple(
            tuple(int(r == c) - (self.cartan[r][i] if c == i else 0) for c in range(n)) for r in range(n)
        )

    # -- Weyl group -----------------------------------------------------------

    @cached_property
    def identity(self) -> WeylElement:
        n = self.rank
        return WeylElement((), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def element(self, word: Sequence[int]) -> WeylElement:
        w = self.identity
        for i in word:
            w = self.multiply(w, self.simple(i))
        return w

    def simple(self, i: int) -> WeylElement:
        return WeylElement((i,), self.simple_reflection_matrix(i))

    def multiply(self, x: WeylElement, y: WeylElement) -> WeylElement:
        return WeylElement(x.word + y.word, _matmul(x.matrix, y.matrix))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element(tuple(reversed(w.word)))

    def act_weight(self, w: WeylElement, weight: WeightVec) -> WeightVec:
        # apply reflections right to left
        coords = list(weight.coords)
        for i in reversed(w.word):
            li = coords[i]
            if li:
                for r in range(self.rank):
                    coords[r] -= li * self.cartan[r][i]
        return WeightVec(tuple(coords))

    def inversion_set(self, w: WeylElement) -> tuple[Vector, ...]:
        """Positive roots alpha with w(alpha) negative."""
        return tuple(r for r in self.positive_roots if sum(w.act(r)) < 0)

    def length(self, w: WeylElement) -> int:
        return len(self.inversion_set(w))

    def reduced_word(self, w: WeylElement) -> tuple[int, ...]:
        """Reduced word obtained by stripping right descents."""
        word: list[int] = []
        m = w.matrix
        while True:
            for i in range(self.rank):
                col = tuple(m[r][i] for r in range(self.rank))  # w(alpha_i)
                if sum(col) < 0:
                    word.append(i)
                    m = _matmul(m, self.simple_reflection_matrix(i))
                    break
            else:
                break
        return tuple(reversed(word))

    def reduce(self, w: WeylElement) -> WeylElement:
        return WeylElement(self.reduced_word(w), w.matrix)

    def longest_element(self, indices: Iterable[int] | None = None) -> WeylElement:
        """Longest element of the (parabolic) subgroup, by greedy ascent."""
        idx = list(range(self.rank)) if indices is None else sorted(indices)
        w = self.identity
        while True:
            for i in idx:
                # w s_i is longer iff w(alpha_i) > 0
                col = tuple(w.matrix[r][i] for r in range(self.rank))
                if sum(col) > 0:
                    w = self.multiply(w, self.simple(i))
                    break
            else:
                return w

    def enumerate_group(
        self, generators: Sequence[WeylElement] | None = None, cap: int = WEYL_ENUMERATION_CAP
    ) -> list[WeylElement]:
        """Breadth-first enumeration of the group generated by ``generators``."""
        gens = list(generators) if generators is not None else [self.simple(i) for i in range(self.rank)]
        seen = {self.identity.matrix: self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    x = self.multiply(w, g)
                    if x.matrix not in seen:
                        if len(seen) >= cap:
                            raise RootSystemError(f"group order exceeds enumeration cap {cap}")
                        seen[x.matrix] = x
                        nxt.append(x)
            frontier = nxt
        return list(seen.values())


def build_root_system(datum: CartanDatum) -> list[dict]:
    """Positive-root table of a simple type: root, coroot and height."""
    return RootSystem.of(datum).positive_root_table()


def pairing(weight: WeightVec, coroot: RootVec | Sequence[int]) -> Fraction:
    c = coroot.coords if isinstance(coroot, RootVec) else tuple(coroot)
    _same_rank(weight.coords, c)
    return sum((w * k for w, k in zip(weight.coords, c)), Fraction(0))


def rho(datum: CartanDatum) -> WeightVec:
    return RootSystem.of(datum).rho


def longest_element(datum: CartanDatum) -> WeylElement:
    return RootSystem.of(datum).longest_element()


def inversion_set(datum: CartanDatum, w: WeylElement) -> frozenset[RootVec]:
    return frozenset(RootVec(r) for r in RootSystem.of(datum).inversion_set(w))


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)
