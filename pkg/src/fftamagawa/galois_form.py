"""Quasi-split forms: diagram automorphisms, restricted roots and rank-one classes.

A quasi-split form is described by one absolutely simple factor, a diagram
automorphism ``tau`` of order 1, 2 or 3 and a restriction-of-scalars degree
``n``.  The absolute system is ``n`` copies of the simple factor; the
Frobenius ``sigma`` moves copy ``i`` to copy ``i + 1`` and applies ``tau``
when wrapping from the last copy back to the first.  All splitting fields
are constant-field extensions, so every place is unramified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .rootsys import WEYL_ENUMERATION_CAP, CartanDatum, RootSystem, RootSystemError, Vector, WeightVec, WeylElement

KINDS = ("SL2", "SU3", "ResSL2", "ResSU3")


class FormError(ValueError):
    """Invalid quasi-split descriptor."""


def _permutation_order(perm: Sequence[int]) -> int:
    order = 1
    seen = set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        i = start
        while i not in seen:
            seen.add(i)
            i = perm[i]
            length += 1
        order = order * length // gcd(order, length)
    return order


def _allowed_orders(series: str, rank: int) -> set[int]:
    if series == "A" and rank >= 2:
        return {1, 2}
    if series == "D":
        return {1, 2, 3} if rank == 4 else {1, 2}
    if series == "E" and rank == 6:
        return {1, 2}
    return {1}


def parse_cycles(text: str, rank: int) -> tuple[int, ...]:
    """Parse cycle notation with 1-based indices, e.g. ``(1 3)(4 5)`` or ``id``."""
    perm = list(range(rank))
    body = text.strip()
    if body in ("", "id", "()", "1"):
        return tuple(perm)
    if not body.startswith("("):
        raise FormError(f"automorphism {text!r} is not in cycle notation")
    if not body.endswith(")") or body.count("(") != body.count(")"):
        raise FormError(f"unbalanced parentheses in {text!r}")
    used: set[int] = set()
    for chunk in body.split(")"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not chunk.startswith("("):
            raise FormError(f"malformed cycle near {chunk!r}")
        items = chunk[1:].replace(",", " ").split()
        try:
            cyc = [int(x) - 1 for x in items]
        except ValueError as exc:
            raise FormError(f"non-integer entry in cycle {chunk + ')'!r}") from exc
        for i in cyc:
            if not 0 <= i < rank:
                raise FormError(f"index {i + 1} outside 1..{rank}")
            if i in used:
                raise FormError(f"index {i + 1} repeated in cycle notation")
            used.add(i)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


def format_cycles(perm: Sequence[int]) -> str:
    seen: set[int] = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(str(i + 1))
            i = perm[i]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "id"


@dataclass(frozen=True)
class QuasiSplitDatum:
    absolute: CartanDatum
    diagram_auto: tuple[int, ...] = ()
    res_degree: int = 1
    q: int = 5
    genus: int = 0
    zeta_numerator: tuple[int, ...] = (1,)

    def __post_init__(self) -> None:
        rank = self.absolute.rank
        auto = tuple(self.diagram_auto) if self.diagram_auto else tuple(range(rank))
        object.__setattr__(self, "diagram_auto", auto)
        if sorted(auto) != list(range(rank)):
            raise FormError(f"diagram automorphism {auto} is not a permutation of 0..{rank - 1}")
        a = self.absolute.cartan
        for i in range(rank):
            for j in range(rank):
                if a[auto[i]][auto[j]] != a[i][j]:
                    raise FormError(
                        f"automorphism does not preserve the Cartan matrix: entry ({i + 1},{j + 1}) = {a[i][j]} "
                        f"but ({auto[i] + 1},{auto[j] + 1}) = {a[auto[i]][auto[j]]}"
                    )
        order = _permutation_order(auto)
        if order not in _allowed_orders(self.absolute.series, rank):
            raise FormError(f"automorphism of order {order} not allowed for type {self.absolute.name}")
        if not isinstance(self.res_degree, int) or self.res_degree < 1:
            raise FormError(f"res_degree must be a positive integer, got {self.res_degree!r}")
        if not isinstance(self.q, int) or self.q < 3 or not _is_prime_power(self.q):
            raise FormError(f"q must be a prime power >= 3, got {self.q!r}")
        if not isinstance(self.genus, int) or self.genus < 0:
            raise FormError(f"genus must be a nonnegative integer, got {self.genus!r}")
        num = tuple(int(c) for c in self.zeta_numerator)
        object.__setattr__(self, "zeta_numerator", num)
        if not num or num[0] != 1:
            raise FormError("zeta numerator must have constant term 1")
        if len(num) - 1 != 2 * self.genus and not (self.genus == 0 and num == (1,)):
            raise FormError(f"zeta numerator must have degree 2g = {2 * self.genus}, got {len(num) - 1}")

    @property
    def auto_order(self) -> int:
        return _permutation_order(self.diagram_auto)

    @property
    def label(self) -> str:
        m = self.auto_order
        base = f"{m if m > 1 else ''}{self.absolute.name}"
        return base if self.res_degree == 1 else f"Res{self.res_degree}({base})"

    # -- absolute data with n copies -----------------------------------------

    @cached_property
    def system(self) -> RootSystem:
        return RootSystem.of(self.absolute, self.res_degree)

    @cached_property
    def sigma(self) -> tuple[int, ...]:
        """Frobenius permutation of the absolute simple roots (all copies)."""
        rank, n = self.absolute.rank, self.res_degree
        perm = []
        for copy in range(n):
            for i in range(rank):
                if copy < n - 1:
                    perm.append((copy + 1) * rank + i)
                else:
                    perm.append(self.diagram_auto[i])
        return tuple(perm)

    @cached_property
    def sigma_order(self) -> int:
        return _permutation_order(self.sigma)

    def sigma_root(self, root: Sequence, power: int = 1) -> tuple:
        out = tuple(root)
        for _ in range(power % self.sigma_order):
            img = [0] * len(out)
            for i, c in enumerate(out):
                img[self.sigma[i]] = c
            out = tuple(img)
        return out

    @cached_property
    def simple_orbits(self) -> tuple[tuple[int, ...], ...]:
        """Sigma-orbits on the absolute simple roots, ordered by smallest index."""
        seen: set[int] = set()
        orbits = []
        for start in range(len(self.sigma)):
            if start in seen:
                continue
            orb = []
            i = start
            while i not in seen:
                seen.add(i)
                orb.append(i)
                i = self.sigma[i]
            orbits.append(tuple(sorted(orb)))
        return tuple(orbits)

    @cached_property
    def orbit_of_index(self) -> dict[int, int]:
        return {i: k for k, orb in enumerate(self.simple_orbits) for i in orb}

    @property
    def relative_rank(self) -> int:
        return len(self.simple_orbits)

    @cached_property
    def relative_simple_reflections(self) -> tuple[WeylElement, ...]:
        return tuple(self.system.longest_element(orb) for orb in self.simple_orbits)

    @cached_property
    def relative_weyl_group(self) -> list[WeylElement]:
        """The sigma-fixed subgroup of the absolute Weyl group, with reduced absolute words."""
        return [w for _, w in self.relative_weyl_words]

    @cached_property
    def relative_weyl_words(self) -> list[tuple[tuple[int, ...], WeylElement]]:
        """Pairs (reduced word in the relative simple reflections, element), by breadth-first search."""
        R = self.system
        gens = self.relative_simple_reflections
        seen = {R.identity.matrix}
        out = [((), R.identity)]
        frontier = [((), R.identity)]
        while frontier:
            nxt = []
            for word, w in frontier:
                for k, g in enumerate(gens):
                    x = R.multiply(w, g)
                    if x.matrix in seen:
                        continue
                    if len(seen) >= WEYL_ENUMERATION_CAP:
                        raise RootSystemError(f"relative Weyl group exceeds enumeration cap {WEYL_ENUMERATION_CAP}")
                    seen.add(x.matrix)
                    item = (word + (k,), R.reduce(x))
                    out.append(item)
                    nxt.append(item)
            frontier = nxt
        return out

    def relative_longest(self) -> WeylElement:
        return self.system.longest_element()

    def dim_group(self) -> int:
        return self.absolute.dimension() * self.res_degree

    def dim_unipotent(self) -> int:
        return len(self.system.positive_roots)

    def dim_torus(self) -> int:
        return self.system.rank


def _is_prime_power(q: int) -> bool:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def projector(d: QuasiSplitDatum, vec: Sequence) -> tuple[Fraction, ...]:
    """Orbit average of a vector in the absolute simple-root (or weight) basis."""
    total = [Fraction(0)] * len(vec)
    m = d.sigma_order
    for k in range(m):
        img = d.sigma_root(vec, k)
        for i, c in enumerate(img):
            total[i] += c
    return tuple(t / m for t in total)


@dataclass(frozen=True)
class RelativeRootTable:
    relative_roots: tuple[tuple[Fraction, ...], ...]
    multiplicity: dict = field(hash=False)
    indivisible: dict = field(hash=False)
    relative_rank: int
    rho_rel: tuple[Fraction, ...]
    simple_orbit_index: dict = field(hash=False)

    def simple_roots(self) -> list[tuple[Fraction, ...]]:
        return list(self.simple_orbit_index)


def restrict_roots(d: QuasiSplitDatum) -> RelativeRootTable:
    R = d.system
    mult: dict[tuple[Fraction, ...], int] = {}
    for a in R.positive_roots:
        beta = projector(d, a)
        mult[beta] = mult.get(beta, 0) + 1
    roots = tuple(sorted(mult, key=lambda b: (sum(b), tuple(-x for x in b))))
    rootset = set(roots)
    indiv = {b: tuple(x / 2 for x in b) not in rootset for b in roots}
    rho_root = R.weight_to_root(R.rho)
    rho_rel = projector(d, rho_root)
    simple_index = {}
    for orb in d.simple_orbits:
        e = tuple(int(j == orb[0]) for j in range(R.rank))
        simple_index[projector(d, e)] = orb
    return RelativeRootTable(
        relative_roots=roots,
        multiplicity=mult,
        indivisible=indiv,
        relative_rank=d.relative_rank,
        rho_rel=rho_rel,
        simple_orbit_index=simple_index,
    )


def xi(z: Sequence, d: QuasiSplitDatum) -> WeightVec:
    """Coordinates on the sigma-invariant weights: z_i times the orbit sum of fundamental weights."""
    if len(z) != d.relative_rank:
        raise FormError(f"expected {d.relative_rank} coordinates, got {len(z)}")
    coords = [Fraction(0)] * d.system.rank
    for zi, orb in zip(z, d.simple_orbits):
        for j in orb:
            coords[j] = Fraction(zi)
    return WeightVec(tuple(coords))


def xi_inverse(weight: WeightVec, d: QuasiSplitDatum) -> tuple[Fraction, ...]:
    out = []
    for orb in d.simple_orbits:
        vals = {weight.coords[j] for j in orb}
        if len(vals) != 1:
            raise FormError("weight is not sigma-invariant")
        out.append(vals.pop())
    return tuple(out)


@dataclass(frozen=True)
class RankOneClass:
    kind: str
    field_degree: int


def classify_rank_one(d: QuasiSplitDatum, beta: Sequence) -> RankOneClass:
    """Rank-one subgroup attached to a relative simple root (given as its projected vector)."""
    table = restrict_roots(d)
    key = tuple(Fraction(x) for x in beta)
    if key not in table.simple_orbit_index:
        raise FormError(f"{tuple(beta)} is not a relative simple root")
    if not table.indivisible[key]:
        raise FormError(f"{tuple(beta)} is divisible")
    orb = table.simple_orbit_index[key]
    a = d.system.cartan
    adjacent = any(a[i][j] != 0 for i in orb for j in orb if i != j)
    if adjacent:
        # the orbit is a union of A2 pairs, one per unitary factor
        degree = len(orb) // 2
        return RankOneClass("SU3" if degree == 1 else "ResSU3", degree)
    degree = len(orb)
    return RankOneClass("SL2" if degree == 1 else "ResSL2", degree)


def classify_orbit(d: QuasiSplitDatum, orbit_index: int) -> RankOneClass:
    orb = d.simple_orbits[orbit_index]
    e = tuple(int(j == orb[0]) for j in range(d.system.rank))
    return classify_rank_one(d, projector(d, e))


def relative_simple_root(d: QuasiSplitDatum, orbit_index: int) -> tuple[Fraction, ...]:
    orb = d.simple_orbits[orbit_index]
    return projector(d, tuple(int(j == orb[0]) for j in range(d.system.rank)))


def is_sigma_invariant(d: QuasiSplitDatum, weight: WeightVec) -> bool:
    return d.sigma_root(weight.coords) == tuple(weight.coords)


__all__ = [
    "FormError",
    "QuasiSplitDatum",
    "RankOneClass",
    "RelativeRootTable",
    "classify_orbit",
    "classify_rank_one",
    "format_cycles",
    "parse_cycles",
    "projector",
    "relative_simple_root",
    "restrict_roots",
    "xi",
    "xi_inverse",
    "RootSystemError",
    "Vector",
]
