"""Local computations for the rank-one groups SL2 and SU3 over F_q((pi)).

The SU3 model uses the Hermitian form with antidiagonal unit Gram matrix on
E^3, where E = F_{Q^2}((pi)) is the unramified quadratic extension of
F = F_Q((pi)).  The upper unipotent radical is

    n(x, y) = [[1, x, y], [0, 1, -xbar], [0, 0, 1]],   y + ybar + x xbar = 0,

parametrized by x in E and t in F through y = -N(x)/2 + delta t, where delta
is a unit with deltabar = -delta.  The Haar measure is dx dt with the rings
of integers of volume 1, and the integral model is the stabilizer of O_E^3.
This needs 2 invertible, so the SU3 routines reject even q.

The A-part of w0 n in the decomposition N A K is read off from the sup norm
of the bottom row (and, for SU3, independently from the 2x2 minors of the
last two rows).  Everything is exact except the final floating-point sum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .finite_field import GF, field
from .galois_form import RankOneClass
from .laurent import LaurentNum, PrecisionError, norm_valuation

SL2_ENUMERATION_LIMIT = 5
SU3_ENUMERATION_LIMIT = 5


class LocalFieldError(ValueError):
    pass


@dataclass(frozen=True)
class IwasawaValuation:
    """Valuations of the A-part, one per relative simple coroot.

    For SL2 the entry is v(a_11) with a = diag(a_11, a_11^-1); for SU3 it is
    v(z) with a = diag(z, zbar/z, zbar^-1).  Both are >= 0 on w0 N.
    """

    values: tuple[int, ...]


Matrix = list[list[LaurentNum]]


def _kind_name(kind) -> tuple[str, int]:
    if isinstance(kind, RankOneClass):
        return kind.kind, kind.field_degree
    name = str(kind)
    return name, 1


# -- SL2 -----------------------------------------------------------------------


def sl2_w0n(x: LaurentNum) -> Matrix:
    F = x.field
    one = LaurentNum.constant(F, 1)
    zero = LaurentNum.zero(F)
    return [[zero, -one], [one, x]]


def iwasawa_from_rows(g: Matrix) -> int:
    """A-part valuation read from the bottom row (and minors for 3x3 matrices)."""
    bottom = norm_valuation(g[-1])
    m = -bottom
    if len(g) == 3:
        r2, r3 = g[1], g[2]
        minors = [r2[i] * r3[j] - r2[j] * r3[i] for i, j in ((0, 1), (0, 2), (1, 2))]
        if -norm_valuation(minors) != m:
            raise LocalFieldError("row norm and minor norm disagree")
    return m


def iwasawa_sl2(x: LaurentNum) -> IwasawaValuation:
    """Valuation of a_11 in w0 n(x) = n' a k; equals max(0, -v(x))."""
    if x.is_zero() and x.prec <= 0:
        raise PrecisionError("x is not known to be integral")
    m = iwasawa_from_rows(sl2_w0n(x))
    return IwasawaValuation((max(0, m),))


def sl2_explicit_decomposition(x: LaurentNum) -> tuple[Matrix, Matrix, Matrix]:
    """For v(x) < 0: w0 n(x) = n(-1/x) diag(1/x, x) [[1, 0], [1/x, 1]]."""
    F = x.field
    if x.is_zero() or x.valuation() >= 0:
        raise LocalFieldError("explicit decomposition is for non-integral x")
    one = LaurentNum.constant(F, 1)
    zero = LaurentNum.zero(F)
    xi = x.inverse()
    n = [[one, -xi], [zero, one]]
    a = [[xi, zero], [zero, x]]
    k = [[one, zero], [xi, one]]
    return n, a, k


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = a[i][0] * b[0][j]
            for k in range(1, m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def random_integral_unimodular(F: GF, size: int, prec: int, rng: random.Random, steps: int = 6) -> Matrix:
    """Product of random integral elementary and unit-diagonal matrices."""
    def ident() -> Matrix:
        return [[LaurentNum.constant(F, int(i == j), prec) for j in range(size)] for i in range(size)]

    g = ident()
    for _ in range(steps):
        e = ident()
        i, j = rng.sample(range(size), 2)
        digits = [rng.randrange(F.order) for _ in range(3)]
        e[i][j] = LaurentNum.from_digits(F, 0, digits, prec)
        g = matmul(g, e)
    d = ident()
    u = rng.randrange(1, F.order)
    d[0][0] = LaurentNum.constant(F, u, prec)
    d[1][1] = LaurentNum.constant(F, F.inv(u), prec)
    return matmul(g, d)


# -- SU3 -----------------------------------------------------------------------


@dataclass(frozen=True)
class SU3Model:
    """Residue data for SU3 over F_Q((pi)) split by the unramified quadratic extension."""

    Q: int

    def __post_init__(self) -> None:
        if self.Q % 2 == 0:
            raise LocalFieldError("the SU3 model needs odd residue characteristic")

    @property
    def E(self) -> GF:
        return field(self.Q * self.Q)

    @property
    def delta(self) -> int:
        """Unit with conjugate equal to its negative."""
        return self.E.power_of_generator((self.Q + 1) // 2)

    @property
    def half(self) -> int:
        return self.E.inv(self.E.from_int(2))

    def base_elements(self) -> list[int]:
        return self.E.subfield_elements(self.Q)

    def conj(self, x: LaurentNum) -> LaurentNum:
        return x.conjugate(self.Q)

    def norm(self, x: LaurentNum) -> LaurentNum:
        return x * self.conj(x)

    def y_from(self, x: LaurentNum, t: LaurentNum) -> LaurentNum:
        return (-self.norm(x)).scale(self.half) + t.scale(self.delta)

    def unipotent(self, x: LaurentNum, y: LaurentNum) -> Matrix:
        E = self.E
        one = LaurentNum.constant(E, 1)
        zero = LaurentNum.zero(E)
        return [[one, x, y], [zero, one, -self.conj(x)], [zero, zero, one]]

    def w0(self) -> Matrix:
        E = self.E
        c = lambda v: LaurentNum.constant(E, E.from_int(v))
        return [[c(0), c(0), c(1)], [c(0), c(-1), c(0)], [c(1), c(0), c(0)]]

    def check_relation(self, x: LaurentNum, y: LaurentNum) -> None:
        r = y + self.conj(y) + self.norm(x)
        if not r.is_zero():
            raise LocalFieldError(f"(x, y) violates y + ybar + N(x) = 0: residual {r}")


def iwasawa_su3(x: LaurentNum, y: LaurentNum, Q: int) -> IwasawaValuation:
    """Valuation of z in w0 n(x, y) = n' diag(z, zbar/z, 1/zbar) k."""
    model = SU3Model(Q)
    model.check_relation(x, y)
    g = matmul(model.w0(), model.unipotent(x, y))
    return IwasawaValuation((max(0, iwasawa_from_rows(g)),))


# -- shell integration -----------------------------------------------------------


def _sl2_shell_sum(Q: int, s: float, depth: int) -> float:
    F = field(Q)
    prec = depth + 2
    total = 0.0
    # integral ball: one cell per residue class, volume Q^-1 each
    for c in F.elements():
        m = iwasawa_sl2(LaurentNum.constant(F, c, prec)).values[0]
        total += Q ** (-1) * Q ** (-m * (s + 1))
    for k in range(1, depth + 1):
        cell = float(Q) ** (k - 1)  # shell volume Q^k (1 - 1/Q) split over Q - 1 leading digits
        for c in F.units():
            x = LaurentNum.monomial(F, c, -k, prec)
            m = iwasawa_sl2(x).values[0]
            total += cell * float(Q) ** (-m * (s + 1))
    return total


def _su3_shell_sum(Q: int, s: float, depth: int) -> float:
    model = SU3Model(Q)
    E = model.E
    prec = depth + 2
    base = model.base_elements()
    base_units = [c for c in base if c]
    total = 0.0

    def x_cells():
        for c in E.elements():
            yield LaurentNum.constant(E, c, prec), float(Q) ** -2
        for a in range(1, depth + 1):
            for c in E.units():
                yield LaurentNum.monomial(E, c, -a, prec), float(Q) ** (2 * a - 2)

    def t_cells():
        for c in base:
            yield LaurentNum.constant(E, c, prec), float(Q) ** -1
        for b in range(1, 2 * depth + 1):
            for c in base_units:
                yield LaurentNum.monomial(E, c, -b, prec), float(Q) ** (b - 1)

    ts = list(t_cells())
    for x, vx in x_cells():
        for t, vt in ts:
            y = model.y_from(x, t)
            m = iwasawa_su3(x, y, Q).values[0]
            total += vx * vt * float(Q) ** (-2 * m * (s + 1))
    return total


def shell_integral(kind, s: float, q: int, depth: int) -> float:
    """Local intertwining integral at lambda = s rho by valuation-shell enumeration.

    Shells with valuation down to -depth are enumerated by their leading
    digit; the Iwasawa valuation of every cell representative is computed
    from the explicit matrix.  Depth 0 keeps only the integral points.
    """
    if s <= 1:
        raise LocalFieldError("the integral converges only for s > 1")
    if depth < 0:
        raise LocalFieldError("depth must be nonnegative")
    name, degree = _kind_name(kind)
    Q = q**degree
    if name in ("SL2", "ResSL2"):
        return _sl2_shell_sum(Q, s, depth)
    if name in ("SU3", "ResSU3"):
        return _su3_shell_sum(Q, s, depth)
    raise LocalFieldError(f"unknown rank-one kind {name!r}")


def closed_form(kind, s: float, q: int) -> float:
    """Rank-one local factors at lambda = s rho in closed form."""
    name, degree = _kind_name(kind)
    Q = float(q**degree)
    if name in ("SL2", "ResSL2"):
        return (1 - Q ** (-s - 1)) / (1 - Q**-s)
    if name in ("SU3", "ResSU3"):
        return (1 - Q ** (-2 * s - 2)) * (1 + Q ** (-2 * s - 1)) / ((1 - Q ** (-2 * s)) * (1 + Q ** (-2 * s)))
    raise LocalFieldError(f"unknown rank-one kind {name!r}")


# -- point counts --------------------------------------------------------------


def count_points(kind, q: int) -> int:
    """#G(F_q) for G = SL2 (exhaustive) or SU3 (frame enumeration over F_{q^2})."""
    name, degree = _kind_name(kind)
    q = q**degree
    if name in ("SL2", "ResSL2"):
        if q > SL2_ENUMERATION_LIMIT:
            raise LocalFieldError(f"SL2 enumeration is limited to q <= {SL2_ENUMERATION_LIMIT}")
        F = field(q)
        count = 0
        for a, b, c, d in product(F.elements(), repeat=4):
            if F.sub(F.mul(a, d), F.mul(b, c)) == 1:
                count += 1
        return count
    if name in ("SU3", "ResSU3"):
        if q > SU3_ENUMERATION_LIMIT:
            raise LocalFieldError(f"SU3 enumeration is limited to q <= {SU3_ENUMERATION_LIMIT}")
        return _su3_frames(q)
    raise LocalFieldError(f"unknown kind {name!r}")


def _su3_frames(q: int) -> int:
    """Count g in SL3(F_{q^2}) with g^* J g = J, J antidiagonal, column by column.

    Columns c1, c2, c3 must satisfy h(c1, c1) = h(c3, c3) = 0, h(c1, c3) = 1,
    h(c2, c2) = 1 and h(c1, c2) = h(c3, c2) = 0, where h(u, v) = ubar^T J v.
    """
    E = field(q * q)
    conj = lambda a: E.pow(a, q)

    def h(u, v):
        acc = 0
        for i in range(3):
            acc = E.add(acc, E.mul(conj(u[i]), v[2 - i]))
        return acc

    vectors = [v for v in product(E.elements(), repeat=3) if any(v)]
    isotropic = [v for v in vectors if h(v, v) == 0]
    count = 0
    for c1 in isotropic:
        # rows of the linear conditions h(c1, v) = const on v
        r1 = [conj(c1[2 - i]) for i in range(3)]
        for c3 in isotropic:
            if h(c1, c3) != 1:
                continue
            r3 = [conj(c3[2 - i]) for i in range(3)]
            v0 = _cross(E, r1, r3)
            n0 = h(v0, v0)
            if n0 == 0:
                continue
            for lam in E.units():
                c2 = [E.mul(lam, a) for a in v0]
                if h(c2, c2) != 1:
                    continue
                if _det3(E, [c1, c2, c3]) == 1:
                    count += 1
    return count


def _cross(E: GF, a, b) -> list[int]:
    return [
        E.sub(E.mul(a[1], b[2]), E.mul(a[2], b[1])),
        E.sub(E.mul(a[2], b[0]), E.mul(a[0], b[2])),
        E.sub(E.mul(a[0], b[1]), E.mul(a[1], b[0])),
    ]


def _det3(E: GF, cols) -> int:
    m = [[cols[j][i] for j in range(3)] for i in range(3)]
    return E.add(
        E.sub(
            E.mul(m[0][0], E.sub(E.mul(m[1][1], m[2][2]), E.mul(m[1][2], m[2][1]))),
            E.mul(m[0][1], E.sub(E.mul(m[1][0], m[2][2]), E.mul(m[1][2], m[2][0]))),
        ),
        E.mul(m[0][2], E.sub(E.mul(m[1][0], m[2][1]), E.mul(m[1][1], m[2][0]))),
    )


def group_order(kind, q: int) -> int:
    name, degree = _kind_name(kind)
    q = q**degree
    if name in ("SL2", "ResSL2"):
        return q * (q * q - 1)
    if name in ("SU3", "ResSU3"):
        return q**3 * (q * q - 1) * (q**3 + 1)
    raise LocalFieldError(f"unknown kind {name!r}")


def normalized_volume(kind, q: int) -> Fraction:
    """#G(k_v) / q_v^dim G, the volume of the integral points."""
    name, degree = _kind_name(kind)
    dim = 3 if name in ("SL2", "ResSL2") else 8
    return Fraction(group_order(kind, q), (q**degree) ** dim)


__all__ = [
    "IwasawaValuation",
    "LocalFieldError",
    "SU3Model",
    "closed_form",
    "count_points",
    "group_order",
    "iwasawa_from_rows",
    "iwasawa_sl2",
    "iwasawa_su3",
    "normalized_volume",
    "random_integral_unimodular",
    "shell_integral",
    "sl2_explicit_decomposition",
]
