"""Intertwining operators M(w, lambda) as exact factor products.

The unramified local factor at a place of degree d is a product over the
orbits O of sigma^d on the positive coroots inverted by w:

    (1 - eps_O q_v^{-k_O} q_v^{-<lambda, S_O>}) / (1 - eps_O q_v^{-<lambda, S_O>}),

with q_v = q^d, k_O the orbit size, S_O the sum of its members and eps_O the
eigenvalue of the pinned Frobenius power on the orbit's root vectors.

Globally, a sigma-orbit O of size K with sign eps splits at a degree-d place
into gcd(d, K) orbits of sigma^d, and the product over all closed points of
P^1 collapses to

    prod_{zeta^K = eps} Z(zeta X) / Z(zeta X / q)
        = (1 - eps q^{-K} X^K) / (1 - eps q^K X^K),     X^K = q^{-<lambda, S_O>},

where Z(T) = L(T) / ((1 - T)(1 - qT)) is the zeta function of the base curve
in T = q^{-s}.  For genus g > 0 the factor L_K(X^K) / L_K(q^{-K} X^K) is
appended, L_K being the numerator twisted to the K-th powers of its roots.

A lambda is a formal combination sum_i x_i mu_i of sigma-invariant weights;
the variable u_i stands for q^{-x_i}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

import mpmath

from .chevalley import orbit_sign, pinned_coefficients
from .exact_lp import in_convex_hull
from .galois_form import QuasiSplitDatum, classify_orbit, restrict_roots, xi, xi_inverse
from .ratfun import Atom, FactorProduct, PolyFactor, twisted_numerator
from .rootsys import WeightVec, WeylElement


class IntertwineError(ValueError):
    pass


# -- lambda points ---------------------------------------------------------------


@dataclass(frozen=True)
class LambdaPoint:
    """lambda = sum_i x_i mu_i with variables u_i = q^{-x_i}.

    ``evaluate_at`` is the value of x at which a ray represents its rational
    point (rays only).
    """

    mus: tuple[WeightVec, ...]
    label: str = ""
    evaluate_at: Fraction | None = None

    @property
    def nvars(self) -> int:
        return len(self.mus)

    @classmethod
    def line(cls, d: QuasiSplitDatum) -> LambdaPoint:
        """lambda = s rho."""
        return cls((d.system.rho,), "s*rho")

    @classmethod
    def coordinates(cls, d: QuasiSplitDatum) -> LambdaPoint:
        """lambda = xi(x_1, ..., x_r)."""
        r = d.relative_rank
        return cls(tuple(xi([int(i == j) for j in range(r)], d) for i in range(r)), "xi(x)")

    @classmethod
    def ray(cls, d: QuasiSplitDatum, z: Sequence) -> LambdaPoint:
        """The rational point xi(z), z > 0, placed on the ray s * xi(D z) at s = 1/D.

        D clears the denominators of z, so all pairings with coroots are integers
        and the single variable is t = q^{-s}; at s = 1/D it equals q^{-1/D}.
        """
        zs = [Fraction(v) for v in z]
        if any(v <= 0 for v in zs):
            raise IntertwineError("ray coordinates must be positive")
        D = 1
        for v in zs:
            D = D * v.denominator // gcd(D, v.denominator)
        return cls((xi([v * D for v in zs], d),), f"xi({', '.join(map(str, zs))})", Fraction(1, D))

    def act(self, d: QuasiSplitDatum, w: WeylElement) -> LambdaPoint:
        R = d.system
        return LambdaPoint(tuple(R.act_weight(w, mu) for mu in self.mus), f"w.{self.label}", self.evaluate_at)

    def pairings(self, d: QuasiSplitDatum, coroot_sum: Sequence[int]) -> tuple[int, ...]:
        out = []
        for mu in self.mus:
            p = d.system.pairing(mu, coroot_sum)
            if p.denominator != 1 or p < 0:
                raise IntertwineError(f"pairing {p} of {self.label} with {tuple(coroot_sum)} is not a nonnegative integer")
            out.append(int(p))
        return tuple(out)


# -- orbits and signs ------------------------------------------------------------


@dataclass(frozen=True)
class DualOrbit:
    members: tuple[tuple[int, ...], ...]  # positive roots, absolute simple-root basis
    coroots: tuple[tuple[int, ...], ...]
    size: int
    weight_sum: tuple[int, ...]  # sum of coroots in the simple-coroot basis
    sign: int


@lru_cache(maxsize=None)
def _pinned(d: QuasiSplitDatum) -> dict:
    return pinned_coefficients(d.system, d.sigma)


def _orbits_on(d: QuasiSplitDatum, roots: Sequence[tuple[int, ...]], frob_power: int) -> list[DualOrbit]:
    R = d.system
    coeff = _pinned(d)
    remaining = set(roots)
    out = []
    for r in sorted(roots, key=lambda v: (sum(v), tuple(-c for c in v))):
        if r not in remaining:
            continue
        orb = [r]
        cur = d.sigma_root(r, frob_power)
        while cur != r:
            if cur not in remaining:
                raise IntertwineError("root set is not stable under the Frobenius power")
            orb.append(cur)
            cur = d.sigma_root(cur, frob_power)
        for m in orb:
            remaining.discard(m)
        coroots = tuple(R.coroot(m) for m in orb)
        total = tuple(sum(c[i] for c in coroots) for i in range(R.rank))
        sign = orbit_sign(R, d.sigma, coeff, r, frob_power * len(orb))
        out.append(DualOrbit(tuple(orb), coroots, len(orb), total, sign))
    return out


def dual_orbits(d: QuasiSplitDatum, w: WeylElement, frob_power: int = 1) -> list[DualOrbit]:
    """Orbits of sigma^frob_power on the positive coroots inverted by w."""
    if frob_power < 1:
        raise IntertwineError("frob_power must be at least 1")
    return list(_cached_orbits(d, w.matrix, w.word, frob_power))


@lru_cache(maxsize=4096)
def _cached_orbits(d: QuasiSplitDatum, matrix, word, frob_power: int) -> tuple[DualOrbit, ...]:
    w = WeylElement(word, matrix)
    return tuple(_orbits_on(d, d.system.inversion_set(w), frob_power))


def pinning_sign(d: QuasiSplitDatum, orbit: DualOrbit, frob_power: int = 1) -> int:
    """Recompute the orbit sign from every member; all must agree."""
    coeff = _pinned(d)
    signs = {orbit_sign(d.system, d.sigma, coeff, m, frob_power * orbit.size) for m in orbit.members}
    if len(signs) != 1:
        raise IntertwineError(f"orbit sign depends on the member: {signs}")
    return signs.pop()


def _zeta_of(sign: int) -> Fraction:
    return Fraction(0) if sign == 1 else Fraction(1, 2)


# -- local and global factors -------------------------------------------------------


def local_factor(d: QuasiSplitDatum, w: WeylElement, lam: LambdaPoint, place_degree: int = 1) -> FactorProduct:
    deg = place_degree
    factors: dict = {}
    for orb in dual_orbits(d, w, deg):
        p = lam.pairings(d, orb.weight_sum)
        b = tuple(deg * x for x in p)
        z = _zeta_of(orb.sign)
        num = Atom(z, -deg * orb.size, b)
        den = Atom(z, 0, b)
        factors[num] = factors.get(num, 0) + 1
        factors[den] = factors.get(den, 0) - 1
    return FactorProduct(1, factors, lam.nvars)


def orbit_global_factor(d: QuasiSplitDatum, orb: DualOrbit, lam: LambdaPoint) -> FactorProduct:
    p = lam.pairings(d, orb.weight_sum)
    z = _zeta_of(orb.sign)
    K = orb.size
    f = FactorProduct(1, {Atom(z, -K, p): 1, Atom(z, K, p): -1}, lam.nvars)
    if len(d.zeta_numerator) > 1:
        twisted = twisted_numerator(d.zeta_numerator, K, orb.sign)
        f = f * FactorProduct(1, {PolyFactor(twisted, 0, p): 1, PolyFactor(twisted, -K, p): -1}, lam.nvars)
    return f


def character_product(d: QuasiSplitDatum, orb: DualOrbit, lam: LambdaPoint) -> FactorProduct:
    """prod over zeta^K = eps of Z(zeta X) / Z(zeta X / q), written with K split atoms (genus 0)."""
    p = lam.pairings(d, orb.weight_sum)
    K = orb.size
    g = 0
    for x in p:
        g = gcd(g, x)
    if g % K:
        raise IntertwineError("orbit pairing is not divisible by the orbit size")
    per = tuple(x // K for x in p)  # X = q^{-<lambda, coroot>} for one member
    base = _zeta_of(orb.sign) / K
    factors: dict = {}
    for j in range(K):
        zeta = base + Fraction(j, K)
        # Z(zX)/Z(zX/q) = (1 - zX/q) / (1 - q zX)
        for atom, e in ((Atom(zeta, -1, per), 1), (Atom(zeta, 1, per), -1)):
            factors[atom] = factors.get(atom, 0) + e
    return FactorProduct(1, factors, lam.nvars)


def global_intertwiner(d: QuasiSplitDatum, w: WeylElement, lam: LambdaPoint) -> FactorProduct:
    """M(w, lambda) assembled over all closed points of the base curve."""
    f = FactorProduct.one(lam.nvars)
    for orb in dual_orbits(d, w, 1):
        f = f * orbit_global_factor(d, orb, lam)
    return f


def rank_one_decomposition(d: QuasiSplitDatum, w: WeylElement, lam: LambdaPoint) -> dict:
    """Group the global factor by indivisible relative roots (each with its multiple 2 beta)."""
    from .galois_form import projector

    table = restrict_roots(d)
    groups: dict = {}
    for orb in dual_orbits(d, w, 1):
        beta = projector(d, orb.members[0])
        half = tuple(x / 2 for x in beta)
        key = half if half in table.multiplicity else beta
        groups[key] = groups.get(key, FactorProduct.one(lam.nvars)) * orbit_global_factor(d, orb, lam)
    return groups


def constant_term(d: QuasiSplitDatum, lam: LambdaPoint) -> dict:
    """M(w, lambda) for every w in the relative Weyl group, keyed by relative reduced word."""
    return {word: global_intertwiner(d, w, lam) for word, w in d.relative_weyl_words}


def relative_element(d: QuasiSplitDatum, word: Sequence[int]) -> WeylElement:
    """Product of relative simple reflections, reduced."""
    return _relative_element(d, tuple(word))


@lru_cache(maxsize=8192)
def _relative_element(d: QuasiSplitDatum, word: tuple[int, ...]) -> WeylElement:
    R = d.system
    w = R.identity
    for k in word:
        w = R.multiply(w, d.relative_simple_reflections[k])
    return R.reduce(w)


def cocycle_failures(d: QuasiSplitDatum, lam: LambdaPoint) -> tuple[int, list]:
    """Check M(w1 w2, lam) = M(w1, w2 lam) M(w2, lam) for every split of every reduced relative word.

    Returns the number of identities checked and the relative words of those that failed.
    """
    R = d.system
    checked, failed = 0, []
    cache: dict = {}

    def M(word, point):
        key = (word, point)
        if key not in cache:
            cache[key] = global_intertwiner(d, relative_element(d, word), point)
        return cache[key]

    for word, w in d.relative_weyl_words:
        for k in range(1, len(word)):
            w1, w2 = word[:k], word[k:]
            e1, e2 = relative_element(d, w1), relative_element(d, w2)
            if R.length(e1) + R.length(e2) != R.length(w):
                continue
            checked += 1
            if M(word, lam) != M(w1, lam.act(d, e2)) * M(w2, lam):
                failed.append((w1, w2))
    return checked, failed


# -- poles at s = 1 ---------------------------------------------------------------


@dataclass(frozen=True)
class PoleReport:
    order: int
    relative_rank: int
    hyperplane_orders: tuple[int, ...]
    nonsimple_orders: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (
            self.order == -self.relative_rank
            and all(h == -1 for h in self.hyperplane_orders)
            and all(o == 0 for o in self.nonsimple_orders)
        )


def pole_order_M_w0(d: QuasiSplitDatum) -> PoleReport:
    w0 = d.relative_longest()
    line = global_intertwiner(d, w0, LambdaPoint.line(d))
    coords = LambdaPoint.coordinates(d)
    multi = global_intertwiner(d, w0, coords)
    hyper = tuple(multi.hyperplane_order(i) for i in range(d.relative_rank))
    simple = {tuple(int(j == orb[0]) for j in range(d.system.rank)) for orb in d.simple_orbits}
    nonsimple = []
    line_lam = LambdaPoint.line(d)
    for orb in dual_orbits(d, w0, 1):
        if any(m in simple for m in orb.members):
            continue
        nonsimple.append(orbit_global_factor(d, orb, line_lam).order_at_s1())
    return PoleReport(line.order_at_s1(), d.relative_rank, hyper, tuple(nonsimple))


def line_singularities(f: FactorProduct, q: int) -> list:
    """Real s where a factor of a univariate product vanishes (zeros or poles).

    Atoms give exact Fractions; polynomial factors give floats from their real
    positive roots.  Atoms with a nontrivial root of unity never vanish for real s.
    """
    out: list = []
    for fac in f.factors:
        b = sum(fac.u_exp)
        if b == 0:
            continue
        if isinstance(fac, Atom):
            if fac.zeta == 0:
                out.append(fac.q_exp / b)
            continue
        with mpmath.workdps(40):
            for root in mpmath.polyroots(list(reversed(fac.coeffs)), maxsteps=200, extraprec=60):
                if abs(mpmath.im(root)) < mpmath.mpf(10) ** -25 and mpmath.re(root) > 0:
                    # P(q^a u^b) = 0 with q^(a - b s) = root
                    out.append(float((fac.q_exp - mpmath.log(mpmath.re(root), q)) / b))
    return sorted(out, key=float)


def singularity_free(f: FactorProduct, q: int, lo: Fraction = Fraction(1), hi: Fraction = Fraction(5, 4)) -> bool:
    """No zero or pole of a univariate product with s in the half-open interval (lo, hi]."""
    for s in line_singularities(f, q):
        if isinstance(s, Fraction):
            if lo < s <= hi:
                return False
        elif float(lo) < s <= float(hi):
            return False
    return True


def frobenius_matrix(d: QuasiSplitDatum, w: WeylElement, frob_power: int = 1) -> tuple[list, list[list[int]]]:
    """Signed permutation matrix of the pinned sigma^frob_power on the root vectors inverted by w."""
    coeff = _pinned(d)
    roots = list(d.system.inversion_set(w))
    index = {r: i for i, r in enumerate(roots)}
    n = len(roots)
    mat = [[0] * n for _ in range(n)]
    for r in roots:
        sign, cur = 1, r
        for _ in range(frob_power):
            sign *= coeff[cur]
            cur = d.sigma_root(cur, 1)
        mat[index[cur]][index[r]] = sign
    return roots, mat


# -- Euler product validation -----------------------------------------------------


def closed_points(q: int, degree: int) -> int:
    """Number of closed points of degree ``degree`` on the projective line over F_q."""
    if degree == 1:
        return q + 1
    total = 0
    for e in range(1, degree + 1):
        if degree % e == 0:
            total += _mobius(degree // e) * q**e
    return total // degree


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def truncated_euler_product(d: QuasiSplitDatum, w: WeylElement, lam: LambdaPoint, s, max_degree: int) -> float:
    """prod over closed points of P^1 with degree <= max_degree of the local factors (genus 0)."""
    if d.genus:
        raise IntertwineError("point counts are for the projective line only")
    q = d.q
    with mpmath.workdps(40):
        total = mpmath.mpf(0)
        for deg in range(1, max_degree + 1):
            val = local_factor(d, w, lam, deg).evaluate_mp(q, [s] * lam.nvars)
            total += closed_points(q, deg) * mpmath.log(mpmath.re(val))
        return float(mpmath.exp(total))


def euler_truncation_bound(d: QuasiSplitDatum, s, max_degree: int) -> float:
    """Rough size of the omitted Euler factors, dominated by the simple coroots."""
    q = d.q
    return sum(closed_points(q, k) * 2 * d.system.rank * float(q) ** (-k * s) for k in range(max_degree + 1, max_degree + 30))


# -- Hecke profile and convexity --------------------------------------------------


@dataclass(frozen=True)
class HeckeValue:
    """sum over w of q0^(-e_w), stored as a multiset of exponents."""

    q0: int
    exponents: tuple[Fraction, ...]

    def __float__(self) -> float:
        return float(sum(mpmath.power(self.q0, -mpmath.mpf(e.numerator) / e.denominator) for e in self.exponents))


def _z_vector(d: QuasiSplitDatum, z: Sequence) -> WeightVec:
    return xi([Fraction(v) for v in z], d)


def hecke_hat(d: QuasiSplitDatum, z: Sequence, v0_degree: int = 1) -> HeckeValue:
    """sum over w in W_F of (q^v0_degree)^(-(rho, w xi(z))) in the invariant form."""
    R = d.system
    lam = _z_vector(d, z)
    exps = tuple(sorted(R.inner(R.rho, R.act_weight(w, lam)) for w in d.relative_weyl_group))
    return HeckeValue(d.q**v0_degree, exps)


def _perfect_power_base(n: int) -> tuple[int, int]:
    """n = b^m with b not a perfect power."""
    for m in range(n.bit_length(), 1, -1):
        b = round(n ** (1 / m))
        for cand in (b - 1, b, b + 1):
            if cand > 1 and cand**m == n:
                base, k = _perfect_power_base(cand)
                return base, k * m
    return n, 1


def compare_hecke(a: HeckeValue, b: HeckeValue) -> int:
    """Exact sign of a - b (both with the same q0)."""
    if a.q0 != b.q0:
        raise IntertwineError("Hecke values with different bases")
    base, m = _perfect_power_base(a.q0)
    # q0^(-e) = base^(-m e); write every exponent over a common denominator D
    exps = [(-m * e, 1) for e in a.exponents] + [(-m * e, -1) for e in b.exponents]
    D = 1
    for e, _ in exps:
        D = D * e.denominator // gcd(D, e.denominator)
    shift = min(int(e * D) for e, _ in exps)
    # polynomial in y = base^(1/D), reduced modulo y^D - base
    coeffs = [Fraction(0)] * D
    for e, sign in exps:
        k = int(e * D) - shift
        coeffs[k % D] += sign * Fraction(base) ** (k // D)
    if all(c == 0 for c in coeffs):
        return 0
    prec = 30
    while True:
        with mpmath.workdps(prec):
            y = mpmath.root(base, D)
            val = sum(mpmath.mpf(c.numerator) / c.denominator * y**k for k, c in enumerate(coeffs))
            if abs(val) > mpmath.mpf(10) ** (-(prec - 10)):
                return 1 if val > 0 else -1
        prec *= 2


def inequality_check(d: QuasiSplitDatum, z: Sequence, v0_degree: int = 1) -> bool:
    """hhat(xi(z)) < hhat(rho), decided exactly."""
    ones = [1] * d.relative_rank
    return compare_hecke(hecke_hat(d, z, v0_degree), hecke_hat(d, ones, v0_degree)) < 0


def weyl_orbit_of_rho(d: QuasiSplitDatum) -> list[tuple[Fraction, ...]]:
    R = d.system
    pts = {xi_inverse(R.act_weight(w, R.rho), d) for w in d.relative_weyl_group}
    return sorted(pts)


def convex_hull_member(d: QuasiSplitDatum, z: Sequence) -> bool:
    """Exact test whether xi(z) lies in the convex hull of W_F rho."""
    return in_convex_hull([Fraction(v) for v in z], weyl_orbit_of_rho(d))


def box_vertices(r: int, eps: Fraction = Fraction(1, 2)) -> list[tuple[Fraction, ...]]:
    from itertools import product

    return [tuple(v) for v in product((1 - eps, Fraction(1)), repeat=r)]


# -- rank-one closed forms -----------------------------------------------------


def rank_one_local_closed_form(kind: str, field_degree: int) -> FactorProduct:
    """Local M(w0, s rho) at a degree-1 place for the rank-one groups, written directly."""
    n = field_degree
    if kind in ("SL2", "ResSL2"):
        return FactorProduct(1, {Atom(0, -n, (n,)): 1, Atom(0, 0, (n,)): -1})
    if kind in ("SU3", "ResSU3"):
        return FactorProduct(
            1,
            {
                Atom(0, -2 * n, (2 * n,)): 1,
                Atom(Fraction(1, 2), -n, (2 * n,)): 1,
                Atom(0, 0, (2 * n,)): -1,
                Atom(Fraction(1, 2), 0, (2 * n,)): -1,
            },
        )
    raise IntertwineError(f"unknown kind {kind!r}")


def simple_root_classes(d: QuasiSplitDatum) -> list:
    return [classify_orbit(d, i) for i in range(d.relative_rank)]


__all__ = [
    "DualOrbit",
    "HeckeValue",
    "IntertwineError",
    "LambdaPoint",
    "PoleReport",
    "box_vertices",
    "character_product",
    "closed_points",
    "cocycle_failures",
    "compare_hecke",
    "constant_term",
    "convex_hull_member",
    "dual_orbits",
    "frobenius_matrix",
    "line_singularities",
    "global_intertwiner",
    "hecke_hat",
    "inequality_check",
    "local_factor",
    "orbit_global_factor",
    "pinning_sign",
    "pole_order_M_w0",
    "rank_one_decomposition",
    "rank_one_local_closed_form",
    "relative_element",
    "singularity_free",
    "truncated_euler_product",
]
