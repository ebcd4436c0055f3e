"""Exact rational functions in u = q^{-s} kept as products of cyclotomic-type atoms.

An atom ``(1 - zeta q^a u^b)`` stores the root of unity as an exact fraction
of a turn, the power of q as a Fraction and the u-exponent as a tuple (one
entry per variable, so multivariable functions in u_i = q^{-x_i} share the
same machinery).  The base q stays symbolic; it only becomes a number in
``evaluate`` and in the exact limit at s = 1.

Equality is decided on the split form: an atom whose u-exponent has gcd g
factors as a product of g atoms with primitive exponent, and that product
is unique.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, log
from typing import Iterable, Sequence

import mpmath

Number = int | Fraction


class RatFunError(ValueError):
    """Raised on evaluation at a pole or an inconsistent limit request."""


def _frac_mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def _mp(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


@dataclass(frozen=True, order=True)
class Atom:
    """The factor (1 - e^{2 pi i zeta} q^a u^b)."""

    zeta: Fraction
    q_exp: Fraction
    u_exp: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "zeta", _frac_mod1(self.zeta))
        object.__setattr__(self, "q_exp", Fraction(self.q_exp))
        exps = tuple(int(b) for b in self.u_exp)
        if any(b < 0 for b in exps):
            raise RatFunError(f"negative u-exponent {exps}")
        object.__setattr__(self, "u_exp", exps)

    @property
    def zeta_num(self) -> int:
        return self.zeta.numerator

    @property
    def zeta_den(self) -> int:
        return self.zeta.denominator

    @property
    def degree(self) -> int:
        return _gcd_all(self.u_exp)

    def split(self) -> list[Atom]:
        g = self.degree
        if g <= 1:
            return [self]
        b = tuple(x // g for x in self.u_exp)
        return [Atom((self.zeta + j) / g, self.q_exp / g, b) for j in range(g)]

    def power_substitute(self, n: int) -> Atom:
        """Image under (q, u) -> (q^n, u^n)."""
        return Atom(self.zeta, self.q_exp * n, tuple(n * b for b in self.u_exp))

    def monomial_substitute(self, images: Sequence[Sequence[int]]) -> Atom:
        """Substitute u_i -> prod_j v_j^{images[i][j]}."""
        m = len(images[0]) if images else 0
        out = [0] * m
        for b, img in zip(self.u_exp, images):
            for j, e in enumerate(img):
                out[j] += b * e
        return Atom(self.zeta, self.q_exp, tuple(out))

    def exponent_at(self, x: Sequence) -> Fraction:
        """Real exponent of q in zeta q^a u^b at u_i = q^{-x_i}."""
        return self.q_exp - sum((Fraction(b) * Fraction(xi) for b, xi in zip(self.u_exp, x)), Fraction(0))

    def vanishes_at(self, x: Sequence) -> bool:
        return self.zeta == 0 and self.exponent_at(x) == 0

    def value(self, q, x: Sequence) -> mpmath.mpc:
        rot = mpmath.expjpi(2 * mpmath.mpf(self.zeta.numerator) / self.zeta.denominator)
        e = _mp(self.q_exp) - sum(b * _mp(xi) for b, xi in zip(self.u_exp, x))
        return 1 - rot * mpmath.power(q, e)

    def text(self, names: Sequence[str]) -> str:
        parts = []
        if self.zeta == Fraction(1, 2):
            sign = "+"
        else:
            sign = "-"
            if self.zeta != 0:
                parts.append(f"z[{self.zeta}]")
        if self.q_exp != 0:
            parts.append(f"q^{self.q_exp}" if self.q_exp != 1 else "q")
        for b, name in zip(self.u_exp, names):
            if b:
                parts.append(name if b == 1 else f"{name}^{b}")
        return f"(1 {sign} {' '.join(parts) or '1'})"


@dataclass(frozen=True, order=True)
class PolyFactor:
    """P(q^a u^b) for an integer polynomial P with constant term 1 (coefficients low to high)."""

    coeffs: tuple[int, ...]
    q_exp: Fraction
    u_exp: tuple[int, ...]

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c or c[0] != 1:
            raise RatFunError("polynomial factor needs constant term 1")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "q_exp", Fraction(self.q_exp))
        object.__setattr__(self, "u_exp", tuple(int(b) for b in self.u_exp))

    def is_trivial(self) -> bool:
        return self.coeffs == (1,)

    def power_substitute(self, n: int) -> PolyFactor:
        return PolyFactor(self.coeffs, self.q_exp * n, tuple(n * b for b in self.u_exp))

    def monomial_substitute(self, images: Sequence[Sequence[int]]) -> PolyFactor:
        m = len(images[0]) if images else 0
        out = [0] * m
        for b, img in zip(self.u_exp, images):
            for j, e in enumerate(img):
                out[j] += b * e
        return PolyFactor(self.coeffs, self.q_exp, tuple(out))

    def exponent_at(self, x: Sequence) -> Fraction:
        return self.q_exp - sum((Fraction(b) * Fraction(xi) for b, xi in zip(self.u_exp, x)), Fraction(0))

    def value(self, q, x: Sequence) -> mpmath.mpf:
        t = mpmath.power(q, _mp(self.q_exp) - sum(b * _mp(xi) for b, xi in zip(self.u_exp, x)))
        return mpmath.polyval(list(reversed(self.coeffs)), t)

    def exact_value(self, q: int, x: Sequence) -> Fraction | None:
        e = self.exponent_at(x)
        if e.denominator != 1:
            return None
        t = Fraction(q) ** int(e)
        return sum((c * t**k for k, c in enumerate(self.coeffs)), Fraction(0))

    def text(self, names: Sequence[str]) -> str:
        mono = " ".join(
            [f"q^{self.q_exp}"] * (self.q_exp != 0)
            + [n if b == 1 else f"{n}^{b}" for b, n in zip(self.u_exp, names) if b]
        )
        return f"P{list(self.coeffs)}({mono or '1'})"


Factor = Atom | PolyFactor


def _factor_key(item):
    f = item[0]
    return (isinstance(f, PolyFactor), f)


@dataclass(frozen=True)
class LimitValue:
    """coefficient * (log q)^log_power, with the coefficient exact when possible."""

    coefficient: Fraction | float
    log_power: int
    exact: bool

    def numeric(self, q) -> float:
        return float(self.coefficient) * log(q) ** self.log_power


class FactorProduct:
    """scalar * prod factor^exponent, with exponents nonzero integers."""

    __slots__ = ("scalar", "factors", "nvars", "__dict__")

    def __init__(self, scalar: Number = 1, factors: dict | Iterable = (), nvars: int = 1):
        self.scalar = Fraction(scalar)
        self.nvars = nvars
        merged: Counter = Counter()
        items = factors.items() if isinstance(factors, dict) else factors
        for f, e in items:
            if isinstance(f, PolyFactor) and f.is_trivial():
                continue
            if len(f.u_exp) != nvars:
                raise RatFunError(f"factor {f} has {len(f.u_exp)} variables, expected {nvars}")
            merged[f] += int(e)
        self.factors = {f: e for f, e in sorted(merged.items(), key=_factor_key) if e != 0}
        if self.scalar == 0:
            raise RatFunError("zero is not representable as a factor product")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def one(cls, nvars: int = 1) -> FactorProduct:
        return cls(1, (), nvars)

    @classmethod
    def atom(cls, zeta, q_exp, u_exp, exponent: int = 1) -> FactorProduct:
        a = Atom(Fraction(zeta), Fraction(q_exp), tuple(u_exp))
        return cls(1, {a: exponent}, len(a.u_exp))

    # -- algebra ----------------------------------------------------------------

    def _check(self, other: FactorProduct) -> None:
        if self.nvars != other.nvars:
            raise RatFunError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __mul__(self, other):
        if not isinstance(other, FactorProduct):
            return FactorProduct(self.scalar * Fraction(other), self.factors, self.nvars)
        self._check(other)
        merged = Counter(self.factors)
        merged.update(other.factors)
        return FactorProduct(self.scalar * other.scalar, merged, self.nvars)

    __rmul__ = __mul__

    def inverse(self) -> FactorProduct:
        return FactorProduct(1 / self.scalar, {f: -e for f, e in self.factors.items()}, self.nvars)

    def __truediv__(self, other):
        if not isinstance(other, FactorProduct):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, n: int) -> FactorProduct:
        return FactorProduct(self.scalar**n, {f: e * n for f, e in self.factors.items()}, self.nvars)

    @cached_property
    def canonical(self) -> tuple:
        split: Counter = Counter()
        for f, e in self.factors.items():
            if isinstance(f, Atom):
                for piece in f.split():
                    split[piece] += e
            else:
                split[f] += e
        return (self.scalar, self.nvars, tuple(sorted(((k, v) for k, v in split.items() if v), key=_factor_key)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactorProduct):
            return NotImplemented
        if self.nvars != other.nvars or self.scalar != other.scalar:
            return False
        # cancel identical factors first; only the remainder needs splitting
        rest: Counter = Counter(self.factors)
        rest.subtract(other.factors)
        split: Counter = Counter()
        for f, e in rest.items():
            if not e:
                continue
            for piece in f.split() if isinstance(f, Atom) else (f,):
                split[piece] += e
        return not any(split.values())

    def __hash__(self) -> int:
        return hash(self.canonical)

    def is_one(self) -> bool:
        return self == FactorProduct.one(self.nvars)

    # -- substitutions ----------------------------------------------------------

    def power_substitute(self, n: int) -> FactorProduct:
        """Replace (q, u) by (q^n, u^n)."""
        return FactorProduct(self.scalar, {f.power_substitute(n): e for f, e in self.factors.items()}, self.nvars)

    def monomial_substitute(self, images: Sequence[Sequence[int]]) -> FactorProduct:
        if len(images) != self.nvars:
            raise RatFunError("one image per variable required")
        m = len(images[0])
        merged: Counter = Counter()
        for f, e in self.factors.items():
            merged[f.monomial_substitute(images)] += e
        return FactorProduct(self.scalar, merged, m)

    def restrict_to_line(self) -> FactorProduct:
        """Set every variable equal to a single u."""
        return self.monomial_substitute([(1,)] * self.nvars)

    # -- analysis ---------------------------------------------------------------

    def order_at(self, x: Sequence) -> int:
        """Zero order (negative for poles) at the point u_i = q^{-x_i}, atoms only."""
        return sum(e for f, e in self.factors.items() if isinstance(f, Atom) and f.vanishes_at(x))

    def order_at_s1(self, q: int | None = None) -> int:
        """Order at u_i = q^{-1} for every i.  The value does not depend on q."""
        return self.order_at([1] * self.nvars)

    def hyperplane_order(self, i: int) -> int:
        """Generic order along x_i = 1: atoms depending on u_i alone that vanish there."""
        total = 0
        for f, e in self.factors.items():
            if not isinstance(f, Atom) or f.zeta != 0:
                continue
            if any(b for j, b in enumerate(f.u_exp) if j != i):
                continue
            if f.u_exp[i] and f.q_exp == f.u_exp[i]:
                total += e
        return total

    def vanishing_factors(self, x: Sequence) -> list[tuple[Factor, int]]:
        return [(f, e) for f, e in self.factors.items() if isinstance(f, Atom) and f.vanishes_at(x)]

    def limit_at_s1(self, r: int, q: int) -> LimitValue:
        """lim_{s->1} (s-1)^r f(q^{-s}) on the diagonal, as a multiple of (log q)^{-r}."""
        x = [1] * self.nvars
        order = self.order_at(x)
        if order != -r:
            raise RatFunError(f"pole order at s=1 is {-order}, not {r}")
        coef = Fraction(self.scalar)
        rest: Counter = Counter()
        for f, e in self.factors.items():
            if isinstance(f, Atom) and f.vanishes_at(x):
                coef *= Fraction(sum(f.u_exp)) ** e
            else:
                rest[f] = e
        value = _exact_product(rest, q, x)
        if value is None:
            numeric = float(coef) * float(mpmath.re(_numeric_product(rest, q, x)))
            return LimitValue(numeric, -r, False)
        if value == 0:
            raise RatFunError("a polynomial factor vanishes at s=1")
        return LimitValue(coef * value, -r, True)

    def evaluate(self, s, q, x: Sequence | None = None) -> float:
        """Numeric value at u_i = q^{-x_i}; with ``x`` omitted every x_i equals s."""
        point = [s] * self.nvars if x is None else list(x)
        with mpmath.workdps(40):
            val = _numeric_product(self.factors, q, point) * self.scalar
            if abs(mpmath.im(val)) > mpmath.mpf(10) ** -25 * max(1, abs(val)):
                raise RatFunError(f"complex value {val}")
            return float(mpmath.re(val))

    def evaluate_mp(self, q, x: Sequence) -> mpmath.mpc:
        return _numeric_product(self.factors, q, x) * self.scalar

    def series(self, q: int, nterms: int) -> list[Fraction]:
        """Power series coefficients in u (univariate, real atoms with integral q-powers)."""
        if self.nvars != 1:
            raise RatFunError("series expansion is univariate")
        out = [Fraction(0)] * nterms
        out[0] = self.scalar
        for f, e in self.factors.items():
            poly = _factor_polynomial(f, q, nterms)
            if e > 0:
                for _ in range(e):
                    out = _series_mul(out, poly)
            else:
                inv = _series_inverse(poly, nterms)
                for _ in range(-e):
                    out = _series_mul(out, inv)
        return out

    # -- presentation -----------------------------------------------------------

    def text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = ["u"] if self.nvars == 1 else [f"u{i + 1}" for i in range(self.nvars)]
        num = [f.text(names) + (f"^{e}" if e != 1 else "") for f, e in self.factors.items() if e > 0]
        den = [f.text(names) + (f"^{-e}" if e != -1 else "") for f, e in self.factors.items() if e < 0]
        head = "" if self.scalar == 1 else f"{self.scalar} * "
        top = " ".join(num) or "1"
        return head + (top if not den else f"{top} / ({' '.join(den)})")

    def __repr__(self) -> str:
        return f"FactorProduct({self.text()})"


def _numeric_product(factors, q, x) -> mpmath.mpc:
    val = mpmath.mpc(1)
    for f, e in factors.items():
        v = f.value(q, x)
        if v == 0:
            raise RatFunError(f"factor {f} vanishes at the evaluation point")
        val *= mpmath.power(v, e)
    return val


def cyclotomic_polynomial(n: int) -> list[int]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return poly


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for j, dj in enumerate(den):
            num[k + j] -= c * dj
    if any(num):
        raise RatFunError("inexact polynomial division")
    return out


def _cyclo_reduce(poly: list[Fraction], modulus: list[int]) -> list[Fraction]:
    poly = list(poly)
    m = len(modulus) - 1
    for k in range(len(poly) - 1, m - 1, -1):
        c = poly[k]
        if c:
            for j in range(m + 1):
                poly[k - m + j] -= c * modulus[j]
    return (poly[:m] + [Fraction(0)] * m)[:m]


def _exact_product(factors, q: int, x) -> Fraction | None:
    """Exact value of a product of atoms and polynomial factors, or None if not rational."""
    n = 1
    for f in factors:
        if isinstance(f, Atom):
            n = n * f.zeta.denominator // gcd(n, f.zeta.denominator)
    modulus = cyclotomic_polynomial(n)
    num = [Fraction(1)]
    den = [Fraction(1)]
    for f, e in factors.items():
        e_abs = abs(e)
        if isinstance(f, PolyFactor):
            v = f.exact_value(q, x)
            if v is None or v == 0:
                return None
            factor_poly = [v]
        else:
            ex = f.exponent_at(x)
            if ex.denominator != 1:
                return None
            k = f.zeta.numerator * (n // f.zeta.denominator)
            factor_poly = [Fraction(1)] + [Fraction(0)] * k
            factor_poly[k] -= Fraction(q) ** int(ex)
        target = num if e > 0 else den
        for _ in range(e_abs):
            target = _cyclo_reduce(_poly_mul(target, factor_poly), modulus)
        if e > 0:
            num = target
        else:
            den = target
    inv = _cyclo_inverse(_trim(den), modulus)
    if inv is None:
        return None
    value = _trim(_cyclo_reduce(_poly_mul(num, inv), modulus))
    if len(value) > 1:
        return None
    return value[0]


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(a)
    b = _trim(b)
    if len(a) < len(b):
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    rem = list(a)
    for k in range(len(quot) - 1, -1, -1):
        c = rem[k + len(b) - 1] / b[-1]
        quot[k] = c
        for j, bj in enumerate(b):
            rem[k + j] -= c * bj
    return quot, _trim(rem[: len(b) - 1] or [Fraction(0)])


def _poly_sub(a, b) -> list[Fraction]:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _cyclo_inverse(den: list[Fraction], modulus: list[int]) -> list[Fraction] | None:
    """Inverse of ``den`` modulo the cyclotomic modulus by the extended Euclidean algorithm."""
    if all(c == 0 for c in den):
        return None
    r0, r1 = [Fraction(c) for c in modulus], _trim(den)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while not (len(r1) == 1 and r1[0] == 0):
        quot, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1))
    if len(r0) != 1:
        return None
    return [c / r0[0] for c in s0]


def _poly_mul(a, b) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _factor_polynomial(f: Factor, q: int, nterms: int) -> list[Fraction]:
    if isinstance(f, Atom):
        if f.zeta not in (0, Fraction(1, 2)) or f.q_exp.denominator != 1:
            raise RatFunError("series expansion needs real atoms with integral q-powers")
        sign = 1 if f.zeta == 0 else -1
        poly = [Fraction(0)] * nterms
        poly[0] = Fraction(1)
        if f.u_exp[0] < nterms:
            poly[f.u_exp[0]] -= sign * Fraction(q) ** int(f.q_exp)
        return poly
    if f.q_exp.denominator != 1:
        raise RatFunError("series expansion needs integral q-powers")
    poly = [Fraction(0)] * nterms
    t = Fraction(q) ** int(f.q_exp)
    for k, c in enumerate(f.coeffs):
        if k * f.u_exp[0] < nterms:
            poly[k * f.u_exp[0]] += c * t**k
    return poly


def _series_mul(a, b) -> list[Fraction]:
    n = len(a)
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        if x:
            for j in range(n - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _series_inverse(a, n) -> list[Fraction]:
    out = [Fraction(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        out[k] = -sum((a[j] * out[k - j] for j in range(1, k + 1)), Fraction(0)) / a[0]
    return out


# -- zeta functions ------------------------------------------------------------


def power_sums_from_polynomial(coeffs: Sequence[int], count: int) -> list[int]:
    """p_m = sum of omega_i^m for P(T) = prod (1 - omega_i T), m = 1..count (Newton)."""
    c = list(coeffs) + [0] * (count + 1)
    p = []
    for m in range(1, count + 1):
        # m c_m + sum_{j=1}^{m-1} c_{m-j} p_j + p_m = 0 with the sign convention of 1 - e1 T + ...
        val = -m * c[m] - sum(c[m - j] * p[j - 1] for j in range(1, m))
        p.append(val)
    return p


def polynomial_from_power_sums(p: Sequence[int], degree: int) -> tuple[int, ...]:
    """Inverse of ``power_sums_from_polynomial`` for a polynomial of known degree."""
    c = [Fraction(1)]
    for m in range(1, degree + 1):
        val = -(Fraction(p[m - 1]) + sum((c[m - j] * p[j - 1] for j in range(1, m)), Fraction(0))) / m
        c.append(val)
    out = []
    for x in c:
        if x.denominator != 1:
            raise RatFunError("power sums do not come from an integer polynomial")
        out.append(int(x))
    return tuple(out)


def twisted_numerator(coeffs: Sequence[int], k: int, sign: int = 1) -> tuple[int, ...]:
    """prod_i (1 - sign * omega_i^k Y) for P(T) = prod_i (1 - omega_i T)."""
    degree = len(coeffs) - 1
    if degree == 0:
        return (1,)
    p = power_sums_from_polynomial(coeffs, k * degree)
    twisted = [sign**m * p[k * m - 1] for m in range(1, degree + 1)]
    return polynomial_from_power_sums(twisted, degree)


def zeta_constant_extension(q: int, n: int = 1, genus: int = 0, zeta_numerator: Sequence[int] = (1,)) -> FactorProduct:
    """Zeta function of the constant extension of degree n, as a function of u = q^{-s}.

    With numerator L(T) for the base curve the extension has numerator
    prod (1 - omega_i^n T^n), which is L itself for n = 1.
    """
    if n < 1:
        raise RatFunError("extension degree must be positive")
    num = tuple(zeta_numerator)
    if genus and len(num) - 1 != 2 * genus:
        raise RatFunError(f"numerator of degree {len(num) - 1} does not match genus {genus}")
    f = FactorProduct(1, {Atom(0, 0, (n,)): -1, Atom(0, n, (n,)): -1})
    if len(num) > 1:
        f = f * FactorProduct(1, {PolyFactor(twisted_numerator(num, n), 0, (n,)): 1})
    return f


__all__ = [
    "Atom",
    "FactorProduct",
    "LimitValue",
    "PolyFactor",
    "RatFunError",
    "cyclotomic_polynomial",
    "twisted_numerator",
    "zeta_constant_extension",
]
