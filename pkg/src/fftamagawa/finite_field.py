"""Small finite fields with integer-encoded elements.

An element of GF(p^d) is the integer whose base-p digits are its coefficients
in the polynomial basis modulo a fixed irreducible polynomial.  Fields are
tiny (a few hundred elements at most) so multiplication goes through
log/antilog tables built from a primitive element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product


class FieldError(ValueError):
    pass


def _prime_factor(n: int) -> tuple[int, int]:
    if n < 2:
        raise FieldError(f"field order must be at least 2, got {n}")
    p = next(d for d in range(2, n + 1) if n % d == 0)
    d = 0
    while n % p == 0:
        n //= p
        d += 1
    if n != 1:
        raise FieldError("order is not a prime power")
    return p, d


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    deg = len(m) - 1
    if deg <= 1:
        return True
    for k in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=k):
            cand = list(tail) + [1]
            if not any(_poly_mod(m, cand, p)):
                return False
    return True


@lru_cache(maxsize=None)
def conway_like_modulus(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree d in lexicographic order (coefficients low to high)."""
    if d == 1:
        return (0, 1)
    for tail in product(range(p), repeat=d):
        cand = list(reversed(tail)) + [1]
        if cand[0] and _is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {d} over F_{p}")


class GF:
    """The field with p^d elements."""

    def __init__(self, order: int):
        self.p, self.d = _prime_factor(order)
        self.order = order
        self.modulus = conway_like_modulus(self.p, self.d)
        self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("GF", self.order))

    # -- encoding ----------------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.d):
            out.append(a % self.p)
            a //= self.p
        return out

    def encode(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)[: self.d]):
            v = v * self.p + c % self.p
        return v

    def _poly_mul_raw(self, a: int, b: int) -> int:
        x, y = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.d - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        return self.encode(_poly_mod(prod, list(self.modulus), self.p))

    def _build_tables(self) -> None:
        n = self.order
        self._add = [[self.encode([x + y for x, y in zip(self.digits(a), self.digits(b))]) for b in range(n)] for a in range(n)]
        self._neg = [self.encode([-x for x in self.digits(a)]) for a in range(n)]
        for g in range(2, n) if n > 2 else [1]:
            exp = [1]
            x = 1
            for _ in range(n - 2):
                x = self._poly_mul_raw(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == n - 1:
                break
        else:
            if n > 2:
                raise FieldError("no primitive element found")
            exp = [1]
        self.generator = exp[1] if len(exp) > 1 else 1
        self._exp = exp
        self._log = {v: k for k, v in enumerate(exp)}

    # -- arithmetic ----------------------------------------------------------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def from_int(self, k: int) -> int:
        return k % self.p

    def frobenius(self, a: int, power: int = 1) -> int:
        return self.pow(a, self.p**power)

    def power_of_generator(self, k: int) -> int:
        return self._exp[k % (self.order - 1)]

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(self.mul(a, a) for a in self.units())

    # -- subfields ------------------------------------------------------------

    def subfield_elements(self, order: int) -> list[int]:
        """Elements fixed by x -> x^order."""
        return [a for a in self.elements() if self.pow(a, order) == a]

    def conjugate(self, a: int, sub_order: int) -> int:
        """Generator of Gal over the subfield of size ``sub_order``."""
        return self.pow(a, sub_order)


@dataclass(frozen=True)
class FiniteFieldElem:
    """Convenience wrapper with operators, used in tests and reports."""

    field: GF
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FiniteFieldElem):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.value
        return self.field.from_int(int(other))

    def __add__(self, other):
        return FiniteFieldElem(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FiniteFieldElem(self.field, self.field.sub(self.value, self._coerce(other)))

    def __neg__(self):
        return FiniteFieldElem(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FiniteFieldElem(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FiniteFieldElem(self.field, self.field.div(self.value, self._coerce(other)))

    def __pow__(self, k: int):
        return FiniteFieldElem(self.field, self.field.pow(self.value, k))

    def frobenius(self, power: int = 1):
        return FiniteFieldElem(self.field, self.field.frobenius(self.value, power))

    def is_zero(self) -> bool:
        return self.value == 0


@lru_cache(maxsize=None)
def field(order: int) -> GF:
    return GF(order)


__all__ = ["GF", "FieldError", "FiniteFieldElem", "conway_like_modulus", "field"]
