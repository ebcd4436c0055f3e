"""Truncated Laurent series over a finite field, i.e. elements of F_q((pi)) known mod pi^prec."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .finite_field import GF

EXACT = 10**9  # precision sentinel for exactly known elements
DEFAULT_RELATIVE_PRECISION = 64


class PrecisionError(ArithmeticError):
    """The requested decision needs more digits than are known."""


@dataclass(frozen=True)
class LaurentNum:
    """sum_i coeffs[i] pi^(val + i) + O(pi^prec)."""

    field: GF
    val: int
    coeffs: tuple[int, ...]
    prec: int

    def __post_init__(self) -> None:
        coeffs = list(self.coeffs[: max(0, self.prec - self.val)])
        val = self.val
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            val += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            val = self.prec
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    # -- construction ------------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.prec >= EXACT // 2

    @classmethod
    def zero(cls, F: GF, prec: int = EXACT) -> LaurentNum:
        return cls(F, prec, (), prec)

    @classmethod
    def constant(cls, F: GF, c: int, prec: int = EXACT) -> LaurentNum:
        return cls(F, 0, (c,), prec)

    @classmethod
    def monomial(cls, F: GF, c: int, k: int, prec: int = EXACT) -> LaurentNum:
        return cls(F, k, (c,), prec)

    @classmethod
    def from_digits(cls, F: GF, start: int, digits: Sequence[int], prec: int) -> LaurentNum:
        return cls(F, start, tuple(digits), prec)

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        """True when no nonzero digit is known (zero modulo the precision)."""
        return not self.coeffs

    def valuation(self) -> int:
        if self.is_zero():
            raise PrecisionError(f"valuation undetermined: zero mod pi^{self.prec}")
        return self.val

    def valuation_or_bound(self) -> int:
        return self.val

    def digit(self, k: int) -> int:
        if k >= self.prec:
            raise PrecisionError(f"digit {k} beyond precision {self.prec}")
        i = k - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def leading(self) -> int:
        return self.coeffs[0]

    def with_prec(self, prec: int) -> LaurentNum:
        return LaurentNum(self.field, self.val, self.coeffs, min(prec, self.prec))

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: LaurentNum) -> None:
        if other.field != self.field:
            raise ValueError("Laurent numbers over different fields")

    def __add__(self, other: LaurentNum) -> LaurentNum:
        self._check(other)
        F = self.field
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val)
        ends = [x.val + len(x.coeffs) for x in (self, other) if x.coeffs]
        hi = min(prec, max(ends, default=lo))
        digits = [F.add(self.digit(k), other.digit(k)) for k in range(lo, hi)]
        return LaurentNum(F, lo, tuple(digits), prec)

    def __neg__(self) -> LaurentNum:
        F = self.field
        return LaurentNum(F, self.val, tuple(F.neg(c) for c in self.coeffs), self.prec)

    def __sub__(self, other: LaurentNum) -> LaurentNum:
        return self + (-other)

    def __mul__(self, other: LaurentNum) -> LaurentNum:
        self._check(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            prec = min(self.prec + (other.val if not other.is_zero() else other.prec),
                       other.prec + (self.val if not self.is_zero() else self.prec))
            return LaurentNum.zero(F, prec)
        prec = min(self.val + other.prec, other.val + self.prec)
        val = self.val + other.val
        n = min(prec - val, len(self.coeffs) + len(other.coeffs) - 1)
        out = [0] * max(n, 0)
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j, b in enumerate(other.coeffs[: n - i]):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return LaurentNum(F, val, tuple(out), prec)

    def scale(self, c: int) -> LaurentNum:
        F = self.field
        if c == 0:
            return LaurentNum.zero(F, self.prec)
        return LaurentNum(F, self.val, tuple(F.mul(c, x) for x in self.coeffs), self.prec)

    def shift(self, k: int) -> LaurentNum:
        """Multiply by pi^k."""
        return LaurentNum(self.field, self.val + k, self.coeffs, self.prec + k)

    def inverse(self) -> LaurentNum:
        if self.is_zero():
            raise PrecisionError("cannot invert an element that is zero mod the precision")
        F = self.field
        v = self.val
        a = self.coeffs
        if self.exact and len(a) == 1:
            return LaurentNum(F, -v, (F.inv(a[0]),), EXACT)
        rel = min(self.prec - v, DEFAULT_RELATIVE_PRECISION) if self.exact else self.prec - v
        inv0 = F.inv(a[0])
        out = [inv0]
        for k in range(1, rel):
            acc = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                acc = F.add(acc, F.mul(a[j], out[k - j]))
            out.append(F.neg(F.mul(acc, inv0)))
        return LaurentNum(F, -v, tuple(out), -v + rel)

    def __truediv__(self, other: LaurentNum) -> LaurentNum:
        return self * other.inverse()

    def map_coeffs(self, fn) -> LaurentNum:
        return LaurentNum(self.field, self.val, tuple(fn(c) for c in self.coeffs), self.prec)

    def conjugate(self, sub_order: int) -> LaurentNum:
        """Unramified Galois conjugation over the subfield with ``sub_order`` residue elements."""
        return self.map_coeffs(lambda c: self.field.conjugate(c, sub_order))

    def __repr__(self) -> str:
        tail = "" if self.exact else f"O(pi^{self.prec})"
        terms = [f"{c}*pi^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms + [tail] if tail else terms) or "0"


def norm_valuation(entries: Sequence[LaurentNum]) -> int:
    """min valuation over the entries; the sup-norm of the vector is q^(-result)."""
    known = [e for e in entries if not e.is_zero()]
    if not known:
        raise PrecisionError("all entries are zero modulo the precision")
    best = min(e.val for e in known)
    # a zero entry could still hide a smaller valuation only if its precision is below best
    for e in entries:
        if e.is_zero() and e.prec <= best:
            raise PrecisionError("precision insufficient to decide the norm")
    return best


__all__ = ["EXACT", "LaurentNum", "PrecisionError", "norm_valuation"]
