from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fftamagawa.ratfun import (
    Atom,
    FactorProduct,
    PolyFactor,
    RatFunError,
    cyclotomic_polynomial,
    twisted_numerator,
    zeta_constant_extension,
)


def log_series_from_counts(counts, nterms):
    """exp(sum_k N_k u^k / k) as exact power series coefficients."""
    log = [Fraction(0)] + [Fraction(counts[k - 1], k) for k in range(1, nterms)]
    out = [Fraction(1)] + [Fraction(0)] * (nterms - 1)
    # f' = f * log'  gives  n f_n = sum_k k log_k f_{n-k}
    for n in range(1, nterms):
        out[n] = sum((k * log[k] * out[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return out


@pytest.mark.parametrize("q", [3, 4, 5])
def test_zeta_matches_point_counts_of_p1(q):
    counts = [q**k + 1 for k in range(1, 12)]
    assert zeta_constant_extension(q, 1).series(q, 12) == log_series_from_counts(counts, 12)


def test_zeta_of_quadratic_extension_matches_point_counts():
    # degree-k points of P^1 over F_9 live in degree 2k of u
    q = 3
    counts = [0 if k % 2 else 9 ** (k // 2) + 1 for k in range(1, 13)]
    counts = [c * 2 if c else 0 for c in counts]  # N_{2j} over F_3 contributes 2 (9^j + 1) to the log-derivative
    assert zeta_constant_extension(q, 2).series(q, 13) == log_series_from_counts(counts, 13)


def test_zeta_closed_forms():
    assert zeta_constant_extension(3, 1) == FactorProduct(1, {Atom(0, 0, (1,)): -1, Atom(0, 1, (1,)): -1})
    assert zeta_constant_extension(3, 2) == FactorProduct(1, {Atom(0, 0, (2,)): -1, Atom(0, 2, (2,)): -1})
    with pytest.raises(RatFunError):
        zeta_constant_extension(3, 0)


def test_genus_one_zeta_counts():
    # elliptic curve over F_5 with a_1 = 2: L(T) = 1 - 2T + 5T^2, N_k = 5^k + 1 - (w1^k + w2^k)
    num = (1, -2, 5)
    f = zeta_constant_extension(5, 1, 1, num)
    w = [complex(1, 2), complex(1, -2)]
    counts = [5**k + 1 - round(sum(x**k for x in w).real) for k in range(1, 10)]
    assert f.series(5, 10) == log_series_from_counts(counts, 10)
    assert f.order_at_s1() == -1


def test_twisted_numerator():
    # roots 1 +- 2i; squares are -3 +- 4i, so prod (1 - w^2 Y) = 1 + 6Y + 25Y^2
    assert twisted_numerator((1, -2, 5), 2) == (1, 6, 25)
    assert twisted_numerator((1, -2, 5), 1) == (1, -2, 5)
    assert twisted_numerator((1, -2, 5), 1, -1) == (1, 2, 5)
    assert twisted_numerator((1,), 3) == (1,)


def test_cyclotomic():
    assert cyclotomic_polynomial(1) == [-1, 1]
    assert cyclotomic_polynomial(4) == [1, 0, 1]
    assert cyclotomic_polynomial(6) == [1, -1, 1]


def test_order_at_s1():
    assert FactorProduct.atom(0, 1, (1,), -1).order_at_s1() == -1
    assert FactorProduct.atom(0, 0, (1,)).order_at_s1() == 0
    assert zeta_constant_extension(3).order_at_s1() == -1
    assert zeta_constant_extension(3, 2).order_at_s1() == -1
    # the root-of-unity twin of a vanishing factor does not vanish
    assert FactorProduct.atom(Fraction(1, 2), 1, (1,), -1).order_at_s1() == 0


def test_limits_at_s1():
    v = FactorProduct.atom(0, 1, (1,), -1).limit_at_s1(1, 3)
    assert (v.coefficient, v.log_power, v.exact) == (1, -1, True)
    v = zeta_constant_extension(3).limit_at_s1(1, 3)
    assert v.coefficient == Fraction(3, 2) and v.log_power == -1
    assert v.numeric(3) == pytest.approx(3 / (2 * math.log(3)), rel=1e-15)
    v = FactorProduct.atom(0, 0, (1,)).limit_at_s1(0, 3)
    assert v.coefficient == Fraction(2, 3)
    with pytest.raises(RatFunError):
        zeta_constant_extension(3).limit_at_s1(2, 3)


@pytest.mark.parametrize("q,n", [(3, 1), (3, 2), (5, 3), (4, 2)])
def test_limit_matches_extrapolation(q, n):
    f = zeta_constant_extension(q, n)
    s = 1 + 1e-4
    approx = (s - 1) * f.evaluate(s, q)
    exact = f.limit_at_s1(1, q).numeric(q)
    assert abs(approx / exact - 1) < 1e-3


def test_evaluations():
    sl2 = FactorProduct(1, {Atom(0, -1, (1,)): 1, Atom(0, 0, (1,)): -1})
    assert sl2.evaluate(2, 3) == pytest.approx(13 / 12, rel=1e-15)
    assert zeta_constant_extension(3).evaluate(3, 3) == pytest.approx(243 / 208, rel=1e-15)
    assert FactorProduct(Fraction(7, 2)).evaluate(2, 3) == 3.5
    with pytest.raises(RatFunError, match="vanishes"):
        zeta_constant_extension(3).evaluate(1, 3)


def test_split_atoms_compare_equal():
    # 1 - u^2 = (1 - u)(1 + u)
    lhs = FactorProduct.atom(0, 0, (2,))
    rhs = FactorProduct(1, {Atom(0, 0, (1,)): 1, Atom(Fraction(1, 2), 0, (1,)): 1})
    assert lhs == rhs and hash(lhs) == hash(rhs)
    # 1 - q^2 u^2 differs from 1 - q^2 u^2 twisted by -1
    assert FactorProduct.atom(0, 2, (2,)) != FactorProduct.atom(Fraction(1, 2), 2, (2,))


def test_power_substitute_and_polyfactor():
    f = zeta_constant_extension(3, 1)
    assert f.power_substitute(2) == zeta_constant_extension(3, 2)
    p = PolyFactor((1, 6, 25), 0, (1,))
    assert p.power_substitute(2) == PolyFactor((1, 6, 25), 0, (2,))
    assert PolyFactor((1,), 0, (1,)).is_trivial()
    assert FactorProduct(1, {PolyFactor((1,), 0, (1,)): 3}).is_one()


def test_variable_mismatch():
    with pytest.raises(RatFunError):
        FactorProduct.atom(0, 0, (1,)) * FactorProduct.atom(0, 0, (1, 1))
    with pytest.raises(RatFunError):
        Atom(0, 0, (-1,))


def test_multivariable_restriction():
    f = FactorProduct.atom(0, 1, (1, 1), -1)
    assert f.restrict_to_line() == FactorProduct.atom(0, 1, (2,), -1)
    assert f.hyperplane_order(0) == 0
    g = FactorProduct.atom(0, 1, (1, 0), -1)
    assert g.hyperplane_order(0) == -1 and g.hyperplane_order(1) == 0


atoms = st.builds(
    Atom,
    st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)]),
    st.integers(-3, 3),
    st.tuples(st.integers(0, 4)).filter(lambda t: t != (0,)),
)
products = st.builds(
    lambda sc, fs: FactorProduct(sc, fs),
    st.fractions(min_value=-5, max_value=5).filter(lambda x: x != 0),
    st.lists(st.tuples(atoms, st.integers(-2, 2)), max_size=4),
)


@settings(max_examples=100, deadline=None)
@given(products, products, products)
def test_ring_laws(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert (f * f.inverse()).is_one()
    assert f / g * g == f
    assert (f * g).order_at_s1() == f.order_at_s1() + g.order_at_s1()
    assert (f * g).power_substitute(3) == f.power_substitute(3) * g.power_substitute(3)


@settings(max_examples=60, deadline=None)
@given(products)
def test_evaluation_is_multiplicative(f):
    g = FactorProduct.atom(0, 1, (2,))
    x = [2.5]
    lhs = complex((f * g).evaluate_mp(3, x))
    rhs = complex(f.evaluate_mp(3, x) * g.evaluate_mp(3, x))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@settings(max_examples=60, deadline=None)
@given(atoms)
def test_split_preserves_value(a):
    whole = FactorProduct(1, {a: 1})
    parts = FactorProduct(1, {p: 1 for p in a.split()})
    assert whole == parts
    if abs(float(a.exponent_at([Fraction(5, 2)]))) < 20:
        x = [2.5]
        assert abs(complex(whole.evaluate_mp(3, x)) - complex(parts.evaluate_mp(3, x))) < 1e-12 * max(1.0, abs(complex(whole.evaluate_mp(3, x))))
