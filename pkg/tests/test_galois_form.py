from __future__ import annotations

from fractions import Fraction

import pytest

from fftamagawa.galois_form import (
    FormError,
    QuasiSplitDatum,
    classify_orbit,
    format_cycles,
    is_sigma_invariant,
    parse_cycles,
    projector,
    restrict_roots,
    xi,
    xi_inverse,
)
from fftamagawa.rootsys import CartanDatum, WeightVec, cartan_matrix

from conftest import make


def test_parse_and_format_cycles():
    assert parse_cycles("id", 3) == (0, 1, 2)
    assert parse_cycles("(1 3)", 3) == (2, 1, 0)
    assert parse_cycles("(1 3 4)", 4) == (2, 1, 3, 0)
    assert format_cycles((2, 1, 0)) == "(1 3)"
    assert format_cycles((0, 1, 2)) == "id"


@pytest.mark.parametrize("text", ["(1 4)", "(1 1)", "(1 2", "(a b)"])
def test_parse_cycles_rejects(text):
    with pytest.raises(FormError):
        parse_cycles(text, 3)


def test_automorphism_must_preserve_cartan():
    with pytest.raises(FormError, match=r"does not preserve the Cartan matrix: entry"):
        make("A", 3, "(1 2)")
    with pytest.raises(FormError):
        make("B", 2, "(1 2)")


def test_automorphism_order_restricted_by_type():
    with pytest.raises(FormError):
        make("A", 3, "(1 2 3)")


@pytest.mark.parametrize(
    "kwargs",
    [dict(res=0), dict(q=4 * 0 + 2), dict(q=6), dict(genus=-1), dict(genus=1, numerator=(1, 0))],
)
def test_datum_validation(kwargs):
    with pytest.raises(FormError):
        make("A", 1, **kwargs)


def test_prime_power_q_accepted():
    assert make("A", 1, q=9).q == 9
    assert make("A", 1, q=4).q == 4


def test_2a2_relative_roots():
    d = make("A", 2, "(1 2)")
    table = restrict_roots(d)
    beta = (Fraction(1, 2), Fraction(1, 2))
    two_beta = (Fraction(1), Fraction(1))
    assert table.relative_rank == 1
    assert set(table.relative_roots) == {beta, two_beta}
    assert table.multiplicity[beta] == 2 and table.multiplicity[two_beta] == 1
    assert table.indivisible[beta] and not table.indivisible[two_beta]
    assert table.rho_rel == tuple(2 * x for x in beta)


def test_2a3_relative_roots():
    d = make("A", 3, "(1 3)")
    table = restrict_roots(d)
    assert table.relative_rank == 2
    assert len(table.relative_roots) == 4
    assert sorted(table.multiplicity.values()) == [1, 1, 2, 2]
    assert sum(table.multiplicity.values()) == 6


@pytest.mark.parametrize(
    "args,rank",
    [(("A", 1), 1), (("A", 3), 3), (("A", 3, "(1 3)"), 2), (("D", 4, "(1 3 4)"), 2), (("E", 6, "(1 6)(3 5)"), 4)],
)
def test_relative_rank(args, rank):
    assert make(*args).relative_rank == rank


def test_res_degree_multiplies_copies():
    d = make("A", 1, res=3)
    assert d.system.rank == 3
    assert d.relative_rank == 1
    assert d.simple_orbits == ((0, 1, 2),)
    assert d.dim_group() == 9 and d.dim_unipotent() == 3 and d.dim_torus() == 3
    assert d.label == "Res3(A1)"


def test_projector_is_idempotent_and_invariant():
    d = make("E", 6, "(1 6)(3 5)", res=2)
    R = d.system
    for r in R.positive_roots[:20]:
        p = projector(d, r)
        assert projector(d, p) == p
        assert d.sigma_root(p) == p


@pytest.mark.parametrize("args", [("A", 2), ("A", 2, "(1 2)"), ("A", 4, "(1 4)(2 3)"), ("D", 4, "(1 3 4)"), ("A", 1, "id", 3), ("E", 6, "(1 6)(3 5)", 2)])
def test_xi_of_ones_is_rho(args):
    d = make(*args)
    assert xi([1] * d.relative_rank, d) == d.system.rho
    assert is_sigma_invariant(d, d.system.rho)


def test_xi_2a2_and_inverse():
    d = make("A", 2, "(1 2)")
    s = Fraction(7, 3)
    assert xi([s], d) == WeightVec.of([s, s])
    assert xi_inverse(WeightVec.of([s, s]), d) == (s,)
    with pytest.raises(FormError):
        xi_inverse(WeightVec.of([1, 2]), d)
    with pytest.raises(FormError):
        xi([1, 2], d)


def test_classification():
    assert classify_orbit(make("A", 2, "(1 2)"), 0).kind == "SU3"
    c = classify_orbit(make("A", 1, res=3), 0)
    assert (c.kind, c.field_degree) == ("ResSL2", 3)
    assert classify_orbit(make("A", 1), 0).kind == "SL2"
    c = classify_orbit(make("A", 2, "(1 2)", res=2), 0)
    assert (c.kind, c.field_degree) == ("ResSU3", 2)
    # non-adjacent orbit {1, 3}: SL2 over the quadratic extension
    kinds = sorted((c.kind, c.field_degree) for c in (classify_orbit(make("A", 3, "(1 3)"), i) for i in range(2)))
    assert kinds == [("ResSL2", 2), ("SL2", 1)]
    kinds = sorted((c.kind, c.field_degree) for c in (classify_orbit(make("A", 4, "(1 4)(2 3)"), i) for i in range(2)))
    assert kinds == [("ResSL2", 2), ("SU3", 1)]
