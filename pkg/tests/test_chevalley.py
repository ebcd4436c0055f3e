from __future__ import annotations

import itertools

import pytest

from fftamagawa.chevalley import ChevalleyBasis, SignError, cocycle, orbit_sign, pinned_coefficients
from fftamagawa.galois_form import parse_cycles
from fftamagawa.rootsys import RootSystem, cartan_matrix

SIMPLY_LACED = [("A", 2), ("A", 3), ("A", 4), ("D", 4), ("D", 5), ("E", 6)]
TWISTS = [("A", 2, "(1 2)"), ("A", 3, "(1 3)"), ("A", 4, "(1 4)(2 3)"), ("D", 4, "(3 4)"), ("D", 4, "(1 3 4)"), ("E", 6, "(1 6)(3 5)")]


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@pytest.mark.parametrize("series,rank", SIMPLY_LACED)
def test_jacobi_identity_on_root_vectors(series, rank):
    R = RootSystem(cartan_matrix(series, rank))
    B = ChevalleyBasis(R)
    roots = sorted(R.all_roots)

    def N(a, b):
        return B.structure_constant(a, b) if R.is_root(add(a, b)) else 0

    checked = 0
    for a, b, c in itertools.combinations(roots, 3):
        total = add(add(a, b), c)
        if not R.is_root(total):
            continue
        if not any(add(x, y) == (0,) * rank for x, y in ((a, b), (b, c), (c, a))):
            lhs = N(b, c) * N(a, add(b, c)) + N(c, a) * N(b, add(c, a)) + N(a, b) * N(c, add(a, b))
            assert lhs == 0
            checked += 1
    assert checked > 0 or rank == 2


@pytest.mark.parametrize("series,rank", SIMPLY_LACED)
def test_antisymmetry(series, rank):
    R = RootSystem(cartan_matrix(series, rank))
    B = ChevalleyBasis(R)
    for a in R.all_roots:
        for b in R.all_roots:
            if R.is_root(add(a, b)):
                assert B.structure_constant(a, b) == -B.structure_constant(b, a)


def test_cocycle_on_simple_roots():
    a = cartan_matrix("A", 2)
    assert cocycle(a, (1, 0), (1, 0)) == -1
    assert cocycle(a, (1, 0), (0, 1)) == -1
    assert cocycle(a, (0, 1), (1, 0)) == 1


def test_non_simply_laced_rejected():
    with pytest.raises(SignError):
        ChevalleyBasis(RootSystem(cartan_matrix("B", 2)))


def test_2a2_theta_sign():
    R = RootSystem(cartan_matrix("A", 2))
    coeff = pinned_coefficients(R, (1, 0))
    assert coeff[(1, 0)] == coeff[(0, 1)] == 1
    assert coeff[(1, 1)] == -1
    assert orbit_sign(R, (1, 0), coeff, (1, 1), 1) == -1
    assert orbit_sign(R, (1, 0), coeff, (1, 0), 2) == 1


def test_non_automorphism_rejected():
    R = RootSystem(cartan_matrix("A", 3))
    with pytest.raises(SignError):
        pinned_coefficients(R, (1, 0, 2))


def test_translation_of_copies_has_trivial_signs():
    g2 = cartan_matrix("G", 2)
    two = tuple(tuple(row) + (0, 0) for row in g2) + tuple((0, 0) + tuple(row) for row in g2)
    R = RootSystem(two)
    coeff = pinned_coefficients(R, (2, 3, 0, 1))
    assert set(coeff.values()) == {1}


def _fixed_signs(R, perm):
    coeff = pinned_coefficients(R, perm)
    out = {}
    for r in R.positive_roots:
        cur, k = r, 0
        while True:
            img = [0] * R.rank
            for i, c in enumerate(cur):
                img[perm[i]] = c
            cur, k = tuple(img), k + 1
            if cur == r:
                break
        out[r] = orbit_sign(R, perm, coeff, r, k)
    return out


@pytest.mark.parametrize("series,rank,auto", TWISTS)
def test_orbit_signs_independent_of_labelling(series, rank, auto):
    a = cartan_matrix(series, rank)
    perm = parse_cycles(auto, rank)
    base = _fixed_signs(RootSystem(a), perm)
    for pi in (tuple(reversed(range(rank))), tuple(range(1, rank)) + (0,)):
        a2 = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            for j in range(rank):
                a2[pi[i]][pi[j]] = a[i][j]
        perm2 = [0] * rank
        for i in range(rank):
            perm2[pi[i]] = pi[perm[i]]
        relabelled = _fixed_signs(RootSystem(a2), tuple(perm2))
        for r, sign in base.items():
            r2 = [0] * rank
            for i, c in enumerate(r):
                r2[pi[i]] = c
            assert relabelled[tuple(r2)] == sign
