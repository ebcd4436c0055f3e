"""Chevalley basis signs for simply laced root systems and the pinned diagram action.

Structure constants come from the bimultiplicative cocycle on the root
lattice with eps(a_i, a_i) = -1 and, for i < j, eps(a_i, a_j) = -1 exactly
when a_i and a_j are joined in the Dynkin diagram.  Then

    [e_a, e_b] = eps(a, b) e_{a+b}   whenever a + b is a root.

A diagram permutation sigma fixing the simple root vectors extends to a Lie
algebra automorphism with sigma(e_a) = c_a e_{sigma a}; the coefficients c_a
are obtained by peeling off simple roots and checked for consistency over
every decomposition.
"""

from __future__ import annotations

from typing import Sequence

from .rootsys import RootSystem, RootSystemError


class SignError(RootSystemError):
    pass


def is_simply_laced(cartan: Sequence[Sequence[int]]) -> bool:
    return all(v in (0, -1) for i, row in enumerate(cartan) for j, v in enumerate(row) if i != j)


def _simple_sign(cartan, i: int, j: int) -> int:
    if i == j:
        return -1
    if i < j and cartan[i][j] == -1:
        return -1
    return 1


def cocycle(cartan: Sequence[Sequence[int]], a: Sequence[int], b: Sequence[int]) -> int:
    """eps(a, b) extended bimultiplicatively from the simple roots."""
    parity = 0
    n = len(cartan)
    for i in range(n):
        if a[i] % 2 == 0:
            continue
        for j in range(n):
            if b[j] % 2 and _simple_sign(cartan, i, j) == -1:
                parity ^= 1
    return -1 if parity else 1


class ChevalleyBasis:
    """Root vectors e_a for a simply laced root system with the cocycle signs."""

    def __init__(self, system: RootSystem):
        if not is_simply_laced(system.cartan):
            raise SignError("the cocycle construction needs a simply laced system")
        self.system = system
        self.cartan = system.cartan

    def structure_constant(self, a: Sequence[int], b: Sequence[int]) -> int:
        s = tuple(x + y for x, y in zip(a, b))
        if not self.system.is_root(s):
            return 0
        return cocycle(self.cartan, a, b)

    def bracket_root(self, a, b) -> tuple[int, tuple[int, ...]] | None:
        """[e_a, e_b] as (coefficient, root), or None when it vanishes or leaves the root spaces."""
        c = self.structure_constant(a, b)
        if c == 0:
            return None
        return c, tuple(x + y for x, y in zip(a, b))


def _components(cartan) -> list[list[int]]:
    n = len(cartan)
    seen, out = set(), []
    for start in range(n):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and cartan[i][j]:
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def _translates_components(cartan, perm: Sequence[int]) -> bool:
    """True when perm moves each connected component onto another by an index shift."""
    for comp in _components(cartan):
        shift = perm[comp[0]] - comp[0]
        if any(perm[i] - i != shift for i in comp):
            return False
    return True


def pinned_coefficients(system: RootSystem, perm: Sequence[int]) -> dict[tuple[int, ...], int]:
    """c_a for every positive root a, where sigma(e_a) = c_a e_{sigma a} and c = 1 on simple roots."""
    n = system.rank
    if any(system.cartan[perm[i]][perm[j]] != system.cartan[i][j] for i in range(n) for j in range(n)):
        raise SignError("permutation is not a diagram automorphism")
    if _translates_components(system.cartan, perm):
        # sigma only relabels identical copies, so it carries each e_a to e_{sigma a}
        return {r: 1 for r in system.positive_roots}
    if not is_simply_laced(system.cartan):
        raise SignError("pinned signs are implemented for simply laced types only")

    def act(root):
        img = [0] * n
        for i, c in enumerate(root):
            img[perm[i]] = c
        return tuple(img)

    coeff: dict[tuple[int, ...], int] = {}
    for root in system.positive_roots:  # ordered by height
        if sum(root) == 1:
            coeff[root] = 1
            continue
        values = set()
        for i in range(n):
            beta = tuple(c - int(j == i) for j, c in enumerate(root))
            if beta not in coeff:
                continue
            ai = tuple(int(j == i) for j in range(n))
            # e_root = eps(ai, beta) [e_ai, e_beta] since eps takes values +-1
            val = coeff[beta] * cocycle(system.cartan, ai, beta) * cocycle(system.cartan, act(ai), act(beta))
            values.add(val)
        if len(values) != 1:
            raise SignError(f"inconsistent pinned coefficient for root {root}")
        coeff[root] = values.pop()
    return coeff


def orbit_sign(system: RootSystem, perm: Sequence[int], coeff: dict, root: Sequence[int], steps: int) -> int:
    """Eigenvalue of sigma^steps on e_root, assuming sigma^steps fixes the root."""
    n = system.rank
    cur = tuple(root)
    sign = 1
    for _ in range(steps):
        sign *= coeff[cur]
        img = [0] * n
        for i, c in enumerate(cur):
            img[perm[i]] = c
        cur = tuple(img)
    if cur != tuple(root):
        raise SignError(f"{tuple(root)} is not fixed after {steps} steps")
    return sign


__all__ = ["ChevalleyBasis", "SignError", "cocycle", "is_simply_laced", "orbit_sign", "pinned_coefficients"]
