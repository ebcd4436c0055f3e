"""Exact feasibility for {x >= 0 : A x = b} by the phase-one simplex method over Fractions.

Bland's rule keeps the pivoting finite.  Only feasibility is needed here, so
there is no phase two.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A nonnegative solution of A x = b, or None when none exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        # artificial variable i sits in column n + i
        rows.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimize the sum of artificials, stored as reduced costs
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(width + 1):
            cost[j] -= row[j]
    for i in range(m):
        cost[n + i] += 1

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i, row in enumerate(rows):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # unbounded direction cannot occur for phase one, whose objective is bounded below by 0
            raise ArithmeticError("phase-one objective unbounded")
        i = best[1]
        _pivot(rows, cost, i, entering)
        basis[i] = entering

    if -cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return x


def _pivot(rows, cost, r: int, c: int) -> None:
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [a - f * b for a, b in zip(row, rows[r])]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, rows[r])]


def in_convex_hull(point: Sequence, vertices: Sequence[Sequence]) -> bool:
    """Exact test whether ``point`` is a convex combination of ``vertices``."""
    if not vertices:
        return False
    dim = len(point)
    A = [[Fraction(v[k]) for v in vertices] for k in range(dim)]
    A.append([Fraction(1)] * len(vertices))
    b = [Fraction(p) for p in point] + [Fraction(1)]
    return feasible_point(A, b) is not None


__all__ = ["feasible_point", "in_convex_hull"]
