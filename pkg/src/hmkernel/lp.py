"""Exact two-phase tableau simplex over the rationals.

Solves ``min c x : A x = b, x >= 0`` with Bland's rule, so degenerate
problems terminate and repeated runs take identical pivot sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction]
    # optimal: y with c_j - y.A_j >= 0 for every column, y.b == value.
    # infeasible: Farkas ray with y.A_j <= 0 for every column and y.b > 0.
    duals: list[Fraction]
    value: Fraction
    basis: list[int]
    pivots: int = 0


def _pivot(T: list[list[Fraction]], cost: list[Fraction], r: int, j: int):
    row = T[r]
    piv = row[j]
    if piv != 1:
        inv = 1 / piv
        T[r] = row = [v * inv for v in row]
    for q, other in enumerate(T):
        if q != r:
            f = other[j]
            if f:
                T[q] = [a - f * b for a, b in zip(other, row)]
    f = cost[j]
    if f:
        cost[:] = [a - f * b for a, b in zip(cost, row)]


def _run(T, cost, basis, allowed: int) -> tuple[str, int]:
    """Bland's rule iterations; columns ``>= allowed`` may never enter."""
    pivots = 0
    while True:
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return OPTIMAL, pivots
        best = None
        for r, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            return UNBOUNDED, pivots
        r = best[1]
        _pivot(T, cost, r, enter)
        basis[r] = enter
        pivots += 1


def solve_lp(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    m = len(A)
    n = len(c)
    sign = [(-1 if Fraction(bi) < 0 else 1) for bi in b]
    # tableau columns: n structural, m artificial, rhs
    T = []
    for r in range(m):
        s = sign[r]
        row = [Fraction(s * A[r][j]) for j in range(n)]
        row += [Fraction(1 if q == r else 0) for q in range(m)]
        row.append(Fraction(s * Fraction(b[r])))
        T.append(row)
    basis = list(range(n, n + m))

    cost = [Fraction(0)] * (n + m + 1)
    for j in range(n):
        cost[j] = -sum((T[r][j] for r in range(m)), Fraction(0))
    cost[-1] = -sum((T[r][-1] for r in range(m)), Fraction(0))
    status, pivots = _run(T, cost, basis, n)
    infeasibility = -cost[-1]
    if infeasibility > 0:
        y = [sign[r] * (1 - cost[n + r]) for r in range(m)]
        return LPResult(INFEASIBLE, [], y, infeasibility, basis, pivots)

    # move zero-level artificials out of the basis where a structural column allows
    for r in range(m):
        if basis[r] >= n:
            j = next((q for q in range(n) if T[r][q] != 0), None)
            if j is not None:
                _pivot(T, cost, r, j)
                basis[r] = j
                pivots += 1
            # otherwise the row is redundant and its artificial stays basic at 0

    cf = [Fraction(v) for v in c] + [Fraction(0)] * m
    cost = cf + [Fraction(0)]
    for r in range(m):
        cb = cf[basis[r]]
        if cb:
            cost = [a - cb * v for a, v in zip(cost, T[r])]
    status, more = _run(T, cost, basis, n)
    pivots += more
    x = [Fraction(0)] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = T[r][-1]
    y = [sign[r] * (-cost[n + r]) for r in range(m)]
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, x, y, Fraction(0), basis, pivots)
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, y, value, basis, pivots)


def certify_optimal(A, b, c, x, y) -> bool:
    """Exact KKT check: primal feasible, dual feasible, equal objectives."""
    m, n = len(A), len(c)
    if any(v < 0 for v in x):
        return False
    for r in range(m):
        if sum((Fraction(A[r][j]) * x[j] for j in range(n)), Fraction(0)) != Fraction(b[r]):
            return False
    for j in range(n):
        if Fraction(c[j]) - sum((y[r] * A[r][j] for r in range(m)), Fraction(0)) < 0:
            return False
    primal = sum((Fraction(c[j]) * x[j] for j in range(n)), Fraction(0))
    dual = sum((y[r] * Fraction(b[r]) for r in range(m)), Fraction(0))
    return primal == dual
