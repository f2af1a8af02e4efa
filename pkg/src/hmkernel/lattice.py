"""Exact integral LLL reduction and simultaneous Diophantine approximation."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a / b for b > 0, halves rounded up."""
    return (2 * a + b) // (2 * b)


def lll_reduce(basis: Sequence[Sequence[int]]) -> list[list[int]]:
    """LLL-reduce linearly independent integer rows with parameter 3/4.

    All-integer variant: Gram-Schmidt data is kept as the integers
    ``d_i`` (leading Gram minors) and ``lam[k][j] = d_{j+1} mu_{kj}`` so
    every division is exact.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n <= 1:
        return b
    d = [1] + [0] * n  # d[i + 1] belongs to vector i
    lam = [[0] * n for _ in range(n)]

    def gram(k: int):
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("basis vectors are linearly dependent")
                d[k + 1] = u

    def red(k: int, l: int):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_div(lam[k][l], d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    gram(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram(k)
        red(k, k - 1)
        # Lovasz condition with 3/4, in integer form
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


def simultaneous_approximation(y: Sequence[Fraction], eps: Fraction) -> tuple[int, list[int]]:
    """Integers ``q >= 1`` and ``p`` with ``|q y_j - p_j| <= eps`` for every j.

    Uses the lattice spanned by ``(delta, y)`` and ``-e_j`` with
    ``delta = eps^(n+1) / 2^ceil(n(n+1)/4)``; the first LLL vector has
    Euclidean length at most ``2^(n/4) det^(1/(n+1)) <= eps`` and therefore
    gives the approximation, with ``q <= eps / delta``.
    """
    y = [Fraction(v) for v in y]
    eps = Fraction(eps)
    n = len(y)
    if n == 0:
        return 1, []
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    delta = eps ** (n + 1) / 2 ** math.ceil(n * (n + 1) / 4)
    scale = delta.denominator
    for v in y:
        scale = math.lcm(scale, v.denominator)
    rows = [[int(delta * scale)] + [int(v * scale) for v in y]]
    for j in range(n):
        row = [0] * (n + 1)
        row[j + 1] = -scale
        rows.append(row)
    short = lll_reduce(rows)[0]
    q = short[0] // int(delta * scale)
    if q < 0:
        q = -q
    if q == 0:
        raise ArithmeticError("approximation lattice returned q = 0")
    p = [round(q * v) for v in y]
    if any(abs(q * v - pv) > eps for v, pv in zip(y, p)):
        raise ArithmeticError("LLL bound violated; this is a bug")
    return q, p
