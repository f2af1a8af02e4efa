"""Objective compression for quadratic huge N-fold instances.

A separable quadratic objective is a linear function of the per-type
aggregated variables ``Z_l = sum x_l^2`` and ``X_l = sum x_l``.  Frank and
Tardos' rounding replaces that linear function by an integer one of bounded
bit-length with the same sign pattern on a box, hence the same order on all
solutions.  The decision bound rides along as one more coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .lattice import simultaneous_approximation
from .nfold import HugeNFoldInstance, QuadObjective

BIT_CONSTANT = 128


def frank_tardos(w: Sequence, M: int) -> list[int]:
    """Integer ``w~`` with ``sign(w.v) == sign(w~.v)`` for every integer ``v`` in ``[-2M, 2M]^d``.

    Coordinates with equal absolute value are merged first (their combined
    variable still has 1-norm at most ``N - 1``), and zeros stay zero.
    """
    w = [Fraction(v) for v in w]
    d = len(w)
    if d == 0:
        return []
    if M < 1:
        raise ValueError("M must be positive")
    N = 2 * M * d + 1  # sign preserved for every integer b with |b|_1 <= N - 1
    keys = sorted({abs(v) for v in w if v})
    if not keys:
        return [0] * d
    index = {v: j for j, v in enumerate(keys)}
    reduced = _frank_tardos_core(keys, N)
    return [0 if v == 0 else (reduced[index[abs(v)]] if v > 0 else -reduced[index[abs(v)]]) for v in w]


def _frank_tardos_core(w: list[Fraction], N: int) -> list[int]:
    d = len(w)
    eps = Fraction(1, 2 * N)
    pieces: list[list[int]] = []
    cur = list(w)
    while any(cur):
        support = [j for j in range(d) if cur[j]]
        top = max(abs(cur[j]) for j in support)
        y = [cur[j] / top for j in support]
        q, p_sup = simultaneous_approximation(y, eps)
        p = [0] * d
        nxt = [Fraction(0)] * d
        for j, yj, pj in zip(support, y, p_sup):
            p[j] = pj
            nxt[j] = q * yj - pj
        pieces.append(p)
        cur = nxt
    delta = (N - 1) * max(max(abs(v) for v in p) for p in pieces) + 1
    out = [0] * d
    for p in pieces:
        out = [delta * o + v for o, v in zip(out, p)]
    return out


def sign_equivalent(w: Sequence, w2: Sequence, M: int) -> bool:
    """Exhaustive check over ``[-2M, 2M]^d`` (small d only)."""
    import itertools

    w = [Fraction(v) for v in w]
    rng = range(-2 * M, 2 * M + 1)
    for v in itertools.product(rng, repeat=len(w)):
        a = sum((x * y for x, y in zip(w, v)), Fraction(0))
        b = sum(x * y for x, y in zip(w2, v))
        if (a > 0) != (b > 0) or (a < 0) != (b < 0):
            return False
    return True


@dataclass
class AggregatedLinear:
    """Objective as one linear function of per-type aggregated variables.

    ``A[i][l]`` multiplies ``Z^i_l = sum over type-i bricks of x_l^2`` and
    ``B[i][l]`` multiplies ``X^i_l = sum of x_l``; every aggregated variable
    lies in ``[-boxM, boxM]``.
    """

    A: list[list[Fraction]]
    B: list[list[Fraction]]
    boxM: int


def aggregate(inst: HugeNFoldInstance) -> AggregatedLinear:
    D = max((h - l_ for blk in inst.blocks if blk.mu for l_, h in zip(blk.l, blk.u)), default=0)
    return AggregatedLinear([list(blk.f.alpha) for blk in inst.blocks],
                            [list(blk.f.beta) for blk in inst.blocks],
                            max(1, inst.N * D * D))


def coefficient_bit_bound(inst: HugeNFoldInstance, boxM: int) -> int:
    """``c (t tau_bar)^3 (1 + log2(N D^2))`` with the documented constant c."""
    tt = inst.t * max(1, inst.tau_bar)
    return BIT_CONSTANT * tt**3 * (1 + max(1, boxM).bit_length())


@dataclass
class ObjectiveReduction:
    instance: HugeNFoldInstance
    bound: int
    M: int
    max_bits: int
    bit_bound: int


def reduce_objective(inst: HugeNFoldInstance, bound) -> ObjectiveReduction:
    """Replace every block objective by an order-equivalent integer one.

    For all integer solutions ``x, y`` of ``inst``: ``f(x) <= f(y)`` iff
    ``f~(x) <= f~(y)``, and ``f(x) <= bound`` iff ``f~(x) <= bound~``.
    Blocks are first shifted so that the box contains the origin; the
    constants this produces move into the bound.
    """
    if any(not blk.finite for blk in inst.blocks):
        raise ValueError("objective reduction needs finite boxes")
    bound = Fraction(bound)
    origins = []
    shifted = []
    const = Fraction(0)
    for blk in inst.blocks:
        o = tuple(min(max(0, l_), h) for l_, h in zip(blk.l, blk.u))
        g, c0 = blk.f.shifted(o)
        origins.append(o)
        shifted.append(g)
        const += blk.mu * c0
    D = max((max(h - o_, o_ - l_) for blk, o in zip(inst.blocks, origins) if blk.mu
             for l_, h, o_ in zip(blk.l, blk.u, o)), default=0)
    M = max(1, inst.N * D * D)

    active = [i for i, blk in enumerate(inst.blocks) if blk.mu]
    w = []
    for i in active:
        w.extend(shifted[i].alpha)
        w.extend(shifted[i].beta)
    w.append(-(bound - const))  # coordinate carrying the constant 1
    wt = frank_tardos(w, M)
    new_bound = -wt[-1]

    t = inst.t
    blocks = list(inst.blocks)
    for pos, i in enumerate(active):
        chunk = wt[2 * t * pos: 2 * t * (pos + 1)]
        g = QuadObjective(tuple(chunk[:t]), tuple(chunk[t:]))
        # f~(x) = g(x - o) = back(x) + g(-o); the constant is type-wide
        back, c1 = g.shifted(tuple(-v for v in origins[i]))
        new_bound -= blocks[i].mu * c1
        blocks[i] = replace(blocks[i], f=back)
    for i, blk in enumerate(blocks):
        if not blk.mu:
            blocks[i] = replace(blk, f=QuadObjective.zero(t))
    out = replace(inst, blocks=tuple(blocks))
    max_bits = max((abs(int(v)).bit_length() for blk in blocks for v in blk.f.alpha + blk.f.beta), default=0)
    max_bits = max(max_bits, abs(int(new_bound)).bit_length())
    bit_bound = coefficient_bit_bound(inst, M)
    if max_bits > bit_bound:
        raise AssertionError(f"reduced coefficients use {max_bits} bits, bound is {bit_bound}")
    return ObjectiveReduction(out, int(new_bound), M, max_bits, bit_bound)
