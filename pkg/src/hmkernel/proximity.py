"""Proximity-based reduction of a huge N-fold instance to a kernel.

Given a vertex optimum ``y`` of the configuration LP, all but ``P`` copies
of every heavily used configuration are fixed, and the remaining bricks are
only allowed to move within distance ``P`` of a small set of centers: the
support columns and one averaged configuration per type.  The result is a
smaller huge N-fold instance whose block multiplicities are at most
``P``-ish, plus the data needed to map its solutions back.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .conflp import ConfLPSolution
from .errors import LiftInfeasible
from .nfold import BlockType, ConfMultiSolution, HugeNFoldInstance, Vector, check_solution, objective_value


def ceil_log2(x: int) -> int:
    return 0 if x <= 1 else (x - 1).bit_length()


@dataclass(frozen=True)
class ProximityBound:
    P: int
    r: int
    tau_bar: int
    t: int
    s: int
    E_inf: int
    E2_inf: int
    overridden: bool = False


def proximity_P(inst: HugeNFoldInstance, override: Optional[int] = None) -> ProximityBound:
    """``(r + tau_bar) 26 t^4 L (2r)^(r+1) (||E||_inf s)^(3rs)`` with ``L = max(1, ceil(log2(t ||E2||_inf)))``."""
    r, tb, t, s = inst.r, inst.tau_bar, inst.t, inst.s
    e_inf, e2_inf = inst.E_inf, inst.E2_inf
    if override is not None:
        if override < 0:
            raise ValueError("proximity override must be nonnegative")
        return ProximityBound(int(override), r, tb, t, s, e_inf, e2_inf, True)
    log_factor = max(1, ceil_log2(t * e2_inf))
    P = (r + tb) * 26 * t**4 * log_factor * (2 * r) ** (r + 1) * max(1, e_inf * s) ** (3 * r * s)
    return ProximityBound(P, r, tb, t, s, e_inf, e2_inf, False)


class CenterOrigin(str, enum.Enum):
    SUPPORT = "support"
    AVERAGED = "averaged"


@dataclass(frozen=True)
class Center:
    type: int
    cfloor: Vector
    origin: CenterOrigin
    muBar: int


@dataclass
class ReducedInstance:
    original: HugeNFoldInstance
    inner: HugeNFoldInstance  # block j belongs to centers[j]
    centers: list[Center]
    fixed_contribution: Fraction
    fixed_solution: ConfMultiSolution
    bound: ProximityBound

    def lift(self, inner_solution: ConfMultiSolution) -> ConfMultiSolution:
        return lift(self, inner_solution)


def _floor_vec(v) -> Vector:
    return tuple(math.floor(x) for x in v)


def reduce(inst: HugeNFoldInstance, lp_opt: ConfLPSolution, bound: ProximityBound) -> ReducedInstance:
    P = bound.P
    fixed = ConfMultiSolution()
    centers: list[Center] = []
    frac_mass = [Fraction(0)] * inst.tau_bar
    frac_sum: list[list[Fraction]] = [[Fraction(0)] * inst.t for _ in range(inst.tau_bar)]

    for (i, c), y in lp_opt.items():
        fl = math.floor(y)
        fixed.add(i, c, max(0, fl - P))
        centers.append(Center(i, tuple(c), CenterOrigin.SUPPORT, min(P, fl)))
        fr = y - fl
        frac_mass[i] += fr
        for q, v in enumerate(c):
            frac_sum[i][q] += fr * v

    for i in range(inst.tau_bar):
        mass = frac_mass[i]
        if mass.denominator != 1:
            raise AssertionError(f"fractional parts of type {i} sum to the non-integer {mass}")
        if mass:
            chat = [v / mass for v in frac_sum[i]]
            centers.append(Center(i, _floor_vec(chat), CenterOrigin.AVERAGED, int(mass)))

    fixed_contribution = objective_value(inst, fixed.entries)
    b0 = list(inst.b0)
    for (i, c), mult in fixed.items():
        for q, v in enumerate(inst.blocks[i].top(c)):
            b0[q] -= mult * v

    blocks = []
    for ctr in centers:
        blk = inst.blocks[ctr.type]
        base = ctr.cfloor
        lo = tuple(max(cv - P, l_) - cv for cv, l_ in zip(base, blk.l))
        hi = tuple((cv + P + 1 if u_ is None else min(cv + P + 1, u_)) - cv for cv, u_ in zip(base, blk.u))
        rhs = tuple(bv - sum(a * cv for a, cv in zip(row, base)) for row, bv in zip(blk.E2, blk.b))
        g, const = blk.f.shifted(base)
        fixed_contribution += ctr.muBar * const
        for q, v in enumerate(blk.top(base)):
            b0[q] -= ctr.muBar * v
        blocks.append(BlockType(blk.E1, blk.E2, lo, hi, rhs, g, ctr.muBar))

    inner = HugeNFoldInstance(inst.r, inst.s, inst.t, tuple(blocks), tuple(b0))
    mu_check = [0] * inst.tau_bar
    for ctr in centers:
        mu_check[ctr.type] += ctr.muBar
    for (i, _), mult in fixed.items():
        mu_check[i] += mult
    if mu_check != [blk.mu for blk in inst.blocks]:
        raise AssertionError("brick counts are not preserved by the reduction")
    return ReducedInstance(inst, inner, centers, fixed_contribution, fixed, bound)


def lift(reduced: ReducedInstance, inner_solution: ConfMultiSolution) -> ConfMultiSolution:
    out = ConfMultiSolution(dict(reduced.fixed_solution.entries))
    for (j, cbar), mult in inner_solution.items():
        ctr = reduced.centers[j]
        out.add(ctr.type, tuple(a + b for a, b in zip(ctr.cfloor, cbar)), mult)
    problems = check_solution(reduced.original, out.entries)
    if problems:
        raise LiftInfeasible("; ".join(problems[:3]))
    return out
