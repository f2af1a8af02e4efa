"""Exact pricing oracles for the configuration LP.

Every routine minimises ``f(c) - (alpha E1) c`` over one block's
configurations.  The Cmax block is a bounded knapsack over one row; the
Sum wjCj block has a path-shaped constraint matrix and is solved by a stage
DP whose state is the prefix load.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BoxTooLarge, NoConfiguration, StateSpaceTooLarge
from .nfold import BlockType, Vector, enumerate_configurations

DEFAULT_CAPACITY_BUDGET = 10**6
DEFAULT_STATE_BUDGET = 2 * 10**6


@dataclass(frozen=True)
class PricingProblem:
    block: BlockType
    alpha: tuple[Fraction, ...]
    use_objective: bool = True  # False during phase one: price on duals alone

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(Fraction(a) for a in self.alpha))
        if len(self.alpha) != len(self.block.E1):
            raise ValueError("dual vector length must equal the number of linking rows")

    def profits(self) -> list[Fraction]:
        """``alpha E1`` column by column."""
        cols = self.block.t
        return [sum((a * row[q] for a, row in zip(self.alpha, self.block.E1)), Fraction(0))
                for q in range(cols)]

    def value(self, c: Sequence[int]) -> Fraction:
        v = -sum((pi * x for pi, x in zip(self.profits(), c)), Fraction(0))
        if self.use_objective:
            v += self.block.f(c)
        return v


def _lcm_denominator(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


def _window_min(prev_lo: int, prev: list, a: int, xl: int, xh: int, lin: int,
                w_lo: int, w_hi: int) -> tuple[list, list]:
    """Min-plus step with a linear per-unit cost.

    ``out[w] = min over x in [xl, xh] of prev[w - a x] + lin * x`` for
    ``w`` in ``[w_lo, w_hi]``, via a monotone deque per residue class mod
    ``a``.  ``None`` marks unreachable states.  Ties prefer the smaller x.
    """
    size = w_hi - w_lo + 1
    out: list = [None] * size
    arg = [0] * size
    prev_hi = prev_lo + len(prev) - 1
    for r in range(a):
        w0 = w_lo + ((r - w_lo) % a)
        if w0 > w_hi:
            continue
        j0 = (w0 - r) // a
        jmax = (w_hi - r) // a
        i_lo = -((r - prev_lo) // a)  # ceil((prev_lo - r) / a)
        i_hi = (prev_hi - r) // a
        dq: deque = deque()
        nxt = max(i_lo, j0 - xh)
        for j in range(j0, jmax + 1):
            upto = min(i_hi, j - xl)
            while nxt <= upto:
                v = prev[r + a * nxt - prev_lo]
                if v is not None:
                    key = v - lin * nxt
                    while dq and dq[-1][1] >= key:
                        dq.pop()
                    dq.append((nxt, key))
                nxt += 1
            while dq and dq[0][0] < j - xh:
                dq.popleft()
            if dq:
                i0, key0 = dq[0]
                idx = r + a * j - w_lo
                out[idx] = key0 + lin * j
                arg[idx] = j - i0
    return out, arg


def _general_min(prev_lo: int, prev: list, a: int, xl: int, xh: int, quad: int, lin: int,
                 w_lo: int, w_hi: int) -> tuple[list, list]:
    """Same as :func:`_window_min` with per-step cost ``quad x^2 + lin x``."""
    size = w_hi - w_lo + 1
    out: list = [None] * size
    arg = [0] * size
    prev_hi = prev_lo + len(prev) - 1
    for idx in range(size):
        w = w_lo + idx
        best = None
        for x in range(xl, xh + 1):
            zp = w - a * x
            if zp < prev_lo or zp > prev_hi:
                continue
            v = prev[zp - prev_lo]
            if v is None:
                continue
            v += quad * x * x + lin * x
            if best is None or v < best:
                best, arg[idx] = v, x
        out[idx] = best
    return out, arg


# ------------------------------------------------------------------ Cmax

def cmax_shape(block: BlockType) -> Optional[tuple[list[int], int]]:
    """``(p, k)`` when the block is a one-row ``(p, 1) c = k`` knapsack block."""
    if len(block.E2) != 1 or block.t < 2:
        return None
    row = block.E2[0]
    p, slack = list(row[:-1]), row[-1]
    k = block.b[0]
    if slack != 1 or any(v <= 0 for v in p) or k < 0:
        return None
    if any(v != 0 for v in block.l) or not block.finite or block.u[-1] < k:
        return None
    return p, k


def separate_cmax(pp: PricingProblem, capacity_budget: int = DEFAULT_CAPACITY_BUDGET,
                  window_budget: int = DEFAULT_STATE_BUDGET) -> tuple[Vector, Fraction]:
    """Bounded knapsack pricing: maximise dual profit of jobs fitting into capacity k.

    Capacities up to ``capacity_budget`` run the capacity-indexed DP.  Larger
    capacities round down the greedy LP optimum and search exactly within a
    per-coordinate window of ``tau (2 p_max + 1) p_max`` around it.
    """
    shape = cmax_shape(pp.block)
    if shape is None:
        raise ValueError("block is not a Cmax knapsack block")
    if pp.use_objective and not pp.block.f.is_zero:
        raise ValueError("Cmax pricing expects a zero objective")
    p, k = shape
    tau = len(p)
    u = pp.block.u
    prof = pp.profits()
    slack_profit = prof[-1]
    item = [prof[j] - slack_profit * p[j] for j in range(tau)]  # slack = k - p.x folded in
    scale = _lcm_denominator(item)
    gain = [int(v * scale) for v in item]
    bound = [min(u[j], k // p[j]) if gain[j] > 0 else 0 for j in range(tau)]

    if k <= capacity_budget:
        base = [0] * tau
        cap = k
        span = bound
    else:
        # greedy LP optimum, floored
        order = sorted((j for j in range(tau) if gain[j] > 0),
                       key=lambda j: (-Fraction(gain[j], p[j]), j))
        xbar = [0] * tau
        rem = k
        for j in order:
            take = min(bound[j], rem // p[j])
            xbar[j] = take
            rem -= take * p[j]
            if take < bound[j]:
                break
        radius = tau * (2 * max(p) + 1) * max(p)
        lo = [max(-xbar[j], -radius) if gain[j] > 0 else 0 for j in range(tau)]
        hi = [min(bound[j] - xbar[j], radius) if gain[j] > 0 else 0 for j in range(tau)]
        base = [xbar[j] + lo[j] for j in range(tau)]
        span = [hi[j] - lo[j] for j in range(tau)]
        cap = min(k - sum(p[j] * base[j] for j in range(tau)), sum(p[j] * span[j] for j in range(tau)))
        if cap + 1 > window_budget:
            raise StateSpaceTooLarge(f"knapsack window needs {cap + 1} states")

    # exact-load DP over e in [0, span], minimising -gain
    layer = [0] + [None] * cap
    choices = []
    for j in range(tau):
        layer, arg = _window_min(0, layer, p[j], 0, span[j], -gain[j], 0, cap)
        choices.append(arg)
    best_load = min((c for c in range(cap + 1) if layer[c] is not None), key=lambda c: (layer[c], c))
    x = [0] * tau
    load = best_load
    for j in reversed(range(tau)):
        e = choices[j][load]
        x[j] = base[j] + e
        load -= p[j] * e
    c = tuple(x) + (k - sum(p[j] * x[j] for j in range(tau)),)
    return c, pp.value(c)


# --------------------------------------------------------------- Sum wjCj

def path_shape(block: BlockType) -> Optional[list[int]]:
    """Diagonal entries ``a`` when E2 is ``(diag(a) | H)`` with bidiagonal H."""
    s = len(block.E2)
    if block.t != 2 * s or s == 0:
        return None
    a = []
    for ell, row in enumerate(block.E2):
        expect = [0] * (2 * s)
        expect[ell] = row[ell]
        expect[s + ell] = -1
        if ell:
            expect[s + ell - 1] = 1
        if list(row) != expect or row[ell] <= 0:
            return None
        a.append(row[ell])
    return a


def separate_sumwc(pp: PricingProblem, state_budget: int = DEFAULT_STATE_BUDGET) -> tuple[Vector, Fraction]:
    """Stage DP over positions with the prefix load as state.

    Row l reads ``a_l x_l - z_l + z_{l-1} = b_l`` so the constraint graph is a
    path; the state after stage l is ``z_l``.  Linear per-job costs use a
    sliding-window minimum, so a stage costs O(number of z states).
    """
    blk = pp.block
    a = path_shape(blk)
    if a is None:
        raise ValueError("block is not path-structured")
    if not blk.finite:
        raise BoxTooLarge("path DP needs finite bounds")
    tau = len(a)
    prof = pp.profits()
    use = 1 if pp.use_objective else 0
    qa = [use * v for v in blk.f.alpha]
    lb = [use * b - pi for b, pi in zip(blk.f.beta, prof)]
    scale = _lcm_denominator(qa + lb)
    qa = [int(v * scale) for v in qa]
    lb = [int(v * scale) for v in lb]

    states = max(blk.u[tau + ell] - blk.l[tau + ell] + 1 for ell in range(tau))
    if states > state_budget:
        raise StateSpaceTooLarge(f"prefix-load range {states} exceeds state budget {state_budget}")

    prev_lo, prev = 0, [0]
    args = []
    for ell in range(tau):
        xq, zq = ell, tau + ell
        xl, xh = blk.l[xq], blk.u[xq]
        zl, zh = blk.l[zq], blk.u[zq]
        rhs = blk.b[ell]
        # w = z_l + b_l = z_{l-1} + a_l x_l
        if qa[xq] == 0:
            out, arg = _window_min(prev_lo, prev, a[ell], xl, xh, lb[xq], zl + rhs, zh + rhs)
        else:
            out, arg = _general_min(prev_lo, prev, a[ell], xl, xh, qa[xq], lb[xq], zl + rhs, zh + rhs)
        for idx, v in enumerate(out):
            if v is not None:
                z = zl + idx
                out[idx] = v + qa[zq] * z * z + lb[zq] * z
        args.append(arg)
        prev_lo, prev = zl, out
    reachable = [idx for idx, v in enumerate(prev) if v is not None]
    if not reachable:
        raise NoConfiguration("block has no configuration")
    idx = min(reachable, key=lambda q: (prev[q], q))
    x = [0] * tau
    z = [0] * tau
    zcur = prev_lo + idx
    for ell in reversed(range(tau)):
        z[ell] = zcur
        xv = args[ell][zcur - blk.l[tau + ell]]
        x[ell] = xv
        zcur = zcur + blk.b[ell] - a[ell] * xv
    c = tuple(x) + tuple(z)
    return c, pp.value(c)


# ------------------------------------------------------------- brute force

def separate_bruteforce(pp: PricingProblem, budget: int = 10**6) -> tuple[Vector, Fraction]:
    configs = enumerate_configurations(pp.block, budget)
    if not configs:
        raise NoConfiguration("block has no configuration")
    best = min(configs, key=lambda c: (pp.value(c), c))
    return best, pp.value(best)


def price(pp: PricingProblem, capacity_budget: int = DEFAULT_CAPACITY_BUDGET,
          state_budget: int = DEFAULT_STATE_BUDGET) -> tuple[Vector, Fraction]:
    """Dispatch to the structure-exploiting solver matching the block."""
    blk = pp.block
    if cmax_shape(blk) is not None and (blk.f.is_zero or not pp.use_objective):
        return separate_cmax(pp, capacity_budget, state_budget)
    if path_shape(blk) is not None:
        return separate_sumwc(pp, state_budget)
    return separate_bruteforce(pp)
