"""Configuration LP by column generation, and a branch-and-bound ConfILP solver.

The master problem has one row per linking constraint (``sum E1 c y = b0``)
and one per block type (``sum_c y(i, c) = mu_i``).  Columns are priced by
the exact oracles in :mod:`hmkernel.separation`; the master is the exact
simplex of :mod:`hmkernel.lp`, so the final basis is a vertex with at most
``r + tau_bar`` nonzero entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import lp
from .errors import BudgetExceeded, Infeasible, NoConfiguration
from .nfold import ConfMultiSolution, HugeNFoldInstance, Vector, enumerate_configurations
from .separation import DEFAULT_CAPACITY_BUDGET, DEFAULT_STATE_BUDGET, PricingProblem, price

Column = tuple[int, Vector]
Pricer = Callable[[PricingProblem], tuple[Vector, Fraction]]


@dataclass(frozen=True)
class DualPoint:
    """Duals of the linking rows (alpha) and of the per-type count rows (beta).

    A column (i, c) has reduced cost ``f_i(c) - alpha E1 c - beta_i``.
    """

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    def reduced_cost(self, inst: HugeNFoldInstance, i: int, c: Vector) -> Fraction:
        blk = inst.blocks[i]
        top = blk.top(c)
        return blk.f(c) - sum((a * v for a, v in zip(self.alpha, top)), Fraction(0)) - self.beta[i]


class MasterInfeasible(Infeasible):
    def __init__(self, farkas: DualPoint):
        super().__init__("restricted master LP is infeasible")
        self.farkas = farkas


@dataclass
class ConfLPSolution:
    entries: dict[Column, Fraction]
    value: Fraction
    duals: DualPoint
    iterations: int = 0
    columns: int = 0

    def items(self):
        return sorted(self.entries.items())

    @property
    def support(self) -> int:
        return len(self.entries)


def _master_matrix(inst: HugeNFoldInstance, columns: Sequence[Column]):
    r, tb = inst.r, inst.tau_bar
    A = [[0] * len(columns) for _ in range(r + tb)]
    cost = []
    for j, (i, c) in enumerate(columns):
        blk = inst.blocks[i]
        for q, v in enumerate(blk.top(c)):
            A[q][j] = v
        A[r + i][j] = 1
        cost.append(blk.f(c))
    rhs = list(inst.b0) + [blk.mu for blk in inst.blocks]
    return A, rhs, cost


def master_lp_solve(columns: Sequence[Column], inst: HugeNFoldInstance):
    """Solve the restricted master over ``columns``.

    Returns ``(y, duals, value)`` with ``y`` aligned to ``columns``.  Raises
    :class:`MasterInfeasible` carrying a Farkas certificate otherwise.
    """
    A, rhs, cost = _master_matrix(inst, columns)
    res = lp.solve_lp(A, rhs, cost)
    r = inst.r
    if res.status == lp.INFEASIBLE:
        raise MasterInfeasible(DualPoint(tuple(res.duals[:r]), tuple(res.duals[r:])))
    if res.status != lp.OPTIMAL:
        raise RuntimeError("restricted master LP cannot be unbounded: every column count is capped by mu")
    return res.x, DualPoint(tuple(res.duals[:r]), tuple(res.duals[r:])), res.value


def default_pricer(capacity_budget: int = DEFAULT_CAPACITY_BUDGET,
                   state_budget: int = DEFAULT_STATE_BUDGET) -> Pricer:
    return lambda pp: price(pp, capacity_budget, state_budget)


def solve_conflp(inst: HugeNFoldInstance, pricer: Optional[Pricer] = None,
                 max_iterations: int = 100_000) -> ConfLPSolution:
    pricer = pricer or default_pricer()
    r = inst.r
    columns: list[Column] = []
    seen: set[Column] = set()

    def add(col: Column):
        if col in seen:
            raise RuntimeError(f"pricing returned an existing column {col}")
        seen.add(col)
        columns.append(col)

    zero = (Fraction(0),) * r
    for i, blk in enumerate(inst.blocks):
        try:
            c, _ = pricer(PricingProblem(blk, zero, use_objective=True))
        except NoConfiguration:
            if blk.mu:
                raise Infeasible(f"block type {i} has no configuration") from None
            continue
        add((i, c))

    priced = sorted({i for i, _ in columns})
    for iteration in range(1, max_iterations + 1):
        try:
            y, duals, value = master_lp_solve(columns, inst)
            phase_one = False
        except MasterInfeasible as exc:
            duals, phase_one = exc.farkas, True
        found = False
        for i in priced:
            blk = inst.blocks[i]
            c, v = pricer(PricingProblem(blk, duals.alpha, use_objective=not phase_one))
            if v - duals.beta[i] < 0:
                add((i, c))
                found = True
        if not found:
            if phase_one:
                raise Infeasible("configuration LP is infeasible")
            entries = {col: val for col, val in zip(columns, y) if val}
            return ConfLPSolution(entries, value, duals, iteration, len(columns))
    raise BudgetExceeded(f"column generation did not converge in {max_iterations} iterations")


# --------------------------------------------------------------- integer

@dataclass
class ILPResult:
    solution: ConfMultiSolution
    value: Fraction
    nodes: int = 0


def _lp_with_bounds(A, rhs, cost, lo, hi):
    """LP over ``lo <= y <= hi`` via the shift ``y = lo + y'`` and explicit upper rows."""
    n = len(cost)
    shifted = [rv - sum(A[q][j] * lo[j] for j in range(n)) for q, rv in enumerate(rhs)]
    rows = [list(row) for row in A]
    b = list(shifted)
    caps = [j for j in range(n) if hi[j] is not None]
    width = n + len(caps)
    rows = [row + [0] * len(caps) for row in rows]
    for extra, j in enumerate(caps):
        row = [0] * width
        row[j] = 1
        row[n + extra] = 1
        rows.append(row)
        b.append(hi[j] - lo[j])
    res = lp.solve_lp(rows, b, list(cost) + [0] * len(caps))
    if res.status != lp.OPTIMAL:
        return None
    x = [lo[j] + res.x[j] for j in range(n)]
    return x, sum((Fraction(c) * v for c, v in zip(cost, x)), Fraction(0))


def branch_and_bound(inst: HugeNFoldInstance, columns: Sequence[Column], node_budget: int = 200_000) -> ILPResult:
    """Exact ConfILP optimum over an explicit column list.

    Depth-first branch and bound on configuration multiplicities with exact LP
    bounds.  Raises :class:`Infeasible` when no integer point exists.
    """
    A, rhs, cost = _master_matrix(inst, columns)
    n = len(columns)
    best: Optional[tuple[Fraction, list]] = None
    nodes = 0
    stack = [([0] * n, [None] * n)]
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"branch and bound exceeded {node_budget} nodes")
        if any(h is not None and h < l_ for l_, h in zip(lo, hi)):
            continue
        sol = _lp_with_bounds(A, rhs, cost, lo, hi)
        if sol is None:
            continue
        x, val = sol
        if best is not None and val >= best[0]:
            continue
        frac = next((j for j in range(n) if x[j].denominator != 1), None)
        if frac is None:
            best = (val, [int(v) for v in x])
            continue
        down_hi = list(hi)
        down_hi[frac] = math.floor(x[frac])
        up_lo = list(lo)
        up_lo[frac] = math.floor(x[frac]) + 1
        stack.append((lo, down_hi))
        stack.append((up_lo, hi))
    if best is None:
        raise Infeasible("configuration ILP is infeasible")
    out = ConfMultiSolution()
    for (i, c), mult in zip(columns, best[1]):
        out.add(i, c, mult)
    return ILPResult(out, best[0], nodes)


def solve_confilp(inst: HugeNFoldInstance, config_budget: int = 10**5, node_budget: int = 200_000) -> ILPResult:
    """Enumerate every block's configurations and solve the ConfILP by branch and bound."""
    columns: list[Column] = []
    for i, blk in enumerate(inst.blocks):
        if blk.mu == 0:
            continue
        configs = enumerate_configurations(blk, config_budget)
        if not configs:
            raise Infeasible(f"block type {i} has no configuration")
        columns.extend((i, c) for c in configs)
    if not columns:
        if any(inst.b0):
            raise Infeasible("no bricks but nonzero linking right-hand side")
        return ILPResult(ConfMultiSolution(), Fraction(0), 0)
    return branch_and_bound(inst, columns, node_budget)


def solve_confilp_reduced(reduced, config_budget: int = 10**5, node_budget: int = 200_000) -> ILPResult:
    """ConfILP optimum of a kernel's inner instance (see :mod:`hmkernel.proximity`)."""
    return solve_confilp(reduced.inner, config_budget, node_budget)
