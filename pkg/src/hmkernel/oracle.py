"""Brute-force ground truth: schedules, configuration LP/ILP, kernel equivalence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp
from .errors import BudgetExceeded, Infeasible, LiftInfeasible
from .instance import Objective, SchedulingInstance, single_machine_cost
from .nfold import ConfMultiSolution, HugeNFoldInstance, Vector, enumerate_configurations, objective_value

__all__ = ["OracleBudget", "brute_schedule", "enumerate_configurations", "exhaustive_conflp",
           "exhaustive_confilp", "KernelVerdict", "verify_kernel"]


@dataclass(frozen=True)
class OracleBudget:
    max_configurations: int = 10**4
    max_assignments: int = 2 * 10**6
    max_states: int = 10**6

    def __post_init__(self):
        if min(self.max_configurations, self.max_assignments, self.max_states) < 1:
            raise ValueError("budgets must be positive")


def _machine_value(inst: SchedulingInstance, kind: int, config) -> int:
    if inst.objective is Objective.CMAX:
        return sum(pv * c for pv, c in zip(inst.p[kind], config))
    return single_machine_cost(inst, kind, config)


def brute_schedule(inst: SchedulingInstance, budget: OracleBudget = OracleBudget()):
    """Exact optimum by enumerating per-machine job multisets.

    Machines of one kind are interchangeable, so their multisets are produced
    in non-decreasing lexicographic order.  Returns ``(optimum, witness)``
    where the witness lists ``(kind, configuration)`` per machine.
    """
    machines = [i for i in range(inst.kappa) for _ in range(inst.m[i])]
    cmax = inst.objective is Objective.CMAX
    best: list = [None, None]
    visited = 0

    def combine(acc, v):
        return max(acc, v) if cmax else acc + v

    def rec(pos: int, rem: tuple, acc: int, prev: Optional[tuple], chosen: list):
        nonlocal visited
        visited += 1
        if visited > budget.max_assignments:
            raise BudgetExceeded("assignment enumeration exceeded its budget")
        if best[0] is not None and acc >= best[0]:
            return  # both objectives only grow along the recursion
        if pos == len(machines):
            if not any(rem) and (best[0] is None or acc < best[0]):
                best[0], best[1] = acc, list(chosen)
            return
        kind = machines[pos]
        same_as_prev = pos > 0 and machines[pos - 1] == kind
        if pos == len(machines) - 1:
            options = [rem]
        else:
            options = itertools.product(*[range(r + 1) for r in rem])
        for c in options:
            c = tuple(c)
            if same_as_prev and prev is not None and c < prev:
                continue
            val = _machine_value(inst, kind, c)
            chosen.append((kind, c))
            rec(pos + 1, tuple(a - b for a, b in zip(rem, c)), combine(acc, val), c, chosen)
            chosen.pop()

    rec(0, tuple(inst.n), 0, None, [])
    if best[0] is None:
        raise AssertionError("every job assignment is a schedule; enumeration found none")
    return best[0], best[1]


def _all_columns(inst: HugeNFoldInstance, budget: OracleBudget):
    columns = []
    for i, blk in enumerate(inst.blocks):
        for c in enumerate_configurations(blk, budget.max_configurations * 100):
            columns.append((i, c))
            if len(columns) > budget.max_configurations:
                raise BudgetExceeded("too many configurations for the exhaustive LP")
    return columns


def exhaustive_conflp(inst: HugeNFoldInstance, budget: OracleBudget = OracleBudget()):
    """LP optimum over every configuration, with an exact optimality certificate.

    Returns ``(value, entries)``.  The primal/dual pair from the simplex is
    re-checked by :func:`hmkernel.lp.certify_optimal`.
    """
    columns = _all_columns(inst, budget)
    r, tb = inst.r, inst.tau_bar
    A = [[0] * len(columns) for _ in range(r + tb)]
    cost = []
    for j, (i, c) in enumerate(columns):
        for q, v in enumerate(inst.blocks[i].top(c)):
            A[q][j] = v
        A[r + i][j] = 1
        cost.append(inst.blocks[i].f(c))
    rhs = list(inst.b0) + list(inst.mu)
    res = lp.solve_lp(A, rhs, cost)
    if res.status == lp.INFEASIBLE:
        raise Infeasible("configuration LP is infeasible")
    if not lp.certify_optimal(A, rhs, cost, res.x, res.duals):
        raise AssertionError("LP optimality certificate failed")
    entries = {col: v for col, v in zip(columns, res.x) if v}
    return res.value, entries


def exhaustive_confilp(inst: HugeNFoldInstance, budget: OracleBudget = OracleBudget()):
    """ConfILP optimum by dynamic programming over bricks.

    Bricks are placed one at a time; the state is the partial linking-row sum.
    States that can no longer reach ``b0`` (by the remaining bricks' min/max
    contributions) are pruned.  Returns ``(value, ConfMultiSolution)``.
    """
    configs = []
    for i, blk in enumerate(inst.blocks):
        if blk.mu:
            cs = enumerate_configurations(blk, budget.max_configurations * 100)
            if not cs:
                raise Infeasible(f"block type {i} has no configuration")
            configs.append((i, blk.mu, [(c, blk.top(c), blk.f(c)) for c in cs]))
    bricks = [(i, opts) for i, mu, opts in configs for _ in range(mu)]
    if len(bricks) > budget.max_states:
        raise BudgetExceeded("too many bricks for the exhaustive ILP")
    r = inst.r
    lo_suffix = [[0] * r for _ in range(len(bricks) + 1)]
    hi_suffix = [[0] * r for _ in range(len(bricks) + 1)]
    for k in range(len(bricks) - 1, -1, -1):
        opts = bricks[k][1]
        for q in range(r):
            lo_suffix[k][q] = lo_suffix[k + 1][q] + min(o[1][q] for o in opts)
            hi_suffix[k][q] = hi_suffix[k + 1][q] + max(o[1][q] for o in opts)

    layers: list[dict] = [{(0,) * r: (Fraction(0), None, None)}]
    states = 1
    for k, (i, opts) in enumerate(bricks):
        nxt: dict = {}
        for s, (val, _, _) in layers[-1].items():
            for c, top, fc in opts:
                ns = tuple(a + b for a, b in zip(s, top))
                if any(ns[q] + lo_suffix[k + 1][q] > inst.b0[q] or ns[q] + hi_suffix[k + 1][q] < inst.b0[q]
                       for q in range(r)):
                    continue
                nv = val + fc
                old = nxt.get(ns)
                if old is None or nv < old[0]:
                    nxt[ns] = (nv, s, c)
        states += len(nxt)
        if states > budget.max_states:
            raise BudgetExceeded("ILP state space exceeded its budget")
        layers.append(nxt)
    goal = tuple(inst.b0)
    if goal not in layers[-1]:
        raise Infeasible("configuration ILP is infeasible")
    sol = ConfMultiSolution()
    s = goal
    for k in range(len(bricks), 0, -1):
        val, prev, c = layers[k][s]
        sol.add(bricks[k - 1][0], c, 1)
        s = prev
    return layers[-1][goal][0], sol


@dataclass
class KernelVerdict:
    original_yes: bool
    kernel_yes: bool
    original_optimum: int
    lift_ok: bool
    lifted_value: Optional[Fraction]
    lift_optimal: Optional[bool]
    message: str = ""

    @property
    def equivalent(self) -> bool:
        return self.original_yes == self.kernel_yes and self.lift_ok

    def __str__(self):
        tag = "Equivalent" if self.equivalent else "NotEquivalent"
        yn = lambda b: "yes" if b else "no"
        text = f"{tag}({yn(self.original_yes)}, {yn(self.kernel_yes)})"
        return text + (f": {self.message}" if self.message else "")


def verify_kernel(original: SchedulingInstance, kernel, budget: OracleBudget = OracleBudget()) -> KernelVerdict:
    """Compare brute-force and kernel decisions and lift the kernel optimum.

    ``kernel`` is a :class:`hmkernel.pipeline.Kernel`.  The kernel decision is
    "the kernel ILP has a solution of value at most its bound".
    """
    opt, _ = brute_schedule(original, budget)
    original_yes = opt <= original.k
    try:
        value, sol = exhaustive_confilp(kernel.instance, budget)
        kernel_yes = value <= kernel.bound
    except Infeasible:
        kernel_yes, sol = False, None
    if not kernel_yes:
        return KernelVerdict(original_yes, False, opt, True, None, None)
    try:
        lifted = kernel.reduced.lift(sol)
    except LiftInfeasible as exc:
        return KernelVerdict(original_yes, True, opt, False, None, None, f"lift failed: {exc}")
    model = kernel.reduced.original
    lifted_value = objective_value(model, lifted.entries)
    if original.objective is Objective.CMAX:
        # the model enforces every load <= k, so feasibility is the whole claim
        lift_ok, optimal = True, None
    else:
        lift_ok = lifted_value <= original.k
        optimal = lifted_value == opt
    msg = "" if lift_ok else f"lifted value {lifted_value} exceeds the bound"
    return KernelVerdict(original_yes, True, opt, lift_ok, lifted_value, optimal, msg)
