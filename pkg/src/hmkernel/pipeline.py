"""End-to-end kernelization: model, ConfLP, proximity reduction, objective compression."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .conflp import ConfLPSolution, default_pricer, solve_conflp
from .errors import Infeasible
from .instance import Objective, SchedulingInstance
from .nfold import ConfMultiSolution, HugeNFoldInstance, build_model, objective_value
from .objreduce import reduce_objective
from .proximity import ProximityBound, ReducedInstance, proximity_P, reduce
from .separation import DEFAULT_CAPACITY_BUDGET, DEFAULT_STATE_BUDGET


@dataclass
class Kernel:
    """The kernel ILP with its decision bound and the record needed to lift solutions.

    Decision: some solution of ``instance`` has objective at most ``bound``.
    """

    objective: Objective
    instance: HugeNFoldInstance
    bound: int
    reduced: ReducedInstance


@dataclass
class RunReport:
    timings: dict[str, float] = field(default_factory=dict)
    conflp_value: Optional[Fraction] = None
    support: int = 0
    iterations: int = 0
    P: int = 0
    overridden: bool = False
    kernel_bits: int = 0
    input_bits: int = 0
    infeasible: bool = False
    coefficient_bits: int = 0

    def lines(self) -> list[str]:
        out = []
        if self.infeasible:
            out.append("conflp infeasible")
        else:
            out.append(f"conflp value {self.conflp_value}")
            out.append(f"conflp support {self.support}")
            out.append(f"conflp iterations {self.iterations}")
        out.append(f"proximity P {self.P}")
        out.append(f"proximity overridden {str(self.overridden).lower()}")
        out.append(f"objective coefficient bits {self.coefficient_bits}")
        out.append(f"input bits {self.input_bits}")
        out.append(f"kernel bits {self.kernel_bits}")
        return out


def infeasible_kernel(model: HugeNFoldInstance, bound: ProximityBound) -> tuple[HugeNFoldInstance, ReducedInstance]:
    """A canonical no-instance: no bricks, nonzero linking right-hand side."""
    inner = HugeNFoldInstance(model.r, model.s, model.t, (), (1,) + (0,) * (model.r - 1))
    reduced = ReducedInstance(model, inner, [], Fraction(0), ConfMultiSolution(), bound)
    return inner, reduced


def kernelize(inst: SchedulingInstance, proximity_override: Optional[int] = None,
              capacity_budget: int = DEFAULT_CAPACITY_BUDGET,
              state_budget: int = DEFAULT_STATE_BUDGET) -> tuple[Kernel, RunReport]:
    from .formats import kernel_bits, serialize_instance_bits

    report = RunReport()
    clock = time.perf_counter()

    def lap(name: str):
        nonlocal clock
        now = time.perf_counter()
        report.timings[name] = now - clock
        clock = now

    model = build_model(inst)
    lap("model")
    bound = proximity_P(model, proximity_override)
    report.P, report.overridden = bound.P, bound.overridden
    try:
        lp_opt = solve_conflp(model, default_pricer(capacity_budget, state_budget))
    except Infeasible:
        lap("conflp")
        inner, reduced = infeasible_kernel(model, bound)
        report.infeasible = True
        kernel = Kernel(inst.objective, inner, 0, reduced)
        report.input_bits = serialize_instance_bits(inst)
        report.kernel_bits = kernel_bits(kernel)
        return kernel, report
    lap("conflp")
    report.conflp_value = lp_opt.value
    report.support = lp_opt.support
    report.iterations = lp_opt.iterations

    reduced = reduce(model, lp_opt, bound)
    lap("proximity")
    if inst.objective is Objective.CMAX:
        target = Fraction(0)  # f is zero; the bound k lives in the constraints
    else:
        target = Fraction(inst.k) - reduced.fixed_contribution
    objred = reduce_objective(reduced.inner, target)
    lap("objreduce")
    report.coefficient_bits = objred.max_bits
    kernel = Kernel(inst.objective, objred.instance, objred.bound, reduced)
    report.input_bits = serialize_instance_bits(inst)
    report.kernel_bits = kernel_bits(kernel)
    lap("serialize")
    return kernel, report


def solve_lp_only(inst: SchedulingInstance, capacity_budget: int = DEFAULT_CAPACITY_BUDGET,
                  state_budget: int = DEFAULT_STATE_BUDGET) -> ConfLPSolution:
    return solve_conflp(build_model(inst), default_pricer(capacity_budget, state_budget))


def check_kernel_record(kernel: Kernel) -> list[str]:
    """Bookkeeping checks tying the kernel to its lifting record; empty when consistent."""
    red, inner = kernel.reduced, kernel.instance
    model = red.original
    if not inner.blocks and not red.centers:
        return []  # canonical no-instance
    problems = []
    if len(inner.blocks) != len(red.centers):
        return [f"record: {len(red.centers)} centers for {len(inner.blocks)} kernel blocks"]
    count = [0] * model.tau_bar
    for (i, _), mult in red.fixed_solution.items():
        count[i] += mult
    for j, (ctr, blk) in enumerate(zip(red.centers, inner.blocks)):
        if blk.mu != ctr.muBar:
            problems.append(f"record: kernel block {j} has multiplicity {blk.mu}, center says {ctr.muBar}")
        count[ctr.type] += blk.mu
    for i, (got, want) in enumerate(zip(count, model.mu)):
        if got != want:
            problems.append(f"record: machine type {i + 1} accounts for {got} bricks, expected {want}")
    b0 = list(model.b0)
    for (i, c), mult in red.fixed_solution.items():
        for q, v in enumerate(model.blocks[i].top(c)):
            b0[q] -= mult * v
    for ctr in red.centers:
        for q, v in enumerate(model.blocks[ctr.type].top(ctr.cfloor)):
            b0[q] -= ctr.muBar * v
    if tuple(b0) != tuple(inner.b0):
        problems.append(f"record: kernel linking right-hand side {tuple(inner.b0)} != {tuple(b0)}")
    expected = objective_value(model, red.fixed_solution.entries)
    expected += sum(ctr.muBar * model.blocks[ctr.type].f(ctr.cfloor) for ctr in red.centers)
    if expected != red.fixed_contribution:
        problems.append("record: fixed contribution does not match the fixed bricks")
    return problems
