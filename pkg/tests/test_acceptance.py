"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
every criterion again.  ``pytest -m "not slow"`` skips the tau = 3 Graver sweep.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
import re
from dataclasses import replace
from fractions import Fraction

import pytest

from acceptance_log import criterion
from families import cmax_family, sumwc_family
from hmkernel.certificates import certify, compact_support, support_bound, verify_certificate
from hmkernel.conflp import solve_conflp
from hmkernel.errors import BudgetExceeded, Infeasible
from hmkernel.formats import (parse_certificate, parse_kernel, serialize_certificate, serialize_instance_bits,
                              serialize_kernel, serialize_sidecar)
from hmkernel.graver import (cmax_row_bound, dual_graph, graver_basis, is_path, verify_basebound,
                             verify_hillcutting)
from hmkernel.instance import Objective, SchedulingInstance
from hmkernel.nfold import (BlockType, HugeNFoldInstance, QuadObjective, build_model, enumerate_configurations,
                            objective_value, prefix_matrix, sumwc_matrix)
from hmkernel.objreduce import frank_tardos, reduce_objective, sign_equivalent
from hmkernel.oracle import exhaustive_confilp, exhaustive_conflp, verify_kernel
from hmkernel.pipeline import check_kernel_record, kernelize, solve_lp_only
from hmkernel.proximity import CenterOrigin
from hmkernel.separation import PricingProblem, separate_bruteforce, separate_cmax, separate_sumwc


@functools.lru_cache(maxsize=None)
def cmax_instances():
    return tuple(cmax_family())


@functools.lru_cache(maxsize=None)
def sumwc_instances():
    return tuple(sumwc_family())


@functools.lru_cache(maxsize=None)
def pipeline_run(inst: SchedulingInstance, override=None):
    """Kernelize, push the kernel through its text form, and decide both sides."""
    kernel, report = kernelize(inst, override)
    parsed = parse_kernel(serialize_kernel(kernel), serialize_sidecar(kernel.reduced), inst)
    verdict = verify_kernel(inst, parsed)
    return kernel, report, parsed, verdict


def _equivalence(instances, detail):
    failures = []
    yes = 0
    for inst in instances:
        kernel, report, parsed, verdict = pipeline_run(inst)
        assert not report.overridden
        problems = check_kernel_record(parsed)
        if problems or not verdict.equivalent:
            failures.append((inst, problems, str(verdict)))
        yes += verdict.original_yes
    detail[0] = f"{len(instances)} instances ({yes} yes, {len(instances) - yes} no), {len(failures)} not equivalent"
    assert not failures, failures[:3]


def test_criterion_01_cmax_equivalence():
    detail = ["cmax equivalence"]
    with criterion(1, detail):
        insts = cmax_instances()
        assert len(insts) >= 500
        _equivalence(insts, detail)


def test_criterion_02_sumwc_equivalence():
    detail = ["sumwc equivalence"]
    with criterion(2, detail):
        insts = sumwc_instances()
        assert len(insts) >= 200
        for inst in insts:
            assert sum(inst.n) <= 6 and sum(inst.m) <= 3 and inst.p_max <= 3 and max(inst.w) <= 4
        _equivalence(insts, detail)


def test_criterion_03_conflp_matches_exhaustive_lp():
    detail = ["conflp"]
    with criterion(3, detail):
        compared = skipped = infeasible = 0
        for inst in cmax_instances() + sumwc_instances():
            model = build_model(inst)
            try:
                want = exhaustive_conflp(model)
            except BudgetExceeded:
                skipped += 1
                continue
            except Infeasible:
                with pytest.raises(Infeasible):
                    solve_conflp(model)
                infeasible += 1
                continue
            got = solve_lp_only(inst)
            assert got.value == want[0], (inst, got.value, want[0])
            assert got.support <= model.r + model.tau_bar
            compared += 1
        detail[0] = f"{compared} optima equal, {infeasible} infeasible on both routes, {skipped} over budget"
        assert compared + infeasible + skipped == len(cmax_instances()) + len(sumwc_instances())
        assert compared >= 400 and skipped == 0


def _random_alpha(rng, r):
    return tuple(Fraction(rng.randint(-6, 8), rng.randint(1, 3)) for _ in range(r))


def test_criterion_04_separation():
    detail = ["separation"]
    with criterion(4, detail):
        rng = random.Random(4)
        counts = {"cmax": 0, "cmax-window": 0, "sumwc": 0}
        while min(counts.values()) < 200:
            tau = rng.randint(1, 3)
            p = (tuple(rng.randint(1, 4) for _ in range(tau)),)
            n = tuple(rng.randint(1, 4) for _ in range(tau))
            if len(set(p[0])) != tau:
                continue
            cm = build_model(SchedulingInstance("cmax", p, (0,) * tau, n, (1,), rng.randint(0, 9)))
            pp = PricingProblem(cm.blocks[0], _random_alpha(rng, cm.r))
            want = separate_bruteforce(pp)[1]
            for key, budget in (("cmax", None), ("cmax-window", 0)):
                c, v = separate_cmax(pp) if budget is None else separate_cmax(pp, capacity_budget=0)
                assert v == want == pp.value(c), (key, pp, v, want)
                counts[key] += 1
            w = tuple(rng.randint(1, 4) for _ in range(tau))
            if len({(p[0][j], w[j]) for j in range(tau)}) != tau:
                continue
            sm = build_model(SchedulingInstance("sumwc", p, w, tuple(min(v, 3) for v in n), (1,), 0))
            pp = PricingProblem(sm.blocks[0], _random_alpha(rng, sm.r))
            c, v = separate_sumwc(pp)
            assert v == separate_bruteforce(pp)[1] == pp.value(c)
            counts["sumwc"] += 1
        detail[0] = ", ".join(f"{k} {v}" for k, v in counts.items()) + " problems, DP == brute force"


def _graver_sweep(tau):
    checked = 0
    for a in itertools.product(range(1, tau + 1), repeat=tau):
        basis, reports = verify_hillcutting(a)
        assert basis.complete
        for rep in reports:
            assert rep.holds, (a, str(rep))
        checked += 1
    return checked


def test_criterion_05_graver_bounds_tau2_and_rows():
    detail = ["graver"]
    with criterion(5, detail):
        n2 = _graver_sweep(2)
        rows = 0
        for tau in (1, 2, 3):
            for p in itertools.product(range(1, 5), repeat=tau):
                rep = cmax_row_bound(p)
                assert rep.holds, (p, str(rep))
                assert verify_basebound(graver_basis([p + (1,)])).holds
                rows += 1
        detail[0] = f"tau=2: {n2} matrices within 2tau^4+tau and 2tau(2tau^4+tau); {rows} Cmax rows g1 <= 2p_max+1"


@pytest.mark.slow
def test_criterion_05_graver_bounds_tau3():
    detail = ["graver tau=3"]
    with criterion(5, detail):
        n3 = _graver_sweep(3)
        detail[0] = f"tau=3: {n3} matrices within both norm bounds and the base bound"


def test_criterion_06_dual_graph_structure():
    detail = ["dual graph"]
    with criterion(6, detail):
        rng = random.Random(6)
        paths = cliques = 0
        for tau in range(1, 7):
            for _ in range(5):
                a = [rng.randint(1, 4) for _ in range(tau)]
                assert is_path(dual_graph(sumwc_matrix(a))), a
                paths += 1
                if tau >= 3:
                    g = dual_graph(prefix_matrix(a))
                    assert not is_path(g)
                    assert all(g[u] == set(range(tau)) - {u} for u in range(tau))
                    cliques += 1
        detail[0] = f"{paths} path-shaped matrices are paths; {cliques} prefix matrices are cliques"


def test_criterion_07_frank_tardos():
    detail = ["frank-tardos"]
    with criterion(7, detail):
        rng = random.Random(7)
        total = 0
        for d in (1, 2, 3):
            for M in (1, 2):
                for _ in range(100):
                    w = [Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(d)]
                    wt = frank_tardos(w, M)
                    assert all(isinstance(v, int) for v in wt)
                    assert sign_equivalent(w, wt, M), (w, M, wt)
                    total += 1
        detail[0] = f"{total} weight vectors over 6 shapes, every v in [-2M,2M]^d agrees in sign"


def _random_objective_instance(rng):
    t = rng.randint(1, 2)
    n_types = rng.randint(1, 2)
    mus = [rng.randint(1, 2) for _ in range(n_types)]
    while sum(mus) > 3:
        mus[rng.randrange(n_types)] -= 1
    rand = lambda: Fraction(rng.randint(-5, 5), rng.randint(1, 4))  # noqa: E731
    blocks = []
    for i in range(n_types):
        if i and rng.random() < 0.5:
            prev = blocks[0]
            blocks.append(BlockType(prev.E1, prev.E2, prev.l, prev.u, prev.b, prev.f, mus[i]))
            continue
        lo = tuple(rng.randint(-2, 1) for _ in range(t))
        hi = tuple(v + rng.randint(0, 2) for v in lo)
        f = QuadObjective(tuple(rand() for _ in range(t)), tuple(rand() for _ in range(t)))
        blocks.append(BlockType(((1,) * t,), ((0,) * t,), lo, hi, (0,), f, mus[i]))
    return HugeNFoldInstance(1, 1, t, tuple(blocks), (0,))


def _all_points(inst):
    bricks = [blk for blk in inst.blocks for _ in range(blk.mu)]
    boxes = [list(itertools.product(*[range(l_, h + 1) for l_, h in zip(b.l, b.u)])) for b in bricks]
    for combo in itertools.product(*boxes):
        yield sum((b.f(x) for b, x in zip(bricks, combo)), Fraction(0))


def test_criterion_08_objective_reduction():
    detail = ["objective reduction"]
    with criterion(8, detail):
        rng = random.Random(8)
        points = shared = 0
        for _ in range(120):
            inst = _random_objective_instance(rng)
            bound = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
            red = reduce_objective(inst, bound)
            out = red.instance
            for old, new in zip(inst.blocks, out.blocks):
                assert (old.E1, old.E2, old.l, old.u, old.b, old.mu) == (new.E1, new.E2, new.l, new.u, new.b, new.mu)
                assert all(isinstance(v, int) or v.denominator == 1 for v in new.f.alpha + new.f.beta)
            if len(inst.blocks) == 2 and replace(inst.blocks[1], mu=inst.blocks[0].mu) == inst.blocks[0]:
                assert out.blocks[0].f == out.blocks[1].f
                shared += 1
            pairs = sorted(zip(_all_points(inst), _all_points(out)))
            for (fa, ga), (fb, gb) in zip(pairs, pairs[1:]):
                assert (fa == fb) == (ga == gb) and ga <= gb, (inst, bound)
            for fa, ga in pairs:
                assert (fa <= bound) == (ga <= red.bound)
            assert red.max_bits <= red.bit_bound
            points += len(pairs)
        detail[0] = (f"120 objectives, {points} integer points ordered identically; "
                     f"{shared} twin types received identical coefficients")


CURATED = [
    ("cmax", ((1,),), (0,), (9,), (5,)),
    ("cmax", ((3,),), (0,), (7,), (6,)),
    ("cmax", ((2, 1),), (0, 0), (6, 7), (5,)),
    ("cmax", ((1, 2),), (0, 0), (7, 7), (5,)),
    ("cmax", ((2, 1),), (0, 0), (3, 5), (7,)),
    ("cmax", ((2, 3),), (0, 0), (3, 3), (5,)),
    ("cmax", ((3, 1),), (0, 0), (3, 7), (5,)),
    ("cmax", ((2, 1),), (0, 0), (3, 3), (6,)),
    ("sumwc", ((1, 1), (1, 2)), (3, 3), (8, 3), (3, 4)),
    ("sumwc", ((3, 3), (1, 2)), (2, 4), (5, 8), (3, 3)),
    ("sumwc", ((1, 1), (3, 2)), (4, 4), (2, 7), (1, 3)),
    ("sumwc", ((3, 1), (2, 2)), (2, 1), (8, 5), (3, 4)),
    ("sumwc", ((2, 3), (1, 2)), (2, 4), (7, 8), (3, 1)),
    ("sumwc", ((1, 3), (2, 1)), (1, 2), (3, 8), (6, 1)),
    ("sumwc", ((3, 2), (1, 1)), (3, 3), (2, 8), (3, 1)),
]


def curated_instances():
    from hmkernel.oracle import brute_schedule

    out = []
    for obj, p, w, n, m in CURATED:
        opt, _ = brute_schedule(SchedulingInstance(obj, p, w, n, m, 0))
        out += [SchedulingInstance(obj, p, w, n, m, k) for k in (opt - 1, opt)]
    return out


def test_criterion_09_proximity_mechanics():
    detail = ["proximity"]
    with criterion(9, detail):
        averaged = fixed_total = lifts = 0
        insts = curated_instances()
        no_lp = 0
        for inst in insts:
            kernel, report, parsed, verdict = pipeline_run(inst, 2)
            assert verdict.equivalent, (inst, str(verdict))
            try:
                lp_sol = solve_lp_only(inst)
            except Infeasible:
                # Cmax with k below the optimum: the LP already refutes it
                assert inst.objective is Objective.CMAX and report.infeasible and not verdict.original_yes
                no_lp += 1
                continue
            ys = [y for _, y in lp_sol.items()]
            assert any(y.denominator > 1 for y in ys) and any(y > 2 for y in ys)
            red = kernel.reduced
            assert report.overridden and report.P == 2
            assert "proximity overridden true" in report.lines()
            assert red.fixed_solution.entries, "y_{-P} is zero"
            fixed_total += sum(m for _, m in red.fixed_solution.items())
            mass = {}
            for (i, _), y in lp_sol.items():
                mass[i] = mass.get(i, 0) + (y - math.floor(y))
            for i, v in mass.items():
                assert v.denominator == 1, "fractional parts do not sum to an integer"
            avg = [c for c in red.centers if c.origin is CenterOrigin.AVERAGED]
            assert avg
            assert {c.type: c.muBar for c in avg} == {i: int(v) for i, v in mass.items() if v}
            averaged += len(avg)
            assert not check_kernel_record(parsed)
            try:
                value, sol = exhaustive_confilp(red.inner)
            except Infeasible:
                sol = None
            if sol is not None:
                lifted = red.lift(sol)
                assert objective_value(red.original, lifted.entries) == value + red.fixed_contribution
                lifts += 1
        assert no_lp <= sum(row[0] == "cmax" for row in CURATED)
        detail[0] = (f"{len(insts)} curated instances with P=2, all equivalent; on the {len(insts) - no_lp} with "
                     f"a feasible LP: {fixed_total} bricks fixed by y_-P, {averaged} averaged centers, "
                     f"{lifts} exact lifts")


def test_criterion_10_certificates():
    detail = ["certificates"]
    with criterion(10, detail):
        checked = refuted = 0
        max_ratio = Fraction(0)
        for inst in cmax_instances() + sumwc_instances():
            kernel, report, parsed, verdict = pipeline_run(inst)
            if not verdict.kernel_yes:
                continue
            _, sol = exhaustive_confilp(parsed.instance)
            cert, _ = compact_support(certify(inst, parsed.reduced.lift(sol)))
            again = parse_certificate(serialize_certificate(cert))
            assert again == cert
            rep = verify_certificate(inst, again)
            assert rep.ok, (inst, rep.errors)
            assert not rep.warnings and rep.support <= rep.support_bound
            M = max(max(inst.n), inst.k, 1)
            if inst.objective is Objective.SUMWC:
                M = max(M, inst.p_max * inst.tau * max(inst.n))
            assert rep.support_bound == support_bound(inst.tau, inst.kappa, M)
            max_ratio = max(max_ratio, Fraction(rep.support, rep.support_bound))
            if verdict.original_optimum == inst.k and inst.k > 0:
                assert not verify_certificate(inst, again, inst.k - 1).ok
                refuted += 1
            checked += 1
        detail[0] = (f"{checked} certificates round-tripped and verified; worst support/bound {max_ratio}; "
                     f"{refuted} rejected at k-1")
        assert checked >= 300


NUMBER = re.compile(r"^-?\d+(/\d+)?$")


def test_criterion_11_kernel_size_regression():
    detail = ["kernel size"]
    with criterion(11, detail):
        rows = []
        for e in range(1, 10):
            N = 10**e
            inst = SchedulingInstance("cmax", ((1, 3),), (0, 0), (N, N), (N,), 4)
            kernel, report = kernelize(inst)
            text = serialize_kernel(kernel)
            assert report.kernel_bits == 8 * len(text.encode())
            rows.append((e, text.split(), len(text.encode()), serialize_instance_bits(inst) // 8))
        base_tokens, K1, I1 = rows[0][1], rows[0][2], rows[0][3]
        slots = None
        for e, toks, K, I in rows:
            assert len(toks) == len(base_tokens)
            diff = set()
            for q, (a, b) in enumerate(zip(base_tokens, toks)):
                if NUMBER.match(a) and NUMBER.match(b):
                    if a != b:
                        diff.add(q)
                else:
                    assert a == b, (e, q, a, b)
            if e > 1:
                slots = diff if slots is None else slots
                assert diff == slots, "a new numeric slot started to vary"
            assert K - K1 <= len(slots or ()) * (e - 1)
            assert K - K1 <= I - I1, "kernel grew faster than the input"
        detail[0] = (f"kernel {rows[0][2]} -> {rows[-1][2]} bytes, input {I1} -> {rows[-1][3]} bytes "
                     f"for n = 10^1 .. 10^9; {len(slots)} numeric slots vary, skeleton constant")
