import itertools
import random

import pytest

from hmkernel.errors import BoxTooLarge
from hmkernel.instance import SchedulingInstance, single_machine_cost, smith_order
from hmkernel.nfold import (ConfMultiSolution, QuadObjective, build_model, check_solution,
                            enumerate_configurations, objective_value, prefix_matrix, sumwc_matrix)
from hmkernel.oracle import brute_schedule


def cmax_example():
    return SchedulingInstance("cmax", ((1, 2),), (0, 0), (2, 1), (2,), 2)


def test_cmax_model_shape():
    model = build_model(cmax_example())
    (blk,) = model.blocks
    assert blk.E2 == ((1, 2, 1),) and blk.b == (2,) and blk.u == (2, 1, 2) and blk.mu == 2
    assert model.b0 == (2, 1) and model.t == 3


def test_cmax_smallest_shape_and_kinds():
    model = build_model(SchedulingInstance("cmax", ((1,),), (0,), (1,), (1,), 1))
    assert model.t == 2 and model.blocks[0].E2 == ((1, 1),)
    model = build_model(SchedulingInstance("cmax", ((1, 2), (2, 1)), (0, 0), (1, 1), (1, 1), 3))
    a, b = model.blocks
    assert a.E1 == b.E1 and a.E2 != b.E2


def test_sumwc_matrices():
    assert sumwc_matrix((1, 2)) == ((1, 0, -1, 0), (0, 2, 1, -1))
    assert sumwc_matrix((3,)) == ((3, -1),)
    assert prefix_matrix((1, 2)) == ((1, 0, -1, 0), (1, 2, 0, -1))


def test_prefix_semantics():
    # x = (1, 1), a = (1, 2) forces z = (1, 3)
    E2 = sumwc_matrix((1, 2))
    sols = [z for z in itertools.product(range(6), repeat=2)
            if all(sum(r * v for r, v in zip(row, (1, 1) + z)) == 0 for row in E2)]
    assert sols == [(1, 3)]


def test_row_equivalence_of_prefix_forms():
    rng = random.Random(3)
    for _ in range(40):
        tau = rng.randint(1, 3)
        a = [rng.randint(1, 3) for _ in range(tau)]
        F, Fbar = prefix_matrix(a), sumwc_matrix(a)
        for x in itertools.product(range(3), repeat=tau):
            for z in itertools.product(range(3 * tau * 2), repeat=tau):
                v = x + z
                zero = lambda M: all(sum(r * e for r, e in zip(row, v)) == 0 for row in M)  # noqa: E731
                assert zero(F) == zero(Fbar)


def test_sumwc_objective_matches_single_machine_cost():
    rng = random.Random(5)
    for _ in range(30):
        tau = rng.randint(1, 3)
        p = (tuple(rng.randint(1, 3) for _ in range(tau)),)
        w = tuple(rng.randint(0, 4) for _ in range(tau))
        if len({(p[0][j], w[j]) for j in range(tau)}) != tau:
            continue
        inst = SchedulingInstance("sumwc", p, w, (2,) * tau, (1,), 0)
        blk = build_model(inst).blocks[0]
        order = smith_order(inst, 0)
        for c in enumerate_configurations(blk):
            counts = [0] * tau
            for pos, j in enumerate(order):
                counts[j] = c[pos]
            assert blk.f(c) == single_machine_cost(inst, 0, counts)


def test_norm_of_models():
    inst = SchedulingInstance("sumwc", ((1, 3), (2, 1)), (1, 1), (1, 1), (1, 1), 0)
    assert build_model(inst).E_inf == 3
    assert build_model(cmax_example()).E_inf == 2


def test_enumerate_configurations_example():
    blk = build_model(cmax_example()).blocks[0]
    assert set(enumerate_configurations(blk)) == {(0, 0, 2), (1, 0, 1), (2, 0, 0), (0, 1, 0)}
    with pytest.raises(BoxTooLarge):
        enumerate_configurations(blk, budget=1)


def test_objective_value_examples():
    model = build_model(cmax_example())
    sol = {(0, (2, 0, 0)): 1, (0, (0, 1, 0)): 1}
    assert objective_value(model, sol) == 0 and check_solution(model, sol) == []
    inst = SchedulingInstance("sumwc", ((1, 2, 3),), (4, 5, 3), (1, 1, 1), (1,), 37)
    sm = build_model(inst)
    full = [c for c in enumerate_configurations(sm.blocks[0]) if c[:3] == (1, 1, 1)]
    assert [objective_value(sm, {(0, full[0]): 1})] == [37]


def test_check_solution_reports_problems():
    model = build_model(cmax_example())
    assert check_solution(model, {(0, (2, 0, 0)): 2})
    assert check_solution(model, {(0, (3, 0, 0)): 1, (0, (0, 1, 0)): 1})


def test_cmax_model_soundness_against_brute_force():
    rng = random.Random(9)
    for _ in range(25):
        tau = rng.randint(1, 2)
        p = (tuple(rng.randint(1, 3) for _ in range(tau)),)
        if len(set(p[0])) != tau:
            continue
        n = tuple(rng.randint(1, 3) for _ in range(tau))
        m = (rng.randint(1, 3),)
        opt, witness = brute_schedule(SchedulingInstance("cmax", p, (0,) * tau, n, m, 0))
        model = build_model(SchedulingInstance("cmax", p, (0,) * tau, n, m, opt))
        sol = ConfMultiSolution()
        for kind, c in witness:
            load = sum(a * b for a, b in zip(p[kind], c))
            sol.add(kind, tuple(c) + (opt - load,), 1)
        assert check_solution(model, sol.entries) == []


def test_quad_objective_shift():
    f = QuadObjective((1, 2), (3, -1))
    g, const = f.shifted((2, -1))
    for y in itertools.product(range(-2, 3), repeat=2):
        assert f((y[0] + 2, y[1] - 1)) == g(y) + const
