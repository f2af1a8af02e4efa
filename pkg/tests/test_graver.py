import itertools
import random

from hmkernel.graver import (basebound, circuits, conformal_leq, dual_graph, graver_basis, graver_by_enumeration,
                             integer_kernel, is_path, matrix_rank, verify_hillcutting)
from hmkernel.nfold import prefix_matrix, sumwc_matrix


def test_conformal_order():
    assert conformal_leq((1, 0, -1), (2, 1, -1))
    assert not conformal_leq((1, -1), (2, 1))
    assert not conformal_leq((2, 0), (1, 0))


def test_tiny_bases():
    assert sorted(graver_basis([(1, -1)]).elements) == [(-1, -1), (1, 1)]
    assert graver_basis([(1,)]).elements == []


def test_one_two_one():
    basis = graver_basis([(1, 2, 1)])
    assert basis.complete and len(basis.elements) == 8
    assert basis.g_inf == 2 and basis.g_1 == 3
    assert basis.g_1 <= basebound([(1, 2, 1)]) == 5


def test_kernel_and_rank():
    A = [(1, 2, 3), (0, 1, 1)]
    ker = integer_kernel(A)
    assert matrix_rank(A) == 2 and len(ker) == 1
    assert all(sum(a * v for a, v in zip(row, ker[0])) == 0 for row in A)
    for c in circuits(A):
        assert all(sum(a * v for a, v in zip(row, c)) == 0 for row in A)


def test_every_element_is_minimal_kernel_vector():
    basis = graver_basis(sumwc_matrix((2, 1)))
    A = basis.A
    for g in basis.elements:
        assert all(sum(a * v for a, v in zip(row, g)) == 0 for row in A)
        assert not any(h != g and conformal_leq(h, g) for h in basis.elements)
        assert tuple(-v for v in g) in basis.elements


def test_completion_matches_enumeration_on_random_matrices():
    rng = random.Random(21)
    for _ in range(25):
        rows, cols = rng.randint(1, 2), rng.randint(2, 4)
        A = [tuple(rng.randint(-2, 2) for _ in range(cols)) for _ in range(rows)]
        if not any(any(row) for row in A):
            continue
        assert sorted(graver_basis(A).elements) == sorted(graver_by_enumeration(A))


def test_norm_budget_marks_incomplete():
    basis = graver_basis([(1, 3, 5, 1)], norm_budget=2)
    assert not basis.complete


def test_hillcutting_reports():
    basis, reports = verify_hillcutting((1, 2))
    assert [r.name for r in reports] == ["g_inf", "g1", "g1"]
    assert all(r.holds for r in reports)


def test_dual_graphs():
    for tau in range(1, 7):
        assert is_path(dual_graph(sumwc_matrix([1] * tau)))
    assert is_path(dual_graph(prefix_matrix((1, 1))))
    for tau in range(3, 7):
        g = dual_graph(prefix_matrix(list(range(1, tau + 1))))
        assert not is_path(g)
        assert all(len(nb) == tau - 1 for nb in g.values())


def test_is_path_on_hand_graphs():
    assert is_path({0: set()})
    assert is_path({0: {1}, 1: {0, 2}, 2: {1}})
    assert not is_path({0: {1, 2}, 1: {0, 2}, 2: {0, 1}})
    assert not is_path({0: set(), 1: set()})
    assert not is_path({0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0}})


def test_enumeration_box_is_certified():
    # every completion element lies within the box enumeration uses
    for a in itertools.product((1, 2), repeat=2):
        A = sumwc_matrix(a)
        assert sorted(graver_basis(A).elements) == sorted(graver_by_enumeration(A))
