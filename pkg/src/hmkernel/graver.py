"""Graver bases of small integer matrices and checks of their norm bounds.

The basis is computed by a completion procedure: start from a symmetric
generating set of the integer kernel, add normal forms of pairwise sums
until every sum reduces to zero, then keep the conformally minimal
elements.  An independent enumeration over a certified norm box is
available for cross-checking.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .nfold import BlockType, QuadObjective, enumerate_configurations, prefix_matrix, sumwc_matrix

Vec = tuple[int, ...]


def conformal_leq(g: Sequence[int], h: Sequence[int]) -> bool:
    """``g`` lies in the orthant of ``h`` and is dominated by it coordinatewise."""
    if len(g) != len(h):
        raise ValueError("dimension mismatch")
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(g, h))


def _sign_compatible(g: Sequence[int], h: Sequence[int]) -> bool:
    return all(a * b >= 0 for a, b in zip(g, h))


def integer_kernel(A: Sequence[Sequence[int]], n: Optional[int] = None) -> list[Vec]:
    """A lattice basis of ``{x in Z^n : A x = 0}`` by unimodular column operations."""
    n = len(A[0]) if A else (n or 0)
    m = len(A)
    # columns of [A; I], reduced so that A becomes column echelon
    cols = [[A[q][j] for q in range(m)] + [1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivot_col = 0
    for q in range(m):
        # gcd-combine all columns from pivot_col on in row q
        while True:
            nz = [j for j in range(pivot_col, n) if cols[j][q] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][q]))
            for j in nz:
                if j != j0:
                    f = cols[j][q] // cols[j0][q]
                    cols[j] = [a - f * b for a, b in zip(cols[j], cols[j0])]
        nz = [j for j in range(pivot_col, n) if cols[j][q] != 0]
        if nz:
            j0 = nz[0]
            cols[pivot_col], cols[j0] = cols[j0], cols[pivot_col]
            pivot_col += 1
    return [tuple(cols[j][m:]) for j in range(pivot_col, n)]


def matrix_rank(A: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(v) for v in row] for row in A]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def circuits(A: Sequence[Sequence[int]]) -> list[Vec]:
    """Support-minimal primitive kernel vectors (both signs)."""
    n = len(A[0])
    out: set[Vec] = set()
    rank = matrix_rank(A)
    for size in range(1, rank + 2):
        for support in itertools.combinations(range(n), size):
            sub = [[row[j] for j in support] for row in A]
            if matrix_rank(sub) != size - 1:
                continue
            ker = integer_kernel(sub, size)
            if len(ker) != 1 or any(v == 0 for v in ker[0]):
                continue
            v = [0] * n
            for j, val in zip(support, ker[0]):
                v[j] = val
            out.add(tuple(v))
            out.add(tuple(-x for x in v))
    return sorted(out)


def graver_inf_bound(A: Sequence[Sequence[int]]) -> int:
    """Every Graver element is a conformal sum ``sum lambda_i c_i`` with at most
    ``n - rank`` circuits and ``0 <= lambda_i < 1``, so its max-norm is below
    ``(n - rank) * max circuit max-norm``."""
    cs = circuits(A)
    if not cs:
        return 0
    n = len(A[0])
    return (n - matrix_rank(A)) * max(max(abs(v) for v in c) for c in cs)


@dataclass
class GraverBasis:
    A: tuple[tuple[int, ...], ...]
    elements: list[Vec]
    complete: bool

    @property
    def g_inf(self) -> int:
        return max((max(abs(v) for v in g) for g in self.elements), default=0)

    @property
    def g_1(self) -> int:
        return max((sum(abs(v) for v in g) for g in self.elements), default=0)


def _normal_form(s: list[int], basis: list[Vec]) -> list[int]:
    changed = True
    while changed and any(s):
        changed = False
        for g in basis:
            if conformal_leq(g, s):
                s = [a - b for a, b in zip(s, g)]
                changed = True
                if not any(s):
                    break
    return s


def _minimal(vectors) -> list[Vec]:
    vs = sorted(set(vectors), key=lambda v: (sum(map(abs, v)), v))
    keep: list[Vec] = []
    for v in vs:
        if not any(conformal_leq(g, v) for g in keep):
            keep.append(v)
    return sorted(keep)


def graver_basis(A: Sequence[Sequence[int]], norm_budget: Optional[int] = None) -> GraverBasis:
    """Completion procedure; pairs are processed in order of the 1-norm of their sum.

    Elements whose normal form exceeds ``norm_budget`` in max-norm are dropped
    and the result is flagged incomplete.
    """
    A = tuple(tuple(int(v) for v in row) for row in A)
    gens = integer_kernel(A)
    G: list[Vec] = []
    complete = True

    def admit(v: list[int]) -> bool:
        nonlocal complete
        if norm_budget is not None and max(abs(x) for x in v) > norm_budget:
            complete = False
            return False
        for w in (tuple(v), tuple(-x for x in v)):
            for g in G:
                if not _sign_compatible(g, w):
                    s = tuple(a + b for a, b in zip(g, w))
                    if any(s):
                        heapq.heappush(heap, (sum(map(abs, s)), s))
            G.append(w)
        return True

    heap: list = []
    for v in gens:
        nf = _normal_form(list(v), G)
        if any(nf):
            admit(nf)
    while heap:
        _, s = heapq.heappop(heap)
        nf = _normal_form(list(s), G)
        if any(nf):
            admit(nf)
    return GraverBasis(A, _minimal(G), complete)


def graver_by_enumeration(A: Sequence[Sequence[int]], bound: Optional[int] = None) -> list[Vec]:
    """Conformally minimal nonzero kernel vectors within ``[-bound, bound]^n``.

    With the default bound from :func:`graver_inf_bound` the result is the
    full Graver basis.
    """
    n = len(A[0])
    bound = graver_inf_bound(A) if bound is None else bound
    blk = BlockType(E1=(), E2=A, l=(-bound,) * n, u=(bound,) * n, b=(0,) * len(A),
                    f=QuadObjective.zero(n), mu=0)
    pts = [c for c in enumerate_configurations(blk, 10**8) if any(c)]
    return _minimal(pts)


# -------------------------------------------------------------- dual graph

def dual_graph(A: Sequence[Sequence[int]]) -> dict[int, set[int]]:
    """Rows are adjacent when they share a nonzero column."""
    m = len(A)
    adj: dict[int, set[int]] = {q: set() for q in range(m)}
    for q1, q2 in itertools.combinations(range(m), 2):
        if any(a and b for a, b in zip(A[q1], A[q2])):
            adj[q1].add(q2)
            adj[q2].add(q1)
    return adj


def is_path(adj: dict[int, set[int]]) -> bool:
    nodes = list(adj)
    if not nodes:
        return False
    if len(nodes) == 1:
        return True
    degrees = sorted(len(adj[v]) for v in nodes)
    if degrees[:2] != [1, 1] or any(d != 2 for d in degrees[2:]):
        return False
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)


# ---------------------------------------------------------- bound checks

def hillcutting_inf_bound(tau: int) -> int:
    return 2 * tau**4 + tau


def hillcutting_one_bound(tau: int) -> int:
    return 2 * tau * hillcutting_inf_bound(tau)


def basebound(A: Sequence[Sequence[int]]) -> int:
    """``(2 ||A||_inf m + 1)^m`` for an m-row matrix."""
    m = len(A)
    a_inf = max((abs(v) for row in A for v in row), default=0)
    return (2 * a_inf * m + 1) ** m


@dataclass
class BoundReport:
    name: str
    value: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.value <= self.bound

    def __str__(self):
        return f"{self.name} = {self.value} <= {self.bound}: {'ok' if self.holds else 'VIOLATED'}"


def verify_basebound(basis: GraverBasis) -> BoundReport:
    if not basis.complete:
        raise ValueError("base bound check needs a complete Graver basis")
    return BoundReport("g1", basis.g_1, basebound(basis.A))


def verify_hillcutting(a: Sequence[int]) -> tuple[GraverBasis, list[BoundReport]]:
    """Graver basis of the path-shaped Sum wjCj block matrix with its two norm checks."""
    tau = len(a)
    basis = graver_basis(sumwc_matrix(a))
    if not basis.complete:
        raise RuntimeError("Graver completion did not finish")
    return basis, [BoundReport("g_inf", basis.g_inf, hillcutting_inf_bound(tau)),
                   BoundReport("g1", basis.g_1, hillcutting_one_bound(tau)),
                   verify_basebound(basis)]


def cmax_row_bound(p: Sequence[int]) -> BoundReport:
    basis = graver_basis([tuple(p) + (1,)])
    return BoundReport("g1", basis.g_1, 2 * max(p) + 1)


__all__ = [
    "GraverBasis", "BoundReport", "conformal_leq", "integer_kernel", "circuits", "graver_inf_bound",
    "graver_basis", "graver_by_enumeration", "dual_graph", "is_path", "basebound",
    "verify_basebound", "verify_hillcutting", "cmax_row_bound", "hillcutting_inf_bound",
    "hillcutting_one_bound", "prefix_matrix", "sumwc_matrix",
]
