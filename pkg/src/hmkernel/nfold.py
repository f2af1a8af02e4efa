"""Huge N-fold IP data model and the two scheduling builders.

Bricks are never materialised: a block type carries its multiplicity ``mu``
and every stage of the pipeline works on ``(type, configuration)`` aggregates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BoxTooLarge
from .instance import Objective, SchedulingInstance, smith_order

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


def _frac_tuple(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class QuadObjective:
    """Separable quadratic ``sum_l alpha_l x_l^2 + beta_l x_l``."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frac_tuple(self.alpha))
        object.__setattr__(self, "beta", _frac_tuple(self.beta))
        if len(self.alpha) != len(self.beta):
            raise ValueError("alpha and beta must have equal length")

    @classmethod
    def zero(cls, t: int) -> "QuadObjective":
        return cls((0,) * t, (0,) * t)

    @property
    def is_zero(self) -> bool:
        return not any(self.alpha) and not any(self.beta)

    def __call__(self, x: Sequence[int]) -> Fraction:
        return sum((a * v * v + b * v for a, b, v in zip(self.alpha, self.beta, x)), Fraction(0))

    def shifted(self, origin: Sequence[int]) -> tuple["QuadObjective", Fraction]:
        """Return ``(g, const)`` with ``self(origin + y) == g(y) + const``."""
        beta = tuple(b + 2 * a * o for a, b, o in zip(self.alpha, self.beta, origin))
        return QuadObjective(self.alpha, beta), self(origin)


@dataclass(frozen=True)
class BlockType:
    E1: Matrix
    E2: Matrix
    l: Vector
    u: tuple[Optional[int], ...]  # None is +infinity
    b: Vector
    f: QuadObjective
    mu: int

    def __post_init__(self):
        object.__setattr__(self, "E1", tuple(tuple(int(v) for v in row) for row in self.E1))
        object.__setattr__(self, "E2", tuple(tuple(int(v) for v in row) for row in self.E2))
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        object.__setattr__(self, "u", tuple(None if v is None else int(v) for v in self.u))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        object.__setattr__(self, "mu", int(self.mu))
        t = len(self.l)
        if len(self.u) != t or len(self.f.alpha) != t:
            raise ValueError("bounds and objective must have the block dimension")
        if any(len(row) != t for row in self.E1 + self.E2):
            raise ValueError("matrix width must equal the block dimension")
        if len(self.E2) != len(self.b):
            raise ValueError("E2 rows and rhs length differ")
        if self.mu < 0:
            raise ValueError("multiplicity must be nonnegative")
        for lo, hi in zip(self.l, self.u):
            if hi is not None and lo > hi:
                raise ValueError("lower bound exceeds upper bound")

    @property
    def t(self) -> int:
        return len(self.l)

    @property
    def finite(self) -> bool:
        return all(v is not None for v in self.u)

    def top(self, c: Sequence[int]) -> Vector:
        """``E1 c``: the contribution of one brick to the linking rows."""
        return tuple(sum(a * v for a, v in zip(row, c)) for row in self.E1)

    def is_configuration(self, c: Sequence[int]) -> bool:
        if len(c) != self.t:
            return False
        for v, lo, hi in zip(c, self.l, self.u):
            if v < lo or (hi is not None and v > hi):
                return False
        return all(sum(a * v for a, v in zip(row, c)) == rhs for row, rhs in zip(self.E2, self.b))


@dataclass(frozen=True)
class HugeNFoldInstance:
    r: int
    s: int
    t: int
    blocks: tuple[BlockType, ...]
    b0: Vector

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "b0", tuple(int(v) for v in self.b0))
        if len(self.b0) != self.r:
            raise ValueError("b0 must have r entries")
        for blk in self.blocks:
            if blk.t != self.t or len(blk.E1) != self.r or len(blk.E2) != self.s:
                raise ValueError("block dimensions disagree with (r, s, t)")

    @property
    def tau_bar(self) -> int:
        return len(self.blocks)

    @property
    def N(self) -> int:
        return sum(blk.mu for blk in self.blocks)

    @property
    def mu(self) -> Vector:
        return tuple(blk.mu for blk in self.blocks)

    @property
    def E_inf(self) -> int:
        return max((abs(v) for blk in self.blocks for row in blk.E1 + blk.E2 for v in row), default=0)

    @property
    def E2_inf(self) -> int:
        return max((abs(v) for blk in self.blocks for row in blk.E2 for v in row), default=0)


@dataclass(frozen=True)
class Configuration:
    type: int
    c: Vector


@dataclass
class ConfMultiSolution:
    """Integer multiplicities for ``(type, configuration)`` pairs."""

    entries: dict[tuple[int, Vector], int] = field(default_factory=dict)

    def items(self):
        return sorted(self.entries.items())

    def add(self, i: int, c: Sequence[int], mult: int):
        if mult:
            key = (i, tuple(c))
            self.entries[key] = self.entries.get(key, 0) + mult


# ------------------------------------------------------------------ builders

def build_cmax_model(inst: SchedulingInstance) -> HugeNFoldInstance:
    if inst.objective is not Objective.CMAX:
        raise ValueError("build_cmax_model needs a Cmax instance")
    tau, t = inst.tau, inst.tau + 1
    E1 = tuple(tuple(1 if col == j else 0 for col in range(t)) for j in range(tau))
    blocks = []
    for i in range(inst.kappa):
        blocks.append(BlockType(
            E1=E1,
            E2=(tuple(inst.p[i]) + (1,),),
            l=(0,) * t,
            # slack bounded by k rather than infinity: no configuration is lost
            u=tuple(inst.n) + (inst.k,),
            b=(inst.k,),
            f=QuadObjective.zero(t),
            mu=inst.m[i],
        ))
    return HugeNFoldInstance(r=tau, s=1, t=t, blocks=tuple(blocks), b0=tuple(inst.n))


def sumwc_matrix(a: Sequence[int]) -> Matrix:
    """``(diag(a) | H)`` with H bidiagonal: -1 on the diagonal, +1 below it."""
    tau = len(a)
    rows = []
    for ell in range(tau):
        row = [0] * (2 * tau)
        row[ell] = a[ell]
        row[tau + ell] = -1
        if ell:
            row[tau + ell - 1] = 1
        rows.append(tuple(row))
    return tuple(rows)


def prefix_matrix(a: Sequence[int]) -> Matrix:
    """``(G | -I)`` with G lower triangular, row l holding ``a_1 .. a_l``."""
    tau = len(a)
    rows = []
    for ell in range(tau):
        row = [a[q] if q <= ell else 0 for q in range(tau)] + [0] * tau
        row[tau + ell] = -1
        rows.append(tuple(row))
    return tuple(rows)


def sumwc_objective(weights: Sequence[int], a: Sequence[int]) -> QuadObjective:
    """Per-machine sum of w_j C_j as a separable quadratic in (x, z).

    With Smith-ordered positions, rho_l = w_l / a_l and prefix loads z_l, the
    cost equals ``sum_l (rho_l - rho_{l+1}) / 2 * z_l^2 + sum_l w_l a_l / 2 * x_l``
    on every feasible (x, z); rho_{tau+1} = 0.
    """
    tau = len(a)
    rho = [Fraction(weights[ell], a[ell]) for ell in range(tau)] + [Fraction(0)]
    alpha = [Fraction(0)] * tau + [(rho[ell] - rho[ell + 1]) / 2 for ell in range(tau)]
    beta = [Fraction(weights[ell] * a[ell], 2) for ell in range(tau)] + [Fraction(0)] * tau
    return QuadObjective(tuple(alpha), tuple(beta))


def build_sumwc_model(inst: SchedulingInstance) -> HugeNFoldInstance:
    if inst.objective is not Objective.SUMWC:
        raise ValueError("build_sumwc_model needs a SumWC instance")
    tau, t = inst.tau, 2 * inst.tau
    n_max = max(inst.n)
    z_max = inst.p_max * tau * n_max
    blocks = []
    for i in range(inst.kappa):
        order = smith_order(inst, i)
        a = [inst.p[i][j] for j in order]
        E1 = tuple(tuple(1 if col < tau and order[col] == j else 0 for col in range(t))
                   for j in range(tau))
        blocks.append(BlockType(
            E1=E1,
            E2=sumwc_matrix(a),
            l=(0,) * t,
            u=(n_max,) * tau + (z_max,) * tau,
            b=(0,) * tau,
            f=sumwc_objective([inst.w[j] for j in order], a),
            mu=inst.m[i],
        ))
    return HugeNFoldInstance(r=tau, s=tau, t=t, blocks=tuple(blocks), b0=tuple(inst.n))


def build_model(inst: SchedulingInstance) -> HugeNFoldInstance:
    if inst.objective is Objective.CMAX:
        return build_cmax_model(inst)
    return build_sumwc_model(inst)


def objective_value(inst: HugeNFoldInstance, entries: Mapping[tuple[int, Vector], object]) -> Fraction:
    """``sum multiplicity * f^i(c)`` over a sparse (type, config) -> value map."""
    total = Fraction(0)
    for (i, c), y in entries.items():
        total += Fraction(y) * inst.blocks[i].f(c)
    return total


def check_solution(inst: HugeNFoldInstance, entries: Mapping[tuple[int, Vector], object]) -> list[str]:
    """Problems with a (fractional or integer) configuration solution; empty when feasible."""
    problems = []
    top = [Fraction(0)] * inst.r
    count = [Fraction(0)] * inst.tau_bar
    for (i, c), y in entries.items():
        y = Fraction(y)
        if y < 0:
            problems.append(f"negative multiplicity at type {i}, config {c}")
        blk = inst.blocks[i]
        if not blk.is_configuration(c):
            problems.append(f"{c} is not a configuration of type {i}")
            continue
        for q, v in enumerate(blk.top(c)):
            top[q] += y * v
        count[i] += y
    for q in range(inst.r):
        if top[q] != inst.b0[q]:
            problems.append(f"linking row {q}: {top[q]} != {inst.b0[q]}")
    for i in range(inst.tau_bar):
        if count[i] != inst.blocks[i].mu:
            problems.append(f"type {i} uses {count[i]} bricks, multiplicity is {inst.blocks[i].mu}")
    return problems


# -------------------------------------------------------------- enumeration

def enumerate_configurations(block: BlockType, budget: int = 10**6) -> list[Vector]:
    """All integer c with E2 c = b and l <= c <= u, in lexicographic order.

    Depth-first search with interval pruning per row; a variable that is the
    last unassigned one in some row is solved for instead of branched on.
    ``budget`` caps the number of search nodes.
    """
    t = block.t
    rows = [(row, rhs) for row, rhs in zip(block.E2, block.b)]
    lo = list(block.l)
    hi = list(block.u)
    out: list[Vector] = []
    nodes = 0
    x: list[Optional[int]] = [None] * t

    def row_range(row, fixed_only=False):
        smin = smax = 0
        for a, v, l_, h_ in zip(row, x, lo, hi):
            if not a:
                continue
            if v is not None:
                smin += a * v
                smax += a * v
                continue
            if fixed_only:
                return None
            ends = (a * l_, None if h_ is None else a * h_)
            if a > 0:
                smin += ends[0]
                smax = None if smax is None or ends[1] is None else smax + ends[1]
            else:
                smax = None if smax is None else smax + ends[0]
                smin = None if smin is None or ends[1] is None else smin + ends[1]
        return smin, smax

    def feasible_partial() -> bool:
        for row, rhs in rows:
            smin, smax = row_range(row)
            if smin is not None and smin > rhs:
                return False
            if smax is not None and smax < rhs:
                return False
        return True

    def forced():
        """(index, value) forced by a row with one unassigned nonzero, or False on conflict."""
        for row, rhs in rows:
            free = [q for q, a in enumerate(row) if a and x[q] is None]
            if len(free) == 1:
                q = free[0]
                rest = sum(a * v for a, v in zip(row, x) if a and v is not None)
                num = rhs - rest
                if num % row[q]:
                    return False
                v = num // row[q]
                if v < lo[q] or (hi[q] is not None and v > hi[q]):
                    return False
                return q, v
        return None

    def dfs():
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BoxTooLarge(f"configuration enumeration exceeded {budget} nodes")
        if not feasible_partial():
            return
        f = forced()
        if f is False:
            return
        if f is not None:
            q, v = f
            x[q] = v
            dfs()
            x[q] = None
            return
        free = [q for q in range(t) if x[q] is None]
        if not free:
            if all(sum(a * v for a, v in zip(row, x)) == rhs for row, rhs in rows):
                out.append(tuple(x))
            return
        bounded = [q for q in free if hi[q] is not None]
        if not bounded:
            raise BoxTooLarge("unbounded coordinate not determined by the constraints")
        q = min(bounded, key=lambda j: (hi[j] - lo[j], j))
        for v in range(lo[q], hi[q] + 1):
            x[q] = v
            dfs()
        x[q] = None

    if any(h is not None and l_ > h for l_, h in zip(lo, hi)):
        return []
    dfs()
    out.sort()
    return out
