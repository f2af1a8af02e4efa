"""Compact solution certificates: configurations with multiplicities.

A schedule is certified by the multiset of its *extended configurations*:
the job counts of one machine followed by a one-hot machine-kind indicator
(and, for Sum wjCj, an upper bound F on that machine's cost placed between
the two).  Summing the certificate reproduces ``(n, m)`` resp.
``(n, sum F, m)``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BudgetExceeded
from .instance import Objective, SchedulingInstance, single_machine_cost, smith_order
from .nfold import ConfMultiSolution, HugeNFoldInstance, build_model, check_solution, objective_value


class Flavor(str, enum.Enum):
    CMAX = "cmax"
    SUMWC = "sumwc"
    NFOLD = "nfold"


@dataclass
class Certificate:
    flavor: Flavor
    entries: list[tuple[tuple[int, ...], int]]

    def __post_init__(self):
        self.flavor = Flavor(self.flavor)
        merged: dict[tuple[int, ...], int] = {}
        for vec, mult in self.entries:
            vec = tuple(int(v) for v in vec)
            merged[vec] = merged.get(vec, 0) + int(mult)
        self.entries = sorted(merged.items())

    @property
    def support(self) -> int:
        return len(self.entries)

    def aggregate(self) -> tuple[int, ...]:
        if not self.entries:
            return ()
        width = len(self.entries[0][0])
        return tuple(sum(mult * vec[q] for vec, mult in self.entries) for q in range(width))


def _job_counts(inst: SchedulingInstance, kind: int, c) -> tuple[int, ...]:
    """Per-type job counts from a model configuration of the given kind."""
    if inst.objective is Objective.CMAX:
        return tuple(c[:inst.tau])
    counts = [0] * inst.tau
    for pos, j in enumerate(smith_order(inst, kind)):
        counts[j] = c[pos]
    return tuple(counts)


def certify(inst: SchedulingInstance, solution: ConfMultiSolution) -> Certificate:
    entries = []
    for (i, c), mult in solution.items():
        counts = _job_counts(inst, i, c)
        indicator = tuple(1 if q == i else 0 for q in range(inst.kappa))
        if inst.objective is Objective.CMAX:
            entries.append((counts + indicator, mult))
        else:
            F = single_machine_cost(inst, i, counts)
            entries.append((counts + (F,) + indicator, mult))
    return Certificate(Flavor(inst.objective.value), entries)


def certify_nfold(inst: HugeNFoldInstance, solution: ConfMultiSolution) -> Certificate:
    """Entries are ``(c, type indicator)``; the verifier recomputes everything else."""
    entries = []
    for (i, c), mult in solution.items():
        entries.append((tuple(c) + tuple(1 if q == i else 0 for q in range(inst.tau_bar)), mult))
    return Certificate(Flavor.NFOLD, entries)


def support_bound(r: int, tau_bar: int, M: int) -> int:
    """``2 (r + tau_bar + 1) log2(4 (r + tau_bar + 1) M)``, logarithm rounded up."""
    h = r + tau_bar + 1
    return 2 * h * max(1, (4 * h * max(1, M) - 1).bit_length())


def _scheduling_M(inst: SchedulingInstance) -> int:
    n_max = max(inst.n)
    if inst.objective is Objective.CMAX:
        return max(n_max, inst.k, 1)
    return max(n_max, inst.p_max * inst.tau * n_max, inst.k, 1)


@dataclass
class CertificateReport:
    ok: bool
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    support: int = 0
    support_bound: int = 0

    def __bool__(self):
        return self.ok


def verify_certificate(inst: SchedulingInstance, cert: Certificate, k: Optional[int] = None) -> CertificateReport:
    k = inst.k if k is None else k
    tau, kappa = inst.tau, inst.kappa
    errors: list[str] = []
    sumwc = inst.objective is Objective.SUMWC
    if cert.flavor.value != inst.objective.value:
        errors.append(f"certificate flavor {cert.flavor.value} does not match objective {inst.objective.value}")
    width = tau + kappa + (1 if sumwc else 0)
    for vec, mult in cert.entries:
        if len(vec) != width:
            errors.append(f"entry {vec} has length {len(vec)}, expected {width}")
            continue
        if mult < 1:
            errors.append(f"entry {vec} has multiplicity {mult} < 1")
        counts = vec[:tau]
        indicator = vec[-kappa:]
        if any(v < 0 for v in counts):
            errors.append(f"entry {vec} has a negative job count")
            continue
        if sorted(indicator) != [0] * (kappa - 1) + [1]:
            errors.append(f"entry {vec} has no valid machine-kind indicator")
            continue
        kind = indicator.index(1)
        if sumwc:
            cost = single_machine_cost(inst, kind, counts)
            if cost > vec[tau]:
                errors.append(f"entry {vec}: machine cost {cost} exceeds its bound F = {vec[tau]}")
        else:
            load = sum(p * c for p, c in zip(inst.p[kind], counts))
            if load > k:
                errors.append(f"entry {vec}: load {load} exceeds k = {k}")
    if not errors:
        agg = cert.aggregate() or (0,) * width
        target = list(inst.n) + ([None] if sumwc else []) + list(inst.m)
        for q, (got, want) in enumerate(zip(agg, target)):
            if want is not None and got != want:
                errors.append(f"aggregation mismatch on coordinate {q + 1}: {got} != {want}")
        if sumwc and agg[tau] > k:
            errors.append(f"aggregated cost bound {agg[tau]} exceeds k = {k}")
    bound = support_bound(tau, kappa, _scheduling_M(inst))
    warnings = []
    if cert.support > bound:
        warnings.append(f"support {cert.support} exceeds the compactness bound {bound}")
    return CertificateReport(not errors, errors, warnings, cert.support, bound)


def verify_nfold_certificate(inst: HugeNFoldInstance, cert: Certificate, bound=None) -> CertificateReport:
    errors = []
    sol = ConfMultiSolution()
    t, tb = inst.t, inst.tau_bar
    for vec, mult in cert.entries:
        ind = vec[t:]
        if len(vec) != t + tb or sorted(ind) != [0] * (tb - 1) + [1]:
            errors.append(f"entry {vec} is malformed")
            continue
        sol.add(ind.index(1), vec[:t], mult)
    if not errors:
        errors.extend(check_solution(inst, sol.entries))
    if not errors and bound is not None and objective_value(inst, sol.entries) > bound:
        errors.append("objective exceeds the bound")
    M = max([1] + [abs(v) for blk in inst.blocks for v in blk.l + tuple(u for u in blk.u if u is not None)])
    sb = support_bound(inst.r, tb, M)
    warnings = [f"support {cert.support} exceeds the compactness bound {sb}"] if cert.support > sb else []
    return CertificateReport(not errors, errors, warnings, cert.support, sb)


def compact_support(cert: Certificate, node_budget: int = 200_000) -> tuple[Certificate, bool]:
    """Try to rewrite the aggregate with fewer distinct entries.

    Searches subsets of the existing entries by increasing size for
    nonnegative integer multiplicities (all at least one) reproducing the
    aggregate exactly.  Returns ``(certificate, completed)``; when the node
    budget runs out the merged input comes back with ``completed = False``.
    """
    entries = cert.entries
    if len(entries) <= 1:
        return cert, True
    target = cert.aggregate()
    vecs = [vec for vec, _ in entries]
    if any(v < 0 for vec in vecs for v in vec):
        return cert, False  # the search below relies on nonnegative entries
    nodes = 0

    def solve(subset) -> Optional[list[int]]:
        nonlocal nodes
        order = list(subset)

        def dfs(pos: int, rem: list[int], mults: list[int]):
            nonlocal nodes
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("compaction search exceeded its budget")
            if pos == len(order):
                return list(mults) if not any(rem) else None
            vec = vecs[order[pos]]
            caps = [rem[q] // vec[q] for q in range(len(vec)) if vec[q] > 0]
            if not caps:
                return None
            for mult in range(min(caps), 0, -1):
                nrem = [a - mult * b for a, b in zip(rem, vec)]
                mults.append(mult)
                got = dfs(pos + 1, nrem, mults)
                mults.pop()
                if got is not None:
                    return got
            return None

        return dfs(0, list(target), [])

    try:
        for size in range(1, len(entries)):
            for subset in itertools.combinations(range(len(entries)), size):
                mults = solve(subset)
                if mults is not None:
                    return Certificate(cert.flavor, [(vecs[j], m) for j, m in zip(subset, mults)]), True
    except BudgetExceeded:
        return cert, False
    return cert, True


def encoding_length(inst: SchedulingInstance) -> int:
    """Bits of the binary encoding of all numbers in the instance."""
    nums = [v for row in inst.p for v in row] + list(inst.w) + list(inst.n) + list(inst.m) + [inst.k]
    return sum(max(1, abs(v).bit_length()) for v in nums)


def opt_encoding_check(inst: SchedulingInstance, opt: int) -> Optional[str]:
    """Warning text when the optimum needs more than (encoding length)^2 bits."""
    size = encoding_length(inst)
    bits = max(1, abs(opt).bit_length())
    if bits > size * size:
        return f"optimum uses {bits} bits, more than {size}^2"
    return None


def certify_from_model(inst: SchedulingInstance, solution: ConfMultiSolution) -> Certificate:
    """Check the solution against the model first, then certify."""
    problems = check_solution(build_model(inst), solution.entries)
    if problems:
        raise ValueError("; ".join(problems))
    return certify(inst, solution)
