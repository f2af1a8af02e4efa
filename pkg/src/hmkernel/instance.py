"""High-multiplicity scheduling instances.

A :class:`SchedulingInstance` groups jobs into *types* (identical processing
time vector and weight) and machines into *kinds* (identical processing time
row).  Multiplicities are plain Python ints, so they may be astronomically
large without any change in behaviour.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Objective(str, enum.Enum):
    CMAX = "cmax"
    SUMWC = "sumwc"


class InstanceFormatError(ValueError):
    """Malformed instance text; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class SchedulingInstance:
    objective: Objective
    p: tuple[tuple[int, ...], ...]  # p[i][j]: time of a type-j job on a kind-i machine
    w: tuple[int, ...]
    n: tuple[int, ...]
    m: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "objective", Objective(self.objective))
        object.__setattr__(self, "p", tuple(tuple(int(v) for v in row) for row in self.p))
        object.__setattr__(self, "w", tuple(int(v) for v in self.w))
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        object.__setattr__(self, "k", int(self.k))
        self._validate()

    def _validate(self):
        tau, kappa = len(self.n), len(self.m)
        if tau < 1 or kappa < 1:
            raise ValueError("need at least one job type and one machine kind")
        if len(self.p) != kappa or any(len(row) != tau for row in self.p):
            raise ValueError("processing time matrix must be kappa x tau")
        if len(self.w) != tau:
            raise ValueError("weight vector must have length tau")
        if any(v < 1 for row in self.p for v in row):
            raise ValueError("processing times must be positive")
        if any(v < 1 for v in self.n) or any(v < 1 for v in self.m):
            raise ValueError("multiplicities must be positive")
        if any(v < 0 for v in self.w):
            raise ValueError("weights must be nonnegative")
        if self.k < 0:
            raise ValueError("decision bound must be nonnegative")
        if self.objective is Objective.CMAX and any(self.w):
            raise ValueError("Cmax instances carry zero weights")
        signatures = [self.type_signature(j) for j in range(tau)]
        if len(set(signatures)) != tau:
            raise ValueError("two job types are identical")
        if len(set(self.p)) != kappa:
            raise ValueError("two machine kinds are identical")

    @property
    def tau(self) -> int:
        return len(self.n)

    @property
    def kappa(self) -> int:
        return len(self.m)

    @property
    def p_max(self) -> int:
        return max(max(row) for row in self.p)

    @property
    def w_max(self) -> int:
        return max(self.w)

    def type_signature(self, j: int) -> tuple:
        return tuple(self.p[i][j] for i in range(self.kappa)) + (self.w[j],)

    def with_bound(self, k: int) -> "SchedulingInstance":
        return SchedulingInstance(self.objective, self.p, self.w, self.n, self.m, k)

    def expand(self) -> tuple[list[tuple[tuple[int, ...], int]], list[tuple[int, ...]]]:
        """Expand to an explicit job list and machine kind list (small instances only)."""
        jobs = []
        for j in range(self.tau):
            jobs.extend([(self.type_signature(j)[:-1], self.w[j])] * self.n[j])
        machines = []
        for i in range(self.kappa):
            machines.extend([tuple(self.p[i])] * self.m[i])
        return jobs, machines


def compress_to_hm(jobs: Sequence[tuple[Sequence[int], int]], machine_kinds: Sequence[int],
                   objective: Objective | str, k: int) -> SchedulingInstance:
    """Group an explicit job list into the high-multiplicity encoding.

    ``jobs`` holds ``(processing_vector, weight)`` pairs where the vector is
    indexed by machine.  ``machine_kinds`` says, for each machine, which entry
    of the processing vectors applies to it; usually it is just
    ``range(number_of_machines)``.  Machines whose processing-time columns
    coincide collapse into one kind.  Types and kinds keep first-occurrence
    order.
    """
    objective = Objective(objective)
    if not jobs:
        raise ValueError("empty job list")
    width = len(jobs[0][0])
    if any(len(vec) != width for vec, _ in jobs):
        raise ValueError("every job needs one processing time per machine")
    columns = list(machine_kinds)
    if not columns:
        raise ValueError("need at least one machine")
    if any(not 0 <= c < width for c in columns):
        raise ValueError("machine index out of range")

    type_index: dict[tuple, int] = {}
    n: list[int] = []
    type_sig: list[tuple[tuple[int, ...], int]] = []
    for vec, weight in jobs:
        weight = 0 if objective is Objective.CMAX else int(weight)
        key = (tuple(int(v) for v in vec), weight)
        if key not in type_index:
            type_index[key] = len(n)
            n.append(0)
            type_sig.append(key)
        n[type_index[key]] += 1

    kind_index: dict[tuple, int] = {}
    m: list[int] = []
    rows: list[tuple[int, ...]] = []
    for col in columns:
        row = tuple(vec[col] for vec, _ in type_sig)
        if row not in kind_index:
            kind_index[row] = len(m)
            m.append(0)
            rows.append(row)
        m[kind_index[row]] += 1

    return SchedulingInstance(objective, tuple(rows), tuple(w for _, w in type_sig),
                              tuple(n), tuple(m), k)


def smith_order(instance: SchedulingInstance, kind: int) -> list[int]:
    """Type indices sorted by Smith ratio w_j / p_j non-increasingly, ties by index."""
    p = instance.p[kind]
    return sorted(range(instance.tau), key=lambda j: (-Fraction(instance.w[j], p[j]), j))


def single_machine_cost(instance: SchedulingInstance, kind: int, config: Sequence[int]) -> int:
    """Sum of w_j C_j when the job multiset ``config`` runs in Smith order on one machine."""
    if any(c < 0 for c in config):
        raise ValueError("configuration must be nonnegative")
    p = instance.p[kind]
    t = 0
    cost = 0
    for j in smith_order(instance, kind):
        c = config[j]
        if c:
            # jobs complete at t + p, t + 2p, ..., t + c p
            cost += instance.w[j] * (c * t + p[j] * c * (c + 1) // 2)
            t += c * p[j]
    return cost


# ---------------------------------------------------------------- text format

_DIRECTIVES = ("objective", "bound", "types", "kinds", "jobs", "machines", "ptime", "weights")


def _int_token(tok: str, line: int, col: int) -> int:
    try:
        if not tok.lstrip("-").isdigit():
            raise ValueError
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"expected an integer, got {tok!r}", line, col) from None


def parse_instance(text: str) -> SchedulingInstance:
    seen: dict[str, tuple[int, list[tuple[str, int]]]] = {}
    ptimes: dict[int, tuple[int, list[tuple[str, int]]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = []
        pos = 0
        for tok in body.split():
            pos = body.index(tok, pos)
            tokens.append((tok, pos + 1))
            pos += len(tok)
        if not tokens:
            continue
        head, hcol = tokens[0]
        if head not in _DIRECTIVES:
            raise InstanceFormatError(f"unknown directive {head!r}", lineno, hcol)
        if head == "ptime":
            if len(tokens) < 2:
                raise InstanceFormatError("ptime needs a kind index", lineno, hcol)
            kind = _int_token(tokens[1][0], lineno, tokens[1][1])
            if kind in ptimes:
                raise InstanceFormatError(f"duplicate ptime line for kind {kind}", lineno, hcol)
            ptimes[kind] = (lineno, tokens[2:])
            continue
        if head in seen:
            raise InstanceFormatError(f"duplicate directive {head!r}", lineno, hcol)
        seen[head] = (lineno, tokens[1:])

    for required in ("objective", "bound", "types", "kinds", "jobs", "machines"):
        if required not in seen:
            raise InstanceFormatError(f"missing directive {required!r}")

    def scalar(name: str) -> int:
        lineno, toks = seen[name]
        if len(toks) != 1:
            raise InstanceFormatError(f"{name} takes exactly one value", lineno, 1)
        return _int_token(toks[0][0], lineno, toks[0][1])

    lineno, toks = seen["objective"]
    if len(toks) != 1:
        raise InstanceFormatError("objective takes exactly one tag", lineno, 1)
    try:
        objective = Objective(toks[0][0].lower())
    except ValueError:
        raise InstanceFormatError(f"unknown objective tag {toks[0][0]!r}", lineno, toks[0][1]) from None

    k = scalar("bound")
    tau = scalar("types")
    kappa = scalar("kinds")
    if tau < 1 or kappa < 1:
        raise InstanceFormatError("types and kinds must be positive", seen["types"][0], 1)
    if k < 0:
        raise InstanceFormatError("bound must be nonnegative", seen["bound"][0], 1)

    def vector(name: str, length: int, lineno: int, toks, minimum: int) -> tuple[int, ...]:
        if len(toks) != length:
            raise InstanceFormatError(f"{name} expects {length} values, got {len(toks)}", lineno, 1)
        out = []
        for tok, col in toks:
            v = _int_token(tok, lineno, col)
            if v < minimum:
                raise InstanceFormatError(f"{name} value {v} below {minimum}", lineno, col)
            out.append(v)
        return tuple(out)

    n = vector("jobs", tau, *seen["jobs"], minimum=1)
    m = vector("machines", kappa, *seen["machines"], minimum=1)
    if sorted(ptimes) != list(range(1, kappa + 1)):
        raise InstanceFormatError(f"expected ptime lines for kinds 1..{kappa}, got {sorted(ptimes)}")
    p = tuple(vector("ptime", tau, *ptimes[i], minimum=1) for i in range(1, kappa + 1))
    if objective is Objective.SUMWC:
        if "weights" not in seen:
            raise InstanceFormatError("sumwc instances need a weights line")
        w = vector("weights", tau, *seen["weights"], minimum=0)
    else:
        if "weights" in seen:
            raise InstanceFormatError("weights are not allowed with objective cmax", seen["weights"][0], 1)
        w = (0,) * tau
    try:
        return SchedulingInstance(objective, p, w, n, m, k)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def serialize_instance(inst: SchedulingInstance) -> str:
    lines = [
        f"objective {inst.objective.value}",
        f"bound {inst.k}",
        f"types {inst.tau}",
        f"kinds {inst.kappa}",
        "jobs " + " ".join(map(str, inst.n)),
        "machines " + " ".join(map(str, inst.m)),
    ]
    for i, row in enumerate(inst.p, start=1):
        lines.append(f"ptime {i} " + " ".join(map(str, row)))
    if inst.objective is Objective.SUMWC:
        lines.append("weights " + " ".join(map(str, inst.w)))
    return "\n".join(lines) + "\n"
