"""Deterministic instance families shared by the acceptance and module tests."""

from __future__ import annotations

import random

from hmkernel.instance import Objective, SchedulingInstance
from hmkernel.oracle import brute_schedule


def _distinct(p, w=None) -> bool:
    """Machine kinds pairwise different and job types pairwise different."""
    cols = [tuple(row[j] for row in p) + ((w[j],) if w else ()) for j in range(len(p[0]))]
    return len(set(p)) == len(p) and len(set(cols)) == len(cols)


def cmax_family(count: int = 520, seed: int = 1):
    """Small Cmax instances with k on both sides of the optimum.

    Shapes cycle through every (tau, kappa) in {1, 2}^2.  Each drawn instance
    contributes k = OPT - 1 (a no-instance) and k = OPT (a yes-instance); every
    fourth one also contributes k = OPT + 1.
    """
    rng = random.Random(seed)
    out = []
    shapes = [(1, 1), (1, 2), (2, 1), (2, 2)]
    draw = 0
    while len(out) < count:
        tau, kappa = shapes[draw % len(shapes)]
        p = tuple(tuple(rng.randint(1, 3) for _ in range(tau)) for _ in range(kappa))
        n = tuple(rng.randint(1, 5) for _ in range(tau))
        m = tuple(rng.randint(1, 3) for _ in range(kappa))
        if not _distinct(p):
            continue
        base = SchedulingInstance(Objective.CMAX, p, (0,) * tau, n, m, 0)
        opt, _ = brute_schedule(base)
        ks = [opt - 1, opt] + ([opt + 1] if draw % 4 == 0 else [])
        out.extend(SchedulingInstance(Objective.CMAX, p, (0,) * tau, n, m, k) for k in ks if k >= 0)
        draw += 1
    return out


def sumwc_family(count: int = 210, seed: int = 2):
    """Random SumWC instances: sum n <= 6, sum m <= 3, k at OPT - 1 or OPT."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        tau, kappa = rng.randint(1, 2), rng.randint(1, 2)
        p = tuple(tuple(rng.randint(1, 3) for _ in range(tau)) for _ in range(kappa))
        w = tuple(rng.randint(1, 4) for _ in range(tau))
        n = [1] * tau
        for _ in range(rng.randint(0, 6 - tau)):
            n[rng.randrange(tau)] += 1
        m = [1] * kappa
        for _ in range(rng.randint(0, 3 - kappa)):
            m[rng.randrange(kappa)] += 1
        if not _distinct(p, w):
            continue
        base = SchedulingInstance(Objective.SUMWC, p, w, tuple(n), tuple(m), 0)
        opt, _ = brute_schedule(base)
        k = opt - rng.randint(0, 1)
        out.append(SchedulingInstance(Objective.SUMWC, p, w, tuple(n), tuple(m), max(k, 0)))
    return out
