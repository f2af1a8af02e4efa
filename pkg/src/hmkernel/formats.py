"""Text formats: N-fold models, kernels with their sidecar, certificates.

Every format is line based with ``#`` comments, in the same style as the
instance format.  Rationals are written ``p/q``; an infinite upper bound is
written ``inf``.

N-fold model::

    nfold <r> <s> <t>
    rhs0 <b0 ...>
    block <index> <mu>
    E1 <row>          # r lines
    E2 <row>          # s lines
    lower <l ...>
    upper <u ...>
    rhs <b ...>
    alpha <...>
    beta <...>

A kernel file is an N-fold model followed by ``objective <tag>`` and
``bound <k>``.  The sidecar holds the lifting record::

    proximity <P> <overridden: 0|1>
    fixed_contribution <p/q>
    center <type> <support|averaged> <muBar> <cfloor ...>
    fixed <type> <multiplicity> <c ...>
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .certificates import Certificate, Flavor
from .instance import Objective, SchedulingInstance, serialize_instance
from .nfold import BlockType, ConfMultiSolution, HugeNFoldInstance, QuadObjective, build_model
from .proximity import Center, CenterOrigin, ProximityBound, ReducedInstance, proximity_P


class FormatError(ValueError):
    pass


def _fmt(v) -> str:
    if v is None:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _join(values: Iterable) -> str:
    return " ".join(_fmt(v) for v in values)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield lineno, body


def serialize_nfold(inst: HugeNFoldInstance) -> str:
    out = [f"nfold {inst.r} {inst.s} {inst.t}", f"rhs0 {_join(inst.b0)}".rstrip()]
    for idx, blk in enumerate(inst.blocks):
        out.append(f"block {idx} {blk.mu}")
        out.extend(f"E1 {_join(row)}" for row in blk.E1)
        out.extend(f"E2 {_join(row)}" for row in blk.E2)
        out.append(f"lower {_join(blk.l)}")
        out.append(f"upper {_join(blk.u)}")
        out.append(f"rhs {_join(blk.b)}".rstrip())
        out.append(f"alpha {_join(blk.f.alpha)}")
        out.append(f"beta {_join(blk.f.beta)}")
    return "\n".join(out) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected an integer, got {tok!r}") from None


def _frac(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {lineno}: expected a rational, got {tok!r}") from None


def parse_nfold(text: str, extra: dict | None = None) -> HugeNFoldInstance:
    """Parse the model; unknown trailing directives are collected into ``extra``."""
    header = None
    b0: list[int] = []
    blocks: list[dict] = []
    for lineno, toks in _lines(text):
        head, rest = toks[0], toks[1:]
        if head == "nfold":
            header = tuple(_int(v, lineno) for v in rest)
            if len(header) != 3:
                raise FormatError(f"line {lineno}: nfold needs r s t")
        elif head == "rhs0":
            b0 = [_int(v, lineno) for v in rest]
        elif head == "block":
            blocks.append({"mu": _int(rest[1], lineno), "E1": [], "E2": []})
        elif head in ("E1", "E2"):
            blocks[-1][head].append([_int(v, lineno) for v in rest])
        elif head in ("lower", "rhs"):
            blocks[-1][head] = [_int(v, lineno) for v in rest]
        elif head == "upper":
            blocks[-1][head] = [None if v == "inf" else _int(v, lineno) for v in rest]
        elif head in ("alpha", "beta"):
            blocks[-1][head] = [_frac(v, lineno) for v in rest]
        elif extra is not None:
            extra[head] = (lineno, rest)
        else:
            raise FormatError(f"line {lineno}: unknown directive {head!r}")
    if header is None:
        raise FormatError("missing nfold header")
    r, s, t = header
    try:
        built = tuple(BlockType(b["E1"], b["E2"], b["lower"], b["upper"], b.get("rhs", []),
                                QuadObjective(b["alpha"], b["beta"]), b["mu"]) for b in blocks)
        return HugeNFoldInstance(r, s, t, built, b0)
    except (KeyError, ValueError) as exc:
        raise FormatError(f"malformed block: {exc}") from None


def serialize_kernel(kernel) -> str:
    return serialize_nfold(kernel.instance) + f"objective {kernel.objective.value}\nbound {kernel.bound}\n"


def serialize_sidecar(reduced: ReducedInstance) -> str:
    out = [f"proximity {reduced.bound.P} {int(reduced.bound.overridden)}",
           f"fixed_contribution {_fmt(reduced.fixed_contribution)}"]
    for ctr in reduced.centers:
        out.append(f"center {ctr.type} {ctr.origin.value} {ctr.muBar} {_join(ctr.cfloor)}")
    for (i, c), mult in reduced.fixed_solution.items():
        out.append(f"fixed {i} {mult} {_join(c)}")
    return "\n".join(out) + "\n"


def parse_kernel(kernel_text: str, sidecar_text: str, original: SchedulingInstance):
    """Rebuild a :class:`hmkernel.pipeline.Kernel` against the original instance."""
    from .pipeline import Kernel

    extra: dict = {}
    inner = parse_nfold(kernel_text, extra)
    for key in ("objective", "bound"):
        if key not in extra:
            raise FormatError(f"kernel file lacks a {key!r} line")
    objective = Objective(extra["objective"][1][0])
    bound = _int(extra["bound"][1][0], extra["bound"][0])
    model = build_model(original)
    P, overridden, fixed_contribution = None, False, Fraction(0)
    centers: list[Center] = []
    fixed = ConfMultiSolution()
    for lineno, toks in _lines(sidecar_text):
        head, rest = toks[0], toks[1:]
        if head == "proximity":
            P, overridden = _int(rest[0], lineno), rest[1] == "1"
        elif head == "fixed_contribution":
            fixed_contribution = _frac(rest[0], lineno)
        elif head == "center":
            centers.append(Center(_int(rest[0], lineno), tuple(_int(v, lineno) for v in rest[3:]),
                                  CenterOrigin(rest[1]), _int(rest[2], lineno)))
        elif head == "fixed":
            fixed.add(_int(rest[0], lineno), tuple(_int(v, lineno) for v in rest[2:]), _int(rest[1], lineno))
        else:
            raise FormatError(f"sidecar line {lineno}: unknown directive {head!r}")
    if P is None:
        raise FormatError("sidecar lacks a proximity line")
    base = proximity_P(model)
    pb = ProximityBound(P, base.r, base.tau_bar, base.t, base.s, base.E_inf, base.E2_inf, overridden)
    if len(centers) != inner.tau_bar:
        raise FormatError(f"sidecar lists {len(centers)} centers for {inner.tau_bar} kernel blocks")
    reduced = ReducedInstance(model, inner, centers, fixed_contribution, fixed, pb)
    return Kernel(objective, inner, bound, reduced)


def kernel_bits(kernel) -> int:
    return 8 * len(serialize_kernel(kernel).encode())


def serialize_instance_bits(inst: SchedulingInstance) -> int:
    return 8 * len(serialize_instance(inst).encode())


def serialize_certificate(cert: Certificate) -> str:
    out = [f"certificate {cert.flavor.value}"]
    out.extend(f"entry {mult} {_join(vec)}" for vec, mult in cert.entries)
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> Certificate:
    flavor = None
    entries = []
    for lineno, toks in _lines(text):
        if toks[0] == "certificate":
            flavor = Flavor(toks[1])
        elif toks[0] == "entry":
            entries.append((tuple(_int(v, lineno) for v in toks[2:]), _int(toks[1], lineno)))
        else:
            raise FormatError(f"line {lineno}: unknown directive {toks[0]!r}")
    if flavor is None:
        raise FormatError("missing certificate header")
    return Certificate(flavor, entries)


def parse_matrix(text: str) -> list[tuple[int, ...]]:
    rows = [tuple(_int(v, lineno) for v in toks) for lineno, toks in _lines(text)]
    if not rows or len({len(r) for r in rows}) != 1:
        raise FormatError("matrix rows must be nonempty and of equal length")
    return rows
