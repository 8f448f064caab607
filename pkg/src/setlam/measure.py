"""Heights, degrees, weights, degree-indexed simplification, W-measure.

The degree of a redex is the height of the type of its w-abstraction.
Simplification of degree d contracts, in one structural pass, every
redex of degree exactly d (recording wrappers as memory reduction
does); full simplification runs the degrees from the maximum down to 1
and lands on the normal form.  The weight of a term counts its wrapper
nodes, and the measure W of a wrapper-free term is the weight of its
full simplification: it strictly decreases along every plain reduction
step, which bounds the length of every reduction sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .binding import open_term
from .errors import IllTyped
from .syntax import (
    App, BoundVar, Lam, MemTerm, SetTerm, SetType, Type, Var, Wrap,
    WrapperList, apply_wrappers, is_wrapper_free, peel_wrappers, pretty,
    type_height,
)
from .reduction import _elements_by_type, redexes
from .typecheck import subterm_type, synthesize_type

__all__ = [
    "DegreeProfile", "MeasureReport",
    "height", "weight", "max_degree", "degree_profile",
    "simp_d", "simp_full", "W", "measure_report",
]


def height(t: Type | SetType) -> int:
    """Height of a type: bases 0, arrows 1 + max of both sides."""
    return type_height(t)


def weight(t: MemTerm | SetTerm) -> int:
    """Number of wrapper nodes, including inside payloads and sets."""
    match t:
        case Var() | BoundVar():
            return 0
        case Lam(_, _, body):
            return weight(body)
        case App(fun, arg):
            return weight(fun) + weight(arg)
        case Wrap(head, payload):
            return 1 + weight(head) + weight(payload)
        case SetTerm(elements):
            return sum(weight(e) for e in elements)
    raise TypeError(f"not a term: {t!r}")


@dataclass(frozen=True)
class DegreeProfile:
    """Redex count per degree; max_degree is 0 when there are none."""

    max_degree: int
    per_degree: tuple[tuple[int, int], ...]  # (degree, count), ascending


def degree_profile(t: MemTerm | SetTerm) -> DegreeProfile:
    counts: dict[int, int] = {}
    for r in redexes(t):
        if r.degree is None:
            raise IllTyped(f"redex at {list(r.position)} does not synthesize")
        counts[r.degree] = counts.get(r.degree, 0) + 1
    return DegreeProfile(max(counts, default=0), tuple(sorted(counts.items())))


def max_degree(t: MemTerm | SetTerm | WrapperList) -> int:
    """Largest redex degree in t, or 0 if t has no redexes."""
    if isinstance(t, tuple):
        return max((max_degree(p) for p in t), default=0)
    return degree_profile(t).max_degree


def simp_d(t: MemTerm | SetTerm | WrapperList, d: int):
    """Contract every redex of degree exactly d, in one pass.

    On an application whose function part is a w-abstraction of degree
    d, the simplified body is substituted with the simplified argument,
    the argument is recorded in a wrapper and the simplified wrapper
    list is re-attached; everything else is a congruence.
    """
    if d < 1:
        raise ValueError("simplification degree must be >= 1")
    if isinstance(t, tuple):
        return tuple(_simp(p, d) for p in t)
    return _simp(t, d)


def _simp(t, d: int):
    match t:
        case Var() | BoundVar():
            return t
        case Lam(hint, binder, body):
            return Lam(hint, binder, _simp(body, d))
        case App(fun, arg):
            core, wrappers = peel_wrappers(fun)
            if isinstance(core, Lam) and _wabs_degree(core) == d:
                simp_arg = _simp(arg, d)
                contracted = open_term(_simp(core.body, d), _elements_by_type(simp_arg))
                simp_wrappers = tuple(_simp(p, d) for p in wrappers)
                return apply_wrappers(Wrap(contracted, simp_arg), simp_wrappers)
            return App(_simp(fun, d), _simp(arg, d))
        case Wrap(head, payload):
            return Wrap(_simp(head, d), _simp(payload, d))
        case SetTerm(elements):
            return SetTerm.of(_simp(e, d) for e in elements)
    raise TypeError(f"not a term: {t!r}")


def _wabs_degree(core: Lam) -> int:
    return type_height(subterm_type(core))


def simp_full(t: MemTerm | SetTerm):
    """Simplify from the maximum degree down to 1; yields the normal form."""
    for d in range(max_degree(t), 0, -1):
        t = simp_d(t, d)
    return t


def W(t: MemTerm) -> int:
    """Weight of the full simplification of a wrapper-free term."""
    if not is_wrapper_free(t):
        raise IllTyped("the measure is defined on wrapper-free terms")
    synthesize_type(t)
    return weight(simp_full(t))


@dataclass(frozen=True)
class MeasureReport:
    """Full-simplification transcript of a wrapper-free term."""

    term: MemTerm
    max_degree: int
    stages: tuple[tuple[int, MemTerm, int], ...]  # (after degree, term, its max degree)
    normal_form: MemTerm
    measure: int

    def to_json_dict(self) -> dict:
        return {
            "formatVersion": 1,
            "term": pretty(self.term),
            "maxDegree": self.max_degree,
            "stages": [
                {"afterDegree": d, "term": pretty(s), "maxDegree": m}
                for d, s, m in self.stages
            ],
            "normalForm": pretty(self.normal_form),
            "W": self.measure,
        }


def measure_report(t: MemTerm) -> MeasureReport:
    """Record every intermediate stage of the full simplification.

    After the degree-k pass the remaining max-degree must be below k;
    the report asserts that invariant stage by stage.
    """
    if not is_wrapper_free(t):
        raise IllTyped("the measure is defined on wrapper-free terms")
    synthesize_type(t)
    top = max_degree(t)
    stages = []
    stage = t
    for d in range(top, 0, -1):
        stage = simp_d(stage, d)
        m = max_degree(stage)
        if m >= d:
            raise AssertionError(
                f"simplification invariant broken: degree {m} after pass {d}")
        stages.append((d, stage, m))
    return MeasureReport(t, top, tuple(stages), stage, weight(stage))
