"""Reduction: substitution, single steps, developments, beta simulation.

Two reductions act on annotated terms.  Plain reduction ("i") contracts
``(\\x:A. body) args`` to the body with each occurrence replaced by the
argument element of its type; it is defined on wrapper-free terms.
Memory reduction ("im") contracts ``(\\x:A. body) L args``, where L is a
list of wrappers on the abstraction, to ``body{x := args} [args] L``:
the contracted argument is kept as a wrapper, so nothing is erased.

Untyped beta reduction lives here too, together with the bridge between
the two worlds: a beta step on an untyped term is simulated by
contracting every copy of the redex in a refining annotated term, and a
single annotated step is projected back to a beta step plus a bounded
search for the completing reduction.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .binding import open_term, uopen
from .errors import IllTyped, NotARedex, SearchBudgetExceeded
from .syntax import (
    App, BoundVar, Lam, MemTerm, Position, SetTerm, SetType, Type,
    UApp, UBoundVar, ULam, UntypedTerm, UVar, Var, Wrap, WrapperList,
    apply_wrappers, is_wrapper_free, peel_wrappers, pretty, replace_at,
    subterm_at, term_size, type_height,
)
from .typecheck import check, refines, subterm_type
from . import binding, typecheck

__all__ = [
    "Redex", "Step",
    "substitute", "redexes", "i_redexes",
    "step_i", "step_im", "corresponding_step", "forgetful_reducts",
    "complete_development", "parallel_reducts", "par_reduces",
    "random_parallel_reduct",
    "beta_redexes", "beta_step",
    "simulate_beta", "project_step", "erased_position",
]


@dataclass(frozen=True)
class Redex:
    """An applied w-abstraction: ``(\\x:A. body) L args`` at `position`."""

    position: Position
    binder_hint: str
    binder: SetType
    wrapper_count: int
    degree: int | None  # height of the w-abstraction's type; None if unsynthesizable


@dataclass(frozen=True)
class Step:
    kind: str  # "beta" | "i" | "im" | "forget" | "parallel"
    position: Position
    source: object
    target: object


# ---------------------------------------------------------------------------
# Substitution


def _elements_by_type(arg: SetTerm) -> dict[Type, MemTerm]:
    by_type: dict[Type, MemTerm] = {}
    for e in arg.elements:
        t = subterm_type(e)
        if t in by_type:
            raise IllTyped(f"set-term elements share the type {pretty(t)}")
        by_type[t] = e
    return by_type


def substitute(t: MemTerm | SetTerm, name: str, binder: SetType,
               arg: SetTerm, context=None) -> MemTerm | SetTerm:
    """Replace each free ``name^A`` in t by the element of `arg` of type A.

    `arg` must carry exactly the types of `binder` (the occurrence-to-
    element selection is the bijection between a set-term and its
    set-type).  When a context is given, the substituents are checked
    under it first.
    """
    by_type = _elements_by_type(arg)
    if SetType.of(by_type) != binder:
        raise IllTyped(
            f"argument set-type {pretty(SetType.of(by_type))} != binder {pretty(binder)}")
    if context is not None:
        check(context, arg)
    return binding.subst_free(t, name, by_type)


# ---------------------------------------------------------------------------
# Redex enumeration and single steps


def _lam_degree(core: Lam) -> int | None:
    try:
        return type_height(subterm_type(core))
    except IllTyped:
        return None


def redexes(t: MemTerm | SetTerm) -> list[Redex]:
    """All applied w-abstractions, in lexicographic position order.

    Each redex's degree is the height of its w-abstraction's type (None
    when the abstraction does not synthesize).
    """
    found: list[Redex] = []
    _collect_redexes(t, (), found)
    return found


def _collect_redexes(t, pos: Position, found: list[Redex]) -> None:
    match t:
        case Var() | BoundVar():
            return
        case Lam(_, _, body):
            _collect_redexes(body, pos + (0,), found)
        case App(fun, arg):
            core, wrappers = peel_wrappers(fun)
            if isinstance(core, Lam):
                found.append(Redex(pos, core.hint, core.binder,
                                   len(wrappers), _lam_degree(core)))
            _collect_redexes(fun, pos + (0,), found)
            for i, e in enumerate(arg.elements):
                _collect_redexes(e, pos + (1 + i,), found)
        case Wrap(head, payload):
            _collect_redexes(head, pos + (0,), found)
            for i, e in enumerate(payload.elements):
                _collect_redexes(e, pos + (1 + i,), found)
        case SetTerm(elements):
            for i, e in enumerate(elements):
                _collect_redexes(e, pos + (i,), found)
        case _:
            raise TypeError(f"not a term: {t!r}")


def i_redexes(t: MemTerm | SetTerm) -> list[Redex]:
    """Redexes with no wrappers between abstraction and argument."""
    return [r for r in redexes(t) if r.wrapper_count == 0]


def _split_redex(t, pos: Position) -> tuple[Lam, WrapperList, SetTerm]:
    node = subterm_at(t, pos)
    if not isinstance(node, App):
        raise NotARedex(f"no application at {list(pos)}")
    core, wrappers = peel_wrappers(node.fun)
    if not isinstance(core, Lam):
        raise NotARedex(f"function part at {list(pos)} is not a w-abstraction")
    return core, wrappers, node.arg


def _contract(core: Lam, arg: SetTerm) -> MemTerm:
    by_type = _elements_by_type(arg)
    if SetType.of(by_type) != core.binder:
        raise IllTyped(
            f"argument set-type does not match the binder {pretty(core.binder)}")
    return open_term(core.body, by_type)


def step_i(t: MemTerm | SetTerm, pos: Position) -> MemTerm | SetTerm:
    """Contract the redex at pos, erasing the argument's unused elements."""
    if not is_wrapper_free(t):
        raise IllTyped("plain reduction is defined on wrapper-free terms")
    core, wrappers, arg = _split_redex(t, pos)
    if wrappers:
        raise NotARedex(f"redex at {list(pos)} is wrapped")
    return replace_at(t, pos, _contract(core, arg))


def step_im(t: MemTerm | SetTerm, pos: Position) -> MemTerm | SetTerm:
    """Contract the redex at pos, recording the argument in a wrapper."""
    core, wrappers, arg = _split_redex(t, pos)
    contracted = Wrap(_contract(core, arg), arg)
    return replace_at(t, pos, apply_wrappers(contracted, wrappers))


def corresponding_step(t: MemTerm | SetTerm, pos: Position) -> MemTerm | SetTerm:
    """The memory step contracting the same redex as step_i(t, pos).

    Differs from the plain step only by the recorded wrapper: it
    forgetful-reduces to step_i(t, pos) in exactly one step.
    """
    if not is_wrapper_free(t):
        raise IllTyped("corresponding steps start from wrapper-free terms")
    return step_im(t, pos)


def forgetful_reducts(t: MemTerm | SetTerm) -> list[tuple[Position, MemTerm | SetTerm]]:
    """All ways to drop one wrapper node (with its payload), by position."""
    out = []
    for pos, sub in _walk(t, ()):
        if isinstance(sub, Wrap):
            out.append((pos, replace_at(t, pos, sub.head)))
    return out


def _walk(t, pos: Position) -> Iterator[tuple[Position, object]]:
    yield pos, t
    match t:
        case Var() | BoundVar():
            pass
        case Lam(_, _, body):
            yield from _walk(body, pos + (0,))
        case App(fun, arg):
            yield from _walk(fun, pos + (0,))
            for i, e in enumerate(arg.elements):
                yield from _walk(e, pos + (1 + i,))
        case Wrap(head, payload):
            yield from _walk(head, pos + (0,))
            for i, e in enumerate(payload.elements):
                yield from _walk(e, pos + (1 + i,))
        case SetTerm(elements):
            for i, e in enumerate(elements):
                yield from _walk(e, pos + (i,))
        case _:
            raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Parallel reduction and complete developments


def _check_calculus(calculus: str) -> None:
    if calculus not in ("i", "im"):
        raise ValueError(f"calculus must be 'i' or 'im', not {calculus!r}")


def complete_development(t: MemTerm | SetTerm, calculus: str = "im"):
    """Simultaneous contraction of every visible redex."""
    _check_calculus(calculus)
    if calculus == "i" and not is_wrapper_free(t):
        raise IllTyped("plain development is defined on wrapper-free terms")
    return _develop(t, calculus)


def _develop(t, calculus: str):
    match t:
        case Var() | BoundVar():
            return t
        case Lam(hint, binder, body):
            return Lam(hint, binder, _develop(body, calculus))
        case App(fun, arg):
            core, wrappers = peel_wrappers(fun)
            dev_arg = _develop(arg, calculus)
            if isinstance(core, Lam):
                contracted = open_term(
                    _develop(core.body, calculus), _elements_by_type(dev_arg))
                if calculus == "i":
                    return contracted
                dev_wrappers = tuple(_develop(p, calculus) for p in wrappers)
                return apply_wrappers(Wrap(contracted, dev_arg), dev_wrappers)
            return App(_develop(fun, calculus), dev_arg)
        case Wrap(head, payload):
            return Wrap(_develop(head, calculus), _develop(payload, calculus))
        case SetTerm(elements):
            return SetTerm.of(_develop(e, calculus) for e in elements)
    raise TypeError(f"not a term: {t!r}")


def parallel_reducts(t: MemTerm | SetTerm, calculus: str = "im") -> frozenset:
    """All one-parallel-step reducts: each redex contracted or not."""
    _check_calculus(calculus)
    if calculus == "i" and not is_wrapper_free(t):
        raise IllTyped("plain parallel reduction is defined on wrapper-free terms")
    return _par_reducts(t, calculus, {})


def _par_reducts(t, calculus: str, memo: dict) -> frozenset:
    key = (id(type(t)), t)
    if key in memo:
        return memo[key]
    match t:
        case Var() | BoundVar():
            result = frozenset([t])
        case Lam(hint, binder, body):
            result = frozenset(
                Lam(hint, binder, b) for b in _par_reducts(body, calculus, memo))
        case App(fun, arg):
            args = _par_set(arg, calculus, memo)
            out = set()
            for f in _par_reducts(fun, calculus, memo):
                for a in args:
                    out.add(App(f, a))
            core, wrappers = peel_wrappers(fun)
            if isinstance(core, Lam) and (calculus == "im" or not wrappers):
                bodies = _par_reducts(core.body, calculus, memo)
                wrapper_choices = list(product(
                    *(_par_set(p, calculus, memo) for p in wrappers)))
                for b in bodies:
                    for a in args:
                        contracted = open_term(b, _elements_by_type(a))
                        if calculus == "i":
                            out.add(contracted)
                        else:
                            for ws in wrapper_choices:
                                out.add(apply_wrappers(Wrap(contracted, a), ws))
            result = frozenset(out)
        case Wrap(head, payload):
            result = frozenset(
                Wrap(h, p)
                for h in _par_reducts(head, calculus, memo)
                for p in _par_set(payload, calculus, memo))
        case SetTerm():
            result = _par_set(t, calculus, memo)
        case _:
            raise TypeError(f"not a term: {t!r}")
    memo[key] = result
    return result


def _par_set(s: SetTerm, calculus: str, memo: dict) -> frozenset:
    choices = [_par_reducts(e, calculus, memo) for e in s.elements]
    return frozenset(SetTerm.of(combo) for combo in product(*choices))


def par_reduces(t, s, calculus: str = "im") -> bool:
    """Whether s is reachable from t in one parallel step."""
    return s in parallel_reducts(t, calculus)


def random_parallel_reduct(t, rng: random.Random, calculus: str = "im"):
    """One parallel reduct sampled by a fair coin at every redex."""
    _check_calculus(calculus)
    match t:
        case Var() | BoundVar():
            return t
        case Lam(hint, binder, body):
            return Lam(hint, binder, random_parallel_reduct(body, rng, calculus))
        case App(fun, arg):
            core, wrappers = peel_wrappers(fun)
            contractible = isinstance(core, Lam) and (calculus == "im" or not wrappers)
            new_arg = SetTerm.of(
                random_parallel_reduct(e, rng, calculus) for e in arg.elements)
            if contractible and rng.random() < 0.5:
                contracted = open_term(
                    random_parallel_reduct(core.body, rng, calculus),
                    _elements_by_type(new_arg))
                if calculus == "i":
                    return contracted
                new_wrappers = tuple(
                    SetTerm.of(random_parallel_reduct(e, rng, calculus) for e in p.elements)
                    for p in wrappers)
                return apply_wrappers(Wrap(contracted, new_arg), new_wrappers)
            return App(random_parallel_reduct(fun, rng, calculus), new_arg)
        case Wrap(head, payload):
            return Wrap(
                random_parallel_reduct(head, rng, calculus),
                SetTerm.of(random_parallel_reduct(e, rng, calculus) for e in payload.elements))
        case SetTerm(elements):
            return SetTerm.of(random_parallel_reduct(e, rng, calculus) for e in elements)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Untyped beta reduction


def beta_redexes(m: UntypedTerm) -> list[Position]:
    out: list[Position] = []
    _collect_beta(m, (), out)
    return out


def _collect_beta(m: UntypedTerm, pos: Position, out: list[Position]) -> None:
    match m:
        case UVar() | UBoundVar():
            return
        case ULam(_, body):
            _collect_beta(body, pos + (0,), out)
        case UApp(fun, arg):
            if isinstance(fun, ULam):
                out.append(pos)
            _collect_beta(fun, pos + (0,), out)
            _collect_beta(arg, pos + (1,), out)
        case _:
            raise TypeError(f"not an untyped term: {m!r}")


def beta_step(m: UntypedTerm, pos: Position) -> UntypedTerm:
    node = subterm_at(m, pos)
    if not (isinstance(node, UApp) and isinstance(node.fun, ULam)):
        raise NotARedex(f"no beta redex at {list(pos)}")
    return replace_at(m, pos, uopen(node.fun.body, node.arg))


# ---------------------------------------------------------------------------
# Simulation between beta and plain annotated reduction


def simulate_beta(t: MemTerm, m: UntypedTerm, pos: Position
                  ) -> tuple[UntypedTerm, MemTerm, list[Step]]:
    """Replay the beta step of m at pos inside the refining term t.

    Contracts, one at a time, every copy in t of the redex at pos; the
    result refines the beta reduct.  Returns (reduct of m, final term,
    the non-empty step list).
    """
    if not refines(t, m):
        raise ValueError("t does not refine m")
    n = beta_step(m, pos)
    current: MemTerm = t
    steps: list[Step] = []
    while not refines(current, n):
        q = _residual_position(current, m, n, pos, ())
        assert q is not None, "mixed state without a remaining redex copy"
        nxt = step_i(current, q)
        steps.append(Step("i", q, current, nxt))
        current = nxt
    assert steps, "a beta step must have at least one copy to contract"
    return n, current, steps


def _residual_position(sub, m: UntypedTerm, n: UntypedTerm,
                       bpos: Position, at: Position) -> Position | None:
    """First (in canonical order) uncontracted copy of the redex.

    `sub` refines m except that some copies of the redex at bpos are
    already contracted toward n; returns None when none remain.
    """
    if bpos == ():
        if refines(sub, n):
            return None
        return at
    match m, n:
        case (ULam(_, mbody), ULam(_, nbody)):
            return _residual_position(sub.body, mbody, nbody, bpos[1:], at + (0,))
        case (UApp(mfun, marg), UApp(nfun, narg)):
            if bpos[0] == 0:
                return _residual_position(sub.fun, mfun, nfun, bpos[1:], at + (0,))
            for i, e in enumerate(sub.arg.elements):
                if refines(e, narg):
                    continue
                q = _residual_position(e, marg, narg, bpos[1:], at + (1 + i,))
                if q is not None:
                    return q
            return None
    raise AssertionError("redex path does not match the untyped term")


def erased_position(t: MemTerm, pos: Position) -> Position:
    """Map a position of a wrapper-free term to its erasure's position."""
    out: list[int] = []
    here = t
    for i in pos:
        match here:
            case Lam(_, _, body) if i == 0:
                out.append(0)
                here = body
            case App(fun, _) if i == 0:
                out.append(0)
                here = fun
            case App(_, arg) if 1 <= i <= len(arg.elements):
                out.append(1)
                here = arg.elements[i - 1]
            case _:
                raise ValueError(f"position {list(pos)} does not erase")
    return tuple(out)


def project_step(t: MemTerm, s: MemTerm, pos: Position, budget: int | None = None
                 ) -> tuple[UntypedTerm, MemTerm, list[Step]]:
    """Project the step t -> s at pos to a beta step on the erasure.

    Returns (beta reduct N of erase(t), a term s' with s ->* s' and
    refines(s', N), and the completing steps from s).  The completion is
    found by breadth-first search over plain reduction, smallest witness
    first; `budget` caps the number of explored terms.
    """
    m = typecheck.erase(t)
    if step_i(t, pos) != s:
        raise ValueError("s is not the step of t at pos")
    bpos = erased_position(t, pos)
    n = beta_step(m, bpos)

    if budget is None:
        copies = sum(1 for r in i_redexes(s) if _try_erased(s, r.position) == bpos)
        budget = (1 + copies) * term_size(s) + term_size(s)

    explored = 0
    seen = {s}
    queue: deque[tuple[MemTerm, tuple[Step, ...]]] = deque([(s, ())])
    while queue:
        current, steps = queue.popleft()
        explored += 1
        if refines(current, n):
            return n, current, list(steps)
        if explored >= budget:
            break
        for r in i_redexes(current):
            nxt = step_i(current, r.position)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, steps + (Step("i", r.position, current, nxt),)))
    raise SearchBudgetExceeded(
        f"no completion within {budget} explored terms")


def _try_erased(t: MemTerm, pos: Position) -> Position | None:
    try:
        return erased_position(t, pos)
    except ValueError:
        return None
