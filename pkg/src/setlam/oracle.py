"""Brute-force ground truth: reduction graphs, normal forms, SN checks,
and the constructive typing of strongly normalizing untyped terms.

Everything here is budgeted exploration or plain recursion over the
inductive structure of strongly normalizing terms (a term is either a
variable applied to strongly normalizing arguments, an abstraction with
a strongly normalizing body, or a head redex whose contractum and
argument are both strongly normalizing).  `infer_sn` follows that
structure to build an annotated refinement of any strongly normalizing
untyped term, re-checking its own output on every call.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .binding import close_term, locally_closed, subst_free, uopen
from .errors import (
    CycleDetected, FuelExhausted, IllTyped, NotSNWithinFuel,
)
from .syntax import (
    App, Arrow, Base, Lam, MemTerm, Position, SetTerm, SetType,
    Type, UApp, UBoundVar, ULam, UntypedTerm, UVar, Var, pretty,
    term_key, ufree_names,
)
from .reduction import (
    beta_redexes, beta_step, i_redexes, redexes, step_i, step_im,
)
from .typecheck import TypingContext, check, refines, synthesize_type

__all__ = [
    "Fuel", "ReductionGraph", "InferredTyping",
    "explore", "normal_form", "longest_chain", "is_sn",
    "head_subject_expansion", "infer_sn",
    "graph_to_dot", "graph_to_json_dict",
]


@dataclass(frozen=True)
class Fuel:
    max_nodes: int = 10_000
    max_depth: int = 10_000


DEFAULT_FUEL = Fuel()


@dataclass(frozen=True)
class ReductionGraph:
    calculus: str
    nodes: tuple
    edges: tuple[tuple[int, Position, int], ...]
    truncated: bool
    root: int = 0

    @property
    def node_count(self) -> int:
        return len(self.nodes)


def _successors(t, calculus: str):
    match calculus:
        case "beta":
            return [(pos, beta_step(t, pos)) for pos in beta_redexes(t)]
        case "i":
            return [(r.position, step_i(t, r.position)) for r in i_redexes(t)]
        case "im":
            return [(r.position, step_im(t, r.position)) for r in redexes(t)]
    raise ValueError(f"calculus must be beta, i, or im, not {calculus!r}")


def explore(t, calculus: str, fuel: Fuel = DEFAULT_FUEL) -> ReductionGraph:
    """Breadth-first closure of t under single steps, up to fuel.

    Nodes are terms (alpha-variants collapse by the nameless
    representation); truncation is flagged, never raised.
    """
    index = {t: 0}
    nodes = [t]
    edges: list[tuple[int, Position, int]] = []
    queue = deque([(0, 0)])
    truncated = False
    while queue:
        i, depth = queue.popleft()
        if depth >= fuel.max_depth:
            truncated = True
            continue
        for pos, nxt in _successors(nodes[i], calculus):
            j = index.get(nxt)
            if j is None:
                if len(nodes) >= fuel.max_nodes:
                    truncated = True
                    continue
                j = len(nodes)
                index[nxt] = j
                nodes.append(nxt)
                queue.append((j, depth + 1))
            edges.append((i, pos, j))
    return ReductionGraph(calculus, tuple(nodes), tuple(edges), truncated)


def normal_form(t, calculus: str, fuel: Fuel = DEFAULT_FUEL):
    """Iterate leftmost-innermost steps to a redex-free term."""
    for _ in range(fuel.max_depth):
        successors = _successors(t, calculus)
        if not successors:
            return t
        innermost = [
            (pos, nxt) for pos, nxt in successors
            if not any(q != pos and q[:len(pos)] == pos for q, _ in successors)
        ]
        t = min(innermost)[1]
    raise FuelExhausted(f"no normal form within {fuel.max_depth} steps")


def _has_cycle(graph: ReductionGraph) -> bool:
    out: list[list[int]] = [[] for _ in graph.nodes]
    for i, _, j in graph.edges:
        out[i].append(j)
    state = [0] * len(graph.nodes)  # 0 unseen, 1 on stack, 2 done
    for start in range(len(graph.nodes)):
        if state[start]:
            continue
        stack = [(start, iter(out[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if state[nxt] == 1:
                    return True
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(out[nxt])))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return False


def longest_chain(t, calculus: str, fuel: Fuel = DEFAULT_FUEL) -> int:
    """Length of the longest reduction sequence from t."""
    graph = explore(t, calculus, fuel)
    if graph.truncated:
        raise FuelExhausted(f"graph exceeds {fuel.max_nodes} nodes")
    if _has_cycle(graph):
        raise CycleDetected("the reduction graph has a cycle")
    out: list[list[int]] = [[] for _ in graph.nodes]
    for i, _, j in graph.edges:
        out[i].append(j)
    longest: dict[int, int] = {}

    def depth(i: int) -> int:
        if i not in longest:
            longest[i] = -1  # sentinel; acyclicity already established
            longest[i] = max((1 + depth(j) for j in out[i]), default=0)
        return longest[i]

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(graph.nodes) * 2 + 100))
    try:
        return depth(graph.root)
    finally:
        sys.setrecursionlimit(old)


def is_sn(m: UntypedTerm, fuel: Fuel = DEFAULT_FUEL) -> str:
    """"yes" if the beta graph closes acyclically within fuel, "no" if a
    cycle is reachable, "unknown" on truncation."""
    graph = explore(m, "beta", fuel)
    if _has_cycle(graph):
        return "no"
    return "unknown" if graph.truncated else "yes"


# ---------------------------------------------------------------------------
# Typability of strongly normalizing terms


def head_subject_expansion(body: MemTerm, name: str, binder: SetType,
                           arg: SetTerm, args: list[SetTerm],
                           context: TypingContext) -> MemTerm:
    """Reassemble ``(\\name:binder. body) arg args...`` and re-check it.

    The substituted form ``body{name := arg} args...`` must be typable
    under the context; the reassembled application then has the same
    type (head subject expansion), which is verified rather than
    trusted.
    """
    by_type = {synthesize_type(e): e for e in arg.elements}
    substituted = subst_free(body, name, by_type)
    for a in args:
        substituted = App(substituted, a)
    expected = check(context, substituted)
    expanded: MemTerm = App(Lam(name, binder, close_term(body, name)), arg)
    for a in args:
        expanded = App(expanded, a)
    actual = check(context, expanded)
    if actual != expected:
        raise IllTyped(
            f"expansion changed the type: {pretty(expected)} -> {pretty(actual)}")
    return expanded


@dataclass(frozen=True)
class InferredTyping:
    term: MemTerm
    context: TypingContext
    type_: Type


class _FreshNames:
    """Deterministic fresh bases b0, b1, ... and variables v0, v1, ...

    Variable names avoid every name free in the inference's input.
    """

    def __init__(self, avoid: set[str]):
        self.avoid = avoid
        self.base_counter = 0
        self.var_counter = 0

    def base(self) -> Base:
        name = f"b{self.base_counter}"
        self.base_counter += 1
        return Base(name)

    def var(self) -> str:
        while True:
            name = f"v{self.var_counter}"
            self.var_counter += 1
            if name not in self.avoid:
                return name


class _FuelMeter:
    def __init__(self, amount: int):
        self.left = amount

    def tick(self) -> None:
        if self.left <= 0:
            raise NotSNWithinFuel("inference fuel exhausted")
        self.left -= 1


def infer_sn(m: UntypedTerm, fuel: Fuel = DEFAULT_FUEL) -> InferredTyping:
    """Type a strongly normalizing untyped term by its SN structure.

    Produces an annotated refinement together with a context and type it
    checks at.  Head redexes are handled by inferring the contractum,
    un-substituting the argument copies (same-typed copies unified to
    one representative) and rebuilding through head subject expansion.
    The result is re-verified on every call; fresh base types are drawn
    deterministically per run.
    """
    import sys
    fresh = _FreshNames(set(ufree_names(m)))
    meter = _FuelMeter(fuel.max_nodes)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20_000))
    try:
        return _infer(m, fresh, meter)
    except RecursionError:
        raise NotSNWithinFuel("inference recursion exceeded the interpreter stack") from None
    finally:
        sys.setrecursionlimit(old_limit)


def _spine(m: UntypedTerm) -> tuple[UntypedTerm, list[UntypedTerm]]:
    args: list[UntypedTerm] = []
    while isinstance(m, UApp):
        args.append(m.arg)
        m = m.fun
    return m, list(reversed(args))


def _infer(m: UntypedTerm, fresh: _FreshNames, meter: _FuelMeter) -> InferredTyping:
    meter.tick()
    head, args = _spine(m)
    match head:
        case UVar(name):
            result = _infer_head_variable(name, args, fresh, meter)
        case ULam(hint, body) if not args:
            result = _infer_abstraction(hint, body, fresh, meter)
        case ULam(hint, body):
            result = _infer_head_redex(hint, body, args[0], args[1:], fresh, meter)
        case UBoundVar():
            raise AssertionError("inference input must be locally closed")
        case _:
            raise TypeError(f"not an untyped term: {m!r}")
    if not refines(result.term, m):
        raise AssertionError("inference produced a non-refinement")
    if check(result.context, result.term) != result.type_:
        raise AssertionError("inference produced an ill-typed term")
    return result


def _infer_head_variable(name: str, args: list[UntypedTerm],
                         fresh: _FreshNames, meter: _FuelMeter) -> InferredTyping:
    inferred = [_infer(a, fresh, meter) for a in args]
    result_type: Type = fresh.base()
    head_type = result_type
    for sub in reversed(inferred):
        head_type = Arrow(SetType.of([sub.type_]), head_type)
    term: MemTerm = Var(name, head_type)
    for sub in inferred:
        term = App(term, SetTerm.of([sub.term]))
    context = TypingContext.of([(name, SetType.of([head_type]))])
    for sub in inferred:
        context = context.union(sub.context)
    return InferredTyping(term, context, result_type)


def _infer_abstraction(hint: str, body: UntypedTerm,
                       fresh: _FreshNames, meter: _FuelMeter) -> InferredTyping:
    opened_name = fresh.var()
    sub = _infer(uopen(body, UVar(opened_name)), fresh, meter)
    binder = sub.context.get(opened_name)
    if not binder.elements:
        binder = SetType.of([fresh.base()])  # vacuous binder must be non-empty
    term = Lam(hint, binder, close_term(sub.term, opened_name))
    return InferredTyping(
        term, sub.context.without(opened_name), Arrow(binder, sub.type_))


def _infer_head_redex(hint: str, body: UntypedTerm, arg: UntypedTerm,
                      rest: list[UntypedTerm], fresh: _FreshNames,
                      meter: _FuelMeter) -> InferredTyping:
    contractum = uopen(body, arg)
    for a in rest:
        contractum = UApp(contractum, a)
    whole = _infer(contractum, fresh, meter)
    arg_typing = _infer(arg, fresh, meter)

    # Split the inferred term along the argument spine.
    spine_args: list[SetTerm] = []
    head_term = whole.term
    for _ in rest:
        assert isinstance(head_term, App)
        spine_args.append(head_term.arg)
        head_term = head_term.fun
    spine_args.reverse()

    opened_name = fresh.var()
    unsubstituted, copies = _unsubstitute(head_term, body, UVar(opened_name), 0)
    if copies:
        by_type: dict[Type, MemTerm] = {}
        for copy in copies:
            assert locally_closed(copy), "argument copy escapes its binders"
            copy_type = synthesize_type(copy)
            if copy_type not in by_type or term_key(copy) < term_key(by_type[copy_type]):
                by_type[copy_type] = copy
        binder = SetType.of(by_type)
        substituents = SetTerm.of(by_type.values())
        context = whole.context
    else:
        binder = SetType.of([arg_typing.type_])
        substituents = SetTerm.of([arg_typing.term])
        context = whole.context.union(arg_typing.context)

    # Unifying same-typed copies may have changed subterms of the body;
    # head subject expansion re-checks the reassembled term.
    expanded = head_subject_expansion(
        unsubstituted, opened_name, binder, substituents, list(spine_args), context)
    expanded = _rename_binder(expanded, hint)
    return InferredTyping(expanded, context, whole.type_)


def _rename_binder(expanded: MemTerm, hint: str) -> MemTerm:
    # Restore the original binder hint on the rebuilt head abstraction.
    head = expanded
    spine: list[SetTerm] = []
    while isinstance(head, App):
        spine.append(head.arg)
        head = head.fun
    assert isinstance(head, Lam)
    head = Lam(hint, head.binder, head.body)
    for arg in reversed(spine):
        head = App(head, arg)
    return head


def _unsubstitute(term, pattern: UntypedTerm, variable: UVar, depth: int):
    """Rewrite, at every position where `pattern` has the bound variable
    `depth`, the corresponding subterm of `term` into an occurrence of
    `variable`; collect the displaced subterms."""
    match pattern:
        case UBoundVar(index) if index == depth:
            return Var(variable.name, synthesize_type(term)), [term]
        case UBoundVar() | UVar():
            return term, []
        case ULam(_, pbody):
            assert isinstance(term, Lam)
            new_body, copies = _unsubstitute(term.body, pbody, variable, depth + 1)
            return Lam(term.hint, term.binder, new_body), copies
        case UApp(pfun, parg):
            assert isinstance(term, App)
            new_fun, copies = _unsubstitute(term.fun, pfun, variable, depth)
            new_elements = []
            for e in term.arg.elements:
                new_e, more = _unsubstitute(e, parg, variable, depth)
                new_elements.append(new_e)
                copies.extend(more)
            return App(new_fun, SetTerm.of(new_elements)), copies
    raise TypeError(f"not an untyped term: {pattern!r}")


# ---------------------------------------------------------------------------
# Graph export


def _label(t) -> str:
    return pretty(t)


def graph_to_dot(graph: ReductionGraph) -> str:
    lines = ["digraph reduction {", "  rankdir=TB;"]
    for i, node in enumerate(graph.nodes):
        label = _label(node).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}"];')
    for i, pos, j in graph.edges:
        label = ",".join(map(str, pos))
        lines.append(f'  n{i} -> n{j} [label="[{label}]"];')
    if graph.truncated:
        lines.append('  truncated [shape=plaintext, label="(truncated)"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json_dict(graph: ReductionGraph) -> dict:
    return {
        "formatVersion": 1,
        "calculus": graph.calculus,
        "root": graph.root,
        "truncated": graph.truncated,
        "nodeCount": graph.node_count,
        "nodes": [_label(n) for n in graph.nodes],
        "edges": [
            {"from": i, "position": list(pos), "to": j}
            for i, pos, j in graph.edges
        ],
    }
