"""ASTs for types, untyped lambda terms, and set-annotated terms.

Types are strict: an arrow's domain is a finite non-empty *set* of types
(idempotent intersection as a duplicate-free set), its codomain a single
type.  Annotated terms carry a type on every variable occurrence and a
set-type on every binder; application arguments and wrapper payloads are
*set-terms*.  A wrapper node ``t [s1, ..., sn]`` records a set-term as
inert memory next to an otherwise ordinary term.

Binding is nameless: bound variables are de Bruijn indices, free
variables are names.  A binder keeps a printing hint that never takes
part in equality or hashing, so ``==`` is exactly alpha-equivalence.
All sets are kept canonical (sorted under a global structural order,
duplicates removed); the smart constructors ``SetType.of`` and
``SetTerm.of`` normalize, the dataclass constructors insist on already
canonical input.

Concrete grammar (whitespace-insensitive, application left-associative,
lambda bodies extend right, a postfix ``[...]`` wrapper attaches to the
term on its left before application grouping):

    type    := base | setty "->" type | "(" type ")"      right-assoc
    base    := lowercase identifier
    setty   := "{" type ("," type)* "}" | base | "(" type ")"
    uterm   := var | "\\" var "." uterm | uterm uterm | "(" uterm ")"
    aterm   := var "^" atype | "\\" var ":" setty "." aterm
             | aterm aarg | aterm "[" aset "]" | "(" aterm ")"
    atype   := base | "(" type ")"
    aarg    := "{" aterm ("," aterm)* "}" | var "^" atype | "(" aterm ")"
    aset    := aterm ("," aterm)*
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import InvalidPosition, ParseError

__all__ = [
    "Type", "Base", "Arrow", "SetType",
    "MemTerm", "Var", "BoundVar", "Lam", "App", "Wrap", "SetTerm",
    "UntypedTerm", "UVar", "UBoundVar", "ULam", "UApp",
    "WrapperList", "Position",
    "alpha_eq", "canonicalize", "parse", "pretty",
    "parse_type", "parse_untyped", "parse_term", "parse_set_type",
    "type_key", "term_key", "untyped_key",
    "subterm_at", "replace_at", "positions",
    "free_occurrences", "free_names", "is_wrapper_free", "type_height",
    "apply_wrappers", "peel_wrappers", "term_size", "untyped_size",
    "ufree_names",
]

Position = tuple[int, ...]


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Arrow:
    domain: "SetType"
    codomain: "Type"

    def __post_init__(self):
        if not self.domain.elements:
            raise ValueError("arrow domain must be a non-empty set-type")

    def __str__(self) -> str:
        return pretty(self)


Type = Union[Base, Arrow]


@dataclass(frozen=True)
class SetType:
    """Canonical duplicate-free sequence of types."""

    elements: tuple[Type, ...]

    def __post_init__(self):
        keys = [type_key(e) for e in self.elements]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("set-type elements must be strictly sorted")

    @staticmethod
    def of(elements: Iterable[Type]) -> "SetType":
        return SetType(_canonical_tuple(elements, type_key))

    def __contains__(self, item: Type) -> bool:
        return item in self.elements

    def __iter__(self) -> Iterator[Type]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def union(self, other: "SetType") -> "SetType":
        return SetType.of(self.elements + other.elements)

    def subset_of(self, other: "SetType") -> bool:
        return all(e in other.elements for e in self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(pretty(e) for e in self.elements) + "}"


EMPTY_SET_TYPE = SetType(())


# ---------------------------------------------------------------------------
# Annotated terms


@dataclass(frozen=True)
class Var:
    """Free variable occurrence, annotated with its type."""

    name: str
    annot: Type

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class BoundVar:
    """Bound occurrence as the de Bruijn distance to its binder."""

    index: int
    annot: Type

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Lam:
    hint: str = field(compare=False)
    binder: SetType
    body: "MemTerm"

    def __post_init__(self):
        if not self.binder.elements:
            raise ValueError("binder set-type must be non-empty")

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class App:
    fun: "MemTerm"
    arg: "SetTerm"

    def __post_init__(self):
        if not self.arg.elements:
            raise ValueError("application argument must be non-empty")

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Wrap:
    head: "MemTerm"
    payload: "SetTerm"

    def __str__(self) -> str:
        return pretty(self)


MemTerm = Union[Var, BoundVar, Lam, App, Wrap]


@dataclass(frozen=True)
class SetTerm:
    """Canonical duplicate-free (up to alpha) sequence of terms."""

    elements: tuple[MemTerm, ...]

    def __post_init__(self):
        keys = [term_key(e) for e in self.elements]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("set-term elements must be strictly sorted")

    @staticmethod
    def of(elements: Iterable[MemTerm]) -> "SetTerm":
        return SetTerm(_canonical_tuple(elements, term_key))

    def __contains__(self, item: MemTerm) -> bool:
        return item in self.elements

    def __iter__(self) -> Iterator[MemTerm]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(pretty(e) for e in self.elements) + "}"


# A wrapper list is the sequence of payloads between an abstraction and
# its argument, outermost last: apply_wrappers(t, (p, q)) == t[p][q].
WrapperList = tuple[SetTerm, ...]


# ---------------------------------------------------------------------------
# Untyped terms


@dataclass(frozen=True)
class UVar:
    name: str

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class UBoundVar:
    index: int

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class ULam:
    hint: str = field(compare=False)
    body: "UntypedTerm"

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class UApp:
    fun: "UntypedTerm"
    arg: "UntypedTerm"

    def __str__(self) -> str:
        return pretty(self)


UntypedTerm = Union[UVar, UBoundVar, ULam, UApp]


# ---------------------------------------------------------------------------
# Global structural order

def type_key(t: Type):
    match t:
        case Base(name):
            return (0, name)
        case Arrow(domain, codomain):
            return (1, settype_key(domain), type_key(codomain))
    raise TypeError(f"not a type: {t!r}")


def settype_key(s: SetType):
    return tuple(type_key(e) for e in s.elements)


def term_key(t: MemTerm):
    match t:
        case BoundVar(index, annot):
            return (0, index, type_key(annot))
        case Var(name, annot):
            return (1, name, type_key(annot))
        case Lam(_, binder, body):
            return (2, settype_key(binder), term_key(body))
        case App(fun, arg):
            return (3, term_key(fun), setterm_key(arg))
        case Wrap(head, payload):
            return (4, term_key(head), setterm_key(payload))
    raise TypeError(f"not a term: {t!r}")


def setterm_key(s: SetTerm):
    return tuple(term_key(e) for e in s.elements)


def untyped_key(t: UntypedTerm):
    match t:
        case UBoundVar(index):
            return (0, index)
        case UVar(name):
            return (1, name)
        case ULam(_, body):
            return (2, untyped_key(body))
        case UApp(fun, arg):
            return (3, untyped_key(fun), untyped_key(arg))
    raise TypeError(f"not an untyped term: {t!r}")


def _canonical_tuple(elements, key):
    out = []
    for e in sorted(elements, key=key):
        if not out or out[-1] != e:
            out.append(e)
    return tuple(out)


def type_height(t: Type | SetType) -> int:
    """Arrow nesting depth: bases are 0, an arrow is 1 + max of its sides.

    A set-type takes the max over its elements, 0 when empty (empty
    set-types occur only as wrapper payload types).
    """
    match t:
        case Base():
            return 0
        case Arrow(domain, codomain):
            return 1 + max(type_height(domain), type_height(codomain))
        case SetType(elements):
            return max((type_height(e) for e in elements), default=0)
    raise TypeError(f"not a type: {t!r}")


def canonicalize(elements: Iterable[Type] | Iterable[MemTerm]) -> SetType | SetTerm:
    """Sort and deduplicate into a SetType or SetTerm, by element kind."""
    items = list(elements)
    if isinstance(items[0] if items else None, (Base, Arrow)):
        return SetType.of(items)
    if items and isinstance(items[0], (Var, BoundVar, Lam, App, Wrap)):
        return SetTerm.of(items)
    raise ValueError("cannot infer set kind from elements")


def alpha_eq(x, y) -> bool:
    """Equality up to bound-variable renaming; annotations compared exactly."""
    return x == y


# ---------------------------------------------------------------------------
# Queries


def is_wrapper_free(t: MemTerm | SetTerm) -> bool:
    match t:
        case Wrap():
            return False
        case Var() | BoundVar():
            return True
        case Lam(_, _, body):
            return is_wrapper_free(body)
        case App(fun, arg):
            return is_wrapper_free(fun) and is_wrapper_free(arg)
        case SetTerm(elements):
            return all(is_wrapper_free(e) for e in elements)
    raise TypeError(f"not a term: {t!r}")


def free_occurrences(t: MemTerm | SetTerm) -> Iterator[tuple[str, Type]]:
    """Yield (name, annotation) for every free occurrence, in term order."""
    match t:
        case Var(name, annot):
            yield (name, annot)
        case BoundVar():
            pass
        case Lam(_, _, body):
            yield from free_occurrences(body)
        case App(fun, arg):
            yield from free_occurrences(fun)
            yield from free_occurrences(arg)
        case Wrap(head, payload):
            yield from free_occurrences(head)
            yield from free_occurrences(payload)
        case SetTerm(elements):
            for e in elements:
                yield from free_occurrences(e)
        case _:
            raise TypeError(f"not a term: {t!r}")


def free_names(t: MemTerm | SetTerm) -> set[str]:
    return {name for name, _ in free_occurrences(t)}


def ufree_names(t: UntypedTerm) -> set[str]:
    match t:
        case UVar(name):
            return {name}
        case UBoundVar():
            return set()
        case ULam(_, body):
            return ufree_names(body)
        case UApp(fun, arg):
            return ufree_names(fun) | ufree_names(arg)
    raise TypeError(f"not an untyped term: {t!r}")


def term_size(t: MemTerm | SetTerm) -> int:
    match t:
        case Var() | BoundVar():
            return 1
        case Lam(_, _, body):
            return 1 + term_size(body)
        case App(fun, arg):
            return 1 + term_size(fun) + term_size(arg)
        case Wrap(head, payload):
            return 1 + term_size(head) + term_size(payload)
        case SetTerm(elements):
            return sum(term_size(e) for e in elements)
    raise TypeError(f"not a term: {t!r}")


def untyped_size(t: UntypedTerm) -> int:
    match t:
        case UVar() | UBoundVar():
            return 1
        case ULam(_, body):
            return 1 + untyped_size(body)
        case UApp(fun, arg):
            return 1 + untyped_size(fun) + untyped_size(arg)
    raise TypeError(f"not an untyped term: {t!r}")


def apply_wrappers(t: MemTerm, wrappers: WrapperList) -> MemTerm:
    for payload in wrappers:
        t = Wrap(t, payload)
    return t


def peel_wrappers(t: MemTerm) -> tuple[MemTerm, WrapperList]:
    """Split t into its wrapper-less core and the wrapper list around it."""
    wrappers: list[SetTerm] = []
    while isinstance(t, Wrap):
        wrappers.append(t.payload)
        t = t.head
    return t, tuple(reversed(wrappers))


# ---------------------------------------------------------------------------
# Positions
#
# Children: abstraction body = 0; application fun = 0, arg element i =
# 1+i; wrapper head = 0, payload element i = 1+i; for a top-level set,
# element i = i.  Set elements are indexed in canonical order.


def _children(t) -> list:
    match t:
        case Var() | BoundVar() | UVar() | UBoundVar():
            return []
        case Lam(_, _, body) | ULam(_, body):
            return [body]
        case App(fun, arg):
            return [fun, *arg.elements]
        case UApp(fun, arg):
            return [fun, arg]
        case Wrap(head, payload):
            return [head, *payload.elements]
        case SetTerm(elements):
            return list(elements)
    raise TypeError(f"not a term: {t!r}")


def subterm_at(t, pos: Position):
    here = t
    for step, i in enumerate(pos):
        kids = _children(here)
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"no child {i} at {list(pos[:step])}")
        here = kids[i]
    return here


def replace_at(t, pos: Position, new):
    """Rebuild t with the subterm at pos replaced; sets re-canonicalize."""
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    match t:
        case Lam(hint, binder, body):
            if i != 0:
                raise InvalidPosition(f"no child {i} under a binder")
            return Lam(hint, binder, replace_at(body, rest, new))
        case ULam(hint, body):
            if i != 0:
                raise InvalidPosition(f"no child {i} under a binder")
            return ULam(hint, replace_at(body, rest, new))
        case App(fun, arg):
            if i == 0:
                return App(replace_at(fun, rest, new), arg)
            if 1 <= i <= len(arg.elements):
                return App(fun, _replace_element(arg, i - 1, rest, new))
            raise InvalidPosition(f"no child {i} of an application")
        case UApp(fun, arg):
            if i == 0:
                return UApp(replace_at(fun, rest, new), arg)
            if i == 1:
                return UApp(fun, replace_at(arg, rest, new))
            raise InvalidPosition(f"no child {i} of an application")
        case Wrap(head, payload):
            if i == 0:
                return Wrap(replace_at(head, rest, new), payload)
            if 1 <= i <= len(payload.elements):
                return Wrap(head, _replace_element(payload, i - 1, rest, new))
            raise InvalidPosition(f"no child {i} of a wrapper")
        case SetTerm(elements):
            if 0 <= i < len(elements):
                return _replace_element(t, i, rest, new)
            raise InvalidPosition(f"no element {i} of a set-term")
    raise InvalidPosition(f"no child {i} of a leaf")


def _replace_element(s: SetTerm, i: int, rest: Position, new) -> SetTerm:
    elements = list(s.elements)
    elements[i] = replace_at(elements[i], rest, new)
    return SetTerm.of(elements)


def positions(t) -> Iterator[Position]:
    """All positions of t in lexicographic (pre-)order."""
    yield ()
    for i, child in enumerate(_children(t)):
        for p in positions(child):
            yield (i, *p)


# ---------------------------------------------------------------------------
# Printing


def pretty(x) -> str:
    """Canonical text form; parse(pretty(x)) is alpha-equal to x."""
    match x:
        case Base() | Arrow():
            return _pretty_type(x)
        case SetType():
            return "{" + ", ".join(_pretty_type(e) for e in x.elements) + "}"
        case SetTerm():
            return "{" + ", ".join(_pretty_term(e, [], False) for e in x.elements) + "}"
        case Var() | BoundVar() | Lam() | App() | Wrap():
            return _pretty_term(x, [], False)
        case UVar() | UBoundVar() | ULam() | UApp():
            return _pretty_untyped(x, [], 0)
    raise TypeError(f"cannot print {x!r}")


def _pretty_type(t: Type) -> str:
    match t:
        case Base(name):
            return name
        case Arrow(domain, codomain):
            return f"{_pretty_domain(domain)} -> {_pretty_type(codomain)}"
    raise TypeError(f"not a type: {t!r}")


def _pretty_domain(s: SetType) -> str:
    if len(s.elements) == 1:
        only = s.elements[0]
        if isinstance(only, Base):
            return only.name
        return f"({_pretty_type(only)})"
    return "{" + ", ".join(_pretty_type(e) for e in s.elements) + "}"


def _pretty_annot(a: Type) -> str:
    if isinstance(a, Base):
        return a.name
    return f"({_pretty_type(a)})"


_IDENT = re.compile(r"[a-z][A-Za-z0-9_']*\Z")


def _pick_name(hint: str, used: set[str]) -> str:
    base = hint if _IDENT.match(hint) else "x"
    if base not in used:
        return base
    n = 0
    while f"{base}{n}" in used:
        n += 1
    return f"{base}{n}"


def _pretty_term(t: MemTerm, env: list[str], fun_pos: bool) -> str:
    # fun_pos: printed as the function of an application or the head of
    # a wrapper, where a lambda needs parentheses.
    match t:
        case Var(name, annot):
            return f"{name}^{_pretty_annot(annot)}"
        case BoundVar(index, annot):
            name = env[-1 - index] if index < len(env) else f"?{index - len(env)}"
            return f"{name}^{_pretty_annot(annot)}"
        case Lam(hint, binder, body):
            used = free_names(body) | set(env)
            name = _pick_name(hint, used)
            binder_s = "{" + ", ".join(_pretty_type(e) for e in binder.elements) + "}"
            body_s = _pretty_term(body, env + [name], False)
            s = f"\\{name}:{binder_s}. {body_s}"
            return f"({s})" if fun_pos else s
        case App(fun, arg):
            fun_s = _pretty_term(fun, env, True)
            if len(arg.elements) == 1 and isinstance(arg.elements[0], (Var, BoundVar)):
                return f"{fun_s} {_pretty_term(arg.elements[0], env, False)}"
            inner = ", ".join(_pretty_term(e, env, False) for e in arg.elements)
            return f"{fun_s} {{{inner}}}"
        case Wrap(head, payload):
            head_s = _pretty_term(head, env, True)
            inner = ", ".join(_pretty_term(e, env, False) for e in payload.elements)
            return f"{head_s} [{inner}]"
    raise TypeError(f"not a term: {t!r}")


def _pretty_untyped(t: UntypedTerm, env: list[str], prec: int) -> str:
    # prec 0: anywhere; 1: function position; 2: argument position.
    match t:
        case UVar(name):
            return name
        case UBoundVar(index):
            return env[-1 - index] if index < len(env) else f"?{index - len(env)}"
        case ULam(hint, body):
            used = ufree_names(body) | set(env)
            name = _pick_name(hint, used)
            s = f"\\{name}. {_pretty_untyped(body, env + [name], 0)}"
            return f"({s})" if prec >= 1 else s
        case UApp(fun, arg):
            s = f"{_pretty_untyped(fun, env, 1)} {_pretty_untyped(arg, env, 2)}"
            return f"({s})" if prec >= 2 else s
    raise TypeError(f"not an untyped term: {t!r}")


# ---------------------------------------------------------------------------
# Parsing


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<name>[a-z][A-Za-z0-9_']*)"
    r"|(?P<sym>[\\.:,^(){}\[\]])"
)


class _Tokens:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, int, int]] = []
        line, col = 1, 1
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            value = m.group(0)
            if m.lastgroup != "ws":
                self.tokens.append((value, line, col))
            newlines = value.count("\n")
            if newlines:
                line += newlines
                col = len(value) - value.rfind("\n")
            else:
                col += len(value)
            pos = m.end()
        self.tokens.append(("", line, col))  # end marker
        self.index = 0

    def peek(self) -> str:
        return self.tokens[self.index][0]

    def next(self) -> str:
        value, _, _ = self.tokens[self.index]
        self.index += 1
        return value

    def expect(self, token: str) -> None:
        value, line, col = self.tokens[self.index]
        if value != token:
            shown = value if value else "end of input"
            raise ParseError(f"expected {token!r}, found {shown!r}", line, col)
        self.index += 1

    def error(self, message: str):
        _, line, col = self.tokens[self.index]
        raise ParseError(message, line, col)

    def name(self) -> str:
        value, line, col = self.tokens[self.index]
        if not value or not value[0].isalpha():
            shown = value if value else "end of input"
            raise ParseError(f"expected identifier, found {shown!r}", line, col)
        self.index += 1
        return value

    def at_name(self) -> bool:
        value = self.peek()
        return bool(value) and value[0].isalpha()

    def done(self) -> bool:
        return self.peek() == ""


def parse(text: str, kind: str) -> Type | UntypedTerm | MemTerm:
    """Parse text as a "type", "untyped" term, or "annotated" term.

    Non-canonical set syntax is accepted and canonicalized.
    """
    toks = _Tokens(text)
    match kind:
        case "type":
            result = _parse_type(toks)
        case "untyped":
            result = _parse_untyped(toks, [])
        case "annotated":
            result = _parse_aterm(toks, [])
        case _:
            raise ValueError(f"unknown parse kind {kind!r}")
    if not toks.done():
        toks.error(f"trailing input {toks.peek()!r}")
    return result


def parse_type(text: str) -> Type:
    return parse(text, "type")


def parse_untyped(text: str) -> UntypedTerm:
    return parse(text, "untyped")


def parse_term(text: str) -> MemTerm:
    return parse(text, "annotated")


def parse_set_type(text: str) -> SetType:
    """A braced or bare set-type, e.g. "{a, b -> c}"."""
    toks = _Tokens(text)
    result = _parse_settype(toks)
    if not toks.done():
        toks.error(f"trailing input {toks.peek()!r}")
    return result


def _parse_type(toks: _Tokens) -> Type:
    domain = _parse_settype_atom(toks)
    if toks.peek() == "->":
        toks.next()
        return Arrow(domain, _parse_type(toks))
    if len(domain.elements) != 1:
        toks.error("a braced set of types must be followed by ->")
    return domain.elements[0]


def _parse_settype_atom(toks: _Tokens) -> SetType:
    if toks.peek() == "{":
        toks.next()
        elements = [_parse_type(toks)]
        while toks.peek() == ",":
            toks.next()
            elements.append(_parse_type(toks))
        toks.expect("}")
        return SetType.of(elements)
    if toks.peek() == "(":
        toks.next()
        inner = _parse_type(toks)
        toks.expect(")")
        return SetType.of([inner])
    return SetType.of([Base(toks.name())])


def _parse_settype(toks: _Tokens) -> SetType:
    if toks.peek() == "{":
        toks.next()
        elements = [_parse_type(toks)]
        while toks.peek() == ",":
            toks.next()
            elements.append(_parse_type(toks))
        toks.expect("}")
        if toks.peek() == "->":  # the braces were an arrow domain: bare type
            toks.next()
            return SetType.of([Arrow(SetType.of(elements), _parse_type(toks))])
        return SetType.of(elements)
    return SetType.of([_parse_type(toks)])


def _parse_annot(toks: _Tokens) -> Type:
    if toks.peek() == "(":
        toks.next()
        inner = _parse_type(toks)
        toks.expect(")")
        return inner
    return Base(toks.name())


def _parse_untyped(toks: _Tokens, env: list[str]) -> UntypedTerm:
    if toks.peek() == "\\":
        toks.next()
        name = toks.name()
        toks.expect(".")
        return ULam(name, _parse_untyped(toks, env + [name]))
    term = _parse_untyped_atom(toks, env)
    while toks.at_name() or toks.peek() == "(":
        term = UApp(term, _parse_untyped_atom(toks, env))
    return term


def _parse_untyped_atom(toks: _Tokens, env: list[str]) -> UntypedTerm:
    if toks.peek() == "(":
        toks.next()
        inner = _parse_untyped(toks, env)
        toks.expect(")")
        return inner
    name = toks.name()
    return _lookup_untyped(name, env)


def _lookup_untyped(name: str, env: list[str]) -> UntypedTerm:
    for depth, binder in enumerate(reversed(env)):
        if binder == name:
            return UBoundVar(depth)
    return UVar(name)


def _parse_aterm(toks: _Tokens, env: list[str]) -> MemTerm:
    if toks.peek() == "\\":
        toks.next()
        name = toks.name()
        toks.expect(":")
        binder = _parse_settype(toks)
        toks.expect(".")
        return Lam(name, binder, _parse_aterm(toks, env + [name]))
    term = _parse_aterm_atom(toks, env)
    while True:
        if toks.at_name() or toks.peek() == "(":
            term = App(term, SetTerm.of([_parse_aterm_atom(toks, env)]))
        elif toks.peek() == "{":
            toks.next()
            elements = [_parse_aterm(toks, env)]
            while toks.peek() == ",":
                toks.next()
                elements.append(_parse_aterm(toks, env))
            toks.expect("}")
            term = App(term, SetTerm.of(elements))
        elif toks.peek() == "[":
            toks.next()
            elements = [_parse_aterm(toks, env)]
            while toks.peek() == ",":
                toks.next()
                elements.append(_parse_aterm(toks, env))
            toks.expect("]")
            term = Wrap(term, SetTerm.of(elements))
        else:
            return term


def _parse_aterm_atom(toks: _Tokens, env: list[str]) -> MemTerm:
    if toks.peek() == "(":
        toks.next()
        inner = _parse_aterm(toks, env)
        toks.expect(")")
        return inner
    name = toks.name()
    toks.expect("^")
    annot = _parse_annot(toks)
    for depth, binder in enumerate(reversed(env)):
        if binder == name:
            return BoundVar(depth, annot)
    return Var(name, annot)
