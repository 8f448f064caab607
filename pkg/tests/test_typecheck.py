"""Synthesis, checking, minimal contexts, derivations, refinement."""

import json
import random

import pytest

from setlam import (
    Base, InvalidDerivation, NotTypable, NotUniform, SetTerm, SetType,
    TypingContext, UnboundOrWrongAnnotation, Var, check, check_curry,
    decorate, derivation_from_json, derivation_to_json, erase,
    erase_derivation, is_uniform, minimal_context, parse_set_type,
    parse_term, parse_type, parse_untyped, pretty, refines, set_type_of,
    synthesize_type, step_i,
)
from setlam.typecheck import canonical_derivation

import corpus

SELFAPP = parse_term(corpus.SELF_APPLICATION)

SELFAPP_DERIVATION = {
    "rule": "intro", "ctx": {}, "term": "\\x. x x",
    "type": "{{a,b}->c, a, b} -> c",
    "premises": [{
        "rule": "elim", "ctx": {"x": ["{a,b}->c", "a", "b"]},
        "term": "x x", "type": "c",
        "premises": [
            {"rule": "var", "ctx": {"x": ["{a,b}->c", "a", "b"]},
             "term": "x", "type": "{a,b}->c"},
            {"rule": "many", "ctx": {"x": ["{a,b}->c", "a", "b"]},
             "term": "x", "type": ["a", "b"],
             "premises": [
                 {"rule": "var", "ctx": {"x": ["{a,b}->c", "a", "b"]},
                  "term": "x", "type": "a"},
                 {"rule": "var", "ctx": {"x": ["{a,b}->c", "a", "b"]},
                  "term": "x", "type": "b"},
             ]},
        ],
    }],
}


# --- synthesis --------------------------------------------------------------

def test_synthesize_identity():
    assert synthesize_type(parse_term("\\x:{a}. x^a")) == parse_type("{a} -> a")
    assert pretty(synthesize_type(parse_term("\\x:{a}. x^a"))) == "a -> a"


def test_synthesize_self_application():
    assert synthesize_type(SELFAPP) == parse_type("{{a,b}->c, a, b} -> c")


def test_synthesize_non_arrow_application():
    with pytest.raises(NotTypable):
        synthesize_type(parse_term("x^a {y^a}"))


def test_synthesize_rejects_duplicate_element_types():
    with pytest.raises(NotTypable):
        synthesize_type(parse_term("x^({a} -> b) {y^a, z^a}"))


def test_synthesize_rejects_annotation_outside_binder():
    with pytest.raises(NotTypable):
        synthesize_type(parse_term("\\x:{a}. x^b"))


def test_synthesize_wrapper_payload_checked():
    assert synthesize_type(parse_term("y^a [z^b]")) == Base("a")
    with pytest.raises(NotTypable):
        synthesize_type(parse_term("y^a [z^b w^c]"))


def test_set_type_of_bijection():
    s = SetTerm.of([parse_term("x^a"), parse_term("x^b")])
    assert set_type_of(s) == parse_set_type("{a, b}")


# --- check ------------------------------------------------------------------

def test_check_var_in_context():
    ctx = TypingContext.of({"x": parse_set_type("{a, b}")})
    assert check(ctx, parse_term("x^a")) == Base("a")


def test_check_unbound():
    with pytest.raises(UnboundOrWrongAnnotation):
        check(TypingContext(), parse_term("x^a"))


def test_check_self_application_body():
    ctx = TypingContext.of({"x": parse_set_type("{{a,b}->c, a, b}")})
    assert check(ctx, parse_term("x^({a,b}->c) {x^a, x^b}")) == Base("c")


def test_check_wrong_annotation():
    ctx = TypingContext.of({"x": parse_set_type("{b}")})
    with pytest.raises(UnboundOrWrongAnnotation):
        check(ctx, parse_term("x^a"))


# --- minimal context --------------------------------------------------------

def test_minimal_context_application():
    assert minimal_context(parse_term("x^(a -> a) {y^a}")) == TypingContext.of({
        "x": parse_set_type("{a} -> a"),
        "y": parse_set_type("{a}"),
    })


def test_minimal_context_closed():
    assert minimal_context(parse_term("\\x:{a}. x^a")) == TypingContext()


def test_minimal_context_set_union():
    s = SetTerm.of([parse_term("x^a"), parse_term("x^b")])
    groups = minimal_context(s)
    assert groups == TypingContext.of({"x": parse_set_type("{a, b}")})


def test_minimal_context_is_least(corpus):
    for entry in corpus[:50]:
        mc = minimal_context(entry.term)
        assert check(mc, entry.term) == synthesize_type(entry.term)
        assert mc.subset_of(entry.context)


def test_weakening_by_random_extension(corpus):
    rng = random.Random(7)
    extra = parse_set_type("{z4 -> z5}")
    for entry in corpus[:60]:
        ty = check(entry.context, entry.term)
        name = rng.choice(["q0", "q1", "x", "y"])
        widened = entry.context.bind(name, entry.context.get(name).union(extra))
        assert entry.context.subset_of(widened)
        assert check(widened, entry.term) == ty


def test_type_uniqueness_across_contexts(corpus):
    for entry in corpus[:60]:
        t1 = check(entry.context, entry.term)
        t2 = check(entry.context.bind("fresh", parse_set_type("{a}")), entry.term)
        assert t1 == t2 == synthesize_type(entry.term)


# --- derivations ------------------------------------------------------------

def test_check_curry_self_application():
    d = derivation_from_json(json.dumps(SELFAPP_DERIVATION))
    judgement = check_curry(d)
    assert judgement.subject == parse_untyped("\\x. x x")
    assert judgement.type_ == parse_type("{{a,b}->c, a, b} -> c")


def test_check_curry_rejects_equal_premise_types():
    bad = {
        "rule": "many", "ctx": {"x": ["a"]}, "term": "x", "type": ["a"],
        "premises": [
            {"rule": "var", "ctx": {"x": ["a"]}, "term": "x", "type": "a"},
            {"rule": "var", "ctx": {"x": ["a"]}, "term": "x", "type": "a"},
        ],
    }
    with pytest.raises(InvalidDerivation):
        check_curry(derivation_from_json(json.dumps(bad)))


def test_check_curry_rejects_var_outside_set():
    bad = {"rule": "var", "ctx": {"x": ["b"]}, "term": "x", "type": "a"}
    with pytest.raises(InvalidDerivation):
        check_curry(derivation_from_json(json.dumps(bad)))


def test_check_curry_rejects_empty_many():
    bad = {"rule": "many", "ctx": {}, "term": "x", "type": [], "premises": []}
    with pytest.raises(InvalidDerivation):
        check_curry(derivation_from_json(json.dumps(bad)))


def test_decorate_self_application():
    d = derivation_from_json(json.dumps(SELFAPP_DERIVATION))
    assert decorate(d) == SELFAPP


def test_decorate_var_and_many_nodes():
    var_node = derivation_from_json(json.dumps(
        {"rule": "var", "ctx": {"x": ["a", "b"]}, "term": "x", "type": "b"}))
    assert decorate(var_node) == Var("x", Base("b"))


def test_derivation_json_round_trip():
    d = derivation_from_json(json.dumps(SELFAPP_DERIVATION))
    assert derivation_from_json(json.dumps(derivation_to_json(d))) == d


def test_erase_derivation_round_trip():
    d = derivation_from_json(json.dumps(SELFAPP_DERIVATION))
    t = decorate(d)
    back = erase_derivation(t, d.context)
    assert canonical_derivation(back) == canonical_derivation(d)
    assert decorate(back) == t


# --- erasure and refinement -------------------------------------------------

def test_erase_var():
    assert erase(parse_term("x^a")) == parse_untyped("x")


def test_erase_self_application():
    assert erase(SELFAPP) == parse_untyped("\\x. x x")


def test_erase_non_uniform():
    t = parse_term("(\\x:{a}. x^a) {x^(b -> a) y^b, x^a}")
    with pytest.raises(NotUniform):
        erase(t)
    assert not is_uniform(t)


def test_refines_set_rule():
    assert refines(SetTerm.of([parse_term("x^a"), parse_term("x^b")]), parse_untyped("x"))
    assert not refines(SetTerm.of([parse_term("x^a"), parse_term("y^a")]), parse_untyped("x"))


def test_refines_fails_after_inner_step():
    t = parse_term(corpus.DUPLICATING)
    m = erase(t)
    # contracting inside only one element of the argument set breaks uniformity
    from setlam import i_redexes
    inner = next(r.position for r in i_redexes(t) if len(r.position) == 1)
    t1 = step_i(t, inner)
    assert not is_uniform(t1)
    assert not any(refines(t1, n) for n in (m, erase(parse_term(corpus.DUPLICATING_AFTER_ARG))))


def test_bijection_between_set_term_and_set_type(corpus):
    from setlam.syntax import App, Lam, Var, Wrap
    from setlam.binding import open_term

    fresh = iter(range(10_000))

    def sets_of(t):
        # binders are opened with fresh free variables so that collected
        # sets stay locally closed
        match t:
            case App(fun, arg):
                yield arg
                yield from sets_of(fun)
                for e in arg.elements:
                    yield from sets_of(e)
            case Wrap(head, payload):
                yield payload
                yield from sets_of(head)
                for e in payload.elements:
                    yield from sets_of(e)
            case Lam(_, binder, body):
                name = f"fv{next(fresh)}"
                yield from sets_of(open_term(body, {ty: Var(name, ty) for ty in binder}))

    for entry in corpus:
        for s in sets_of(entry.term):
            types = [synthesize_type(e) for e in s.elements]
            assert len(set(types)) == len(types)  # element -> type is a bijection


def test_corpus_decorations_round_trip(corpus, sn_samples):
    for m, inferred in sn_samples[:80]:
        d = erase_derivation(inferred.term, inferred.context)
        assert check_curry(d).type_ == synthesize_type(inferred.term)
        assert decorate(d) == inferred.term
        assert erase(inferred.term) == m
