"""Typing tour: set-annotated terms, contexts, and derivation trees.

Run with: python3 demos/01_typing_and_derivations.py
"""

import json

from setlam import (
    TypingContext, check, check_curry, decorate, derivation_from_json,
    derivation_to_json, erase, erase_derivation, is_uniform,
    minimal_context, parse_set_type, parse_term, parse_untyped, pretty,
    refines, synthesize_type,
)

print("== Types are determined by annotations, bottom-up ==")
identity = parse_term("\\x:{a}. x^a")
print(f"  {pretty(identity)}  :  {pretty(synthesize_type(identity))}")

self_app = parse_term("\\x:{{a,b}->c, a, b}. x^({a,b}->c) {x^a, x^b}")
print(f"  {pretty(self_app)}")
print(f"    :  {pretty(synthesize_type(self_app))}")
print("  the binder is a set of types; each occurrence of x picks one element")

print()
print("== Checking free variables against a context ==")
body = parse_term("x^({a,b}->c) {x^a, x^b}")
context = TypingContext.of({"x": parse_set_type("{{a,b}->c, a, b}")})
print(f"  {context}  |-  {pretty(body)}  :  {pretty(check(context, body))}")
print(f"  minimal context of {pretty(body)}:  {minimal_context(body)}")

print()
print("== A derivation tree for the assignment system on untyped terms ==")
gamma = {"x": ["{a,b}->c", "a", "b"]}
derivation = derivation_from_json(json.dumps({
    "rule": "intro", "ctx": {}, "term": "\\x. x x",
    "type": "{{a,b}->c, a, b} -> c",
    "premises": [{
        "rule": "elim", "ctx": gamma, "term": "x x", "type": "c",
        "premises": [
            {"rule": "var", "ctx": gamma, "term": "x", "type": "{a,b}->c"},
            {"rule": "many", "ctx": gamma, "term": "x", "type": ["a", "b"],
             "premises": [
                 {"rule": "var", "ctx": gamma, "term": "x", "type": "a"},
                 {"rule": "var", "ctx": gamma, "term": "x", "type": "b"},
             ]},
        ],
    }],
}))
judgement = check_curry(derivation)
print(f"  root judgement:  |- {pretty(judgement.subject)} : {pretty(judgement.type_)}")

print()
print("== Decoration encodes the derivation as a term; erasure inverts it ==")
decorated = decorate(derivation)
print(f"  decorate  ->  {pretty(decorated)}")
print(f"  equals the self-application term: {decorated == self_app}")
print(f"  erase     ->  {pretty(erase(decorated))}")
round_trip = erase_derivation(decorated, TypingContext())
print(f"  erase_derivation emits JSON; its root rule is {round_trip.rule!r}"
      f" and it decorates back: {decorate(round_trip) == decorated}")
print(f"  (full JSON round trip: {json.dumps(derivation_to_json(round_trip))[:60]}...)")

print()
print("== Refinement and uniformity ==")
m = parse_untyped("\\x. x x")
print(f"  {pretty(decorated)} refines {pretty(m)}: {refines(decorated, m)}")
mixed = parse_term("(\\x:{a, c}. x^a) {x^(b -> a) y^b, w^c}")
print(f"  {pretty(mixed)}")
print(f"    is typable ({pretty(synthesize_type(mixed))}) but uniform: {is_uniform(mixed)}")
print("    the two argument elements erase to different untyped terms")
