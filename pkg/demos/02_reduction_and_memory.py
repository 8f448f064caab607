"""Reduction tour: plain steps, memory steps, wrappers, and simulation.

Run with: python3 demos/02_reduction_and_memory.py
"""

from setlam import (
    beta_redexes, complete_development, corresponding_step, erase,
    forgetful_reducts, i_redexes, par_reduces, parse_term, parse_untyped,
    pretty, project_step, redexes, simulate_beta, step_i, step_im, weight,
)

print("== Plain reduction erases; memory reduction remembers ==")
erasing = parse_term("(\\x:{a}. z^b) {y^a}")
print(f"  {pretty(erasing)}")
print(f"    plain step   ->  {pretty(step_i(erasing, ()))}")
print(f"    memory step  ->  {pretty(step_im(erasing, ()))}   (argument kept in a wrapper)")

print()
print("== A two-step run where both arguments survive as wrappers ==")
t = parse_term("(\\x:{a}.y^b) {(\\x:{b}.z^a) w^b}")
print(f"  {pretty(t)}")
while redexes(t):
    t = step_im(t, redexes(t)[0].position)
    print(f"    ->  {pretty(t)}")
print(f"  final weight (wrapper count): {weight(t)}")

print()
print("== Wrapped abstractions still fire: the wrapper list is re-attached ==")
wrapped = parse_term("((\\x:{a}.x^a)[u^c]) {y^a}")
print(f"  {pretty(wrapped)}  ->  {pretty(step_im(wrapped, ()))}")

print()
print("== Forgetting wrappers, one at a time ==")
remembered = parse_term("y^b [z^a [w^b]]")
for position, reduct in forgetful_reducts(remembered):
    print(f"  drop wrapper at {list(position)}:  {pretty(remembered)}  ->  {pretty(reduct)}")

print()
print("== Corresponding steps and the development diamond ==")
simple = parse_term("(\\x:{a}.x^a) {y^a}")
print(f"  plain:  {pretty(step_i(simple, ()))}    memory: {pretty(corresponding_step(simple, ()))}")
dup = parse_term(
    "(\\x:{(b -> b) -> b -> b, b -> b}. x^((b -> b) -> b -> b) {x^(b -> b)})"
    " {(\\u:{(b -> b) -> b -> b}. u^((b -> b) -> b -> b)) {\\u:{b -> b}. u^(b -> b)},"
    "  (\\u:{b -> b}. u^(b -> b)) {\\u:{b}. u^b}}")
dev = complete_development(dup, "im")
print(f"  every single memory step parallel-reduces to the complete development:"
      f" {all(par_reduces(step_im(dup, r.position), dev, 'im') for r in redexes(dup))}")

print()
print("== One untyped beta step becomes several annotated steps ==")
m = erase(dup)
print(f"  untyped term: {pretty(m)}")
beta_at = beta_redexes(m)[-1]
n, final, steps = simulate_beta(dup, m, beta_at)
print(f"  beta at {list(beta_at)} gives {pretty(n)}")
for s in steps:
    print(f"    annotated step at {list(s.position)}")
print(f"  {len(steps)} steps later the result refines the beta reduct")

print()
print("== And a single annotated step projects back to a beta step ==")
inner = next(r.position for r in i_redexes(dup) if len(r.position) == 1)
stepped = step_i(dup, inner)
n, completed, extra = project_step(dup, stepped, inner)
print(f"  stepping one set element leaves a mixed term;"
      f" {len(extra)} completing step(s) reach a refinement of {pretty(n)}")
