"""A gbit next to a classical bit admits a CNOT.

The classical bit has one measurement, so the relabelling argument does not
cover this system and the reversible group really is larger. Pure product
states still go to pure product states.

Run with ``python3 notebooks/04_hybrid_cnot.py``.
"""

from boxworld.exact import format_rational
from boxworld.search import search_reversible_group, verify_theorem1, verify_theorem2
from boxworld.states import local_pure_state, product_state, uniform_state
from boxworld.theory import LocalEffectLabel as L, SystemSpec, label_str, product_effect_coeffs
from boxworld.transforms import (
    HYBRID,
    build_hybrid_cnot,
    effect_action,
    generate_group,
    group_membership,
    is_reversible_allowed,
    trivial_generators,
)

cnot = build_hybrid_cnot()
print("CNOT reversible and allowed:", is_reversible_allowed(HYBRID, cnot))
for A, B in sorted(effect_action(HYBRID, cnot).items()):
    if A != B:
        print(f"  {label_str(A)} -> {label_str(B)}")

G = generate_group(HYBRID, trivial_generators(HYBRID))
print("relabelling group order", len(G), "contains CNOT:", group_membership(cnot, G))
S = search_reversible_group(HYBRID)
print("searched group order", len(S), "contains CNOT:", cnot in S)

# Gbit deterministic (X -> 0, Z -> 1), classical bit uniformly random.
s = product_state(local_pure_state(HYBRID.sites[0], [0, 1]), uniform_state(SystemSpec((HYBRID.sites[1],))))
out = cnot.apply(s)
for a in (0, 1):
    for y in (0, 1):
        p = product_effect_coeffs(HYBRID, (L(0, a), L(0, y))) @ out
        print(f"  P(X={a}, Y={y}) = {format_rational(p)}")

print("theorem 1 check:", verify_theorem1(HYBRID)["status"])
r = verify_theorem2(HYBRID, S)
print("theorem 2 check:", r["status"], f"({r['pure_product_vertices']} pure product vertices)")
