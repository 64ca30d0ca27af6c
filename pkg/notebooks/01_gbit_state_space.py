"""A single gbit: effects, the Gram table and the square of states.

Run with ``python3 notebooks/01_gbit_state_space.py``.
"""

from boxworld.exact import format_rational
from boxworld.polytope import enumerate_vertices
from boxworld.states import cone_member, effect_values, is_state, local_pure_state
from boxworld.theory import (
    LocalEffectLabel as L,
    SystemSpec,
    enumerate_extremal_effects,
    gram_table,
    identity_coeffs,
    label_str,
    local_effect_coeffs,
    product_effect_coeffs,
)

gbit = SystemSpec.of([2, 2])
site = gbit.sites[0]
print("gbit:", gbit.to_json(), "dimension", gbit.dim)

# Canonical coordinates: X0(0), X1(0), then the unit effect.
for A in enumerate_extremal_effects(gbit):
    print(f"  {label_str(A):>6} -> {[format_rational(x) for x in product_effect_coeffs(gbit, A)]}")

# The Gram table stands in for the orthogonal embedding of the effects.
print("\nGram table (rows and columns in label order):")
for row in gram_table(site):
    print("  " + "  ".join(f"{format_rational(x):>5}" for x in row))

# The state space is a square: four deterministic vertices.
V = enumerate_vertices(gbit)
print(f"\n{len(V)} vertices, all pure:", all(V.pure_product))
for v in V.vertices:
    vals = effect_values(gbit, v)
    print("  ", [format_rational(x) for x in v], {label_str(A): format_rational(p) for A, p in vals.items()})

# A pure state with outcome 0 for X and 1 for Z.
s = local_pure_state(site, {0: 0, 1: 1})
print("\nX -> 0, Z -> 1:", [format_rational(x) for x in s], "valid:", is_state(gbit, s).ok)

# 1 - X - Z is not a positive combination of effects; the simplex returns a separating state.
B = identity_coeffs(gbit) - local_effect_coeffs(site, L(0, 0)) - local_effect_coeffs(site, L(1, 0))
chk = cone_member(gbit, B)
print("1 - X - Z in the effect cone:", chk.ok, "separating vector:", [format_rational(x) for x in chk.witness])
