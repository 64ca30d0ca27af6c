"""Two gbits: the 24-vertex polytope, the PR box and CHSH.

Run with ``python3 notebooks/02_two_gbits_and_chsh.py``.
"""

from collections import Counter

from boxworld.bell import chsh_functional, chsh_value, correlator, max_over_vertices
from boxworld.exact import format_rational
from boxworld.polytope import enumerate_vertices
from boxworld.states import is_nonsignalling, pr_box_state, pr_box_table
from boxworld.theory import SystemSpec

two = SystemSpec.of([2, 2], [2, 2])
V = enumerate_vertices(two)
print(f"two gbits: dimension {two.dim}, {len(V)} vertices, {V.n_pure_product} pure product")

# The PR box as a table: outcomes agree unless both settings are Z.
T = pr_box_table()
print("PR table non-signalling:", is_nonsignalling(two, T).ok)
pr = pr_box_state()
print("PR is a vertex:", pr in V.vertex_set())
for i, a in enumerate("XZ"):
    for j, b in enumerate("XZ"):
        print(f"  E({a}{b}) = {format_rational(correlator(pr, i, j))}")
print("CHSH(PR) =", format_rational(chsh_value(pr)))

# Local vertices reach 2, the non-local ones reach 4.
best_local, _ = max_over_vertices(chsh_functional(), V, only_pure=True)
best_all, arg = max_over_vertices(chsh_functional(), V)
print("max over pure products:", best_local, " max over all vertices:", best_all)
print("CHSH values on the non-local vertices:",
      Counter(format_rational(chsh_value(v)) for v, p in zip(V.vertices, V.pure_product) if not p))
