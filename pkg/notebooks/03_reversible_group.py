"""Reversible dynamics on two gbits come only from relabellings.

The search below never assumes that; it tries every bijection of extremal
effects that is compatible with linearity, and then compares with the
group generated by site swaps and local relabellings.

Run with ``python3 notebooks/03_reversible_group.py``.
"""

import time

from boxworld.search import factor_label_action, search_reversible_group, verify_theorem1
from boxworld.theory import SystemSpec
from boxworld.transforms import effect_action, generate_group, trivial_generators

for sites in ([[2, 2]], [[2, 2, 2]], [[3, 3]], [[2, 2], [2, 2]]):
    sys_ = SystemSpec.of(*sites)
    t0 = time.perf_counter()
    S = search_reversible_group(sys_)
    dt = time.perf_counter() - t0
    G = generate_group(sys_, trivial_generators(sys_))
    print(f"{str(sites):<20} searched {len(S):>4} generated {len(G):>4} equal {S.same_elements(G)} "
          f"({dt:.2f}s, stats {S.stats})")

# Each element splits into a site permutation followed by local relabellings.
two = SystemSpec.of([2, 2], [2, 2])
S = search_reversible_group(two)
swaps = sum(f.site_perm != (0, 1) for f in (factor_label_action(two, effect_action(two, T)) for T in S))
print(f"\n{swaps} of {len(S)} two-gbit elements swap the sites")

report = verify_theorem1(two)
print("verify_theorem1:", report["status"], report["searched_order"], "/", report["generated_order"])
