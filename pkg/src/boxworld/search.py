"""Exhaustive search for reversible maps and the theorem verifiers.

The adjoint of a reversible map permutes the extremal effects, so the
search runs over bijections of the extremal effect labels and keeps those
that extend to a linear map fixing the identity. Two kinds of constraint
cut the tree:

* linear propagation (always on, exact): effects are visited in an order
  where each one is either independent of everything assigned so far (a
  branch point) or a fixed linear combination of the identity and earlier
  effects, in which case its image is forced;
* Gram pruning (homogeneous systems only): reversible maps are orthogonal
  in the orthogonal representation, so candidate images must reproduce
  every pairwise Gram value.

Every surviving leaf is re-verified with exact linear algebra and the full
allowedness check.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from boxworld.exact import RMatrix, RVector, solve_exact
from boxworld.polytope import PolytopeVRep, enumerate_vertices
from boxworld.states import is_pure_product
from boxworld.theory import (
    LocalEffectLabel,
    SystemSpec,
    enumerate_extremal_effects,
    enumerate_local_effects,
    gram_product,
    identity_coeffs,
    product_effect_coeffs,
)
from boxworld.transforms import (
    LinearMap,
    NotAllowedError,
    TransformGroup,
    effect_action,
    generate_group,
    is_reversible_allowed,
    map_from_effect_permutation,
    trivial_generators,
    trivial_group_order,
)

log = logging.getLogger(__name__)

DEFAULT_BOUND_EFFECTS = 64
ORACLE_MAX_EFFECTS = 8

__all__ = [
    "SearchBoundError",
    "Factorization",
    "search_reversible_group",
    "factor_label_action",
    "verify_theorem1",
    "verify_theorem2",
    "DEFAULT_BOUND_EFFECTS",
]


class SearchBoundError(RuntimeError):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BOXWORLD_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class _Plan:
    """Visiting order: each step is (effect index, forced combination or None).

    A forced combination is ``(c_identity, ((step, c), ...))`` expressing the
    effect's coefficients through the identity and earlier branch steps.
    """

    order: tuple[int, ...]
    forced: tuple


def _plan(sys: SystemSpec, coeffs: Sequence[RVector]) -> _Plan:
    one = identity_coeffs(sys)
    remaining = list(range(len(coeffs)))
    order: list[int] = []
    forced: list = []
    free_steps: list[int] = []  # positions in `order` that are branch points

    def express(v):
        cols = [one] + [coeffs[order[p]] for p in free_steps]
        res = solve_exact(RMatrix.from_columns(cols), v)
        if not res.consistent:
            return None
        x = res.solution
        return (x[0], tuple((p, c) for p, c in zip(free_steps, x[1:]) if c))

    while remaining:
        i = next(j for j in remaining if express(coeffs[j]) is None)
        remaining.remove(i)
        free_steps.append(len(order))
        order.append(i)
        forced.append(None)
        for j in list(remaining):
            e = express(coeffs[j])
            if e is not None:
                remaining.remove(j)
                order.append(j)
                forced.append(e)
    return _Plan(tuple(order), tuple(forced))


class _Searcher:
    def __init__(self, sys: SystemSpec, prune: bool):
        self.sys = sys
        self.labels = enumerate_extremal_effects(sys)
        self.coeffs = [product_effect_coeffs(sys, A) for A in self.labels]
        self.lookup = {c: i for i, c in enumerate(self.coeffs)}
        self.one = identity_coeffs(sys)
        self.use_gram = prune and sys.is_homogeneous
        n = len(self.labels)
        if self.use_gram:
            self.gram = [[gram_product(sys, a, b) for b in self.labels] for a in self.labels]
        self.plan = _plan(sys, self.coeffs)
        self.n = n
        self.pruned_gram = 0
        self.pruned_linear = 0
        self.leaves = 0

    def run(self, first_choices: Sequence[int] | None = None) -> list[tuple[int, ...]]:
        n = self.n
        img = [-1] * n  # by step position
        used = [False] * n
        out: list[tuple[int, ...]] = []
        order, forced = self.plan.order, self.plan.forced
        img_vec: list[RVector | None] = [None] * n

        def rec(step: int):
            if step == n:
                self.leaves += 1
                perm = [0] * n
                for p, i in enumerate(order):
                    perm[i] = img[p]
                out.append(tuple(perm))
                return
            src = order[step]
            f = forced[step]
            if f is not None:
                c0, terms = f
                v = self.one * c0
                for p, c in terms:
                    v = v + img_vec[p] * c
                j = self.lookup.get(v)
                if j is None or used[j]:
                    self.pruned_linear += 1
                    return
                candidates = [j]
            elif step == 0 and first_choices is not None:
                candidates = list(first_choices)
            else:
                candidates = [j for j in range(n) if not used[j]]
            for j in candidates:
                if self.use_gram:
                    g = self.gram
                    if g[src][src] != g[j][j] or any(
                        g[src][order[p]] != g[j][img[p]] for p in range(step)
                    ):
                        self.pruned_gram += 1
                        continue
                used[j] = True
                img[step] = j
                img_vec[step] = self.coeffs[j]
                rec(step + 1)
                used[j] = False
                img[step] = -1
                img_vec[step] = None

        rec(0)
        return out


def _search_chunk(args):
    sys, prune, choices = args
    s = _Searcher(sys, prune)
    perms = s.run(choices)
    return perms, (s.pruned_gram, s.pruned_linear, s.leaves)


def search_reversible_group(
    sys: SystemSpec,
    bound_effects: int = DEFAULT_BOUND_EFFECTS,
    prune: bool = True,
    threads: int | None = None,
) -> TransformGroup:
    """All reversible allowed maps, found by backtracking over effect bijections.

    ``prune=False`` disables the Gram invariant (linear propagation stays,
    being exact) and is used as a self-audit on small systems.
    """
    n = sys.n_effects
    if n > bound_effects:
        raise SearchBoundError(f"{n} extremal effects exceeds search bound {bound_effects}")
    threads = threads or _threads()
    labels = enumerate_extremal_effects(sys)
    if threads > 1 and n > 8:
        chunks = [[j] for j in range(n)]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_search_chunk, [(sys, prune, c) for c in chunks]))
        perms = [p for r, _ in results for p in r]
        pg = sum(s[0] for _, s in results)
        pl = sum(s[1] for _, s in results)
        leaves = sum(s[2] for _, s in results)
    else:
        perms, (pg, pl, leaves) = _search_chunk((sys, prune, None))

    elements = []
    for perm in perms:
        images = {labels[i]: labels[j] for i, j in enumerate(perm)}
        try:
            T = map_from_effect_permutation(sys, images)
        except NotAllowedError:  # pragma: no cover - propagation makes every leaf linear
            continue
        if is_reversible_allowed(sys, T):
            elements.append(T)
    elements = tuple(sorted(set(elements), key=LinearMap.key))
    stats = {
        "pruned_gram": pg,
        "pruned_linear": pl,
        "leaves": leaves,
        "gram_pruning": prune and sys.is_homogeneous,
        "branch_points": sum(f is None for f in _plan(sys, [product_effect_coeffs(sys, A) for A in labels]).forced),
    }
    log.info("search on %s: %d elements, stats %s", sys.to_json(), len(elements), stats)
    return TransformGroup(sys, elements, (), "searched", stats)


# -- factorization -----------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Label action written as a site permutation followed by local relabellings.

    ``site_perm[i]`` is the site that site ``i``'s factor moves to;
    ``local[i]`` maps local labels at site ``i`` to labels at
    ``site_perm[i]``. ``measurement_perm[i]`` and ``outcome_perms[i]``
    describe ``local[i]`` as a relabelling when it is one.
    """

    site_perm: tuple[int, ...]
    local: tuple[dict, ...]
    measurement_perm: tuple[tuple[int, ...] | None, ...]
    outcome_perms: tuple[tuple[tuple[int, ...], ...] | None, ...]

    @property
    def is_relabelling(self) -> bool:
        return all(p is not None for p in self.measurement_perm)

    def to_json(self) -> dict:
        return {
            "site_perm": list(self.site_perm),
            "measurement_perm": [None if p is None else list(p) for p in self.measurement_perm],
            "outcome_perms": [
                None if o is None else [list(x) for x in o] for o in self.outcome_perms
            ],
        }


def _as_relabelling(src, dst, local: dict):
    """Measurement and outcome permutations realising ``local``, or None."""
    mperm = []
    operms = []
    for m, K in enumerate(src.outcomes):
        targets = {local[LocalEffectLabel(m, k)].m for k in range(K)}
        if len(targets) != 1:
            return None, None
        m2 = targets.pop()
        if dst.outcomes[m2] != K:
            return None, None
        mperm.append(m2)
        operms.append(tuple(local[LocalEffectLabel(m, k)].k for k in range(K)))
    if sorted(mperm) != list(range(dst.M)):
        return None, None
    return tuple(mperm), tuple(operms)


def factor_label_action(sys: SystemSpec, action: dict) -> Factorization | None:
    """Split an effect permutation into site permutation × per-site bijections.

    Returns None if no such factorization exists (e.g. the hybrid CNOT).
    """
    N = sys.N
    locals_ = [enumerate_local_effects(s) for s in sys.sites]
    base = tuple(l[0] for l in locals_)
    base_img = action[base]
    site_perm = []
    local_maps = []
    for i in range(N):
        target = None
        lm = {}
        for a in locals_[i]:
            Q = base[:i] + (a,) + base[i + 1:]
            R = action[Q]
            diff = [j for j in range(N) if R[j] != base_img[j]]
            if a == base[i]:
                lm[a] = base_img
                continue
            if len(diff) != 1 or (target is not None and diff[0] != target):
                return None
            target = diff[0]
            lm[a] = R
        if target is None:  # pragma: no cover - sites have at least two labels
            return None
        site_perm.append(target)
        local_maps.append({a: R[target] for a, R in lm.items()})
    if sorted(site_perm) != list(range(N)):
        return None
    for Q, R in action.items():
        expect = [None] * N
        for i, j in enumerate(site_perm):
            expect[j] = local_maps[i][Q[i]]
        if tuple(expect) != tuple(R):
            return None
    mperms, operms = [], []
    for i, j in enumerate(site_perm):
        mp, op = _as_relabelling(sys.sites[i], sys.sites[j], local_maps[i])
        mperms.append(mp)
        operms.append(op)
    return Factorization(tuple(site_perm), tuple(local_maps), tuple(mperms), tuple(operms))


# -- theorem verifiers ---------------------------------------------------------


def theorem1_applies(sys: SystemSpec) -> bool:
    """Every site has at least two measurements."""
    return all(s.M >= 2 for s in sys.sites)


def verify_theorem1(
    sys: SystemSpec,
    bound_effects: int = DEFAULT_BOUND_EFFECTS,
    oracle: bool = False,
) -> dict:
    """Compare the searched reversible group with the relabelling group.

    ``status`` is ``"PASS"``, ``"FAIL"``, or ``"exception-expected"`` when
    the groups differ on a system outside the theorem's hypothesis (some
    site with a single measurement).
    """
    searched = search_reversible_group(sys, bound_effects=bound_effects)
    generated = generate_group(sys, trivial_generators(sys))
    equal = searched.same_elements(generated)
    rows = []
    n_factor = n_relabel = 0
    for idx, T in enumerate(searched.elements):
        action = effect_action(sys, T)
        fac = factor_label_action(sys, action)
        n_factor += fac is not None
        n_relabel += fac is not None and fac.is_relabelling
        rows.append({
            "index": idx,
            "in_trivial_group": T in generated,
            "factorization": None if fac is None else fac.to_json(),
        })
    all_factor = n_relabel == len(searched)
    applies = theorem1_applies(sys)
    if equal and all_factor:
        status = "PASS"
    elif not applies:
        status = "exception-expected"
    else:
        status = "FAIL"
    report = {
        "theorem": 1,
        "system": sys.to_json(),
        "status": status,
        "hypothesis_holds": applies,
        "searched_order": len(searched),
        "generated_order": len(generated),
        "predicted_order": trivial_group_order(sys),
        "setwise_equal": equal,
        "factorizable": n_factor,
        "relabelling_factorizations": n_relabel,
        "extra_elements": sum(1 for T in searched if T not in generated),
        "search_stats": searched.stats,
        "elements": rows,
    }
    if not applies and not equal:
        report["note"] = "some site has a single measurement; the relabelling group need not be everything"
    if oracle:
        report["oracle"] = _search_oracle(sys, searched)
    return report


def _search_oracle(sys: SystemSpec, searched: TransformGroup) -> dict:
    if sys.n_effects > ORACLE_MAX_EFFECTS:
        return {"status": "skipped", "reason": f"more than {ORACLE_MAX_EFFECTS} extremal effects"}
    unpruned = search_reversible_group(sys, prune=False)
    return {"status": "PASS" if unpruned.same_elements(searched) else "FAIL", "unpruned_order": len(unpruned)}


def verify_theorem2(
    sys: SystemSpec,
    group: TransformGroup,
    vrep: PolytopeVRep | None = None,
) -> dict:
    """Every group element maps pure product vertices to pure product vertices."""
    vrep = vrep or enumerate_vertices(sys)
    pure = vrep.pure_vertices()
    nonpure = set(vrep.nonlocal_vertices())
    vset = vrep.vertex_set()
    failures = []
    nonpure_closed = True
    for idx, T in enumerate(group.elements):
        for v in pure:
            w = T.apply(v)
            if w not in vset or not is_pure_product(sys, w):
                failures.append({"element": idx, "vertex": vrep.vertices.index(v)})
        if {T.apply(v) for v in nonpure} != nonpure:
            nonpure_closed = False
    ok = not failures and nonpure_closed
    return {
        "theorem": 2,
        "system": sys.to_json(),
        "status": "PASS" if ok else "FAIL",
        "group_order": len(group),
        "group_provenance": group.provenance,
        "pure_product_vertices": len(pure),
        "other_vertices": len(nonpure),
        "checks": len(group) * len(pure),
        "failures": failures,
        "non_pure_set_invariant": nonpure_closed,
    }
