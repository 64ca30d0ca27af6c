"""States, probability tables, membership tests and standard constructors.

A state is an :class:`~boxworld.exact.RVector` holding the value the state
assigns to every canonical basis effect (identity slots included). A
probability table is a dict ``{(settings, outcomes): Fraction}`` over all
measurement strings and their outcome strings.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Mapping, NamedTuple, Sequence

from boxworld.exact import DimensionError, RMatrix, RVector, solve_exact, tensor, to_rational
from boxworld.lp import nonnegative_solve
from boxworld.theory import (
    SiteSpec,
    SystemSpec,
    enumerate_extremal_effects,
    identity_coeffs,
    measurement_strings,
    outcome_strings,
    product_effect_coeffs,
)

__all__ = [
    "StateVector",
    "ProbabilityTable",
    "Check",
    "InvalidStateError",
    "TableError",
    "evaluate",
    "effect_values",
    "is_nonsignalling",
    "state_from_table",
    "table_from_state",
    "is_state",
    "cone_member",
    "is_pure_product",
    "local_pure_state",
    "product_state",
    "uniform_state",
    "pr_box_state",
    "pr_box_table",
    "mixture",
]

StateVector = RVector
ProbabilityTable = dict


class Check(NamedTuple):
    """Boolean verdict plus an explanation of the first failure (or a certificate)."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


class InvalidStateError(ValueError):
    pass


class TableError(ValueError):
    pass


def evaluate(E: Sequence, s: Sequence) -> Fraction:
    """Probability ``<E, s>``: dot product of coefficients and values."""
    if len(E) != len(s):
        raise DimensionError(f"effect dim {len(E)} != state dim {len(s)}")
    return RVector(E) @ RVector(s)


def effect_values(sys: SystemSpec, s: Sequence) -> dict:
    """Value of ``s`` on every extremal effect, keyed by label."""
    return {A: evaluate(product_effect_coeffs(sys, A), s) for A in enumerate_extremal_effects(sys)}


def _local_state_coeffs(site: SiteSpec, values: Mapping) -> RVector:
    """Local state vector with given values on X_m(k), k <= K(m)-2."""
    v = [Fraction(0)] * site.dim
    for (m, k), p in values.items():
        if k < site.outcomes[m] - 1:
            v[site.slot(m, k)] = to_rational(p)
    v[site.identity_slot] = Fraction(1)
    return RVector(v)


# -- tables ------------------------------------------------------------------


def _check_complete(sys: SystemSpec, T: Mapping) -> None:
    for ms in measurement_strings(sys):
        for ks in outcome_strings(sys, ms):
            if (ms, ks) not in T:
                raise TableError(f"table is missing entry settings={ms} outcomes={ks}")


def _normalize_keys(T: Mapping) -> dict:
    return {(tuple(ms), tuple(ks)): to_rational(p) for (ms, ks), p in T.items()}


def is_nonsignalling(sys: SystemSpec, T: Mapping) -> Check:
    """Check that every single-site outcome sum is independent of that site's setting.

    The witness on failure is ``(site, other_settings, other_outcomes)``:
    with those settings and outcomes fixed on the other sites, summing over
    the outcomes of ``site`` depends on its setting.
    """
    T = _normalize_keys(T)
    _check_complete(sys, T)
    for i, site in enumerate(sys.sites):
        others = [s for j, s in enumerate(sys.sites) if j != i]
        for other_ms in product(*(range(s.M) for s in others)):
            for other_ks in product(*(range(s.outcomes[m]) for s, m in zip(others, other_ms))):
                seen = None
                for m in range(site.M):
                    ms = other_ms[:i] + (m,) + other_ms[i:]
                    total = sum(
                        T[(ms, other_ks[:i] + (k,) + other_ks[i:])]
                        for k in range(site.outcomes[m])
                    )
                    if seen is None:
                        seen = total
                    elif total != seen:
                        return Check(False, (i, other_ms, other_ks))
    return Check(True)


def _table_problems(sys: SystemSpec, T: dict) -> str | None:
    for ms in measurement_strings(sys):
        total = Fraction(0)
        for ks in outcome_strings(sys, ms):
            p = T[(ms, ks)]
            if p < 0 or p > 1:
                return f"entry settings={ms} outcomes={ks} = {p} outside [0, 1]"
            total += p
        if total != 1:
            return f"settings={ms} sums to {total}, not 1"
    return None


def state_from_table(sys: SystemSpec, T: Mapping) -> StateVector:
    """The unique state whose extremal-effect values reproduce ``T``."""
    T = _normalize_keys(T)
    _check_complete(sys, T)
    problem = _table_problems(sys, T)
    if problem:
        raise TableError(problem)
    ns = is_nonsignalling(sys, T)
    if not ns:
        raise TableError(f"table is signalling: witness {ns.witness}")
    rows, rhs = [], []
    for ms in measurement_strings(sys):
        for ks in outcome_strings(sys, ms):
            rows.append(product_effect_coeffs(sys, tuple(zip(ms, ks))))
            rhs.append(T[(ms, ks)])
    res = solve_exact(RMatrix(rows), rhs)
    if not res.unique:
        raise TableError(f"table does not determine a state ({res.status})")
    return res.solution


def table_from_state(sys: SystemSpec, s: Sequence) -> ProbabilityTable:
    """Probability table ``P(ks | ms) = <X_m1(k1) ⊗ ... ⊗ X_mN(kN), s>``."""
    s = RVector(s)
    if len(s) != sys.dim:
        raise DimensionError(f"state dim {len(s)} != system dim {sys.dim}")
    chk = is_state(sys, s)
    if not chk:
        raise InvalidStateError(f"not a valid state: {chk.witness}")
    return {
        (ms, ks): evaluate(product_effect_coeffs(sys, tuple(zip(ms, ks))), s)
        for ms in measurement_strings(sys)
        for ks in outcome_strings(sys, ms)
    }


# -- membership --------------------------------------------------------------


def is_state(sys: SystemSpec, s: Sequence) -> Check:
    """Nonnegative on every extremal effect and normalized.

    Witness: ``("normalization", value)`` or ``(label, value)`` for the first
    extremal effect with a negative value.
    """
    s = RVector(s)
    if len(s) != sys.dim:
        return Check(False, ("dimension", len(s)))
    norm = evaluate(identity_coeffs(sys), s)
    if norm != 1:
        return Check(False, ("normalization", norm))
    for A in enumerate_extremal_effects(sys):
        v = evaluate(product_effect_coeffs(sys, A), s)
        if v < 0:
            return Check(False, (A, v))
    return Check(True)


def cone_member(sys: SystemSpec, B: Sequence) -> Check:
    """Is ``B`` a nonnegative combination of extremal effects?

    On success the witness is a certificate ``{label: weight}`` with
    positive weights summing (as vectors) to ``B``. On failure it is a
    Farkas vector ``y`` (a value vector) with ``<A, y> >= 0`` for every
    extremal effect and ``<B, y> < 0``.
    """
    B = RVector(B)
    if len(B) != sys.dim:
        raise DimensionError(f"effect dim {len(B)} != system dim {sys.dim}")
    labels = enumerate_extremal_effects(sys)
    coeffs = [product_effect_coeffs(sys, A) for A in labels]
    for A, c in zip(labels, coeffs):
        if c == B:
            return Check(True, {A: Fraction(1)})
    res = nonnegative_solve(coeffs, B)
    if not res.feasible:
        return Check(False, res.farkas)
    return Check(True, {A: x for A, x in zip(labels, res.x) if x})


def is_pure_product(sys: SystemSpec, s: Sequence) -> bool:
    """Every extremal-effect value is exactly 0 or 1."""
    chk = is_state(sys, s)
    if not chk:
        raise InvalidStateError(f"not a valid state: {chk.witness}")
    return all(
        evaluate(product_effect_coeffs(sys, A), s) in (0, 1)
        for A in enumerate_extremal_effects(sys)
    )


# -- constructors ------------------------------------------------------------


def local_pure_state(site: SiteSpec, assignment: Mapping[int, int] | Sequence[int]) -> StateVector:
    """Deterministic local state: measurement m yields outcome ``assignment[m]``."""
    if not isinstance(assignment, Mapping):
        assignment = dict(enumerate(assignment))
    if sorted(assignment) != list(range(site.M)):
        raise ValueError(f"assignment must cover measurements 0..{site.M - 1}")
    values = {}
    for m, K in enumerate(site.outcomes):
        km = assignment[m]
        if not 0 <= km < K:
            raise ValueError(f"outcome {km} invalid for measurement {m} with K={K}")
        for k in range(K):
            values[(m, k)] = int(k == km)
    return _local_state_coeffs(site, values)


def product_state(*local_states: Sequence) -> StateVector:
    """Tensor product of local states."""
    return tensor(*local_states)


def uniform_state(sys: SystemSpec) -> StateVector:
    """Every local outcome equally likely, independently at each site."""
    locs = []
    for site in sys.sites:
        values = {(m, k): Fraction(1, K) for m, K in enumerate(site.outcomes) for k in range(K)}
        locs.append(_local_state_coeffs(site, values))
    return tensor(*locs)


def mixture(weights: Sequence, states: Sequence[Sequence]) -> StateVector:
    """Convex combination; weights must be nonnegative and sum to one."""
    weights = [to_rational(w) for w in weights]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("mixture weights must be nonnegative and sum to 1")
    out = RVector.zeros(len(states[0]))
    for w, s in zip(weights, states):
        out = out + RVector(s) * w
    return out


TWO_GBITS = SystemSpec.of([2, 2], [2, 2])


def pr_box_table() -> ProbabilityTable:
    """``P(a1 a2 | A1 A2) = 1/2`` iff ``a1 XOR a2 == (A1 == 1 and A2 == 1)``."""
    half = Fraction(1, 2)
    return {
        ((A1, A2), (a1, a2)): half if (a1 ^ a2) == (A1 & A2) else Fraction(0)
        for A1 in (0, 1)
        for A2 in (0, 1)
        for a1 in (0, 1)
        for a2 in (0, 1)
    }


def pr_box_state(sys: SystemSpec | None = None) -> StateVector:
    """The PR box on two gbits."""
    if sys is not None and sys != TWO_GBITS:
        raise ValueError("the PR box is defined on two gbits only")
    return state_from_table(TWO_GBITS, pr_box_table())
