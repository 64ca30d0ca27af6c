"""Linear maps on state space, allowedness checks and the relabelling group.

A :class:`LinearMap` stores the matrix acting on state (value) vectors.
Its adjoint acts on effect coefficient vectors and is simply the
transpose, because the effect/state pairing is the plain dot product.
Maps are usually built from the permutation their adjoint induces on
extremal effect labels (:func:`map_from_effect_permutation`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial, prod
from typing import Iterable, Mapping, Sequence

from boxworld.exact import RMatrix, RVector, SingularMatrixError, invert, rank
from boxworld.states import Check, cone_member
from boxworld.theory import (
    LocalEffectLabel,
    SystemSpec,
    enumerate_extremal_effects,
    enumerate_local_effects,
    identity_coeffs,
    product_effect_coeffs,
)

__all__ = [
    "LinearMap",
    "TransformGroup",
    "NotAllowedError",
    "adjoint",
    "spanning_effects",
    "map_from_effect_permutation",
    "effect_action",
    "is_allowed",
    "is_reversible_allowed",
    "generator_site_permutation",
    "generator_relabel_measurements",
    "generator_relabel_outcomes",
    "trivial_generators",
    "generate_group",
    "trivial_group_order",
    "group_membership",
    "build_hybrid_cnot",
    "HYBRID",
]


class NotAllowedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Exact matrix acting on state vectors."""

    matrix: RMatrix

    @classmethod
    def identity(cls, dim: int) -> "LinearMap":
        return cls(RMatrix.identity(dim))

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @cached_property
    def adjoint_matrix(self) -> RMatrix:
        return self.matrix.T

    def apply(self, s: Sequence) -> RVector:
        return self.matrix @ RVector(s)

    __call__ = apply

    def apply_adjoint(self, E: Sequence) -> RVector:
        return self.adjoint_matrix @ RVector(E)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix @ other.matrix)

    def inverse(self) -> "LinearMap":
        return LinearMap(invert(self.matrix))

    def key(self) -> tuple:
        return self.matrix.key()

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"LinearMap({self.matrix!r})"


def adjoint(T: LinearMap) -> LinearMap:
    """The map on effect coefficients with ``<adjoint(T) A, s> = <A, T s>``."""
    return LinearMap(T.adjoint_matrix)


# -- effect permutations -----------------------------------------------------


def spanning_effects(sys: SystemSpec) -> list[tuple]:
    """First ``D`` linearly independent extremal effects in enumeration order."""
    chosen: list[tuple] = []
    rows: list[RVector] = []
    for A in enumerate_extremal_effects(sys):
        c = product_effect_coeffs(sys, A)
        if rank(RMatrix(rows + [c])) == len(rows) + 1:
            chosen.append(A)
            rows.append(c)
            if len(chosen) == sys.dim:
                break
    return chosen


_SPAN_CACHE: dict = {}


def _span_inverse(sys: SystemSpec) -> tuple[list[tuple], RMatrix]:
    if sys not in _SPAN_CACHE:
        basis = spanning_effects(sys)
        C = RMatrix.from_columns([product_effect_coeffs(sys, A) for A in basis])
        _SPAN_CACHE[sys] = (basis, invert(C))
    return _SPAN_CACHE[sys]


def map_from_effect_permutation(sys: SystemSpec, images: Mapping) -> LinearMap:
    """The linear map whose adjoint sends each extremal effect ``A`` to ``images[A]``.

    Only the spanning subset is used to build the matrix; every other
    assigned image is then verified. Raises :class:`NotAllowedError` if the
    assignment has no linear extension.
    """
    basis, Cinv = _span_inverse(sys)
    C2 = RMatrix.from_columns([product_effect_coeffs(sys, images[A]) for A in basis])
    adj = C2 @ Cinv
    for A, B in images.items():
        if adj @ product_effect_coeffs(sys, A) != product_effect_coeffs(sys, B):
            raise NotAllowedError(f"assignment is not linear: image of {A} is not {B}")
    return LinearMap(adj.T)


def effect_action(sys: SystemSpec, T: LinearMap) -> dict | None:
    """``{A: B}`` with ``T† A == B`` for every extremal ``A``, or None if some image is not extremal."""
    lookup = {product_effect_coeffs(sys, A): A for A in enumerate_extremal_effects(sys)}
    out = {}
    for A in enumerate_extremal_effects(sys):
        B = lookup.get(T.apply_adjoint(product_effect_coeffs(sys, A)))
        if B is None:
            return None
        out[A] = B
    return out


# -- allowedness -------------------------------------------------------------


def is_allowed(sys: SystemSpec, T: LinearMap) -> Check:
    """``T† 1 == 1`` and ``T† A`` lies in the effect cone for every extremal ``A``.

    Witness: ``"identity"`` or the first extremal label whose image leaves the cone.
    """
    if T.dim != sys.dim:
        return Check(False, "dimension")
    one = identity_coeffs(sys)
    if T.apply_adjoint(one) != one:
        return Check(False, "identity")
    for A in enumerate_extremal_effects(sys):
        if not cone_member(sys, T.apply_adjoint(product_effect_coeffs(sys, A))):
            return Check(False, A)
    return Check(True)


def is_reversible_allowed(sys: SystemSpec, T: LinearMap) -> bool:
    """``T`` and ``T^-1`` both allowed.

    When this holds the adjoint must permute the extremal effects with unit
    scale; that consequence is asserted, not assumed.
    """
    try:
        Tinv = T.inverse()
    except SingularMatrixError:
        return False
    if not (is_allowed(sys, T) and is_allowed(sys, Tinv)):
        return False
    action = effect_action(sys, T)
    assert action is not None and len(set(action.values())) == len(action), (
        "reversible map whose adjoint does not permute the extremal effects"
    )
    return True


# -- generators --------------------------------------------------------------


def generator_site_permutation(sys: SystemSpec, perm: Sequence[int]) -> LinearMap:
    """Move the factor at site ``i`` to site ``perm[i]`` (sites must have equal type)."""
    perm = tuple(perm)
    if sorted(perm) != list(range(sys.N)):
        raise ValueError(f"{perm} is not a permutation of the sites")
    for i, j in enumerate(perm):
        if sys.sites[i] != sys.sites[j]:
            raise ValueError(f"cannot exchange site {i} {sys.sites[i].outcomes} with site {j} {sys.sites[j].outcomes}")
    images = {}
    for A in enumerate_extremal_effects(sys):
        B = [None] * sys.N
        for i, j in enumerate(perm):
            B[j] = A[i]
        images[A] = tuple(B)
    return map_from_effect_permutation(sys, images)


def _local_generator(sys: SystemSpec, site: int, local: Mapping) -> LinearMap:
    images = {}
    for A in enumerate_extremal_effects(sys):
        B = list(A)
        B[site] = local[A[site]]
        images[A] = tuple(B)
    return map_from_effect_permutation(sys, images)


def generator_relabel_measurements(sys: SystemSpec, site: int, perm: Sequence[int]) -> LinearMap:
    """Rename measurement ``m`` to ``perm[m]`` at one site (only among equal K)."""
    s = sys.sites[site]
    perm = tuple(perm)
    if sorted(perm) != list(range(s.M)):
        raise ValueError(f"{perm} is not a permutation of the measurements")
    for m, m2 in enumerate(perm):
        if s.outcomes[m] != s.outcomes[m2]:
            raise ValueError(f"measurements {m} and {m2} have different outcome counts")
    local = {l: LocalEffectLabel(perm[l.m], l.k) for l in enumerate_local_effects(s)}
    return _local_generator(sys, site, local)


def generator_relabel_outcomes(sys: SystemSpec, site: int, m: int, perm: Sequence[int]) -> LinearMap:
    """Rename outcome ``k`` of measurement ``m`` to ``perm[k]`` at one site."""
    s = sys.sites[site]
    perm = tuple(perm)
    if sorted(perm) != list(range(s.outcomes[m])):
        raise ValueError(f"{perm} is not a permutation of the outcomes of measurement {m}")
    local = {
        l: LocalEffectLabel(l.m, perm[l.k]) if l.m == m else l
        for l in enumerate_local_effects(s)
    }
    return _local_generator(sys, site, local)


def _sym_generators(items: Sequence[int], n: int) -> list[tuple[int, ...]]:
    """Transposition and long cycle on ``items`` as permutations of range(n)."""
    items = list(items)
    if len(items) < 2:
        return []
    out = []
    swap = list(range(n))
    swap[items[0]], swap[items[1]] = items[1], items[0]
    out.append(tuple(swap))
    if len(items) > 2:
        cyc = list(range(n))
        for a, b in zip(items, items[1:] + items[:1]):
            cyc[a] = b
        out.append(tuple(cyc))
    return out


def _classes(values: Sequence) -> list[list[int]]:
    groups: dict = {}
    for i, v in enumerate(values):
        groups.setdefault(v, []).append(i)
    return list(groups.values())


def trivial_generators(sys: SystemSpec) -> list[LinearMap]:
    """Generators of the site-permutation × local-relabelling group."""
    gens = []
    for cls in _classes(sys.sites):
        gens += [generator_site_permutation(sys, p) for p in _sym_generators(cls, sys.N)]
    for i, s in enumerate(sys.sites):
        for cls in _classes(s.outcomes):
            gens += [generator_relabel_measurements(sys, i, p) for p in _sym_generators(cls, s.M)]
        for m, K in enumerate(s.outcomes):
            gens += [generator_relabel_outcomes(sys, i, m, p) for p in _sym_generators(range(K), K)]
    return gens


def trivial_group_order(sys: SystemSpec) -> int:
    """Order of the group generated by :func:`trivial_generators`."""
    order = prod(factorial(len(c)) for c in _classes(sys.sites))
    for s in sys.sites:
        order *= prod(factorial(len(c)) for c in _classes(s.outcomes))
        order *= prod(factorial(K) for K in s.outcomes)
    return order


# -- groups ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TransformGroup:
    """A finite group of linear maps, elements in deterministic order."""

    system: SystemSpec
    elements: tuple[LinearMap, ...]
    generators: tuple[LinearMap, ...] = ()
    provenance: str = "generated"
    stats: dict = field(default_factory=dict)

    @cached_property
    def _keys(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, T) -> bool:
        return T in self._keys

    def element_set(self) -> frozenset:
        return self._keys

    def same_elements(self, other: "TransformGroup") -> bool:
        return self._keys == other._keys


def generate_group(
    sys: SystemSpec,
    generators: Iterable[LinearMap],
    check: bool = True,
    limit: int = 1_000_000,
) -> TransformGroup:
    """Breadth-first closure of ``generators`` under composition."""
    generators = tuple(generators)
    if check:
        for g in generators:
            if not is_reversible_allowed(sys, g):
                raise NotAllowedError(f"generator is not a reversible allowed map: {g!r}")
    ident = LinearMap.identity(sys.dim)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        h = queue.popleft()
        for g in generators:
            gh = g @ h
            if gh not in seen:
                seen.add(gh)
                order.append(gh)
                queue.append(gh)
                if len(order) > limit:
                    raise RuntimeError(f"group closure exceeded {limit} elements")
    return TransformGroup(sys, tuple(sorted(order, key=LinearMap.key)), generators, "generated")


def group_membership(T: LinearMap, G: TransformGroup) -> bool:
    return T in G


# -- hybrid example ----------------------------------------------------------

HYBRID = SystemSpec.of([2, 2], [2])


def build_hybrid_cnot(sys: SystemSpec | None = None) -> LinearMap:
    """Classically controlled flip on a gbit next to a classical bit.

    With ``Y`` the classical outcome 0 and ``¬Y`` outcome 1, the adjoint
    fixes ``A ⊗ Y`` and sends ``A ⊗ ¬Y`` to ``¬A ⊗ ¬Y`` for every gbit
    effect ``A``.
    """
    if sys is not None and sys != HYBRID:
        raise ValueError("the hybrid CNOT is defined on gbit ⊗ classical bit only")
    images = {}
    for A, Y in enumerate_extremal_effects(HYBRID):
        if Y.k == 0:
            images[(A, Y)] = (A, Y)
        else:
            images[(A, Y)] = (LocalEffectLabel(A.m, 1 - A.k), Y)
    return map_from_effect_permutation(HYBRID, images)
