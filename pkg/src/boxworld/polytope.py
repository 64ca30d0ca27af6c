"""Exact vertex enumeration of the boxworld state polytope.

The state space is ``{s : <A, s> >= 0 for every extremal effect A,
<1, s> = 1}``. Its homogenization ``{s : <A, s> >= 0}`` is a pointed cone
(the extremal effects span), so the vertices are the extreme rays scaled
to unit normalization. Rays are found with the double description method
in integer arithmetic; :func:`brute_force_vertices` is an independent
check that solves every square subsystem.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from boxworld.exact import RMatrix, RVector, invert, rank
from boxworld.states import is_pure_product, is_state
from boxworld.theory import SystemSpec, enumerate_extremal_effects, identity_coeffs, product_effect_coeffs

log = logging.getLogger(__name__)

DEFAULT_BOUND_DIM = 16

__all__ = [
    "PolytopeVRep",
    "DimensionGuardError",
    "DEFAULT_BOUND_DIM",
    "constraint_matrix",
    "extreme_rays",
    "enumerate_vertices",
    "brute_force_vertices",
]


class DimensionGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class PolytopeVRep:
    """Vertices in deterministic (lexicographic) order with classification flags."""

    system: SystemSpec
    vertices: tuple[RVector, ...]
    pure_product: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n_pure_product(self) -> int:
        return sum(self.pure_product)

    def pure_vertices(self) -> list[RVector]:
        return [v for v, p in zip(self.vertices, self.pure_product) if p]

    def nonlocal_vertices(self) -> list[RVector]:
        return [v for v, p in zip(self.vertices, self.pure_product) if not p]

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


def constraint_matrix(sys: SystemSpec) -> list[tuple[int, ...]]:
    """One integer row per extremal effect (coefficients are in {-1, 0, 1})."""
    return [
        tuple(int(c) for c in product_effect_coeffs(sys, A))
        for A in enumerate_extremal_effects(sys)
    ]


def _primitive(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def extreme_rays(H: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{x : H x >= 0}`` (full column rank).

    Standard incremental double description: start from the simplicial
    cone of ``d`` independent rows, then add the remaining rows one at a
    time, combining adjacent ray pairs that straddle the new hyperplane.
    Adjacency is the combinatorial test: no third ray's zero set contains
    the pair's common zero set.
    """
    H = [tuple(int(x) for x in r) for r in H]
    d = len(H[0])
    # greedy independent initial rows
    init: list[int] = []
    for i in range(len(H)):
        if rank(RMatrix([H[j] for j in init + [i]])) == len(init) + 1:
            init.append(i)
            if len(init) == d:
                break
    if len(init) < d:
        raise ValueError("constraint matrix does not have full column rank; cone is not pointed")
    inv = invert(RMatrix([H[i] for i in init]))
    rays: list[tuple[int, ...]] = []
    for j in range(d):
        col = inv.column(j)
        den = 1
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
        rays.append(_primitive([int(x * den) for x in col]))
    zero: list[int] = []
    for j in range(d):
        mask = 0
        for pos, i in enumerate(init):
            if pos != j:
                mask |= 1 << i
        zero.append(mask)

    rest = [i for i in range(len(H)) if i not in set(init)]
    for i in rest:
        a = H[i]
        vals = [_dot(a, r) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zer = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos + zer]
        new_zero = [zero[j] for j in pos] + [zero[j] | (1 << i) for j in zer]
        for p in pos:
            for n in neg:
                common = zero[p] & zero[n]
                if bin(common).count("1") < d - 2:
                    continue
                adjacent = True
                for k in range(len(rays)):
                    if k != p and k != n and (zero[k] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vn = vals[p], vals[n]
                r = _primitive([vp * y - vn * x for x, y in zip(rays[p], rays[n])])
                new_rays.append(r)
                new_zero.append(common | (1 << i))
        rays, zero = new_rays, new_zero
        log.debug("after constraint %d: %d rays", i, len(rays))
    return rays


def _solve_square_int(rows, unit_row: int):
    """Solve ``A x = e_unit_row`` for a square integer matrix by Bareiss elimination.

    Returns the Fraction solution, or None when ``A`` is singular.
    """
    n = len(rows)
    M = [list(r) + [int(i == unit_row)] for i, r in enumerate(rows)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k]), None)
        if p is None:
            return None
        if p != k:
            M[k], M[p] = M[p], M[k]
        pk = M[k][k]
        for i in range(k + 1, n):
            f = M[i][k]
            Mi = M[i]
            Mk = M[k]
            for j in range(k + 1, n + 1):
                Mi[j] = (pk * Mi[j] - f * Mk[j]) // prev
            Mi[k] = 0
        prev = pk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n])
        for j in range(i + 1, n):
            if M[i][j]:
                acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return RVector(x)


def _classify(sys: SystemSpec, verts) -> PolytopeVRep:
    verts = sorted(set(verts))
    return PolytopeVRep(
        system=sys,
        vertices=tuple(verts),
        pure_product=tuple(is_pure_product(sys, v) for v in verts),
    )


def max_vertex_count(n_facets: int, d: int) -> int:
    """Upper bound theorem: most vertices a d-polytope with n facets can have."""
    if d < 1 or n_facets <= d:
        return n_facets
    return comb(n_facets - (d + 1) // 2, d // 2) + comb(n_facets - d // 2 - 1, (d + 1) // 2 - 1)


def enumerate_vertices(sys: SystemSpec, bound_dim: int = DEFAULT_BOUND_DIM) -> PolytopeVRep:
    """All vertices of the normalized state space, exactly."""
    affine = sys.dim - 1
    if affine > bound_dim:
        raise DimensionGuardError(
            f"affine dimension {affine} exceeds bound {bound_dim} "
            f"({sys.n_effects} facets, up to {max_vertex_count(sys.n_effects, affine)} vertices); "
            "raise bound_dim to proceed"
        )
    H = constraint_matrix(sys)
    idx = sys.identity_index()
    verts = []
    for r in extreme_rays(H):
        norm = r[idx]
        if norm <= 0:  # pragma: no cover - impossible for a pointed state cone
            raise ArithmeticError("extreme ray with non-positive normalization")
        verts.append(RVector(Fraction(x, norm) for x in r))
    return _classify(sys, verts)


def brute_force_vertices(sys: SystemSpec, bound_dim: int = 8) -> PolytopeVRep:
    """Vertices by solving every choice of ``D-1`` tight facets plus normalization.

    Exponential; meant as an independent oracle on small systems.
    """
    D = sys.dim
    if D - 1 > bound_dim:
        raise DimensionGuardError(f"oracle refused: affine dimension {D - 1} > {bound_dim}")
    H = constraint_matrix(sys)
    one = identity_coeffs(sys)
    log.info("brute force over %d subsets", comb(len(H), D - 1))
    one = tuple(int(c) for c in one)
    found = set()
    for subset in combinations(range(len(H)), D - 1):
        x = _solve_square_int([H[i] for i in subset] + [one], D - 1)
        if x is None:
            continue
        if all(_dot(h, x) >= 0 for h in H):
            found.add(x)
    verts = [v for v in found if is_state(sys, v)]
    return _classify(sys, verts)
