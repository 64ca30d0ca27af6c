"""System types, the canonical effect basis, extremal effects and the Gram table.

Canonical basis
---------------
Each site with outcome counts ``K(0), ..., K(M-1)`` gets the basis

    X_0(0) .. X_0(K(0)-2), X_1(0) .. X_1(K(1)-2), ..., 1

i.e. all outcomes of every measurement except the last one, followed by
the identity slot. The last outcome of each measurement is dependent:
``X_m(K(m)-1) = 1 - sum_k X_m(k)``. A composite system uses the Kronecker
product of the site bases (site-major, first site most significant).

Effects are coefficient vectors in this basis and states are value
vectors (the probability the state assigns to each basis effect), so the
pairing between the two is the plain dot product.

The orthogonal representation in which reversible maps become orthogonal
has irrational coordinates; we only keep its exact Gram matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from typing import Iterable, NamedTuple, Sequence

from boxworld.exact import RMatrix, RVector, tensor

__all__ = [
    "SiteSpec",
    "SystemSpec",
    "LocalEffectLabel",
    "ProductEffectLabel",
    "InvalidLabelError",
    "gbit",
    "classical_site",
    "local_effect_coeffs",
    "local_identity_coeffs",
    "identity_coeffs",
    "product_effect_coeffs",
    "enumerate_local_effects",
    "enumerate_extremal_effects",
    "measurement_strings",
    "outcome_strings",
    "simplex_gram",
    "gram_local",
    "gram_table",
    "gram_product",
    "hamming",
    "negate",
    "label_str",
]


class InvalidLabelError(ValueError):
    pass


@dataclass(frozen=True)
class SiteSpec:
    """One site: ``outcomes[m]`` is the number of outcomes K(m) of measurement m."""

    outcomes: tuple[int, ...]

    def __post_init__(self):
        outs = tuple(int(k) for k in self.outcomes)
        object.__setattr__(self, "outcomes", outs)
        if len(outs) < 1:
            raise ValueError("a site needs at least one measurement")
        for m, k in enumerate(outs):
            if k < 2:
                raise ValueError(f"measurement {m} has K={k} < 2 outcomes")

    @property
    def M(self) -> int:
        return len(self.outcomes)

    @property
    def dim(self) -> int:
        """Local dimension sum_m (K(m) - 1) + 1."""
        return sum(k - 1 for k in self.outcomes) + 1

    @property
    def is_classical(self) -> bool:
        return self.M == 1

    @property
    def uniform_K(self) -> bool:
        return len(set(self.outcomes)) == 1

    @property
    def n_effects(self) -> int:
        return sum(self.outcomes)

    def slot(self, m: int, k: int) -> int:
        """Basis slot of X_m(k) for k <= K(m)-2."""
        return sum(kk - 1 for kk in self.outcomes[:m]) + k

    @property
    def identity_slot(self) -> int:
        return self.dim - 1

    def check_label(self, label) -> None:
        m, k = label
        if not (0 <= m < self.M) or not (0 <= k < self.outcomes[m]):
            raise InvalidLabelError(f"label {tuple(label)} invalid for site {self.outcomes}")

    def to_json(self) -> dict:
        return {"outcomes": list(self.outcomes)}


@dataclass(frozen=True)
class SystemSpec:
    """An ordered list of sites."""

    sites: tuple[SiteSpec, ...]

    def __post_init__(self):
        sites = tuple(s if isinstance(s, SiteSpec) else SiteSpec(tuple(s)) for s in self.sites)
        object.__setattr__(self, "sites", sites)
        if not sites:
            raise ValueError("a system needs at least one site")

    @classmethod
    def of(cls, *outcome_lists: Iterable[int]) -> "SystemSpec":
        """``SystemSpec.of([2, 2], [2])`` is a gbit next to a classical bit."""
        return cls(tuple(SiteSpec(tuple(o)) for o in outcome_lists))

    @classmethod
    def from_json(cls, data) -> "SystemSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.of(*(s["outcomes"] for s in data["sites"]))

    def to_json(self) -> dict:
        return {"sites": [s.to_json() for s in self.sites]}

    @property
    def N(self) -> int:
        return len(self.sites)

    @property
    def local_dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.sites)

    @property
    def dim(self) -> int:
        return prod(self.local_dims)

    @property
    def n_effects(self) -> int:
        return prod(s.n_effects for s in self.sites)

    @property
    def is_homogeneous(self) -> bool:
        """All sites identical and every measurement has the same K."""
        first = self.sites[0]
        return first.uniform_K and all(s == first for s in self.sites)

    def identity_index(self) -> int:
        """Flattened index of the all-identity basis slot."""
        return self.flat_index([s.identity_slot for s in self.sites])

    def flat_index(self, slots: Sequence[int]) -> int:
        idx = 0
        for s, j in zip(self.sites, slots):
            idx = idx * s.dim + j
        return idx

    def basis_labels(self) -> list[tuple]:
        """Human-readable name of every canonical basis slot, in order.

        Each entry is a per-site tuple holding ``(m, k)`` or ``None`` for
        the identity slot.
        """
        per_site = []
        for s in self.sites:
            names = [(m, k) for m, K in enumerate(s.outcomes) for k in range(K - 1)]
            names.append(None)
            per_site.append(names)
        return list(product(*per_site))

    def check_label(self, label) -> None:
        if len(label) != self.N:
            raise InvalidLabelError(f"label has {len(label)} sites, system has {self.N}")
        for s, l in zip(self.sites, label):
            s.check_label(l)


def gbit() -> SiteSpec:
    return SiteSpec((2, 2))


def classical_site(K: int = 2) -> SiteSpec:
    return SiteSpec((K,))


class LocalEffectLabel(NamedTuple):
    """Outcome k of measurement m on one site."""

    m: int
    k: int

    def __str__(self) -> str:
        return f"X{self.m}({self.k})"


ProductEffectLabel = tuple  # tuple[LocalEffectLabel, ...], one per site


def label_str(label) -> str:
    return "⊗".join(str(LocalEffectLabel(*l)) for l in label)


def negate(site: SiteSpec, label) -> LocalEffectLabel:
    """Complementary outcome of a binary measurement."""
    m, k = label
    if site.outcomes[m] != 2:
        raise InvalidLabelError("negation is only defined for binary measurements")
    return LocalEffectLabel(m, 1 - k)


# -- coefficient vectors -----------------------------------------------------


@lru_cache(maxsize=None)
def _local_coeffs(site: SiteSpec, m: int, k: int) -> RVector:
    v = [0] * site.dim
    K = site.outcomes[m]
    if k < K - 1:
        v[site.slot(m, k)] = 1
    else:
        v[site.identity_slot] = 1
        for kk in range(K - 1):
            v[site.slot(m, kk)] = -1
    return RVector(v)


def local_effect_coeffs(site: SiteSpec, label) -> RVector:
    """Coefficients of X_m(k) in the site's canonical basis."""
    site.check_label(label)
    m, k = label
    return _local_coeffs(site, m, k)


def local_identity_coeffs(site: SiteSpec) -> RVector:
    return RVector.unit(site.dim, site.identity_slot)


def identity_coeffs(sys: SystemSpec) -> RVector:
    return RVector.unit(sys.dim, sys.identity_index())


@lru_cache(maxsize=None)
def _product_coeffs(sys: SystemSpec, label: tuple) -> RVector:
    return tensor(*(_local_coeffs(s, m, k) for s, (m, k) in zip(sys.sites, label)))


def product_effect_coeffs(sys: SystemSpec, label) -> RVector:
    """Kronecker product of the local coefficient vectors of ``label``."""
    label = tuple(LocalEffectLabel(*l) for l in label)
    sys.check_label(label)
    return _product_coeffs(sys, label)


def enumerate_local_effects(site: SiteSpec) -> list[LocalEffectLabel]:
    return [LocalEffectLabel(m, k) for m, K in enumerate(site.outcomes) for k in range(K)]


@lru_cache(maxsize=None)
def _extremal(sys: SystemSpec) -> tuple:
    return tuple(product(*(enumerate_local_effects(s) for s in sys.sites)))


def enumerate_extremal_effects(sys: SystemSpec) -> list[tuple]:
    """All product effect labels, lexicographic (site-major, then m, then k)."""
    return list(_extremal(sys))


def measurement_strings(sys: SystemSpec) -> list[tuple[int, ...]]:
    return list(product(*(range(s.M) for s in sys.sites)))


def outcome_strings(sys: SystemSpec, settings: Sequence[int]) -> list[tuple[int, ...]]:
    return list(product(*(range(s.outcomes[m]) for s, m in zip(sys.sites, settings))))


# -- Gram table ----------------------------------------------------------------


def simplex_gram(n: int) -> RMatrix:
    """Gram matrix of n+1 unit vectors forming a regular simplex in R^n."""
    if n < 1:
        raise ValueError(f"simplex_gram needs n >= 1, got {n}")
    off = Fraction(-1, n)
    return RMatrix([[1 if i == j else off for j in range(n + 1)] for i in range(n + 1)])


def gram_local(site: SiteSpec, a, b) -> Fraction:
    """Inner product of two local extremal effects in the orthogonal representation.

    For measurement-dependent outcome counts the off-block value is
    1/(K(m) K(m')); with a single K this is the standard table.
    """
    site.check_label(a)
    site.check_label(b)
    (m, k), (m2, k2) = a, b
    M = site.M
    if m != m2:
        return Fraction(1, site.outcomes[m] * site.outcomes[m2])
    K = site.outcomes[m]
    if k != k2:
        return Fraction(1 - M, K * K)
    return Fraction(1 + M * (K - 1), K * K)


def gram_table(site: SiteSpec) -> RMatrix:
    """Gram matrix over the site's local extremal effects (enumeration order)."""
    labels = enumerate_local_effects(site)
    return RMatrix([[gram_local(site, a, b) for b in labels] for a in labels])


def gram_product(sys: SystemSpec, Q, R) -> Fraction:
    """Product over sites of :func:`gram_local`."""
    if len(Q) != sys.N or len(R) != sys.N:
        raise InvalidLabelError("label length does not match system")
    out = Fraction(1)
    for s, a, b in zip(sys.sites, Q, R):
        out *= gram_local(s, a, b)
    return out


def hamming(Q, R) -> int:
    """Number of sites at which two product labels differ."""
    if len(Q) != len(R):
        raise InvalidLabelError(f"labels from different systems ({len(Q)} vs {len(R)} sites)")
    return sum(tuple(a) != tuple(b) for a, b in zip(Q, R))
