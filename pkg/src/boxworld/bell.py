"""Bell functionals and CHSH on two gbits.

Outcome ``a`` contributes the sign ``(-1)**a``; measurement 0 plays the
role of X and measurement 1 of Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from boxworld.exact import to_rational
from boxworld.polytope import PolytopeVRep
from boxworld.states import evaluate, table_from_state
from boxworld.theory import SystemSpec, measurement_strings, outcome_strings, product_effect_coeffs

__all__ = [
    "BellFunctional",
    "correlator",
    "chsh_value",
    "chsh_functional",
    "chsh_variants",
    "max_over_vertices",
]

TWO_GBITS = SystemSpec.of([2, 2], [2, 2])


@dataclass(frozen=True)
class BellFunctional:
    """Linear functional ``sum c(ms, ks) P(ks | ms)`` on a system's tables.

    Entries missing from ``coefficients`` count as zero.
    """

    system: SystemSpec
    coefficients: Mapping

    def __post_init__(self):
        coeffs = {(tuple(ms), tuple(ks)): to_rational(c) for (ms, ks), c in self.coefficients.items()}
        domain = {
            (ms, ks) for ms in measurement_strings(self.system) for ks in outcome_strings(self.system, ms)
        }
        bad = set(coeffs) - domain
        if bad:
            raise ValueError(f"coefficients outside the table domain: {sorted(bad)[:3]}")
        object.__setattr__(self, "coefficients", coeffs)

    def __call__(self, s: Sequence) -> Fraction:
        total = Fraction(0)
        for (ms, ks), c in self.coefficients.items():
            if c:
                total += c * evaluate(product_effect_coeffs(self.system, tuple(zip(ms, ks))), s)
        return total

    @classmethod
    def zero(cls, system: SystemSpec) -> "BellFunctional":
        return cls(system, {})


def _require_two_gbits(sys: SystemSpec | None) -> None:
    if sys is not None and sys != TWO_GBITS:
        raise ValueError("CHSH is defined on two gbits only")


def correlator(s: Sequence, A1: int, A2: int, sys: SystemSpec | None = None) -> Fraction:
    """``sum_{a1 a2} (-1)^(a1+a2) P(a1 a2 | A1 A2)``."""
    _require_two_gbits(sys)
    if len(s) != TWO_GBITS.dim:
        raise ValueError(f"expected a two-gbit state of dim {TWO_GBITS.dim}, got {len(s)}")
    P = table_from_state(TWO_GBITS, s)
    return sum(((-1) ** (a1 + a2)) * P[((A1, A2), (a1, a2))] for a1 in (0, 1) for a2 in (0, 1))


def chsh_value(s: Sequence, sys: SystemSpec | None = None) -> Fraction:
    """``E(X,X) + E(X,Z) + E(Z,X) - E(Z,Z)``."""
    _require_two_gbits(sys)
    return correlator(s, 0, 0) + correlator(s, 0, 1) + correlator(s, 1, 0) - correlator(s, 1, 1)


def chsh_functional(minus: tuple[int, int] = (1, 1), sign: int = 1) -> BellFunctional:
    """CHSH with the minus sign on setting pair ``minus``, times ``sign``."""
    coeffs = {}
    for A1 in (0, 1):
        for A2 in (0, 1):
            w = -1 if (A1, A2) == tuple(minus) else 1
            for a1 in (0, 1):
                for a2 in (0, 1):
                    coeffs[((A1, A2), (a1, a2))] = sign * w * (-1) ** (a1 + a2)
    return BellFunctional(TWO_GBITS, coeffs)


def chsh_variants() -> list[BellFunctional]:
    """The eight CHSH expressions related by relabelling settings and outcomes."""
    return [
        chsh_functional(minus, sign)
        for minus in ((0, 0), (0, 1), (1, 0), (1, 1))
        for sign in (1, -1)
    ]


def max_over_vertices(f: BellFunctional, V: PolytopeVRep, only_pure: bool = False):
    """Exact maximum of ``f`` over the vertices and the first vertex attaining it."""
    if f.system != V.system:
        raise ValueError("functional and polytope belong to different systems")
    best = None
    arg = None
    for v, pure in zip(V.vertices, V.pure_product):
        if only_pure and not pure:
            continue
        val = f(v)
        if best is None or val > best:
            best, arg = val, v
    return best, arg
