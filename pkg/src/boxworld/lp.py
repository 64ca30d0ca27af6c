"""Exact phase-1 simplex for ``{x >= 0 : A x = b}``.

Bland's rule (lowest index enters, lowest basis index leaves on ties)
guarantees termination. On infeasibility the final duals give a Farkas
certificate ``y`` with ``y @ A >= 0`` columnwise and ``y @ b < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from boxworld.exact import DimensionError, RVector, to_rational


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    x: RVector | None = None
    farkas: RVector | None = None
    pivots: int = 0


def nonnegative_solve(columns: Sequence[Sequence], b: Sequence) -> Feasibility:
    """Find ``x >= 0`` with ``sum_j x_j columns[j] == b``.

    ``columns`` are the generators; the returned ``x`` is a basic feasible
    solution (at most ``len(b)`` nonzeros).
    """
    b = [to_rational(v) for v in b]
    m = len(b)
    n = len(columns)
    cols = [[to_rational(v) for v in c] for c in columns]
    if any(len(c) != m for c in cols):
        raise DimensionError("generator dimension does not match target")

    # rows scaled so the right-hand side is nonnegative
    sign = [(-1 if v < 0 else 1) for v in b]
    # tableau rows: [A | I_art | rhs]; artificials are columns n..n+m-1
    T = [
        [sign[i] * cols[j][i] for j in range(n)]
        + [Fraction(int(i == a)) for a in range(m)]
        + [sign[i] * b[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimise sum of artificials; reduced cost row = -sum of rows
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            if j < n or j == width:
                cost[j] -= T[i][j]
    pivots = 0
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # pragma: no cover - phase 1 is bounded below by zero
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][enter]:
                f = T[i][enter]
                T[i] = [a - f * c for a, c in zip(T[i], T[r])]
        if cost[enter]:
            f = cost[enter]
            cost = [a - f * c for a, c in zip(cost, T[r])]
        basis[r] = enter
        pivots += 1

    if -cost[width] != 0:
        # reduced cost of artificial i is 1 - y_i (scaled row i); y satisfies y A <= 0, y b > 0
        y = [sign[i] * (1 - cost[n + i]) for i in range(m)]
        return Feasibility(False, farkas=RVector(-v for v in y), pivots=pivots)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
    return Feasibility(True, x=RVector(x), pivots=pivots)
