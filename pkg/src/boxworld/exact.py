"""Exact rational vectors and matrices.

Every scalar is a :class:`fractions.Fraction`, so results are always in
lowest terms and equality is structural. Index flattening for tensor
products is lexicographic with the first factor most significant, i.e.
``tensor(u, v)[i * len(v) + j] == u[i] * v[j]``; every other module
inherits this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "RVector",
    "RMatrix",
    "SolveResult",
    "SingularMatrixError",
    "DimensionError",
    "to_rational",
    "format_rational",
    "solve_exact",
    "rank",
    "invert",
    "tensor",
    "tensor_map",
    "rref",
]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`invert` for a matrix without an inverse."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular: rank {rank} < {size}")
        self.rank = rank
        self.size = size


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: nothing in this package is allowed to round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an int, Fraction or 'p/q' string")
    # numpy integers and similar
    return Fraction(int(x))


def format_rational(q: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is one."""
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class RVector(tuple):
    """Immutable vector of Fractions.

    A tuple subclass, so it hashes and compares entrywise. ``+``, ``-`` and
    scalar ``*`` are vector operations (not concatenation / repetition), and
    ``u @ v`` is the dot product.
    """

    def __new__(cls, entries: Iterable = ()):
        return super().__new__(cls, (to_rational(x) for x in entries))

    @classmethod
    def zeros(cls, dim: int) -> "RVector":
        return cls([0] * dim)

    @classmethod
    def unit(cls, dim: int, index: int) -> "RVector":
        v = [0] * dim
        v[index] = 1
        return cls(v)

    @property
    def dim(self) -> int:
        return len(self)

    def _check(self, other) -> None:
        if len(other) != len(self):
            raise DimensionError(f"vector dims differ: {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._check(other)
        return RVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        self._check(other)
        return RVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return RVector(-a for a in self)

    def __mul__(self, scalar):
        c = to_rational(scalar)
        return RVector(c * a for a in self)

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return sum((a * b for a, b in zip(self, other) if a and b), Fraction(0))

    def dot(self, other) -> Fraction:
        return self @ other

    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self) -> str:
        return "RVector([" + ", ".join(format_rational(x) for x in self) + "])"


class RMatrix:
    """Immutable row-major matrix of Fractions."""

    __slots__ = ("_rows", "_shape", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(RVector(r) for r in rows)
        if not rows:
            raise DimensionError("matrix needs at least one row")
        ncols = len(rows[0])
        if ncols == 0 or any(len(r) != ncols for r in rows):
            raise DimensionError("matrix rows must be non-empty and of equal length")
        self._rows = rows
        self._shape = (len(rows), ncols)
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RMatrix":
        return cls(zip(*columns))

    @property
    def rows(self) -> int:
        return self._shape[0]

    @property
    def cols(self) -> int:
        return self._shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    def row(self, i: int) -> RVector:
        return self._rows[i]

    def column(self, j: int) -> RVector:
        return RVector(r[j] for r in self._rows)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def __iter__(self):
        return iter(self._rows)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    @property
    def T(self) -> "RMatrix":
        return RMatrix(zip(*self._rows))

    def transpose(self) -> "RMatrix":
        return self.T

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def key(self) -> tuple:
        """Canonical serialized form used for exact deduplication."""
        return tuple(tuple(format_rational(x) for x in r) for r in self._rows)

    def __add__(self, other: "RMatrix") -> "RMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shapes differ: {self.shape} vs {other.shape}")
        return RMatrix(a + b for a, b in zip(self._rows, other._rows))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shapes differ: {self.shape} vs {other.shape}")
        return RMatrix(a - b for a, b in zip(self._rows, other._rows))

    def __neg__(self) -> "RMatrix":
        return RMatrix(-r for r in self._rows)

    def __mul__(self, scalar) -> "RMatrix":
        return RMatrix(r * scalar for r in self._rows)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other._rows))
            return RMatrix(
                [_dot(r, c) for c in cols] for r in self._rows
            )
        if self.cols != len(other):
            raise DimensionError(f"cannot apply {self.shape} matrix to vector of dim {len(other)}")
        return RVector(_dot(r, other) for r in self._rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._rows)
        return f"RMatrix([{body}])"


def _dot(a, b) -> Fraction:
    total = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


def _as_matrix(A) -> RMatrix:
    return A if isinstance(A, RMatrix) else RMatrix(A)


# -- elimination -------------------------------------------------------------


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form of ``rows`` restricted to the first ``ncols``.

    Columns past ``ncols`` are carried along (augmented part) but never used
    as pivots. Returns ``(reduced_rows, pivot_columns)`` with the rows as
    lists of Fractions.
    """
    work = [[to_rational(x) for x in r] for r in rows]
    if not work:
        return work, []
    if ncols is None:
        ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        prow = work[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            work[r] = prow
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        pivots.append(c)
        r += 1
    return work, pivots


def rank(A) -> int:
    """Exact rank by rational Gaussian elimination."""
    A = _as_matrix(A)
    _, pivots = rref(A.tolist())
    return len(pivots)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of :func:`solve_exact`.

    ``status`` is one of ``"unique"``, ``"underdetermined"`` or
    ``"inconsistent"``. For a consistent system ``solution`` is a particular
    solution and ``kernel`` a basis of the null space of ``A`` (empty when
    unique). For an inconsistent system ``certificate`` is a row
    combination ``y`` with ``y @ A == 0`` and ``y @ b != 0``.
    """

    status: str
    solution: RVector | None = None
    kernel: tuple[RVector, ...] = ()
    certificate: RVector | None = None

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    @property
    def unique(self) -> bool:
        return self.status == "unique"


def solve_exact(A, b) -> SolveResult:
    """Solve ``A x = b`` exactly."""
    A = _as_matrix(A)
    b = RVector(b)
    if A.rows != len(b):
        raise DimensionError(f"A has {A.rows} rows but b has dim {len(b)}")
    m, n = A.shape
    # augment with b and an identity block that records the row operations
    aug = [
        list(A.row(i)) + [b[i]] + [Fraction(int(i == j)) for j in range(m)]
        for i in range(m)
    ]
    red, pivots = rref(aug, ncols=n)
    for row in red[len(pivots):]:
        if row[n]:
            return SolveResult("inconsistent", certificate=RVector(row[n + 1:]))
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    free = [c for c in range(n) if c not in set(pivots)]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        kernel.append(RVector(v))
    status = "unique" if not free else "underdetermined"
    return SolveResult(status, solution=RVector(x), kernel=tuple(kernel))


def invert(A) -> RMatrix:
    """Exact inverse of a square matrix; :class:`SingularMatrixError` otherwise."""
    A = _as_matrix(A)
    if not A.is_square():
        raise DimensionError(f"cannot invert non-square {A.shape} matrix")
    n = A.rows
    aug = [list(A.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, ncols=n)
    if len(pivots) < n:
        raise SingularMatrixError(len(pivots), n)
    return RMatrix(row[n:] for row in red)


# -- tensor products ---------------------------------------------------------


def tensor(*vectors: Sequence) -> RVector:
    """Kronecker product of vectors, first factor most significant."""
    if not vectors:
        raise DimensionError("tensor of zero vectors")
    out = [to_rational(x) for x in vectors[0]]
    for v in vectors[1:]:
        v = [to_rational(x) for x in v]
        out = [a * b for a in out for b in v]
    return RVector(out)


def tensor_map(*matrices) -> RMatrix:
    """Kronecker product of matrices, consistent with :func:`tensor`."""
    if not matrices:
        raise DimensionError("tensor_map of zero matrices")
    out = _as_matrix(matrices[0]).tolist()
    for M in matrices[1:]:
        M = _as_matrix(M).tolist()
        out = [
            [a * b for a in ra for b in rb]
            for ra in out
            for rb in M
        ]
    return RMatrix(out)
