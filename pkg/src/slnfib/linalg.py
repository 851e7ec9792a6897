"""Dense matrix kernel: exact rational matrices, float matrices, QR, exp/log.

Exact arithmetic (RMatrix, backed by fractions.Fraction) carries every
algebra-level computation; FMatrix (numpy float64) is used only where square
roots, exponentials or orthogonalization force floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from .errors import DimensionError, LogDomain, SingularInput

MAX_DIM = 8

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class ToleranceContext:
    """Comparison tolerances used by all floating-point checks."""

    eq_tol: float = 1e-10
    residual_tol: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.eq_tol <= self.residual_tol < 1.0):
            raise ValueError(
                "require 0 < eq_tol <= residual_tol < 1, got "
                f"({self.eq_tol}, {self.residual_tol})"
            )


DEFAULT_TOL = ToleranceContext()


def _check_dim(n: int):
    if not 2 <= n <= MAX_DIM:
        raise DimensionError(f"dimension {n} outside supported range 2..{MAX_DIM}")


class RMatrix:
    """Square matrix with exact rational entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[Scalar]]):
        n = len(rows)
        _check_dim(n)
        frozen = []
        for r in rows:
            if len(r) != n:
                raise DimensionError("RMatrix rows must form a square array")
            frozen.append(tuple(Fraction(x) for x in r))
        self.n = n
        self.rows = tuple(frozen)

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "RMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[Scalar]) -> "RMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch {self.n} vs {other.n}")
        n = self.n
        return RMatrix(
            [
                [
                    sum(self.rows[i][k] * other.rows[k][j] for k in range(n))
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    def __add__(self, other: "RMatrix") -> "RMatrix":
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch {self.n} vs {other.n}")
        return RMatrix(
            [
                [self.rows[i][j] + other.rows[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        return self + (-other)

    def __neg__(self) -> "RMatrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "RMatrix":
        c = Fraction(c)
        return RMatrix([[c * x for x in row] for row in self.rows])

    def transpose(self) -> "RMatrix":
        return RMatrix(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)]
        )

    def trace(self) -> Fraction:
        return sum(self.rows[i][i] for i in range(self.n))

    def det(self) -> Fraction:
        """Exact determinant by fraction-free-ish Gaussian elimination."""
        n = self.n
        a = [list(row) for row in self.rows]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                if a[r][col] != 0:
                    factor = a[r][col] * inv
                    for c in range(col, n):
                        a[r][c] -= factor * a[col][c]
        return det

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def __eq__(self, other) -> bool:
        return isinstance(other, RMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def to_float(self) -> "FMatrix":
        return FMatrix([[float(x) for x in row] for row in self.rows])

    def __repr__(self):
        return f"RMatrix({[[str(x) for x in row] for row in self.rows]})"


def rational_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a family of exact-rational vectors, by Gaussian elimination."""
    rows = [list(v) for v in vectors]
    rank = 0
    col_count = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < col_count:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                for c in range(col, col_count):
                    rows[r][c] -= f * rows[rank][c]
        rank += 1
        col += 1
    return rank


class FMatrix:
    """Square matrix of finite float64 entries."""

    __slots__ = ("n", "arr")

    def __init__(self, arr):
        a = np.array(arr, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"FMatrix requires a square array, got {a.shape}")
        _check_dim(a.shape[0])
        if not np.all(np.isfinite(a)):
            raise ValueError("FMatrix entries must be finite")
        a.flags.writeable = False
        self.n = a.shape[0]
        self.arr = a

    @classmethod
    def identity(cls, n: int) -> "FMatrix":
        return cls(np.eye(n))

    def __getitem__(self, ij) -> float:
        return float(self.arr[ij])

    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch {self.n} vs {other.n}")
        return FMatrix(self.arr @ other.arr)

    def __add__(self, other: "FMatrix") -> "FMatrix":
        return FMatrix(self.arr + other.arr)

    def __sub__(self, other: "FMatrix") -> "FMatrix":
        return FMatrix(self.arr - other.arr)

    def __neg__(self) -> "FMatrix":
        return FMatrix(-self.arr)

    def scale(self, c: float) -> "FMatrix":
        return FMatrix(c * self.arr)

    def transpose(self) -> "FMatrix":
        return FMatrix(self.arr.T)

    def trace(self) -> float:
        return float(np.trace(self.arr))

    def det(self) -> float:
        return float(np.linalg.det(self.arr))

    def inv(self) -> "FMatrix":
        return FMatrix(np.linalg.inv(self.arr))

    def sup(self) -> float:
        """Largest absolute entry."""
        return float(np.max(np.abs(self.arr)))

    def dist(self, other: "FMatrix") -> float:
        return (self - other).sup()

    def allclose(self, other: "FMatrix", tol: float) -> bool:
        return self.dist(other) < tol

    def __repr__(self):
        return f"FMatrix({self.arr.tolist()})"


Matrix = Union[RMatrix, FMatrix]


def multiply(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product; exact when both operands are RMatrix."""
    if isinstance(a, RMatrix) != isinstance(b, RMatrix):
        raise DimensionError("cannot mix exact and float matrices in multiply")
    return a @ b


def determinant(a: Matrix):
    return a.det()


def qr_positive(a: FMatrix, tol: ToleranceContext = DEFAULT_TOL):
    """QR factorization normalized to a strictly positive diagonal of R.

    Uniqueness of (Q, R) under the positivity constraint is what makes this
    usable as a canonical chart on the invertible matrices.
    """
    if abs(a.det()) <= tol.residual_tol:
        raise SingularInput(f"qr_positive: |det| = {abs(a.det()):.3e} too small")
    q, r = np.linalg.qr(a.arr)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs[np.newaxis, :]
    r = r * signs[:, np.newaxis]
    return FMatrix(q), FMatrix(r)


def matrix_exp(a: FMatrix) -> FMatrix:
    """Matrix exponential (scaling-and-squaring, via scipy)."""
    return FMatrix(scipy.linalg.expm(a.arr))


def matrix_log(a: FMatrix, tol: ToleranceContext = DEFAULT_TOL) -> FMatrix:
    """Principal logarithm, restricted to the ball ||a - I||_2 < 1."""
    gap = float(np.linalg.norm(a.arr - np.eye(a.n), 2))
    if gap >= 1.0:
        raise LogDomain(f"matrix_log: ||a - I|| = {gap:.4f} >= 1")
    out = scipy.linalg.logm(a.arr)
    if np.max(np.abs(np.imag(out))) > tol.residual_tol:
        raise LogDomain("matrix_log: non-real principal logarithm")
    return FMatrix(np.real(out))
