"""Group-level decompositions of SL(n, R).

* GA, the affine group x -> ax + b (a > 0), and its unimodular embedding
  g(a, b) = (1/sqrt(a)) [[a, b], [0, 1]].
* SL(2, R) = GA x S^1: g = embed(b) . rotation(theta), GA factor on the left.
* SL(n, R) = SO(n) x R^{n(n+1)/2 - 1} via positive-diagonal QR, with the
  mirrored AN-left variant used when left holonomy must act on the vector
  chart.
* The split of the vector chart into a leading block and a final R^2 factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import DimensionError, InputError, SingularInput
from .linalg import DEFAULT_TOL, FMatrix, ToleranceContext, qr_positive


@dataclass(frozen=True)
class GAElement:
    """Affine map x -> a*x + b with a > 0."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0:
            raise InputError(f"GA element needs a > 0, got a={self.a}")


GA_IDENTITY = GAElement(1.0, 0.0)


def ga_mul(g: GAElement, h: GAElement) -> GAElement:
    """Composition g o h of affine maps."""
    return GAElement(g.a * h.a, g.a * h.b + g.b)


def ga_inv(g: GAElement) -> GAElement:
    return GAElement(1.0 / g.a, -g.b / g.a)


def ga_embed(g: GAElement) -> FMatrix:
    """Unimodular embedding (1/sqrt(a)) [[a, b], [0, 1]] into SL(2, R)."""
    s = math.sqrt(g.a)
    return FMatrix([[s, g.b / s], [0.0, 1.0 / s]])


def ga_power(g: GAElement, t: float) -> GAElement:
    """One-parameter subgroup through g, evaluated at time t."""
    if abs(g.a - 1.0) < 1e-14:
        return GAElement(1.0, t * g.b)
    at = g.a ** t
    return GAElement(at, g.b * (at - 1.0) / (g.a - 1.0))


@dataclass(frozen=True)
class CircleAngle:
    """Angle with canonical representative in [0, 2*pi)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))


def rotation(angle) -> FMatrix:
    """Rotation matrix [[c, -s], [s, c]]."""
    t = angle.theta if isinstance(angle, CircleAngle) else float(angle)
    c, s = math.cos(t), math.sin(t)
    return FMatrix([[c, -s], [s, c]])


def section(angle) -> FMatrix:
    """Section of the circle projection: the pure rotation at that angle."""
    return rotation(angle)


def _require_unimodular(g: FMatrix, tol: ToleranceContext):
    d = g.det()
    if abs(d - 1.0) > tol.eq_tol * 100:
        raise SingularInput(f"matrix has det {d:.12f}, not in SL(n)")


def iwasawa_sl2(
    g: FMatrix, tol: ToleranceContext = DEFAULT_TOL
) -> Tuple[GAElement, CircleAngle]:
    """Unique factorization g = ga_embed(b) . rotation(theta).

    Writing the GA factor as [[p, q], [0, 1/p]] with p > 0, the bottom row of
    g is (sin(theta), cos(theta)) / p, which pins down both factors.
    """
    if g.n != 2:
        raise DimensionError("iwasawa_sl2 requires a 2x2 matrix")
    _require_unimodular(g, tol)
    s_raw, c_raw = g[1, 0], g[1, 1]
    norm = math.hypot(s_raw, c_raw)
    p = 1.0 / norm
    theta = math.atan2(s_raw, c_raw)
    c, s = math.cos(theta), math.sin(theta)
    q = g[0, 0] * s + g[0, 1] * c
    return GAElement(p * p, q * p), CircleAngle(theta)


def circle_project(g: FMatrix, tol: ToleranceContext = DEFAULT_TOL) -> CircleAngle:
    """Projection SL(2, R) -> S^1 discarding the GA factor."""
    return iwasawa_sl2(g, tol)[1]


def chart_length(n: int) -> int:
    return n * (n + 1) // 2 - 1


@dataclass(frozen=True)
class IwasawaFactors:
    """Orthogonal factor plus the vector chart of the AN part.

    chart layout: n-1 log-diagonal coordinates of R (last one implied by
    det R = 1), then the strictly-upper entries of R divided by their row
    diagonal, row-major.
    """

    k: FMatrix
    chart: Tuple[float, ...]

    @property
    def n(self) -> int:
        return self.k.n


def _chart_from_r(r: FMatrix) -> Tuple[float, ...]:
    n = r.n
    chart: List[float] = [math.log(r[i, i]) for i in range(n - 1)]
    for i in range(n):
        for j in range(i + 1, n):
            chart.append(r[i, j] / r[i, i])
    return tuple(chart)


def _r_from_chart(n: int, chart) -> FMatrix:
    logs = list(chart[: n - 1])
    diag = [math.exp(x) for x in logs]
    diag.append(1.0 / math.prod(diag))
    r = np.zeros((n, n))
    pos = n - 1
    for i in range(n):
        r[i, i] = diag[i]
        for j in range(i + 1, n):
            r[i, j] = chart[pos] * diag[i]
            pos += 1
    return FMatrix(r)


def iwasawa_sln(g: FMatrix, tol: ToleranceContext = DEFAULT_TOL) -> IwasawaFactors:
    """SO(n)-left decomposition g = K . R via positive-diagonal QR."""
    _require_unimodular(g, tol)
    q, r = qr_positive(g, tol)
    # det R > 0 and det g = 1 force det Q = +1; asserted, not assumed.
    assert abs(q.det() - 1.0) < 1e-6, "QR of a unimodular matrix lost det Q = +1"
    return IwasawaFactors(q, _chart_from_r(r))


def iwasawa_recompose(f: IwasawaFactors) -> FMatrix:
    if len(f.chart) != chart_length(f.n):
        raise DimensionError(
            f"chart length {len(f.chart)} != {chart_length(f.n)} for n={f.n}"
        )
    return f.k @ _r_from_chart(f.n, f.chart)


def iwasawa_sln_ank(g: FMatrix, tol: ToleranceContext = DEFAULT_TOL) -> IwasawaFactors:
    """Mirrored decomposition g = R . K with the triangular part on the left.

    Left translation by upper-triangular holonomy then acts on the chart by
    translation in the log-diagonal coordinates, which is what makes
    chart-difference cochains of an equivariant developing map well defined.
    """
    _require_unimodular(g, tol)
    q_inv, r_inv = qr_positive(g.inv(), tol)
    r = r_inv.inv()
    k = q_inv.transpose()
    assert abs(k.det() - 1.0) < 1e-6
    return IwasawaFactors(k, _chart_from_r(r))


def iwasawa_recompose_ank(f: IwasawaFactors) -> FMatrix:
    return _r_from_chart(f.n, f.chart) @ f.k


@dataclass(frozen=True)
class FactorSplit:
    """Designation of the last two chart coordinates as the R^2 factor."""

    n: int

    def __post_init__(self):
        if self.n < 2 or chart_length(self.n) < 2:
            raise DimensionError(f"no R^2 factor available for n={self.n}")

    @property
    def chart_len(self) -> int:
        return chart_length(self.n)

    @property
    def g1_coords(self) -> Tuple[int, ...]:
        return tuple(range(self.chart_len - 2))

    @property
    def g2_coords(self) -> Tuple[int, int]:
        return (self.chart_len - 2, self.chart_len - 1)


def factor_split(n: int) -> FactorSplit:
    return FactorSplit(n)


def abelian_project(
    g: FMatrix, tol: ToleranceContext = DEFAULT_TOL
) -> Tuple[float, float]:
    """The two R^2 chart coordinates of g under the factor split."""
    split = factor_split(g.n)
    chart = iwasawa_sln(g, tol).chart
    i, j = split.g2_coords
    return (chart[i], chart[j])
