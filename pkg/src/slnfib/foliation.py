"""Lie-foliation data on triangulated tori and its structural checks.

A foliation spec bundles a complex with covering data, a flat 1-cochain, a
holonomy representation of the deck group, and a finite window of the
developing map on the covering grid.  The checks are the discrete versions of
the defining conditions: cocycle compatibility on chart overlaps, the
Maurer-Cartan equation plus pointwise surjectivity, and equivariance
D(deck_g . x) = h(g) . D(x).

Group tags: "GA", "SL2", "SLn", "R<k>".  Elements are GAElement, FMatrix, and
float tuples respectively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CheckFailed, DimensionError, InputError, LogDomain
from .linalg import DEFAULT_TOL, FMatrix, RMatrix, ToleranceContext, matrix_log
from .groups import (
    GAElement,
    ga_embed,
    ga_inv,
    ga_mul,
    ga_power,
    iwasawa_sl2,
    iwasawa_sln_ank,
    rotation,
)
from .complexes import (
    Cycle,
    LieCochain1,
    ScalarCochain1,
    SimplicialComplex,
    coboundary,
    coordinate_cochain,
    holonomy_residual,
    torus_complex,
)

GroupElement = Union[GAElement, FMatrix, Tuple[float, ...]]

RK_PREFIX = "R"


def rk_dim(tag: str) -> int:
    if not tag.startswith(RK_PREFIX):
        raise InputError(f"not an abelian tag: {tag}")
    return int(tag[len(RK_PREFIX):])


def group_identity(tag: str, n: int = 2) -> GroupElement:
    if tag == "GA":
        return GAElement(1.0, 0.0)
    if tag in ("SL2", "SLn"):
        return FMatrix(np.eye(n))
    return tuple(0.0 for _ in range(rk_dim(tag)))


def group_mul(tag: str, a: GroupElement, b: GroupElement) -> GroupElement:
    if tag == "GA":
        return ga_mul(a, b)
    if tag in ("SL2", "SLn"):
        return a @ b
    return tuple(x + y for x, y in zip(a, b))


def group_inv(tag: str, a: GroupElement) -> GroupElement:
    if tag == "GA":
        return ga_inv(a)
    if tag in ("SL2", "SLn"):
        return a.inv()
    return tuple(-x for x in a)


def group_dist(tag: str, a: GroupElement, b: GroupElement) -> float:
    if tag == "GA":
        return max(abs(a.a - b.a), abs(a.b - b.b))
    if tag in ("SL2", "SLn"):
        return a.dist(b)
    return max(abs(x - y) for x, y in zip(a, b))


def group_power(tag: str, a: GroupElement, k: int) -> GroupElement:
    out = group_identity(tag, getattr(a, "n", 2))
    g = a if k >= 0 else group_inv(tag, a)
    for _ in range(abs(k)):
        out = group_mul(tag, out, g)
    return out


# ---------------------------------------------------------------------------
# Foliated cocycles


@dataclass
class FoliatedCocycle:
    """Charts with submersion samples and left-translation transitions."""

    tag: str
    charts: List[frozenset]
    submersions: List[Dict[int, GroupElement]]
    transitions: Dict[Tuple[int, int], GroupElement]

    def __post_init__(self):
        if len(self.charts) != len(self.submersions):
            raise InputError("one submersion sample set per chart required")


@dataclass
class CocycleReport:
    max_transition_violation: float
    max_cocycle_violation: float
    worst_overlap: Optional[Tuple[int, int]]

    def passed(self, tol: float) -> bool:
        return (
            self.max_transition_violation <= tol
            and self.max_cocycle_violation <= tol
        )

    def to_dict(self):
        return {
            "max_transition_violation": self.max_transition_violation,
            "max_cocycle_violation": self.max_cocycle_violation,
            "worst_overlap": list(self.worst_overlap) if self.worst_overlap else None,
        }


def check_cocycle(c: FoliatedCocycle) -> CocycleReport:
    """Verify f_j = gamma_ij . f_i on overlaps and the triple-cocycle identity.

    Violations are reported, never raised; the report carries the maxima.
    """
    tag = c.tag
    max_trans, worst = 0.0, None
    n_charts = len(c.charts)
    for i in range(n_charts):
        for j in range(n_charts):
            if i == j or (i, j) not in c.transitions:
                continue
            gamma = c.transitions[(i, j)]
            for v in c.charts[i] & c.charts[j]:
                expect = group_mul(tag, gamma, c.submersions[i][v])
                dev = group_dist(tag, c.submersions[j][v], expect)
                if dev > max_trans:
                    max_trans, worst = dev, (i, j)
    max_coc = 0.0
    for i in range(n_charts):
        if (i, i) in c.transitions:
            max_coc = max(
                max_coc,
                group_dist(tag, c.transitions[(i, i)], group_identity(tag)),
            )
        for j in range(n_charts):
            for k in range(n_charts):
                if (
                    (i, j) in c.transitions
                    and (j, k) in c.transitions
                    and (i, k) in c.transitions
                    and c.charts[i] & c.charts[j] & c.charts[k]
                ):
                    composed = group_mul(
                        tag, c.transitions[(j, k)], c.transitions[(i, j)]
                    )
                    max_coc = max(
                        max_coc, group_dist(tag, composed, c.transitions[(i, k)])
                    )
    return CocycleReport(max_trans, max_coc, worst)


# ---------------------------------------------------------------------------
# Holonomy, developing map, foliation spec


@dataclass
class HolonomyRep:
    """Images of the Z^d deck generators; must commute for abelian deck."""

    tag: str
    images: List[GroupElement]

    def validate(self, tol: ToleranceContext = DEFAULT_TOL):
        for i, a in enumerate(self.images):
            for b in self.images[i + 1:]:
                ab = group_mul(self.tag, a, b)
                ba = group_mul(self.tag, b, a)
                if group_dist(self.tag, ab, ba) > tol.eq_tol:
                    raise InputError("deck generator images do not commute")


@dataclass
class DevelopingMap:
    """Finite sample window of the developing map on the covering grid."""

    tag: str
    samples: Dict[Tuple[int, ...], GroupElement]


@dataclass
class LieFoliationSpec:
    """A complex, a flat cochain, a holonomy rep, and developing samples."""

    complex: SimplicialComplex
    tag: str
    holonomy: HolonomyRep
    developing: DevelopingMap
    cochain: Optional[LieCochain1] = None
    scalar_cochains: Optional[List[ScalarCochain1]] = None
    n: int = 2  # matrix dimension for matrix-group tags

    def __post_init__(self):
        if self.complex.covering is None:
            raise InputError("foliation specs require covering data")
        if (self.cochain is None) == (self.scalar_cochains is None):
            raise InputError("exactly one of cochain / scalar_cochains required")
        self.holonomy.validate()

    def is_abelian(self) -> bool:
        return self.scalar_cochains is not None

    def developing_value(self, z: Tuple[int, ...]) -> GroupElement:
        """Extend the sample window by equivariance D(deck.z) = h . D(z)."""
        if z in self.developing.samples:
            return self.developing.samples[z]
        cov = self.complex.covering
        shifts = [c // cov.m for c in z]
        base = tuple(c % cov.m for c in z)
        out = self.developing.samples[base]
        for gen, k in enumerate(shifts):
            if k:
                out = group_mul(
                    self.tag, group_power(self.tag, self.holonomy.images[gen], k), out
                )
        return out

    def edge_lift(self, u: int, v: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Canonical covering lift of an oriented base edge."""
        cov = self.complex.covering
        zu = self.complex.vertex_coords[u]
        zv_raw = self.complex.vertex_coords[v]
        e = tuple((b - a) % cov.m for a, b in zip(zu, zv_raw))
        if any(x not in (0, 1) for x in e):
            # oriented the other way round in the grid construction
            return tuple(reversed(self.edge_lift(v, u)))
        return zu, tuple(a + x for a, x in zip(zu, e))

    def validate_consistency(self, tol: ToleranceContext = DEFAULT_TOL) -> float:
        """Max deviation between the cochain and developing increments."""
        worst = 0.0
        for u, v in self.complex.edges:
            zu, zv = self.edge_lift(u, v)
            du, dv = self.developing_value(zu), self.developing_value(zv)
            if self.is_abelian():
                inc = tuple(b - a for a, b in zip(du, dv))
                got = tuple(w(u, v) for w in self.scalar_cochains)
                worst = max(
                    worst, max(abs(float(x) - y) for x, y in zip(got, inc))
                )
            else:
                gu = ga_embed(du) if self.tag == "GA" else du
                gv = ga_embed(dv) if self.tag == "GA" else dv
                logged = matrix_log(gu.inv() @ gv)
                val = self.cochain(u, v)
                if isinstance(val, RMatrix):
                    val = val.to_float()
                worst = max(worst, logged.dist(val))
        return worst


# ---------------------------------------------------------------------------
# Maurer-Cartan check


@dataclass
class MCReport:
    flat: bool
    max_flatness_residual: float
    surjective: bool
    failing_vertices: List[int]
    failing_triangles: List[int]

    def passed(self) -> bool:
        return self.flat and self.surjective

    def to_dict(self):
        return {
            "flat": self.flat,
            "max_flatness_residual": self.max_flatness_residual,
            "surjective": self.surjective,
            "failing_vertices": self.failing_vertices,
            "failing_triangles": self.failing_triangles,
        }


def _algebra_dim(spec: LieFoliationSpec) -> int:
    if spec.is_abelian():
        return rk_dim(spec.tag)
    if spec.tag == "GA":
        return 2
    return spec.n * spec.n - 1


def _edge_value_vector(spec: LieFoliationSpec, u: int, v: int) -> List[float]:
    if spec.is_abelian():
        return [float(w(u, v)) for w in spec.scalar_cochains]
    val = spec.cochain(u, v)
    if isinstance(val, RMatrix):
        val = val.to_float()
    if spec.tag == "GA":
        # GA subalgebra of sl(2): span of diag(t, -t) and strict-upper s
        return [val[0, 0], val[0, 1]]
    return [val[i, j] for i in range(spec.n) for j in range(spec.n)]


RANK_THRESHOLD = 1e-8  # singular values below threshold * sigma_max count as zero


def check_mc(
    spec: LieFoliationSpec,
    tol: ToleranceContext = DEFAULT_TOL,
    flatness_tol: Optional[float] = None,
) -> MCReport:
    """Discrete Maurer-Cartan conditions.

    Flatness: abelian cochains must have vanishing coboundary within eq_tol;
    matrix-valued cochains are judged by the triangle holonomy residual (the
    discretization-free oracle), default tolerance 1e-8.  Surjectivity: the
    cochain values on the edges incident to each vertex must span the target
    algebra, by exact rank for rational data and thresholded SVD otherwise.
    """
    failing_triangles: List[int] = []
    max_res = 0.0
    if spec.is_abelian():
        limit = flatness_tol if flatness_tol is not None else tol.eq_tol
        per_tri = [
            max(abs(float(coboundary(w)[t])) for w in spec.scalar_cochains)
            for t in range(len(spec.complex.triangles))
        ]
    else:
        limit = flatness_tol if flatness_tol is not None else 1e-8
        per_tri = [r.sup() for r in holonomy_residual(spec.cochain)]
    for t, r in enumerate(per_tri):
        max_res = max(max_res, r)
        if r > limit:
            failing_triangles.append(t)

    dim = _algebra_dim(spec)
    failing_vertices: List[int] = []
    for vtx in range(spec.complex.n_vertices):
        vecs = [
            _edge_value_vector(spec, u, v)
            for u, v in spec.complex.incident_edges(vtx)
        ]
        if len(vecs) < dim:
            failing_vertices.append(vtx)
            continue
        s = np.linalg.svd(np.array(vecs), compute_uv=False)
        rank = int(np.sum(s > RANK_THRESHOLD * s[0])) if s[0] > 0 else 0
        if rank < dim:
            failing_vertices.append(vtx)

    return MCReport(
        flat=not failing_triangles,
        max_flatness_residual=max_res,
        surjective=not failing_vertices,
        failing_vertices=failing_vertices,
        failing_triangles=failing_triangles,
    )


# ---------------------------------------------------------------------------
# Equivariance


@dataclass
class EquivarianceReport:
    max_deviation: float
    checked_pairs: int

    def passed(self, tol: float) -> bool:
        return self.max_deviation <= tol

    def to_dict(self):
        return {
            "max_deviation": self.max_deviation,
            "checked_pairs": self.checked_pairs,
        }


def check_equivariance(spec: LieFoliationSpec) -> EquivarianceReport:
    """Verify D(deck_g . x) = h(g) . D(x) over the stored sample window."""
    samples = spec.developing.samples
    cov = spec.complex.covering
    worst, count = 0.0, 0
    for z, dz in samples.items():
        for gen, h in enumerate(spec.holonomy.images):
            shifted = cov.deck(z, gen)
            if shifted not in samples:
                continue
            expect = group_mul(spec.tag, h, dz)
            worst = max(worst, group_dist(spec.tag, samples[shifted], expect))
            count += 1
    if count == 0:
        raise InputError("developing window too small for any equivariance pair")
    return EquivarianceReport(worst, count)


# ---------------------------------------------------------------------------
# Constructors


def _window_coords(cov, copies: int):
    return cov.window(copies)


def linear_torus_spec(
    m: int, rows: Sequence[Sequence[float]], window_copies: int = 3
) -> LieFoliationSpec:
    """Abelian R^k foliation on T^d with developing D(z) = A . z / m.

    rows is the k x d coefficient matrix A; holonomy of the axis-k deck
    generator is the k-th column of A.
    """
    k = len(rows)
    d = len(rows[0])
    complex = torus_complex(d, m)
    cochains = []
    duals = [coordinate_cochain(complex, ax) for ax in range(d)]
    for row in rows:
        w = duals[0].scale(row[0])
        for ax in range(1, d):
            w = w + duals[ax].scale(row[ax])
        cochains.append(w)
    samples = {
        z: tuple(
            sum(row[ax] * z[ax] for ax in range(d)) / m for row in rows
        )
        for z in _window_coords(complex.covering, window_copies)
    }
    hol = HolonomyRep(f"R{k}", [tuple(float(row[ax]) for row in rows) for ax in range(d)])
    return LieFoliationSpec(
        complex=complex,
        tag=f"R{k}",
        holonomy=hol,
        developing=DevelopingMap(f"R{k}", samples),
        scalar_cochains=cochains,
    )


def ga_suspension(m: int, hol: GAElement, window_copies: int = 3) -> LieFoliationSpec:
    """GA foliation on a circle, suspended from one holonomy element.

    The developing map follows the one-parameter subgroup through hol, so the
    deck shift by m multiplies by hol on the left.
    """
    complex = torus_complex(1, m)
    samples = {
        z: ga_power(hol, z[0] / m)
        for z in _window_coords(complex.covering, window_copies)
    }
    values = {}
    for u, v in complex.edges:
        zu = complex.vertex_coords[u]
        zv = (zu[0] + 1,)
        gu = ga_embed(ga_power(hol, zu[0] / m))
        gv = ga_embed(ga_power(hol, zv[0] / m))
        values[(u, v)] = matrix_log(gu.inv() @ gv)
    return LieFoliationSpec(
        complex=complex,
        tag="GA",
        holonomy=HolonomyRep("GA", [hol]),
        developing=DevelopingMap("GA", samples),
        cochain=LieCochain1(complex, values),
    )


def product_foliation(
    base: LieFoliationSpec, window_copies: int = 3
) -> LieFoliationSpec:
    """SL(2) foliation on base x S^1 with D(x, y) = embed(D0(x)) . sigma(y).

    The base must be a GA foliation on a circle; the circle factor reuses the
    base subdivision, the section sigma winds once per fundamental domain, and
    holonomy is extended trivially on the new factor.
    """
    if base.tag != "GA":
        raise InputError(f"product construction needs a GA base, got {base.tag}")
    cov = base.complex.covering
    if cov is None or cov.d != 1:
        raise InputError("product construction needs a circle base")
    m = cov.m
    complex = torus_complex(2, m)

    def dev(z):
        d0 = base.developing_value((z[0],))
        return ga_embed(d0) @ rotation(2.0 * math.pi * z[1] / m)

    samples = {z: dev(z) for z in _window_coords(complex.covering, window_copies)}
    values = {}
    for u, v in complex.edges:
        zu = complex.vertex_coords[u]
        e = tuple(
            (complex.vertex_coords[v][i] - zu[i]) % m for i in range(2)
        )
        zv = (zu[0] + e[0], zu[1] + e[1])
        try:
            values[(u, v)] = matrix_log(dev(zu).inv() @ dev(zv))
        except LogDomain as exc:
            raise InputError(
                f"subdivision m={m} too coarse for edge logarithms "
                f"(rotation step 2*pi/{m}); use m >= 8"
            ) from exc
    spec = LieFoliationSpec(
        complex=complex,
        tag="SL2",
        holonomy=HolonomyRep(
            "SL2", [ga_embed(base.holonomy.images[0]), FMatrix(np.eye(2))]
        ),
        developing=DevelopingMap("SL2", samples),
        cochain=LieCochain1(complex, values),
        n=2,
    )
    # constructor contract: never emit an unchecked spec
    report = check_mc(spec)
    if not report.flat:
        raise CheckFailed("product foliation failed the flatness check")
    if spec.validate_consistency() > DEFAULT_TOL.residual_tol * 10:
        raise CheckFailed("product foliation cochain inconsistent with developing map")
    return spec


# ---------------------------------------------------------------------------
# Factor projection


def _ank_chart(g: FMatrix) -> Tuple[float, ...]:
    return iwasawa_sln_ank(g).chart


def project_foliation(
    spec: LieFoliationSpec,
    which: int,
    tol: ToleranceContext = DEFAULT_TOL,
    split_sizes: Optional[Tuple[int, int]] = None,
) -> LieFoliationSpec:
    """Project a product-structured foliation onto one factor.

    Abelian specs split by coordinates.  SL(2)/SL(n) specs use the Iwasawa
    product: factor 1 is the GA part (SL(2) only), factor 2 the final two
    coordinates of the triangular-left vector chart.  Projected scalar
    cochains are rebuilt from chart differences of the developing map and
    re-verified for closedness; a violation raises CheckFailed rather than
    propagating an unsound fibration input.
    """
    if which not in (1, 2):
        raise InputError("factor index must be 1 or 2")
    if spec.is_abelian():
        k = rk_dim(spec.tag)
        if split_sizes is None:
            split_sizes = (k - 2, 2) if k > 2 else (1, k - 1)
        k1, k2 = split_sizes
        if k1 + k2 != k or k1 < 1 or k2 < 1:
            raise InputError(f"bad split {split_sizes} of R^{k}")
        sel = range(k1) if which == 1 else range(k1, k)
        sel = list(sel)
        new_k = len(sel)
        tag = f"R{new_k}"
        cochains = [spec.scalar_cochains[i] for i in sel]
        samples = {
            z: tuple(val[i] for i in sel)
            for z, val in spec.developing.samples.items()
        }
        hol = HolonomyRep(tag, [tuple(h[i] for i in sel) for h in spec.holonomy.images])
        out = LieFoliationSpec(
            complex=spec.complex,
            tag=tag,
            holonomy=hol,
            developing=DevelopingMap(tag, samples),
            scalar_cochains=cochains,
        )
        _require_closed(out, tol)
        return out

    if spec.tag not in ("SL2", "SLn"):
        raise InputError(f"no product structure on tag {spec.tag}")

    if which == 1:
        if spec.tag != "SL2":
            raise InputError("factor 1 (GA part) is only defined for SL(2) specs")
        samples = {
            z: iwasawa_sl2(g, tol)[0] for z, g in spec.developing.samples.items()
        }
        hol = HolonomyRep(
            "GA", [iwasawa_sl2(h, tol)[0] for h in spec.holonomy.images]
        )
        values = {}
        for u, v in spec.complex.edges:
            zu, zv = spec.edge_lift(u, v)
            gu = ga_embed(iwasawa_sl2(spec.developing_value(zu), tol)[0])
            gv = ga_embed(iwasawa_sl2(spec.developing_value(zv), tol)[0])
            values[(u, v)] = matrix_log(gu.inv() @ gv)
        return LieFoliationSpec(
            complex=spec.complex,
            tag="GA",
            holonomy=hol,
            developing=DevelopingMap("GA", samples),
            cochain=LieCochain1(spec.complex, values),
        )

    # which == 2: the abelian R^2 chart factor
    chart_len = spec.n * (spec.n + 1) // 2 - 1
    coords = (chart_len - 2, chart_len - 1)
    values1, values2 = {}, {}
    for u, v in spec.complex.edges:
        zu, zv = spec.edge_lift(u, v)
        cu = _ank_chart(spec.developing_value(zu))
        cv = _ank_chart(spec.developing_value(zv))
        values1[(u, v)] = cv[coords[0]] - cu[coords[0]]
        values2[(u, v)] = cv[coords[1]] - cu[coords[1]]
    cochains = [
        ScalarCochain1(spec.complex, values1),
        ScalarCochain1(spec.complex, values2),
    ]
    samples = {
        z: tuple(_ank_chart(g)[c] for c in coords)
        for z, g in spec.developing.samples.items()
    }
    hol = HolonomyRep(
        "R2", [tuple(_ank_chart(h)[c] for c in coords) for h in spec.holonomy.images]
    )
    out = LieFoliationSpec(
        complex=spec.complex,
        tag="R2",
        holonomy=hol,
        developing=DevelopingMap("R2", samples),
        scalar_cochains=cochains,
    )
    _require_closed(out, tol)
    return out


def _require_closed(spec: LieFoliationSpec, tol: ToleranceContext):
    worst = 0.0
    for w in spec.scalar_cochains:
        worst = max(worst, max((abs(float(x)) for x in coboundary(w)), default=0.0))
    if worst > tol.residual_tol:
        raise CheckFailed(
            f"projected cochain is not closed: max coboundary {worst:.3e}"
        )
