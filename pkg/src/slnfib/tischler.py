"""Constructive circle fibration from a closed 1-cochain.

Stages: perturb the periods of a closed cochain to rationals by adding
multiples of the stored harmonic duals (continued-fraction convergents keep
the perturbation within budget), integrate the scaled cochain over a spanning
tree into a circle-valued vertex map, check the discrete no-singularity
condition per top simplex, and count fiber components at generic levels.

The end-to-end entry point runs the whole chain on an SL(n) (or abelian)
foliation spec: project to the R^2 factor, pick a submersive component, and
emit a deterministic report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    BudgetInfeasible,
    CheckFailed,
    InputError,
    NonGenericValue,
)
from .linalg import DEFAULT_TOL, ToleranceContext
from .complexes import (
    Cycle,
    ScalarCochain1,
    SimplicialComplex,
    coboundary,
    coordinate_cochain,
    homology_generators,
    period,
)
from .foliation import LieFoliationSpec, check_mc, project_foliation, rk_dim


@dataclass(frozen=True)
class RationalizeConfig:
    """Budget for the rational-period perturbation."""

    epsilon: float
    max_denominator: int = 10 ** 6

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InputError("epsilon must be positive")
        if self.max_denominator < 1:
            raise InputError("max_denominator must be >= 1")


def continued_fraction_approx(x: float, epsilon: float, max_denominator: int) -> Fraction:
    """First continued-fraction convergent of x within epsilon.

    Walks the convergents p_k/q_k in order of growing denominator and returns
    the first with |x - p/q| <= epsilon and q <= max_denominator.  Raises
    BudgetInfeasible when the denominator cap is hit first.
    """
    exact = Fraction(x).limit_denominator(10 ** 15)
    a, b = exact.numerator, exact.denominator
    # convergent recurrence h_k = a_k h_{k-1} + h_{k-2} on the CF terms of a/b
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    best_err = math.inf
    while True:
        term, rem = divmod(a, b)
        p_prev, p = p, term * p + p_prev
        q_prev, q = q, term * q + q_prev
        if q > max_denominator:
            raise BudgetInfeasible(
                f"no convergent of {x} within {epsilon} under denominator cap "
                f"{max_denominator} (best error {best_err:.3e})"
            )
        cand = Fraction(p, q)
        err = abs(x - cand)
        best_err = min(best_err, err)
        if err <= epsilon:
            return cand
        if rem == 0:
            raise BudgetInfeasible(
                f"continued fraction of {x} terminated at error {err:.3e} > {epsilon}"
            )
        a, b = b, rem


@dataclass
class RationalizedCochain:
    """Closed cochain with rational periods over the generator basis."""

    cochain: ScalarCochain1
    periods: List[Fraction]
    q: int  # lcm of period denominators
    sup_change: float


def _lcm(nums: Sequence[int]) -> int:
    out = 1
    for n in nums:
        out = out * n // math.gcd(out, n)
    return out


def rationalize(
    w: ScalarCochain1,
    cycles: Sequence[Cycle],
    cfg: RationalizeConfig,
    duals: Optional[Sequence[ScalarCochain1]] = None,
    tol: ToleranceContext = DEFAULT_TOL,
) -> RationalizedCochain:
    """Perturb each period to a nearby rational without breaking closedness.

    Each period p_k is replaced by a continued-fraction convergent r_k and
    (r_k - p_k) times the harmonic dual of the k-th generator is added; the
    correction is a sum of closed cochains, so closedness is preserved
    exactly.  duals defaults to the coordinate cochains of a torus complex.
    """
    bad = max((abs(float(x)) for x in coboundary(w)), default=0.0)
    if bad > tol.eq_tol:
        raise InputError(f"rationalize requires a closed cochain, coboundary {bad:.3e}")
    complex = w.complex
    if duals is None:
        cov = complex.covering
        if cov is None:
            raise InputError("non-torus complexes require explicit harmonic duals")
        duals = [coordinate_cochain(complex, ax) for ax in range(cov.d)]
    if len(duals) != len(cycles):
        raise InputError("one harmonic dual per generator cycle required")
    for k, eta in enumerate(duals):
        for j, c in enumerate(cycles):
            expect = 1 if j == k else 0
            if abs(float(period(eta, c)) - expect) > tol.eq_tol:
                raise InputError(f"dual {k} is not dual to cycle {j}")

    out = w
    periods: List[Fraction] = []
    for k, c in enumerate(cycles):
        p = float(period(w, c))
        r = continued_fraction_approx(p, cfg.epsilon, cfg.max_denominator)
        periods.append(r)
        delta = float(r) - p
        if delta != 0.0:
            out = out + duals[k].scale(delta)
    q = _lcm([r.denominator for r in periods]) if periods else 1
    sup_change = max(
        abs(float(out.values[e]) - float(w.values[e])) for e in complex.edges
    )
    if sup_change > cfg.epsilon:
        raise BudgetInfeasible(
            f"perturbation sup-norm {sup_change:.3e} exceeds epsilon {cfg.epsilon}"
        )
    return RationalizedCochain(out, periods, q, sup_change)


@dataclass
class CircleMap:
    """Vertex map into R/Z with integer periods over the generator basis."""

    complex: SimplicialComplex
    values: Dict[int, Union[float, Fraction]]
    periods: List[int]
    q: int


def integrate_to_circle(
    rz: RationalizedCochain, tol: ToleranceContext = DEFAULT_TOL
) -> CircleMap:
    """Integrate q * w' along a spanning tree and reduce mod 1.

    q * w' has integer periods, so the tree-path sums are independent of the
    tree up to integers and descend to R/Z.  Pullback periods over the
    generator cycles are verified to be integers within residual_tol.
    """
    w = rz.cochain
    complex = w.complex
    q = rz.q
    root = 0
    values: Dict[int, float] = {root: 0.0}
    stack = [root]
    while stack:
        u = stack.pop()
        for a, b in complex.incident_edges(u):
            other = b if a == u else a
            if other not in values:
                values[other] = values[u] + q * float(w(u, other))
                stack.append(other)
    if len(values) != complex.n_vertices:
        raise InputError("complex is disconnected")
    values = {v: x % 1.0 for v, x in values.items()}

    periods: List[int] = []
    for r in rz.periods:
        scaled = q * r
        if scaled.denominator != 1:
            raise InputError(f"period {r} did not scale to an integer under q={q}")
        periods.append(int(scaled))
    cm = CircleMap(complex, values, periods, q)
    # edge increments must reproduce q * w' mod 1
    for u, v in complex.edges:
        diff = (cm.values[v] - cm.values[u] - q * float(w(u, v))) % 1.0
        diff = min(diff, 1.0 - diff)
        if diff > tol.residual_tol * max(1.0, q):
            raise CheckFailed(f"edge increment mismatch {diff:.3e} on ({u},{v})")
    return cm


@dataclass
class SubmersionReport:
    failing_simplices: List[int]

    def passed(self) -> bool:
        return not self.failing_simplices

    def to_dict(self):
        return {
            "pass": self.passed(),
            "failing_simplices": self.failing_simplices,
        }


def check_submersion(
    w: ScalarCochain1, tol: ToleranceContext = DEFAULT_TOL
) -> SubmersionReport:
    """No-singularity check: the cochain must be nonzero on some edge of
    every top-dimensional simplex (zero increments on single edges are fine,
    a whole simplex in a fiber is not)."""
    failing = []
    for t, simplex in enumerate(w.complex.top_simplices):
        vals = [
            abs(float(w(simplex[i], simplex[j])))
            for i in range(len(simplex))
            for j in range(i + 1, len(simplex))
            if w.complex.has_edge(simplex[i], simplex[j])
        ]
        if max(vals, default=0.0) <= tol.eq_tol:
            failing.append(t)
    return SubmersionReport(failing)


@dataclass
class FiberCensus:
    value: float
    component_count: int
    crossing_edges: int

    def to_dict(self):
        return {
            "value": self.value,
            "components": self.component_count,
            "crossing_edges": self.crossing_edges,
        }


def fiber_census(
    f: CircleMap, w: ScalarCochain1, value: Union[float, Fraction]
) -> FiberCensus:
    """Extract the level set of f at a generic value and count components.

    Crossings live on edges (a lifted edge of increment q*w' crosses every
    integer translate of the level in its range); within each triangle the
    affine extension joins crossings of the same lifted level, and the
    resulting crossing graph is classified by union-find.
    """
    c = float(value) % 1.0
    complex = f.complex
    q = f.q
    for vtx, x in f.values.items():
        gap = abs((float(x) - c + 0.5) % 1.0 - 0.5)
        if gap < 1e-9:
            raise NonGenericValue(f"level {c} hits the image of vertex {vtx}")

    def crossings(u, v):
        """Crossing positions t in (0,1) along edge (u, v), with lifted levels."""
        a = float(f.values[u])
        inc = q * float(w(u, v))
        out = []
        if inc == 0.0:
            return out
        lo, hi = sorted((a, a + inc))
        k = math.ceil(lo - c)
        while c + k < hi:
            if c + k > lo:
                t = (c + k - a) / inc
                out.append((t, k))
            k += 1
        return out

    # node key: (canonical edge, rounded position along it)
    parent: Dict[Tuple, Tuple] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    def node_key(u, v, t):
        key = complex.canonical_edge(u, v)
        pos = t if key == (u, v) else 1.0 - t
        return (key, round(pos, 9))

    for u, v in complex.edges:
        for t, _ in crossings(u, v):
            nk = node_key(u, v, t)
            if nk not in parent:
                parent[nk] = nk

    for tri in complex.triangles:
        u, v, t_v = tri
        # lift the three vertices affinely inside this triangle
        lift = {u: float(f.values[u])}
        lift[v] = lift[u] + q * float(w(u, v))
        lift[t_v] = lift[v] + q * float(w(v, t_v))
        local = {}
        for a, b in ((u, v), (v, t_v), (u, t_v)):
            a_lift = lift[a]
            inc = lift[b] - a_lift
            if inc == 0.0:
                continue
            lo, hi = sorted((a_lift, a_lift + inc))
            k = math.ceil(lo - c)
            while c + k < hi:
                if c + k > lo:
                    t = (c + k - a_lift) / inc
                    nk = node_key(a, b, t)
                    parent.setdefault(nk, nk)
                    local.setdefault(k, []).append(nk)
                k += 1
        for k, nodes in local.items():
            if len(nodes) == 2:
                union(nodes[0], nodes[1])
            elif len(nodes) > 2:
                raise CheckFailed(
                    f"degenerate level set in triangle {tri} at level {c + k}"
                )

    roots = {find(x) for x in parent}
    return FiberCensus(c, len(roots), len(parent))


# ---------------------------------------------------------------------------
# End-to-end pipeline


@dataclass
class PipelineReport:
    """Ordered stage results; a failure stage terminates the report."""

    stages: List[dict] = field(default_factory=list)
    ok: bool = False

    def add(self, name: str, **payload):
        self.stages.append({"stage": name, **payload})

    def to_dict(self):
        return {"ok": self.ok, "stages": self.stages}


SEARCH_HEIGHT = 8  # rational-combination search bound for component selection


def _candidate_combinations(k: int):
    """Single components first, then small-height integer combinations."""
    for i in range(k):
        coeffs = [0] * k
        coeffs[i] = 1
        yield tuple(coeffs)
    if k == 2:
        for h in range(1, SEARCH_HEIGHT + 1):
            for a in range(-h, h + 1):
                for b in range(-h, h + 1):
                    if max(abs(a), abs(b)) == h and math.gcd(a, b) == 1:
                        if (a, b) not in ((1, 0), (0, 1)):
                            yield (a, b)


def _combine(cochains: Sequence[ScalarCochain1], coeffs) -> ScalarCochain1:
    out = cochains[0].scale(coeffs[0])
    for w, c in zip(cochains[1:], coeffs[1:]):
        out = out + w.scale(c)
    return out


def generic_levels(f: CircleMap, count: int = 10) -> List[float]:
    """Deterministic sample of levels avoiding all vertex images."""
    taken = sorted({round(float(x) % 1.0, 12) for x in f.values.values()})
    out = []
    i = 0
    while len(out) < count and i < 10 * count:
        cand = ((i + 0.5) / count + 0.261799) % 1.0
        i += 1
        if all(abs((cand - v + 0.5) % 1.0 - 0.5) > 1e-6 for v in taken):
            out.append(round(cand, 12))
    if len(out) < count:
        raise NonGenericValue("could not find enough generic levels")
    return out


def tischler_fibration(
    w: ScalarCochain1,
    cfg: RationalizeConfig,
    cycles: Optional[Sequence[Cycle]] = None,
    duals: Optional[Sequence[ScalarCochain1]] = None,
    census_levels: int = 10,
) -> Tuple[CircleMap, RationalizedCochain, SubmersionReport, List[FiberCensus]]:
    """Closed cochain -> circle map, with submersion check and fiber census."""
    if cycles is None:
        cycles = homology_generators(w.complex)
    rz = rationalize(w, cycles, cfg, duals)
    cm = integrate_to_circle(rz)
    sub = check_submersion(rz.cochain)
    censuses = [
        fiber_census(cm, rz.cochain, lvl) for lvl in generic_levels(cm, census_levels)
    ]
    return cm, rz, sub, censuses


def pipeline_sln(
    spec: LieFoliationSpec,
    cfg: RationalizeConfig,
    tol: ToleranceContext = DEFAULT_TOL,
) -> PipelineReport:
    """SL(n) (or abelian R^2) foliation spec -> circle fibration report.

    Stages: Maurer-Cartan check, projection onto the abelian R^2 factor,
    closedness verification, submersive component selection, rationalize,
    integrate, submersion re-check, fiber census.  Deterministic: identical
    spec and config produce identical reports.
    """
    report = PipelineReport()

    mc = check_mc(spec)
    report.add("maurer_cartan", **mc.to_dict())
    if not mc.flat:
        report.add("failure", reason="spec cochain is not flat")
        return report

    if spec.is_abelian():
        if rk_dim(spec.tag) != 2:
            report.add("failure", reason=f"abelian spec must be R2, got {spec.tag}")
            return report
        projected = spec
        report.add("factor_split", kind="abelian-bypass", components=2)
    else:
        chart_len = spec.n * (spec.n + 1) // 2 - 1
        report.add(
            "factor_split",
            kind="iwasawa-chart",
            n=spec.n,
            chart_length=chart_len,
            g2_coords=[chart_len - 2, chart_len - 1],
        )
        try:
            projected = project_foliation(spec, 2, tol)
        except CheckFailed as e:
            report.add("failure", reason=str(e))
            return report

    closed_res = max(
        max((abs(float(x)) for x in coboundary(w)), default=0.0)
        for w in projected.scalar_cochains
    )
    report.add("closedness", max_coboundary=closed_res)
    if closed_res > tol.residual_tol:
        report.add("failure", reason="projected components are not closed")
        return report

    chosen = None
    tried = []
    for coeffs in _candidate_combinations(len(projected.scalar_cochains)):
        cand = _combine(projected.scalar_cochains, coeffs)
        tried.append(list(coeffs))
        if check_submersion(cand, tol).passed():
            chosen = (coeffs, cand)
            break
    if chosen is None:
        report.add(
            "failure",
            reason="no submersive component combination found",
            tried=tried,
        )
        return report
    coeffs, w = chosen
    report.add("component_selection", coefficients=list(coeffs))

    cycles = homology_generators(projected.complex)
    try:
        cm, rz, sub, censuses = tischler_fibration(w, cfg, cycles)
    except (BudgetInfeasible, InputError) as e:
        report.add("failure", reason=str(e))
        return report
    report.add(
        "rationalize",
        periods=[str(r) for r in rz.periods],
        q=rz.q,
        sup_change=rz.sup_change,
        epsilon=cfg.epsilon,
    )
    report.add(
        "circle_map",
        q=cm.q,
        pullback_periods=cm.periods,
    )
    report.add("submersion", **sub.to_dict())
    if not sub.passed():
        report.add("failure", reason="rationalized cochain fails submersion")
        return report
    counts = [c.component_count for c in censuses]
    report.add(
        "fiber_census",
        levels=[c.value for c in censuses],
        components=counts,
        constant=len(set(counts)) == 1,
    )
    report.ok = True
    return report
