"""
Discrete Gaussian-curvature schemes G1..G5, the cotangent mean-curvature
operator H1, principal-curvature recovery and whole-mesh evaluation.

Every scheme shares the angular defect 2*pi - sum(gamma_i) as numerator and
differs in its area-like denominator:

    G1  3 * defect / A(p)              A(p): sum of fan triangle areas
    G2  defect / S_p                   S_p: the module
    G3  defect / ((1/2) sum area - (1/8) sum cot(gamma) d^2)
    G4  defect / A_M(p)                A_M: Voronoi-type area
    G5  (defect - 2 (S_p - A) H1^2) / (2A - S_p)
    H1  2 || sum w_i (p_i - p) || / sum w_i eta_i^2,  w_i = cot(alpha_i) + cot(delta_i)
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import math
from collections import Counter, namedtuple
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .curvature_errors import (
    BoundaryVertex,
    DegenerateTriangle,
    IllConditioned,
    NonManifoldVertex,
)
from .geometry_core import (
    CONDITIONING_FLOOR,
    VoronoiRule,
    _corner_cotangents,
    angular_defect,
    aniso_area,
    build_one_ring,
    fan_area,
    modified_denominator,
    module_sp,
    star_quantities,
    voronoi_area,
)


class SchemeId(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    G5 = "G5"
    H1 = "H1"

    @property
    def is_gaussian(self):
        return self is not SchemeId.H1


GAUSSIAN_SCHEMES = (SchemeId.G1, SchemeId.G2, SchemeId.G3, SchemeId.G4, SchemeId.G5)
ALL_SCHEMES = GAUSSIAN_SCHEMES + (SchemeId.H1,)


class VertexFlag(str, Enum):
    OK = "ok"
    BOUNDARY_SKIPPED = "boundary_skipped"
    DEGENERATE = "degenerate"
    ILL_CONDITIONED = "ill_conditioned"
    NON_MANIFOLD = "non_manifold"


PrincipalCurvatures = namedtuple("PrincipalCurvatures", ["k_min", "k_max", "clamped"])
RegularClosedForms = namedtuple("RegularClosedForms", ["a", "s_p", "b"])


def parse_schemes(names):
    """Turn an iterable of names ('g2', 'H1', SchemeId.G5) into an ordered tuple of SchemeId."""
    out = []
    for name in names:
        scheme = name if isinstance(name, SchemeId) else SchemeId(str(name).upper())
        if scheme not in out:
            out.append(scheme)
    return tuple(sorted(out, key=ALL_SCHEMES.index))


def _require_conditioned(scheme, quantity, value, eta_max):
    floor = CONDITIONING_FLOOR * eta_max * eta_max
    if not abs(value) >= floor:
        raise IllConditioned(scheme, quantity, value, floor)
    return value


def g1(q):
    """3 * defect / A(p)."""
    return 3.0 * angular_defect(q) / fan_area(q)


def g2(q):
    """defect / S_p."""
    s_p = _require_conditioned("G2", "S_p", module_sp(q), q.eta_max)
    return angular_defect(q) / s_p


def g3(q):
    """defect over the law-of-cosines form of the module."""
    den = _require_conditioned("G3", "modified denominator", modified_denominator(q), q.eta_max)
    return angular_defect(q) / den


def g4(fan, rule=VoronoiRule.MIXED):
    """defect / A_M(p) with the chosen Voronoi rule."""
    q = star_quantities(fan)
    area = _require_conditioned("G4", "A_M", voronoi_area(fan, rule), q.eta_max)
    return angular_defect(q) / area


def _cotan_weights(fan):
    points = fan.neighbors
    prev_points = np.roll(points, 1, axis=0)
    next_points = np.roll(points, -1, axis=0)
    cot_alpha = _corner_cotangents(points - prev_points, fan.center - prev_points)
    cot_delta = _corner_cotangents(points - next_points, fan.center - next_points)
    return cot_alpha + cot_delta


def h1(fan):
    """
    Unsigned cotangent mean curvature at the fan center.

    Raises:
        IllConditioned: sum w_i eta_i^2 is below the conditioning floor
    """
    q = star_quantities(fan)
    weights = _cotan_weights(fan)
    den = _require_conditioned("H1", "sum w eta^2", math.fsum(weights * q.eta ** 2), q.eta_max)
    vec = weights @ fan.spokes
    return 2.0 * float(np.linalg.norm(vec)) / abs(den)


def regular_closed_forms(n, eta):
    """
    Leading-order values A', S'_p, B' at a regular vertex of valence n.

    Returns:
        RegularClosedForms(a, s_p, b); S'_p = A' + 2B' holds identically.
    """
    if n < 3:
        raise ValueError(f"valence must be >= 3, got {n}")
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    theta = 2.0 * math.pi / n
    s, c, c2 = math.sin(theta), math.cos(theta), math.cos(2.0 * theta)
    eta2 = eta * eta
    a = (2 * n - n * c2 - n * c) * eta2 / (16.0 * s)
    s_p = n * (1.0 - c) * eta2 / (4.0 * s)
    b = (n + 0.5 * n * c2 - 1.5 * n * c) * eta2 / (16.0 * s)
    return RegularClosedForms(a, s_p, b)


def g5(fan):
    """
    (defect - 2 (S_p - A) H1^2) / (2A - S_p).

    Raises:
        IllConditioned: the regular-vertex leading term A' - 2B' vanishes for
            the fan valence (valence 3), or |2A - S_p| is below the floor.
    """
    q = star_quantities(fan)
    leading = regular_closed_forms(q.n, q.eta_max)
    if abs(leading.a - 2.0 * leading.b) <= 1e-12 * abs(leading.s_p):
        raise IllConditioned("G5", "A' - 2B'", leading.a - 2.0 * leading.b, 1e-12 * abs(leading.s_p))
    a = aniso_area(q)
    s_p = module_sp(q)
    den = _require_conditioned("G5", "2A - S_p", 2.0 * a - s_p, q.eta_max)
    h = h1(fan)
    return (angular_defect(q) - 2.0 * (s_p - a) * h * h) / den


def principal_curvatures(h, g):
    """
    k_min = H - sqrt(H^2 - G), k_max = H + sqrt(H^2 - G).

    A negative radicand (numerical noise) is clamped to zero and flagged.
    """
    radicand = h * h - g
    clamped = radicand < 0.0
    root = 0.0 if clamped else math.sqrt(radicand)
    return PrincipalCurvatures(h - root, h + root, clamped)


def evaluate_fan(fan, scheme, voronoi_rule=VoronoiRule.MIXED, q=None):
    """Evaluate one scheme on one fan."""
    scheme = SchemeId(scheme)
    if scheme is SchemeId.H1:
        return h1(fan)
    if scheme is SchemeId.G4:
        return g4(fan, voronoi_rule)
    if scheme is SchemeId.G5:
        return g5(fan)
    q = q if q is not None else star_quantities(fan)
    if scheme is SchemeId.G1:
        return g1(q)
    if scheme is SchemeId.G2:
        return g2(q)
    return g3(q)


@dataclass(frozen=True)
class VertexRecord:
    vertex: int
    values: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def ok(self, scheme):
        return self.flags.get(scheme) is VertexFlag.OK


@dataclass(frozen=True)
class CurvatureReport:
    """Per-vertex scheme values with validity flags, in vertex order."""

    schemes: tuple
    records: tuple
    voronoi_rule: VoronoiRule = VoronoiRule.MIXED

    def __len__(self):
        return len(self.records)

    def values(self, scheme):
        """Array of values for scheme, NaN where the flag is not ok."""
        return np.array([r.values[scheme] if r.ok(scheme) else np.nan for r in self.records])

    def flag_counts(self, scheme):
        return Counter(r.flags[scheme].value for r in self.records)

    def mean_abs_error(self, scheme, truth):
        """
        Mean |value - truth| over vertices flagged ok.

        Returns:
            (mean, used): used is the number of contributing vertices;
            mean is NaN when used == 0.
        """
        vals = self.values(scheme)
        good = np.isfinite(vals)
        used = int(np.count_nonzero(good))
        if not used:
            return float("nan"), 0
        return float(np.mean(np.abs(vals[good] - truth))), used

    def principal_curvatures(self, vertex, gaussian=SchemeId.G5):
        """Principal curvatures at a vertex from H1 and a Gaussian scheme, or None."""
        record = self.records[vertex]
        gaussian = SchemeId(gaussian)
        if not (record.ok(SchemeId.H1) and record.ok(gaussian)):
            return None
        return principal_curvatures(record.values[SchemeId.H1], record.values[gaussian])

    def as_rows(self, principal=False):
        """
        One dict per vertex: scheme values (None when flagged), a compact
        flag summary and, with principal=True and both H1 and G5 requested,
        k_min/k_max.
        """
        rows = []
        with_principal = principal and SchemeId.H1 in self.schemes and SchemeId.G5 in self.schemes
        for record in self.records:
            row = {"vertex": record.vertex}
            for scheme in self.schemes:
                row[scheme.value] = record.values[scheme] if record.ok(scheme) else None
            bad = [f"{s.value}:{record.flags[s].value}" for s in self.schemes if not record.ok(s)]
            row["flags"] = ";".join(bad) or VertexFlag.OK.value
            if with_principal:
                pc = self.principal_curvatures(record.vertex)
                row["k_min"] = pc.k_min if pc else None
                row["k_max"] = pc.k_max if pc else None
            rows.append(row)
        return rows


def _vertex_record(mesh, v, schemes, voronoi_rule):
    values = {}
    try:
        fan = build_one_ring(mesh, v)
        q = star_quantities(fan)
    except BoundaryVertex:
        return VertexRecord(v, values, {s: VertexFlag.BOUNDARY_SKIPPED for s in schemes})
    except NonManifoldVertex:
        return VertexRecord(v, values, {s: VertexFlag.NON_MANIFOLD for s in schemes})
    except DegenerateTriangle:
        return VertexRecord(v, values, {s: VertexFlag.DEGENERATE for s in schemes})

    flags = {}
    for scheme in schemes:
        try:
            value = evaluate_fan(fan, scheme, voronoi_rule, q=q)
        except IllConditioned:
            flags[scheme] = VertexFlag.ILL_CONDITIONED
            continue
        except DegenerateTriangle:
            flags[scheme] = VertexFlag.DEGENERATE
            continue
        if math.isfinite(value):
            values[scheme] = value
            flags[scheme] = VertexFlag.OK
        else:
            flags[scheme] = VertexFlag.ILL_CONDITIONED
    return VertexRecord(v, values, flags)


def estimate_mesh(mesh, schemes=ALL_SCHEMES, voronoi_rule=VoronoiRule.MIXED, log=None):
    """
    Evaluate the requested schemes at every vertex of a mesh.

    Vertices are independent; boundary, non-manifold, degenerate and
    ill-conditioned vertices are flagged, never dropped.

    Args:
        mesh: TriangleMesh
        schemes: iterable of SchemeId or names
        voronoi_rule: rule used by G4
        log: optional object with debug()/warn() (an AnsibleModule works)

    Returns:
        CurvatureReport
    """
    schemes = parse_schemes(schemes)
    voronoi_rule = VoronoiRule(voronoi_rule)
    records = tuple(_vertex_record(mesh, v, schemes, voronoi_rule) for v in range(mesh.vertex_count))
    report = CurvatureReport(schemes, records, voronoi_rule)
    if log is not None:
        for scheme in schemes:
            counts = report.flag_counts(scheme)
            bad = sum(n for flag, n in counts.items() if flag != VertexFlag.OK.value)
            if bad:
                log.warn(f"{scheme.value}: {bad}/{len(records)} vertices flagged {dict(counts)}")
        log.debug(f"evaluated {len(records)} vertices for {[s.value for s in schemes]}")
    return report
