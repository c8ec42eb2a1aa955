"""
Mesh representation and per-vertex quantities for angular-defect schemes.

A vertex p with its cyclically ordered neighbours p_1..p_n forms a one-ring
fan. Triangle i of the fan is (p, p_i, p_{i+1}) with p_{n+1} = p_1; arrays
below are 0-based, so index i holds the quantity of triangle i+1.

    gamma[i]  apex angle at p between p_i and p_{i+1}
    eta[i]    |p_i - p|
    d[i]      |p_{i+1} - p_i|
    alpha[i]  angle at p_{i-1} in triangle (p, p_{i-1}, p_i), opposite spoke i
    delta[i]  angle at p_{i+1} in triangle (p, p_i, p_{i+1}), opposite spoke i
    phi[i]    gamma[0] + ... + gamma[i]

All angles use atan2(|u x v|, u . v) and all cotangents use dot/|cross|.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .curvature_errors import (
    BoundaryVertex,
    DegenerateTriangle,
    InvalidFan,
    InvalidMesh,
    InvalidPoint,
    NonManifoldVertex,
)

TWO_PI = 2.0 * math.pi

# Triangle area below AREA_TOL * (max eta)^2, or sin(gamma) below SIN_TOL,
# is treated as degenerate.
AREA_TOL = 1e-14
SIN_TOL = 1e-12

# Denominators of the schemes are O(eta^2); the floor is relative to (max eta)^2.
CONDITIONING_FLOOR = 1e-14


class VoronoiRule(str, Enum):
    MIXED = "mixed"
    CIRCUMCENTRIC = "circumcentric"


def as_point(p):
    """Return p as a finite float 3-vector or raise InvalidPoint."""
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise InvalidPoint(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidPoint(f"non-finite coordinates: {arr.tolist()}")
    return arr


def _readonly(arr, dtype=float):
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


def _row_norms(vectors):
    return np.sqrt(np.einsum("ij,ij->i", vectors, vectors))


def _row_dots(u, v):
    return np.einsum("ij,ij->i", u, v)


def _corner_angles(u, v):
    """Row-wise unsigned angle between u[i] and v[i]."""
    return np.arctan2(_row_norms(np.cross(u, v)), _row_dots(u, v))


def _corner_cotangents(u, v):
    cross = _row_norms(np.cross(u, v))
    if np.any(cross == 0.0):
        raise DegenerateTriangle("zero cross product in cotangent", index=int(np.argmin(cross)))
    return _row_dots(u, v) / cross


@dataclass(frozen=True, eq=False)
class OneRingFan:
    """
    A center point with its cyclically ordered one-ring neighbours.

    Args:
        center: 3-vector
        neighbors: (n, 3) array-like, n >= 3, in cyclic order
        indices: optional mesh vertex indices of the neighbours
    """

    center: np.ndarray
    neighbors: np.ndarray
    indices: tuple = None

    def __post_init__(self):
        center = as_point(self.center)
        neighbors = np.array(self.neighbors, dtype=float)
        if neighbors.ndim != 2 or neighbors.shape[1] != 3:
            raise InvalidFan(f"neighbors must have shape (n, 3), got {neighbors.shape}")
        if neighbors.shape[0] < 3:
            raise InvalidFan(f"a fan needs at least 3 neighbors, got {neighbors.shape[0]}")
        if not np.all(np.isfinite(neighbors)):
            raise InvalidPoint("non-finite neighbor coordinates")
        eta = _row_norms(neighbors - center)
        if np.any(eta <= 0.0):
            raise InvalidFan(f"neighbor {int(np.argmin(eta))} coincides with the center")
        object.__setattr__(self, "center", _readonly(center))
        object.__setattr__(self, "neighbors", _readonly(neighbors))
        if self.indices is not None:
            object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    @property
    def valence(self):
        return self.neighbors.shape[0]

    @property
    def spokes(self):
        """Vectors p_i - p."""
        return self.neighbors - self.center

    def transformed(self, rotation, translation=(0.0, 0.0, 0.0)):
        """Apply x -> R x + t to every point."""
        rot = np.asarray(rotation, dtype=float)
        shift = as_point(translation)
        return OneRingFan(rot @ self.center + shift, self.neighbors @ rot.T + shift, self.indices)

    def scaled(self, factor):
        """Scale the fan about its center by factor > 0."""
        return OneRingFan(self.center, self.center + factor * self.spokes, self.indices)

    def same_coordinates(self, other):
        return (np.array_equal(self.center, other.center)
                and np.array_equal(self.neighbors, other.neighbors))


@dataclass(frozen=True, eq=False)
class StarQuantities:
    """Per-fan scalars consumed by the curvature formulas (see module docstring)."""

    n: int
    gamma: np.ndarray
    eta: np.ndarray
    d: np.ndarray
    alpha: np.ndarray
    delta: np.ndarray
    phi: np.ndarray
    tri_area: np.ndarray

    @property
    def eta_max(self):
        return float(np.max(self.eta))

    @property
    def eta_next(self):
        """eta_{i+1} aligned with triangle i."""
        return np.roll(self.eta, -1)

    @property
    def sin_gamma(self):
        return np.sin(self.gamma)

    @property
    def cos_gamma(self):
        return np.cos(self.gamma)


def star_quantities(fan):
    """
    Compute every per-triangle quantity of a one-ring fan.

    Raises:
        DegenerateTriangle: a triangle area is below AREA_TOL * (max eta)^2
            or sin(gamma_i) is below SIN_TOL.
    """
    points = fan.neighbors
    spokes = fan.spokes
    spokes_next = np.roll(spokes, -1, axis=0)

    eta = _row_norms(spokes)
    cross_norm = _row_norms(np.cross(spokes, spokes_next))
    tri_area = 0.5 * cross_norm
    eta_max = float(np.max(eta))

    sin_gamma = cross_norm / (eta * np.roll(eta, -1))
    area_floor = AREA_TOL * eta_max * eta_max
    bad = np.flatnonzero((tri_area < area_floor) | (sin_gamma < SIN_TOL))
    if bad.size:
        i = int(bad[0])
        raise DegenerateTriangle(
            f"triangle {i} is degenerate (area {tri_area[i]:.3e}, sin(gamma) {sin_gamma[i]:.3e})",
            index=i,
        )

    gamma = np.arctan2(cross_norm, _row_dots(spokes, spokes_next))

    prev_points = np.roll(points, 1, axis=0)
    next_points = np.roll(points, -1, axis=0)
    alpha = _corner_angles(points - prev_points, fan.center - prev_points)
    delta = _corner_angles(points - next_points, fan.center - next_points)

    return StarQuantities(
        n=fan.valence,
        gamma=_readonly(gamma),
        eta=_readonly(eta),
        d=_readonly(_row_norms(next_points - points)),
        alpha=_readonly(alpha),
        delta=_readonly(delta),
        phi=_readonly(np.cumsum(gamma)),
        tri_area=_readonly(tri_area),
    )


def angular_defect(q):
    """2*pi minus the sum of apex angles; negative at saddle-like fans."""
    return TWO_PI - math.fsum(q.gamma)


def fan_area(q):
    """Sum of the fan triangle areas, A(p)."""
    return math.fsum(q.tri_area)


def module_sp(q):
    """The module S_p = sum_i [eta_i eta_{i+1} - cos(g_i)/2 (eta_i^2 + eta_{i+1}^2)] / (4 sin g_i)."""
    eta, eta_next = q.eta, q.eta_next
    cos_g = q.cos_gamma
    terms = (eta * eta_next - 0.5 * cos_g * (eta ** 2 + eta_next ** 2)) / (4.0 * q.sin_gamma)
    return math.fsum(terms)


def modified_denominator(q):
    """(1/2) sum area_i - (1/8) sum cot(gamma_i) d_i^2; algebraically equal to S_p."""
    cot_g = q.cos_gamma / q.sin_gamma
    return 0.5 * math.fsum(q.tri_area) - 0.125 * math.fsum(cot_g * q.d ** 2)


def aniso_area(q):
    """
    The anisotropy area A built from cumulative angles phi_i.

    The last triangle needs phi_{n+1}; it is taken as phi_n + gamma_1.
    """
    eta, eta_next = q.eta, q.eta_next
    phi = q.phi
    phi_next = np.append(phi[1:], phi[-1] + q.gamma[0])
    cos_g = q.cos_gamma

    first = 0.5 * eta * eta_next * (1.0 - np.cos(2.0 * phi) * np.cos(2.0 * phi_next))
    second = 0.25 * cos_g * (eta ** 2 * np.sin(phi) ** 2 + eta_next ** 2 * np.sin(phi_next) ** 2)
    return math.fsum((first - second) / (4.0 * q.sin_gamma))


def voronoi_area(fan, rule=VoronoiRule.MIXED):
    """
    Area of the Voronoi-type region of the fan center.

    Args:
        fan: OneRingFan
        rule: VoronoiRule.MIXED uses the circumcentric cell for non-obtuse
            triangles, area/2 when the angle at p is obtuse and area/4 when
            another angle is. VoronoiRule.CIRCUMCENTRIC always uses the
            (signed) circumcentric cell.

    Returns:
        float
    """
    rule = VoronoiRule(rule)
    q = star_quantities(fan)
    points = fan.neighbors
    spokes = fan.spokes
    spokes_next = np.roll(spokes, -1, axis=0)
    next_points = np.roll(points, -1, axis=0)

    # corner at p_i (opposite spoke i+1) and at p_{i+1} (opposite spoke i)
    at_first_u, at_first_v = next_points - points, fan.center - points
    at_next_u, at_next_v = points - next_points, fan.center - next_points
    cot_first = _corner_cotangents(at_first_u, at_first_v)
    cot_next = _corner_cotangents(at_next_u, at_next_v)

    eta, eta_next = q.eta, q.eta_next
    cells = 0.125 * (eta ** 2 * cot_next + eta_next ** 2 * cot_first)
    if rule is VoronoiRule.CIRCUMCENTRIC:
        return math.fsum(cells)

    obtuse_at_p = _row_dots(spokes, spokes_next) < 0.0
    obtuse_other = (_row_dots(at_first_u, at_first_v) < 0.0) | (_row_dots(at_next_u, at_next_v) < 0.0)
    mixed = np.where(obtuse_at_p, 0.5 * q.tri_area, np.where(obtuse_other, 0.25 * q.tri_area, cells))
    return math.fsum(mixed)


class TriangleMesh:
    """
    Indexed triangle mesh with directed-edge incidence.

    The mesh is immutable after construction. Manifoldness is not enforced
    here; build_one_ring reports problems per vertex.
    """

    def __init__(self, vertices, triangles):
        verts = np.array(vertices, dtype=float)
        if verts.size == 0:
            verts = verts.reshape(0, 3)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise InvalidMesh(f"vertices must have shape (V, 3), got {verts.shape}")
        if not np.all(np.isfinite(verts)):
            raise InvalidMesh("non-finite vertex coordinates")

        tris = np.array(triangles, dtype=np.int64)
        if tris.size == 0:
            tris = tris.reshape(0, 3)
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise InvalidMesh(f"triangles must have shape (F, 3), got {tris.shape}")
        if tris.size and (tris.min() < 0 or tris.max() >= len(verts)):
            raise InvalidMesh("triangle index out of range")
        repeated = (tris[:, 0] == tris[:, 1]) | (tris[:, 1] == tris[:, 2]) | (tris[:, 0] == tris[:, 2])
        if np.any(repeated):
            raise InvalidMesh(f"triangle {int(np.flatnonzero(repeated)[0])} repeats a vertex")

        self._vertices = _readonly(verts)
        self._triangles = _readonly(tris, dtype=np.int64)

        self._half_edges = {}
        self._vertex_faces = [[] for _ in range(len(verts))]
        for f, (a, b, c) in enumerate(tris.tolist()):
            for x, y in ((a, b), (b, c), (c, a)):
                self._half_edges.setdefault((x, y), []).append(f)
            for v in (a, b, c):
                self._vertex_faces[v].append(f)

    @property
    def vertices(self):
        return self._vertices

    @property
    def triangles(self):
        return self._triangles

    @property
    def vertex_count(self):
        return len(self._vertices)

    @property
    def face_count(self):
        return len(self._triangles)

    def faces_of(self, v):
        return list(self._vertex_faces[v])

    def half_edge_faces(self, a, b):
        """Faces containing the directed edge a -> b."""
        return list(self._half_edges.get((a, b), ()))

    def edges(self):
        """Unique undirected edges as a sorted (E, 2) array."""
        pairs = sorted({(min(a, b), max(a, b)) for a, b in self._half_edges})
        return np.array(pairs, dtype=np.int64).reshape(-1, 2)

    @property
    def edge_count(self):
        return len({(min(a, b), max(a, b)) for a, b in self._half_edges})

    @property
    def euler_characteristic(self):
        return self.vertex_count - self.edge_count + self.face_count

    def is_consistently_oriented(self):
        """Every directed edge is used by at most one face."""
        return all(len(faces) == 1 for faces in self._half_edges.values())

    def is_closed(self):
        """Watertight and consistently oriented: every directed edge has its twin exactly once."""
        return self.is_consistently_oriented() and all(
            (b, a) in self._half_edges for a, b in self._half_edges
        )

    def boundary_vertices(self):
        out = set()
        for a, b in self._half_edges:
            if (b, a) not in self._half_edges:
                out.update((a, b))
        return sorted(out)


def build_one_ring(mesh, v):
    """
    Extract the closed one-ring fan of vertex v.

    Neighbours follow the triangle winding: a face (v, a, b) makes b the
    successor of a.

    Raises:
        InvalidMesh: v is out of range
        BoundaryVertex: the fan does not close (or v has no faces)
        NonManifoldVertex: an edge at v has more than two faces, or several fans meet at v
    """
    if not 0 <= v < mesh.vertex_count:
        raise InvalidMesh(f"vertex index {v} out of range [0, {mesh.vertex_count})")

    successor = {}
    first = None
    for f in mesh.faces_of(v):
        a, b, c = mesh.triangles[f].tolist()
        if a == v:
            x, y = b, c
        elif b == v:
            x, y = c, a
        else:
            x, y = a, b
        if x in successor:
            raise NonManifoldVertex(v, f"edge ({v}, {x}) is shared by more than two faces")
        successor[x] = y
        if first is None:
            first = x

    if not successor:
        raise BoundaryVertex(v)

    for x in successor:
        if len(mesh.half_edge_faces(v, x)) + len(mesh.half_edge_faces(x, v)) > 2:
            raise NonManifoldVertex(v, f"edge ({v}, {x}) is shared by more than two faces")

    if set(successor.values()) != set(successor):
        raise BoundaryVertex(v)

    order = [first]
    current = successor[first]
    while current != first:
        order.append(current)
        current = successor[current]
    if len(order) != len(successor):
        raise NonManifoldVertex(v, "several fans meet at the vertex")

    return OneRingFan(mesh.vertices[v], mesh.vertices[order], indices=order)


def angular_defects(mesh):
    """Angular defect per vertex; NaN where the one-ring cannot be built."""
    out = np.full(mesh.vertex_count, np.nan)
    for v in range(mesh.vertex_count):
        try:
            out[v] = angular_defect(star_quantities(build_one_ring(mesh, v)))
        except (BoundaryVertex, NonManifoldVertex, DegenerateTriangle):
            continue
    return out
