"""
Random triangulations of the unit sphere.

Points are normalised standard-normal triples drawn from a seeded numpy
Generator; the triangulation is their convex hull, built by incremental
insertion with face/point conflict sets.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import itertools
from dataclasses import dataclass

import numpy as np

from .curvature_errors import DegenerateInput
from .geometry_core import TriangleMesh

# signed plane distance a point must exceed to count as "sees the face"
VISIBILITY_EPS = 1e-12
MIN_NORM = 1e-9


@dataclass(frozen=True, eq=False)
class SpherePointSet:
    points: np.ndarray
    seed: int

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)


def sample_uniform_sphere(n, seed):
    """
    n points i.i.d. uniform on the unit sphere, reproducible for a fixed seed.

    Near-zero normals and exact duplicates are redrawn from the same stream.
    """
    if n < 4:
        raise ValueError(f"need at least 4 points, got {n}")
    rng = np.random.default_rng(seed)
    batch = rng.standard_normal((n, 3))

    points = []
    seen = set()
    for row in batch:
        while True:
            norm = float(np.linalg.norm(row))
            if norm > MIN_NORM:
                p = row / norm
                key = tuple(p.tolist())
                if key not in seen:
                    break
            row = rng.standard_normal(3)
        seen.add(key)
        points.append(p)
    return SpherePointSet(np.array(points), seed)


class _Face:
    __slots__ = ("vertices", "normal", "offset", "conflicts", "alive")

    def __init__(self, vertices, points):
        a, b, c = vertices
        normal = np.cross(points[b] - points[a], points[c] - points[a])
        length = float(np.linalg.norm(normal))
        if not length > 0:
            raise DegenerateInput(f"zero-area hull face {vertices}")
        self.vertices = vertices
        self.normal = normal / length
        self.offset = float(self.normal @ points[a])
        self.conflicts = set()
        self.alive = True

    def distances(self, points, candidates):
        return points[candidates] @ self.normal - self.offset

    def edges(self):
        a, b, c = self.vertices
        return ((a, b), (b, c), (c, a))


def _initial_simplex(points):
    i0 = 0
    i1 = int(np.argmax(np.linalg.norm(points - points[i0], axis=1)))
    axis = points[i1] - points[i0]
    if not np.linalg.norm(axis) > VISIBILITY_EPS:
        raise DegenerateInput("all points coincide")
    off_line = np.linalg.norm(np.cross(points - points[i0], axis), axis=1) / np.linalg.norm(axis)
    i2 = int(np.argmax(off_line))
    if not off_line[i2] > VISIBILITY_EPS:
        raise DegenerateInput("points are collinear")
    normal = np.cross(axis, points[i2] - points[i0])
    normal /= np.linalg.norm(normal)
    off_plane = np.abs((points - points[i0]) @ normal)
    i3 = int(np.argmax(off_plane))
    if not off_plane[i3] > VISIBILITY_EPS:
        raise DegenerateInput("points are coplanar")
    return [i0, i1, i2, i3]


def convex_hull(point_set, log=None):
    """
    Triangulated convex hull of a point set, outward oriented.

    Faces are emitted in creation order, so equal inputs give identical
    meshes. Points strictly inside the current hull are skipped (and
    reported through log), which never happens for points on a sphere.

    Args:
        point_set: SpherePointSet or (N, 3) array
        log: optional object with debug()/warn()

    Raises:
        DegenerateInput: fewer than 4 points or they do not span 3D
    """
    points = np.asarray(getattr(point_set, "points", point_set), dtype=float)
    if points.ndim != 2 or points.shape[1] != 3 or len(points) < 4:
        raise DegenerateInput(f"need an (N >= 4, 3) array of points, got {points.shape}")

    simplex = _initial_simplex(points)
    centroid = points[simplex].mean(axis=0)

    faces = []
    edge_face = {}
    point_faces = {}

    def add_face(vertices, candidates):
        face = _Face(vertices, points)
        fid = len(faces)
        faces.append(face)
        for edge in face.edges():
            edge_face[edge] = fid
        if candidates:
            cand = np.array(sorted(candidates), dtype=np.int64)
            for q in cand[face.distances(points, cand) > VISIBILITY_EPS].tolist():
                face.conflicts.add(q)
                point_faces.setdefault(q, set()).add(fid)
        return fid

    rest = [i for i in range(len(points)) if i not in simplex]
    for tri in itertools.combinations(simplex, 3):
        a, b, c = tri
        normal = np.cross(points[b] - points[a], points[c] - points[a])
        if normal @ (points[a] - centroid) < 0:
            tri = (a, c, b)
        add_face(tri, rest)

    skipped = 0
    for p in rest:
        visible = sorted(point_faces.pop(p, ()))
        if not visible:
            skipped += 1
            continue
        visible_set = set(visible)

        horizon = []
        for fid in visible:
            for a, b in faces[fid].edges():
                across = edge_face[(b, a)]
                if across not in visible_set:
                    horizon.append((a, b, fid, across))

        for fid in visible:
            face = faces[fid]
            face.alive = False
            for edge in face.edges():
                if edge_face.get(edge) == fid:
                    del edge_face[edge]
            for q in face.conflicts:
                if q in point_faces:
                    point_faces[q].discard(fid)

        for a, b, inner, outer in horizon:
            candidates = (faces[inner].conflicts | faces[outer].conflicts) - {p}
            add_face((a, b, p), candidates)

        for fid in visible:
            faces[fid].conflicts = set()

    if log is not None:
        if skipped:
            log.warn(f"{skipped} interior points are not hull vertices")
        log.debug(f"hull of {len(points)} points: {sum(f.alive for f in faces)} faces")

    return TriangleMesh(points, [f.vertices for f in faces if f.alive])


def average_edge_length(mesh):
    """Arithmetic mean length over unique undirected edges."""
    edges = mesh.edges()
    if not len(edges):
        raise ValueError("mesh has no edges")
    verts = mesh.vertices
    return float(np.mean(np.linalg.norm(verts[edges[:, 0]] - verts[edges[:, 1]], axis=1)))


def sphere_mesh(n, seed, log=None):
    """Sample n points with the given seed and return (SpherePointSet, hull mesh)."""
    point_set = sample_uniform_sphere(n, seed)
    return point_set, convex_hull(point_set, log=log)
