"""
OBJ and OFF triangle-mesh readers and writers.

Coordinates are written with '%.17g', so a read after a write reproduces
every float exactly and the output bytes depend only on the mesh.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import os
from enum import Enum

from .curvature_errors import InvalidMesh, MeshParseError, UnsupportedPolygon
from .geometry_core import TriangleMesh

FLOAT_FORMAT = "%.17g"

# OBJ records that carry nothing for a bare triangle mesh
_OBJ_IGNORED = {"vt", "vn", "vp", "o", "g", "s", "usemtl", "mtllib", "l", "p"}


class MeshFormat(str, Enum):
    OBJ = "obj"
    OFF = "off"

    @classmethod
    def from_path(cls, path):
        ext = os.path.splitext(str(path))[1].lower().lstrip(".")
        try:
            return cls(ext)
        except ValueError:
            raise MeshParseError(path, 0, f"cannot infer mesh format from extension '.{ext}'")


def _float(path, lineno, token):
    try:
        return float(token)
    except ValueError:
        raise MeshParseError(path, lineno, f"invalid number '{token}'")


def _int(path, lineno, token):
    try:
        return int(token)
    except ValueError:
        raise MeshParseError(path, lineno, f"invalid integer '{token}'")


def _build(path, vertices, triangles):
    try:
        return TriangleMesh(vertices, triangles)
    except InvalidMesh as e:
        raise MeshParseError(path, 0, str(e))


def parse_obj(text, path="<string>"):
    vertices, triangles = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *fields = line.split()
        if tag == "v":
            if len(fields) not in (3, 4):
                raise MeshParseError(path, lineno, f"vertex record needs 3 coordinates, got {len(fields)}")
            vertices.append([_float(path, lineno, t) for t in fields[:3]])
        elif tag == "f":
            if len(fields) > 3:
                raise UnsupportedPolygon(path, lineno, f"face with {len(fields)} vertices; only triangles are supported")
            if len(fields) < 3:
                raise MeshParseError(path, lineno, f"face needs 3 vertices, got {len(fields)}")
            face = []
            for token in fields:
                index = _int(path, lineno, token.split("/", 1)[0])
                # 1-based; negative indices count back from the latest vertex
                resolved = index - 1 if index > 0 else len(vertices) + index
                if index == 0 or not 0 <= resolved < len(vertices):
                    raise MeshParseError(path, lineno, f"vertex index {index} out of range")
                face.append(resolved)
            triangles.append(face)
        elif tag not in _OBJ_IGNORED:
            raise MeshParseError(path, lineno, f"unknown record '{tag}'")
    return _build(path, vertices, triangles)


def parse_off(text, path="<string>"):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    if not lines or lines[0][1][0] != "OFF":
        raise MeshParseError(path, lines[0][0] if lines else 1, "missing OFF header")

    lineno, header = lines[0]
    rest = lines[1:]
    counts = header[1:]
    if not counts:
        if not rest:
            raise MeshParseError(path, lineno, "missing counts line")
        lineno, counts = rest[0]
        rest = rest[1:]
    if len(counts) != 3:
        raise MeshParseError(path, lineno, "counts line must hold vertex, face and edge counts")
    n_vertices, n_faces, _ = (_int(path, lineno, t) for t in counts)
    if n_vertices < 0 or n_faces < 0:
        raise MeshParseError(path, lineno, "negative element count")
    if len(rest) < n_vertices + n_faces:
        last = rest[-1][0] if rest else lineno
        raise MeshParseError(path, last, f"expected {n_vertices + n_faces} records, found {len(rest)}")

    vertices = []
    for lineno, fields in rest[:n_vertices]:
        if len(fields) < 3:
            raise MeshParseError(path, lineno, f"vertex record needs 3 coordinates, got {len(fields)}")
        vertices.append([_float(path, lineno, t) for t in fields[:3]])

    triangles = []
    for lineno, fields in rest[n_vertices:n_vertices + n_faces]:
        k = _int(path, lineno, fields[0])
        if k > 3:
            raise UnsupportedPolygon(path, lineno, f"face with {k} vertices; only triangles are supported")
        if k < 3 or len(fields) < 4:
            raise MeshParseError(path, lineno, "face record needs 3 vertex indices")
        face = [_int(path, lineno, t) for t in fields[1:4]]
        if any(not 0 <= i < n_vertices for i in face):
            raise MeshParseError(path, lineno, f"vertex index out of range in {face}")
        triangles.append(face)

    extra = rest[n_vertices + n_faces:]
    if extra:
        raise MeshParseError(path, extra[0][0], "unexpected data after face records")
    return _build(path, vertices, triangles)


def read_mesh(path, fmt=None):
    """
    Read a triangle mesh from an OBJ or OFF file.

    Args:
        path: file path
        fmt: MeshFormat or 'obj'/'off'; inferred from the extension when None

    Raises:
        MeshParseError: malformed content (carries the 1-based line number)
        UnsupportedPolygon: a face has more than three vertices
    """
    fmt = MeshFormat(fmt) if fmt else MeshFormat.from_path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise MeshParseError(path, 0, f"cannot read file: {e.strerror or e}")
    if fmt is MeshFormat.OBJ:
        return parse_obj(text, path)
    return parse_off(text, path)


def read_obj(path):
    return read_mesh(path, MeshFormat.OBJ)


def read_off(path):
    return read_mesh(path, MeshFormat.OFF)


def format_obj(mesh):
    out = []
    for x, y, z in mesh.vertices.tolist():
        out.append("v " + " ".join(FLOAT_FORMAT % c for c in (x, y, z)))
    for a, b, c in mesh.triangles.tolist():
        out.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(out) + "\n"


def format_off(mesh):
    out = ["OFF", f"{mesh.vertex_count} {mesh.face_count} {mesh.edge_count}"]
    for x, y, z in mesh.vertices.tolist():
        out.append(" ".join(FLOAT_FORMAT % c for c in (x, y, z)))
    for a, b, c in mesh.triangles.tolist():
        out.append(f"3 {a} {b} {c}")
    return "\n".join(out) + "\n"


def write_mesh(mesh, path, fmt=None):
    """Write mesh to path; returns the text written."""
    fmt = MeshFormat(fmt) if fmt else MeshFormat.from_path(path)
    text = format_obj(mesh) if fmt is MeshFormat.OBJ else format_off(mesh)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return text


def write_obj(mesh, path):
    return write_mesh(mesh, path, MeshFormat.OBJ)


def write_off(mesh, path):
    return write_mesh(mesh, path, MeshFormat.OFF)
