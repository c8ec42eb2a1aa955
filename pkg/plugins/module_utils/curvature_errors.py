"""
Exception hierarchy shared by the curvature module_utils.

Library code raises these; the Ansible modules turn them into fail_json
results and the CLI maps them onto exit codes (see bench_cli.EXIT_CODES).
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type


class CurvatureError(Exception):
    """Base class for every error raised by this collection."""


# Geometry

class InvalidPoint(CurvatureError):
    """A coordinate is NaN/Inf or the point is not a 3-vector."""


class InvalidFan(CurvatureError):
    """One-ring fan violates its structural invariants (n < 3, zero spoke)."""


class DegenerateTriangle(CurvatureError):
    """A fan triangle has (numerically) zero area or a vanishing apex angle."""

    def __init__(self, msg, index=None):
        super(DegenerateTriangle, self).__init__(msg)
        self.index = index


class InvalidMesh(CurvatureError):
    """Triangle indices out of range, repeated within a face, or non-finite vertices."""


class BoundaryVertex(CurvatureError):
    """The one-ring of the vertex does not close."""

    def __init__(self, vertex):
        super(BoundaryVertex, self).__init__(f"vertex {vertex} lies on a boundary (open fan)")
        self.vertex = vertex


class NonManifoldVertex(CurvatureError):
    """An incident edge is shared by more than two faces, or the vertex has several fans."""

    def __init__(self, vertex, reason):
        super(NonManifoldVertex, self).__init__(f"vertex {vertex} is non-manifold: {reason}")
        self.vertex = vertex
        self.reason = reason


class IllConditioned(CurvatureError):
    """A scheme denominator is below the relative conditioning floor."""

    def __init__(self, scheme, quantity, value, floor):
        super(IllConditioned, self).__init__(
            f"{scheme}: |{quantity}| = {abs(value):.3e} is below the floor {floor:.3e}"
        )
        self.scheme = scheme
        self.quantity = quantity
        self.value = value
        self.floor = floor


# Synthesis

class InvalidRecurrence(CurvatureError):
    """The spoke-length recurrence for a regular fan cannot be evaluated."""


class DegenerateBasis(CurvatureError):
    """Parallelogram basis offsets are (numerically) linearly dependent."""


# Hull

class DegenerateInput(CurvatureError):
    """Point set does not span three dimensions."""


# IO

class MeshParseError(CurvatureError):
    """Malformed OBJ/OFF content."""

    def __init__(self, path, line, msg):
        super(MeshParseError, self).__init__(f"{path}:{line}: {msg}")
        self.path = path
        self.line = line


class UnsupportedPolygon(MeshParseError):
    """A face record has more than three vertices."""


# Bench

class ConfigError(CurvatureError):
    """Experiment configuration failed schema or semantic validation."""

    def __init__(self, msg, problems=None):
        super(ConfigError, self).__init__(msg)
        self.problems = list(problems or [])


class NonPositiveError(CurvatureError):
    """An error sample is zero (or negative), so its log-log order is undefined."""
