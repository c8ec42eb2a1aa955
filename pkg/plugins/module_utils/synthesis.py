"""
Generators for synthetic one-ring configurations and fixture meshes.

- quadratic graphs z = a20 x^2 + a11 x y + a02 y^2 and their regular fans
- parallelogram-criterion fans over smooth parametric surfaces
- the valence-4 family whose geometry does not see the xy coefficient
- platonic fixture meshes and regular fans on spheres
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import itertools
import math
from collections import namedtuple
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curvature_errors import DegenerateBasis, InvalidRecurrence
from .geometry_core import OneRingFan, TriangleMesh, star_quantities

TrueCurvatures = namedtuple("TrueCurvatures", ["gaussian", "mean"])
CounterexampleFan = namedtuple("CounterexampleFan", ["fan", "true_gaussian"])


@dataclass(frozen=True)
class QuadraticForm:
    """Coefficients of f_a(x, y) = a20 x^2 + a11 x y + a02 y^2."""

    a20: float
    a11: float
    a02: float

    def __post_init__(self):
        for name in ("a20", "a11", "a02"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"coefficient {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    def __call__(self, x, y):
        return self.a20 * x * x + self.a11 * x * y + self.a02 * y * y

    def as_tuple(self):
        return (self.a20, self.a11, self.a02)

    @classmethod
    def random(cls, rng, low=-1.0, high=1.0):
        """Draw i.i.d. uniform coefficients on [low, high]."""
        a20, a11, a02 = rng.uniform(low, high, size=3)
        return cls(a20, a11, a02)


def true_curvatures(form):
    """Gaussian and mean curvature of the graph of form at the origin."""
    return TrueCurvatures(4.0 * form.a20 * form.a02 - form.a11 ** 2, form.a20 + form.a02)


class SurfaceMap:
    """
    Parametric surface u = (xi1, xi2) -> R^3.

    Subclasses implement point(); partial derivatives fall back to central
    finite differences with a step scaled by max(1, |u|).
    """

    name = "surface"
    step = 1e-4

    def point(self, u):
        raise NotImplementedError

    def _h(self, u):
        return self.step * max(1.0, float(np.max(np.abs(u))))

    def partials(self, u):
        u = np.asarray(u, dtype=float)
        h = self._h(u)
        e1, e2 = np.array([h, 0.0]), np.array([0.0, h])
        fu = (self.point(u + e1) - self.point(u - e1)) / (2.0 * h)
        fv = (self.point(u + e2) - self.point(u - e2)) / (2.0 * h)
        return fu, fv

    def second_partials(self, u):
        u = np.asarray(u, dtype=float)
        h = self._h(u)
        e1, e2 = np.array([h, 0.0]), np.array([0.0, h])
        p0 = self.point(u)
        fuu = (self.point(u + e1) - 2.0 * p0 + self.point(u - e1)) / (h * h)
        fvv = (self.point(u + e2) - 2.0 * p0 + self.point(u - e2)) / (h * h)
        fuv = (self.point(u + e1 + e2) - self.point(u + e1 - e2)
               - self.point(u - e1 + e2) + self.point(u - e1 - e2)) / (4.0 * h * h)
        return fuu, fuv, fvv

    def is_regular(self, u, tol=1e-12):
        fu, fv = self.partials(u)
        return float(np.linalg.norm(np.cross(fu, fv))) > tol * max(1.0, np.linalg.norm(fu) * np.linalg.norm(fv))

    def _fundamental_forms(self, u):
        fu, fv = self.partials(u)
        fuu, fuv, fvv = self.second_partials(u)
        normal = np.cross(fu, fv)
        normal = normal / np.linalg.norm(normal)
        first = (fu @ fu, fu @ fv, fv @ fv)
        second = (fuu @ normal, fuv @ normal, fvv @ normal)
        return first, second

    def gaussian_curvature(self, u):
        (e, f, g), (l, m, n) = self._fundamental_forms(u)
        return (l * n - m * m) / (e * g - f * f)

    def mean_curvature(self, u):
        """Signed with respect to the normal fu x fv."""
        (e, f, g), (l, m, n) = self._fundamental_forms(u)
        return (e * n - 2.0 * f * m + g * l) / (2.0 * (e * g - f * f))


class QuadraticGraph(SurfaceMap):
    """Graph (x, y, f_a(x, y)) with analytic derivatives."""

    name = "quadratic_graph"

    def __init__(self, form, name=None):
        self.form = form
        if name:
            self.name = name

    def point(self, u):
        x, y = float(u[0]), float(u[1])
        return np.array([x, y, self.form(x, y)])

    def _gradient(self, u):
        a = self.form
        x, y = float(u[0]), float(u[1])
        return 2.0 * a.a20 * x + a.a11 * y, a.a11 * x + 2.0 * a.a02 * y

    def partials(self, u):
        fx, fy = self._gradient(u)
        return np.array([1.0, 0.0, fx]), np.array([0.0, 1.0, fy])

    def second_partials(self, u):
        a = self.form
        return (np.array([0.0, 0.0, 2.0 * a.a20]),
                np.array([0.0, 0.0, a.a11]),
                np.array([0.0, 0.0, 2.0 * a.a02]))

    def gaussian_curvature(self, u):
        a = self.form
        fx, fy = self._gradient(u)
        return (4.0 * a.a20 * a.a02 - a.a11 ** 2) / (1.0 + fx * fx + fy * fy) ** 2


class SphereMap(SurfaceMap):
    """Sphere of the given radius in (polar, azimuth) coordinates."""

    name = "sphere"

    def __init__(self, radius=1.0):
        self.radius = float(radius)

    def point(self, u):
        t, p = float(u[0]), float(u[1])
        r = self.radius
        return np.array([r * math.sin(t) * math.cos(p), r * math.sin(t) * math.sin(p), r * math.cos(t)])

    def partials(self, u):
        t, p = float(u[0]), float(u[1])
        r = self.radius
        fu = np.array([r * math.cos(t) * math.cos(p), r * math.cos(t) * math.sin(p), -r * math.sin(t)])
        fv = np.array([-r * math.sin(t) * math.sin(p), r * math.sin(t) * math.cos(p), 0.0])
        return fu, fv

    def gaussian_curvature(self, u):
        return 1.0 / self.radius ** 2


class TorusMap(SurfaceMap):
    """Torus with tube radius minor around a circle of radius major."""

    name = "torus"

    def __init__(self, major=2.0, minor=0.7):
        self.major = float(major)
        self.minor = float(minor)

    def point(self, u):
        a, b = float(u[0]), float(u[1])
        ring = self.major + self.minor * math.cos(b)
        return np.array([ring * math.cos(a), ring * math.sin(a), self.minor * math.sin(b)])

    def partials(self, u):
        a, b = float(u[0]), float(u[1])
        ring = self.major + self.minor * math.cos(b)
        fu = np.array([-ring * math.sin(a), ring * math.cos(a), 0.0])
        fv = np.array([-self.minor * math.sin(b) * math.cos(a),
                       -self.minor * math.sin(b) * math.sin(a),
                       self.minor * math.cos(b)])
        return fu, fv

    def gaussian_curvature(self, u):
        b = float(u[1])
        return math.cos(b) / (self.minor * (self.major + self.minor * math.cos(b)))


class FiniteDifferenceSurface(SurfaceMap):
    """User-supplied mapping; all derivatives by central differences."""

    def __init__(self, func, name="custom", step=1e-4):
        self.func = func
        self.name = name
        self.step = step

    def point(self, u):
        return np.asarray(self.func(np.asarray(u, dtype=float)), dtype=float)


# Parallelogram fans over these surfaces; basis values are dyadic so the
# parallelogram identity holds exactly in floating point.
DEFAULT_BASIS = ((1.0, 0.0), (0.375, 0.875))

BUILTIN_SURFACES = {
    "paraboloid": lambda: (QuadraticGraph(QuadraticForm(1.0, 0.25, 0.75), "paraboloid"), (0.25, -0.125)),
    "saddle": lambda: (QuadraticGraph(QuadraticForm(0.625, 0.375, -0.875), "saddle"), (0.125, 0.25)),
    "sphere": lambda: (SphereMap(1.0), (1.0, 0.375)),
    "torus": lambda: (TorusMap(2.0, 0.75), (0.25, 0.5)),
    "wave": lambda: (FiniteDifferenceSurface(
        lambda u: (u[0], u[1], 0.5 * math.sin(1.5 * u[0]) * math.cos(u[1]) + 0.25 * u[1] ** 2), "wave"),
        (0.375, 0.25)),
}


def builtin_surface(name):
    """Return (SurfaceMap, base parameter point) for a named built-in surface."""
    try:
        return BUILTIN_SURFACES[name]()
    except KeyError:
        raise ValueError(f"unknown surface '{name}'; choose from {sorted(BUILTIN_SURFACES)}")


def parallelogram_offsets(basis):
    """Offsets u_j - u for j = 1..6: b1, b2, b2 - b1 and their negatives."""
    b1 = np.asarray(basis[0], dtype=float)
    b2 = np.asarray(basis[1], dtype=float)
    det = b1[0] * b2[1] - b1[1] * b2[0]
    if not abs(det) > 1e-12 * np.linalg.norm(b1) * np.linalg.norm(b2):
        raise DegenerateBasis(f"basis offsets {b1.tolist()} and {b2.tolist()} are linearly dependent")
    b3 = b2 - b1
    return np.array([b1, b2, b3, -b1, -b2, -b3])


def parallelogram_fan(surface, u, basis, r):
    """
    Valence-6 fan over parameter points u + r (u_j - u) satisfying
    u_j - u = (u_{j-1} - u) + (u_{j+1} - u).

    Raises:
        DegenerateBasis: basis offsets linearly dependent
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    u = np.asarray(u, dtype=float)
    params = u + r * parallelogram_offsets(basis)
    return OneRingFan(surface.point(u), np.array([surface.point(p) for p in params]))


def regular_fan(form, n, l1):
    """
    Regular fan of valence n at the origin of the graph of form.

    Neighbour k sits over l_k (cos theta_k, sin theta_k), theta_k = 2 (k-1) pi / n,
    with l_k chosen so that l_k^2 + l_k^4 e_k^2 (the squared spoke length,
    e_k = f_a(cos theta_k, sin theta_k)) is the same for every k.

    Raises:
        InvalidRecurrence: l1 is not a positive finite number or a step of
            the recurrence leaves the positive reals
    """
    if n < 3:
        raise ValueError(f"valence must be >= 3, got {n}")
    if not (math.isfinite(l1) and l1 > 0):
        raise InvalidRecurrence(f"l1 must be positive and finite, got {l1}")

    theta = 2.0 * math.pi * np.arange(n) / n
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    e = np.array([form(c, s) for c, s in zip(cos_t, sin_t)])

    lengths = [float(l1)]
    for k in range(1, n):
        prev = lengths[-1]
        conserved = prev * prev + prev ** 4 * e[k - 1] ** 2
        radicand = 1.0 + 4.0 * e[k] ** 2 * conserved
        if not (math.isfinite(radicand) and radicand > 0):
            raise InvalidRecurrence(f"nonpositive radicand at k={k + 1}: {radicand}")
        # rationalised root of e^2 x^2 + x - conserved = 0; equals conserved when e_k = 0
        squared = 2.0 * conserved / (math.sqrt(radicand) + 1.0)
        if not squared > 0:
            raise InvalidRecurrence(f"nonpositive l_k^2 at k={k + 1}: {squared}")
        lengths.append(math.sqrt(squared))

    lengths = np.array(lengths)
    xs, ys = lengths * cos_t, lengths * sin_t
    neighbors = np.column_stack([xs, ys, [form(x, y) for x, y in zip(xs, ys)]])
    return OneRingFan(np.zeros(3), neighbors)


def spherical_fan(n, spoke_angle, radius=1.0):
    """Regular fan around the north pole of a sphere, neighbours at polar angle spoke_angle."""
    if n < 3:
        raise ValueError(f"valence must be >= 3, got {n}")
    theta = 2.0 * math.pi * np.arange(n) / n
    s, c = math.sin(spoke_angle), math.cos(spoke_angle)
    neighbors = radius * np.column_stack([s * np.cos(theta), s * np.sin(theta), np.full(n, c)])
    return OneRingFan(np.array([0.0, 0.0, radius]), neighbors)


def counterexample_fan(c, r1):
    """
    Valence-4 fan over the graph of x^2 + c x y + y^2.

    The neighbours lie on the axes where the xy term vanishes, so the
    coordinates never depend on c while the true Gaussian curvature is 4 - c^2.
    """
    if not r1 > 0:
        raise ValueError(f"r1 must be positive, got {r1}")
    r1 = float(r1)
    z = r1 * r1
    neighbors = np.array([[r1, 0.0, z], [0.0, r1, z], [-r1, 0.0, z], [0.0, -r1, z]])
    return CounterexampleFan(OneRingFan(np.zeros(3), neighbors), 4.0 - float(c) ** 2)


@dataclass(frozen=True)
class FanFamily:
    """Fans at refinement parameter r around a point with fixed true curvatures."""

    name: str
    generator: Callable
    true_gaussian: float
    true_mean: Optional[float] = None
    valence: Optional[int] = None

    def fan(self, r):
        return self.generator(r)


def regular_family(form, n):
    truth = true_curvatures(form)
    return FanFamily(f"regular(n={n}, a={form.as_tuple()})", lambda r: regular_fan(form, n, r),
                     truth.gaussian, truth.mean, n)


def spherical_family(n, radius=1.0):
    return FanFamily(f"spherical(n={n}, R={radius})", lambda r: spherical_fan(n, r / radius, radius),
                     1.0 / radius ** 2, 1.0 / radius, n)


def parallelogram_family(surface, u, basis=DEFAULT_BASIS):
    parallelogram_offsets(basis)
    return FanFamily(f"parallelogram({surface.name})", lambda r: parallelogram_fan(surface, u, basis, r),
                     surface.gaussian_curvature(u), abs(surface.mean_curvature(u)), 6)


def counterexample_family(c):
    return FanFamily(f"counterexample(c={c})", lambda r: counterexample_fan(c, r).fan,
                     4.0 - float(c) ** 2, 2.0, 4)


def refine(family, levels):
    """
    Generate the family's fans over positive, strictly decreasing levels.

    Returns:
        list of (r, OneRingFan)
    """
    levels = [float(r) for r in levels]
    if not levels:
        raise ValueError("at least one refinement level is required")
    if any(not r > 0 for r in levels):
        raise ValueError(f"levels must be positive: {levels}")
    if any(b >= a for a, b in zip(levels, levels[1:])):
        raise ValueError(f"levels must be strictly decreasing: {levels}")
    return [(r, family.fan(r)) for r in levels]


def projected_angles(fan, normal=(0.0, 0.0, 1.0)):
    """Angles beta_i between consecutive spokes projected onto the plane orthogonal to normal."""
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    spokes = fan.spokes
    flat = spokes - np.outer(spokes @ normal, normal)
    nxt = np.roll(flat, -1, axis=0)
    cross = np.linalg.norm(np.cross(flat, nxt), axis=1)
    return np.arctan2(cross, np.einsum("ij,ij->i", flat, nxt))


def is_regular_vertex(fan, normal=(0.0, 0.0, 1.0), rtol=1e-12, atol=1e-12):
    """Equal spoke lengths and projected angles all 2*pi/n."""
    eta = np.linalg.norm(fan.spokes, axis=1)
    beta = projected_angles(fan, normal)
    equal_eta = float(np.max(eta) - np.min(eta)) <= rtol * float(np.max(eta))
    return equal_eta and bool(np.all(np.abs(beta - 2.0 * math.pi / fan.valence) <= atol))


def has_equal_apex_angles(fan, atol=1e-12):
    """The alternative regularity condition: all gamma_i equal."""
    gamma = star_quantities(fan).gamma
    return float(np.max(gamma) - np.min(gamma)) <= atol


def weight_residual(form, n, l1):
    """
    | ||sum (p_i - p)|| - |sum kappa_i eta_i^2 / 2| | for a regular fan with unit
    weights, kappa_i = 2 f_a(cos theta_i, sin theta_i) the normal-section curvature.
    """
    fan = regular_fan(form, n, l1)
    spokes = fan.spokes
    eta2 = np.einsum("ij,ij->i", spokes, spokes)
    theta = 2.0 * math.pi * np.arange(n) / n
    kappa = np.array([2.0 * form(math.cos(t), math.sin(t)) for t in theta])
    return abs(float(np.linalg.norm(spokes.sum(axis=0))) - abs(float(kappa @ eta2) / 2.0))


def _outward(vertices, triangles):
    out = []
    for a, b, c in triangles:
        normal = np.cross(vertices[b] - vertices[a], vertices[c] - vertices[a])
        centroid = (vertices[a] + vertices[b] + vertices[c]) / 3.0
        out.append((a, b, c) if normal @ centroid > 0 else (a, c, b))
    return out


def octahedron_mesh(edge=1.0):
    """Closed outward-oriented octahedron with the given edge length."""
    s = edge / math.sqrt(2.0)
    vertices = np.array([[s, 0, 0], [-s, 0, 0], [0, s, 0], [0, -s, 0], [0, 0, s], [0, 0, -s]], dtype=float)
    triangles = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    return TriangleMesh(vertices, _outward(vertices, triangles))


def icosahedron_mesh(edge=1.0):
    """Closed outward-oriented icosahedron with the given edge length."""
    g = (1.0 + math.sqrt(5.0)) / 2.0
    base = []
    for s1, s2 in itertools.product((1.0, -1.0), repeat=2):
        base.extend([(0.0, s1, s2 * g), (s1, s2 * g, 0.0), (s2 * g, 0.0, s1)])
    vertices = np.array(base) * (edge / 2.0)
    triangles = [
        (i, j, k) for i, j, k in itertools.combinations(range(12), 3)
        if all(abs(np.linalg.norm(vertices[x] - vertices[y]) - edge) < 1e-9 * edge
               for x, y in ((i, j), (j, k), (i, k)))
    ]
    return TriangleMesh(vertices, _outward(vertices, triangles))
