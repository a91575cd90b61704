"""Hyperboloid-model primitives: distances, angles, circumcenters and isometries."""

import logging
import math

import numpy as np

from app.config import settings
from app.domain.entities import LORENTZ_FORM, GeodesicSegment, HIsometry, HPoint
from app.domain.exceptions import GeometryError

logger = logging.getLogger(__name__)


def minkowski(a: np.ndarray, b: np.ndarray) -> float:
    """Minkowski inner product −a0b0 + a1b1 + a2b2."""
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def _check(point: HPoint) -> np.ndarray:
    vector = point.vector
    drift = abs(minkowski(vector, vector) + 1.0)
    if drift > settings.validation_tolerance * max(1.0, vector[0] ** 2):
        raise GeometryError(f"Point off the hyperboloid by {drift:.3e}")
    return vector


def dist(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance, computed from the chord to stay accurate for close points."""
    gap = _check(p) - _check(q)
    return 2.0 * math.asinh(math.sqrt(max(minkowski(gap, gap), 0.0)) / 2.0)


def triangle_angle(a: float, b: float, c: float) -> float:
    """Angle opposite side `a` of the triangle with sides a, b, c."""
    if min(a, b, c) <= 0.0:
        raise GeometryError(f"Triangle sides must be positive: {(a, b, c)}")

    if not (a < b + c and b < a + c and c < a + b):
        raise GeometryError(f"Sides violate the triangle inequality: {(a, b, c)}")

    cosine = (math.cosh(b) * math.cosh(c) - math.cosh(a)) / (
        math.sinh(b) * math.sinh(c)
    )
    return math.acos(min(1.0, max(-1.0, cosine)))


def midpoint(p: HPoint, q: HPoint) -> HPoint:
    return HPoint.from_vector(p.vector + q.vector)


def tangent_toward(p: HPoint, q: HPoint) -> np.ndarray:
    """Unit tangent vector at p pointing along the geodesic to q."""
    pv, qv = p.vector, q.vector
    tangent = qv + minkowski(pv, qv) * pv
    norm = minkowski(tangent, tangent)
    if norm <= 0.0:
        raise GeometryError("Coincident points have no tangent direction")
    return tangent / math.sqrt(norm)


def normal_at(p: HPoint, tangent: np.ndarray) -> np.ndarray:
    """Unit tangent at p obtained by turning `tangent` a quarter turn counterclockwise."""
    return LORENTZ_FORM @ np.cross(p.vector, tangent)


def offset_point(p: HPoint, toward: HPoint, angle: float, distance: float) -> HPoint:
    """Point at `distance` from p, `angle` counterclockwise from the direction of `toward`."""
    u = tangent_toward(p, toward)
    direction = math.cos(angle) * u + math.sin(angle) * normal_at(p, u)
    return HPoint.from_vector(
        math.cosh(distance) * p.vector + math.sinh(distance) * direction
    )


def third_vertex(p: HPoint, q: HPoint, a: float, b: float) -> HPoint:
    """Apex x left of p→q with d(x, q) = a and d(x, p) = b."""
    angle = triangle_angle(a, b, dist(p, q))
    return offset_point(p, q, angle, b)


def circumcenter(p: HPoint, q: HPoint, r: HPoint) -> HPoint | None:
    """Point equidistant from p, q and r, or None when they are not cocyclic."""
    pv, qv, rv = _check(p), _check(q), _check(r)
    for x, y in ((pv, qv), (pv, rv), (qv, rv)):
        if np.abs(x - y).max() <= settings.construction_tolerance:
            raise GeometryError("Circumcenter needs three distinct points")

    # Intersection line of the bisector planes ⟨x, p − q⟩ = 0 and ⟨x, p − r⟩ = 0
    direction = LORENTZ_FORM @ np.cross(pv - qv, pv - rv)
    norm = minkowski(direction, direction)
    scale = float(np.dot(direction, direction))
    if scale == 0.0 or norm >= -settings.construction_tolerance**2 * scale:
        return None
    return HPoint.from_vector(direction)


def polygon_area(vertex_angles: list[float], n: int) -> float:
    """Gauss–Bonnet area (n − 2)π − Σ angles."""
    if n < 3:
        raise GeometryError(f"A polygon needs at least three vertices, got {n}")

    if len(vertex_angles) != n:
        raise GeometryError("Angle count does not match the vertex count")

    if not all(0.0 < angle < math.pi for angle in vertex_angles):
        raise GeometryError("Polygon angles must lie in (0, π)")

    return (n - 2) * math.pi - sum(vertex_angles)


def interior_angle(vertex: HPoint, before: HPoint, after: HPoint) -> float:
    """Angle at `vertex` between the geodesics to `before` and `after`."""
    u = tangent_toward(vertex, before)
    w = tangent_toward(vertex, after)
    return math.acos(min(1.0, max(-1.0, minkowski(u, w))))


def _frame(point: HPoint, toward: HPoint) -> np.ndarray:
    tangent = tangent_toward(point, toward)
    return np.column_stack([point.vector, tangent, normal_at(point, tangent)])


def segment_pairing_isometry(
    src: GeodesicSegment, dst: GeodesicSegment, flip: bool
) -> HIsometry:
    """Orientation-preserving isometry carrying src onto dst.

    Without flip the start of src goes to the start of dst; with flip it goes
    to the end of dst.
    """
    if abs(src.length - dst.length) >= settings.construction_tolerance * max(
        1.0, src.length
    ):
        raise GeometryError(
            f"Segment lengths differ: {src.length:.12f} vs {dst.length:.12f}"
        )

    source = _frame(src.start, src.end)
    if flip:
        target = _frame(dst.end, dst.start)
    else:
        target = _frame(dst.start, dst.end)

    # Frames are Lorentz-orthonormal, so the inverse is J Fᵀ J
    matrix = target @ LORENTZ_FORM @ source.T @ LORENTZ_FORM
    return HIsometry(matrix)


def rotation(angle: float) -> HIsometry:
    """Rotation about the origin."""
    c, s = math.cos(angle), math.sin(angle)
    return HIsometry(np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))


def translation(distance: float) -> HIsometry:
    """Translation along the x1 axis through the origin."""
    ch, sh = math.cosh(distance), math.sinh(distance)
    return HIsometry(np.array([[ch, sh, 0.0], [sh, ch, 0.0], [0.0, 0.0, 1.0]]))


def translation_to(point: HPoint) -> HIsometry:
    """Pure translation carrying the origin to `point`."""
    x0, x1, x2 = point.coords
    k = 1.0 / (1.0 + x0)
    return HIsometry(
        np.array(
            [
                [x0, x1, x2],
                [x1, 1.0 + k * x1 * x1, k * x1 * x2],
                [x2, k * x1 * x2, 1.0 + k * x2 * x2],
            ]
        )
    )


def pairwise_distances(vectors: np.ndarray) -> np.ndarray:
    """Matrix of hyperbolic distances between rows of hyperboloid coordinates."""
    gaps = vectors[:, None, :] - vectors[None, :, :]
    chords = -(gaps[..., 0] ** 2) + gaps[..., 1] ** 2 + gaps[..., 2] ** 2
    return np.asarray(2.0 * np.arcsinh(np.sqrt(np.maximum(chords, 0.0)) / 2.0))
