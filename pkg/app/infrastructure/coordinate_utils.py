"""Coordinate conversion utilities."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from app.domain.entities import HPoint

logger = logging.getLogger(__name__)

STRAIGHT_TOLERANCE = 1e-9  # below this cross product a geodesic is drawn straight


def to_poincare(point: HPoint) -> tuple[float, float]:
    """Poincare disk coordinates of a hyperboloid point."""
    x0, x1, x2 = point.coords
    return x1 / (1.0 + x0), x2 / (1.0 + x0)


def from_poincare(x: float, y: float) -> HPoint:
    """Hyperboloid point of a Poincare disk point."""
    norm = x * x + y * y
    if norm >= 1.0:
        raise ValueError("Point outside the unit disk", (x, y))
    scale = 1.0 / (1.0 - norm)
    return HPoint(((1.0 + norm) * scale, 2.0 * x * scale, 2.0 * y * scale))


def points_from_rows(model: str, rows: Sequence[Sequence[float]]) -> list[HPoint]:
    """Build points from raw coordinate rows in the given model."""
    try:
        if model == "poincare":
            return [from_poincare(float(x), float(y)) for x, y in rows]
        return [HPoint.from_vector(np.array(row, dtype=float)) for row in rows]
    except ValueError as e:
        logger.error(f"Error converting {model} coordinates: {str(e)}", exc_info=True)
        raise


def geodesic_arc(
    p: tuple[float, float], q: tuple[float, float]
) -> tuple[tuple[float, float], float] | None:
    """Center and radius of the circle carrying the disk geodesic from p to q.

    Returns None when the geodesic runs through the origin and is drawn straight.
    """
    (ax, ay), (bx, by) = p, q
    if abs(ax * by - ay * bx) <= STRAIGHT_TOLERANCE:
        return None

    # The circle also passes through the inversion of p in the unit circle
    norm = ax * ax + ay * ay
    cx, cy = ax / norm, ay / norm

    det = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    a2, b2, c2 = norm, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / det
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / det
    return (ux, uy), math.hypot(ax - ux, ay - uy)
