"""Cyclic polygon classification, circumradius solves and radius-R defects."""

import logging
import math
from collections.abc import Callable, Sequence

from scipy import optimize

from app.config import settings
from app.domain.entities import CyclicTuple, PolygonClass
from app.domain.exceptions import BracketError, ClassificationError

logger = logging.getLogger(__name__)


def bisect_root(func: Callable[[float], float], lower: float, upper: float) -> float:
    """Bisection root of a bracketed monotone function."""
    try:
        root = optimize.bisect(
            func,
            lower,
            upper,
            xtol=settings.bisect_xtol,
            rtol=settings.bisect_rtol,
            maxiter=settings.bisect_maxiter,
        )
    except (ValueError, RuntimeError) as e:
        logger.debug(f"Bisection failed on [{lower}, {upper}]: {str(e)}")
        raise BracketError(f"Root not bracketed on [{lower}, {upper}]: {e}") from e
    return float(root)


def half_angle(side: float, radius: float) -> float:
    """θ(J) = arcsin(sinh(d/2)/sinh J), half the central angle over a side."""
    return math.asin(min(1.0, math.sinh(side / 2.0) / math.sinh(radius)))


def base_angle(side: float, radius: float) -> float:
    """β(J) with cos β = tanh(d/2)/tanh J, the base angle of the isosceles piece."""
    return math.acos(min(1.0, math.tanh(side / 2.0) / math.tanh(radius)))


def _validate(sides: Sequence[float]) -> tuple[float, ...]:
    if len(sides) < 3:
        raise ClassificationError(f"Need at least three sides, got {len(sides)}")
    if not all(side > 0.0 for side in sides):
        raise ClassificationError(f"Side lengths must be positive: {tuple(sides)}")
    return tuple(float(side) for side in sides)


def _split_longest(sides: tuple[float, ...]) -> tuple[float, list[float]]:
    index = max(range(len(sides)), key=lambda i: sides[i])
    return sides[index], [side for i, side in enumerate(sides) if i != index]


def _classify_sides(sides: tuple[float, ...]) -> PolygonClass:
    longest, others = _split_longest(sides)
    if math.sinh(longest / 2.0) >= sum(math.sinh(side / 2.0) for side in others):
        return PolygonClass.NOT_CYCLIC

    half = longest / 2.0
    excess = sum(half_angle(side, half) for side in others) - math.pi / 2.0
    if abs(excess) <= settings.classification_dead_band:
        return PolygonClass.BOUNDARY_CENTERED
    if excess > 0.0:
        return PolygonClass.CENTERED
    return PolygonClass.NON_CENTERED


def _solve_radius(sides: tuple[float, ...], polygon_class: PolygonClass) -> float:
    longest, others = _split_longest(sides)
    half = longest / 2.0
    if polygon_class is PolygonClass.BOUNDARY_CENTERED:
        return half

    if polygon_class is PolygonClass.CENTERED:

        def angle_gap(radius: float) -> float:
            return sum(half_angle(side, radius) for side in sides) - math.pi

    else:

        def angle_gap(radius: float) -> float:
            return half_angle(longest, radius) - sum(
                half_angle(side, radius) for side in others
            )

    # a root closer to longest/2 than the first bracket is the boundary itself
    lower = half + settings.bisect_xtol
    if angle_gap(lower) <= 0.0:
        return half
    return bisect_root(angle_gap, lower, half + settings.bracket_span)


def classify(sides: Sequence[float]) -> CyclicTuple:
    """Classify a side-length tuple and solve its circumradius."""
    values = _validate(sides)
    polygon_class = _classify_sides(values)
    if polygon_class is PolygonClass.NOT_CYCLIC:
        return CyclicTuple(values, polygon_class, math.inf)
    return CyclicTuple(values, polygon_class, _solve_radius(values, polygon_class))


def radius(polygon: CyclicTuple) -> float:
    """Circumradius J of a cyclic tuple."""
    if not polygon.is_cyclic:
        raise ClassificationError(f"Tuple {polygon.sides} is not cyclic")
    return polygon.radius


def regular_polygon(n: int, side: float) -> CyclicTuple:
    """The symmetric polygon P_n(d)."""
    return classify([side] * n)


def regular_radius(n: int, side: float) -> float:
    """Closed form sinh J = sinh(d/2)/sin(π/n)."""
    return math.asinh(math.sinh(side / 2.0) / math.sin(math.pi / n))


def b0(others: Sequence[float]) -> float:
    """Length d making (d, others) boundary-centered."""
    values = [float(value) for value in others]
    if len(values) < 2:
        raise ClassificationError("b0 needs at least two side lengths")
    if not all(value > 0.0 for value in values):
        raise ClassificationError(f"Side lengths must be positive: {values}")

    if len(values) == 2:
        return math.acosh(math.cosh(values[0]) + math.cosh(values[1]) - 1.0)

    def angle_gap(longest: float) -> float:
        return (
            sum(half_angle(side, longest / 2.0) for side in values) - math.pi / 2.0
        )

    lower = max(values)
    if angle_gap(lower) <= 0.0:
        return lower
    return bisect_root(angle_gap, lower, lower + settings.bracket_span)


def h0(others: Sequence[float]) -> float:
    """Supremum of first entries keeping (d, others) cyclic."""
    values = [float(value) for value in others]
    if len(values) < 2:
        raise ClassificationError("h0 needs at least two side lengths")
    return 2.0 * math.asinh(sum(math.sinh(value / 2.0) for value in values))


def triangle_partner(longest: float, other: float) -> float:
    """x with cosh longest = cosh x + cosh other − 1, so (longest, x, other) is boundary-centered."""
    return math.acosh(max(1.0, math.cosh(longest) - math.cosh(other) + 1.0))


def _check_radius(sides: Sequence[float], disk_radius: float) -> None:
    limit = min(sides) / 2.0 + settings.defect_radius_slack
    if disk_radius < 0.0 or disk_radius > limit:
        raise ClassificationError(
            f"Disk radius {disk_radius} outside [0, {min(sides) / 2.0}]"
        )


def isosceles_defect(side: float, leg: float, disk_radius: float) -> float:
    """D_R(d, J) of the isosceles triangle on a side with legs of length J."""
    if side <= 0.0 or leg < side / 2.0:
        raise ClassificationError(f"Leg {leg} shorter than half the side {side}")
    _check_radius([side], disk_radius)

    theta = half_angle(side, leg)
    beta = base_angle(side, leg)
    return math.pi - 2.0 * theta - 2.0 * beta * math.cosh(disk_radius)


def _signs(polygon: CyclicTuple) -> list[float]:
    signs = [1.0] * polygon.n
    if polygon.polygon_class is PolygonClass.NON_CENTERED:
        signs[polygon.longest_index] = -1.0
    return signs


def defect(polygon: CyclicTuple, disk_radius: float) -> float:
    """Radius-R defect: area outside the disks of radius R at the vertices."""
    if not polygon.is_cyclic:
        raise ClassificationError(f"Tuple {polygon.sides} is not cyclic")
    _check_radius(polygon.sides, disk_radius)

    return sum(
        sign * isosceles_defect(side, polygon.radius, disk_radius)
        for sign, side in zip(_signs(polygon), polygon.sides, strict=True)
    )


def defect_of(sides: Sequence[float], disk_radius: float) -> float:
    """Shorthand for defect(classify(sides), R)."""
    return defect(classify(sides), disk_radius)


def defect_partial(polygon: CyclicTuple, index: int, disk_radius: float) -> float:
    """Partial derivative of the defect in side `index`."""
    if polygon.polygon_class not in (PolygonClass.CENTERED, PolygonClass.NON_CENTERED):
        raise ClassificationError(
            f"Derivative is one-sided for class {polygon.polygon_class.value}"
        )
    _check_radius(polygon.sides, disk_radius)

    side = polygon.sides[index]
    magnitude = math.sqrt(
        max(
            0.0,
            1.0 / math.cosh(side / 2.0) ** 2 - 1.0 / math.cosh(polygon.radius) ** 2,
        )
    )
    return _signs(polygon)[index] * math.cosh(disk_radius) * magnitude


def vertex_angles(polygon: CyclicTuple) -> list[float]:
    """Interior angles of the inscribed polygon, vertex k between sides k−1 and k."""
    if not polygon.is_cyclic:
        raise ClassificationError(f"Tuple {polygon.sides} is not cyclic")

    betas = [
        sign * base_angle(side, polygon.radius)
        for sign, side in zip(_signs(polygon), polygon.sides, strict=True)
    ]
    return [betas[k - 1] + betas[k] for k in range(polygon.n)]


def horocyclic_defect(others: Sequence[float], disk_radius: float) -> float:
    """Defect of (h0(others), others) in the infinite-radius limit."""
    values = [float(value) for value in others]
    horocyclic = h0(values)
    _check_radius([*values, horocyclic], disk_radius)

    def limit_beta(side: float) -> float:
        return math.acos(math.tanh(side / 2.0))

    betas = sum(limit_beta(side) for side in values) - limit_beta(horocyclic)
    return (len(values) - 1) * math.pi - 2.0 * math.cosh(disk_radius) * betas
