"""Tests for cyclic polygon classification and defects."""

import math

import numpy as np
import pytest

from app.domain.cyclic import (
    b0,
    classify,
    defect,
    defect_of,
    defect_partial,
    h0,
    horocyclic_defect,
    isosceles_defect,
    radius,
    regular_polygon,
    regular_radius,
    triangle_partner,
    vertex_angles,
)
from app.domain.entities import PolygonClass
from app.domain.exceptions import ClassificationError
from app.domain.surfaces import constants


class TestClassify:
    """Test side-length classification and circumradius solves."""

    def test_equilateral_is_centered(self) -> None:
        """Test an equilateral triangle is centered with the closed-form radius."""
        polygon = classify([1.0, 1.0, 1.0])
        assert polygon.polygon_class is PolygonClass.CENTERED
        assert polygon.radius == pytest.approx(regular_radius(3, 1.0), abs=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
    def test_regular_radius_matches_solve(self, n: int) -> None:
        """Test the bisection radius of P_n(d) against sinh J = sinh(d/2)/sin(pi/n)."""
        polygon = regular_polygon(n, 1.7)
        assert polygon.radius == pytest.approx(regular_radius(n, 1.7), abs=1e-12)

    def test_not_cyclic(self) -> None:
        """Test a tuple failing the sinh(d/2) inequality."""
        polygon = classify([3.0, 1.0, 1.0])
        assert polygon.polygon_class is PolygonClass.NOT_CYCLIC
        assert math.isinf(polygon.radius)
        with pytest.raises(ClassificationError, match="not cyclic"):
            radius(polygon)

    def test_boundary_centered(self) -> None:
        """Test the longest side equal to b0 of the others."""
        longest = b0([1.0, 1.0])
        polygon = classify([longest, 1.0, 1.0])
        assert polygon.polygon_class is PolygonClass.BOUNDARY_CENTERED
        assert polygon.radius == pytest.approx(longest / 2.0, abs=1e-12)

    def test_non_centered(self) -> None:
        """Test a longest side between b0 and h0."""
        polygon = classify([1.6, 1.0, 1.0])
        assert b0([1.0, 1.0]) < 1.6 < h0([1.0, 1.0])
        assert polygon.polygon_class is PolygonClass.NON_CENTERED
        assert polygon.radius > 0.8

    @pytest.mark.parametrize("epsilon", [1e-8, 1e-10])
    def test_just_past_the_boundary(self, epsilon: float) -> None:
        """Test a longest side slightly above b0 keeps a radius at half the longest side."""
        longest = b0([1.0, 1.0]) * (1.0 + epsilon)
        polygon = classify([longest, 1.0, 1.0])
        assert polygon.polygon_class in (
            PolygonClass.NON_CENTERED,
            PolygonClass.BOUNDARY_CENTERED,
        )
        assert polygon.radius == pytest.approx(longest / 2.0, abs=1e-9)
        assert math.isfinite(defect(polygon, 0.3))

    @pytest.mark.parametrize("epsilon", [1e-8, 1e-10])
    def test_short_side_just_below_the_boundary(self, epsilon: float) -> None:
        """Test shortening a side of a boundary-centered triangle."""
        polygon = classify([b0([1.0, 1.0]), 1.0, 1.0 - epsilon])
        assert polygon.polygon_class in (
            PolygonClass.NON_CENTERED,
            PolygonClass.BOUNDARY_CENTERED,
        )
        assert polygon.radius == pytest.approx(b0([1.0, 1.0]) / 2.0, abs=1e-9)

    @pytest.mark.parametrize("epsilon", [1e-8, 1e-10])
    def test_just_inside_the_boundary(self, epsilon: float) -> None:
        """Test a longest side slightly below b0."""
        longest = b0([1.2, 0.9]) * (1.0 - epsilon)
        polygon = classify([longest, 1.2, 0.9])
        assert polygon.polygon_class in (
            PolygonClass.CENTERED,
            PolygonClass.BOUNDARY_CENTERED,
        )
        assert polygon.radius == pytest.approx(longest / 2.0, abs=1e-9)

    def test_classification_is_order_free(self) -> None:
        """Test class and radius do not depend on side order."""
        first = classify([1.2, 0.9, 1.4, 1.1])
        second = classify([1.4, 1.1, 1.2, 0.9])
        assert first.polygon_class is second.polygon_class
        assert first.radius == pytest.approx(second.radius, abs=1e-12)

    def test_invalid_sides(self) -> None:
        """Test too few or non-positive sides."""
        with pytest.raises(ClassificationError, match="at least three"):
            classify([1.0, 1.0])
        with pytest.raises(ClassificationError, match="positive"):
            classify([1.0, 0.0, 1.0])


class TestBoundaryLengths:
    """Test b0, h0 and the triangle partner."""

    def test_b0_two_sides_closed_form(self) -> None:
        """Test cosh b0 = cosh a + cosh b - 1."""
        value = b0([1.1, 0.7])
        assert math.cosh(value) == pytest.approx(math.cosh(1.1) + math.cosh(0.7) - 1.0)

    def test_b0_three_sides_is_boundary_centered(self) -> None:
        """Test the bisected b0 of three sides lands on the boundary class."""
        others = [1.0, 1.2, 0.8]
        polygon = classify([b0(others), *others])
        assert polygon.polygon_class is PolygonClass.BOUNDARY_CENTERED

    def test_b0_below_h0(self) -> None:
        """Test b0 < h0."""
        others = [1.0, 1.2, 0.8]
        assert b0(others) < h0(others)

    def test_h0_separates_cyclic(self) -> None:
        """Test lengths just below h0 are cyclic and just above are not."""
        others = [1.0, 1.0, 1.0]
        horocyclic = h0(others)
        assert classify([horocyclic * (1.0 - 1e-6), *others]).is_cyclic
        assert not classify([horocyclic * (1.0 + 1e-9), *others]).is_cyclic

    def test_triangle_partner(self) -> None:
        """Test (longest, partner, other) is boundary-centered."""
        partner = triangle_partner(2.0, 1.3)
        assert classify([2.0, partner, 1.3]).polygon_class is PolygonClass.BOUNDARY_CENTERED

    def test_b0_needs_two_sides(self) -> None:
        """Test b0 of a single side."""
        with pytest.raises(ClassificationError):
            b0([1.0])


class TestDefect:
    """Test radius-R defects."""

    def test_zero_radius_defect_is_area(self) -> None:
        """Test D_0 equals the Gauss-Bonnet area."""
        polygon = classify([1.0, 1.3, 1.1, 0.9])
        area = (polygon.n - 2) * math.pi - sum(vertex_angles(polygon))
        assert defect(polygon, 0.0) == pytest.approx(area, abs=1e-12)

    @pytest.mark.parametrize("sides", [(1.0, 1.0, 1.0), (1.6, 1.0, 1.0), (1.2, 1.4, 1.3, 1.5)])
    def test_defect_subtracts_vertex_sectors(self, sides: tuple[float, ...]) -> None:
        """Test D_R = D_0 - (cosh R - 1) * sum of vertex angles."""
        polygon = classify(sides)
        disk = 0.4
        expected = defect(polygon, 0.0) - sum(vertex_angles(polygon)) * (math.cosh(disk) - 1.0)
        assert defect(polygon, disk) == pytest.approx(expected, abs=1e-12)

    def test_isosceles_defect_equilateral(self) -> None:
        """Test three isosceles pieces add up to the triangle defect."""
        polygon = regular_polygon(3, 1.0)
        piece = isosceles_defect(1.0, polygon.radius, 0.3)
        assert 3.0 * piece == pytest.approx(defect(polygon, 0.3), abs=1e-12)

    def test_radius_too_large(self) -> None:
        """Test R above half the shortest side."""
        with pytest.raises(ClassificationError, match="Disk radius"):
            defect_of([1.0, 1.0, 1.0], 0.6)

    def test_not_cyclic_has_no_defect(self) -> None:
        """Test the defect of a non-cyclic tuple."""
        with pytest.raises(ClassificationError, match="not cyclic"):
            defect_of([3.0, 1.0, 1.0], 0.1)

    def test_regular_polygons_at_r1(self) -> None:
        """Test the defects of P_n(d_1) at radius r_1."""
        values = constants()
        expected = {3: 0.12586, 4: 0.56593, 5: 1.22041, 6: 2.00496}
        for n, value in expected.items():
            computed = defect(regular_polygon(n, values.d_1), values.r_1)
            assert value <= computed <= value + 2e-5

    def test_partial_matches_finite_difference(self) -> None:
        """Test the analytic side derivative against a central difference."""
        sides = [1.0, 1.1, 1.2]
        disk = 0.3
        step = 1e-6
        analytic = defect_partial(classify(sides), 1, disk)
        plus = defect_of([1.0, 1.1 + step, 1.2], disk)
        minus = defect_of([1.0, 1.1 - step, 1.2], disk)
        assert analytic == pytest.approx((plus - minus) / (2.0 * step), abs=1e-6)

    def test_partial_sign_on_longest_non_centered_side(self) -> None:
        """Test the longest side of a non-centered tuple has a negative derivative."""
        polygon = classify([1.6, 1.0, 1.0])
        assert defect_partial(polygon, 0, 0.2) < 0.0
        assert defect_partial(polygon, 1, 0.2) > 0.0

    def test_partial_undefined_on_boundary(self) -> None:
        """Test the derivative on the boundary class."""
        polygon = classify([b0([1.0, 1.0]), 1.0, 1.0])
        with pytest.raises(ClassificationError, match="one-sided"):
            defect_partial(polygon, 0, 0.1)

    def test_horocyclic_limit(self) -> None:
        """Test the defect approaches the horocyclic value as d tends to h0."""
        others = [1.0, 1.0, 1.0]
        near = h0(others) * (1.0 - 1e-9)
        assert defect_of([near, *others], 0.3) == pytest.approx(
            horocyclic_defect(others, 0.3), abs=1e-3
        )


class TestRandomizedProperties:
    """Sampled properties of classification, defects and their derivatives."""

    def test_boundary_bracketing(self) -> None:
        """Test the classes on either side of b0 and h0."""
        rng = np.random.default_rng(20)
        epsilon = 1e-6
        checked = 0
        for _ in range(60):
            others = list(rng.uniform(0.5, 2.0, size=int(rng.integers(2, 4))))
            boundary, horocyclic = b0(others), h0(others)
            if boundary - max(others) < 1e-3:
                continue
            checked += 1
            assert classify([boundary - epsilon, *others]).polygon_class is PolygonClass.CENTERED
            on_boundary = classify([boundary, *others])
            assert on_boundary.polygon_class is PolygonClass.BOUNDARY_CENTERED
            assert on_boundary.radius == pytest.approx(boundary / 2.0, abs=1e-10)
            assert (
                classify([boundary + epsilon, *others]).polygon_class
                is PolygonClass.NON_CENTERED
            )
            assert (
                classify([horocyclic - epsilon, *others]).polygon_class
                is PolygonClass.NON_CENTERED
            )
            assert not classify([horocyclic + epsilon, *others]).is_cyclic
        assert checked >= 30

    def test_monotone_in_every_side(self) -> None:
        """Test lengthening sides of a centered tuple never lowers its defect."""
        rng = np.random.default_rng(21)
        for _ in range(1000):
            n = int(rng.integers(3, 5))
            sides = rng.uniform(1.0, 1.25, size=n)
            longer = sides + rng.uniform(0.0, 0.05, size=n)
            disk = float(rng.uniform(0.0, 0.5))
            shorter_polygon, longer_polygon = classify(list(sides)), classify(list(longer))
            assert shorter_polygon.polygon_class is PolygonClass.CENTERED
            assert longer_polygon.polygon_class is PolygonClass.CENTERED
            assert defect(longer_polygon, disk) >= defect(shorter_polygon, disk) - 1e-12

    def test_partials_match_finite_differences(self) -> None:
        """Test the analytic partials of random centered tuples."""
        rng = np.random.default_rng(22)
        step = 1e-6
        checked = 0
        while checked < 100:
            sides = list(rng.uniform(0.8, 1.6, size=int(rng.integers(3, 6))))
            polygon = classify(sides)
            if polygon.polygon_class is not PolygonClass.CENTERED:
                continue
            disk = float(rng.uniform(0.0, min(sides) / 2.0 - 2.0 * step))
            index = int(rng.integers(len(sides)))
            analytic = defect_partial(polygon, index, disk)
            if analytic < 1e-2:
                continue
            plus, minus = list(sides), list(sides)
            plus[index] += step
            minus[index] -= step
            numeric = (defect_of(plus, disk) - defect_of(minus, disk)) / (2.0 * step)
            assert analytic == pytest.approx(numeric, rel=1e-5)
            checked += 1
