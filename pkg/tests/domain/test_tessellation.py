"""Tests for Voronoi and Delaunay tessellations and the centered dual."""

import dataclasses
import math

import numpy as np
import pytest

from app.domain import admissible, surfaces
from app.domain.entities import (
    CenteredDual,
    DelaunayComplex,
    DualCell,
    EdgeCenteredness,
    HPoint,
    PolygonClass,
    SurfaceModel,
    VoronoiComplex,
)
from app.domain.exceptions import TessellationError
from app.domain.hypgeo import dist
from app.domain.tessellation import (
    boundary_diagonal,
    cell_area_oracle,
    cell_defect,
    centered_dual,
    delaunay,
    duality_mismatches,
    edge_census,
    empty_disk_gap,
    euler_characteristic,
    face_census,
    midpoint_crossing_gap,
    nearest_site,
    nearest_site_mismatches,
    non_convex_cells,
    short_edge_violations,
    voronoi,
)


def hexagon_sites() -> list[HPoint]:
    """The origin ringed by six sites at distance one."""
    ring = [HPoint.from_polar(1.0, k * math.pi / 3.0) for k in range(6)]
    return [HPoint.origin(), *ring]


def random_sites(seed: int, count: int = 20) -> list[HPoint]:
    """Sites scattered over a disk of radius 2.5 about the origin."""
    rng = np.random.default_rng(seed)
    radii = 2.5 * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=count)
    return [HPoint.from_polar(float(r), float(a)) for r, a in zip(radii, angles, strict=True)]


def lift(model: SurfaceModel, t: float = 0.0) -> tuple[list[HPoint], CenteredDual]:
    surface = surfaces.build_surface(model, t)
    ball = surfaces.default_ball(surface)
    sites = surfaces.lift_sites(surface, ball)
    dual = centered_dual(delaunay(voronoi(sites, ball, sites[0])))
    return sites, dual


class TestVoronoi:
    """Test the clipped Voronoi complex."""

    def test_too_few_sites(self) -> None:
        """Test fewer than four sites."""
        sites = hexagon_sites()[:3]
        with pytest.raises(TessellationError, match="at least four"):
            voronoi(sites, 3.0, HPoint.origin())

    def test_duplicate_sites(self) -> None:
        """Test a repeated site."""
        sites = hexagon_sites()
        with pytest.raises(TessellationError, match="Duplicate"):
            voronoi([*sites, sites[2]], 3.0, HPoint.origin())

    def test_nearly_coincident_sites(self) -> None:
        """Test two sites closer than the separation floor."""
        sites = [*hexagon_sites(), HPoint.from_polar(1.0, math.pi / 3.0 + 1e-8)]
        with pytest.raises(TessellationError, match="Duplicate"):
            voronoi(sites, 3.0, HPoint.origin())

    def test_hexagon_vertices_are_empty_disks(self) -> None:
        """Test every exact vertex is equidistant from its sites and closer than the rest."""
        sites = hexagon_sites()
        complex_ = voronoi(sites, 3.0, HPoint.origin())
        assert len(complex_.interior_vertices) == 6
        for vertex in complex_.interior_vertices:
            for site in vertex.sites:
                assert dist(vertex.position, sites[site]) == pytest.approx(
                    vertex.radius, abs=1e-9
                )
            assert all(
                dist(vertex.position, site) >= vertex.radius - 1e-9 for site in sites
            )

    def test_nearest_site(self) -> None:
        """Test the brute-force nearest site."""
        sites = hexagon_sites()
        assert nearest_site(sites, HPoint.from_polar(0.9, math.pi / 3.0)) == 2
        assert nearest_site(sites, HPoint.from_polar(0.1, 2.0)) == 0


class TestDelaunay:
    """Test the Delaunay complex of the hexagon configuration."""

    @pytest.fixture(scope="class")
    def hexagon(self) -> CenteredDual:
        """Centered dual of the hexagon configuration."""
        return centered_dual(delaunay(voronoi(hexagon_sites(), 3.0, HPoint.origin())))

    def test_six_centered_triangles(self, hexagon: CenteredDual) -> None:
        """Test six centered triangles meet at the central site."""
        faces = hexagon.delaunay.faces_at(0)
        assert len(faces) == 6
        assert all(face.polygon.polygon_class is PolygonClass.CENTERED for face in faces)

    def test_spokes_are_centered(self, hexagon: CenteredDual) -> None:
        """Test the six spokes are centered edges of length one."""
        spokes = hexagon.delaunay.edges_at(0)
        assert len(spokes) == 6
        assert all(edge.centered for edge in spokes)
        assert all(edge.length == pytest.approx(1.0, abs=1e-12) for edge in spokes)
        assert hexagon.forest == ()

    def test_endpoint_edge_near_basepoint(self) -> None:
        """Test a diameter of a vertex circle is an endpoint edge."""
        sites = [
            HPoint.from_polar(1.0, 0.0),
            HPoint.from_polar(1.0, math.pi),
            HPoint.from_polar(1.0, math.pi / 2.0),
            HPoint.from_polar(1.5, 3.0 * math.pi / 2.0),
        ]
        complex_ = delaunay(voronoi(sites, 4.0, HPoint.origin()))
        diameter = next(edge for edge in complex_.edges if set(edge.sites) == {0, 1})
        assert diameter.centeredness is EdgeCenteredness.ENDPOINT
        assert not diameter.centered
        with pytest.raises(TessellationError, match="clip zone"):
            centered_dual(complex_)


class TestSurfaceLifts:
    """Test tessellations of lifted example surfaces."""

    @pytest.fixture(scope="class")
    def alpha(self) -> tuple[list[HPoint], CenteredDual]:
        """Lift of F_alpha."""
        return lift(SurfaceModel.F_ALPHA)

    @pytest.fixture(scope="class")
    def deformed(self) -> tuple[list[HPoint], CenteredDual]:
        """Lift of F_t just below t = 0."""
        return lift(SurfaceModel.F_T, -1e-3)

    @staticmethod
    def cell_at_basepoint(dual: CenteredDual, with_tree: bool) -> DualCell:
        voronoi_ = dual.delaunay.voronoi
        return next(
            cell
            for cell in dual.cells
            if (cell.tree is not None) == with_tree
            and any(0 in voronoi_.vertices[v].sites for v in cell.vertices)
        )

    def test_alpha_census(self, alpha: tuple[list[HPoint], CenteredDual]) -> None:
        """Test six equilateral triangles with no non-centered edge."""
        _, dual = alpha
        assert face_census(dual.delaunay, 0) == {3: 6}
        assert edge_census(dual.delaunay, 0) == (9, 0)

    def test_alpha_cell_defect(self, alpha: tuple[list[HPoint], CenteredDual]) -> None:
        """Test a triangle cell defect against its measured area."""
        _, dual = alpha
        radius = surfaces.constants().r_alpha
        cell = self.cell_at_basepoint(dual, with_tree=False)
        assert cell_defect(dual, cell, radius) == pytest.approx(
            cell_area_oracle(dual, cell, radius), abs=1e-7
        )

    def test_deformed_has_one_non_centered_class(
        self, deformed: tuple[list[HPoint], CenteredDual]
    ) -> None:
        """Test F_t has a single non-centered edge class."""
        _, dual = deformed
        assert edge_census(dual.delaunay, 0) == (9, 1)

    def test_deformed_cell(self, deformed: tuple[list[HPoint], CenteredDual]) -> None:
        """Test the one-edge tree cell against the oracle and the tree defect."""
        sites, dual = deformed
        radius = surfaces.injectivity_radius(sites)
        cell = self.cell_at_basepoint(dual, with_tree=True)
        assert cell.tree is not None
        assert len(cell.tree.edges) == 1
        assert len(cell.boundary_edges) == 4

        defect = cell_defect(dual, cell, radius)
        assert defect == pytest.approx(cell_area_oracle(dual, cell, radius), abs=1e-7)

        tree, edge_lengths, lengths = admissible.rooted_tree_of(dual, cell.tree)
        assert admissible.ad_membership(tree, edge_lengths, lengths)
        assert admissible.tree_defect(tree, edge_lengths, lengths, radius) == pytest.approx(
            defect, abs=1e-9
        )

    def test_radius_above_half_edge(
        self, alpha: tuple[list[HPoint], CenteredDual]
    ) -> None:
        """Test a disk radius beyond half the shortest boundary edge."""
        _, dual = alpha
        cell = self.cell_at_basepoint(dual, with_tree=False)
        with pytest.raises(TessellationError, match="exceeds half"):
            cell_defect(dual, cell, surfaces.constants().r_alpha + 0.1)


class TestInvariants:
    """Test the structural checks of a tessellation."""

    @pytest.fixture(scope="class")
    def hexagon(self) -> tuple[VoronoiComplex, DelaunayComplex]:
        """Voronoi and Delaunay complexes of the hexagon configuration."""
        complex_ = voronoi(hexagon_sites(), 3.0, HPoint.origin())
        return complex_, delaunay(complex_)

    def test_boundary_diagonal(self) -> None:
        """Test cosh B0(R) = 2 cosh 2R - 1."""
        assert math.cosh(boundary_diagonal(0.5)) == pytest.approx(2.0 * math.cosh(1.0) - 1.0)

    def test_hexagon_passes(self, hexagon: tuple[VoronoiComplex, DelaunayComplex]) -> None:
        """Test every check on the hexagon."""
        complex_, dual = hexagon
        assert empty_disk_gap(complex_) >= -1e-9
        assert nearest_site_mismatches(complex_, 2000, np.random.default_rng(0)) == 0
        assert non_convex_cells(complex_) == 0
        assert euler_characteristic(dual) == 1
        assert duality_mismatches(dual) == 0
        assert midpoint_crossing_gap(dual) <= 1e-9
        assert short_edge_violations(dual) == 0

    def test_oracle_detects_relabelled_sites(
        self, hexagon: tuple[VoronoiComplex, DelaunayComplex]
    ) -> None:
        """Test cells attributed to the wrong sites are caught."""
        complex_, _ = hexagon
        shuffled = dataclasses.replace(complex_, sites=tuple(reversed(complex_.sites)))
        assert nearest_site_mismatches(shuffled, 700, np.random.default_rng(0)) > 0

    @pytest.mark.parametrize("seed", [11, 12, 13])
    def test_random_sites(self, seed: int) -> None:
        """Test random twenty-site sets against the brute-force nearest-site scan."""
        sites = random_sites(seed)
        clip = max(dist(HPoint.origin(), site) for site in sites) + 1.0
        complex_ = voronoi(sites, clip, HPoint.origin())
        dual = delaunay(complex_)
        assert empty_disk_gap(complex_) >= -1e-8
        assert nearest_site_mismatches(complex_, 10_000, np.random.default_rng(seed)) == 0
        assert non_convex_cells(complex_) == 0
        assert duality_mismatches(dual) == 0
        assert midpoint_crossing_gap(dual) <= 1e-8
        assert short_edge_violations(dual) == 0
