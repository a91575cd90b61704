"""Tests for SVG rendering."""

import math
from pathlib import Path

import pytest

from app.domain.entities import HPoint, SurfaceModel
from app.domain.exceptions import RepositoryError
from app.domain.surfaces import build_surface
from app.domain.tessellation import delaunay, voronoi
from app.infrastructure.svg_renderer import DiskRenderer, render_complex, render_surface, save_svg


@pytest.fixture
def ring() -> list[HPoint]:
    """The origin ringed by six sites."""
    return [HPoint.origin(), *(HPoint.from_polar(1.0, k * math.pi / 3.0) for k in range(6))]


class TestDiskRenderer:
    """Test the disk projection."""

    def test_project_flips_y(self) -> None:
        """Test SVG coordinates grow downwards."""
        renderer = DiskRenderer(size=100)
        x, y = renderer.project(HPoint.from_polar(1.0, math.pi / 2.0))
        assert x == pytest.approx(0.0, abs=1e-12)
        assert y < 0.0


class TestRender:
    """Test rendering to files."""

    def test_render_complex(self, ring: list[HPoint], tmp_path: Path) -> None:
        """Test a complex with its Delaunay edges."""
        complex_ = voronoi(ring, 2.0, HPoint.origin())
        path = tmp_path / "ring.svg"
        save_svg(render_complex(complex_, delaunay(complex_)), path)
        text = path.read_text()
        assert text.lstrip().startswith("<?xml") or "<svg" in text
        assert 'id="delaunay"' in text

    def test_render_surface(self, tmp_path: Path) -> None:
        """Test the octagon labels appear."""
        path = tmp_path / "alpha.svg"
        save_svg(render_surface(build_surface(SurfaceModel.F_ALPHA)), path)
        assert "P7" in path.read_text()

    def test_save_to_missing_directory(self, ring: list[HPoint], tmp_path: Path) -> None:
        """Test an unwritable target."""
        drawing = render_complex(voronoi(ring, 2.0, HPoint.origin()))
        with pytest.raises(RepositoryError, match="Cannot write"):
            save_svg(drawing, tmp_path / "missing" / "ring.svg")
