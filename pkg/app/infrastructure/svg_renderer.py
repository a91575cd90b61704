"""SVG rendering of complexes and surfaces in the Poincare disk."""

import logging
from collections.abc import Sequence
from pathlib import Path

import drawsvg as draw

from app.domain.entities import DelaunayComplex, HPoint, OctagonSurface, VoronoiComplex
from app.domain.exceptions import RepositoryError
from app.infrastructure.coordinate_utils import geodesic_arc, to_poincare

logger = logging.getLogger(__name__)


class Theme:
    """Colors and stroke widths of a rendering."""

    def __init__(
        self,
        background: str = "#ffffff",
        boundary: str = "#1e293b",
        site: str = "#0f172a",
        voronoi: str = "#3b82f6",
        delaunay: str = "#64748b",
        non_centered: str = "#dc2626",
        octagon: str = "#16a34a",
        stroke_width: float = 1.5,
    ):
        self.background = background
        self.boundary = boundary
        self.site = site
        self.voronoi = voronoi
        self.delaunay = delaunay
        self.non_centered = non_centered
        self.octagon = octagon
        self.stroke_width = stroke_width


DEFAULT_THEME = Theme()


class DiskRenderer:
    """Draws points and geodesic segments in the Poincare disk."""

    def __init__(self, size: int = 800, theme: Theme = DEFAULT_THEME) -> None:
        self.size = size
        self.scale = 0.48 * size
        self.theme = theme

    def project(self, point: HPoint) -> tuple[float, float]:
        x, y = to_poincare(point)
        return self.scale * x, -self.scale * y

    def new_drawing(self) -> draw.Drawing:
        d = draw.Drawing(self.size, self.size, origin="center")
        half = self.size / 2
        d.append(draw.Rectangle(-half, -half, self.size, self.size, fill=self.theme.background))
        d.append(
            draw.Circle(
                0, 0, self.scale, fill="none", stroke=self.theme.boundary, stroke_width=1
            )
        )
        return d

    def segment(self, p: HPoint, q: HPoint, color: str, dashed: bool = False) -> draw.Path:
        """Geodesic segment as a circular arc, or a line through the origin."""
        extra = {"stroke_dasharray": "5,5"} if dashed else {}
        path = draw.Path(
            stroke=color, stroke_width=self.theme.stroke_width, fill="none", **extra
        )
        sx, sy = self.project(p)
        tx, ty = self.project(q)
        path.M(sx, sy)
        arc = geodesic_arc(to_poincare(p), to_poincare(q))
        if arc is None:
            path.L(tx, ty)
            return path

        (cx, cy), radius = arc
        cx, cy = self.scale * cx, -self.scale * cy
        cross = (sx - cx) * (ty - cy) - (sy - cy) * (tx - cx)
        rr = self.scale * radius
        path.A(rr, rr, 0, 0, 1 if cross > 0 else 0, tx, ty)
        return path

    def dot(self, point: HPoint, color: str, radius: float = 3.0) -> draw.Circle:
        x, y = self.project(point)
        return draw.Circle(x, y, radius, fill=color)


def render_complex(
    complex_: VoronoiComplex,
    delaunay: DelaunayComplex | None = None,
    renderer: DiskRenderer | None = None,
) -> draw.Drawing:
    """Sites, exact Voronoi edges and (optionally) Delaunay edges."""
    renderer = renderer or DiskRenderer()
    theme = renderer.theme
    d = renderer.new_drawing()

    voronoi_group = draw.Group(id="voronoi")
    for edge in complex_.interior_edges:
        u, w = (complex_.vertices[v].position for v in edge.vertices)
        voronoi_group.append(renderer.segment(u, w, theme.voronoi))
    d.append(voronoi_group)

    if delaunay is not None:
        delaunay_group = draw.Group(id="delaunay")
        for edge in delaunay.edges:
            a, b = (complex_.sites[s] for s in edge.sites)
            color = theme.delaunay if edge.centered else theme.non_centered
            delaunay_group.append(renderer.segment(a, b, color, dashed=True))
        d.append(delaunay_group)

    sites_group = draw.Group(id="sites")
    for site in complex_.sites:
        sites_group.append(renderer.dot(site, theme.site))
    d.append(sites_group)
    return d


def render_surface(
    surface: OctagonSurface,
    sites: Sequence[HPoint] = (),
    renderer: DiskRenderer | None = None,
) -> draw.Drawing:
    """Octagon, its triangles and the lifted sites."""
    renderer = renderer or DiskRenderer()
    theme = renderer.theme
    d = renderer.new_drawing()

    for corners in surface.triangles:
        for k in range(3):
            d.append(renderer.segment(corners[k - 1], corners[k], theme.delaunay, dashed=True))
    for k, corner in enumerate(surface.octagon):
        following = surface.octagon[(k + 1) % len(surface.octagon)]
        d.append(renderer.segment(corner, following, theme.octagon))
        d.append(
            draw.Text(f"P{k}", 12, *renderer.project(corner), fill=theme.octagon)
        )
    for site in sites:
        d.append(renderer.dot(site, theme.site, radius=2.0))
    return d


def save_svg(drawing: draw.Drawing, path: Path) -> None:
    """Write a drawing to disk."""
    try:
        drawing.save_svg(str(path))
        logger.info(f"Wrote SVG to {path}")
    except OSError as e:
        logger.error(f"Error writing SVG to {path}: {str(e)}", exc_info=True)
        raise RepositoryError(f"Cannot write {path}: {e}") from e
