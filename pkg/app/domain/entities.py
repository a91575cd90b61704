"""Domain entities for hyperbolic tessellations, cyclic polygons and surfaces."""

import math
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx
import numpy as np

from app.config import settings

LORENTZ_FORM = np.diag([-1.0, 1.0, 1.0])


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def _triangle_area(sides: tuple[float, float, float]) -> float:
    """π minus the angle sum, angles from the hyperbolic law of cosines."""
    cosh = [math.cosh(side) for side in sides]
    sinh = [math.sinh(side) for side in sides]
    angle_sum = 0.0
    for k in range(3):
        b, c = (k + 1) % 3, (k + 2) % 3
        cosine = (cosh[b] * cosh[c] - cosh[k]) / (sinh[b] * sinh[c])
        angle_sum += math.acos(max(-1.0, min(1.0, cosine)))
    return math.pi - angle_sum


@dataclass(frozen=True)
class HPoint:
    """Point of the hyperbolic plane in the hyperboloid model."""

    coords: tuple[float, float, float]

    def __post_init__(self) -> None:
        """Validate that the point lies on the upper sheet."""
        if len(self.coords) != 3 or not all(map(math.isfinite, self.coords)):
            raise ValueError("Invalid coordinates", self.coords)

        norm = _inner(self.vector, self.vector)
        tolerance = settings.validation_tolerance * max(1.0, self.coords[0] ** 2)
        if abs(norm + 1.0) > tolerance:
            raise ValueError("Point off the hyperboloid", self.coords)

        if self.coords[0] < 1.0 - settings.validation_tolerance:
            raise ValueError("Point on the lower sheet", self.coords)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "HPoint":
        """Project a timelike vector onto the upper sheet."""
        norm = _inner(vector, vector)
        if not norm < 0.0:
            raise ValueError("Vector is not timelike", tuple(vector))
        scaled = np.asarray(vector, dtype=float) / math.sqrt(-norm)
        if scaled[0] < 0.0:
            scaled = -scaled
        return cls((float(scaled[0]), float(scaled[1]), float(scaled[2])))

    @classmethod
    def origin(cls) -> "HPoint":
        return cls((1.0, 0.0, 0.0))

    @classmethod
    def from_polar(cls, radius: float, angle: float) -> "HPoint":
        """Point at distance `radius` from the origin in direction `angle`."""
        return cls(
            (
                math.cosh(radius),
                math.sinh(radius) * math.cos(angle),
                math.sinh(radius) * math.sin(angle),
            )
        )


@dataclass(frozen=True, eq=False)
class HIsometry:
    """Orientation-preserving isometry acting on hyperboloid coordinates."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        """Validate the Lorentz condition and orientation."""
        if self.matrix.shape != (3, 3):
            raise ValueError("Invalid matrix shape", self.matrix.shape)

        if self.form_defect() > settings.validation_tolerance:
            raise ValueError("Matrix does not preserve the Minkowski form")

        if np.linalg.det(self.matrix) <= 0.0 or self.matrix[0, 0] <= 0.0:
            raise ValueError("Isometry is not orientation-preserving")

    def form_defect(self) -> float:
        """Largest entry of MᵀJM − J relative to the squared matrix scale."""
        m = self.matrix
        residual = np.abs(m.T @ LORENTZ_FORM @ m - LORENTZ_FORM).max()
        scale = max(1.0, float(np.abs(m).max()) ** 2)
        return float(residual / scale)

    @classmethod
    def identity(cls) -> "HIsometry":
        return cls(np.eye(3))

    def compose(self, other: "HIsometry") -> "HIsometry":
        """Return self ∘ other."""
        return HIsometry(self.matrix @ other.matrix)

    def inverse(self) -> "HIsometry":
        return HIsometry(LORENTZ_FORM @ self.matrix.T @ LORENTZ_FORM)

    def apply(self, point: HPoint) -> HPoint:
        return HPoint.from_vector(self.matrix @ point.vector)


@dataclass(frozen=True)
class GeodesicSegment:
    """Geodesic arc joining two points."""

    start: HPoint
    end: HPoint
    length: float

    def __post_init__(self) -> None:
        """Validate the stored length against the endpoints."""
        if self.length < 0.0:
            raise ValueError("Negative segment length", self.length)

        gap = self.end.vector - self.start.vector
        actual = 2.0 * math.asinh(math.sqrt(max(_inner(gap, gap), 0.0)) / 2.0)
        if abs(actual - self.length) > settings.construction_tolerance * max(
            1.0, self.length
        ):
            raise ValueError("Segment length does not match endpoints")

    @classmethod
    def between(cls, start: HPoint, end: HPoint) -> "GeodesicSegment":
        gap = end.vector - start.vector
        length = 2.0 * math.asinh(math.sqrt(max(_inner(gap, gap), 0.0)) / 2.0)
        return cls(start=start, end=end, length=length)


class PolygonClass(str, Enum):
    """Classification of a side-length tuple."""

    NOT_CYCLIC = "not_cyclic"
    NON_CENTERED = "non_centered"
    BOUNDARY_CENTERED = "boundary_centered"
    CENTERED = "centered"


@dataclass(frozen=True)
class CyclicTuple:
    """Side lengths of a cyclic polygon with its class and circumradius."""

    sides: tuple[float, ...]
    polygon_class: PolygonClass
    radius: float  # math.inf for tuples on or past the horocyclic boundary

    def __post_init__(self) -> None:
        """Validate the side lengths."""
        if len(self.sides) < 3:
            raise ValueError("A cyclic polygon needs at least three sides")

        if not all(side > 0.0 for side in self.sides):
            raise ValueError("Side lengths must be positive", self.sides)

        if not isinstance(self.polygon_class, PolygonClass):
            raise ValueError("Invalid polygon class", self.polygon_class)

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def longest_index(self) -> int:
        return max(range(self.n), key=lambda i: self.sides[i])

    @property
    def longest(self) -> float:
        return max(self.sides)

    @property
    def is_cyclic(self) -> bool:
        return self.polygon_class is not PolygonClass.NOT_CYCLIC


class EdgeCenteredness(str, Enum):
    """Position of a Voronoi edge relative to its geometric dual."""

    CENTERED = "centered"
    NON_CENTERED = "non_centered"
    ENDPOINT = "endpoint"  # meets the dual at one of its own endpoints


@dataclass(frozen=True)
class VoronoiVertex:
    """Voronoi vertex with its radius and cyclically ordered sites."""

    index: int
    position: HPoint
    radius: float
    sites: tuple[int, ...]
    exact: bool


@dataclass(frozen=True)
class VoronoiEdge:
    """Voronoi edge between two sites; a vertex index of -1 marks the clip boundary."""

    index: int
    sites: tuple[int, int]
    vertices: tuple[int, int]

    @property
    def is_bounded(self) -> bool:
        return min(self.vertices) >= 0


@dataclass(frozen=True)
class VoronoiCell:
    """Cell of one site: its vertex cycle and the neighbour across each edge."""

    site: int
    vertex_cycle: tuple[int, ...]
    neighbours: tuple[int, ...]
    peripheral: bool


@dataclass(frozen=True)
class VoronoiComplex:
    """Voronoi tessellation of a clipped site set."""

    sites: tuple[HPoint, ...]
    basepoint: HPoint
    clip_radius: float
    cells: tuple[VoronoiCell, ...]
    vertices: tuple[VoronoiVertex, ...]
    edges: tuple[VoronoiEdge, ...]

    def is_exact_edge(self, edge: VoronoiEdge) -> bool:
        return edge.is_bounded and all(
            self.vertices[v].exact for v in edge.vertices
        )

    @property
    def interior_vertices(self) -> list[VoronoiVertex]:
        return [vertex for vertex in self.vertices if vertex.exact]

    @property
    def interior_edges(self) -> list[VoronoiEdge]:
        return [edge for edge in self.edges if self.is_exact_edge(edge)]


@dataclass(frozen=True)
class DelaunayEdge:
    """Geometric dual of an interior Voronoi edge."""

    index: int
    sites: tuple[int, int]
    voronoi_edge: int
    length: float
    centeredness: EdgeCenteredness

    @property
    def centered(self) -> bool:
        return self.centeredness is EdgeCenteredness.CENTERED


@dataclass(frozen=True)
class DelaunayFace:
    """Vertex polygon P_v of an interior Voronoi vertex."""

    voronoi_vertex: int
    sites: tuple[int, ...]
    side_lengths: tuple[float, ...]
    polygon: CyclicTuple


@dataclass(frozen=True)
class DelaunayComplex:
    """Delaunay tessellation dual to the interior of a Voronoi complex."""

    voronoi: VoronoiComplex
    edges: tuple[DelaunayEdge, ...]
    faces: tuple[DelaunayFace, ...]

    def edges_at(self, site: int) -> list[DelaunayEdge]:
        return [edge for edge in self.edges if site in edge.sites]

    def faces_at(self, site: int) -> list[DelaunayFace]:
        return [face for face in self.faces if site in face.sites]


@dataclass(frozen=True)
class NonCenteredTree:
    """Component of the non-centered Voronoi subgraph with its root and frontier."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # oriented towards larger radius
    root: int
    frontier: tuple[int, ...]  # Voronoi edge indices


@dataclass(frozen=True)
class DualCell:
    """Two-cell of the centered dual decomposition."""

    vertices: tuple[int, ...]
    boundary_edges: tuple[int, ...]  # Delaunay edge indices
    tree: NonCenteredTree | None = None


@dataclass(frozen=True)
class CenteredDual:
    """Centered dual decomposition and its non-centered forest."""

    delaunay: DelaunayComplex
    cells: tuple[DualCell, ...]
    forest: tuple[NonCenteredTree, ...]


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree with frontier edges attached to its vertices."""

    vertices: tuple[str, ...]
    root: str
    edges: tuple[tuple[str, str], ...]
    frontier: tuple[tuple[str, str], ...]  # (frontier edge id, attached vertex)

    def __post_init__(self) -> None:
        """Validate connectivity, valences and the frontier count."""
        if self.root not in self.vertices:
            raise ValueError("Root is not a vertex", self.root)

        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        if graph.number_of_nodes() != len(self.vertices) or not nx.is_tree(graph):
            raise ValueError("Tree edges must form a connected acyclic graph")

        frontier_ids = [edge_id for edge_id, _ in self.frontier]
        if len(set(frontier_ids)) != len(frontier_ids):
            raise ValueError("Frontier edge ids must be unique")

        for _, vertex in self.frontier:
            if vertex not in self.vertices:
                raise ValueError("Frontier edge attached to unknown vertex", vertex)

        for vertex in self.vertices:
            if self.valence(vertex) < 3:
                raise ValueError("Vertex valence below three", vertex)

        if len(self.frontier) < len(self.edges) + 3:
            raise ValueError("Frontier must have at least |E| + 3 edges")

    def valence(self, vertex: str) -> int:
        tree_degree = sum(vertex in edge for edge in self.edges)
        return tree_degree + len(self.frontier_at(vertex))

    def frontier_at(self, vertex: str) -> list[str]:
        return [edge_id for edge_id, attached in self.frontier if attached == vertex]


@dataclass(frozen=True)
class FrontierLengths:
    """Lengths (or lower bounds) attached to frontier edges."""

    values: dict[str, float]

    def __post_init__(self) -> None:
        """Validate that every length is positive."""
        if not all(value > 0.0 for value in self.values.values()):
            raise ValueError("Frontier lengths must be positive", self.values)

    @classmethod
    def uniform(cls, tree: RootedTree, value: float) -> "FrontierLengths":
        return cls({edge_id: value for edge_id, _ in tree.frontier})


@dataclass(frozen=True)
class AdmissibleInterval:
    """Admissible tree-edge lengths of a one-edge tree."""

    lower: float
    upper: float
    closed_left: bool

    @property
    def is_empty(self) -> bool:
        return not self.lower < self.upper

    def contains(self, value: float) -> bool:
        if self.is_empty:
            return False
        above = value >= self.lower if self.closed_left else value > self.lower
        return above and value < self.upper


@dataclass
class BoundReport:
    """Certified defect lower bounds for one rooted tree."""

    basic: float
    best: float
    case1: float | None = None
    case2a: float | None = None
    case2b: float | None = None
    case3: float | None = None
    root_bound: float = 0.0
    b_values: dict[str, float] = field(default_factory=dict)
    h_values: dict[str, float] = field(default_factory=dict)
    vertex_terms: dict[str, float] = field(default_factory=dict)
    possibly_empty: bool = False

    @property
    def applicable_cases(self) -> list[float]:
        cases = [self.case1, self.case2a, self.case2b, self.case3]
        return [value for value in cases if value is not None]


class SurfaceModel(str, Enum):
    """Genus-two example surfaces."""

    F_ALPHA = "f_alpha"
    F_BETA = "f_beta"
    F_T = "f_t"


@dataclass(frozen=True)
class EdgePairing:
    """Fixed-point-free involution on the labelled sides of the triangles."""

    involution: tuple[int, ...]
    vertex_count: int = field(init=False)
    one_vertex: bool = field(init=False)

    def __post_init__(self) -> None:
        """Validate the involution and compute the corner orbit count."""
        size = len(self.involution)
        if size == 0 or size % 3:
            raise ValueError("Side labels must come in triples", size)

        for i, partner in enumerate(self.involution):
            if partner == i or not 0 <= partner < size:
                raise ValueError("Pairing has a fixed point or bad label", i)
            if self.involution[partner] != i:
                raise ValueError("Pairing is not an involution", i)

        vertex_count = self._corner_classes()
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "one_vertex", vertex_count == 1)

    @staticmethod
    def previous(label: int) -> int:
        """Corner label before a side label within its triangle."""
        base = 3 * (label // 3)
        return base + (label - base - 1) % 3

    def _corner_classes(self) -> int:
        corners = nx.Graph()
        corners.add_nodes_from(range(len(self.involution)))
        for i, partner in enumerate(self.involution):
            corners.add_edge(self.previous(i), partner)
            corners.add_edge(i, self.previous(partner))
        return int(nx.number_connected_components(corners))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.involution) if i < j]

    @property
    def total_area(self) -> float:
        """Gauss-Bonnet area π(F − 2V) of the glued surface."""
        return math.pi * (len(self.involution) // 3 - 2 * self.vertex_count)


@dataclass(frozen=True)
class PIotaPoint:
    """Eighteen side lengths compatible with an edge pairing."""

    lengths: tuple[float, ...]
    pairing: EdgePairing

    def __post_init__(self) -> None:
        """Validate paired lengths and the cyclic triangle inequalities."""
        if len(self.lengths) != len(self.pairing.involution):
            raise ValueError("Length count does not match the pairing")

        if not all(length > 0.0 for length in self.lengths):
            raise ValueError("Lengths must be positive")

        for i, partner in enumerate(self.pairing.involution):
            if abs(self.lengths[i] - self.lengths[partner]) > 1e-9 * max(
                1.0, self.lengths[i]
            ):
                raise ValueError("Paired lengths differ", (i, partner))

        for triple in self.triples():
            halves = sorted(math.sinh(side / 2.0) for side in triple)
            if halves[2] >= halves[0] + halves[1]:
                raise ValueError("Triangle is not cyclic", triple)

        area = sum(_triangle_area(triple) for triple in self.triples())
        if abs(area - self.pairing.total_area) > settings.validation_tolerance:
            raise ValueError("Triangle areas do not sum to the surface area", area)

    def triples(self) -> list[tuple[float, float, float]]:
        return [
            (self.lengths[j], self.lengths[j + 1], self.lengths[j + 2])
            for j in range(0, len(self.lengths), 3)
        ]


@dataclass(frozen=True)
class OctagonSurface:
    """Edge-paired octagon built from six triangles, with its holonomy."""

    model: SurfaceModel
    t: float
    triangles: tuple[tuple[HPoint, HPoint, HPoint], ...]
    octagon: tuple[HPoint, ...]  # boundary corners P_0..P_7, counterclockwise
    center: HPoint
    pairing: EdgePairing
    side_pairs: tuple[tuple[int, int], ...]
    generators: tuple[HIsometry, ...]
    side_labels: tuple[int, ...]  # triangle side label of each octagon side
    vertex_angle_sum: float
    area: float

    def __post_init__(self) -> None:
        """Validate the octagon combinatorics."""
        if len(self.octagon) != 8 or len(self.side_labels) != 8:
            raise ValueError("An octagon has eight sides")

        if len(self.generators) != len(self.side_pairs):
            raise ValueError("One generator per side pair is required")

        if not self.pairing.one_vertex:
            raise ValueError("Pairing does not identify all corners")


@dataclass(frozen=True)
class SurfaceConstants:
    """Named constants of the extremal surfaces and comparison values."""

    d_alpha: float
    r_alpha: float
    d_beta: float
    r_beta: float
    b_beta: float
    d_1: float
    r_1: float
    r_2: float
    d_2: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class InjCovRecord:
    """Outcome of the covering-radius sweep at one injectivity radius."""

    r: float
    accepted: int
    max_ratio: float
    extremal_ratio: float
    max_sinh_cover: float
    extremal_sinh_cover: float
