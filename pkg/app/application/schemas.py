"""Application schemas for input files and run reports."""

from typing import Literal

from pydantic import BaseModel, Field, computed_field, field_validator, model_validator


class PointSetFile(BaseModel):
    """Point set input file."""

    model: Literal["hyperboloid", "poincare"] = Field(
        "hyperboloid", description="Coordinate model of the points"
    )
    points: list[list[float]] = Field(..., description="Point coordinates")

    @model_validator(mode="after")
    def check_dimensions(self) -> "PointSetFile":
        width = 3 if self.model == "hyperboloid" else 2
        for index, point in enumerate(self.points):
            if len(point) != width:
                raise ValueError(
                    f"Point {index} has {len(point)} coordinates, expected {width}"
                )
        return self


class TreeVertexItem(BaseModel):
    """Vertex of a rooted tree input."""

    id: str = Field(..., description="Vertex identifier")
    root: bool = Field(False, description="Whether this vertex is the root")


class TreeFrontierItem(BaseModel):
    """Frontier edge of a rooted tree input."""

    vertex: str = Field(..., description="Vertex the frontier edge is attached to")
    bound: float = Field(..., gt=0.0, description="Lower bound on the dual edge length")
    id: str | None = Field(None, description="Frontier edge identifier")


class TreeFile(BaseModel):
    """Rooted tree input file."""

    vertices: list[TreeVertexItem] = Field(..., min_length=1)
    edges: list[tuple[str, str]] = Field(default_factory=list)
    frontier: list[TreeFrontierItem] = Field(..., min_length=3)

    @field_validator("vertices")
    @classmethod
    def single_root(cls, vertices: list[TreeVertexItem]) -> list[TreeVertexItem]:
        roots = [vertex.id for vertex in vertices if vertex.root]
        if len(roots) != 1:
            raise ValueError(f"Exactly one root vertex is required, got {len(roots)}")
        return vertices


class Assertion(BaseModel):
    """A checked numerical claim."""

    name: str = Field(..., description="What is being checked")
    value: float = Field(..., description="Computed value")
    expected: float | None = Field(None, description="Reference value, if any")
    tolerance: float | None = Field(None, description="Acceptance tolerance")
    passed: bool = Field(..., description="Whether the check passed")


class ReportTable(BaseModel):
    """Column-labelled table of results."""

    name: str
    columns: list[str]
    rows: list[dict[str, float | str | None]] = Field(default_factory=list)


class RunReport(BaseModel):
    """Outcome of one CLI command."""

    command: str = Field(..., description="Command echo")
    inputs_digest: str = Field(..., description="sha256 of the canonical JSON inputs")
    tables: list[ReportTable] = Field(default_factory=list)
    assertions: list[Assertion] = Field(default_factory=list)
    wall_time: float = Field(0.0, description="Seconds spent in the command")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(assertion.passed for assertion in self.assertions)


class VoronoiVertexItem(BaseModel):
    """Voronoi vertex in complex output."""

    index: int
    position: list[float]
    radius: float
    sites: list[int]
    exact: bool


class DelaunayEdgeItem(BaseModel):
    """Delaunay edge in complex output."""

    sites: tuple[int, int]
    length: float
    centeredness: str


class DelaunayFaceItem(BaseModel):
    """Delaunay face in complex output."""

    voronoi_vertex: int
    sites: list[int]
    side_lengths: list[float]
    polygon_class: str
    radius: float


class ComplexOutput(BaseModel):
    """Voronoi and Delaunay complexes of a point set."""

    sites: list[list[float]]
    clip_radius: float
    vertices: list[VoronoiVertexItem]
    edges: list[DelaunayEdgeItem]
    faces: list[DelaunayFaceItem]


class SurfaceDescriptor(BaseModel):
    """Edge-paired octagon and its holonomy."""

    model: str
    t: float
    pairing: list[int] = Field(..., description="Involution on the 18 triangle sides")
    side_pairs: list[tuple[int, int]]
    generators: list[list[list[float]]] = Field(..., description="Holonomy matrices")
    lengths: list[float] = Field(..., description="Triangle side lengths by label")
    octagon: list[list[float]] = Field(..., description="Octagon corners")


class BoundRow(BaseModel):
    """Defect bounds of one tree, with N/A for inapplicable cases."""

    tree: str
    basic: float = Field(..., alias="Basic")
    case1: float | str = Field("N/A", alias="Case 1")
    case2a: float | str = Field("N/A", alias="Case 2A")
    case2b: float | str = Field("N/A", alias="Case 2B")
    case3: float | str = Field("N/A", alias="Case 3")
    best: float = Field(..., alias="Best")
    possibly_empty: bool = False

    model_config = {"populate_by_name": True}
