"""Voronoi and Delaunay tessellations and the centered dual decomposition."""

import logging
import math
from collections.abc import Sequence

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from app.config import settings
from app.domain.cyclic import classify, defect
from app.domain.entities import (
    CenteredDual,
    DelaunayComplex,
    DelaunayEdge,
    DelaunayFace,
    DualCell,
    EdgeCenteredness,
    HPoint,
    NonCenteredTree,
    VoronoiCell,
    VoronoiComplex,
    VoronoiEdge,
    VoronoiVertex,
)
from app.domain.exceptions import ClassificationError, TessellationError
from app.domain.hypgeo import (
    circumcenter,
    dist,
    interior_angle,
    midpoint,
    minkowski,
    normal_at,
    pairwise_distances,
    tangent_toward,
    translation_to,
)

logger = logging.getLogger(__name__)

BOUNDARY = -1  # neighbour label of the clipping polygon
BOUNDING_MARGIN = 2.0  # bounding polygon sits this far outside the clip ball
MIN_SITE_SEPARATION = 1e-6


def _normalize(vector: np.ndarray) -> np.ndarray:
    return vector / math.sqrt(-minkowski(vector, vector))


def _bounding_polygon(basepoint: HPoint, radius: float) -> list[np.ndarray]:
    to_base = translation_to(basepoint).matrix
    sides = settings.bounding_polygon_sides
    return [
        to_base @ HPoint.from_polar(radius, 2.0 * math.pi * k / sides).vector
        for k in range(sides)
    ]


def _clip(
    points: list[np.ndarray], labels: list[int], normal: np.ndarray, label: int
) -> tuple[list[np.ndarray], list[int]]:
    """Keep the part of a convex polygon where ⟨x, normal⟩ ≥ 0."""
    stacked = np.array(points)
    values = -stacked[:, 0] * normal[0] + stacked[:, 1] * normal[1]
    values = values + stacked[:, 2] * normal[2]
    slack = 1e-12 * np.abs(stacked).max(axis=1) * float(np.abs(normal).max())
    inside = values >= -slack
    if inside.all():
        return points, labels

    clipped: list[np.ndarray] = []
    clipped_labels: list[int] = []
    count = len(points)
    for k in range(count):
        nxt = (k + 1) % count
        a, b = points[k], points[nxt]
        if inside[k]:
            clipped.append(a)
            clipped_labels.append(labels[k])
        if inside[k] != inside[nxt]:
            t = values[k] / (values[k] - values[nxt])
            crossing = _normalize(a + t * (b - a))
            clipped.append(crossing)
            clipped_labels.append(label if inside[k] else labels[k])
    return _drop_degenerate(clipped, clipped_labels)


def _drop_degenerate(
    points: list[np.ndarray], labels: list[int]
) -> tuple[list[np.ndarray], list[int]]:
    kept_points: list[np.ndarray] = []
    kept_labels: list[int] = []
    count = len(points)
    for k in range(count):
        following = points[(k + 1) % count]
        if np.abs(points[k] - following).max() <= 1e-12 * np.abs(points[k]).max():
            continue
        kept_points.append(points[k])
        kept_labels.append(labels[k])
    return kept_points, kept_labels


def _cell_polygon(
    index: int,
    vectors: np.ndarray,
    distances: np.ndarray,
    bounding: list[np.ndarray],
) -> tuple[list[np.ndarray], list[int]]:
    site = vectors[index]
    points = list(bounding)
    labels = [BOUNDARY] * len(points)
    for other in np.argsort(distances[index]):
        other = int(other)
        if other == index:
            continue
        reach = max(math.acosh(max(1.0, -minkowski(p, site))) for p in points)
        if distances[index, other] / 2.0 > reach + 1e-9:
            break
        points, labels = _clip(points, labels, site - vectors[other], other)
        if not points:
            raise TessellationError(f"Cell of site {index} vanished while clipping")
    return points, labels


def _cyclic_site_order(position: HPoint, sites: set[int], points: Sequence[HPoint]) -> tuple[int, ...]:
    ordered = sorted(sites)
    reference = tangent_toward(position, points[ordered[0]])
    quarter = normal_at(position, reference)

    def heading(site: int) -> float:
        direction = tangent_toward(position, points[site])
        return math.atan2(minkowski(direction, quarter), minkowski(direction, reference))

    return tuple(sorted(ordered, key=lambda site: heading(site) % (2.0 * math.pi)))


def voronoi(
    sites: Sequence[HPoint], clip_radius: float, basepoint: HPoint
) -> VoronoiComplex:
    """Voronoi tessellation of the sites, exact within the clip ball.

    A vertex is flagged exact when its empty disk lies inside the ball of
    radius clip_radius about the basepoint; the caller guarantees that every
    site of the underlying (possibly infinite) set in that ball is present.
    """
    points = tuple(sites)
    if len(points) < 4:
        raise TessellationError(f"Need at least four sites, got {len(points)}")

    vectors = np.array([point.vector for point in points])
    distances = pairwise_distances(vectors)
    off_diagonal = np.where(np.eye(len(points), dtype=bool), np.inf, distances)
    if off_diagonal.min() <= MIN_SITE_SEPARATION:
        raise TessellationError("Duplicate sites in input")

    base = basepoint.vector
    site_reach = [math.acosh(max(1.0, -minkowski(v, base))) for v in vectors]
    bounding = _bounding_polygon(basepoint, clip_radius + BOUNDING_MARGIN)
    active = [i for i, reach in enumerate(site_reach) if reach < clip_radius]
    logger.debug(f"Clipping {len(active)} of {len(points)} cells")

    polygons: dict[int, tuple[list[np.ndarray], list[int]]] = {}
    candidates: list[tuple[np.ndarray, set[int]]] = []
    candidate_slots: dict[tuple[int, int], int] = {}
    for index in active:
        cell_points, labels = _cell_polygon(index, vectors, distances, bounding)
        polygons[index] = (cell_points, labels)
        for k, point in enumerate(cell_points):
            before, after = labels[k - 1], labels[k]
            if BOUNDARY in (before, after):
                continue
            center = circumcenter(points[index], points[before], points[after])
            position = center.vector if center is not None else _normalize(point)
            candidate_slots[(index, k)] = len(candidates)
            candidates.append((position, {index, before, after}))

    cluster_of = _merge_candidates([position for position, _ in candidates])
    cluster_count = max(cluster_of, default=-1) + 1
    cluster_sites: list[set[int]] = [set() for _ in range(cluster_count)]
    cluster_position: list[np.ndarray | None] = [None] * cluster_count
    for slot, (position, incident) in enumerate(candidates):
        cluster = cluster_of[slot]
        cluster_sites[cluster] |= incident
        if cluster_position[cluster] is None:
            cluster_position[cluster] = position

    vertices = []
    for cluster in range(cluster_count):
        position = HPoint.from_vector(cluster_position[cluster])  # type: ignore[arg-type]
        incident = cluster_sites[cluster]
        radius = float(np.mean([dist(position, points[site]) for site in incident]))
        exact = dist(position, basepoint) + radius < clip_radius
        vertices.append(
            VoronoiVertex(
                index=cluster,
                position=position,
                radius=radius,
                sites=_cyclic_site_order(position, incident, points),
                exact=exact,
            )
        )

    cells = []
    edges_by_pair: dict[tuple[int, int], VoronoiEdge] = {}
    for index in active:
        cell_points, labels = polygons[index]
        slots = [
            cluster_of[candidate_slots[(index, k)]]
            if (index, k) in candidate_slots
            else BOUNDARY
            for k in range(len(cell_points))
        ]
        cycle: list[int] = []
        neighbours: list[int] = []
        for k in range(len(cell_points)):
            start, end = slots[k], slots[(k + 1) % len(slots)]
            if start == end and start != BOUNDARY:
                continue
            cycle.append(start)
            neighbours.append(labels[k])
            if labels[k] == BOUNDARY:
                continue
            pair = (min(index, labels[k]), max(index, labels[k]))
            edge = VoronoiEdge(index=-1, sites=pair, vertices=(start, end))
            known = edges_by_pair.get(pair)
            if known is None or min(known.vertices) < min(edge.vertices):
                edges_by_pair[pair] = edge
        cells.append(
            VoronoiCell(
                site=index,
                vertex_cycle=tuple(cycle),
                neighbours=tuple(neighbours),
                peripheral=BOUNDARY in labels,
            )
        )

    edges = tuple(
        VoronoiEdge(index=i, sites=edge.sites, vertices=edge.vertices)
        for i, edge in enumerate(sorted(edges_by_pair.values(), key=lambda e: e.sites))
    )
    complex_ = VoronoiComplex(
        sites=points,
        basepoint=basepoint,
        clip_radius=clip_radius,
        cells=tuple(cells),
        vertices=tuple(vertices),
        edges=edges,
    )
    logger.info(
        f"Voronoi complex: {len(vertices)} vertices "
        f"({len(complex_.interior_vertices)} exact), {len(edges)} edges"
    )
    return complex_


def _merge_candidates(positions: list[np.ndarray]) -> list[int]:
    """Cluster candidate vertices closer than the merge tolerance."""
    if not positions:
        return []

    stacked = np.array(positions)
    tree = cKDTree(stacked)
    height = float(np.abs(stacked[:, 0]).max())
    search = settings.vertex_merge_tolerance * 4.0 * height
    cluster_of = [-1] * len(positions)
    clusters = 0
    for slot, position in enumerate(stacked):
        if cluster_of[slot] >= 0:
            continue
        cluster_of[slot] = clusters
        for other in tree.query_ball_point(position, search):
            if cluster_of[other] >= 0:
                continue
            gap = stacked[other] - position
            chord = math.sqrt(max(minkowski(gap, gap), 0.0))
            if 2.0 * math.asinh(chord / 2.0) < settings.vertex_merge_tolerance:
                cluster_of[other] = clusters
        clusters += 1
    return cluster_of


def edge_centeredness(
    complex_: VoronoiComplex, edge: VoronoiEdge
) -> EdgeCenteredness:
    """Where the dual midpoint sits relative to the bounded Voronoi edge."""
    a, b = (complex_.sites[site] for site in edge.sites)
    center = midpoint(a, b)
    along = normal_at(center, tangent_toward(center, b))
    offsets = [
        math.asinh(minkowski(complex_.vertices[v].position.vector, along))
        for v in edge.vertices
    ]
    if min(abs(offset) for offset in offsets) <= settings.endpoint_dead_band:
        return EdgeCenteredness.ENDPOINT
    if offsets[0] * offsets[1] < 0.0:
        return EdgeCenteredness.CENTERED
    return EdgeCenteredness.NON_CENTERED


def delaunay(complex_: VoronoiComplex) -> DelaunayComplex:
    """Delaunay tessellation dual to the exact part of a Voronoi complex."""
    if not complex_.interior_vertices:
        raise TessellationError("Voronoi complex has no exact vertices")

    faces = []
    for vertex in complex_.interior_vertices:
        if len(vertex.sites) < 3:
            raise TessellationError(f"Vertex {vertex.index} has fewer than 3 sites")
        ring = vertex.sites
        lengths = tuple(
            dist(complex_.sites[ring[k]], complex_.sites[ring[(k + 1) % len(ring)]])
            for k in range(len(ring))
        )
        polygon = classify(lengths)
        if not polygon.is_cyclic or abs(polygon.radius - vertex.radius) > (
            settings.validation_tolerance
        ):
            raise TessellationError(
                f"Vertex polygon at {vertex.index} has radius {polygon.radius}, "
                f"expected {vertex.radius}"
            )
        faces.append(
            DelaunayFace(
                voronoi_vertex=vertex.index,
                sites=ring,
                side_lengths=lengths,
                polygon=polygon,
            )
        )

    edges = []
    for voronoi_edge in complex_.interior_edges:
        a, b = voronoi_edge.sites
        edges.append(
            DelaunayEdge(
                index=len(edges),
                sites=(a, b),
                voronoi_edge=voronoi_edge.index,
                length=dist(complex_.sites[a], complex_.sites[b]),
                centeredness=edge_centeredness(complex_, voronoi_edge),
            )
        )

    non_centered = sum(not edge.centered for edge in edges)
    logger.info(
        f"Delaunay complex: {len(faces)} faces, {len(edges)} edges, "
        f"{non_centered} non-centered"
    )
    return DelaunayComplex(voronoi=complex_, edges=tuple(edges), faces=tuple(faces))


def anchor_site(complex_: VoronoiComplex) -> int:
    """Index of the site nearest the basepoint."""
    return min(
        range(len(complex_.sites)),
        key=lambda i: dist(complex_.sites[i], complex_.basepoint),
    )


def centered_dual(complex_: DelaunayComplex) -> CenteredDual:
    """Group vertex polygons into cells along the non-centered forest."""
    voronoi_ = complex_.voronoi
    dual_of = {edge.voronoi_edge: edge for edge in complex_.edges}
    incident: dict[int, list[int]] = {v.index: [] for v in voronoi_.vertices}
    for edge in voronoi_.edges:
        for v in edge.vertices:
            if v != BOUNDARY:
                incident[v].append(edge.index)

    forest_graph = nx.DiGraph()
    for edge in complex_.edges:
        if edge.centered:
            continue
        u, w = voronoi_.edges[edge.voronoi_edge].vertices
        ju, jw = voronoi_.vertices[u].radius, voronoi_.vertices[w].radius
        if ju == jw:
            logger.warning(f"Non-centered edge {edge.index} joins equal radii")
        if ju > jw:
            u, w = w, u
        forest_graph.add_edge(u, w, voronoi_edge=edge.voronoi_edge)

    anchor = anchor_site(voronoi_)
    forest = []
    in_tree: set[int] = set()
    for component in nx.weakly_connected_components(forest_graph):
        members = sorted(component)
        subgraph = forest_graph.subgraph(members)
        tree_edges = {data["voronoi_edge"] for *_, data in subgraph.edges(data=True)}
        frontier = sorted(
            {e for v in members for e in incident[v] if e not in tree_edges}
        )
        complete = all(voronoi_.is_exact_edge(voronoi_.edges[e]) for e in frontier)
        if not complete:
            touches_anchor = any(
                anchor in voronoi_.vertices[v].sites for v in members
            )
            if touches_anchor:
                raise TessellationError(
                    "Non-centered component near the basepoint reaches the clip zone"
                )
            logger.warning(f"Skipping peripheral non-centered component {members}")
            continue

        if not nx.is_forest(subgraph.to_undirected()):
            raise TessellationError(f"Non-centered component {members} has a cycle")
        if max(degree for _, degree in subgraph.out_degree()) > 1:
            raise TessellationError(
                f"A vertex of {members} starts two non-centered edges"
            )

        root = max(members, key=lambda v: voronoi_.vertices[v].radius)
        tree = NonCenteredTree(
            vertices=tuple(members),
            edges=tuple((u, w) for u, w in subgraph.edges()),
            root=root,
            frontier=tuple(frontier),
        )
        forest.append(tree)
        in_tree.update(members)

    cells = []
    for vertex in voronoi_.interior_vertices:
        if vertex.index in in_tree:
            continue
        around = incident[vertex.index]
        if not all(e in dual_of for e in around):
            continue
        cells.append(
            DualCell(
                vertices=(vertex.index,),
                boundary_edges=tuple(sorted(dual_of[e].index for e in around)),
            )
        )
    for tree in forest:
        cells.append(
            DualCell(
                vertices=tree.vertices,
                boundary_edges=tuple(sorted(dual_of[e].index for e in tree.frontier)),
                tree=tree,
            )
        )

    logger.info(f"Centered dual: {len(cells)} cells, {len(forest)} trees")
    return CenteredDual(delaunay=complex_, cells=tuple(cells), forest=tuple(forest))


def _face_lookup(dual: CenteredDual) -> dict[int, DelaunayFace]:
    return {face.voronoi_vertex: face for face in dual.delaunay.faces}


def cell_defect(dual: CenteredDual, cell: DualCell, disk_radius: float) -> float:
    """Radius-R defect of a cell as the sum over its vertex polygons."""
    edges = dual.delaunay.edges
    shortest = min(edges[e].length for e in cell.boundary_edges)
    if disk_radius > shortest / 2.0 + settings.defect_radius_slack:
        raise TessellationError(
            f"Disk radius {disk_radius} exceeds half the shortest edge {shortest}"
        )

    faces = _face_lookup(dual)
    try:
        return sum(defect(faces[v].polygon, disk_radius) for v in cell.vertices)
    except ClassificationError as e:
        logger.error(f"Cell defect failed: {str(e)}", exc_info=True)
        raise


def cell_boundary(dual: CenteredDual, cell: DualCell) -> list[int]:
    """Sites on the boundary of a cell in counterclockwise order."""
    ring = nx.Graph()
    ring.add_edges_from(dual.delaunay.edges[e].sites for e in cell.boundary_edges)
    cycle = [u for u, _ in nx.find_cycle(ring)]
    if len(cycle) != ring.number_of_nodes():
        raise TessellationError("Cell boundary is not a simple cycle")

    sites = dual.delaunay.voronoi.sites
    root = dual.delaunay.voronoi.vertices[
        cell.tree.root if cell.tree is not None else cell.vertices[0]
    ].position
    reference = tangent_toward(root, sites[cycle[0]])
    quarter = normal_at(root, reference)
    headings = [
        math.atan2(
            minkowski(tangent_toward(root, sites[s]), quarter),
            minkowski(tangent_toward(root, sites[s]), reference),
        )
        % (2.0 * math.pi)
        for s in cycle
    ]
    if headings[1] < headings[-1]:
        return cycle
    return [cycle[0], *reversed(cycle[1:])]


def cell_area_oracle(dual: CenteredDual, cell: DualCell, disk_radius: float) -> float:
    """Area of a convex cell minus its vertex sectors, measured from coordinates."""
    sites = dual.delaunay.voronoi.sites
    ring = cell_boundary(dual, cell)
    angles = [
        interior_angle(
            sites[ring[k]], sites[ring[k - 1]], sites[ring[(k + 1) % len(ring)]]
        )
        for k in range(len(ring))
    ]
    area = (len(ring) - 2) * math.pi - sum(angles)
    return area - sum(angles) * (math.cosh(disk_radius) - 1.0)


def nearest_site(sites: Sequence[HPoint], point: HPoint) -> int:
    """Brute-force nearest site."""
    return min(range(len(sites)), key=lambda i: dist(sites[i], point))


def boundary_diagonal(disk_radius: float) -> float:
    """B₀(R) = arccosh(2 cosh 2R − 1), the longest side of (B₀, 2R, 2R) on the boundary class."""
    return math.acosh(2.0 * math.cosh(2.0 * disk_radius) - 1.0)


def empty_disk_gap(complex_: VoronoiComplex) -> float:
    """Smallest d(v, s) − J_v over exact vertices and all sites; negative when a disk is not empty."""
    gaps = [
        min(dist(vertex.position, site) for site in complex_.sites) - vertex.radius
        for vertex in complex_.interior_vertices
    ]
    return min(gaps, default=0.0)


def _bounded_cells(complex_: VoronoiComplex) -> list[VoronoiCell]:
    return [
        cell
        for cell in complex_.cells
        if not cell.peripheral and cell.vertex_cycle and min(cell.vertex_cycle) >= 0
    ]


def nearest_site_mismatches(
    complex_: VoronoiComplex, samples: int, rng: np.random.Generator
) -> int:
    """Sampled cell points whose brute-force nearest site is not the cell's own site.

    Points are convex combinations of a bounded cell's site and vertices,
    spread evenly over the bounded cells.
    """
    cells = _bounded_cells(complex_)
    if not cells or samples <= 0:
        return 0

    sites = np.array([site.vector for site in complex_.sites])
    owners: list[np.ndarray] = []
    batches: list[np.ndarray] = []
    for k, cell in enumerate(cells):
        count = samples // len(cells) + (k < samples % len(cells))
        if not count:
            continue
        corners = np.array(
            [sites[cell.site], *(complex_.vertices[v].position.vector for v in cell.vertex_cycle)]
        )
        weights = rng.dirichlet(np.ones(len(corners)), size=count)
        batches.append(weights @ corners)
        owners.append(np.full(count, cell.site))

    points = np.vstack(batches)
    norms = np.sqrt(points[:, 0] ** 2 - points[:, 1] ** 2 - points[:, 2] ** 2)
    points = points / norms[:, None]
    cosh_distances = np.outer(points[:, 0], sites[:, 0]) - points[:, 1:] @ sites[:, 1:].T
    distances = np.arccosh(np.maximum(cosh_distances, 1.0))
    own = distances[np.arange(len(points)), np.concatenate(owners)]
    return int(np.count_nonzero(own - distances.min(axis=1) > settings.equidistance_tolerance))


def non_convex_cells(complex_: VoronoiComplex) -> int:
    """Bounded cells whose vertex cycle turns both ways."""
    count = 0
    for cell in _bounded_cells(complex_):
        corners = [complex_.vertices[v].position.vector for v in cell.vertex_cycle]
        turns = [
            float(np.linalg.det(np.array([corners[k - 2], corners[k - 1], corners[k]])))
            for k in range(len(corners))
        ]
        scale = 1e-12 * max(float(np.abs(c).max()) for c in corners) ** 3
        signs = {math.copysign(1.0, turn) for turn in turns if abs(turn) > scale}
        if len(corners) < 3 or len(signs) != 1:
            count += 1
    return count


def euler_characteristic(complex_: DelaunayComplex) -> int:
    """V − E + F of the Delaunay faces; one when they tile a disk."""
    vertices = {site for face in complex_.faces for site in face.sites}
    sides = {
        frozenset((face.sites[k - 1], face.sites[k]))
        for face in complex_.faces
        for k in range(len(face.sites))
    }
    return len(vertices) - len(sides) + len(complex_.faces)


def duality_mismatches(complex_: DelaunayComplex) -> int:
    """Delaunay edges that are not a side of exactly two faces."""
    side_count: dict[frozenset[int], int] = {}
    for face in complex_.faces:
        for k in range(len(face.sites)):
            side = frozenset((face.sites[k - 1], face.sites[k]))
            side_count[side] = side_count.get(side, 0) + 1
    return sum(side_count.get(frozenset(edge.sites), 0) != 2 for edge in complex_.edges)


def midpoint_crossing_gap(complex_: DelaunayComplex) -> float:
    """Largest detour d(u, m) + d(m, w) − d(u, w) from a centered edge's Voronoi edge through its midpoint m."""
    voronoi_ = complex_.voronoi
    gap = 0.0
    for edge in complex_.edges:
        if not edge.centered:
            continue
        u, w = (
            voronoi_.vertices[v].position
            for v in voronoi_.edges[edge.voronoi_edge].vertices
        )
        center = midpoint(*(voronoi_.sites[site] for site in edge.sites))
        gap = max(gap, dist(u, center) + dist(center, w) - dist(u, w))
    return gap


def short_edge_violations(complex_: DelaunayComplex) -> int:
    """Delaunay edges shorter than B₀(R) that are not centered, R half the closest site pair."""
    sites = complex_.voronoi.sites
    distances = pairwise_distances(np.array([site.vector for site in sites]))
    np.fill_diagonal(distances, np.inf)
    limit = boundary_diagonal(float(distances.min()) / 2.0)
    return sum(edge.length < limit and not edge.centered for edge in complex_.edges)


def face_census(complex_: DelaunayComplex, site: int) -> dict[int, int]:
    """Faces per fundamental domain by side count, for a one-vertex quotient."""
    census: dict[int, int] = {}
    for face in complex_.faces_at(site):
        census[len(face.sites)] = census.get(len(face.sites), 0) + 1
    return {n: count // n for n, count in sorted(census.items())}


def edge_census(complex_: DelaunayComplex, site: int) -> tuple[int, int]:
    """(edges, non-centered edges) per fundamental domain for a one-vertex quotient."""
    at_site = complex_.edges_at(site)
    non_centered = sum(not edge.centered for edge in at_site)
    return len(at_site) // 2, non_centered // 2
