"""Admissible spaces of rooted trees and certified lower bounds on their defect."""

import logging
import math
from collections.abc import Sequence

import networkx as nx

from app.config import settings
from app.domain.cyclic import (
    b0,
    bisect_root,
    classify,
    defect,
    defect_of,
    h0,
    half_angle,
    horocyclic_defect,
    triangle_partner,
)
from app.domain.entities import (
    AdmissibleInterval,
    BoundReport,
    CenteredDual,
    FrontierLengths,
    NonCenteredTree,
    PolygonClass,
    RootedTree,
)
from app.domain.exceptions import AdmissibleError, BracketError, ClassificationError

logger = logging.getLogger(__name__)

CASE_EDGE_LIMIT = 2  # minimum locations are only known for trees this small
INTERVAL_EPSILON = 1e-9  # offset from the open right end of the admissible interval


def _graph(tree: RootedTree) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(tree.vertices)
    graph.add_edges_from(tree.edges)
    return graph


def parents(tree: RootedTree) -> dict[str, str]:
    """Parent of every non-root vertex (the far end of e_v)."""
    return dict(nx.bfs_predecessors(_graph(tree), tree.root))


def children(tree: RootedTree) -> dict[str, list[str]]:
    result: dict[str, list[str]] = {v: [] for v in tree.vertices}
    for child, parent in parents(tree).items():
        result[parent].append(child)
    return result


def _deepest_first(tree: RootedTree) -> list[str]:
    depth = nx.single_source_shortest_path_length(_graph(tree), tree.root)
    return sorted(
        (v for v in tree.vertices if v != tree.root),
        key=lambda v: (-depth[v], v),
    )


def _frontier_values(tree: RootedTree, lengths: FrontierLengths, vertex: str) -> list[float]:
    try:
        return [lengths.values[edge_id] for edge_id in tree.frontier_at(vertex)]
    except KeyError as e:
        raise AdmissibleError(f"No length for frontier edge {e}") from e


def _values_at(
    tree: RootedTree,
    lengths: FrontierLengths,
    vertex: str,
    edge_values: dict[str, float],
) -> list[float]:
    """Frontier values at a vertex followed by the values of its child edges."""
    below = [edge_values[child] for child in children(tree)[vertex]]
    return sorted([*_frontier_values(tree, lengths, vertex), *below], reverse=True)


def frontier_b(tree: RootedTree, lengths: FrontierLengths) -> dict[str, float]:
    """b_{e_v} for every non-root v, making each P_v boundary-centered."""
    values: dict[str, float] = {}
    for vertex in _deepest_first(tree):
        values[vertex] = b0(_values_at(tree, lengths, vertex, values))
    return values


def frontier_h(tree: RootedTree, lengths: FrontierLengths) -> dict[str, float]:
    """h_{e_v} for every non-root v, making each P_v horocyclic."""
    values: dict[str, float] = {}
    for vertex in _deepest_first(tree):
        values[vertex] = h0(_values_at(tree, lengths, vertex, values))
    return values


def vertex_polygon(
    tree: RootedTree,
    edge_lengths: dict[str, float],
    lengths: FrontierLengths,
    vertex: str,
) -> tuple[float, ...]:
    """P_v(d), sorted descending."""
    sides = _values_at(tree, lengths, vertex, edge_lengths)
    if vertex != tree.root:
        sides.append(edge_lengths[vertex])
    return tuple(sorted(sides, reverse=True))


def ad_membership(
    tree: RootedTree, edge_lengths: dict[str, float], lengths: FrontierLengths
) -> bool:
    """Whether the tree-edge lengths lie in the admissible set of the frontier lengths."""
    radii: dict[str, float] = {}
    for vertex in tree.vertices:
        sides = vertex_polygon(tree, edge_lengths, lengths, vertex)
        polygon = classify(sides)
        if vertex == tree.root:
            if polygon.polygon_class is not PolygonClass.CENTERED:
                return False
        else:
            if polygon.polygon_class not in (
                PolygonClass.NON_CENTERED,
                PolygonClass.BOUNDARY_CENTERED,
            ):
                return False
            if edge_lengths[vertex] < polygon.longest:
                return False
        radii[vertex] = polygon.radius

    return all(
        radii[parent] > radii[child] for child, parent in parents(tree).items()
    )


def _check_disk(lengths: FrontierLengths, disk_radius: float) -> None:
    limit = min(lengths.values.values()) / 2.0 + settings.defect_radius_slack
    if not 0.0 <= disk_radius <= limit:
        raise AdmissibleError(f"Disk radius {disk_radius} exceeds half the shortest frontier length")


def tree_defect(
    tree: RootedTree,
    edge_lengths: dict[str, float],
    lengths: FrontierLengths,
    disk_radius: float,
) -> float:
    """D_R(T, d), the sum of vertex-polygon defects."""
    _check_disk(lengths, disk_radius)
    missing = [v for v in tree.vertices if v != tree.root and v not in edge_lengths]
    if missing:
        raise AdmissibleError(f"No tree-edge length for {missing}")

    total = 0.0
    for vertex in tree.vertices:
        sides = vertex_polygon(tree, edge_lengths, lengths, vertex)
        polygon = classify(sides)
        if not polygon.is_cyclic:
            raise AdmissibleError(f"Vertex polygon at {vertex} is not cyclic: {sides}")
        try:
            total += defect(polygon, disk_radius)
        except ClassificationError as e:
            raise AdmissibleError(f"Defect undefined at {vertex}: {e}") from e
    return total


def _tri_refinement(longest: float, others: Sequence[float], disk_radius: float) -> float:
    """Smaller defect of the two boundary-centered triangles with the given longest side."""
    x, y = others
    return min(
        defect_of((longest, x, triangle_partner(longest, x)), disk_radius),
        defect_of((longest, triangle_partner(longest, y), y), disk_radius),
    )


def root_bound(values: Sequence[float], disk_radius: float) -> float:
    """M_R: lower bound for the root polygon with entries bounded below by `values`."""
    ordered = sorted(values, reverse=True)
    longest, rest = ordered[0], ordered[1:]
    boundary = b0(rest)
    if longest <= boundary:
        return defect_of(ordered, disk_radius)
    if len(rest) == 2:
        return _tri_refinement(longest, rest, disk_radius)
    return defect_of((boundary, *rest), disk_radius)


def _horocyclic_terms(
    tree: RootedTree,
    lengths: FrontierLengths,
    b_values: dict[str, float],
    disk_radius: float,
) -> dict[str, float]:
    return {
        vertex: horocyclic_defect(_values_at(tree, lengths, vertex, b_values), disk_radius)
        for vertex in tree.vertices
        if vertex != tree.root
    }


def basic_bound(tree: RootedTree, lengths: FrontierLengths, disk_radius: float) -> float:
    """M_R at the root plus horocyclic defects elsewhere."""
    return _basic_report(tree, lengths, disk_radius).basic


def _basic_report(
    tree: RootedTree, lengths: FrontierLengths, disk_radius: float
) -> BoundReport:
    _check_disk(lengths, disk_radius)
    b_values = frontier_b(tree, lengths)
    h_values = frontier_h(tree, lengths)
    root_values = _values_at(tree, lengths, tree.root, b_values)
    m_r = root_bound(root_values, disk_radius)
    terms = _horocyclic_terms(tree, lengths, b_values, disk_radius)
    basic = m_r + sum(terms.values())
    return BoundReport(
        basic=basic,
        best=basic,
        root_bound=m_r,
        b_values=b_values,
        h_values=h_values,
        vertex_terms={tree.root: m_r, **terms},
    )


def case_bounds(tree: RootedTree, lengths: FrontierLengths, disk_radius: float) -> BoundReport:
    """Basic bound refined by the minimum-location cases for trees with at most two edges."""
    if len(tree.edges) > CASE_EDGE_LIMIT:
        raise AdmissibleError(
            f"Case bounds need at most {CASE_EDGE_LIMIT} tree edges, got {len(tree.edges)}"
        )

    report = _basic_report(tree, lengths, disk_radius)
    b_values = report.b_values
    horocyclic = {v: t for v, t in report.vertex_terms.items() if v != tree.root}
    below = children(tree)

    report.case1 = report.root_bound + sum(
        defect_of((b_values[v], *_values_at(tree, lengths, v, b_values)), disk_radius)
        for v in horocyclic
    )

    root_frontier = _frontier_values(tree, lengths, tree.root)
    child_values = [b_values[child] for child in below[tree.root]]
    forced = []
    for i in range(len(root_frontier)):
        rest = [*root_frontier[:i], *root_frontier[i + 1 :], *child_values]
        forced.append(defect_of((b0(rest), *rest), disk_radius))
    report.case2a = min(forced) + sum(horocyclic.values())

    if len(tree.edges) == CASE_EDGE_LIMIT:
        report.case2b = _case2b(tree, lengths, disk_radius, b_values, horocyclic)
        report.case3 = _case3(lengths, disk_radius)

    if len(tree.edges) == 1:
        report.possibly_empty = admissible_interval(tree, lengths).is_empty
        if report.possibly_empty:
            logger.warning("Admissible interval is empty at the frontier bounds")

    report.best = max(report.basic, min(report.applicable_cases))
    return report


def _case2b(
    tree: RootedTree,
    lengths: FrontierLengths,
    disk_radius: float,
    b_values: dict[str, float],
    horocyclic: dict[str, float],
) -> float:
    root_values = _values_at(tree, lengths, tree.root, b_values)
    bounds = []
    for child in children(tree)[tree.root]:
        rest = list(root_values)
        rest.remove(b_values[child])
        boundary = b0(rest)
        longest = max(boundary, b_values[child])

        if boundary < longest and len(rest) == 2:
            root_term = _tri_refinement(longest, rest, disk_radius)
        else:
            root_term = defect_of((boundary, *rest), disk_radius)

        child_values = _values_at(tree, lengths, child, b_values)
        if b_values[child] < longest and len(child_values) == 2:
            child_term = _tri_refinement(longest, child_values, disk_radius)
        else:
            child_term = defect_of((b_values[child], *child_values), disk_radius)

        others = sum(term for v, term in horocyclic.items() if v != child)
        bounds.append(root_term + child_term + others)
    return min(bounds)


def _case3(lengths: FrontierLengths, disk_radius: float) -> float:
    ordered = sorted(lengths.values.values(), reverse=True)
    longest, rest = ordered[0], ordered[1:]
    return defect_of((min(longest, b0(rest)), *rest), disk_radius)


def bound_report(tree: RootedTree, lengths: FrontierLengths, disk_radius: float) -> BoundReport:
    """Case bounds where they apply, otherwise the basic bound alone."""
    if len(tree.edges) > CASE_EDGE_LIMIT:
        logger.info(f"Tree has {len(tree.edges)} edges, reporting the basic bound only")
        return _basic_report(tree, lengths, disk_radius)
    return case_bounds(tree, lengths, disk_radius)


def _centering_limit(longest: float, rest: Sequence[float]) -> float:
    """Smallest x keeping (longest, x, rest) cyclic and centered, or 0."""
    if len(rest) >= 2 and longest <= b0(rest):
        return 0.0
    if len(rest) == 1:
        return triangle_partner(longest, rest[0])

    def excess(x: float) -> float:
        return sum(half_angle(side, longest / 2.0) for side in (x, *rest)) - math.pi / 2.0

    return bisect_root(excess, 1e-12, longest)


def admissible_interval(tree: RootedTree, lengths: FrontierLengths) -> AdmissibleInterval:
    """Admissible tree-edge lengths of a one-edge tree."""
    if len(tree.edges) != 1:
        raise AdmissibleError("Admissible intervals are defined for one-edge trees")

    (child,) = children(tree)[tree.root]
    leaf_values = _frontier_values(tree, lengths, child)
    root_values = sorted(_frontier_values(tree, lengths, tree.root), reverse=True)
    b_e, h_e = b0(leaf_values), h0(leaf_values)
    lower_limit = _centering_limit(root_values[0], root_values[1:])
    lower = max(b_e, lower_limit)
    upper = min(h_e, b0(root_values))
    closed_left = b_e > lower_limit

    def radius_gap(x: float) -> float:
        return classify((x, *root_values)).radius - classify((x, *leaf_values)).radius

    if lower >= upper or radius_gap(lower) <= 0.0:
        logger.debug(f"Empty admissible interval: [{lower}, {upper})")
        return AdmissibleInterval(lower, lower, closed_left)

    inner = upper - INTERVAL_EPSILON * max(1.0, upper)
    if radius_gap(inner) > 0.0:
        return AdmissibleInterval(lower, upper, closed_left)
    try:
        return AdmissibleInterval(lower, bisect_root(radius_gap, lower, inner), closed_left)
    except BracketError as e:
        logger.error(f"Admissible interval solve failed: {str(e)}", exc_info=True)
        raise


def _tree_from_counts(
    chain: Sequence[int], branches: Sequence[int] = ()
) -> RootedTree:
    """Tree with a path of vertices ending at the root, plus leaves hung on the root.

    `chain` lists frontier counts from the far end of the path to the root.
    """
    names = [f"v{k}" for k in range(len(chain) - 1)] + ["root"]
    edges = [(names[k], names[k + 1]) for k in range(len(names) - 1)]
    counts = dict(zip(names, chain, strict=True))
    for k, count in enumerate(branches):
        name = f"w{k}"
        names.insert(-1, name)
        edges.append((name, "root"))
        counts[name] = count

    frontier = []
    for name in names:
        frontier.extend((f"{name}-f{i}", name) for i in range(counts[name]))
    return RootedTree(
        vertices=tuple(names), root="root", edges=tuple(edges), frontier=tuple(frontier)
    )


def named_tree(name: str) -> RootedTree:
    """Trees appearing in the defect tables and the proof of the main bound."""
    factories = {
        "t34": lambda: _tree_from_counts([2, 3]),
        "t43": lambda: _tree_from_counts([3, 2]),
        "t333": lambda: _tree_from_counts([2, 1], branches=[2]),
        "t333_end": lambda: _tree_from_counts([2, 1, 2]),
        "four_four": lambda: _tree_from_counts([3, 3]),
        "chain": lambda: _tree_from_counts([3, 1, 2]),
        "three_three": lambda: _tree_from_counts([2, 2]),
    }
    if name not in factories:
        raise AdmissibleError(f"Unknown tree {name}; expected one of {sorted(factories)}")
    return factories[name]()


def rooted_tree_of(
    dual: CenteredDual, tree: NonCenteredTree
) -> tuple[RootedTree, dict[str, float], FrontierLengths]:
    """Rooted tree, tree-edge lengths and frontier lengths of a centered dual cell."""
    voronoi_ = dual.delaunay.voronoi
    dual_length = {edge.voronoi_edge: edge.length for edge in dual.delaunay.edges}
    by_vertices = {frozenset(e.vertices): e.index for e in voronoi_.edges}
    members = set(tree.vertices)

    edge_lengths = {}
    for child, parent in tree.edges:
        voronoi_edge = by_vertices[frozenset((child, parent))]
        edge_lengths[str(child)] = dual_length[voronoi_edge]

    frontier = []
    frontier_lengths = {}
    for index in tree.frontier:
        ends = [v for v in voronoi_.edges[index].vertices if v in members]
        if len(ends) != 1:
            raise AdmissibleError(f"Frontier edge {index} does not leave the tree")
        frontier.append((f"e{index}", str(ends[0])))
        frontier_lengths[f"e{index}"] = dual_length[index]

    rooted = RootedTree(
        vertices=tuple(str(v) for v in tree.vertices),
        root=str(tree.root),
        edges=tuple((str(u), str(w)) for u, w in tree.edges),
        frontier=tuple(frontier),
    )
    return rooted, edge_lengths, FrontierLengths(frontier_lengths)
