"""Tests for admissible spaces and tree-defect bounds."""

import numpy as np
import pytest

from app.domain.admissible import (
    ad_membership,
    admissible_interval,
    basic_bound,
    bound_report,
    case_bounds,
    frontier_b,
    frontier_h,
    named_tree,
    parents,
    root_bound,
    tree_defect,
)
from app.domain.cyclic import b0, classify, defect_of, h0
from app.domain.entities import FrontierLengths, PolygonClass, RootedTree
from app.domain.exceptions import AdmissibleError
from app.domain.surfaces import constants

TABLE_TOLERANCE = 2e-5


def within(value: float | None, expected: float) -> bool:
    return value is not None and expected <= value <= expected + TABLE_TOLERANCE


def sample_frontier(
    tree: RootedTree, floor: float, rng: np.random.Generator
) -> FrontierLengths:
    """Frontier lengths at or above a common lower bound."""
    return FrontierLengths(
        {edge_id: floor + float(rng.uniform(0.0, 0.3)) for edge_id, _ in tree.frontier}
    )


def sample_edges(
    tree: RootedTree, lengths: FrontierLengths, rng: np.random.Generator
) -> dict[str, float] | None:
    """Admissible tree-edge lengths: inside the interval for one edge, rejection in the b/h box otherwise."""
    if len(tree.edges) == 1:
        interval = admissible_interval(tree, lengths)
        if interval.is_empty:
            return None
        (child,) = parents(tree)
        fraction = float(rng.uniform(0.01, 0.99))
        edges = {child: interval.lower + fraction * (interval.upper - interval.lower)}
    else:
        b_values = frontier_b(tree, lengths)
        h_values = frontier_h(tree, lengths)
        edges = {v: float(rng.uniform(b_values[v], h_values[v])) for v in b_values}
    return edges if ad_membership(tree, edges, lengths) else None


@pytest.fixture
def three_edge_tree() -> RootedTree:
    """A path of four vertices, too long for the case analysis."""
    names = ["a", "b", "c", "root"]
    counts = {"a": 2, "b": 1, "c": 1, "root": 2}
    return RootedTree(
        vertices=tuple(names),
        root="root",
        edges=(("a", "b"), ("b", "c"), ("c", "root")),
        frontier=tuple(
            (f"{name}{i}", name) for name in names for i in range(counts[name])
        ),
    )


class TestNamedTrees:
    """Test the named trees."""

    @pytest.mark.parametrize("name", ["t34", "t43", "t333", "t333_end"])
    def test_five_frontier_edges(self, name: str) -> None:
        """Test the table trees all have five frontier edges."""
        assert len(named_tree(name).frontier) == 5

    def test_t333_is_middle_rooted(self) -> None:
        """Test the middle-rooted chain has two children at the root."""
        tree = named_tree("t333")
        assert sorted(parents(tree).values()) == ["root", "root"]

    def test_unknown_tree(self) -> None:
        """Test an unknown tree name."""
        with pytest.raises(AdmissibleError, match="Unknown tree"):
            named_tree("t5")


class TestFrontierValues:
    """Test boundary and horocyclic edge values."""

    def test_frontier_b_is_boundary_centered(self) -> None:
        """Test b_e makes the child polygon boundary-centered."""
        tree = named_tree("t43")
        lengths = FrontierLengths.uniform(tree, 2.0)
        value = frontier_b(tree, lengths)["v0"]
        assert value == pytest.approx(b0([2.0, 2.0, 2.0]), abs=1e-12)
        polygon = classify([value, 2.0, 2.0, 2.0])
        assert polygon.polygon_class is PolygonClass.BOUNDARY_CENTERED

    def test_frontier_h_nested(self) -> None:
        """Test h_e along a chain is built from the child's h_e value."""
        tree = named_tree("t333_end")
        lengths = FrontierLengths.uniform(tree, 2.0)
        b_values = frontier_b(tree, lengths)
        h_values = frontier_h(tree, lengths)
        assert h_values["v0"] == pytest.approx(h0([2.0, 2.0]), abs=1e-12)
        assert h_values["v1"] == pytest.approx(h0([2.0, h_values["v0"]]), abs=1e-12)
        assert all(h_values[v] > b_values[v] for v in b_values)

    def test_missing_frontier_length(self) -> None:
        """Test lengths missing a frontier edge."""
        tree = named_tree("t34")
        with pytest.raises(AdmissibleError, match="No length"):
            frontier_b(tree, FrontierLengths({"root-f0": 2.0}))


class TestTableBounds:
    """Test the certified bounds at d_1 and r_1."""

    EXPECTED = {
        "t34": (1.00510, 1.17816, 1.57569, None, None, 1.17816),
        "t43": (1.63705, 1.77971, 1.71113, None, None, 1.71113),
        "t333": (0.80915, 1.15527, 1.28432, 1.38738, 1.22041, 1.15527),
        "t333_end": (1.24735, 1.56044, 1.38585, 1.38738, 1.22041, 1.24735),
    }

    @pytest.mark.parametrize("name", ["t34", "t43", "t333", "t333_end"])
    def test_table_row(self, name: str) -> None:
        """Test every cell of a table row, including the N/A ones."""
        values = constants()
        tree = named_tree(name)
        report = case_bounds(tree, FrontierLengths.uniform(tree, values.d_1), values.r_1)
        basic, case1, case2a, case2b, case3, best = self.EXPECTED[name]

        assert within(report.basic, basic)
        assert within(report.case1, case1)
        assert within(report.case2a, case2a)
        for computed, expected in ((report.case2b, case2b), (report.case3, case3)):
            if expected is None:
                assert computed is None
            else:
                assert within(computed, expected)
        assert within(report.best, best)

    def test_subtree_bounds(self) -> None:
        """Test the bounds quoted for the subtrees of the main argument."""
        values = constants()
        four_four = named_tree("four_four")
        chain = named_tree("chain")
        three_three = named_tree("three_three")

        assert within(
            basic_bound(four_four, FrontierLengths.uniform(four_four, values.d_1), values.r_1),
            1.8623,
        )
        assert within(
            basic_bound(chain, FrontierLengths.uniform(chain, values.d_1), values.r_1),
            2.46104,
        )
        report = case_bounds(
            three_three, FrontierLengths.uniform(three_three, values.d_1), values.r_2
        )
        assert within(report.case2a, 0.74844)

    def test_root_bound_caps_the_longest_entry(self) -> None:
        """Test M_R does not depend on a root entry above b0 of the rest."""
        assert root_bound([5.0, 2.0, 2.0, 2.0], 0.5) == pytest.approx(
            root_bound([6.0, 2.0, 2.0, 2.0], 0.5), abs=1e-12
        )

    def test_case_bounds_limited_to_two_edges(self, three_edge_tree: RootedTree) -> None:
        """Test case bounds on a three-edge tree."""
        lengths = FrontierLengths.uniform(three_edge_tree, 2.0)
        with pytest.raises(AdmissibleError, match="at most 2"):
            case_bounds(three_edge_tree, lengths, 0.5)

    def test_bound_report_falls_back_to_basic(self, three_edge_tree: RootedTree) -> None:
        """Test the report of a three-edge tree."""
        lengths = FrontierLengths.uniform(three_edge_tree, 2.0)
        report = bound_report(three_edge_tree, lengths, 0.5)
        assert report.applicable_cases == []
        assert report.best == report.basic
        assert set(report.vertex_terms) == {"a", "b", "c", "root"}

    def test_disk_radius_checked(self) -> None:
        """Test a disk radius above half the shortest frontier bound."""
        tree = named_tree("t34")
        with pytest.raises(AdmissibleError, match="Disk radius"):
            basic_bound(tree, FrontierLengths.uniform(tree, 1.0), 0.6)


class TestOneEdgeTree:
    """Test membership and defects of a one-edge tree."""

    @pytest.fixture
    def tree(self) -> RootedTree:
        """The 3/3 one-edge tree."""
        return named_tree("three_three")

    @pytest.fixture
    def lengths(self) -> FrontierLengths:
        """Long root frontier, short leaf frontier."""
        return FrontierLengths(
            {"root-f0": 2.0, "root-f1": 2.0, "v0-f0": 1.0, "v0-f1": 1.0}
        )

    def test_equal_lengths_interval_is_empty(self, tree: RootedTree) -> None:
        """Test the interval collapses when root and leaf see equal lengths."""
        interval = admissible_interval(tree, FrontierLengths.uniform(tree, 1.0))
        assert interval.is_empty

    def test_interval(self, tree: RootedTree, lengths: FrontierLengths) -> None:
        """Test the interval starts at b_e and stays below h_e."""
        interval = admissible_interval(tree, lengths)
        assert interval.lower == pytest.approx(b0([1.0, 1.0]), abs=1e-12)
        assert interval.closed_left
        assert interval.lower < interval.upper <= h0([1.0, 1.0])

    def test_membership(self, tree: RootedTree, lengths: FrontierLengths) -> None:
        """Test points inside and below the interval."""
        interval = admissible_interval(tree, lengths)
        middle = (interval.lower + interval.upper) / 2.0
        assert ad_membership(tree, {"v0": interval.lower}, lengths)
        assert ad_membership(tree, {"v0": middle}, lengths)
        assert not ad_membership(tree, {"v0": interval.lower - 0.05}, lengths)

    def test_tree_defect_sums_vertex_polygons(
        self, tree: RootedTree, lengths: FrontierLengths
    ) -> None:
        """Test D_R(T, d) is the sum of the two vertex polygon defects."""
        x = admissible_interval(tree, lengths).lower + 0.1
        expected = defect_of((x, 2.0, 2.0), 0.3) + defect_of((x, 1.0, 1.0), 0.3)
        assert tree_defect(tree, {"v0": x}, lengths, 0.3) == pytest.approx(expected, abs=1e-12)

    def test_basic_bound_is_a_lower_bound(
        self, tree: RootedTree, lengths: FrontierLengths
    ) -> None:
        """Test the basic bound stays below the defect across the interval."""
        interval = admissible_interval(tree, lengths)
        bound = basic_bound(tree, lengths, 0.3)
        for fraction in (0.0, 0.25, 0.5, 0.75, 0.99):
            x = interval.lower + fraction * (interval.upper - interval.lower)
            assert bound <= tree_defect(tree, {"v0": x}, lengths, 0.3) + 1e-12

    def test_tree_defect_needs_edge_lengths(
        self, tree: RootedTree, lengths: FrontierLengths
    ) -> None:
        """Test a missing tree-edge length."""
        with pytest.raises(AdmissibleError, match="No tree-edge length"):
            tree_defect(tree, {}, lengths, 0.3)


class TestSoundness:
    """Test certified bounds against sampled admissible configurations."""

    SAMPLES = 500
    ATTEMPTS = 3000

    @pytest.mark.parametrize(
        "name", ["t34", "t43", "t333", "t333_end", "three_three", "four_four", "chain"]
    )
    def test_best_bound_never_exceeds_the_defect(self, name: str) -> None:
        """Test D_R(T, d) >= best for sampled d above the frontier bounds."""
        values = constants()
        tree = named_tree(name)
        best = case_bounds(tree, FrontierLengths.uniform(tree, values.d_1), values.r_1).best
        rng = np.random.default_rng(sum(map(ord, name)))

        accepted = 0
        for _ in range(self.ATTEMPTS):
            if accepted == self.SAMPLES:
                break
            lengths = sample_frontier(tree, values.d_1, rng)
            edges = sample_edges(tree, lengths, rng)
            if edges is None:
                continue
            accepted += 1
            assert tree_defect(tree, edges, lengths, values.r_1) >= best - 1e-9

        if name in ("t34", "t333", "three_three", "four_four"):
            assert accepted > 0
