"""Tests for application use cases."""

import math
from pathlib import Path
from unittest.mock import Mock

import pytest

from app.application.use_cases import (
    ConstantsUseCase,
    SurfaceUseCase,
    Table1UseCase,
    Table2UseCase,
    TessellateUseCase,
    TreeBoundUseCase,
    VerifyInjToCovUseCase,
    VerifyMainUseCase,
    inputs_digest,
    truncated_check,
)
from app.domain.admissible import named_tree
from app.domain.entities import FrontierLengths, HPoint, SurfaceModel
from app.domain.exceptions import RepositoryError
from app.domain.surfaces import constants


class TestChecks:
    """Test the assertion helpers."""

    def test_truncated_check_window(self) -> None:
        """Test values are accepted only in [expected, expected + tol]."""
        assert truncated_check("x", 1.00001, 1.0, 2e-5).passed
        assert not truncated_check("x", 0.99999, 1.0, 2e-5).passed
        assert not truncated_check("x", 1.00003, 1.0, 2e-5).passed

    def test_digest_ignores_key_order(self) -> None:
        """Test the digest of canonical JSON."""
        assert inputs_digest({"a": 1, "b": 2}) == inputs_digest({"b": 2, "a": 1})
        assert inputs_digest({"a": 1}) != inputs_digest({"a": 2})


class TestTableUseCases:
    """Test the constant and table reproductions."""

    def test_constants(self) -> None:
        """Test every constant identity holds."""
        report = ConstantsUseCase().execute()
        assert report.passed
        names = {row["name"] for row in report.tables[0].rows}
        assert {"d_alpha", "d_beta", "r_1"} <= names

    def test_table1(self) -> None:
        """Test the regular polygon defects."""
        report = Table1UseCase().execute()
        assert report.passed
        assert [row["n"] for row in report.tables[0].rows] == [3, 4, 5, 6]

    def test_table1_tight_tolerance_fails(self) -> None:
        """Test a zero tolerance rejects the rounded reference values."""
        report = Table1UseCase().execute(tolerance=0.0)
        assert not report.passed

    def test_table2(self) -> None:
        """Test the tree-defect bounds and their N/A cells."""
        report = Table2UseCase().execute()
        assert report.passed
        rows = {row["tree"]: row for row in report.tables[0].rows}
        assert rows["t34"]["Case 2B"] == "N/A"
        assert rows["t333"]["Case 3"] == pytest.approx(1.22041, abs=2e-5)


class TestVerifyMainUseCase:
    """Test the main-bound gates and geometric confirmations."""

    def test_all_checks_pass(self) -> None:
        """Test every gate, identity and geometric check."""
        report = VerifyMainUseCase().execute()
        failed = [a.name for a in report.assertions if not a.passed]
        assert failed == []
        names = {a.name for a in report.assertions}
        assert "F_t cell defect matches its area" in names


class TestVerifyInjToCovUseCase:
    """Test the covering-radius sweep use case."""

    def test_small_grid(self) -> None:
        """Test a coarse sweep passes."""
        report = VerifyInjToCovUseCase().execute(grid=2, samples=3, seed=0)
        assert report.passed
        assert len(report.tables[0].rows) == 2
        assert report.tables[0].rows[0]["r"] == pytest.approx(constants().r_beta)

    def test_grid_too_small(self) -> None:
        """Test a single grid point."""
        with pytest.raises(ValueError, match="at least two grid points"):
            VerifyInjToCovUseCase().execute(grid=1, samples=3, seed=0)


class TestTessellateUseCase:
    """Test the tessellation use case."""

    @pytest.fixture
    def repository(self) -> Mock:
        """Point repository returning a ring around the origin."""
        repository = Mock()
        ring = [HPoint.from_polar(1.0, k * math.pi / 3.0) for k in range(6)]
        repository.load.return_value = [HPoint.origin(), *ring]
        return repository

    def test_oracles_pass(self, repository: Mock) -> None:
        """Test the oracle and structural checks on the ring."""
        report, complex_, delaunay = TessellateUseCase(repository).execute(Path("ring.json"))
        assert report.passed
        assert {assertion.name for assertion in report.assertions} >= {
            "bounded cells are convex",
            "Delaunay faces have V - E + F = 1",
            "centered edges cross their dual at the midpoint",
            "edges shorter than B0 are centered",
        }
        assert complex_.clip_radius == pytest.approx(2.0)
        assert report.tables[0].rows[0]["faces"] == len(delaunay.faces)
        repository.load.assert_called_once_with(Path("ring.json"))

    def test_repository_error_propagates(self, repository: Mock) -> None:
        """Test errors from the repository reach the caller."""
        repository.load.side_effect = RepositoryError("Input file not found: ring.json")
        with pytest.raises(RepositoryError, match="not found"):
            TessellateUseCase(repository).execute(Path("ring.json"))


class TestSurfaceUseCase:
    """Test the surface use case."""

    def test_f_alpha(self) -> None:
        """Test F_alpha passes its geometric checks."""
        report, surface, sites = SurfaceUseCase().execute(SurfaceModel.F_ALPHA)
        assert report.passed
        assert len(report.assertions) == 5
        assert sites[0].coords == pytest.approx(surface.octagon[0].coords)

    def test_f_t(self) -> None:
        """Test F_t just below t = 0 has one non-centered edge class."""
        report, _, _ = SurfaceUseCase().execute(SurfaceModel.F_T, t=-1e-3)
        assert report.passed
        assert len(report.assertions) == 5
        assert report.tables[0].rows[0]["non_centered_edges"] == 1


class TestTreeBoundUseCase:
    """Test the tree-bound use case."""

    @pytest.fixture
    def repository(self) -> Mock:
        """Tree repository returning the 3/4 tree."""
        tree = named_tree("t34")
        repository = Mock()
        repository.load.return_value = (tree, FrontierLengths.uniform(tree, constants().d_1))
        return repository

    def test_bounds(self, repository: Mock) -> None:
        """Test the bounds at r_1 match the table row."""
        report, result = TreeBoundUseCase(repository).execute(Path("t34.json"))
        assert report.passed
        assert result.best == pytest.approx(1.17816, abs=2e-5)
        assert report.tables[0].rows[0]["tree"] == "t34"

    def test_uniform_bound_override(self, repository: Mock) -> None:
        """Test a uniform bound replaces the file bounds."""
        _, result = TreeBoundUseCase(repository).execute(
            Path("t34.json"), bound=constants().d_2
        )
        _, baseline = TreeBoundUseCase(repository).execute(Path("t34.json"))
        assert result.basic > baseline.basic
