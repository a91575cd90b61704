"""File-based implementations of repositories."""

import csv
import json
import logging
from pathlib import Path

from pydantic import BaseModel, ValidationError

from app.application.schemas import PointSetFile, RunReport, TreeFile
from app.domain.entities import FrontierLengths, HPoint, RootedTree
from app.domain.exceptions import RepositoryError
from app.domain.repositories import PointSetRepository, ReportRepository, TreeRepository
from app.infrastructure.coordinate_utils import points_from_rows

logger = logging.getLogger(__name__)


def _read_json(path: Path) -> object:
    try:
        with open(path, encoding="utf-8") as file:
            return json.load(file)
    except FileNotFoundError as e:
        logger.error(f"Input file not found: {path}")
        raise RepositoryError(f"Input file not found: {path}") from e
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {path}: {str(e)}", exc_info=True)
        raise RepositoryError(f"Invalid JSON in {path}: {e}") from e
    except OSError as e:
        logger.error(f"Error reading {path}: {str(e)}", exc_info=True)
        raise RepositoryError(f"Cannot read {path}: {e}") from e


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error(f"Error writing {path}: {str(e)}", exc_info=True)
        raise RepositoryError(f"Cannot write {path}: {e}") from e


class JSONPointSetRepository(PointSetRepository):
    """Point sets stored as JSON coordinate lists."""

    def load(self, path: Path) -> list[HPoint]:
        """Load and validate a point set file."""
        try:
            payload = PointSetFile.model_validate(_read_json(path))
        except ValidationError as e:
            logger.error(f"Invalid point set file {path}: {str(e)}")
            raise RepositoryError(f"Invalid point set file {path}: {e}") from e

        try:
            points = points_from_rows(payload.model, payload.points)
        except ValueError as e:
            raise RepositoryError(f"Invalid point in {path}: {e}") from e
        logger.info(f"Loaded {len(points)} points from {path}")
        return points

    def save(self, path: Path, points: list[HPoint]) -> None:
        """Save points in hyperboloid coordinates."""
        payload = PointSetFile(model="hyperboloid", points=[list(p.coords) for p in points])
        _write_text(path, payload.model_dump_json(indent=2))


class JSONTreeRepository(TreeRepository):
    """Rooted trees stored as JSON vertex, edge and frontier lists."""

    def load(self, path: Path) -> tuple[RootedTree, FrontierLengths]:
        """Load a tree file and build the tree with its frontier bounds."""
        try:
            payload = TreeFile.model_validate(_read_json(path))
        except ValidationError as e:
            logger.error(f"Invalid tree file {path}: {str(e)}")
            raise RepositoryError(f"Invalid tree file {path}: {e}") from e

        frontier = []
        bounds = {}
        for k, item in enumerate(payload.frontier):
            edge_id = item.id or f"f{k}"
            frontier.append((edge_id, item.vertex))
            bounds[edge_id] = item.bound

        try:
            tree = RootedTree(
                vertices=tuple(vertex.id for vertex in payload.vertices),
                root=next(vertex.id for vertex in payload.vertices if vertex.root),
                edges=tuple(tuple(edge) for edge in payload.edges),  # type: ignore[misc]
                frontier=tuple(frontier),
            )
        except ValueError as e:
            raise RepositoryError(f"Malformed tree in {path}: {e}") from e
        return tree, FrontierLengths(bounds)


class FileReportRepository(ReportRepository):
    """Reports written as JSON documents or flat CSV rows."""

    def save_json(self, path: Path, payload: BaseModel) -> None:
        """Write a validated model as indented JSON."""
        _write_text(path, payload.model_dump_json(indent=2, by_alias=True))
        logger.info(f"Wrote JSON to {path}")

    def save_csv(self, path: Path, payload: RunReport) -> None:
        """Write every table cell as a (table, row, column, value) row."""
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as file:
                writer = csv.DictWriter(file, fieldnames=["table", "row", "column", "value"])
                writer.writeheader()
                for table in payload.tables:
                    for index, row in enumerate(table.rows):
                        for column in table.columns:
                            writer.writerow(
                                {
                                    "table": table.name,
                                    "row": index,
                                    "column": column,
                                    "value": row.get(column),
                                }
                            )
        except OSError as e:
            logger.error(f"Error writing CSV to {path}: {str(e)}", exc_info=True)
            raise RepositoryError(f"Cannot write {path}: {e}") from e
        logger.info(f"Wrote CSV to {path}")
