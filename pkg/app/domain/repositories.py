"""Repository interfaces for domain inputs and outputs."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from app.domain.entities import FrontierLengths, HPoint, RootedTree


class PointSetRepository(ABC):
    """Repository interface for site lists."""

    @abstractmethod
    def load(self, path: Path) -> list[HPoint]:
        """Load sites from a file."""
        pass

    @abstractmethod
    def save(self, path: Path, points: list[HPoint]) -> None:
        """Save sites to a file."""
        pass


class TreeRepository(ABC):
    """Repository interface for rooted trees with frontier bounds."""

    @abstractmethod
    def load(self, path: Path) -> tuple[RootedTree, FrontierLengths]:
        """Load a tree and its frontier bounds from a file."""
        pass


class ReportRepository(ABC):
    """Repository interface for run reports and other outputs."""

    @abstractmethod
    def save_json(self, path: Path, payload: Any) -> None:
        """Save a pydantic model as JSON."""
        pass

    @abstractmethod
    def save_csv(self, path: Path, payload: Any) -> None:
        """Save the tables of a report as flat CSV rows."""
        pass
