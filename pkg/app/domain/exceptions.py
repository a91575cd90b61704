"""Domain-specific exceptions."""


class DomainException(Exception):
    """Base exception for domain errors."""

    pass


class GeometryError(DomainException):
    """Exception raised for invalid points, segments or isometries."""

    pass


class ClassificationError(DomainException):
    """Exception raised when a cyclic tuple has the wrong class for an operation."""

    pass


class BracketError(DomainException):
    """Exception raised when a root cannot be bracketed or bisection fails."""

    pass


class TessellationError(DomainException):
    """Exception raised when a Voronoi or Delaunay construction fails."""

    pass


class SurfaceError(DomainException):
    """Exception raised when building or sampling a surface fails."""

    pass


class AdmissibleError(DomainException):
    """Exception raised for malformed trees or out-of-closure lengths."""

    pass


class RepositoryError(DomainException):
    """Exception raised when reading or writing files fails."""

    pass


class VerificationError(DomainException):
    """Exception raised when a verification gate fails."""

    pass
