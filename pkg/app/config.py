"""Application configuration settings."""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Hyperboloid tolerances
    construction_tolerance: float = 1e-9
    validation_tolerance: float = 1e-6
    equidistance_tolerance: float = 1e-8

    # Cyclic polygons
    classification_dead_band: float = 1e-11
    bisect_xtol: float = 1e-15
    bisect_rtol: float = 1e-15  # scipy refuses anything below 4 * eps
    bisect_maxiter: int = 200
    bracket_span: float = 60.0
    defect_radius_slack: float = 1e-5

    # Tessellations
    endpoint_dead_band: float = 1e-10
    vertex_merge_tolerance: float = 1e-8
    bounding_polygon_sides: int = 64
    oracle_samples: int = 10_000

    # Surfaces
    lift_margin: float = 1.5
    orbit_cap: int = 100_000
    word_length_cap: int = 12
    exceptional_dead_band: float = 1e-9
    sampling_attempts: int = 10_000
    sampling_spread: float = 0.25

    # Reports
    table_tolerance: float = 2e-5
    identity_tolerance: float = 1e-9
    log_level: str = "INFO"

    class Config:
        env_file = ".env"
        case_sensitive = False


settings = Settings()
