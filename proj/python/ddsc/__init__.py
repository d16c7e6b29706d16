"""Data-driven safe control: identification, set synthesis and closed-loop simulation."""

from ._core import (
    EmptySetError,
    HPolytope,
    MatrixZonotope,
    RankError,
    Zonotope,
    collect,
    identify,
    metric_er,
    rors_point,
    simulate,
    synthesize,
    verify,
)

__all__ = [
    "EmptySetError",
    "HPolytope",
    "MatrixZonotope",
    "RankError",
    "Zonotope",
    "collect",
    "identify",
    "metric_er",
    "rors_point",
    "simulate",
    "synthesize",
    "verify",
]
