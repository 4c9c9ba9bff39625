"""Bergman geometry of bounded symmetric domains and Bloch-space composition operators."""

from .domains import (
    Ball,
    CartanI,
    CartanII,
    CartanIII,
    CartanIV,
    Disk,
    Polydisk,
    Product,
    bergman_distance,
    bloch_constant,
    contains,
    dimension,
    metric_matrix,
    parse_domain,
    rank,
    sample_points,
    zhu_distance_ball,
)
from .errors import (
    BlochLabError,
    ClassificationRequired,
    ExprDomainError,
    SingularityError,
    UnsupportedError,
    ValidationError,
)

__version__ = "0.1.0"
