"""Valuations of random zonotopes: exact subset sums, zonoids, and Monte Carlo checks."""

from randzono.core import (
    BallGeometry,
    CapacityError,
    DomainError,
    ValuationSpec,
    Zonotope,
    ball_intrinsic_volume,
    hausdorff_upper_bound,
    parallelepiped_volume,
    segment_plus_ball_intrinsic,
    subset_identity_residual,
    support_function,
    unit_ball_volumes,
    valuation,
)
from randzono.distributions import (
    GAUSSIAN_ZONOID_RADIUS,
    DistributionSpec,
    SeedSpec,
    gaussian_norm_moments,
    sample,
    zonoid_empirical,
    zonoid_exact_discrete,
    zonoid_gaussian_radius,
)

__version__ = "0.1.0"

__all__ = [
    "BallGeometry",
    "CapacityError",
    "DomainError",
    "ValuationSpec",
    "Zonotope",
    "ball_intrinsic_volume",
    "hausdorff_upper_bound",
    "parallelepiped_volume",
    "segment_plus_ball_intrinsic",
    "subset_identity_residual",
    "support_function",
    "unit_ball_volumes",
    "valuation",
    "GAUSSIAN_ZONOID_RADIUS",
    "DistributionSpec",
    "SeedSpec",
    "gaussian_norm_moments",
    "sample",
    "zonoid_empirical",
    "zonoid_exact_discrete",
    "zonoid_gaussian_radius",
]
