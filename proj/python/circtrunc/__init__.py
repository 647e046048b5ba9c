"""Location estimation for circular data with a restricted parameter space."""

from ._core import (
    Distribution,
    InvalidArgument,
    NumericError,
    admissible_equivariant,
    circular_median,
    improve_by_projection,
    improve_equivariant,
    l1_estimator,
    mean_direction,
    project,
    reduce_angle,
    reduced_space_cn,
    restricted_mle_cn,
    risk_curve,
    spatial_median,
    wilcoxon,
)

__all__ = [
    "Distribution",
    "InvalidArgument",
    "NumericError",
    "admissible_equivariant",
    "circular_median",
    "improve_by_projection",
    "improve_equivariant",
    "l1_estimator",
    "mean_direction",
    "project",
    "reduce_angle",
    "reduced_space_cn",
    "restricted_mle_cn",
    "risk_curve",
    "spatial_median",
    "wilcoxon",
]
