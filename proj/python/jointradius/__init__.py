"""Joint operator norms, joint numerical radii, joint numerical ranges and indices."""

from ._core import (
    Field,
    JointRadiusError,
    OperatorTuple,
    Space,
    classical_index,
    closed_form_index,
    convexity_report,
    dual_space,
    estimate_index,
    extreme_points,
    index_bounds,
    inf,
    joint_numerical_radius,
    joint_operator_norm,
    lift_direct_sum,
    norm,
    norming_functionals,
    pad,
    random_tuple,
    sample_range,
    verify,
    witness_tuple,
)

__all__ = [
    "Field",
    "JointRadiusError",
    "OperatorTuple",
    "Space",
    "classical_index",
    "closed_form_index",
    "convexity_report",
    "dual_space",
    "estimate_index",
    "extreme_points",
    "index_bounds",
    "inf",
    "joint_numerical_radius",
    "joint_operator_norm",
    "lift_direct_sum",
    "norm",
    "norming_functionals",
    "pad",
    "random_tuple",
    "sample_range",
    "verify",
    "witness_tuple",
]
