"""Python bindings for the screwkit C++ library."""

from ._screwkit import (
    ScrewAxis,
    ScrewkitError,
    axis_error,
    canonicalize_axis,
    exp_coords,
    fit_axis,
    generate_waypoints,
    log_pose,
    noise_study,
    optimize,
    predict,
    relative_poses,
    run_acceptance,
    scenario,
    scenario_names,
    screw_to_twist,
    simulate,
    twist_to_screw,
)

__all__ = [
    "ScrewAxis",
    "ScrewkitError",
    "axis_error",
    "canonicalize_axis",
    "exp_coords",
    "fit_axis",
    "generate_waypoints",
    "log_pose",
    "noise_study",
    "optimize",
    "predict",
    "relative_poses",
    "run_acceptance",
    "scenario",
    "scenario_names",
    "screw_to_twist",
    "simulate",
    "twist_to_screw",
]
