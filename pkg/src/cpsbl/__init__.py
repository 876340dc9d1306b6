"""Sparse Bayesian recovery in complex linear models, with a cross-predictive
precision learner and a near-field channel estimation harness."""

from .channel import (
    ChannelRealization,
    PathParams,
    channel_from_paths,
    generate_channel_matrix,
    generate_multipath_channel,
    sample_paths,
)
from .cross_predictive import (
    CpsblOptions,
    CpsblState,
    SplitData,
    adam_step,
    cp_gradient,
    cp_objective,
    finite_difference_gradient,
    max_gradient_deviation,
    run_cpsbl,
    split_linear_model,
)
from .dictionary import (
    PolarDictionary,
    PolarGridConfig,
    angle_grid,
    build_polar_dictionary,
    ring_distances,
)
from .esbl import EsblState, InverseGammaHyper, esbl_em_step, run_esbl
from .estimators import CpsblRegressor, EsblRegressor
from .geometry import (
    ArrayGeometry,
    far_field_steering_vector,
    fraunhofer_distance,
    steering_vector,
)
from .harness import (
    ESTIMATOR_CPSBL,
    ESTIMATOR_ESBL,
    SweepResult,
    SystemConfig,
    TrialOutcome,
    desk_preset,
    nmse,
    full_preset,
    run_sweep,
    run_trial,
    write_results_table,
)
from .measurement import (
    HalfSplit,
    LinearModel,
    ModelDims,
    PilotMatrix,
    assemble_linear_model,
    complex_gaussian,
    dft_pilot_matrix,
    random_half_split,
    restrict_model,
    simulate_observation,
)
from .posterior import GaussianPosterior, gaussian_posterior

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "ChannelRealization",
    "CpsblOptions",
    "CpsblRegressor",
    "CpsblState",
    "ESTIMATOR_CPSBL",
    "ESTIMATOR_ESBL",
    "EsblRegressor",
    "EsblState",
    "GaussianPosterior",
    "HalfSplit",
    "InverseGammaHyper",
    "LinearModel",
    "ModelDims",
    "PathParams",
    "PilotMatrix",
    "PolarDictionary",
    "PolarGridConfig",
    "SplitData",
    "SweepResult",
    "SystemConfig",
    "TrialOutcome",
    "adam_step",
    "angle_grid",
    "assemble_linear_model",
    "build_polar_dictionary",
    "channel_from_paths",
    "complex_gaussian",
    "cp_gradient",
    "cp_objective",
    "desk_preset",
    "dft_pilot_matrix",
    "esbl_em_step",
    "far_field_steering_vector",
    "finite_difference_gradient",
    "fraunhofer_distance",
    "gaussian_posterior",
    "generate_channel_matrix",
    "generate_multipath_channel",
    "max_gradient_deviation",
    "nmse",
    "full_preset",
    "random_half_split",
    "restrict_model",
    "ring_distances",
    "run_cpsbl",
    "run_esbl",
    "run_sweep",
    "run_trial",
    "sample_paths",
    "simulate_observation",
    "split_linear_model",
    "steering_vector",
    "write_results_table",
]
