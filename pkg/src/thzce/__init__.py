"""thzce: hybrid far/near-field sub-THz massive-MIMO channel simulation and
pilot-based channel estimation (LS, LMMSE, and from-scratch sequence models)."""

__version__ = "0.1.0"

from .channel import (
    ChannelRealization,
    FarPath,
    NearPath,
    draw_channel,
    far_steering,
    near_element_distances,
    near_steering,
    rayleigh_distance,
    rebuild_channel,
)
from .config import (
    DESK_PROFILE,
    PAPER_PROFILE,
    Profile,
    ScenarioConfig,
    TrainConfig,
    get_profile,
)
from .dataset import Dataset, export_csv, generate_dataset, load_dataset, save_dataset
from .estimators import (
    ChannelFeaturizer,
    LeastSquaresEstimator,
    LmmseEstimator,
    MmseStatistics,
    NeuralChannelEstimator,
    fit_mmse,
    ls_estimate,
    mmse_estimate,
    predict_channel,
)
from .impairments import (
    NoiseSpec,
    PhaseNoiseTrajectory,
    apply_impairments,
    draw_pn_trajectory,
)
from .metrics import NMSE_EXACT, nmse_db
from .observation import (
    ObservationSample,
    generate_sample,
    inverse_preprocess,
    preprocess,
    synthesize_observation,
)
from .pilots import PilotMatrix, make_pilots

__all__ = [
    "ChannelFeaturizer",
    "ChannelRealization",
    "DESK_PROFILE",
    "Dataset",
    "FarPath",
    "LeastSquaresEstimator",
    "LmmseEstimator",
    "MmseStatistics",
    "NMSE_EXACT",
    "NearPath",
    "NeuralChannelEstimator",
    "NoiseSpec",
    "ObservationSample",
    "PAPER_PROFILE",
    "PhaseNoiseTrajectory",
    "PilotMatrix",
    "Profile",
    "ScenarioConfig",
    "TrainConfig",
    "apply_impairments",
    "draw_channel",
    "draw_pn_trajectory",
    "export_csv",
    "far_steering",
    "fit_mmse",
    "generate_dataset",
    "generate_sample",
    "get_profile",
    "inverse_preprocess",
    "load_dataset",
    "ls_estimate",
    "make_pilots",
    "mmse_estimate",
    "near_element_distances",
    "near_steering",
    "nmse_db",
    "predict_channel",
    "preprocess",
    "rayleigh_distance",
    "rebuild_channel",
    "save_dataset",
    "synthesize_observation",
]
