"""Deterministic simulator of OAM light storage, manipulation, and
phase-conjugate retrieval in a cold atomic ensemble."""

from oamsim._core import (
    ComplexField,
    ExperimentConfig,
    GridSpec,
    GroundDM,
    LambdaParams,
    ModeSpec,
    ReadProjection,
    RevivalRecord,
    SimulationError,
    ZeemanParams,
    angular_momentum_ops,
    flip_horizontal,
    g_r_peak_time,
    g_r_pulse,
    interference_image,
    larmor,
    lg_amplitude,
    measure_charge,
    parse_config_file,
    precess,
    retrieval_amplitude,
    retrieve_field,
    revival_scan,
    run_experiment,
    sample_superposition,
    transform_mode,
    write_coherence,
    MU_B_OVER_H_MHZ_PER_GAUSS,
    DEFAULT_WAVELENGTH_NM,
    __version__,
)

__all__ = [
    "ComplexField",
    "ExperimentConfig",
    "GridSpec",
    "GroundDM",
    "LambdaParams",
    "ModeSpec",
    "ReadProjection",
    "RevivalRecord",
    "SimulationError",
    "ZeemanParams",
    "angular_momentum_ops",
    "flip_horizontal",
    "g_r_peak_time",
    "g_r_pulse",
    "interference_image",
    "larmor",
    "lg_amplitude",
    "measure_charge",
    "parse_config_file",
    "precess",
    "retrieval_amplitude",
    "retrieve_field",
    "revival_scan",
    "run_experiment",
    "sample_superposition",
    "transform_mode",
    "write_coherence",
    "MU_B_OVER_H_MHZ_PER_GAUSS",
    "DEFAULT_WAVELENGTH_NM",
    "__version__",
]
