"""Squeeze-film damping, noise shaping and macromodel extraction for MEMS plates."""

from .damping_data import (
    DampingInterpolant,
    DampingSpectrum,
    build_interpolant,
    export_csv,
    parse_csv,
)
from .errors import (
    DegenerateAdmittance,
    DomainError,
    FitError,
    NoResonanceInBand,
    OrderError,
    SchemaError,
    SfdNoiseError,
    SingularResponse,
    UnphysicalInput,
)
from .macromodel import (
    AirAdmittancePoint,
    LumpedRLModel,
    SeriesRLPoint,
    air_admittance,
    export_spice,
    fit_branches,
    fit_from_interpolant,
    model_impedance,
    model_noise_psd,
    series_rl,
)
from .noise import (
    K_BOLTZMANN,
    NoiseSpectra,
    ResonatorParams,
    band_integrated_snr,
    compute_spectra,
    displacement_noise,
    displacement_signal,
    force_noise_density,
    force_ratios,
    input_accel_noise,
    mechanical_tf,
    snr_input,
    white_baseline,
)
from .optimizer import (
    DesignResult,
    ObjectiveConfig,
    objective_eval,
    optimize_spring,
    resonance_frequency,
)
from .squeeze_film import (
    GasProperties,
    PlateGeometry,
    SeriesTruncation,
    damping_coefficient,
    damping_series_sum,
    elastic_series_sum,
    spring_coefficient,
    squeeze_number,
    synth_spectrum,
)

__version__ = "0.1.0"
