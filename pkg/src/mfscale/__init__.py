"""Multifractal detrended fluctuation analysis of time series.

Core objects: :class:`Series` and its transforms, the midpoint
displacement generator, the F(s, q) fluctuation surface, per-q scaling
fits h(q), the Legendre singularity spectrum f(alpha), return-level
event surgery, and finite-length background calibration.
"""

from .calibrate import (
    CalibrationEntry,
    CalibrationReport,
    baseline_lookup,
    read_report_json,
    run_calibration,
    write_report_json,
)
from .errors import MfscaleError
from .mfdfa import (
    BoxVariance,
    FluctuationSurface,
    MfdfaConfig,
    box_variance,
    default_q_grid,
    default_window_sizes,
    fluctuation_from_variances,
    fluctuation_surface,
    partition_boxes,
    read_surface_csv,
    write_surface_csv,
)
from .pipeline import analyze_profile, prepare_profile
from .rmdgen import RMD_ALGORITHM, RmdParams, generate_rmd
from .scaling import (
    AutoRangePolicy,
    HurstFunction,
    QFit,
    ScalingRange,
    auto_range,
    auto_ranges,
    fit_h,
    full_range,
    hurst_function,
    read_ranges_json,
    write_ranges_json,
)
from .series import (
    RNG_ALGORITHM,
    Series,
    SliceSpec,
    integrate_returns,
    read_csv,
    shuffle_returns,
    slice_series,
    to_log,
    to_profile,
    to_returns,
    write_csv,
)
from .spectrum import (
    ExcessWidth,
    MetricsRecord,
    SingularitySpectrum,
    alpha_of_q,
    legendre_spectrum,
    spectrum_metrics,
    tau_of_q,
)
from .surgery import ExcisionSpec, excise, retained_returns, spec_from_dates

__version__ = "0.1.0"

__all__ = [
    "AutoRangePolicy",
    "BoxVariance",
    "CalibrationEntry",
    "CalibrationReport",
    "ExcessWidth",
    "ExcisionSpec",
    "FluctuationSurface",
    "HurstFunction",
    "MetricsRecord",
    "MfdfaConfig",
    "MfscaleError",
    "QFit",
    "RMD_ALGORITHM",
    "RNG_ALGORITHM",
    "RmdParams",
    "ScalingRange",
    "Series",
    "SingularitySpectrum",
    "SliceSpec",
    "alpha_of_q",
    "analyze_profile",
    "auto_range",
    "auto_ranges",
    "baseline_lookup",
    "box_variance",
    "default_q_grid",
    "default_window_sizes",
    "excise",
    "fit_h",
    "fluctuation_from_variances",
    "fluctuation_surface",
    "full_range",
    "generate_rmd",
    "hurst_function",
    "integrate_returns",
    "legendre_spectrum",
    "partition_boxes",
    "prepare_profile",
    "read_csv",
    "read_ranges_json",
    "read_report_json",
    "read_surface_csv",
    "retained_returns",
    "run_calibration",
    "shuffle_returns",
    "slice_series",
    "spec_from_dates",
    "spectrum_metrics",
    "tau_of_q",
    "to_log",
    "to_profile",
    "to_returns",
    "write_csv",
    "write_ranges_json",
    "write_report_json",
    "write_surface_csv",
    "__version__",
]
