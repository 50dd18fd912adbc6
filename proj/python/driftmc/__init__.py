"""Tide-averaged ocean drift forecasting.

Thin re-export of the compiled extension. The heavy lifting (field
evaluation, stiff and averaged integration, wind synthesis, Monte Carlo
ensembles) happens in C++; this package exposes the main operations for
scripting and analysis.
"""

from ._driftmc import (  # noqa: F401
    AveragedTrajectory,
    CoastCircle,
    ConfigError,
    EnsembleConfig,
    FieldBundle,
    GroundingReport,
    NumericalError,
    OdeOptions,
    Trajectory,
    WindConfig,
    WindSeries,
    __version__,
    integrate_averaged,
    integrate_direct,
    make_field_bundle,
    reconstruct,
    required_wind_span,
    run_ensemble,
    synthesize_wind,
    zero_wind,
)
