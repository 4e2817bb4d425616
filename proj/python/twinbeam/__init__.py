"""Twin-beam PDC -> SFG temporal correlation simulator.

All quantities are SI: seconds, metres, rad/s, rad/m.
"""

from ._core import (
    AnalysisError,
    ConfigError,
    CrystalSpec,
    DefocusModel,
    DomainError,
    EvanescentModeError,
    FitError,
    Grid,
    OutputError,
    PreconditionError,
    RangeError,
    Reduction,
    RunConfig,
    Scenario,
    ScenarioConfig,
    ScenarioResult,
    Sinc2Fit,
    SincArgument,
    SpectralWindow,
    TransferSpec,
    __version__,
    delay_range,
    echo_config,
    extract_fwhm,
    fig2,
    fig3,
    fig4,
    fit_sinc2,
    load_config,
    parse_config,
    pinhole_from_geometry,
    run,
    sinc,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
