"""Quantum-illumination radar versus target-side warning receiver.

Computes signal-to-noise ratios, detection-error probabilities and the
measurement-count ratio R_M = K_target / K_radar that decides who detects
whom first, across physically parameterized link budgets, backgrounds and
protocol realizations.
"""

__version__ = "0.1.0"

from .background import (
    RadiationBackground,
    VarianceModel,
    background_counts,
    background_variance,
    planck_occupancy,
)
from .detection import (
    DetectionResult,
    Protocol,
    Regime,
    RmResult,
    SignalModel,
    classify_regime,
    error_probability,
    required_snr,
    required_trials,
    rm_background_correction,
    rm_ratio,
    snr_gs,
    snr_sp,
    snr_target,
)
from .errors import ConfigError, DomainError, InfeasibleError, QrwrError
from .linkbudget import (
    DEFAULT_ATMOSPHERE,
    AtmosphereModel,
    ComposedEfficiencies,
    GeometryInputs,
    LinkEfficiencies,
    Weather,
    aperture_fraction,
    atmosphere_attenuation,
    compose_efficiencies,
    geometric_return,
)
from .montecarlo import (
    McConfig,
    McReport,
    ThresholdRule,
    shot_rng,
    simulate_direct_detection,
    simulate_sp_covariance,
    validate_erfc,
)
from .sweep import (
    Axis,
    ContourResult,
    PointScenario,
    Quantity,
    ScenarioLine,
    ScenarioPoint,
    SweepResult,
    SweepSpec,
    contour_rm_unity,
    evaluate_point,
    scenario_line,
    sweep_grid,
)

__all__ = [
    "__version__",
    "AtmosphereModel",
    "Axis",
    "ComposedEfficiencies",
    "ConfigError",
    "ContourResult",
    "DEFAULT_ATMOSPHERE",
    "DetectionResult",
    "DomainError",
    "GeometryInputs",
    "InfeasibleError",
    "LinkEfficiencies",
    "McConfig",
    "McReport",
    "PointScenario",
    "Protocol",
    "QrwrError",
    "Quantity",
    "RadiationBackground",
    "Regime",
    "RmResult",
    "ScenarioLine",
    "ScenarioPoint",
    "SignalModel",
    "SweepResult",
    "SweepSpec",
    "ThresholdRule",
    "VarianceModel",
    "Weather",
    "aperture_fraction",
    "atmosphere_attenuation",
    "background_counts",
    "background_variance",
    "classify_regime",
    "compose_efficiencies",
    "contour_rm_unity",
    "error_probability",
    "evaluate_point",
    "geometric_return",
    "planck_occupancy",
    "required_snr",
    "required_trials",
    "rm_background_correction",
    "rm_ratio",
    "scenario_line",
    "shot_rng",
    "simulate_direct_detection",
    "simulate_sp_covariance",
    "snr_gs",
    "snr_sp",
    "snr_target",
    "sweep_grid",
    "validate_erfc",
]
