"""Grid sweeps, unity-ratio contour extraction and range scenario lines."""

from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .background import RadiationBackground, background_variance
from .constants import DEFAULT_UNDETECTABLE_THRESHOLD, P_ERR_2SIGMA
from .detection import (
    Protocol,
    SignalModel,
    error_probability,
    rm_ratio,
    snr_gs,
    snr_sp,
    snr_target,
)
from .errors import ConfigError, DomainError, InfeasibleError
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


class Quantity(Enum):
    RM = "rm"
    SNR_TARGET = "snr_target"
    SNR_RADAR = "snr_radar"
    PERR = "perr"


# Parameter names an axis may bind to.
SWEEPABLE_PARAMETERS = ("n_s", "mu", "eta_ratio", "eta_r", "eta_t", "n_b")


@dataclass(frozen=True)
class Axis:
    """One sweep axis: a named parameter on a log or linear grid."""

    name: str
    minimum: float
    maximum: float
    points: int
    scale: str = "log"

    def __post_init__(self) -> None:
        if self.name not in SWEEPABLE_PARAMETERS:
            raise ConfigError(
                f"unknown sweep parameter {self.name!r}; "
                f"expected one of {', '.join(SWEEPABLE_PARAMETERS)}"
            )
        if not self.minimum < self.maximum:
            raise ConfigError(f"axis {self.name}: min must be < max")
        if self.points < 2:
            raise ConfigError(f"axis {self.name}: at least 2 points required")
        if self.scale not in ("log", "linear"):
            raise ConfigError(f"axis {self.name}: scale must be 'log' or 'linear'")
        if self.scale == "log" and self.minimum <= 0.0:
            raise ConfigError(f"axis {self.name}: log scale requires min > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(
                math.log10(self.minimum), math.log10(self.maximum), self.points
            )
        return np.linspace(self.minimum, self.maximum, self.points)


@dataclass(frozen=True)
class PointScenario:
    """Full fixed parameter set for a single detection-level evaluation."""

    protocol: Protocol = Protocol.QI_SINGLE_PHOTON
    signal: SignalModel = SignalModel(mu=1e-5, modes=100)
    background: RadiationBackground = RadiationBackground()
    target_background: RadiationBackground | None = None
    eta_t: float = 1e-4
    eta_r: float = 1e-4
    eta_anc: float = 0.8
    p_err: float = P_ERR_2SIGMA
    trials: float = 1.0  # K used by the SNR quantities
    approximate: bool = True
    undetectable_threshold: float = DEFAULT_UNDETECTABLE_THRESHOLD


@dataclass(frozen=True)
class SweepSpec:
    x_axis: Axis
    y_axis: Axis
    fixed: PointScenario = PointScenario()
    quantity: Quantity = Quantity.RM

    def __post_init__(self) -> None:
        if self.x_axis.name == self.y_axis.name:
            raise ConfigError("sweep axes must name distinct parameters")


@dataclass(frozen=True)
class SweepResult:
    """Grid of output values indexed (x_index, y_index), with feasibility flags."""

    spec: SweepSpec
    x_grid: np.ndarray
    y_grid: np.ndarray
    values: np.ndarray  # NaN where infeasible
    feasible: np.ndarray
    scenario_hash: str
    created_utc: str


def _apply_override(scenario: PointScenario, name: str, value: float) -> PointScenario:
    if name == "n_s":
        mu = value / scenario.signal.modes
        return dataclasses.replace(
            scenario, signal=SignalModel(mu=mu, modes=scenario.signal.modes)
        )
    if name == "mu":
        return dataclasses.replace(
            scenario, signal=SignalModel(mu=value, modes=scenario.signal.modes)
        )
    if name == "eta_ratio":
        return dataclasses.replace(scenario, eta_r=value * scenario.eta_t)
    if name == "eta_r":
        return dataclasses.replace(scenario, eta_r=value)
    if name == "eta_t":
        return dataclasses.replace(scenario, eta_t=value)
    if name == "n_b":
        bg = scenario.background
        new_bg = dataclasses.replace(bg, occupancy_override=value / bg.modes)
        return dataclasses.replace(scenario, background=new_bg)
    raise ConfigError(f"unknown sweep parameter {name!r}")


def _eval_rm(s: PointScenario) -> float:
    return rm_ratio(
        s.protocol,
        s.p_err,
        eta_t=s.eta_t,
        eta_r=s.eta_r,
        eta_anc=s.eta_anc,
        signal=s.signal,
        background=s.background,
        target_background=s.target_background,
        approximate=s.approximate,
        undetectable_threshold=s.undetectable_threshold,
    ).rm


def _eval_snr_target(s: PointScenario) -> float:
    var = background_variance(s.target_background or s.background)
    return snr_target(s.trials, s.eta_t, s.signal, var, approximate=s.approximate)


def _eval_snr_radar(s: PointScenario) -> float:
    var = background_variance(s.background)
    fn = snr_gs if s.protocol is Protocol.QI_GAUSSIAN else snr_sp
    return fn(s.trials, s.eta_r, s.eta_anc, s.signal, var)


def _eval_perr(s: PointScenario) -> float:
    return error_probability(_eval_snr_target(s))


_QUANTITY_EVALUATORS: dict[Quantity, Callable[[PointScenario], float]] = {
    Quantity.RM: _eval_rm,
    Quantity.SNR_TARGET: _eval_snr_target,
    Quantity.SNR_RADAR: _eval_snr_radar,
    Quantity.PERR: _eval_perr,
}


def evaluate_point(scenario: PointScenario, quantity: Quantity = Quantity.RM) -> float:
    """Evaluate one quantity at one scenario point.

    Raises:
        InfeasibleError: when the quantity is unbounded at this point.
    """
    return _QUANTITY_EVALUATORS[quantity](scenario)


def scenario_hash(spec: SweepSpec) -> str:
    """Stable short hash of the full sweep specification."""
    digest = hashlib.sha256(repr(spec).encode("utf-8")).hexdigest()
    return digest[:16]


def sweep_grid(spec: SweepSpec) -> SweepResult:
    """Evaluate the output quantity at every grid node.

    Nodes where the quantity is unbounded are flagged infeasible and carry
    NaN, never a silent zero.  Node evaluations are pure and independent, so
    the result is bit-identical for identical specs no matter how the nodes
    are scheduled.
    """
    xs = spec.x_axis.grid()
    ys = spec.y_axis.grid()
    values = np.full((len(xs), len(ys)), np.nan)
    feasible = np.zeros((len(xs), len(ys)), dtype=bool)
    for i, xv in enumerate(xs):
        row_scenario = _apply_override(spec.fixed, spec.x_axis.name, float(xv))
        for j, yv in enumerate(ys):
            node = _apply_override(row_scenario, spec.y_axis.name, float(yv))
            try:
                values[i, j] = evaluate_point(node, spec.quantity)
                feasible[i, j] = True
            except (InfeasibleError, DomainError):
                pass
    return SweepResult(
        spec=spec,
        x_grid=xs,
        y_grid=ys,
        values=values,
        feasible=feasible,
        scenario_hash=scenario_hash(spec),
        created_utc=datetime.now(timezone.utc).isoformat(),
    )


@dataclass(frozen=True)
class ContourResult:
    """Unity-ratio crossings per x grid line.

    ``points`` holds every located crossing (several per line when the scan
    is non-monotone); ``no_crossing`` lists x values whose line never
    brackets unity.
    """

    points: tuple[tuple[float, float], ...]
    no_crossing: tuple[float, ...]


def contour_rm_unity(
    spec: SweepSpec,
    evaluator: Callable[[float, float], float] | None = None,
    tol_log10: float = 1e-6,
    max_iterations: int = 200,
) -> ContourResult:
    """Extract the rm = 1 contour by per-line bisection along the y axis.

    For each x grid value the quantity is scanned along y; every bracketing
    interval is bisected (in log-y for log axes) until |log10 rm| at the
    midpoint drops below ``tol_log10``.  Lines without a bracket are
    recorded as absent rather than raising.

    ``evaluator`` overrides the grid's own rm evaluation with an arbitrary
    f(x, y); useful for diagnostics with analytically known contours.
    """
    if evaluator is None:
        if spec.quantity is not Quantity.RM:
            raise ConfigError("contour extraction applies to the rm quantity")

        def evaluator(xv: float, yv: float) -> float:
            node = _apply_override(
                _apply_override(spec.fixed, spec.x_axis.name, xv),
                spec.y_axis.name,
                yv,
            )
            return _eval_rm(node)

    log_y = spec.y_axis.scale == "log"

    def to_u(y: float) -> float:
        return math.log(y) if log_y else y

    def from_u(u: float) -> float:
        return math.exp(u) if log_y else u

    ys = spec.y_axis.grid()
    points: list[tuple[float, float]] = []
    missing: list[float] = []
    for xv in spec.x_axis.grid():
        xv = float(xv)
        line: list[float] = []
        for yv in ys:
            try:
                line.append(math.log10(evaluator(xv, float(yv))))
            except (InfeasibleError, DomainError, ValueError):
                line.append(math.nan)
        found_any = False
        for j in range(len(ys)):
            if not math.isnan(line[j]) and abs(line[j]) < tol_log10:
                points.append((xv, float(ys[j])))
                found_any = True
        for j in range(len(ys) - 1):
            lo, hi = line[j], line[j + 1]
            if math.isnan(lo) or math.isnan(hi):
                continue
            if abs(lo) < tol_log10 or abs(hi) < tol_log10:
                continue  # grid node already on the contour, recorded above
            if (lo < 0.0) == (hi < 0.0):
                continue
            ua, ub = to_u(float(ys[j])), to_u(float(ys[j + 1]))
            fa = lo
            for _ in range(max_iterations):
                um = 0.5 * (ua + ub)
                fm = math.log10(evaluator(xv, from_u(um)))
                if abs(fm) < tol_log10:
                    points.append((xv, from_u(um)))
                    found_any = True
                    break
                if (fm < 0.0) == (fa < 0.0):
                    ua, fa = um, fm
                else:
                    ub = um
        if not found_any:
            missing.append(xv)
    return ContourResult(points=tuple(points), no_crossing=tuple(missing))


@dataclass(frozen=True)
class ScenarioPoint:
    """Link budget and detection outcome at one radar range."""

    range_km: float
    weather: Weather
    eta_atm: float
    eta_x: float
    eta_r: float
    eta_t: float
    ratio: float
    rm: float


@dataclass(frozen=True)
class ScenarioLine:
    weather: Weather
    points: tuple[ScenarioPoint, ...]


def compose_link(
    geometry: GeometryInputs, eta_atm: float, eta_det: float, eta_idler: float
) -> ComposedEfficiencies:
    """Compose the scenario link budget at a known atmospheric transmission."""
    if geometry.range_m is None:
        raise DomainError("geometry range required to compose a link budget")
    factors = LinkEfficiencies(
        eta_atm=eta_atm,
        eta_det=eta_det,
        eta_aperture=aperture_fraction(geometry.detector_area_m2, geometry.rcs_m2),
        eta_return=geometric_return(geometry.rcs_m2, geometry.range_m),
        eta_idler=eta_idler,
    )
    return compose_efficiencies(factors)


def scenario_line(
    ranges_km: Sequence[float],
    weather: Weather,
    geometry: GeometryInputs,
    background: RadiationBackground,
    protocol: Protocol,
    *,
    atmosphere: AtmosphereModel = DEFAULT_ATMOSPHERE,
    eta_det: float = 0.5,
    eta_idler: float = 1.0,
    signal: SignalModel = SignalModel(mu=1e-5, modes=100),
    p_err: float = P_ERR_2SIGMA,
    undetectable_threshold: float = DEFAULT_UNDETECTABLE_THRESHOLD,
) -> ScenarioLine:
    """Evaluate the full link budget and rm along a list of radar ranges.

    For each range the one-way transmission, geometric return fraction and
    composed efficiencies are derived, then rm is computed at the requested
    detection level with the shared background.  Output is ordered by range;
    the range list must be strictly increasing.
    """
    ranges = [float(r) for r in ranges_km]
    if any(b <= a for a, b in zip(ranges, ranges[1:])):
        raise DomainError("scenario ranges must be strictly increasing")
    points = []
    for r_km in ranges:
        eta_atm = atmosphere_attenuation(r_km, weather, atmosphere)
        point_geometry = dataclasses.replace(geometry, range_m=r_km * 1000.0)
        composed = compose_link(point_geometry, eta_atm, eta_det, eta_idler)
        result = rm_ratio(
            protocol,
            p_err,
            eta_t=composed.eta_t,
            eta_r=composed.eta_r,
            eta_anc=composed.eta_anc,
            signal=signal,
            background=background,
            undetectable_threshold=undetectable_threshold,
        )
        points.append(
            ScenarioPoint(
                range_km=r_km,
                weather=weather,
                eta_atm=eta_atm,
                eta_x=geometric_return(geometry.rcs_m2, r_km * 1000.0),
                eta_r=composed.eta_r,
                eta_t=composed.eta_t,
                ratio=composed.ratio,
                rm=result.rm,
            )
        )
    return ScenarioLine(weather=weather, points=tuple(points))
