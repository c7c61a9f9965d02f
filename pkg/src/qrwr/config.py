"""Scenario configuration: strict INI-style parsing, defaults and hashing.

The format is flat key/value pairs grouped into sections.  Parsing is
fail-closed: unknown sections or keys, duplicate keys, type mismatches and
out-of-range values are all rejected with their location, so a typo can
never silently fall back to a default physics parameter.

An empty file yields the documented default scenario (solar-temperature
X-band background, 2 m^2 cross section, 10x10 cm detector at 0.5 quantum
efficiency, two-sigma detection level).
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import io
from dataclasses import dataclass
from typing import Any, Callable

from .background import RadiationBackground, VarianceModel
from .constants import DEFAULT_UNDETECTABLE_THRESHOLD, P_ERR_2SIGMA
from .detection import Protocol, SignalModel
from .errors import ConfigError
from .linkbudget import AtmosphereModel, GeometryInputs, Weather
from .montecarlo import McConfig, ThresholdRule
from .sweep import Axis, PointScenario, Quantity, SweepSpec


@dataclass(frozen=True)
class SweepSettings:
    x_param: str = "n_s"
    x_min: float = 1e-4
    x_max: float = 10.0
    x_points: int = 25
    x_scale: str = "log"
    y_param: str = "eta_ratio"
    y_min: float = 1e-8
    y_max: float = 1.0
    y_points: int = 25
    y_scale: str = "log"
    quantity: Quantity = Quantity.RM
    eta_t: float = 1e-4
    eta_anc: float = 0.8
    eta_ratio: float = 1.0  # fixed ratio used when neither axis binds eta_r
    trials: float = 1.0


@dataclass(frozen=True)
class McSettings:
    experiment: str = "erfc"  # direct | sp | erfc
    seed: int = 0
    shots: int = 20000
    trials_per_shot: int = 1000
    threshold_rule: ThresholdRule = ThresholdRule.MIDPOINT
    snr_grid: tuple[float, ...] = (1.0, 4.0, 8.0, 16.0)
    eta_signal: float = 1.0
    eta_ancilla: float = 0.8


@dataclass(frozen=True)
class ScenarioConfig:
    background: RadiationBackground = RadiationBackground()
    target_background: RadiationBackground | None = None
    signal: SignalModel = SignalModel(mu=1e-5, modes=100)
    eta_det: float = 0.5
    eta_idler: float = 1.0
    geometry: GeometryInputs = GeometryInputs()
    atmosphere: AtmosphereModel = AtmosphereModel()
    protocol: Protocol = Protocol.QI_SINGLE_PHOTON
    p_err: float = P_ERR_2SIGMA
    undetectable_threshold: float = DEFAULT_UNDETECTABLE_THRESHOLD
    approximate: bool = True
    range_km: float = 25.0
    weather: Weather = Weather.GOOD
    sweep: SweepSettings = SweepSettings()
    scenario_ranges_km: tuple[float, ...] = (25.0, 50.0, 75.0, 100.0, 125.0, 150.0, 175.0, 200.0)
    scenario_weather: str = "both"  # good | bad | both
    mc: McSettings = McSettings()


DEFAULT_CONFIG = ScenarioConfig()


def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    value = int(text)
    return value


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    return tuple(float(part) for part in items)


def _parse_anchors(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        r_text, _, t_text = part.partition(":")
        if not t_text:
            raise ValueError(f"anchor must look like 'range_km:transmission', got {part!r}")
        pairs.append((float(r_text), float(t_text)))
    if not pairs:
        raise ValueError("at least one anchor required")
    return tuple(pairs)


def _enum_parser(enum_cls):
    def parse(text: str):
        lowered = text.strip().lower()
        for member in enum_cls:
            if member.value == lowered:
                return member
        options = ", ".join(m.value for m in enum_cls)
        raise ValueError(f"expected one of {options}, got {text!r}")

    return parse


def _choice_parser(*choices: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        lowered = text.strip().lower()
        if lowered not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}, got {text!r}")
        return lowered

    return parse


# section -> key -> parser; None results are allowed only where noted below.
_SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "background": {
        "temperature_k": _parse_float,
        "frequency_hz": _parse_float,
        "modes": _parse_int,
        "occupancy": _parse_float,
        "variance_model": _enum_parser(VarianceModel),
    },
    "target_background": {
        "temperature_k": _parse_float,
        "frequency_hz": _parse_float,
        "modes": _parse_int,
        "occupancy": _parse_float,
        "variance_model": _enum_parser(VarianceModel),
    },
    "signal": {
        "photons_per_mode": _parse_float,
        "modes": _parse_int,
    },
    "link": {
        "detector_efficiency": _parse_float,
        "idler_efficiency": _parse_float,
    },
    "geometry": {
        "rcs_m2": _parse_float,
        "detector_area_m2": _parse_float,
    },
    "atmosphere": {
        "good": _parse_anchors,
        "bad": _parse_anchors,
    },
    "detection": {
        "protocol": _enum_parser(Protocol),
        "p_err": _parse_float,
        "undetectable_threshold": _parse_float,
        "approximate": _parse_bool,
    },
    "point": {
        "range_km": _parse_float,
        "weather": _enum_parser(Weather),
    },
    "sweep": {
        "x_param": str.strip,
        "x_min": _parse_float,
        "x_max": _parse_float,
        "x_points": _parse_int,
        "x_scale": _choice_parser("log", "linear"),
        "y_param": str.strip,
        "y_min": _parse_float,
        "y_max": _parse_float,
        "y_points": _parse_int,
        "y_scale": _choice_parser("log", "linear"),
        "quantity": _enum_parser(Quantity),
        "eta_t": _parse_float,
        "eta_anc": _parse_float,
        "eta_ratio": _parse_float,
        "trials": _parse_float,
    },
    "scenario": {
        "ranges_km": _parse_float_list,
        "weather": _choice_parser("good", "bad", "both"),
    },
    "mc": {
        "experiment": _choice_parser("direct", "sp", "erfc"),
        "seed": _parse_int,
        "shots": _parse_int,
        "trials_per_shot": _parse_int,
        "threshold_rule": _enum_parser(ThresholdRule),
        "snr_grid": _parse_float_list,
        "eta_signal": _parse_float,
        "eta_ancilla": _parse_float,
    },
}


def _read_sections(text: str) -> dict[str, dict[str, Any]]:
    parser = configparser.ConfigParser(strict=True, interpolation=None)
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in section [{exc.section}]") from exc
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc

    values: dict[str, dict[str, Any]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            try:
                values[section][key] = _SCHEMA[section][key](raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from exc
    return values


def _build_background(
    section: dict[str, Any], base: RadiationBackground
) -> RadiationBackground:
    return RadiationBackground(
        temperature_k=section.get("temperature_k", base.temperature_k),
        frequency_hz=section.get("frequency_hz", base.frequency_hz),
        modes=section.get("modes", base.modes),
        occupancy_override=section.get("occupancy", base.occupancy_override),
        variance_model=section.get("variance_model", base.variance_model),
    )


def parse_config(text: str) -> ScenarioConfig:
    """Parse configuration text into a fully validated ScenarioConfig.

    Raises:
        ConfigError: with the offending section/key for any unknown,
            duplicate, ill-typed or out-of-range entry.
    """
    values = _read_sections(text)
    d = DEFAULT_CONFIG
    try:
        background = _build_background(values.get("background", {}), d.background)
        target_background = (
            _build_background(values["target_background"], background)
            if "target_background" in values
            else None
        )
        signal_sec = values.get("signal", {})
        signal = SignalModel(
            mu=signal_sec.get("photons_per_mode", d.signal.mu),
            modes=signal_sec.get("modes", d.signal.modes),
        )
        link = values.get("link", {})
        eta_det = link.get("detector_efficiency", d.eta_det)
        eta_idler = link.get("idler_efficiency", d.eta_idler)
        for name, value in (("detector_efficiency", eta_det), ("idler_efficiency", eta_idler)):
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"[link] {name}: must be in [0, 1], got {value}")
        geometry_sec = values.get("geometry", {})
        geometry = GeometryInputs(
            rcs_m2=geometry_sec.get("rcs_m2", d.geometry.rcs_m2),
            detector_area_m2=geometry_sec.get("detector_area_m2", d.geometry.detector_area_m2),
        )
        atm_sec = values.get("atmosphere", {})
        atmosphere = AtmosphereModel(
            good=atm_sec.get("good", d.atmosphere.good),
            bad=atm_sec.get("bad", d.atmosphere.bad),
        )
        det = values.get("detection", {})
        p_err = det.get("p_err", d.p_err)
        if not 0.0 < p_err < 0.5:
            raise ConfigError(f"[detection] p_err: must be in (0, 0.5), got {p_err}")
        threshold = det.get("undetectable_threshold", d.undetectable_threshold)
        if threshold <= 1.0:
            raise ConfigError(
                f"[detection] undetectable_threshold: must exceed 1, got {threshold}"
            )
        point = values.get("point", {})
        range_km = point.get("range_km", d.range_km)
        if range_km <= 0.0:
            raise ConfigError(f"[point] range_km: must be positive, got {range_km}")
        sweep = SweepSettings(**{**dataclasses.asdict(d.sweep), **values.get("sweep", {})})
        scenario_sec = values.get("scenario", {})
        ranges = scenario_sec.get("ranges_km", d.scenario_ranges_km)
        if any(b <= a for a, b in zip(ranges, ranges[1:])) or (ranges and ranges[0] <= 0.0):
            raise ConfigError("[scenario] ranges_km: must be positive and strictly increasing")
        mc = McSettings(**{**dataclasses.asdict(d.mc), **values.get("mc", {})})
        if mc.shots < 1 or mc.trials_per_shot < 1:
            raise ConfigError("[mc] shots and trials_per_shot must be >= 1")
        return ScenarioConfig(
            background=background,
            target_background=target_background,
            signal=signal,
            eta_det=eta_det,
            eta_idler=eta_idler,
            geometry=geometry,
            atmosphere=atmosphere,
            protocol=det.get("protocol", d.protocol),
            p_err=p_err,
            undetectable_threshold=threshold,
            approximate=det.get("approximate", d.approximate),
            range_km=range_km,
            weather=point.get("weather", d.weather),
            sweep=sweep,
            scenario_ranges_km=tuple(ranges),
            scenario_weather=scenario_sec.get("weather", d.scenario_weather),
            mc=mc,
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        # domain errors from the value objects carry their own message
        raise ConfigError(str(exc)) from exc


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (Protocol, Weather, VarianceModel, Quantity, ThresholdRule)):
        return value.value
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ", ".join(f"{r:g}:{t:g}" for r, t in value)
        return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
    return str(value)


def serialize_config(cfg: ScenarioConfig) -> str:
    """Canonical text form; parsing it back yields an equal config."""
    out = io.StringIO()

    def write_section(name: str, items: list[tuple[str, Any]]) -> None:
        out.write(f"[{name}]\n")
        for key, value in items:
            if value is None:
                continue
            out.write(f"{key} = {_format_value(value)}\n")
        out.write("\n")

    bg = cfg.background
    write_section(
        "background",
        [
            ("temperature_k", bg.temperature_k),
            ("frequency_hz", bg.frequency_hz),
            ("modes", bg.modes),
            ("occupancy", bg.occupancy_override),
            ("variance_model", bg.variance_model),
        ],
    )
    if cfg.target_background is not None:
        tb = cfg.target_background
        write_section(
            "target_background",
            [
                ("temperature_k", tb.temperature_k),
                ("frequency_hz", tb.frequency_hz),
                ("modes", tb.modes),
                ("occupancy", tb.occupancy_override),
                ("variance_model", tb.variance_model),
            ],
        )
    write_section(
        "signal",
        [("photons_per_mode", cfg.signal.mu), ("modes", cfg.signal.modes)],
    )
    write_section(
        "link",
        [("detector_efficiency", cfg.eta_det), ("idler_efficiency", cfg.eta_idler)],
    )
    write_section(
        "geometry",
        [("rcs_m2", cfg.geometry.rcs_m2), ("detector_area_m2", cfg.geometry.detector_area_m2)],
    )
    write_section(
        "atmosphere",
        [("good", cfg.atmosphere.good), ("bad", cfg.atmosphere.bad)],
    )
    write_section(
        "detection",
        [
            ("protocol", cfg.protocol),
            ("p_err", cfg.p_err),
            ("undetectable_threshold", cfg.undetectable_threshold),
            ("approximate", cfg.approximate),
        ],
    )
    write_section("point", [("range_km", cfg.range_km), ("weather", cfg.weather)])
    s = cfg.sweep
    write_section(
        "sweep",
        [
            ("x_param", s.x_param),
            ("x_min", s.x_min),
            ("x_max", s.x_max),
            ("x_points", s.x_points),
            ("x_scale", s.x_scale),
            ("y_param", s.y_param),
            ("y_min", s.y_min),
            ("y_max", s.y_max),
            ("y_points", s.y_points),
            ("y_scale", s.y_scale),
            ("quantity", s.quantity),
            ("eta_t", s.eta_t),
            ("eta_anc", s.eta_anc),
            ("eta_ratio", s.eta_ratio),
            ("trials", s.trials),
        ],
    )
    write_section(
        "scenario",
        [("ranges_km", cfg.scenario_ranges_km), ("weather", cfg.scenario_weather)],
    )
    m = cfg.mc
    write_section(
        "mc",
        [
            ("experiment", m.experiment),
            ("seed", m.seed),
            ("shots", m.shots),
            ("trials_per_shot", m.trials_per_shot),
            ("threshold_rule", m.threshold_rule),
            ("snr_grid", m.snr_grid),
            ("eta_signal", m.eta_signal),
            ("eta_ancilla", m.eta_ancilla),
        ],
    )
    return out.getvalue()


def config_hash(cfg: ScenarioConfig) -> str:
    """Short stable hash; insensitive to key ordering of the source text."""
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()[:16]


def build_sweep_spec(cfg: ScenarioConfig) -> SweepSpec:
    """Assemble the sweep specification from the configured scenario."""
    s = cfg.sweep
    fixed = PointScenario(
        protocol=cfg.protocol,
        signal=cfg.signal,
        background=cfg.background,
        target_background=cfg.target_background,
        eta_t=s.eta_t,
        eta_r=s.eta_ratio * s.eta_t,
        eta_anc=s.eta_anc,
        p_err=cfg.p_err,
        trials=s.trials,
        approximate=cfg.approximate,
        undetectable_threshold=cfg.undetectable_threshold,
    )
    return SweepSpec(
        x_axis=Axis(s.x_param, s.x_min, s.x_max, s.x_points, s.x_scale),
        y_axis=Axis(s.y_param, s.y_min, s.y_max, s.y_points, s.y_scale),
        fixed=fixed,
        quantity=s.quantity,
    )


def build_mc_config(cfg: ScenarioConfig, seed: int | None = None) -> McConfig:
    """Assemble the Monte Carlo configuration; ``seed`` overrides [mc] seed."""
    return McConfig(
        seed=cfg.mc.seed if seed is None else seed,
        shots=cfg.mc.shots,
        trials_per_shot=cfg.mc.trials_per_shot,
        signal=cfg.signal,
        background=cfg.background,
        eta_signal=cfg.mc.eta_signal,
        eta_ancilla=cfg.mc.eta_ancilla,
        threshold_rule=cfg.mc.threshold_rule,
    )
