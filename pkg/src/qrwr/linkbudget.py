"""Link-budget efficiency factors and their compositions.

Conventions:

* ``eta_atm``  one-way atmospheric transmission (range/weather dependent)
* ``eta_det``  detector quantum efficiency, assumed equal on both sides
* ``eta_aperture``  fraction of the target's effective area covered by the
  target-side detector (detector area / radar cross section)
* ``eta_return``  probability that a reflected photon comes back into the
  radar aperture, sigma / (4 pi R^2) for a spherical return wave
* ``eta_idler``  efficiency of the retained ancilla path

Compositions:

* target side      eta_T = eta_atm * eta_det * eta_aperture
* radar round trip eta_R = eta_atm^2 * eta_return * eta_det
* ancilla arm      eta_anc = eta_idler * eta_det

so eta_R / eta_T = eta_atm * eta_return / eta_aperture independently of the
detector efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class Weather(Enum):
    GOOD = "good"
    BAD = "bad"


# Default attenuation anchors, (range_km, one-way transmission).
# Good weather is the high-visibility class, bad the low-visibility one.
_DEFAULT_GOOD_ANCHORS = ((25.0, 0.98), (200.0, 0.82))
_DEFAULT_BAD_ANCHORS = ((25.0, 0.50), (200.0, 0.004))


@dataclass(frozen=True)
class AtmosphereModel:
    """Tabulated one-way transmission versus range for each weather class.

    Between anchors the transmission is interpolated log-linearly in range
    (piecewise exponential extinction); beyond the outermost anchor it is
    extrapolated as exp(-alpha r) with alpha fitted to that anchor.  An
    implicit (0 km, 1.0) anchor is always present.
    """

    good: tuple[tuple[float, float], ...] = _DEFAULT_GOOD_ANCHORS
    bad: tuple[tuple[float, float], ...] = _DEFAULT_BAD_ANCHORS

    def __post_init__(self) -> None:
        for weather, anchors in ((Weather.GOOD, self.good), (Weather.BAD, self.bad)):
            if not anchors:
                raise DomainError(f"{weather.value}: at least one anchor required")
            prev_r, prev_t = 0.0, 1.0
            for r, t in anchors:
                if r <= prev_r:
                    raise DomainError(
                        f"{weather.value}: anchor ranges must be strictly increasing"
                    )
                if not 0.0 < t <= prev_t:
                    raise DomainError(
                        f"{weather.value}: transmissions must be in (0, 1] and non-increasing"
                    )
                prev_r, prev_t = r, t

    def anchors(self, weather: Weather) -> tuple[tuple[float, float], ...]:
        return self.good if weather is Weather.GOOD else self.bad

    def extinction_per_km(self, weather: Weather) -> float:
        """Per-km extinction coefficient fitted to the outermost anchor."""
        r, t = self.anchors(weather)[-1]
        return -math.log(t) / r


DEFAULT_ATMOSPHERE = AtmosphereModel()


def atmosphere_attenuation(
    range_km: float,
    weather: Weather,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """One-way atmospheric transmission at the given range.

    Anchor ranges are reproduced exactly; range 0 returns 1.

    Raises:
        DomainError: if range is negative.
    """
    if range_km < 0.0:
        raise DomainError(f"range must be >= 0, got {range_km}")
    if range_km == 0.0:
        return 1.0
    anchors = model.anchors(weather)
    for r, t in anchors:
        if range_km == r:  # anchors are reproduced exactly, no round trip
            return t
    last_r, last_t = anchors[-1]
    if range_km >= last_r:
        return math.exp(-model.extinction_per_km(weather) * range_km)
    prev_r, prev_lnt = 0.0, 0.0
    for r, t in anchors:
        lnt = math.log(t)
        if range_km <= r:
            frac = (range_km - prev_r) / (r - prev_r)
            return math.exp(prev_lnt + frac * (lnt - prev_lnt))
        prev_r, prev_lnt = r, lnt
    raise AssertionError("unreachable")  # pragma: no cover


def geometric_return(rcs_m2: float, range_m: float) -> float:
    """Return fraction sigma / (4 pi R^2) of a spherical reflected wave.

    Clamped to 1 for degenerate near-field geometry (the value is a
    probability).

    Raises:
        DomainError: if either argument is not positive.
    """
    if rcs_m2 <= 0.0:
        raise DomainError(f"radar cross section must be positive, got {rcs_m2}")
    if range_m <= 0.0:
        raise DomainError(f"range must be positive, got {range_m}")
    return min(1.0, rcs_m2 / (4.0 * math.pi * range_m * range_m))


def aperture_fraction(detector_area_m2: float, rcs_m2: float) -> float:
    """Detector area over target effective area, clamped to 1.

    Conditional on the photon hitting the target: the fraction of those
    photons that land on the detector aperture.

    Raises:
        DomainError: if either argument is not positive.
    """
    if detector_area_m2 <= 0.0:
        raise DomainError(f"detector area must be positive, got {detector_area_m2}")
    if rcs_m2 <= 0.0:
        raise DomainError(f"radar cross section must be positive, got {rcs_m2}")
    return min(1.0, detector_area_m2 / rcs_m2)


@dataclass(frozen=True)
class GeometryInputs:
    """Static geometry of a scenario point.

    ``range_m`` may be omitted when the range is supplied separately, as in
    multi-range scenario lines.
    """

    rcs_m2: float = 2.0
    detector_area_m2: float = 0.01
    range_m: float | None = None

    def __post_init__(self) -> None:
        if self.rcs_m2 <= 0.0:
            raise DomainError(f"radar cross section must be positive, got {self.rcs_m2}")
        if self.detector_area_m2 <= 0.0:
            raise DomainError(
                f"detector area must be positive, got {self.detector_area_m2}"
            )
        if self.range_m is not None and self.range_m <= 0.0:
            raise DomainError(f"range must be positive, got {self.range_m}")


@dataclass(frozen=True)
class LinkEfficiencies:
    """The five elementary efficiency factors, each in [0, 1]."""

    eta_atm: float
    eta_det: float
    eta_aperture: float
    eta_return: float
    eta_idler: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta_atm", "eta_det", "eta_aperture", "eta_return", "eta_idler"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class ComposedEfficiencies:
    """Composed target-side, radar round-trip and ancilla efficiencies."""

    eta_t: float
    eta_r: float
    eta_anc: float
    ratio: float  # eta_r / eta_t = eta_atm * eta_return / eta_aperture


def compose_efficiencies(factors: LinkEfficiencies) -> ComposedEfficiencies:
    """Compose the elementary factors into (eta_T, eta_R, eta_anc).

    The ratio eta_R/eta_T is evaluated as eta_atm * eta_return / eta_aperture
    so it stays well defined when the detector efficiency vanishes.
    """
    eta_t = factors.eta_atm * factors.eta_det * factors.eta_aperture
    eta_r = factors.eta_atm**2 * factors.eta_return * factors.eta_det
    eta_anc = factors.eta_idler * factors.eta_det
    if factors.eta_aperture > 0.0:
        ratio = factors.eta_atm * factors.eta_return / factors.eta_aperture
    else:
        ratio = math.inf
    return ComposedEfficiencies(eta_t=eta_t, eta_r=eta_r, eta_anc=eta_anc, ratio=ratio)
