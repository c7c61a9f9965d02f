"""Thermal background photon field.

The background seen by both the radar receiver and the target-side detector
is modelled as M_B independent modes, each populated with a mean per-mode
occupancy.  The occupancy defaults to the blackbody (Bose-Einstein) value
for the configured frequency and temperature, and the count variance can be
evaluated either as Poisson or as exact multimode-thermal statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .constants import BOLTZMANN_K, MICROWAVE_REFERENCE_HZ, PLANCK_H, SOLAR_SURFACE_K
from .errors import DomainError


class VarianceModel(Enum):
    """Statistical model used for the background count variance."""

    POISSON = "poisson"
    THERMAL_MULTIMODE = "thermal"


def planck_occupancy(frequency_hz: float, temperature_k: float) -> float:
    """Mean photon number per mode of a blackbody field, 1/(exp(h nu/kT) - 1).

    Approaches kT/(h nu) in the Rayleigh-Jeans limit h nu << kT.  For
    h nu/kT beyond ~745 the occupancy underflows to 0.0 in double precision.

    Raises:
        DomainError: if frequency or temperature is not positive.
    """
    if frequency_hz <= 0.0:
        raise DomainError(f"frequency must be positive, got {frequency_hz}")
    if temperature_k <= 0.0:
        raise DomainError(f"temperature must be positive, got {temperature_k}")
    x = PLANCK_H * frequency_hz / (BOLTZMANN_K * temperature_k)
    if x > 700.0:
        # expm1 would overflow; 1/(e^x - 1) ~ e^-x to better than e^-x relative
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class RadiationBackground:
    """Background field description.

    ``occupancy_override`` replaces the blackbody per-mode mean when set;
    this is how abstract scenarios such as "N_B = 1e4 in a single mode"
    are expressed.
    """

    temperature_k: float = SOLAR_SURFACE_K
    frequency_hz: float = MICROWAVE_REFERENCE_HZ
    modes: int = 1
    occupancy_override: float | None = None
    variance_model: VarianceModel = VarianceModel.THERMAL_MULTIMODE

    def __post_init__(self) -> None:
        if self.temperature_k <= 0.0:
            raise DomainError(f"temperature must be positive, got {self.temperature_k}")
        if self.frequency_hz <= 0.0:
            raise DomainError(f"frequency must be positive, got {self.frequency_hz}")
        if self.modes < 1:
            raise DomainError(f"mode count must be >= 1, got {self.modes}")
        if self.occupancy_override is not None and self.occupancy_override < 0.0:
            raise DomainError(
                f"occupancy override must be >= 0, got {self.occupancy_override}"
            )

    @property
    def occupancy(self) -> float:
        """Mean photon number per mode."""
        if self.occupancy_override is not None:
            return self.occupancy_override
        return planck_occupancy(self.frequency_hz, self.temperature_k)


def background_counts(bg: RadiationBackground) -> float:
    """Total mean background count over all modes, M_B * mu_B."""
    return bg.modes * bg.occupancy


def background_variance(bg: RadiationBackground) -> float:
    """Variance of the total background count.

    Poisson: M_B * mu_B.  Multimode thermal: M_B * mu_B * (1 + mu_B), the
    sum of M_B independent Bose-Einstein modes.  The thermal variance is
    never below the Poisson one, with equality only as mu_B -> 0.
    """
    mu = bg.occupancy
    if bg.variance_model is VarianceModel.POISSON:
        return bg.modes * mu
    return bg.modes * mu * (1.0 + mu)
