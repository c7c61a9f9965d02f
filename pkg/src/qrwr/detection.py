"""Signal-to-noise models, error probabilities and the measurement-count ratio.

Three detection models are implemented:

* direct photon counting at the target ("who is illuminating me?"):
  SNR_T = sqrt(K) * eta_T * N_S / sqrt(d2N_S + 2 d2N_B), usually taken in
  the background-dominated approximation sqrt(K) eta_T N_S / sqrt(2 d2N_B);
* the single-photon pair-covariance radar receiver:
  SNR_SP = sqrt(K) * sqrt(eta_R eta_anc N_S) / sqrt(2 d2N_B);
* the Gaussian-state phase-conjugate radar receiver:
  SNR_GS = K * eta_R eta_anc N_S / (2 sqrt(d2N_B)), linear in K.

All three map to an equal-prior discrimination error through
p_err = erfc(sqrt(SNR/8)) / 2, and each can be inverted for the real-valued
trial count K that reaches a target error probability.  The ratio
R_M = K_target / K_radar decides who detects whom first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy import special

from .background import RadiationBackground, background_variance
from .constants import DEFAULT_UNDETECTABLE_THRESHOLD
from .errors import DomainError, InfeasibleError


class Protocol(Enum):
    TARGET_DIRECT = "direct"
    QI_SINGLE_PHOTON = "sp"
    QI_GAUSSIAN = "gs"


class Regime(Enum):
    QRWR_ADVANTAGE = "qrwr_advantage"  # rm < 1: target sees the radar first
    RADAR_ADVANTAGE = "radar_advantage"
    PRACTICALLY_UNDETECTABLE = "practically_undetectable"


@dataclass(frozen=True)
class SignalModel:
    """Probe signal: mu photons per mode over a given number of modes."""

    mu: float
    modes: int = 1

    def __post_init__(self) -> None:
        if self.mu < 0.0:
            raise DomainError(f"photons per mode must be >= 0, got {self.mu}")
        if self.modes < 1:
            raise DomainError(f"mode count must be >= 1, got {self.modes}")

    @property
    def total(self) -> float:
        """Total mean photon number N_S = M * mu."""
        return self.mu * self.modes


@dataclass(frozen=True)
class DetectionResult:
    protocol: Protocol
    snr: float
    p_err: float
    trials: float


@dataclass(frozen=True)
class RmResult:
    """Trial counts at equal error probability and their ratio."""

    k_target: float
    k_radar: float
    rm: float
    regime: Regime


def _check_var_bg(var_bg: float, signal_strength: float) -> None:
    if var_bg < 0.0:
        raise DomainError(f"background variance must be >= 0, got {var_bg}")
    if var_bg == 0.0 and signal_strength != 0.0:
        raise DomainError("zero background variance with nonzero signal is singular")


def snr_target(
    k: float,
    eta_t: float,
    signal: SignalModel,
    var_bg: float,
    *,
    var_signal: float | None = None,
    approximate: bool = True,
) -> float:
    """Direct-detection SNR at the target after k repeated measurements.

    The approximate form drops the detected-signal variance from the noise;
    the exact form includes it, defaulting to Poisson statistics
    (var_signal = eta_t * N_S) when not given explicitly.
    """
    if k < 0.0:
        raise DomainError(f"trial count must be >= 0, got {k}")
    detected = eta_t * signal.total
    _check_var_bg(var_bg, detected)
    if k == 0.0 or detected == 0.0:
        return 0.0
    if approximate:
        noise = 2.0 * var_bg
    else:
        if var_signal is None:
            var_signal = detected
        if var_signal < 0.0:
            raise DomainError(f"signal variance must be >= 0, got {var_signal}")
        noise = var_signal + 2.0 * var_bg
    return math.sqrt(k) * detected / math.sqrt(noise)


def snr_sp(
    k: float, eta_r: float, eta_anc: float, signal: SignalModel, var_bg: float
) -> float:
    """Pair-covariance SNR of the single-photon radar receiver."""
    if k < 0.0:
        raise DomainError(f"trial count must be >= 0, got {k}")
    pair_rate = eta_r * eta_anc * signal.total
    _check_var_bg(var_bg, pair_rate)
    if k == 0.0 or pair_rate == 0.0:
        return 0.0
    return math.sqrt(k * pair_rate) / math.sqrt(2.0 * var_bg)


def snr_gs(
    k: float, eta_r: float, eta_anc: float, signal: SignalModel, var_bg: float
) -> float:
    """Phase-conjugate-receiver SNR of the Gaussian-state radar, linear in k."""
    if k < 0.0:
        raise DomainError(f"trial count must be >= 0, got {k}")
    pair_rate = eta_r * eta_anc * signal.total
    _check_var_bg(var_bg, pair_rate)
    if k == 0.0 or pair_rate == 0.0:
        return 0.0
    return k * pair_rate / (2.0 * math.sqrt(var_bg))


def error_probability(snr: float) -> float:
    """Equal-prior discrimination error, erfc(sqrt(snr/8)) / 2.

    Strictly decreasing in snr; 0.5 at snr = 0.
    """
    if snr < 0.0:
        raise DomainError(f"snr must be >= 0, got {snr}")
    return 0.5 * float(special.erfc(math.sqrt(snr / 8.0)))


def required_snr(p_err: float) -> float:
    """SNR needed to reach a target error probability, 8 * erfcinv(2 p)^2.

    Round-trips with :func:`error_probability` to better than 1e-10 relative
    over the open interval (0, 0.5).
    """
    if not 0.0 < p_err < 0.5:
        raise DomainError(f"target error probability must be in (0, 0.5), got {p_err}")
    return 8.0 * float(special.erfcinv(2.0 * p_err)) ** 2


def required_trials(
    protocol: Protocol,
    p_err_target: float,
    signal: SignalModel,
    var_bg: float,
    *,
    eta_t: float | None = None,
    eta_r: float | None = None,
    eta_anc: float | None = None,
    var_signal: float | None = None,
    approximate: bool = True,
) -> float:
    """Real-valued trial count K solving SNR(K) = required_snr(p_err_target).

    Direct and single-photon SNRs grow as sqrt(K), the Gaussian-state SNR
    linearly in K.  Physical trial counts are ceil(K); the ratio analysis
    keeps K continuous.

    Raises:
        InfeasibleError: if the signal or an efficiency is zero so that no
            finite K can reach the target.
    """
    snr_req = required_snr(p_err_target)
    if protocol is Protocol.TARGET_DIRECT:
        if eta_t is None:
            raise DomainError("direct detection requires eta_t")
        detected = eta_t * signal.total
        _check_var_bg(var_bg, detected)
        if detected == 0.0:
            raise InfeasibleError("zero detected signal: required trials unbounded")
        if approximate:
            noise = 2.0 * var_bg
        else:
            noise = (detected if var_signal is None else var_signal) + 2.0 * var_bg
        return snr_req**2 * noise / detected**2
    if eta_r is None or eta_anc is None:
        raise DomainError(f"{protocol.value} requires eta_r and eta_anc")
    pair_rate = eta_r * eta_anc * signal.total
    _check_var_bg(var_bg, pair_rate)
    if pair_rate == 0.0:
        raise InfeasibleError("zero pair rate: required trials unbounded")
    if protocol is Protocol.QI_SINGLE_PHOTON:
        return snr_req**2 * 2.0 * var_bg / pair_rate
    return snr_req * 2.0 * math.sqrt(var_bg) / pair_rate


def classify_regime(
    rm: float, undetectable_threshold: float = DEFAULT_UNDETECTABLE_THRESHOLD
) -> Regime:
    """Regime boundaries sit exactly at rm = 1 and at the threshold."""
    if rm < 1.0:
        return Regime.QRWR_ADVANTAGE
    if rm >= undetectable_threshold:
        return Regime.PRACTICALLY_UNDETECTABLE
    return Regime.RADAR_ADVANTAGE


def rm_ratio(
    qi_protocol: Protocol,
    p_err_target: float,
    *,
    eta_t: float,
    eta_r: float,
    eta_anc: float,
    signal: SignalModel,
    background: RadiationBackground,
    target_background: RadiationBackground | None = None,
    approximate: bool = True,
    undetectable_threshold: float = DEFAULT_UNDETECTABLE_THRESHOLD,
) -> RmResult:
    """Measurement-count ratio R_M = K_target / K_radar at equal error level.

    The target always counts photons directly with efficiency ``eta_t``; the
    radar side uses ``qi_protocol``.  Passing ``TARGET_DIRECT`` as the radar
    protocol is a diagnostic mode in which the radar side also uses the
    direct formula with ``eta_r`` as its efficiency, so identical parameters
    on both sides give rm = 1 exactly.

    ``background`` is shared by both sides unless ``target_background``
    overrides the target's environment.
    """
    var_radar = background_variance(background)
    var_target = (
        var_radar if target_background is None else background_variance(target_background)
    )
    k_target = required_trials(
        Protocol.TARGET_DIRECT,
        p_err_target,
        signal,
        var_target,
        eta_t=eta_t,
        approximate=approximate,
    )
    if qi_protocol is Protocol.TARGET_DIRECT:
        k_radar = required_trials(
            Protocol.TARGET_DIRECT,
            p_err_target,
            signal,
            var_radar,
            eta_t=eta_r,
            approximate=approximate,
        )
    else:
        k_radar = required_trials(
            qi_protocol,
            p_err_target,
            signal,
            var_radar,
            eta_r=eta_r,
            eta_anc=eta_anc,
        )
    rm = k_target / k_radar
    return RmResult(
        k_target=k_target,
        k_radar=k_radar,
        rm=rm,
        regime=classify_regime(rm, undetectable_threshold),
    )


def rm_background_correction(rm: float, var_bg_target: float, var_bg_radar: float) -> float:
    """Rescale an equal-background single-photon rm to unequal backgrounds.

    K_target scales with the target-side variance and K_radar (SP) with the
    radar-side one, so rm picks up exactly the factor
    var_bg_target / var_bg_radar.  When the variance is proportional to the
    count this reduces to the mean-count ratio.
    """
    if var_bg_target <= 0.0 or var_bg_radar <= 0.0:
        raise DomainError("background variances must be positive")
    return rm * var_bg_target / var_bg_radar
