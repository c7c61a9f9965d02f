"""Brute-force photon-counting simulations used as an empirical oracle.

Counts are sampled from their exact discrete laws rather than Gaussian
surrogates, so these simulations are independent of the erfc error map they
are used to validate:

* a thermal mode is geometric (Bose-Einstein); the total over many modes and
  trials is drawn as a negative binomial, the exact distribution of that sum;
* Poisson backgrounds and Poisson signals are drawn as Poisson totals.

Reproducibility: every shot draws from its own counter-based substream,
Philox keyed by (seed, stream, shot).  Aggregates are therefore bit-identical
for a given configuration regardless of how shots are scheduled across
workers.

Pair-model caveat: the source formulas for the pair-covariance receiver pin
down scaling laws but not the absolute normalization of the covariance
statistic.  The generative model here (per-mode pair number drawn once, then
thinned independently per arm) is the minimal model with the right covariance
structure.  Its intrinsic mean-to-fluctuation ratio equals the analytic
pair-covariance SNR times sqrt(2 * eta_r) in the background-dominated limit,
so absolute agreement holds near eta_r = 0.5 while only scaling laws are
checked elsewhere.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from .background import RadiationBackground, VarianceModel, background_variance
from .detection import SignalModel, error_probability
from .errors import DomainError

_MAX_SHOT_INDEX = 1 << 48


class ThresholdRule(Enum):
    MIDPOINT = "midpoint"
    OPTIMAL = "optimal"


@dataclass(frozen=True)
class McConfig:
    """Configuration of one simulated discrimination experiment.

    ``eta_signal`` is the efficiency applied to the probe on the measured
    arm (the target-side total for direct detection, the radar round trip
    for the pair experiment); ``eta_ancilla`` only matters for the pair
    experiment.
    """

    seed: int
    shots: int
    trials_per_shot: int
    signal: SignalModel
    background: RadiationBackground
    eta_signal: float
    eta_ancilla: float = 1.0
    threshold_rule: ThresholdRule = ThresholdRule.MIDPOINT

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**63:
            raise DomainError(f"seed must be a non-negative 63-bit integer, got {self.seed}")
        if self.shots < 1:
            raise DomainError(f"shots must be >= 1, got {self.shots}")
        if self.shots >= _MAX_SHOT_INDEX:
            raise DomainError("shots exceed the substream index space")
        if self.trials_per_shot < 1:
            raise DomainError(f"trials per shot must be >= 1, got {self.trials_per_shot}")
        for name in ("eta_signal", "eta_ancilla"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class McReport:
    """Empirical outcome of a simulated experiment.

    ``analytic_snr`` is the squared standardized separation of the two count
    distributions (the quantity the erfc error map takes as input);
    ``empirical_snr`` is the mean-to-fluctuation ratio of the measured
    detection statistic, which matches the analytic model's linear SNR
    convention for each experiment.
    """

    empirical_p_err: float
    empirical_p_err_se: float
    empirical_snr: float
    empirical_snr_se: float
    analytic_snr: float
    analytic_p_err: float
    z_score: float
    seed: int
    shots: int


def shot_rng(seed: int, shot: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for one shot, derived from (seed, stream, shot)."""
    key = np.array([seed, (stream << 48) | shot], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw_background_total(
    rng: np.random.Generator, bg: RadiationBackground, trials: int, size=None
):
    """Exact draw of the background total over ``trials`` trials."""
    mu = bg.occupancy
    if mu == 0.0:
        return np.zeros(size, dtype=np.int64) if size is not None else 0
    if bg.variance_model is VarianceModel.POISSON:
        return rng.poisson(trials * bg.modes * mu, size=size)
    # sum of trials * modes independent geometric modes
    return rng.negative_binomial(trials * bg.modes, 1.0 / (1.0 + mu), size=size)


def deflection_snr(cfg: McConfig) -> float:
    """Squared standardized separation of the H0/H1 count totals.

    K * (eta * N_S)^2 / d2N_B(per trial); this is the SNR sense in which the
    erfc map reproduces the midpoint-threshold error in the Gaussian-count
    regime.
    """
    detected = cfg.eta_signal * cfg.signal.total
    var_trial = background_variance(cfg.background)
    if var_trial == 0.0:
        raise DomainError("background variance must be positive")
    return cfg.trials_per_shot * detected**2 / var_trial


def _optimal_threshold(cfg: McConfig) -> float:
    """Exact likelihood-ratio threshold for the direct-counting experiment.

    Both hypotheses have monotone likelihood ratio in the count, so the
    optimal rule is a count threshold at the point where the H1 pmf
    overtakes the H0 pmf.
    """
    k, bg = cfg.trials_per_shot, cfg.background
    mu = bg.occupancy
    lam_sig = cfg.eta_signal * cfg.signal.total * k
    if lam_sig == 0.0:
        return k * bg.modes * mu  # hypotheses identical; any threshold gives 1/2
    if bg.variance_model is VarianceModel.POISSON:
        h0 = stats.poisson(k * bg.modes * mu)
    else:
        h0 = stats.nbinom(k * bg.modes, 1.0 / (1.0 + mu))
    sig = stats.poisson(lam_sig)
    width = 10.0 * math.sqrt(lam_sig) + 10.0
    ks = np.arange(max(0, int(lam_sig - width)), int(lam_sig + width) + 1)
    weights = sig.pmf(ks)

    def h1_pmf(n: int) -> float:
        return float(np.sum(weights * h0.pmf(n - ks)))

    lo = int(h0.mean())
    hi = int(h0.mean() + lam_sig) + 1
    # LR is monotone: bisect for the first count where H1 dominates
    while lo < hi:
        mid = (lo + hi) // 2
        if h1_pmf(mid) >= h0.pmf(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo - 0.5  # decide H1 strictly above


def simulate_direct_detection(cfg: McConfig, stream: int = 0) -> McReport:
    """Simulate the direct photon-counting discrimination experiment.

    Per shot, both hypotheses are realized: background only, and background
    plus a Poisson signal of mean eta * N_S per trial.  The configured
    threshold rule is applied to the count total over all trials and the
    error is averaged over the two equally likely hypotheses.

    ``stream`` selects an independent substream family for callers running
    several experiments under one seed.
    """
    k = cfg.trials_per_shot
    n_b_total = k * cfg.background.modes * cfg.background.occupancy
    lam_sig = cfg.eta_signal * cfg.signal.total * k
    if cfg.threshold_rule is ThresholdRule.OPTIMAL:
        threshold = _optimal_threshold(cfg)
    else:
        threshold = n_b_total + lam_sig / 2.0

    errors = np.empty(cfg.shots)
    n0s = np.empty(cfg.shots)
    n1s = np.empty(cfg.shots)
    for shot in range(cfg.shots):
        rng = shot_rng(cfg.seed, shot, stream)
        n0 = _draw_background_total(rng, cfg.background, k)
        n1 = _draw_background_total(rng, cfg.background, k)
        if lam_sig > 0.0:
            n1 = n1 + rng.poisson(lam_sig)
        err0 = 1.0 if n0 > threshold else 0.0
        err1 = 1.0 if n1 <= threshold else 0.0
        errors[shot] = 0.5 * (err0 + err1)
        n0s[shot] = n0
        n1s[shot] = n1

    p_hat = float(errors.mean())
    p_se = float(errors.std(ddof=1) / math.sqrt(cfg.shots)) if cfg.shots > 1 else 0.0

    # separation over root-sum-variance estimator of the analytic count SNR
    var0 = float(n0s.var(ddof=1)) if cfg.shots > 1 else 0.0
    var1 = float(n1s.var(ddof=1)) if cfg.shots > 1 else 0.0
    pooled = var0 + var1
    if pooled > 0.0:
        snr_hat = float((n1s.mean() - n0s.mean()) / math.sqrt(pooled))
        m4 = float(((n0s - n0s.mean()) ** 4).mean() + ((n1s - n1s.mean()) ** 4).mean())
        var_of_pooled = max(m4 - var0**2 - var1**2, 0.0) / cfg.shots
        snr_se = math.sqrt(
            2.0 / cfg.shots + snr_hat**2 * var_of_pooled / (4.0 * pooled**2)
        )
    else:
        snr_hat, snr_se = 0.0, 0.0

    analytic = deflection_snr(cfg)
    p_analytic = error_probability(analytic)
    z = (p_hat - p_analytic) / p_se if p_se > 0.0 else 0.0
    return McReport(
        empirical_p_err=p_hat,
        empirical_p_err_se=p_se,
        empirical_snr=snr_hat,
        empirical_snr_se=snr_se,
        analytic_snr=analytic,
        analytic_p_err=p_analytic,
        z_score=z,
        seed=cfg.seed,
        shots=cfg.shots,
    )


def _sp_predicted_deflection(cfg: McConfig) -> float:
    """Delta-method mean/sigma of the per-shot sample covariance statistic."""
    n_s = cfg.signal.total
    cov = cfg.eta_signal * cfg.eta_ancilla * n_s
    var1 = cfg.eta_signal * n_s + background_variance(cfg.background)
    var2 = cfg.eta_ancilla * n_s
    if var1 * var2 + cov**2 == 0.0:
        return 0.0
    return math.sqrt(cfg.trials_per_shot) * cov / math.sqrt(var1 * var2 + cov**2)


def simulate_sp_covariance(cfg: McConfig) -> McReport:
    """Simulate the pair-covariance discrimination experiment.

    Per mode and trial a pair number is drawn once (Poisson with the signal's
    per-mode mean), then thinned by eta_signal on the measured arm and
    eta_ancilla on the retained arm; background lands on the measured arm
    only.  The detection statistic is the sample covariance of the two arm
    totals across the shot's trials.  Under the null hypothesis nothing
    returns from the probe, so the measured arm holds background only while
    the retained arm still sees locally generated pairs.
    """
    if cfg.threshold_rule is ThresholdRule.OPTIMAL:
        raise DomainError("likelihood-ratio thresholding is defined for direct counting only")
    k, m = cfg.trials_per_shot, cfg.signal.modes
    mu = cfg.signal.mu
    cov_expected = cfg.eta_signal * cfg.eta_ancilla * cfg.signal.total
    threshold = cov_expected / 2.0

    def sample_cov(x: np.ndarray, y: np.ndarray) -> float:
        return float(((x - x.mean()) * (y - y.mean())).sum() / (len(x) - 1))

    errors = np.empty(cfg.shots)
    stats_h1 = np.empty(cfg.shots)
    for shot in range(cfg.shots):
        rng = shot_rng(cfg.seed, shot)
        pairs = rng.poisson(mu, size=(k, m))
        sig = rng.binomial(pairs, cfg.eta_signal).sum(axis=1)
        anc = rng.binomial(pairs, cfg.eta_ancilla).sum(axis=1)
        n1_meas = sig + _draw_background_total(rng, cfg.background, 1, size=k)
        c1 = sample_cov(n1_meas.astype(float), anc.astype(float))

        pairs0 = rng.poisson(mu, size=(k, m))
        anc0 = rng.binomial(pairs0, cfg.eta_ancilla).sum(axis=1)
        n0_meas = _draw_background_total(rng, cfg.background, 1, size=k)
        c0 = sample_cov(np.asarray(n0_meas, dtype=float), anc0.astype(float))

        err0 = 1.0 if c0 > threshold else 0.0
        err1 = 1.0 if c1 <= threshold else 0.0
        errors[shot] = 0.5 * (err0 + err1)
        stats_h1[shot] = c1

    p_hat = float(errors.mean())
    p_se = float(errors.std(ddof=1) / math.sqrt(cfg.shots)) if cfg.shots > 1 else 0.0
    spread = float(stats_h1.std(ddof=1)) if cfg.shots > 1 else 0.0
    snr_hat = float(stats_h1.mean() / spread) if spread > 0.0 else 0.0
    snr_se = (
        math.sqrt((1.0 + snr_hat**2 / 2.0) / cfg.shots) if cfg.shots > 1 else 0.0
    )

    deflection = _sp_predicted_deflection(cfg)
    analytic = deflection**2
    p_analytic = error_probability(analytic)
    z = (p_hat - p_analytic) / p_se if p_se > 0.0 else 0.0
    return McReport(
        empirical_p_err=p_hat,
        empirical_p_err_se=p_se,
        empirical_snr=snr_hat,
        empirical_snr_se=snr_se,
        analytic_snr=analytic,
        analytic_p_err=p_analytic,
        z_score=z,
        seed=cfg.seed,
        shots=cfg.shots,
    )


def validate_erfc(snr_grid: list[float], cfg: McConfig) -> list[McReport]:
    """Empirically check the erfc error map on a grid of SNR values.

    For each requested SNR the direct-detection experiment is reconfigured so
    that its squared standardized separation equals that SNR, then simulated
    and compared against erfc(sqrt(SNR/8))/2.  The count means must be large
    enough for the Gaussian-count regime (mu_B * K >= 100).

    Grid item i draws from substream family (seed, stream=i), so reports are
    independent across the grid and reproducible individually.
    """
    if not snr_grid:
        raise DomainError("empty SNR grid")
    if any(s <= 0.0 for s in snr_grid):
        raise DomainError("all SNR values must be > 0")
    mu_k = cfg.background.occupancy * cfg.trials_per_shot
    if mu_k < 100.0:
        raise DomainError(
            "Gaussian-count regime requires occupancy * trials_per_shot >= 100, "
            f"got {mu_k:g}"
        )
    var_trial = background_variance(cfg.background)
    reports = []
    for index, snr in enumerate(snr_grid):
        detected = math.sqrt(snr * var_trial / cfg.trials_per_shot)
        derived = dataclasses.replace(
            cfg,
            signal=SignalModel(mu=detected, modes=1),
            eta_signal=1.0,
        )
        reports.append(simulate_direct_detection(derived, stream=index))
    return reports
