"""Expected ranking success under Gaussian point-estimate errors.

If two ages are estimated independently with N(0, sigma^2) errors, the
difference of the two errors has standard deviation sigma*sqrt(2), so a
pair separated by d years is ranked correctly with probability
Phi(d / (sigma*sqrt(2))). Observed success counts are tested against the
implied Poisson-binomial null.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

EXACT_TAIL_MAX_N = 5000


def pair_success_probability(separations_years, sigma_years: float) -> np.ndarray:
    d = np.asarray(separations_years, dtype=np.float64)
    if np.any(d < 0):
        raise ValueError("separations must be >= 0")
    if sigma_years <= 0:
        raise ValueError("sigma_years must be > 0")
    return ndtr(d / (sigma_years * math.sqrt(2.0)))


@dataclass(frozen=True)
class RankExpectation:
    per_pair_success_prob: np.ndarray
    mean_success: float
    mc_sd: float


def expected_rank_success(separations_years, sigma_years: float,
                          mc_runs: int = 2000, seed: int = 0,
                          attempt_weights=None) -> RankExpectation:
    """Expected success rate of independent point estimates on ranked pairs.

    `attempt_weights`, when given, are per-pair probabilities that a reader
    attempts the pair (gives a definite answer); the mean success is then
    the attempt-weighted average, and the Monte Carlo resamples both the
    attempted subset and the outcomes. `mc_sd` is the sd of the mean
    success across `mc_runs` resamples.
    """
    probs = pair_success_probability(separations_years, sigma_years)
    if attempt_weights is None:
        weights = np.ones_like(probs)
    else:
        weights = np.asarray(attempt_weights, dtype=np.float64)
        if weights.shape != probs.shape:
            raise ValueError("attempt_weights must match separations in length")
        if np.any((weights < 0) | (weights > 1)):
            raise ValueError("attempt_weights must lie in [0, 1]")
    mean_success = float(np.sum(weights * probs) / np.sum(weights))

    rng = np.random.default_rng(seed)
    rates = np.empty(mc_runs)
    for run in range(mc_runs):
        attempted = rng.random(probs.size) < weights
        n_att = int(attempted.sum())
        if n_att == 0:
            rates[run] = np.nan
            continue
        successes = rng.random(n_att) < probs[attempted]
        rates[run] = successes.mean()
    return RankExpectation(per_pair_success_prob=probs, mean_success=mean_success,
                           mc_sd=float(np.nanstd(rates)))


def attempted_weights(separations_years, base: float = 0.5, slope: float = 0.04) -> np.ndarray:
    """Attempt-probability model: larger separations are attempted more often.

    Defaults give an overall attempted rate near 70% on pairs spread
    uniformly over 0-10 years of separation.
    """
    d = np.asarray(separations_years, dtype=np.float64)
    return np.clip(base + slope * d, 0.0, 1.0)


def study_grid_separations(pairs_per_bucket: int = 40, bucket_width_years: float = 2.0,
                           n_buckets: int = 5) -> np.ndarray:
    """Deterministic pair separations: evenly spread within each bucket."""
    out = []
    for k in range(n_buckets):
        lo = k * bucket_width_years
        step = bucket_width_years / pairs_per_bucket
        out.append(lo + (np.arange(pairs_per_bucket) + 0.5) * step)
    return np.concatenate(out)


def poisson_binomial_pmf(probs) -> np.ndarray:
    """Exact pmf of the number of successes of independent Bernoulli trials.

    Dynamic-programming convolution, O(n^2); intended for n up to a few
    thousand.
    """
    p = np.asarray(probs, dtype=np.float64)
    if np.any((p < 0) | (p > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    pmf = np.zeros(p.size + 1)
    pmf[0] = 1.0
    for i, pi in enumerate(p):
        pmf[1:i + 2] = pmf[1:i + 2] * (1.0 - pi) + pmf[:i + 1] * pi
        pmf[0] *= (1.0 - pi)
    return pmf


def poisson_binomial_tail(probs, observed: int) -> float:
    """P(X >= observed) for the Poisson-binomial count X.

    Exact for n <= 5000; beyond that a normal approximation with
    continuity correction is used.
    """
    p = np.asarray(probs, dtype=np.float64)
    n = p.size
    if not 0 <= observed <= n:
        raise ValueError(f"observed={observed} outside [0, {n}]")
    if observed == 0:
        return 1.0
    if n <= EXACT_TAIL_MAX_N:
        return float(np.sum(poisson_binomial_pmf(p)[observed:]))
    mu = float(p.sum())
    var = float(np.sum(p * (1.0 - p)))
    if var == 0:
        return 1.0 if observed <= mu else 0.0
    return float(1.0 - ndtr((observed - 0.5 - mu) / math.sqrt(var)))


def rank_success_pvalue(observed_correct: int, separations_years, sigma_years: float) -> float:
    """One-sided tail probability of ranking at least `observed_correct`
    pairs right when both ages are estimated independently."""
    probs = pair_success_probability(separations_years, sigma_years)
    return poisson_binomial_tail(probs, observed_correct)
