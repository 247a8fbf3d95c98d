"""Evaluation math: point metrics, ranking expectations, fits, study reports."""

from .fitting import log_fit
from .metrics import BucketedCurve, PointMetrics, bucketed_stats, point_metrics
from .ranking import (RankExpectation, attempted_weights, expected_rank_success,
                      pair_success_probability, poisson_binomial_pmf,
                      poisson_binomial_tail, rank_success_pvalue,
                      study_grid_separations)
from .study import study_summary

__all__ = [
    "BucketedCurve", "PointMetrics", "RankExpectation", "attempted_weights",
    "bucketed_stats", "expected_rank_success", "log_fit",
    "pair_success_probability", "point_metrics", "poisson_binomial_pmf",
    "poisson_binomial_tail", "rank_success_pvalue", "study_grid_separations",
    "study_summary",
]
