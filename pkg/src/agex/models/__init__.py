"""Age-prediction heads, estimators and the pairwise ranking model."""

from .checkpoint import load_model, read_checkpoint, read_checkpoint_meta, write_checkpoint
from .ensemble import ensemble_predict, ensemble_predict_batch
from .estimator import AgeEstimator
from .heads import (AGE_LABELS, HEADS, N_AGE_LABELS, AgeEstimate, RankScore,
                    ensemble_estimate, expectation_age, ordinal_age,
                    ranking_from_estimates, rectified_age)
from .nets import AgeNet, ConvBackbone, RankNet
from .ranker import PairRanker, rank_pair
from .validation import check_ages, check_binary_labels, check_image_batch, check_pair_batch

__all__ = [
    "AGE_LABELS", "HEADS", "N_AGE_LABELS", "AgeEstimate", "AgeEstimator", "AgeNet",
    "ConvBackbone", "PairRanker", "RankNet", "RankScore", "check_ages",
    "check_binary_labels", "check_image_batch", "check_pair_batch",
    "ensemble_estimate", "ensemble_predict", "ensemble_predict_batch",
    "expectation_age", "load_model", "ordinal_age", "rank_pair",
    "ranking_from_estimates", "read_checkpoint", "read_checkpoint_meta",
    "rectified_age", "write_checkpoint",
]
