"""Aggregate study responses into the human-vs-model comparison report."""

from __future__ import annotations

import math

import numpy as np

from ..study.schema import RankResponse, StudyPair
from .metrics import bucketed_stats, point_metrics

RANK_BUCKET_WIDTH_YEARS = 2.0


def _is_correct(response: RankResponse, pair: StudyPair) -> bool:
    if response.choice == "first_older":
        return pair.true_age_a > pair.true_age_b
    if response.choice == "second_older":
        return pair.true_age_b > pair.true_age_a
    return False


def study_summary(responses: list[RankResponse], truths: dict[str, StudyPair]) -> dict:
    """Success rates, per-separation-bucket accuracy and age-estimate metrics.

    Not-sure responses count as failures on the all-pairs rate and are
    excluded from the attempted rate; when nothing was attempted the
    attempted rate is NaN and flagged.
    """
    if not responses:
        raise ValueError("no responses to summarize")
    for r in responses:
        if r.pair_id not in truths:
            raise KeyError(f"response references unknown pair {r.pair_id!r}")

    attempted = [r for r in responses if r.choice != "not_sure"]
    correct = [r for r in attempted if _is_correct(r, truths[r.pair_id])]

    n = len(responses)
    summary: dict = {
        "n_responses": n,
        "n_attempted": len(attempted),
        "n_correct": len(correct),
        "success_all": len(correct) / n,
        "attempted_rate": len(attempted) / n,
        "success_attempted": (len(correct) / len(attempted)) if attempted else math.nan,
        "attempted_undefined": not attempted,
    }

    # ranking accuracy vs separation, 2-year buckets; not-sure counts as 0
    sep_points = [(truths[r.pair_id].separation_years, float(_is_correct(r, truths[r.pair_id])))
                  for r in responses]
    curve = bucketed_stats(sep_points, RANK_BUCKET_WIDTH_YEARS)
    summary["rank_buckets"] = {
        "edges_years": curve.bucket_edges.tolist(),
        "accuracy": curve.means.tolist(),
        "counts": curve.counts.tolist(),
    }

    estimates = [(r.age_estimate_years,
                  truths[r.pair_id].true_age_a if r.estimated_image == "first"
                  else truths[r.pair_id].true_age_b)
                 for r in responses if r.age_estimate_years is not None]
    if estimates:
        preds, ages = zip(*estimates)
        pm = point_metrics(np.array(preds), np.array(ages))
        summary["age_metrics"] = {"mae": pm.mae, "mean_error": pm.mean_error,
                                  "error_sd": pm.error_sd, "r_squared": pm.r_squared,
                                  "n": pm.n}
    else:
        summary["age_metrics"] = None

    per_participant: dict[str, dict] = {}
    by_sid: dict[str, list[RankResponse]] = {}
    for r in responses:
        by_sid.setdefault(r.session_id, []).append(r)
    for sid, rs in sorted(by_sid.items()):
        att = [r for r in rs if r.choice != "not_sure"]
        cor = [r for r in att if _is_correct(r, truths[r.pair_id])]
        per_participant[sid] = {
            "n_responses": len(rs),
            "success_all": len(cor) / len(rs),
            "attempted_rate": len(att) / len(rs),
            "success_attempted": (len(cor) / len(att)) if att else math.nan,
        }
    summary["per_session"] = per_participant
    return summary
