"""Run a trained model through a study as a synthetic participant."""

from __future__ import annotations

import numpy as np

from ..models.estimator import AgeEstimator
from ..models.ranker import PairRanker
from ..phantom.dataset import image_array
from .schema import Session
from .service import StudyService

MODES = ("rank_model", "estimate_based")


def model_participant(service: StudyService, study_id: str, model,
                      mode: str, resolution: int | None = None,
                      seed: int = 0) -> Session:
    """Answer every pair of a study with a model; never says not-sure.

    `rank_model` uses a PairRanker's symmetric pair probability;
    `estimate_based` ranks via two independent AgeEstimator point
    estimates and also supplies the requested age estimate.
    Responses flow through the normal session machinery, so they are
    persisted and exported like human ones.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "rank_model" and not isinstance(model, PairRanker):
        raise TypeError("rank_model mode needs a PairRanker")
    if mode == "estimate_based" and not isinstance(model, AgeEstimator):
        raise TypeError("estimate_based mode needs an AgeEstimator")
    res = resolution or model.resolution

    session = service.start_session(study_id, participant_id=f"model:{mode}", seed=seed)
    while True:
        payload = service.next_pair(session.session_id)
        if payload["done"]:
            break
        left = image_array(service.record(payload["left_image_id"]), res, service.data_dir)
        right = image_array(service.record(payload["right_image_id"]), res, service.data_dir)
        age_estimate = None
        if mode == "rank_model":
            pair = np.stack([left, right]).astype(np.float32)[None]
            p_right_older = float(model.predict_proba(pair)[0])
            choice = "right" if p_right_older >= 0.5 else "left"
        else:
            ages = model.predict(np.stack([left, right]).astype(np.float32))
            choice = "right" if ages[1] >= ages[0] else "left"
            estimated = ages[0] if payload["estimate_side"] == "left" else ages[1]
            age_estimate = float(np.clip(estimated, 0.0, 105.0))
        service.submit_response(session.session_id, payload["pair_id"], choice,
                                age_estimate_years=age_estimate)
    return service.store.find_session(session.session_id)[1]
