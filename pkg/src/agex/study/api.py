"""HTTP surface of the study service.

Routes (exact):
  POST /studies                      create a study
  POST /studies/{id}/sessions       start a participant session
  GET  /sessions/{id}/next           current pair payload or done marker
  POST /sessions/{id}/responses     submit one response
  GET  /studies/{id}/export          responses CSV
  GET  /studies/{id}/truths          ground-truth CSV (admin bearer token)
  GET  /images/{image_id}            PNG bytes

The truths endpoint requires `Authorization: Bearer $AGEX_ADMIN_TOKEN`;
with the variable unset it always refuses.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Header, HTTPException, Response
from pydantic import BaseModel, Field

from .service import ConflictError, StudyService

ADMIN_TOKEN_ENV = "AGEX_ADMIN_TOKEN"


class CreateStudyRequest(BaseModel):
    pairs_per_bucket: int = 40
    bucket_width_years: float = 2.0
    n_buckets: int = 5
    seed: int = 0
    study_id: str | None = None


class StartSessionRequest(BaseModel):
    participant_id: str = Field(min_length=1)
    seed: int | None = None


class SubmitResponseRequest(BaseModel):
    pair_id: str
    choice: str  # left | right | not_sure
    age_estimate_years: float | None = Field(default=None, ge=0, le=105)
    elapsed_ms: int = Field(default=0, ge=0)


def create_app(service: StudyService) -> FastAPI:
    app = FastAPI(title="agex study service")

    @app.post("/studies")
    def create_study(req: CreateStudyRequest):
        try:
            definition = service.create_study(
                pairs_per_bucket=req.pairs_per_bucket,
                bucket_width_years=req.bucket_width_years,
                n_buckets=req.n_buckets, seed=req.seed, study_id=req.study_id)
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"study_id": definition.study_id, "n_pairs": len(definition.pairs),
                "pairs_per_bucket": definition.pairs_per_bucket,
                "n_buckets": definition.n_buckets}

    @app.post("/studies/{study_id}/sessions")
    def start_session(study_id: str, req: StartSessionRequest):
        try:
            session = service.start_session(study_id, req.participant_id, req.seed)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"session_id": session.session_id, "total": len(session.pair_order)}

    @app.get("/sessions/{session_id}/next")
    def next_pair(session_id: str):
        try:
            payload = service.next_pair(session_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if not payload["done"]:
            payload["left_image_url"] = f"/images/{payload['left_image_id']}"
            payload["right_image_url"] = f"/images/{payload['right_image_id']}"
        return payload

    @app.post("/sessions/{session_id}/responses")
    def submit_response(session_id: str, req: SubmitResponseRequest):
        try:
            return service.submit_response(session_id, req.pair_id, req.choice,
                                           age_estimate_years=req.age_estimate_years,
                                           elapsed_ms=req.elapsed_ms)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/studies/{study_id}/export")
    def export_responses(study_id: str):
        try:
            csv_text = service.export_responses_csv(study_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return Response(content=csv_text, media_type="text/csv")

    @app.get("/studies/{study_id}/truths")
    def export_truths(study_id: str, authorization: str | None = Header(default=None)):
        token = os.environ.get(ADMIN_TOKEN_ENV)
        if not token or authorization != f"Bearer {token}":
            raise HTTPException(status_code=403, detail="admin token required")
        try:
            csv_text = service.truths_csv(study_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return Response(content=csv_text, media_type="text/csv")

    @app.get("/images/{image_id}")
    def image(image_id: str):
        try:
            data = service.image_png(image_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return Response(content=data, media_type="image/png")

    return app
