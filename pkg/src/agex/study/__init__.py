"""Reader-study backend: scheduling, sessions, persistence, HTTP API."""

from .create import create_study
from .participant import model_participant
from .schema import RankResponse, Session, StudyDefinition, StudyPair
from .service import (RESPONSES_COLUMNS, TRUTHS_COLUMNS, ConflictError,
                      StudyService)
from .store import StudyStore

__all__ = [
    "ConflictError", "RESPONSES_COLUMNS", "RankResponse", "Session",
    "StudyDefinition", "StudyPair", "StudyService", "StudyStore",
    "TRUTHS_COLUMNS", "create_study", "model_participant",
]


def create_app(service: StudyService):
    from .api import create_app as _create_app
    return _create_app(service)
