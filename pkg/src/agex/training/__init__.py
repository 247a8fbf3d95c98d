"""Training loops, schedules and dataset-size sweeps.

The manifest-level entry points (train_age_model, ...) are imported
lazily: they depend on the estimators, which in turn use the schedule and
history primitives defined here.
"""

from .config import TrainConfig
from .history import HISTORY_COLUMNS, EpochRecord, TrainHistory
from .pairs import PairSample, sample_pairs
from .plateau import PlateauScheduler

_LAZY = {
    "evaluate_mae": "loop",
    "pair_arrays": "loop",
    "predict_split": "loop",
    "split_records": "loop",
    "train_age_model": "loop",
    "train_ranking_model": "loop",
    "dataset_size_sweep": "sweep",
}

__all__ = [
    "HISTORY_COLUMNS", "EpochRecord", "PairSample", "PlateauScheduler",
    "TrainConfig", "TrainHistory", "sample_pairs", *sorted(_LAZY),
]


def __getattr__(name):
    if name in _LAZY:
        import importlib
        module = importlib.import_module(f".{_LAZY[name]}", __name__)
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
