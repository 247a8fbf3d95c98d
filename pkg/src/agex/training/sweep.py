"""Training-set-size sweep: one model per size, identical config otherwise."""

from __future__ import annotations

from dataclasses import replace

from ..phantom.manifest import ManifestRecord
from ..phantom.splits import SplitSpec
from .config import TrainConfig
from .loop import evaluate_mae, split_records, train_age_model


def dataset_size_sweep(config: TrainConfig, manifest: list[ManifestRecord],
                       splits: SplitSpec, sizes: list[int],
                       data_dir=None) -> list[tuple[int, float]]:
    """Test MAE as a function of training-set size. Sizes must ascend and
    fit inside the train split."""
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly ascending")
    n_train = len(split_records(manifest, splits, "train"))
    if sizes[-1] > n_train:
        raise ValueError(f"size {sizes[-1]} exceeds the {n_train}-image train split")
    results = []
    for size in sizes:
        est, _ = train_age_model(replace(config, train_set_size_cap=int(size)),
                                 manifest, splits, data_dir)
        results.append((int(size), evaluate_mae(est, manifest, splits, "test", data_dir)))
    return results
