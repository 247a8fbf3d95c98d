"""Manifest-level training entry points wrapping the estimators."""

from __future__ import annotations

import numpy as np

from ..models.estimator import AgeEstimator
from ..models.ranker import PairRanker
from ..phantom.dataset import image_array, load_arrays
from ..phantom.manifest import ManifestRecord
from ..phantom.splits import SplitSpec
from .config import TrainConfig
from .history import TrainHistory
from .pairs import PairSample


def split_records(manifest: list[ManifestRecord], splits: SplitSpec,
                  split: str) -> list[ManifestRecord]:
    ids = {"train": splits.train_ids, "val": splits.val_ids, "test": splits.test_ids}[split]
    records = [r for r in manifest if r.image_id in ids]
    if not records:
        raise ValueError(f"split {split!r} selects no manifest records")
    return records


def _capped(records: list[ManifestRecord], cap: int | None, seed: int) -> list[ManifestRecord]:
    if cap is None:
        return records
    if cap > len(records):
        raise ValueError(f"train_set_size_cap={cap} exceeds the {len(records)}-image train split")
    order = np.random.default_rng(seed).permutation(len(records))[:cap]
    return [records[i] for i in sorted(order)]


def _estimator_from_config(config: TrainConfig) -> AgeEstimator:
    return AgeEstimator(head=config.head, resolution=config.resolution,
                        feature_dim=config.feature_dim, base_channels=config.base_channels,
                        n_blocks=config.n_blocks, batch_size=config.batch_size,
                        lr=config.initial_lr, plateau_factor=config.plateau_factor,
                        plateau_patience=config.plateau_patience_epochs,
                        max_epochs=config.max_epochs, seed=config.seed)


def train_age_model(config: TrainConfig, manifest: list[ManifestRecord], splits: SplitSpec,
                    data_dir=None) -> tuple[AgeEstimator, TrainHistory]:
    """Train one age model on the train split, validating on the val split.

    Returns the estimator restored to its lowest-validation-MAE epoch.
    """
    train = _capped(split_records(manifest, splits, "train"), config.train_set_size_cap,
                    config.seed)
    val = split_records(manifest, splits, "val")
    X, y = load_arrays(train, config.resolution, data_dir)
    X_val, y_val = load_arrays(val, config.resolution, data_dir)
    est = _estimator_from_config(config).fit(X, y, X_val, y_val)
    return est, est.history_


def pair_arrays(pairs: list[PairSample], manifest: list[ManifestRecord], resolution: int,
                data_dir=None) -> tuple[np.ndarray, np.ndarray]:
    """Image stacks (N, 2, R, R) and labels for a list of pair samples."""
    by_id = {r.image_id: r for r in manifest}
    needed = {p.image_id_a for p in pairs} | {p.image_id_b for p in pairs}
    cache = {iid: image_array(by_id[iid], resolution, data_dir) for iid in sorted(needed)}
    X = np.stack([np.stack([cache[p.image_id_a], cache[p.image_id_b]]) for p in pairs])
    y = np.array([p.label for p in pairs], dtype=np.float32)
    return X.astype(np.float32), y


def train_ranking_model(config: TrainConfig, pairs: list[PairSample],
                        manifest: list[ManifestRecord],
                        data_dir=None) -> tuple[PairRanker, TrainHistory]:
    """Train the pairwise ranker on sampled pairs (swap-augmented)."""
    if not pairs:
        raise ValueError("no pairs to train on")
    X, y = pair_arrays(pairs, manifest, config.resolution, data_dir)
    ranker = PairRanker(resolution=config.resolution, feature_dim=config.feature_dim,
                        base_channels=config.base_channels, n_blocks=config.n_blocks,
                        batch_size=config.batch_size, lr=config.initial_lr,
                        plateau_factor=config.plateau_factor,
                        plateau_patience=config.plateau_patience_epochs,
                        max_epochs=config.max_epochs, seed=config.seed)
    ranker.fit(X, y)
    return ranker, ranker.history_


def predict_split(est: AgeEstimator, manifest: list[ManifestRecord], splits: SplitSpec,
                  split: str = "test", data_dir=None) -> tuple[np.ndarray, np.ndarray]:
    records = split_records(manifest, splits, split)
    X, y = load_arrays(records, est.resolution, data_dir)
    return est.predict(X), y.astype(np.float64)


def evaluate_mae(est: AgeEstimator, manifest: list[ManifestRecord], splits: SplitSpec,
                 split: str = "test", data_dir=None) -> float:
    preds, truths = predict_split(est, manifest, splits, split, data_dir)
    return float(np.mean(np.abs(preds - truths)))
