"""Age estimator with a scikit-learn surface around the torch nets."""

from __future__ import annotations

import copy
import math

import numpy as np
import torch
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError
from torch import nn

from ..training.history import EpochRecord, TrainHistory
from ..training.plateau import PlateauScheduler
from .checkpoint import read_checkpoint, write_checkpoint
from .heads import AgeEstimate, N_AGE_LABELS
from .nets import AgeNet
from .validation import check_ages, check_image_batch


def _iter_batches(n: int, batch_size: int, rng: np.random.Generator | None = None):
    idx = np.arange(n) if rng is None else rng.permutation(n)
    for start in range(0, n, batch_size):
        yield idx[start:start + batch_size]


class AgeEstimator(BaseEstimator, RegressorMixin):
    """CNN age regressor with a configurable prediction head.

    fit(X, y) trains with Adam + reduce-on-plateau, keeping the weights of
    the epoch with the lowest validation MAE. X is a (N, R, R) stack of
    [0, 1] grayscale images, y the ages in years. When no explicit
    validation set is passed, `val_fraction` of the training data is
    held out.
    """

    def __init__(self, head: str = "regression", resolution: int = 64,
                 feature_dim: int = 128, base_channels: int = 16, n_blocks: int = 4,
                 batch_size: int = 64, lr: float = 1e-3, plateau_factor: float = 0.5,
                 plateau_patience: int = 3, max_epochs: int = 30, seed: int = 0,
                 val_fraction: float = 0.1, device: str = "cpu"):
        self.head = head
        self.resolution = resolution
        self.feature_dim = feature_dim
        self.base_channels = base_channels
        self.n_blocks = n_blocks
        self.batch_size = batch_size
        self.lr = lr
        self.plateau_factor = plateau_factor
        self.plateau_patience = plateau_patience
        self.max_epochs = max_epochs
        self.seed = seed
        self.val_fraction = val_fraction
        self.device = device

    def _build_net(self) -> AgeNet:
        return AgeNet(self.resolution, self.head, feature_dim=self.feature_dim,
                      base_channels=self.base_channels, n_blocks=self.n_blocks)

    def _loss(self, net: AgeNet, out: torch.Tensor, ages: torch.Tensor) -> torch.Tensor:
        if self.head == "regression":
            return nn.functional.mse_loss(torch.relu(out.squeeze(-1)), ages)
        if self.head == "expectation":
            labels = ages.round().long().clamp(0, N_AGE_LABELS - 1)
            return nn.functional.cross_entropy(out, labels)
        # ordinal: each output is P(age > j), one binary target per label
        thresholds = torch.arange(N_AGE_LABELS, device=out.device, dtype=ages.dtype)
        targets = (ages.unsqueeze(1) > thresholds.unsqueeze(0)).to(ages.dtype)
        return nn.functional.binary_cross_entropy_with_logits(out, targets)

    def fit(self, X, y, X_val=None, y_val=None) -> "AgeEstimator":
        X = check_image_batch(X, self.resolution)
        y = check_ages(y, X.shape[0])
        rng = np.random.default_rng(self.seed)
        torch.manual_seed(self.seed)

        if X_val is None:
            n_val = max(1, int(round(self.val_fraction * X.shape[0])))
            if X.shape[0] - n_val < 1:
                raise ValueError("not enough samples to hold out a validation set")
            perm = rng.permutation(X.shape[0])
            X, X_val = X[perm[n_val:]], X[perm[:n_val]]
            y, y_val = y[perm[n_val:]], y[perm[:n_val]]
        else:
            X_val = check_image_batch(X_val, self.resolution)
            y_val = check_ages(y_val, X_val.shape[0])

        net = self._build_net().to(self.device)
        optimizer = torch.optim.Adam(net.parameters(), lr=self.lr)
        scheduler = PlateauScheduler(self.lr, self.plateau_factor, self.plateau_patience)

        records: list[EpochRecord] = []
        best_mae = math.inf
        best_state = None
        best_epoch = 0
        Xt = torch.from_numpy(X).unsqueeze(1)
        yt = torch.from_numpy(y)
        for epoch in range(self.max_epochs):
            lr_now = scheduler.lr
            net.train()
            losses = []
            for batch in _iter_batches(X.shape[0], self.batch_size, rng):
                optimizer.zero_grad()
                out = net(Xt[batch].to(self.device))
                loss = self._loss(net, out, yt[batch].to(self.device))
                loss.backward()
                optimizer.step()
                losses.append(float(loss.detach()))
            train_loss = float(np.mean(losses))
            if not math.isfinite(train_loss):
                raise RuntimeError(f"training diverged: non-finite loss at epoch {epoch} "
                                   f"(head={self.head}, lr={lr_now})")

            val_mae = float(np.mean(np.abs(self._predict_with(net, X_val) - y_val)))
            records.append(EpochRecord(epoch=epoch, train_loss=train_loss,
                                       val_mae=val_mae, lr=lr_now))
            if val_mae < best_mae:
                best_mae = val_mae
                best_state = copy.deepcopy(net.state_dict())
                best_epoch = epoch
            new_lr = scheduler.step(val_mae)
            for group in optimizer.param_groups:
                group["lr"] = new_lr

        net.load_state_dict(best_state)
        net.eval()
        self.model_ = net
        self.history_ = TrainHistory(records=records, selected_epoch=best_epoch)
        self.selected_epoch_ = best_epoch
        self.val_mae_ = best_mae
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("this AgeEstimator has not been fitted yet")

    def _predict_with(self, net: AgeNet, X: np.ndarray) -> np.ndarray:
        net.eval()
        out = []
        with torch.no_grad():
            Xt = torch.from_numpy(X).unsqueeze(1)
            for batch in _iter_batches(X.shape[0], max(self.batch_size, 256)):
                ages = net.predict_ages(Xt[batch].to(self.device))
                out.append(ages.cpu().numpy())
        return np.concatenate(out).astype(np.float64)

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_image_batch(X, self.resolution)
        return self._predict_with(self.model_, X)

    def predict_estimates(self, X) -> list[AgeEstimate]:
        return [AgeEstimate(age_years=float(a), head=self.head, resolution=self.resolution)
                for a in self.predict(X)]

    def save(self, path) -> None:
        self._check_fitted()
        meta = {
            "kind": "age",
            "params": self.get_params(),
            "selected_epoch": self.selected_epoch_,
            "val_mae": self.val_mae_,
            "age_labels": {"count": N_AGE_LABELS, "min": 0, "max": N_AGE_LABELS - 1},
            "history": [vars(r) for r in self.history_.records],
        }
        write_checkpoint(path, meta, {"model": self.model_.state_dict()})

    @classmethod
    def load(cls, path) -> "AgeEstimator":
        meta, state = read_checkpoint(path)
        if meta.get("kind") != "age":
            raise ValueError(f"checkpoint {path} is a {meta.get('kind')!r} model, not 'age'")
        est = cls(**meta["params"])
        net = est._build_net()
        net.load_state_dict(state["model"])
        net.eval()
        est.model_ = net
        est.selected_epoch_ = meta["selected_epoch"]
        est.val_mae_ = meta["val_mae"]
        records = [EpochRecord(**r) for r in meta["history"]]
        est.history_ = TrainHistory(records=records, selected_epoch=est.selected_epoch_)
        return est
