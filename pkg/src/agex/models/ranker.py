"""Pairwise age ranking model with order-symmetric inference."""

from __future__ import annotations

import copy
import math

import numpy as np
import torch
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from torch import nn

from ..training.history import EpochRecord, TrainHistory
from ..training.plateau import PlateauScheduler
from .checkpoint import read_checkpoint, write_checkpoint
from .heads import RankScore
from .nets import RankNet
from .validation import check_binary_labels, check_pair_batch


class PairRanker(BaseEstimator):
    """Predicts the probability that the second image of a pair is older.

    The concatenation architecture is not order-invariant, so inference
    averages both argument orders: p = 0.5 + 0.5*(f(a,b) - f(b,a)), which
    makes p(a,b) + p(b,a) = 1 hold exactly. Training presents every pair
    in both orders (swap augmentation), giving an exactly balanced label
    set.

    fit takes X of shape (N, 2, R, R) and binary labels y (1 when the
    second image is older). The validation metric driving plateau decay
    and epoch selection is the error rate of the symmetric inference.
    """

    def __init__(self, resolution: int = 64, feature_dim: int = 128,
                 base_channels: int = 16, n_blocks: int = 4, hidden_dim: int = 64,
                 batch_size: int = 64, lr: float = 1e-3, plateau_factor: float = 0.5,
                 plateau_patience: int = 3, max_epochs: int = 25, seed: int = 0,
                 val_fraction: float = 0.15, swap_augment: bool = True,
                 device: str = "cpu"):
        self.resolution = resolution
        self.feature_dim = feature_dim
        self.base_channels = base_channels
        self.n_blocks = n_blocks
        self.hidden_dim = hidden_dim
        self.batch_size = batch_size
        self.lr = lr
        self.plateau_factor = plateau_factor
        self.plateau_patience = plateau_patience
        self.max_epochs = max_epochs
        self.seed = seed
        self.val_fraction = val_fraction
        self.swap_augment = swap_augment
        self.device = device

    def _build_net(self) -> RankNet:
        return RankNet(self.resolution, feature_dim=self.feature_dim,
                       base_channels=self.base_channels, n_blocks=self.n_blocks,
                       hidden_dim=self.hidden_dim)

    def fit(self, X, y, X_val=None, y_val=None) -> "PairRanker":
        A, B = check_pair_batch(X, self.resolution)
        y = check_binary_labels(y, A.shape[0])
        rng = np.random.default_rng(self.seed)
        torch.manual_seed(self.seed)

        if X_val is None:
            n = A.shape[0]
            n_val = max(1, int(round(self.val_fraction * n)))
            if n - n_val < 1:
                raise ValueError("not enough pairs to hold out a validation set")
            perm = rng.permutation(n)
            val_idx, train_idx = perm[:n_val], perm[n_val:]
            A_val, B_val, y_val = A[val_idx], B[val_idx], y[val_idx]
            A, B, y = A[train_idx], B[train_idx], y[train_idx]
        else:
            A_val, B_val = check_pair_batch(X_val, self.resolution)
            y_val = check_binary_labels(y_val, A_val.shape[0])

        if self.swap_augment:
            A, B, y = (np.concatenate([A, B]), np.concatenate([B, A]),
                       np.concatenate([y, 1.0 - y]))

        net = self._build_net().to(self.device)
        optimizer = torch.optim.Adam(net.parameters(), lr=self.lr)
        scheduler = PlateauScheduler(self.lr, self.plateau_factor, self.plateau_patience)

        At = torch.from_numpy(A).unsqueeze(1)
        Bt = torch.from_numpy(B).unsqueeze(1)
        yt = torch.from_numpy(y)
        records: list[EpochRecord] = []
        best_err = math.inf
        best_state = None
        best_epoch = 0
        for epoch in range(self.max_epochs):
            lr_now = scheduler.lr
            net.train()
            losses = []
            idx = rng.permutation(A.shape[0])
            for start in range(0, len(idx), self.batch_size):
                batch = idx[start:start + self.batch_size]
                optimizer.zero_grad()
                logits = net(At[batch].to(self.device), Bt[batch].to(self.device))
                loss = nn.functional.binary_cross_entropy_with_logits(
                    logits, yt[batch].to(self.device))
                loss.backward()
                optimizer.step()
                losses.append(float(loss.detach()))
            train_loss = float(np.mean(losses))
            if not math.isfinite(train_loss):
                raise RuntimeError(f"ranking training diverged: non-finite loss at epoch {epoch}")

            p_val = self._proba_with(net, A_val, B_val)
            val_err = float(np.mean((p_val >= 0.5) != (y_val == 1.0)))
            records.append(EpochRecord(epoch=epoch, train_loss=train_loss,
                                       val_mae=val_err, lr=lr_now))
            if val_err < best_err:
                best_err = val_err
                best_state = copy.deepcopy(net.state_dict())
                best_epoch = epoch
            new_lr = scheduler.step(val_err)
            for group in optimizer.param_groups:
                group["lr"] = new_lr

        net.load_state_dict(best_state)
        net.eval()
        self.model_ = net
        self.history_ = TrainHistory(records=records, selected_epoch=best_epoch)
        self.selected_epoch_ = best_epoch
        self.val_error_ = best_err
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("this PairRanker has not been fitted yet")

    def _proba_with(self, net: RankNet, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        net.eval()
        out = []
        with torch.no_grad():
            At = torch.from_numpy(A).unsqueeze(1)
            Bt = torch.from_numpy(B).unsqueeze(1)
            for start in range(0, A.shape[0], max(self.batch_size, 256)):
                sl = slice(start, start + max(self.batch_size, 256))
                a, b = At[sl].to(self.device), Bt[sl].to(self.device)
                f_ab = torch.sigmoid(net(a, b)).cpu().numpy().astype(np.float64)
                f_ba = torch.sigmoid(net(b, a)).cpu().numpy().astype(np.float64)
                out.append(0.5 + 0.5 * (f_ab - f_ba))
        return np.concatenate(out)

    def predict_proba(self, X) -> np.ndarray:
        """Symmetric probability that the second image of each pair is older."""
        self._check_fitted()
        A, B = check_pair_batch(X, self.resolution)
        return self._proba_with(self.model_, A, B)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(int)

    def save(self, path) -> None:
        self._check_fitted()
        meta = {
            "kind": "ranker",
            "params": self.get_params(),
            "selected_epoch": self.selected_epoch_,
            "val_error": self.val_error_,
            "history": [vars(r) for r in self.history_.records],
        }
        write_checkpoint(path, meta, {"model": self.model_.state_dict()})

    @classmethod
    def load(cls, path) -> "PairRanker":
        meta, state = read_checkpoint(path)
        if meta.get("kind") != "ranker":
            raise ValueError(f"checkpoint {path} is a {meta.get('kind')!r} model, not 'ranker'")
        ranker = cls(**meta["params"])
        net = ranker._build_net()
        net.load_state_dict(state["model"])
        net.eval()
        ranker.model_ = net
        ranker.selected_epoch_ = meta["selected_epoch"]
        ranker.val_error_ = meta["val_error"]
        records = [EpochRecord(**r) for r in meta["history"]]
        ranker.history_ = TrainHistory(records=records, selected_epoch=ranker.selected_epoch_)
        return ranker


def rank_pair(ranker: PairRanker, image_a, image_b) -> RankScore:
    """Order-symmetric ranking of one image pair."""
    pair = np.stack([np.asarray(image_a, dtype=np.float32),
                     np.asarray(image_b, dtype=np.float32)])[None]
    return RankScore(float(ranker.predict_proba(pair)[0]))
