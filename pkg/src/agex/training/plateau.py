"""Reduce-on-plateau learning-rate schedule.

The rate decays by `factor` once the validation metric has failed to
improve for `patience` consecutive steps; either a decay or an improvement
resets the stall counter. After k decays the rate is exactly
initial_lr * factor**k.
"""

from __future__ import annotations

import math


class PlateauScheduler:
    def __init__(self, initial_lr: float, factor: float = 0.5, patience: int = 3):
        if initial_lr <= 0:
            raise ValueError("initial_lr must be > 0")
        if not 0.0 < factor < 1.0:
            raise ValueError("factor must lie in (0, 1)")
        if patience < 1:
            raise ValueError("patience must be >= 1")
        self.initial_lr = initial_lr
        self.factor = factor
        self.patience = patience
        self.best = math.inf
        self.stall = 0
        self.n_decays = 0

    @property
    def lr(self) -> float:
        return self.initial_lr * self.factor ** self.n_decays

    def step(self, val_metric: float) -> float:
        """Record one validation metric; returns the learning rate to use next."""
        if not math.isfinite(val_metric):
            raise ValueError(f"validation metric must be finite, got {val_metric}")
        if val_metric < self.best:
            self.best = val_metric
            self.stall = 0
        else:
            self.stall += 1
            if self.stall >= self.patience:
                self.n_decays += 1
                self.stall = 0
        return self.lr
