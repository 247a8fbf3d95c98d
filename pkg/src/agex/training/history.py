"""Per-epoch training records and their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

from ..utils import atomic_write_text

HISTORY_COLUMNS = ["epoch", "train_loss", "val_mae", "lr"]


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_mae: float
    lr: float


@dataclass(frozen=True)
class TrainHistory:
    records: list[EpochRecord]
    selected_epoch: int

    def __post_init__(self):
        if not self.records:
            raise ValueError("history must hold at least one epoch")
        val_maes = [r.val_mae for r in self.records]
        if val_maes[self.selected_epoch] != min(val_maes):
            raise ValueError("selected_epoch must index the minimum validation MAE")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HISTORY_COLUMNS)
        for r in self.records:
            writer.writerow([r.epoch, f"{r.train_loss:.6g}", f"{r.val_mae:.6g}",
                             f"{r.lr:.6g}"])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        atomic_write_text(path, self.to_csv())
