"""Self-describing checkpoint files: a zip with `meta.json` + torch weights."""

from __future__ import annotations

import io
import json
import zipfile
from pathlib import Path

import torch

from ..utils import atomic_write_bytes

META_MEMBER = "meta.json"
WEIGHTS_MEMBER = "weights.pt"
FORMAT_VERSION = 1


def write_checkpoint(path: str | Path, meta: dict, state: dict) -> None:
    """`meta` must be JSON-safe; `state` is any torch-saveable mapping."""
    meta = dict(meta)
    meta["format_version"] = FORMAT_VERSION
    weights = io.BytesIO()
    torch.save(state, weights)
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        zf.writestr(META_MEMBER, json.dumps(meta, indent=2, sort_keys=True))
        zf.writestr(WEIGHTS_MEMBER, weights.getvalue())
    atomic_write_bytes(path, buf.getvalue())


def read_checkpoint(path: str | Path) -> tuple[dict, dict]:
    with zipfile.ZipFile(path) as zf:
        meta = json.loads(zf.read(META_MEMBER))
        if meta.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint format {meta.get('format_version')}")
        state = torch.load(io.BytesIO(zf.read(WEIGHTS_MEMBER)), map_location="cpu",
                           weights_only=True)
    return meta, state


def read_checkpoint_meta(path: str | Path) -> dict:
    with zipfile.ZipFile(path) as zf:
        return json.loads(zf.read(META_MEMBER))


def load_model(path: str | Path):
    """Load any saved estimator by its recorded kind."""
    meta = read_checkpoint_meta(path)
    kind = meta.get("kind")
    if kind == "age":
        from .estimator import AgeEstimator
        return AgeEstimator.load(path)
    if kind == "ranker":
        from .ranker import PairRanker
        return PairRanker.load(path)
    if kind == "gan":
        from ..gan.model import AgeGan
        return AgeGan.load(path)
    raise ValueError(f"unknown checkpoint kind {kind!r} in {path}")
