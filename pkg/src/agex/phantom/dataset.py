"""Materialize phantom datasets on disk and load image arrays for training."""

from __future__ import annotations

import io
from dataclasses import replace
from pathlib import Path

import numpy as np
from PIL import Image

from ..utils import atomic_write_bytes
from .identity import PhantomIdentity
from .manifest import (DEFAULT_AGE_MEAN, DEFAULT_AGE_SD, DEFAULT_MULTI_SCAN_FRACTION,
                       ManifestRecord, build_manifest, noise_seed_for_image,
                       write_manifest)
from .render import DEFAULT_AGE_SCATTER_SD, DEFAULT_NOISE_SD, render_phantom


def to_png_bytes(img: np.ndarray) -> bytes:
    """Encode a [0, 1] float image as 8-bit grayscale PNG."""
    data = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(data, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def from_png_bytes(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("L"), dtype=np.float64) / 255.0


def render_record(record: ManifestRecord, resolution: int,
                  noise_sd: float = DEFAULT_NOISE_SD,
                  age_noise_gain: float = 0.0,
                  age_scatter_sd: float = DEFAULT_AGE_SCATTER_SD) -> np.ndarray:
    """Deterministically re-render the image behind a manifest record."""
    identity = PhantomIdentity.from_patient_id(record.patient_id)
    return render_phantom(identity, record.age_years, resolution,
                          noise_seed=noise_seed_for_image(record.image_id),
                          noise_sd=noise_sd, age_noise_gain=age_noise_gain,
                          age_scatter_sd=age_scatter_sd)


def image_array(record: ManifestRecord, resolution: int,
                data_dir: str | Path | None = None) -> np.ndarray:
    """Load the record's PNG when materialized, else re-render it."""
    if data_dir is not None and record.file_path:
        path = Path(data_dir) / record.file_path
        if path.exists():
            arr = from_png_bytes(path.read_bytes())
            if arr.shape != (resolution, resolution):
                raise ValueError(f"{path} has shape {arr.shape}, expected "
                                 f"({resolution}, {resolution})")
            return arr
    return render_record(record, resolution)


def load_arrays(records: list[ManifestRecord], resolution: int,
                data_dir: str | Path | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Stack images and ages for a list of records: (N, R, R) and (N,)."""
    X = np.stack([image_array(r, resolution, data_dir) for r in records]).astype(np.float32)
    y = np.array([r.age_years for r in records], dtype=np.float32)
    return X, y


def generate_dataset(out_dir: str | Path, n_patients: int, resolution: int, seed: int = 0,
                     multi_scan_fraction: float = DEFAULT_MULTI_SCAN_FRACTION,
                     age_mean: float = DEFAULT_AGE_MEAN, age_sd: float = DEFAULT_AGE_SD,
                     noise_sd: float = DEFAULT_NOISE_SD, age_noise_gain: float = 0.0,
                     age_scatter_sd: float = DEFAULT_AGE_SCATTER_SD) -> list[ManifestRecord]:
    """Write manifest.csv plus one PNG per scan under `out_dir`/images/."""
    out_dir = Path(out_dir)
    records = build_manifest(n_patients, multi_scan_fraction=multi_scan_fraction,
                             age_mean=age_mean, age_sd=age_sd, seed=seed)
    materialized = []
    for r in records:
        rel = f"images/{r.image_id}.png"
        img = render_record(r, resolution, noise_sd=noise_sd,
                            age_noise_gain=age_noise_gain, age_scatter_sd=age_scatter_sd)
        atomic_write_bytes(out_dir / rel, to_png_bytes(img))
        materialized.append(replace(r, file_path=rel))
    write_manifest(materialized, out_dir / "manifest.csv")
    return materialized
