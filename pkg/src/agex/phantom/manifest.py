"""Dataset manifests: one row per scan, CSV on disk.

Header is fixed so external datasets can be swapped in by writing the same
columns; `file_path` may be empty, in which case images are re-rendered
from the ids.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats as sps

from ..utils import atomic_write_text, stable_hash64
from .identity import PhantomIdentity
from .params import AGE_MAX, AGE_MIN

MANIFEST_COLUMNS = ["image_id", "patient_id", "age_years", "sex",
                    "scan_date_offset_days", "file_path"]

DAYS_PER_YEAR = 365.25

# population defaults: mean age 61.2 +/- 19.0, ~28% of patients rescanned
DEFAULT_AGE_MEAN = 61.2
DEFAULT_AGE_SD = 19.0
DEFAULT_MULTI_SCAN_FRACTION = 0.28


@dataclass(frozen=True)
class ManifestRecord:
    image_id: str
    patient_id: str
    age_years: float
    sex: str
    scan_date_offset_days: int
    file_path: str = ""

    def __post_init__(self):
        if not AGE_MIN <= self.age_years <= AGE_MAX:
            raise ValueError(f"age_years={self.age_years} outside [{AGE_MIN}, {AGE_MAX}]")
        if self.sex not in ("F", "M"):
            raise ValueError(f"sex must be 'F' or 'M', got {self.sex!r}")


def noise_seed_for_image(image_id: str) -> int:
    return stable_hash64(image_id)


def build_manifest(n_patients: int,
                   multi_scan_fraction: float = DEFAULT_MULTI_SCAN_FRACTION,
                   age_mean: float = DEFAULT_AGE_MEAN,
                   age_sd: float = DEFAULT_AGE_SD,
                   seed: int = 0) -> list[ManifestRecord]:
    """Sample a synthetic patient population.

    Ages are truncated-normal on [0, 105]. A `multi_scan_fraction` share of
    patients gets 2-5 scans whose date offsets span up to 10 years; the age
    at each scan advances accordingly.
    """
    if n_patients < 1:
        raise ValueError("n_patients must be >= 1")
    if not 0.0 <= multi_scan_fraction <= 1.0:
        raise ValueError("multi_scan_fraction must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    lo, hi = (AGE_MIN - age_mean) / age_sd, (AGE_MAX - age_mean) / age_sd
    base_ages = sps.truncnorm.rvs(lo, hi, loc=age_mean, scale=age_sd,
                                  size=n_patients, random_state=rng)
    sexes = rng.choice(["F", "M"], size=n_patients)
    multi = rng.random(n_patients) < multi_scan_fraction

    records: list[ManifestRecord] = []
    for i in range(n_patients):
        identity = PhantomIdentity.from_seed(stable_hash64(f"{seed}:{i}"))
        pid = identity.patient_id()
        base_age = float(base_ages[i])
        offsets = [0]
        if multi[i]:
            n_scans = int(rng.integers(2, 6))
            max_offset_days = min(10.0, AGE_MAX - base_age) * DAYS_PER_YEAR
            extra = np.sort(rng.uniform(0.0, max_offset_days, size=n_scans - 1))
            offsets += [int(round(d)) for d in extra]
        for k, off in enumerate(offsets):
            records.append(ManifestRecord(
                image_id=f"{pid}-s{k:02d}",
                patient_id=pid,
                age_years=round(min(base_age + off / DAYS_PER_YEAR, AGE_MAX), 4),
                sex=str(sexes[i]),
                scan_date_offset_days=off,
            ))
    return records


def manifest_to_csv(records: list[ManifestRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MANIFEST_COLUMNS)
    for r in records:
        writer.writerow([r.image_id, r.patient_id, f"{r.age_years:.4f}",
                         r.sex, r.scan_date_offset_days, r.file_path])
    return buf.getvalue()


def write_manifest(records: list[ManifestRecord], path: str | Path) -> None:
    atomic_write_text(path, manifest_to_csv(records))


def read_manifest(path: str | Path) -> list[ManifestRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != MANIFEST_COLUMNS:
            raise ValueError(f"bad manifest header {reader.fieldnames}; expected {MANIFEST_COLUMNS}")
        records = [ManifestRecord(
            image_id=row["image_id"],
            patient_id=row["patient_id"],
            age_years=float(row["age_years"]),
            sex=row["sex"],
            scan_date_offset_days=int(row["scan_date_offset_days"]),
            file_path=row["file_path"],
        ) for row in reader]
    ids = [r.image_id for r in records]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate image_id in manifest")
    return records
