"""Sampling of labeled image pairs for the ranking model."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..phantom.manifest import ManifestRecord
from ..phantom.splits import SplitSpec


@dataclass(frozen=True)
class PairSample:
    image_id_a: str
    image_id_b: str
    label: int  # 1 when age_b > age_a
    same_patient: bool
    separation_years: float


def sample_pairs(manifest: list[ManifestRecord], splits: SplitSpec, n_pairs: int,
                 same_patient_fraction: float = 0.5, seed: int = 0,
                 split: str = "train") -> list[PairSample]:
    """Draw labeled pairs from one split, mixing longitudinal and
    cross-patient comparisons.

    Argument order is randomized per pair and exact age ties are skipped.
    If the split lacks multi-scan patients, the longitudinal share falls
    back to cross-patient pairs with a warning.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    if not 0.0 <= same_patient_fraction <= 1.0:
        raise ValueError("same_patient_fraction must lie in [0, 1]")
    ids = {"train": splits.train_ids, "val": splits.val_ids, "test": splits.test_ids}[split]
    records = [r for r in manifest if r.image_id in ids]
    if len(records) < 2:
        raise ValueError(f"split {split!r} holds {len(records)} images; need >= 2")

    by_patient: dict[str, list[ManifestRecord]] = {}
    for r in records:
        by_patient.setdefault(r.patient_id, []).append(r)
    multi = [p for p, rs in sorted(by_patient.items()) if len(rs) >= 2]
    patients = sorted(by_patient)

    rng = np.random.default_rng(seed)
    n_same = int(round(n_pairs * same_patient_fraction))
    if n_same > 0 and not multi:
        warnings.warn("no multi-scan patients in split; falling back to "
                      "cross-patient pairs only")
        n_same = 0

    pairs: list[PairSample] = []

    def emit(ra: ManifestRecord, rb: ManifestRecord, same: bool) -> bool:
        if ra.age_years == rb.age_years:
            return False
        if rng.random() < 0.5:
            ra, rb = rb, ra
        pairs.append(PairSample(
            image_id_a=ra.image_id, image_id_b=rb.image_id,
            label=int(rb.age_years > ra.age_years), same_patient=same,
            separation_years=abs(rb.age_years - ra.age_years)))
        return True

    budget = 200 * n_pairs
    while len(pairs) < n_same and budget > 0:
        budget -= 1
        scans = by_patient[multi[rng.integers(len(multi))]]
        i, j = rng.choice(len(scans), size=2, replace=False)
        emit(scans[i], scans[j], same=True)
    while len(pairs) < n_pairs and budget > 0:
        budget -= 1
        pa, pb = patients[rng.integers(len(patients))], patients[rng.integers(len(patients))]
        if pa == pb:
            continue
        ra = by_patient[pa][rng.integers(len(by_patient[pa]))]
        rb = by_patient[pb][rng.integers(len(by_patient[pb]))]
        emit(ra, rb, same=False)
    if len(pairs) < n_pairs:
        raise ValueError("could not sample enough non-tied pairs from this split")
    return pairs
