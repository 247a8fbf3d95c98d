"""Patient-disjoint train/val/test splits with age stratification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .manifest import ManifestRecord


@dataclass(frozen=True)
class SplitSpec:
    train_ids: frozenset[str]
    val_ids: frozenset[str]
    test_ids: frozenset[str]

    def __post_init__(self):
        if (self.train_ids & self.val_ids) or (self.train_ids & self.test_ids) \
                or (self.val_ids & self.test_ids):
            raise ValueError("splits must be pairwise disjoint")

    def split_of(self, image_id: str) -> str:
        if image_id in self.train_ids:
            return "train"
        if image_id in self.val_ids:
            return "val"
        if image_id in self.test_ids:
            return "test"
        raise KeyError(image_id)


def make_splits(manifest: list[ManifestRecord], train_frac: float, val_frac: float,
                seed: int = 0) -> SplitSpec:
    """Assign whole patients to splits, balancing age across them.

    Patients are ordered by (jittered) mean age and dealt out with a
    largest-remainder walk, so each split samples every age stratum evenly.
    """
    if train_frac <= 0 or val_frac <= 0 or train_frac + val_frac >= 1.0:
        raise ValueError("fractions must be positive and sum to < 1")

    by_patient: dict[str, list[ManifestRecord]] = {}
    for r in manifest:
        by_patient.setdefault(r.patient_id, []).append(r)
    patients = sorted(by_patient)
    n = len(patients)
    fracs = np.array([train_frac, val_frac, 1.0 - train_frac - val_frac])

    rng = np.random.default_rng(seed)
    mean_age = {p: float(np.mean([r.age_years for r in by_patient[p]])) for p in patients}
    jitter = rng.normal(0.0, 0.25, size=n)
    order = sorted(range(n), key=lambda i: (mean_age[patients[i]] + jitter[i], patients[i]))

    # Bresenham-style proportional assignment over the age-sorted walk:
    # after i patients each split holds within 1 of fracs * i.
    counts = np.zeros(3)
    buckets: tuple[list[str], list[str], list[str]] = ([], [], [])
    for step, idx in enumerate(order, start=1):
        deficits = fracs * step - counts
        s = int(np.argmax(deficits))
        buckets[s].append(patients[idx])
        counts[s] += 1

    if any(len(b) == 0 for b in buckets):
        raise ValueError(f"{n} patients are too few to fill three non-empty splits "
                         f"at fractions {tuple(round(f, 4) for f in fracs)}")

    def ids_of(pats: list[str]) -> frozenset[str]:
        return frozenset(r.image_id for p in pats for r in by_patient[p])

    return SplitSpec(train_ids=ids_of(buckets[0]), val_ids=ids_of(buckets[1]),
                     test_ids=ids_of(buckets[2]))
