"""Schedule time-separated same-patient pairs into separation buckets."""

from __future__ import annotations

import numpy as np

from ..phantom.manifest import ManifestRecord
from .schema import StudyDefinition, StudyPair

DEFAULT_PAIRS_PER_BUCKET = 40
DEFAULT_BUCKET_WIDTH_YEARS = 2.0
DEFAULT_N_BUCKETS = 5


def create_study(manifest: list[ManifestRecord],
                 pairs_per_bucket: int = DEFAULT_PAIRS_PER_BUCKET,
                 bucket_width_years: float = DEFAULT_BUCKET_WIDTH_YEARS,
                 n_buckets: int = DEFAULT_N_BUCKETS,
                 seed: int = 0,
                 study_id: str | None = None) -> StudyDefinition:
    """Fill every separation bucket with same-patient pairs, one pair per
    patient at most; errors name the deficient bucket when the manifest
    lacks longitudinal depth."""
    if pairs_per_bucket < 1 or n_buckets < 1 or bucket_width_years <= 0:
        raise ValueError("pairs_per_bucket, n_buckets must be >= 1 and width > 0")
    rng = np.random.default_rng(seed)

    by_patient: dict[str, list[ManifestRecord]] = {}
    for r in manifest:
        by_patient.setdefault(r.patient_id, []).append(r)

    def bucket_of(separation: float) -> int | None:
        b = int(separation // bucket_width_years)
        if 0 <= b < n_buckets and separation > 0:
            return b
        return None

    # per patient, the set of buckets it could serve and a candidate pair each
    candidates: list[tuple[str, dict[int, tuple[ManifestRecord, ManifestRecord]]]] = []
    for pid in sorted(by_patient):
        scans = sorted(by_patient[pid], key=lambda r: r.scan_date_offset_days)
        options: dict[int, list[tuple[ManifestRecord, ManifestRecord]]] = {}
        for i in range(len(scans)):
            for j in range(i + 1, len(scans)):
                b = bucket_of(abs(scans[j].age_years - scans[i].age_years))
                if b is not None:
                    options.setdefault(b, []).append((scans[i], scans[j]))
        if options:
            chosen = {b: pairs[rng.integers(len(pairs))] for b, pairs in options.items()}
            candidates.append((pid, chosen))

    order = rng.permutation(len(candidates))
    need = [pairs_per_bucket] * n_buckets
    selected: list[tuple[int, ManifestRecord, ManifestRecord]] = []
    for idx in order:
        pid, options = candidates[idx]
        open_buckets = [b for b in options if need[b] > 0]
        if not open_buckets:
            continue
        b = max(open_buckets, key=lambda k: need[k])
        early, late = options[b]
        need[b] -= 1
        selected.append((b, early, late))

    if any(n > 0 for n in need):
        deficits = {b: pairs_per_bucket - n for b, n in enumerate(need)}
        worst = max(range(n_buckets), key=lambda b: need[b])
        lo, hi = worst * bucket_width_years, (worst + 1) * bucket_width_years
        raise ValueError(
            f"not enough longitudinal patients: bucket {worst} "
            f"([{lo:g}, {hi:g}) years) has {deficits[worst]} of {pairs_per_bucket} "
            f"pairs; add patients or lower pairs_per_bucket")

    pairs = []
    for k, (b, early, late) in enumerate(sorted(selected, key=lambda t: (t[0], t[1].image_id))):
        # canonical (a, b) order randomized so labels are balanced
        a, b_rec = (early, late) if rng.random() < 0.5 else (late, early)
        pairs.append(StudyPair(
            pair_id=f"pair{k:04d}", image_a_id=a.image_id, image_b_id=b_rec.image_id,
            true_age_a=a.age_years, true_age_b=b_rec.age_years, separation_bucket=b))

    sid = study_id or f"study-{seed:08x}-{len(pairs)}"
    return StudyDefinition(study_id=sid, pairs=pairs, pairs_per_bucket=pairs_per_bucket,
                           bucket_width_years=bucket_width_years, n_buckets=n_buckets,
                           seed=seed)
