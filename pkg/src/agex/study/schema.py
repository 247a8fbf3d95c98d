"""Domain records for the pairwise ranking study."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class StudyPair:
    """One scheduled pair of same-patient images with ground truth.

    `image_a`/`image_b` is the canonical order used in stored responses;
    presentation (left/right) is randomized per session on top of it.
    """

    pair_id: str
    image_a_id: str
    image_b_id: str
    true_age_a: float
    true_age_b: float
    separation_bucket: int

    @property
    def separation_years(self) -> float:
        return abs(self.true_age_b - self.true_age_a)


@dataclass(frozen=True)
class StudyDefinition:
    study_id: str
    pairs: list[StudyPair]
    pairs_per_bucket: int
    bucket_width_years: float
    n_buckets: int
    seed: int

    def pair(self, pair_id: str) -> StudyPair:
        for p in self.pairs:
            if p.pair_id == pair_id:
                return p
        raise KeyError(pair_id)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "StudyDefinition":
        pairs = [StudyPair(**p) for p in d["pairs"]]
        return cls(study_id=d["study_id"], pairs=pairs,
                   pairs_per_bucket=d["pairs_per_bucket"],
                   bucket_width_years=d["bucket_width_years"],
                   n_buckets=d["n_buckets"], seed=d["seed"])


@dataclass
class Session:
    """One participant's pass over a study: fixed order, sides, cursor."""

    session_id: str
    study_id: str
    participant_id: str
    pair_order: list[str]
    left_is_a: dict[str, bool]          # presentation side of image_a, per pair
    estimate_on_a: dict[str, bool]      # which image takes the age estimate
    cursor: int = 0
    responded: set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "study_id": self.study_id,
            "participant_id": self.participant_id,
            "pair_order": list(self.pair_order),
            "left_is_a": dict(self.left_is_a),
            "estimate_on_a": dict(self.estimate_on_a),
            "cursor": self.cursor,
            "responded": sorted(self.responded),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        return cls(session_id=d["session_id"], study_id=d["study_id"],
                   participant_id=d["participant_id"], pair_order=list(d["pair_order"]),
                   left_is_a=dict(d["left_is_a"]), estimate_on_a=dict(d["estimate_on_a"]),
                   cursor=int(d["cursor"]), responded=set(d["responded"]))


CHOICES = ("first_older", "second_older", "not_sure")
ESTIMATED_IMAGES = ("first", "second")


@dataclass(frozen=True)
class RankResponse:
    """One stored judgment; `first`/`second` refer to the pair's canonical
    (image_a, image_b) order, never to screen sides."""

    session_id: str
    pair_id: str
    choice: str
    age_estimate_years: float | None = None
    estimated_image: str | None = None
    elapsed_ms: int = 0

    def __post_init__(self):
        if self.choice not in CHOICES:
            raise ValueError(f"choice must be one of {CHOICES}, got {self.choice!r}")
        if (self.age_estimate_years is None) != (self.estimated_image is None):
            raise ValueError("age_estimate_years and estimated_image must be given together")
        if self.estimated_image is not None and self.estimated_image not in ESTIMATED_IMAGES:
            raise ValueError(f"estimated_image must be one of {ESTIMATED_IMAGES}")
        if self.age_estimate_years is not None and not 0 <= self.age_estimate_years <= 105:
            raise ValueError("age_estimate_years outside [0, 105]")
        if self.elapsed_ms < 0:
            raise ValueError("elapsed_ms must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RankResponse":
        return cls(session_id=d["session_id"], pair_id=d["pair_id"], choice=d["choice"],
                   age_estimate_years=d.get("age_estimate_years"),
                   estimated_image=d.get("estimated_image"),
                   elapsed_ms=int(d.get("elapsed_ms", 0)))
