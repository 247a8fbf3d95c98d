"""Deterministic synthetic patient identities.

A patient is fully described by a 64-bit seed; the anatomical trait vector
is derived from it with a dedicated RNG stream, so the same seed always
reproduces the same virtual patient anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from ..utils import stable_hash64

N_TRAITS = 8

_PATIENT_ID_RE = re.compile(r"^P([0-9a-f]{16})$")


def _traits_from_seed(seed: int) -> tuple[float, ...]:
    rng = np.random.default_rng(np.uint64(seed))
    return tuple(float(v) for v in rng.random(N_TRAITS))


@dataclass(frozen=True)
class PhantomIdentity:
    """Virtual patient: a seed plus 8 anatomical traits in [0, 1]."""

    identity_seed: int
    traits: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not 0 <= self.identity_seed < 2**64:
            raise ValueError(f"identity_seed must be a 64-bit unsigned int, got {self.identity_seed}")
        if not self.traits:
            object.__setattr__(self, "traits", _traits_from_seed(self.identity_seed))
        if len(self.traits) != N_TRAITS:
            raise ValueError(f"expected {N_TRAITS} traits, got {len(self.traits)}")
        if any(not (0.0 <= t <= 1.0) for t in self.traits):
            raise ValueError("traits must lie in [0, 1]")

    @classmethod
    def from_seed(cls, seed: int) -> "PhantomIdentity":
        return cls(identity_seed=int(seed))

    @classmethod
    def from_patient_id(cls, patient_id: str) -> "PhantomIdentity":
        """Recover the identity embedded in a manifest patient id.

        Ids of the form ``P<16 hex digits>`` carry the seed verbatim; any
        other string (e.g. when real images are substituted) is hashed, so
        rendering stays deterministic either way.
        """
        m = _PATIENT_ID_RE.match(patient_id)
        if m:
            return cls(identity_seed=int(m.group(1), 16))
        return cls(identity_seed=stable_hash64(patient_id))

    def patient_id(self) -> str:
        return f"P{self.identity_seed:016x}"
