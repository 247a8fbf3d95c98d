"""Ground-truth anatomical parameters of a phantom at a given age.

The age coupling bakes in the radiological aging signs the renderer must
show: a widening aortic arch, a lower and wider heart, a narrowing ribcage,
a widening mediastinum and denser apical shadowing. Traits perturb the
baselines per patient so age cannot be read off a single pixel.
"""

from __future__ import annotations

from dataclasses import dataclass

AGE_MIN = 0.0
AGE_MAX = 105.0


@dataclass(frozen=True)
class PhantomParams:
    """All widths/positions are fractions of the image side length."""

    aortic_arch_width_frac: float
    heart_width_frac: float
    heart_center_y_frac: float
    ribcage_width_frac: float
    mediastinum_width_frac: float
    apical_shadow_opacity: float

    def __post_init__(self):
        for name in ("aortic_arch_width_frac", "heart_width_frac",
                     "ribcage_width_frac", "mediastinum_width_frac"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name}={v} outside (0, 1)")
        if not 0.0 <= self.apical_shadow_opacity <= 1.0:
            raise ValueError(f"apical_shadow_opacity={self.apical_shadow_opacity} outside [0, 1]")


def check_age(age_years: float) -> float:
    age = float(age_years)
    if not AGE_MIN <= age <= AGE_MAX:
        raise ValueError(f"age_years={age_years} outside [{AGE_MIN}, {AGE_MAX}]")
    return age


def phantom_params(identity, age_years: float) -> PhantomParams:
    """Deterministic anatomy for one patient at one age."""
    age = check_age(age_years)
    t = age / AGE_MAX
    u = identity.traits
    return PhantomParams(
        aortic_arch_width_frac=(0.06 + 0.10 * t) * (0.9 + 0.2 * u[0]),
        heart_width_frac=0.28 + 0.10 * t + 0.04 * (u[1] - 0.5),
        heart_center_y_frac=0.55 + 0.06 * t,
        ribcage_width_frac=0.92 - 0.06 * t + 0.02 * (u[2] - 0.5),
        mediastinum_width_frac=0.18 + 0.08 * t,
        apical_shadow_opacity=min(max(0.05 + 0.25 * t * u[3], 0.0), 1.0),
    )
