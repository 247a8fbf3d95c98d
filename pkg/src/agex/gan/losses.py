"""Loss pieces for the age-conditional GAN."""

from __future__ import annotations


def age_consistency_loss(age_target_years: float, predicted_age_years: float,
                         lam: float) -> float:
    """Squared age-targeting penalty lambda * (target - predicted)^2.

    Units follow the inputs (years^2 when called with years); training
    applies it to [0, 1]-normalized ages.
    """
    if lam <= 0:
        raise ValueError("lambda must be > 0")
    err = float(age_target_years) - float(predicted_age_years)
    return lam * err * err
