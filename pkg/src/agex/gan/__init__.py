"""Age-conditional GAN: nets, training, re-aging sweeps, difference maps."""

from .losses import age_consistency_loss
from .model import AgeGan, AgeTarget, GanBatchLoss, GanConfig
from .nets import LATENT_DIM, Discriminator, Generator
from .reage import (age_targeting_curve, age_targeting_mae, diff_mass_in_mask,
                    difference_map, generator_forward, reage_sweep)
from .train import discriminator_accuracy, parameter_checksum, train_acgan

__all__ = [
    "AgeGan", "AgeTarget", "Discriminator", "GanBatchLoss", "GanConfig",
    "Generator", "LATENT_DIM", "age_consistency_loss", "age_targeting_curve",
    "age_targeting_mae", "diff_mass_in_mask", "difference_map",
    "discriminator_accuracy", "generator_forward", "parameter_checksum",
    "reage_sweep", "train_acgan",
]
