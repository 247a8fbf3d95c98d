"""Age-conditional GAN wrapper: config, sampling, persistence."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import torch

from ..models.checkpoint import read_checkpoint, write_checkpoint
from ..phantom.params import AGE_MAX, check_age
from .nets import LATENT_DIM, Discriminator, Generator


@dataclass(frozen=True)
class AgeTarget:
    """Conditioning age in years plus its [0, 1]-normalized form."""

    age_years: float

    def __post_init__(self):
        check_age(self.age_years)

    @property
    def normalized(self) -> float:
        return self.age_years / AGE_MAX


@dataclass(frozen=True)
class GanConfig:
    resolution: int = 64
    latent_dim: int = LATENT_DIM
    g_base_channels: int = 12
    d_base_channels: int = 12
    batch_size: int = 16
    steps: int = 20000
    lr_g: float = 2e-4
    lr_d: float = 1e-4
    beta1: float = 0.5
    beta2: float = 0.999
    lambda_age: float = 3.0
    age_low: float = 15.0
    age_high: float = 95.0
    real_label: float = 0.9  # one-sided label smoothing
    seed: int = 0

    def __post_init__(self):
        if self.lambda_age < 0:
            raise ValueError("lambda_age must be >= 0 (0 disables age supervision)")
        if not 0 <= self.age_low < self.age_high <= AGE_MAX:
            raise ValueError("require 0 <= age_low < age_high <= 105")
        if self.steps < 1 or self.batch_size < 2:
            raise ValueError("steps must be >= 1 and batch_size >= 2")


@dataclass(frozen=True)
class GanBatchLoss:
    """Decomposed losses of one training step; `lam` is the age weight."""

    step: int
    d_real: float
    d_fake: float
    g_adv: float
    g_age: float
    lam: float

    def __post_init__(self):
        if self.g_age < 0:
            raise ValueError("g_age must be >= 0")


class AgeGan:
    """Generator/discriminator pair conditioned on a normalized age target."""

    def __init__(self, config: GanConfig, generator: Generator | None = None,
                 discriminator: Discriminator | None = None):
        self.config = config
        self.generator = generator or Generator(config.resolution, config.latent_dim,
                                                config.g_base_channels)
        self.discriminator = discriminator or Discriminator(config.resolution,
                                                            config.d_base_channels)

    def sample_latents(self, n: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return rng.standard_normal((n, self.config.latent_dim)).astype(np.float32)

    def generate(self, ages_years, w) -> np.ndarray:
        """Images (N, R, R) in [0, 1] for paired ages (years) and latents."""
        ages = np.atleast_1d(np.asarray(ages_years, dtype=np.float32))
        for a in ages:
            check_age(float(a))
        w = np.asarray(w, dtype=np.float32)
        if w.ndim == 1:
            w = np.broadcast_to(w, (ages.shape[0], w.shape[0]))
        if w.shape[0] != ages.shape[0]:
            raise ValueError("ages and latents disagree in length")
        self.generator.eval()
        with torch.no_grad():
            out = self.generator(torch.from_numpy(ages / np.float32(AGE_MAX)),
                                 torch.from_numpy(np.ascontiguousarray(w)))
        return out.squeeze(1).numpy().astype(np.float64)

    def save(self, path) -> None:
        meta = {"kind": "gan", "config": asdict(self.config)}
        write_checkpoint(path, meta, {
            "generator": self.generator.state_dict(),
            "discriminator": self.discriminator.state_dict(),
        })

    @classmethod
    def load(cls, path) -> "AgeGan":
        meta, state = read_checkpoint(path)
        if meta.get("kind") != "gan":
            raise ValueError(f"checkpoint {path} is a {meta.get('kind')!r} model, not 'gan'")
        gan = cls(GanConfig(**meta["config"]))
        gan.generator.load_state_dict(state["generator"])
        gan.discriminator.load_state_dict(state["discriminator"])
        gan.generator.eval()
        gan.discriminator.eval()
        return gan
