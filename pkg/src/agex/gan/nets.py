"""Conditional generator and discriminator networks.

The generator consumes the normalized age target concatenated with a
512-d identity latent (513 conditioning dims exactly); the discriminator
sees only images.
"""

from __future__ import annotations

import torch
from torch import nn

LATENT_DIM = 512


class _ModulatedUpBlock(nn.Module):
    """Upsample + conv with feature-wise scale/shift driven by the
    conditioning vector, so age and identity reach every scale (as the
    per-layer style injection of the architecture this imitates does)."""

    def __init__(self, ch_in: int, ch_out: int, cond_dim: int):
        super().__init__()
        self.conv = nn.Conv2d(ch_in, ch_out, 3, padding=1)
        # instance norm: no batch statistics, so sampling behaves exactly
        # like training regardless of batch composition
        self.norm = nn.InstanceNorm2d(ch_out, affine=False)
        self.film = nn.Linear(cond_dim, 2 * ch_out)
        nn.init.zeros_(self.film.weight)
        nn.init.zeros_(self.film.bias)

    def forward(self, x: torch.Tensor, cond: torch.Tensor) -> torch.Tensor:
        x = nn.functional.interpolate(x, scale_factor=2, mode="nearest")
        x = self.norm(self.conv(x))
        scale, shift = self.film(cond).chunk(2, dim=1)
        x = x * (1.0 + scale[:, :, None, None]) + shift[:, :, None, None]
        return torch.relu(x)


class Generator(nn.Module):
    def __init__(self, resolution: int, latent_dim: int = LATENT_DIM,
                 base_channels: int = 32):
        super().__init__()
        if resolution % 8 != 0 or resolution < 16:
            raise ValueError(f"generator resolution must be a multiple of 8 >= 16, "
                             f"got {resolution}")
        self.resolution = resolution
        self.latent_dim = latent_dim
        self.init_size = 4
        cond_dim = latent_dim + 1
        n_ups = 0
        size = self.init_size
        while size < resolution:
            size *= 2
            n_ups += 1
        ch = base_channels * (2 ** min(n_ups, 3))
        self.project = nn.Linear(cond_dim, ch * self.init_size * self.init_size)
        ups = []
        for _ in range(n_ups):
            ch_out = max(base_channels, ch // 2)
            ups.append(_ModulatedUpBlock(ch, ch_out, cond_dim))
            ch = ch_out
        self.ups = nn.ModuleList(ups)
        self.to_image = nn.Sequential(nn.Conv2d(ch, 1, 3, padding=1), nn.Sigmoid())

    def forward(self, age_norm: torch.Tensor, w: torch.Tensor) -> torch.Tensor:
        """age_norm: (B,) ages scaled to [0, 1]; w: (B, latent_dim)."""
        if w.shape[-1] != self.latent_dim:
            raise ValueError(f"latent must be {self.latent_dim}-d, got {w.shape[-1]}")
        cond = torch.cat([age_norm.reshape(-1, 1), w], dim=1)  # (B, latent_dim + 1)
        x = self.project(cond).view(w.shape[0], -1, self.init_size, self.init_size)
        for block in self.ups:
            x = block(x, cond)
        return self.to_image(x)

    @property
    def conditioning_dim(self) -> int:
        return self.latent_dim + 1


class Discriminator(nn.Module):
    def __init__(self, resolution: int, base_channels: int = 16, n_blocks: int = 4):
        super().__init__()
        layers = []
        ch_in, ch = 1, base_channels
        size = resolution
        for _ in range(n_blocks):
            layers += [nn.Conv2d(ch_in, ch, 3, stride=2, padding=1),
                       nn.LeakyReLU(0.2, inplace=True)]
            ch_in, ch = ch, min(ch * 2, 128)
            size //= 2
        self.features = nn.Sequential(*layers)
        self.classifier = nn.Linear(ch_in * size * size, 1)
        self.resolution = resolution

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.classifier(self.features(x).flatten(1)).squeeze(-1)
