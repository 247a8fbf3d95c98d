"""Torch networks: shared convolutional backbone, age heads, pair ranker."""

from __future__ import annotations

import torch
from torch import nn

from .heads import N_AGE_LABELS

_AGE_LABELS = torch.arange(N_AGE_LABELS, dtype=torch.float32)


class ConvBackbone(nn.Module):
    """Stride-2 conv blocks ending in global average pooling.

    Channel widths double per block up to `feature_dim`, so with the
    default 4 blocks and 16 base channels the pooled feature is 128-d.
    """

    def __init__(self, resolution: int, feature_dim: int = 128,
                 base_channels: int = 16, n_blocks: int = 4):
        super().__init__()
        if resolution % (2 ** n_blocks) != 0:
            raise ValueError(f"resolution {resolution} not divisible by 2^{n_blocks}")
        layers = []
        ch_in = 1
        ch = base_channels
        for _ in range(n_blocks):
            layers += [nn.Conv2d(ch_in, ch, 3, stride=2, padding=1),
                       nn.BatchNorm2d(ch), nn.ReLU(inplace=True)]
            ch_in, ch = ch, min(ch * 2, feature_dim)
        self.blocks = nn.Sequential(*layers)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.resolution = resolution
        self.feature_dim = ch_in

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.shape[-2:] != (self.resolution, self.resolution):
            raise ValueError(f"backbone expects {self.resolution}x{self.resolution} "
                             f"images, got {tuple(x.shape[-2:])}")
        return self.pool(self.blocks(x)).flatten(1)


def _xavier_linear(n_in: int, n_out: int) -> nn.Linear:
    lin = nn.Linear(n_in, n_out)
    nn.init.xavier_uniform_(lin.weight)
    nn.init.zeros_(lin.bias)
    return lin


class AgeNet(nn.Module):
    """Backbone plus one of the three prediction heads.

    `forward` returns raw head outputs (a scalar or 106 logits);
    `ages_from_output` converts them to years differentiably, so the net
    can also serve as the frozen supervisor inside the GAN.
    """

    def __init__(self, resolution: int, head: str, feature_dim: int = 128,
                 base_channels: int = 16, n_blocks: int = 4):
        super().__init__()
        if head not in ("regression", "expectation", "ordinal"):
            raise ValueError(f"unknown head {head!r}")
        self.backbone = ConvBackbone(resolution, feature_dim, base_channels, n_blocks)
        out_dim = 1 if head == "regression" else N_AGE_LABELS
        self.head_layer = _xavier_linear(self.backbone.feature_dim, out_dim)
        if head == "regression":
            # start near the middle of the age range so the output ReLU is live
            nn.init.constant_(self.head_layer.bias, 50.0)
        self.head = head
        self.resolution = resolution

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head_layer(self.backbone(x))

    def ages_from_output(self, out: torch.Tensor) -> torch.Tensor:
        if self.head == "regression":
            return torch.relu(out.squeeze(-1))
        if self.head == "expectation":
            probs = torch.softmax(out, dim=-1)
            return probs @ _AGE_LABELS.to(out.device)
        exceed = torch.sigmoid(out)
        return exceed.sum(dim=-1).clamp(0.0, 105.0)

    def predict_ages(self, x: torch.Tensor) -> torch.Tensor:
        return self.ages_from_output(self(x))


class RankNet(nn.Module):
    """Shared backbone over both images; concatenated features feed a small
    fully connected module emitting the probability the second is older."""

    def __init__(self, resolution: int, feature_dim: int = 128,
                 base_channels: int = 16, n_blocks: int = 4, hidden_dim: int = 64):
        super().__init__()
        self.backbone = ConvBackbone(resolution, feature_dim, base_channels, n_blocks)
        f = self.backbone.feature_dim
        self.classifier = nn.Sequential(
            _xavier_linear(2 * f, hidden_dim), nn.ReLU(inplace=True),
            _xavier_linear(hidden_dim, 1),
        )
        self.resolution = resolution

    def forward(self, a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
        """Logit that the second argument shows the older state."""
        feats = torch.cat([self.backbone(a), self.backbone(b)], dim=1)
        return self.classifier(feats).squeeze(-1)
