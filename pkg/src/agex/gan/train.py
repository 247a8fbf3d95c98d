"""Adversarial training against a frozen age predictor.

The discriminator maximizes log D(x) + log(1 - D(G(A, w))) and the
generator follows the non-saturating objective (maximize log D(G))
plus the age-consistency term lambda * (A - M(G(A, w)))^2 computed on
[0, 1]-normalized ages. M never updates.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np
import torch
from torch import nn

from ..models.estimator import AgeEstimator
from ..models.nets import AgeNet
from ..phantom.params import AGE_MAX
from .model import AgeGan, GanBatchLoss, GanConfig

DIVERGENCE_D_LOSS = 1e-4
DIVERGENCE_PATIENCE = 500


def parameter_checksum(module: nn.Module) -> str:
    """Stable digest of all parameters and buffers, for frozen-ness checks."""
    h = hashlib.sha256()
    for name, tensor in sorted(module.state_dict().items()):
        h.update(name.encode())
        h.update(tensor.detach().cpu().numpy().tobytes())
    return h.hexdigest()


def _as_agenet(predictor) -> AgeNet:
    if isinstance(predictor, AgeEstimator):
        if not hasattr(predictor, "model_"):
            raise ValueError("predictor estimator is not fitted")
        return predictor.model_
    if isinstance(predictor, AgeNet):
        return predictor
    raise TypeError(f"predictor must be an AgeEstimator or AgeNet, got {type(predictor)}")


def train_acgan(config: GanConfig, images: np.ndarray, predictor,
                log_every: int = 0) -> tuple[AgeGan, list[GanBatchLoss]]:
    """Train G and D on real images (N, R, R) with frozen age supervision.

    Aborts with a diagnostic when the discriminator loss collapses
    (< 1e-4 for 500 consecutive steps).
    """
    images = np.asarray(images, dtype=np.float32)
    if images.ndim != 3 or images.shape[1] != images.shape[2]:
        raise ValueError(f"expected real images of shape (N, R, R), got {images.shape}")
    if images.shape[1] != config.resolution:
        raise ValueError(f"images are {images.shape[1]}px but GAN resolution is "
                         f"{config.resolution}")
    frozen = _as_agenet(predictor)
    if frozen.resolution != config.resolution:
        raise ValueError(f"predictor expects {frozen.resolution}px images but GAN "
                         f"resolution is {config.resolution}")
    frozen.eval()
    for p in frozen.parameters():
        p.requires_grad_(False)

    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    gan = AgeGan(config)
    g, d = gan.generator, gan.discriminator
    opt_g = torch.optim.Adam(g.parameters(), lr=config.lr_g,
                             betas=(config.beta1, config.beta2))
    opt_d = torch.optim.Adam(d.parameters(), lr=config.lr_d,
                             betas=(config.beta1, config.beta2))
    bce = nn.functional.binary_cross_entropy_with_logits

    Xt = torch.from_numpy(images).unsqueeze(1)
    curves: list[GanBatchLoss] = []
    collapsed_for = 0
    for step in range(config.steps):
        idx = rng.integers(0, images.shape[0], size=config.batch_size)
        real = Xt[idx]
        w = torch.randn(config.batch_size, config.latent_dim)
        ages = torch.rand(config.batch_size) * (config.age_high - config.age_low) \
            + config.age_low
        fake = g(ages / AGE_MAX, w)

        # discriminator: real up, fake down (one-sided label smoothing on real)
        opt_d.zero_grad()
        logits_real = d(real)
        logits_fake = d(fake.detach())
        d_real = bce(logits_real, torch.full_like(logits_real, config.real_label))
        d_fake = bce(logits_fake, torch.zeros_like(logits_fake))
        (d_real + d_fake).backward()
        opt_d.step()

        # generator: non-saturating adversarial term plus age targeting
        opt_g.zero_grad()
        logits_gen = d(fake)
        g_adv = bce(logits_gen, torch.ones_like(logits_gen))
        if config.lambda_age > 0:
            pred_ages = frozen.predict_ages(fake)
            g_age = nn.functional.mse_loss(pred_ages / AGE_MAX, ages / AGE_MAX)
            g_loss = g_adv + config.lambda_age * g_age
        else:
            g_age = torch.zeros(())
            g_loss = g_adv
        g_loss.backward()
        opt_g.step()

        curves.append(GanBatchLoss(step=step, d_real=float(d_real.detach()),
                                   d_fake=float(d_fake.detach()),
                                   g_adv=float(g_adv.detach()),
                                   g_age=float(g_age.detach()),
                                   lam=config.lambda_age))
        if not math.isfinite(curves[-1].g_adv) or not math.isfinite(curves[-1].d_real):
            raise RuntimeError(f"GAN training diverged: non-finite loss at step {step}")
        collapsed_for = collapsed_for + 1 \
            if curves[-1].d_real + curves[-1].d_fake < DIVERGENCE_D_LOSS else 0
        if collapsed_for >= DIVERGENCE_PATIENCE:
            raise RuntimeError(
                f"discriminator collapsed: combined loss < {DIVERGENCE_D_LOSS} for "
                f"{DIVERGENCE_PATIENCE} consecutive steps (at step {step}); "
                f"lower lr_d or raise generator capacity")
        if log_every and step % log_every == 0:
            print(f"step {step}: d_real {curves[-1].d_real:.3f} "
                  f"d_fake {curves[-1].d_fake:.3f} g_adv {curves[-1].g_adv:.3f} "
                  f"g_age {curves[-1].g_age:.4f}")

    g.eval()
    d.eval()
    return gan, curves


def discriminator_accuracy(gan: AgeGan, real_images: np.ndarray, seed: int = 0) -> float:
    """Balanced real-vs-fake accuracy of the trained discriminator."""
    real = np.asarray(real_images, dtype=np.float32)
    n = real.shape[0]
    rng = np.random.default_rng(seed)
    ages = rng.uniform(gan.config.age_low, gan.config.age_high, size=n)
    fake = gan.generate(ages, gan.sample_latents(n, seed))
    gan.discriminator.eval()
    with torch.no_grad():
        p_real = torch.sigmoid(gan.discriminator(torch.from_numpy(real).unsqueeze(1)))
        p_fake = torch.sigmoid(gan.discriminator(
            torch.from_numpy(fake.astype(np.float32)).unsqueeze(1)))
    return float(((p_real > 0.5).float().mean() + (p_fake <= 0.5).float().mean()) / 2)
