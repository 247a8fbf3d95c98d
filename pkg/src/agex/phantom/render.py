"""Render a phantom chest image from anatomical parameters.

Everything is drawn with soft-edged analytic primitives (ellipses, bands,
stripes) so that sub-pixel parameter changes still move pixel intensities;
this keeps image differences monotone in age separation at every supported
resolution.
"""

from __future__ import annotations

import numpy as np

from .identity import PhantomIdentity
from .params import AGE_MAX, check_age, phantom_params

SUPPORTED_RESOLUTIONS = (32, 64, 128, 256)

DEFAULT_NOISE_SD = 0.02
DEFAULT_AGE_SCATTER_SD = 3.5


def _grid(resolution: int):
    c = (np.arange(resolution) + 0.5) / resolution
    return np.meshgrid(c, c)  # xg along axis 1, yg along axis 0


def _ellipse(xg, yg, cx, cy, ax, ay, soft):
    """Soft ellipse mask: 1 inside, 0 outside, linear ramp of width `soft`."""
    r = np.sqrt(((xg - cx) / ax) ** 2 + ((yg - cy) / ay) ** 2)
    return np.clip((1.0 - r) / soft, 0.0, 1.0)


def check_resolution(resolution: int) -> int:
    resolution = int(resolution)
    if resolution not in SUPPORTED_RESOLUTIONS:
        raise ValueError(f"resolution {resolution} unsupported; pick one of {SUPPORTED_RESOLUTIONS}")
    return resolution


def render_base(identity: PhantomIdentity, age_years: float, resolution: int) -> np.ndarray:
    """Noise-free anatomy image in [0, 1], shape (resolution, resolution).

    Besides the age-coupled anatomy, three age-independent identity
    confounds (body scale, vertical position, exposure gain) vary per
    patient, so absolute sizes and brightness alone do not determine age;
    this mirrors the inter-patient variability that makes the task hard on
    real radiographs.
    """
    resolution = check_resolution(resolution)
    age = check_age(age_years)
    p = phantom_params(identity, age)
    u = identity.traits

    # identity confounds: scale about the thorax anchor, shift, exposure
    scale = 0.85 + 0.30 * u[5]
    dy = 0.08 * (u[6] - 0.5)
    gain = 0.75 + 0.50 * u[7]

    xg, yg = _grid(resolution)
    xg = 0.5 + (xg - 0.5) / scale
    yg = (0.56 + dy) + (yg - 0.56 - dy) / scale
    img = np.zeros((resolution, resolution), dtype=np.float64)

    thorax = _ellipse(xg, yg, 0.5, 0.56, p.ribcage_width_frac / 2, 0.40, 0.05)
    img += 0.30 * thorax

    lung_dx = p.ribcage_width_frac * 0.24
    lungs = np.clip(
        _ellipse(xg, yg, 0.5 - lung_dx, 0.52, p.ribcage_width_frac * 0.19, 0.30, 0.08)
        + _ellipse(xg, yg, 0.5 + lung_dx, 0.52, p.ribcage_width_frac * 0.19, 0.30, 0.08),
        0.0, 1.0,
    )
    img -= 0.16 * lungs * thorax

    # rib stripes, slightly shifted per patient
    for k in range(5):
        yk = 0.30 + 0.085 * k + 0.01 * (u[4] - 0.5)
        img += 0.05 * np.exp(-(((yg - yk) / 0.012) ** 2)) * thorax

    # mediastinum: vertical soft band limited to the thorax height
    band = np.clip((p.mediastinum_width_frac / 2 - np.abs(xg - 0.5)) / 0.015, 0.0, 1.0)
    vert = np.clip((yg - 0.20) / 0.05, 0.0, 1.0) * np.clip((0.92 - yg) / 0.05, 0.0, 1.0)
    img += 0.22 * band * vert

    heart = _ellipse(xg, yg, 0.52, p.heart_center_y_frac,
                     p.heart_width_frac / 2, p.heart_width_frac * 0.40, 0.07)
    img += 0.30 * heart

    knob = _ellipse(xg, yg, 0.45, 0.345,
                    p.aortic_arch_width_frac / 2, p.aortic_arch_width_frac * 0.65, 0.10)
    img += 0.26 * knob

    for sx in (-1.0, 1.0):
        apex = _ellipse(xg, yg, 0.5 + sx * 0.17, 0.20, 0.10, 0.055, 0.15)
        img += 0.45 * p.apical_shadow_opacity * apex

    img *= gain
    np.clip(img, 0.0, 1.0, out=img)
    return img


def render_phantom(identity: PhantomIdentity, age_years: float, resolution: int,
                   noise_seed: int, noise_sd: float = DEFAULT_NOISE_SD,
                   age_noise_gain: float = 0.0,
                   age_scatter_sd: float = DEFAULT_AGE_SCATTER_SD) -> np.ndarray:
    """One scan: anatomy at a scattered biological age, plus pixel noise.

    `age_scatter_sd` jitters the anatomical age per scan (seeded), putting
    an irreducible floor under chronological-age prediction the way
    biological aging variability does on real radiographs.
    `age_noise_gain` > 0 scales the pixel-noise sd linearly with age,
    mimicking the higher presentation variability of older patients.
    Deterministic given all arguments; intensities clipped to [0, 1].
    """
    age = check_age(age_years)
    rng = np.random.default_rng(np.uint64(noise_seed))
    if age_scatter_sd > 0.0:
        age = float(np.clip(age + rng.normal(0.0, age_scatter_sd), 0.0, AGE_MAX))
    img = render_base(identity, age, resolution)
    t = float(age_years) / AGE_MAX
    sd = float(noise_sd) * (1.0 + float(age_noise_gain) * t)
    if sd > 0.0:
        img = img + rng.normal(0.0, sd, img.shape)
        np.clip(img, 0.0, 1.0, out=img)
    return img


def age_sensitive_mask(identity: PhantomIdentity, resolution: int,
                       ages: tuple[float, float] = (15.0, 95.0),
                       threshold: float = 0.02) -> np.ndarray:
    """Boolean mask of pixels whose noise-free rendering changes with age."""
    base = render_base(identity, ages[0], resolution)
    mask = np.zeros(base.shape, dtype=bool)
    for a in ages[1:]:
        mask |= np.abs(render_base(identity, a, resolution) - base) > threshold
    return mask


def population_age_sensitive_mask(resolution: int, n_identities: int = 50, seed: int = 0,
                                  ages: tuple[float, float] = (15.0, 95.0),
                                  threshold: float = 0.02) -> np.ndarray:
    """Union of per-identity age-sensitive masks over sampled identities."""
    rng = np.random.default_rng(seed)
    mask = np.zeros((resolution, resolution), dtype=bool)
    for _ in range(n_identities):
        ident = PhantomIdentity.from_seed(int(rng.integers(0, 2**63)))
        mask |= age_sensitive_mask(ident, resolution, ages=ages, threshold=threshold)
    return mask
