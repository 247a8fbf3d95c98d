"""Age-parameterized synthetic chest phantoms, manifests and splits."""

from .dataset import (from_png_bytes, generate_dataset, image_array, load_arrays,
                      render_record, to_png_bytes)
from .identity import N_TRAITS, PhantomIdentity
from .manifest import (MANIFEST_COLUMNS, ManifestRecord, build_manifest,
                       manifest_to_csv, noise_seed_for_image, read_manifest,
                       write_manifest)
from .normalize import normalize_image
from .params import AGE_MAX, AGE_MIN, PhantomParams, phantom_params
from .render import (SUPPORTED_RESOLUTIONS, age_sensitive_mask,
                     population_age_sensitive_mask, render_base, render_phantom)
from .splits import SplitSpec, make_splits

__all__ = [
    "AGE_MAX", "AGE_MIN", "MANIFEST_COLUMNS", "N_TRAITS", "SUPPORTED_RESOLUTIONS",
    "ManifestRecord", "PhantomIdentity", "PhantomParams", "SplitSpec",
    "age_sensitive_mask", "build_manifest", "from_png_bytes", "generate_dataset",
    "image_array", "load_arrays", "make_splits", "manifest_to_csv",
    "noise_seed_for_image", "normalize_image", "phantom_params",
    "population_age_sensitive_mask", "read_manifest", "render_base",
    "render_phantom", "render_record", "to_png_bytes", "write_manifest",
]
