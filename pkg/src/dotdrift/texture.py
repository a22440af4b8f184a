"""Binary noise textures bound to the two challenge layers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .rng import TAG_BACKGROUND, TAG_ELEMENT, bernoulli_bits, derive_seed


@dataclass(frozen=True)
class LayerTexture:
    """A row-major 1-bit raster plus the seed that produced it.

    ``bits`` has shape (tex_height, tex_width), dtype uint8, values 0/1
    (1 = white).  Textures are sampled toroidally, so any coordinate is
    valid after a modulo.
    """

    bits: np.ndarray
    origin_seed: int

    @property
    def tex_width(self) -> int:
        return self.bits.shape[1]

    @property
    def tex_height(self) -> int:
        return self.bits.shape[0]


def generate_texture(seed: int, width: int, height: int, density: float) -> LayerTexture:
    """Deterministic white-noise raster: each pixel white with ``density``.

    Pixels are drawn row-major from the SplitMix64 stream seeded with
    ``seed`` (see :mod:`dotdrift.rng` for the exact recipe), so the output
    is reproducible across runs, platforms, and reimplementations.
    """
    if width <= 0 or height <= 0:
        raise InvalidSpecError(f"texture dimensions must be positive, got {width}x{height}")
    if not 0.0 < density < 1.0:
        raise InvalidSpecError(f"noise density must be in (0, 1), got {density}")
    bits = bernoulli_bits(seed, width * height, density).reshape(height, width)
    return LayerTexture(bits=bits, origin_seed=seed)


def layer_seeds(spec_seed: int) -> tuple[int, int]:
    """Split a spec seed into (background, element) texture seeds.

    Fixed tag constants keep the two streams independent: revising one
    layer's draw order can never disturb the other.
    """
    return derive_seed(spec_seed, TAG_BACKGROUND), derive_seed(spec_seed, TAG_ELEMENT)
