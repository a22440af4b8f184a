"""Frame synthesis: affine layer trajectories + mask compositing.

Both layers carry an independent noise texture.  Each frame samples the
element texture inside the glyph mask and the background texture outside
it, each under its own per-frame transform.  Sampling is nearest-neighbor
with toroidal wrap so frames stay strictly 1-bit and edges never betray
the motion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .glyphs import rasterize_glyphs
from .spec import ChallengeSpec, ScaleTrajectory
from .texture import LayerTexture, generate_texture, layer_seeds

# Texture headroom over the viewport; sampling wraps regardless.
TEXTURE_FACTOR = 2


@dataclass(frozen=True)
class AffineParams:
    """One layer's transform at one frame: scale about the viewport center,
    then translate."""

    tx: float
    ty: float
    scale: float


@dataclass(frozen=True)
class FrameSequence:
    """Ordered 1-bit frames plus timing and provenance."""

    frames: list[np.ndarray]
    frame_delay_ms: int
    spec_digest: str

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].shape[1]

    @property
    def height(self) -> int:
        return self.frames[0].shape[0]


def layer_transform_at(
    frame_index: int, velocity: tuple[float, float], scale: ScaleTrajectory
) -> AffineParams:
    """Transform of one layer at one frame.

    Translation accumulates linearly (frame_index * velocity); scale is the
    trajectory value.  Frame 0 is always the identity translation at the
    trajectory's base scale.
    """
    return AffineParams(
        tx=frame_index * velocity[0],
        ty=frame_index * velocity[1],
        scale=scale.value_at(frame_index),
    )


def sample_indices(
    n: int, center: float, translation: float, scale: float, tex_n: int
) -> np.ndarray:
    """Texture indices for one viewport axis under the inverse transform.

    Viewport coordinate p looks up texture coordinate
    ``(p - translation - center) / scale + center``, rounded half-up and
    wrapped modulo the texture size.
    """
    q = (np.arange(n, dtype=np.float64) - center - translation) / scale + center
    return np.floor(q + 0.5).astype(np.int64) % tex_n


def composite_frame(
    spec: ChallengeSpec,
    bg: LayerTexture,
    el: LayerTexture,
    mask: np.ndarray,
    frame_index: int,
) -> np.ndarray:
    """One composited 1-bit frame (uint8, 1 = white).

    Where the mask is 0 the pixel samples the background texture under the
    background transform; where it is 1, the element texture under the
    element transform.  With equal textures and equal transforms the two
    branches sample identically, so the mask is invisible.
    """
    cx = (spec.width - 1) / 2.0
    cy = (spec.height - 1) / 2.0
    tb = layer_transform_at(frame_index, spec.bg_velocity, spec.bg_scale)
    te = layer_transform_at(frame_index, spec.el_velocity, spec.el_scale)

    bx = sample_indices(spec.width, cx, tb.tx, tb.scale, bg.tex_width)
    by = sample_indices(spec.height, cy, tb.ty, tb.scale, bg.tex_height)
    ex = sample_indices(spec.width, cx, te.tx, te.scale, el.tex_width)
    ey = sample_indices(spec.height, cy, te.ty, te.scale, el.tex_height)

    bg_pixels = bg.bits[np.ix_(by, bx)]
    el_pixels = el.bits[np.ix_(ey, ex)]
    return np.where(mask == 1, el_pixels, bg_pixels)


def challenge_textures(spec: ChallengeSpec) -> tuple[LayerTexture, LayerTexture]:
    """The two layer textures for a spec, at 2x viewport size."""
    bg_seed, el_seed = layer_seeds(spec.seed)
    tw = TEXTURE_FACTOR * spec.width
    th = TEXTURE_FACTOR * spec.height
    return (
        generate_texture(bg_seed, tw, th, spec.noise_density),
        generate_texture(el_seed, tw, th, spec.noise_density),
    )


def render_sequence(spec: ChallengeSpec) -> FrameSequence:
    """Render every frame of a validated spec.

    Pure function of the spec: same spec, same bits, always.  Each frame
    depends only on its own index, so prefixes are stable under changes to
    frame_count.
    """
    spec.validate()
    bg, el = challenge_textures(spec)
    mask = rasterize_glyphs(spec.value, spec.width, spec.height, spec.glyph_height_frac)
    frames = [
        composite_frame(spec, bg, el, mask, k) for k in range(spec.frame_count)
    ]
    return FrameSequence(
        frames=frames, frame_delay_ms=spec.frame_delay_ms, spec_digest=spec.digest()
    )
