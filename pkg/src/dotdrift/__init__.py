"""Motion-revealed digit challenges: generation, analysis, and serving.

A challenge hides a digit string inside binary noise; the digits share
the background's texture exactly and become readable only through the
two layers' different motion.  Everything rendered is a pure function of
a :class:`ChallengeSpec`.
"""

from .analysis import (
    AnalysisReport,
    MotionModel,
    analyze_spec,
    attack_per_frame,
    attack_temporal_stats,
    estimate_translation,
    oracle_recover_mask,
)
from .errors import (
    ChallengeError,
    FormatLimitError,
    InvalidSpecError,
    LayoutOverflowError,
    StoreFullError,
)
from .gifenc import encode_gif
from .glyphs import rasterize_glyphs
from .pbm import dump_frames_pbm
from .pool import VariantManifest, build_pool
from .render import FrameSequence, composite_frame, layer_transform_at, render_sequence
from .spec import ChallengeSpec, ScaleTrajectory, load_spec, save_spec, static_text_variant
from .texture import LayerTexture, generate_texture

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "ChallengeError",
    "ChallengeSpec",
    "FormatLimitError",
    "FrameSequence",
    "InvalidSpecError",
    "LayerTexture",
    "LayoutOverflowError",
    "MotionModel",
    "ScaleTrajectory",
    "StoreFullError",
    "VariantManifest",
    "analyze_spec",
    "attack_per_frame",
    "attack_temporal_stats",
    "build_pool",
    "composite_frame",
    "dump_frames_pbm",
    "encode_gif",
    "estimate_translation",
    "generate_texture",
    "layer_transform_at",
    "load_spec",
    "oracle_recover_mask",
    "rasterize_glyphs",
    "render_sequence",
    "save_spec",
    "static_text_variant",
]
