"""Attack repertoire and the white-box motion-compensated oracle.

The attacks are the naive algorithmic readers a challenge must defeat:
per-frame correlation with the mask, and per-pixel temporal mean/variance
images.  The oracle is the opposite bound: given the background
trajectory (white box), it must recover the glyph mask — proof that the
differential-motion signal a human uses actually exists in the pixels.

All scores are deterministic; thresholds below were frozen from the
Monte Carlo measurement in scripts/measure_thresholds.py.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .render import FrameSequence
from .spec import ChallengeSpec, ScaleTrajectory

# Frozen decision bounds (see scripts/measure_thresholds.py for the
# measurements backing them; defaults sit at 2-4x margin).
PER_FRAME_CORR_BOUND = 0.05
TEMPORAL_CORR_BOUND = 0.1
ORACLE_IOU_BOUND = 0.8
FALSE_POSITIVE_COVERAGE_BOUND = 0.02

# Oracle internals: a pixel moves with the background if its agreement
# with either reference frame stays at/above this rate, requiring at
# least this many in-bounds observations to classify at all.
ORACLE_AGREEMENT_THRESHOLD = 0.75
ORACLE_MIN_OBSERVATIONS = 8


def _frames_of(seq) -> list[np.ndarray]:
    return seq.frames if isinstance(seq, FrameSequence) else list(seq)


def point_biserial(values: np.ndarray, mask: np.ndarray) -> float:
    """Pearson correlation between an image and a binary mask.

    Either side having zero variance (all-black frame, empty mask) is
    defined as correlation 0.
    """
    if values.shape != mask.shape:
        raise ValueError(f"shape mismatch: {values.shape} vs {mask.shape}")
    x = values.astype(np.float64).ravel()
    m = mask.astype(np.float64).ravel()
    sx = x.std()
    sm = m.std()
    if sx == 0.0 or sm == 0.0:
        return 0.0
    return float(((x * m).mean() - x.mean() * m.mean()) / (sx * sm))


def attack_per_frame(seq, mask: np.ndarray) -> float:
    """Max over frames of |correlation between frame pixels and mask|."""
    frames = _frames_of(seq)
    return max(abs(point_biserial(frame, mask)) for frame in frames)


def attack_temporal_stats(seq, mask: np.ndarray) -> tuple[float, float]:
    """(|corr|, |corr|) of the temporal mean and variance images with the mask."""
    frames = _frames_of(seq)
    if len(frames) < 2:
        raise ValueError("temporal statistics need at least 2 frames")
    stack = np.stack(frames).astype(np.float64)
    mean_corr = abs(point_biserial(stack.mean(axis=0), mask))
    var_corr = abs(point_biserial(stack.var(axis=0), mask))
    return mean_corr, var_corr


def white_fraction_gap(frame: np.ndarray, mask: np.ndarray) -> float:
    """|mean pixel value inside mask - outside mask| for one frame."""
    inside = mask == 1
    if not inside.any() or inside.all():
        return 0.0
    f = frame.astype(np.float64)
    return abs(float(f[inside].mean()) - float(f[~inside].mean()))


def estimate_translation(
    frame_a: np.ndarray, frame_b: np.ndarray, search_radius: int
) -> tuple[int, int]:
    """Integer (dx, dy) that best aligns frame_a with frame_b.

    Exhaustive search over the (2r+1)^2 window, scoring toroidal-shift
    pixel agreement; ties break toward the smallest |dx|+|dy|, then
    lexicographically smallest (dx, dy).
    """
    if frame_a.shape != frame_b.shape:
        raise ValueError(f"shape mismatch: {frame_a.shape} vs {frame_b.shape}")
    best = None
    for dy in range(-search_radius, search_radius + 1):
        for dx in range(-search_radius, search_radius + 1):
            shifted = np.roll(frame_a, shift=(dy, dx), axis=(0, 1))
            score = int(np.count_nonzero(shifted == frame_b))
            key = (-score, abs(dx) + abs(dy), (dx, dy))
            if best is None or key < best[0]:
                best = (key, (dx, dy))
    return best[1]


def mask_iou(a: np.ndarray, b: np.ndarray) -> float:
    """Intersection-over-union of two binary masks (0 if both empty)."""
    inter = int(np.count_nonzero((a == 1) & (b == 1)))
    union = int(np.count_nonzero((a == 1) | (b == 1)))
    return inter / union if union else 0.0


def majority_smooth(mask: np.ndarray) -> np.ndarray:
    """One pass of 3x3 strict-majority smoothing (window clipped at edges)."""
    h, w = mask.shape
    padded = np.pad(mask.astype(np.int32), 1)
    counts = sum(padded[i : i + h, j : j + w] for i in range(3) for j in range(3))
    wpad = np.pad(np.ones((h, w), dtype=np.int32), 1)
    sizes = sum(wpad[i : i + h, j : j + w] for i in range(3) for j in range(3))
    return (2 * counts > sizes).astype(np.uint8)


@dataclass(frozen=True)
class MotionModel:
    """The background trajectory — all the oracle is allowed to know."""

    bg_velocity: tuple[float, float]
    bg_scale: ScaleTrajectory

    @classmethod
    def from_spec(cls, spec: ChallengeSpec) -> "MotionModel":
        return cls(bg_velocity=spec.bg_velocity, bg_scale=spec.bg_scale)


@dataclass(frozen=True)
class OracleRecovery:
    mask: np.ndarray
    iou: float | None
    coverage: float


def _agreement_vs_reference(
    frames: list[np.ndarray],
    ref_index: int,
    motion: MotionModel,
    min_observations: int,
) -> np.ndarray:
    """Per-pixel rate at which a pixel's value tracks the background motion.

    For viewport pixel p at frame k, the background texel it would show is
    the one the reference frame shows at r = (s_ref/s_k)(p - c - t_k) + c
    + t_ref; pixels riding the background agree with the reference almost
    always, pixels belonging to the element agree at chance.  Positions
    falling outside the reference frame are not counted; pixels with fewer
    than ``min_observations`` counted frames default to agreement 1
    (classified as background).
    """
    h, w = frames[0].shape
    cx = (w - 1) / 2.0
    cy = (h - 1) / 2.0
    vx, vy = motion.bg_velocity
    ref = frames[ref_index]
    s_ref = motion.bg_scale.value_at(ref_index)
    agree = np.zeros((h, w), dtype=np.int32)
    observed = np.zeros((h, w), dtype=np.int32)
    px = np.arange(w, dtype=np.float64)
    py = np.arange(h, dtype=np.float64)
    for k, frame in enumerate(frames):
        if k == ref_index:
            continue
        s_k = motion.bg_scale.value_at(k)
        ratio = s_ref / s_k
        rx = np.floor(ratio * (px - cx - k * vx) + cx + ref_index * vx + 0.5).astype(np.int64)
        ry = np.floor(ratio * (py - cy - k * vy) + cy + ref_index * vy + 0.5).astype(np.int64)
        in_x = (rx >= 0) & (rx < w)
        in_y = (ry >= 0) & (ry < h)
        in_bounds = in_y[:, None] & in_x[None, :]
        reference = ref[np.ix_(np.clip(ry, 0, h - 1), np.clip(rx, 0, w - 1))]
        agree += (frame == reference) & in_bounds
        observed += in_bounds
    rates = np.where(
        observed >= min_observations, agree / np.maximum(observed, 1), 1.0
    )
    return rates


def oracle_recover_mask(
    seq,
    motion: MotionModel,
    true_mask: np.ndarray | None = None,
    *,
    agreement_threshold: float = ORACLE_AGREEMENT_THRESHOLD,
    min_observations: int = ORACLE_MIN_OBSERVATIONS,
) -> OracleRecovery:
    """Recover the glyph mask from background-motion disagreement.

    Agreement is accumulated against two references — the first and the
    last frame — and a pixel is classified as element only if it tracks
    the background from neither; a single reference mistakes background
    pixels whose motion path crosses the glyphs for element pixels (a
    smeared trail behind each stroke).  One pass of 3x3 majority
    smoothing cleans speckle.  Returns the recovered mask, its IoU
    against ``true_mask`` when given, and its viewport coverage.
    """
    frames = _frames_of(seq)
    if len(frames) < 2:
        raise ValueError("mask recovery needs at least 2 frames")
    if true_mask is not None and true_mask.shape != frames[0].shape:
        raise ValueError(f"mask shape {true_mask.shape} != frame shape {frames[0].shape}")
    first = _agreement_vs_reference(frames, 0, motion, min_observations)
    last = _agreement_vs_reference(frames, len(frames) - 1, motion, min_observations)
    recovered = majority_smooth(np.maximum(first, last) < agreement_threshold)
    iou = mask_iou(recovered, true_mask) if true_mask is not None else None
    coverage = float(np.count_nonzero(recovered)) / recovered.size
    return OracleRecovery(mask=recovered, iou=iou, coverage=coverage)


@dataclass(frozen=True)
class AnalysisReport:
    """Attack-suite outcome for one challenge."""

    per_frame_corr: float
    temporal_mean_corr: float
    temporal_var_corr: float
    oracle_iou: float
    estimated_bg_velocity: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "per_frame_corr": self.per_frame_corr,
            "temporal_mean_corr": self.temporal_mean_corr,
            "temporal_var_corr": self.temporal_var_corr,
            "oracle_iou": self.oracle_iou,
            "estimated_bg_velocity": list(self.estimated_bg_velocity),
        }

    def failures(self) -> list[str]:
        """Bound violations, empty when the challenge is sound."""
        problems = []
        if self.per_frame_corr >= PER_FRAME_CORR_BOUND:
            problems.append(
                f"per_frame_corr {self.per_frame_corr:.4f} >= {PER_FRAME_CORR_BOUND}"
            )
        if self.temporal_mean_corr >= TEMPORAL_CORR_BOUND:
            problems.append(
                f"temporal_mean_corr {self.temporal_mean_corr:.4f} >= {TEMPORAL_CORR_BOUND}"
            )
        if self.temporal_var_corr >= TEMPORAL_CORR_BOUND:
            problems.append(
                f"temporal_var_corr {self.temporal_var_corr:.4f} >= {TEMPORAL_CORR_BOUND}"
            )
        if self.oracle_iou < ORACLE_IOU_BOUND:
            problems.append(f"oracle_iou {self.oracle_iou:.4f} < {ORACLE_IOU_BOUND}")
        return problems

    @property
    def passed(self) -> bool:
        return not self.failures()


def estimate_bg_velocity(frames: Sequence[np.ndarray], search_radius: int = 5) -> tuple[int, int]:
    """Median per-axis shift over the first few consecutive frame pairs."""
    pairs = min(3, len(frames) - 1)
    shifts = [
        estimate_translation(frames[i], frames[i + 1], search_radius) for i in range(pairs)
    ]
    dx = int(np.median([s[0] for s in shifts]))
    dy = int(np.median([s[1] for s in shifts]))
    return dx, dy


def analyze_sequence(seq, mask: np.ndarray, motion: MotionModel) -> AnalysisReport:
    """Run the full attack suite plus the oracle on a rendered sequence."""
    frames = _frames_of(seq)
    mean_corr, var_corr = attack_temporal_stats(frames, mask)
    recovery = oracle_recover_mask(frames, motion, mask)
    return AnalysisReport(
        per_frame_corr=attack_per_frame(frames, mask),
        temporal_mean_corr=mean_corr,
        temporal_var_corr=var_corr,
        oracle_iou=recovery.iou,
        estimated_bg_velocity=estimate_bg_velocity(frames),
    )


def analyze_spec(spec: ChallengeSpec) -> AnalysisReport:
    """Render a spec and analyze it (validates the spec first)."""
    from .glyphs import rasterize_glyphs
    from .render import render_sequence

    seq = render_sequence(spec)
    mask = rasterize_glyphs(spec.value, spec.width, spec.height, spec.glyph_height_frac)
    return analyze_sequence(seq, mask, MotionModel.from_spec(spec))
