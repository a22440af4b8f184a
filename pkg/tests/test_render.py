import hashlib

import numpy as np
import pytest

from dotdrift import (
    ChallengeSpec,
    InvalidSpecError,
    ScaleTrajectory,
    composite_frame,
    layer_transform_at,
    rasterize_glyphs,
    render_sequence,
)
from dotdrift.render import challenge_textures, sample_indices

GOLDEN_FRAME10_SHA256 = "ef7a656c19e8ca9cf6f36308b5ba963c9eca1379bfb148c1ac6bda120abf6a3b"


def test_transform_frame_zero_is_identity_translation():
    t = layer_transform_at(0, (3.0, -2.0), ScaleTrajectory.constant(1.0))
    assert (t.tx, t.ty, t.scale) == (0.0, 0.0, 1.0)


def test_transform_translation_accumulates_linearly():
    t = layer_transform_at(5, (2.0, 1.0), ScaleTrajectory.constant(1.0))
    assert (t.tx, t.ty, t.scale) == (10.0, 5.0, 1.0)


def test_transform_sinusoidal_closed_form():
    traj = ScaleTrajectory.sinusoidal(base=1.0, amplitude=0.05, period_frames=40)
    for k in (0, 3, 17, 39):
        t = layer_transform_at(k, (0.0, 0.0), traj)
        assert t.scale == pytest.approx(1.0 + 0.05 * np.sin(2 * np.pi * k / 40), abs=1e-8)


def test_sample_indices_wrap_toroidally():
    idx = sample_indices(8, center=0.0, translation=-10.0, scale=1.0, tex_n=8)
    assert idx.tolist() == [(p + 10) % 8 for p in range(8)]


def test_render_is_deterministic(default_spec, default_sequence):
    again = render_sequence(default_spec)
    assert len(again.frames) == len(default_sequence.frames)
    for a, b in zip(again.frames, default_sequence.frames):
        assert np.array_equal(a, b)
    assert again.spec_digest == default_sequence.spec_digest


def test_sequence_metadata(default_spec, default_sequence):
    assert len(default_sequence) == default_spec.frame_count
    assert default_sequence.frame_delay_ms == default_spec.frame_delay_ms
    assert default_sequence.spec_digest == default_spec.digest()
    assert all(f.shape == (200, 400) for f in default_sequence.frames)


def test_textures_have_headroom(default_spec):
    bg, el = challenge_textures(default_spec)
    assert bg.tex_width >= 2 * default_spec.width
    assert bg.tex_height >= 2 * default_spec.height
    assert el.bits.shape == bg.bits.shape


def test_frame_zero_is_identity_crop(default_spec, default_sequence, default_mask):
    bg, el = challenge_textures(default_spec)
    h, w = default_spec.height, default_spec.width
    expected = np.where(default_mask == 1, el.bits[:h, :w], bg.bits[:h, :w])
    assert np.array_equal(default_sequence.frames[0], expected)


def test_prefix_stability(default_spec, default_sequence):
    short = render_sequence(default_spec.with_overrides(frame_count=12))
    for a, b in zip(short.frames, default_sequence.frames[:12]):
        assert np.array_equal(a, b)


def test_golden_frame_ten(default_sequence):
    assert hashlib.sha256(default_sequence.frames[10].tobytes()).hexdigest() == (
        GOLDEN_FRAME10_SHA256
    )


def test_identity_degeneracy_mask_invisible(default_spec, default_mask):
    # same texture object on both layers + equal transforms: the mask must
    # not influence a single pixel
    locked = ChallengeSpec(
        value="243",
        seed=1,
        bg_velocity=(2.0, 1.0),
        el_velocity=(2.0, 1.0),
        bg_scale=ScaleTrajectory.constant(1.0),
        el_scale=ScaleTrajectory.constant(1.0),
    )
    bg, _ = challenge_textures(locked)
    zero_mask = np.zeros_like(default_mask)
    for k in (0, 7, 31):
        with_mask = composite_frame(locked, bg, bg, default_mask, k)
        without = composite_frame(locked, bg, bg, zero_mask, k)
        assert np.array_equal(with_mask, without)


def test_zero_mask_short_circuits_element_texture(default_spec):
    bg, el = challenge_textures(default_spec)
    other_el = challenge_textures(default_spec.with_overrides(seed=999))[1]
    zero_mask = np.zeros((default_spec.height, default_spec.width), dtype=np.uint8)
    a = composite_frame(default_spec, bg, el, zero_mask, 9)
    b = composite_frame(default_spec, bg, other_el, zero_mask, 9)
    assert np.array_equal(a, b)


def test_locked_spec_rejected_by_render():
    locked = ChallengeSpec(
        value="243",
        seed=1,
        bg_velocity=(0.0, 0.0),
        el_velocity=(0.0, 0.0),
        bg_scale=ScaleTrajectory.constant(1.0),
        el_scale=ScaleTrajectory.constant(1.0),
    )
    with pytest.raises(InvalidSpecError):
        render_sequence(locked)


def test_frame_white_fraction_within_three_sigma():
    sigma = (0.5 * 0.5 / (400 * 200)) ** 0.5
    for seed in range(5):
        seq = render_sequence(ChallengeSpec(value="243", seed=seed))
        for frame in seq.frames:
            assert abs(frame.mean() - 0.5) <= 3 * sigma


def test_frames_are_strictly_binary(small_sequence):
    for frame in small_sequence.frames:
        assert frame.dtype == np.uint8
        assert set(np.unique(frame)) <= {0, 1}


def test_scaled_sampling_changes_pixels_only_inside_mask(default_spec, default_mask):
    # element scale pulses; at frames where it differs from 1.0 the element
    # region must differ from the base crop while background pixels with
    # equal transforms stay put
    bg, el = challenge_textures(default_spec)
    still = default_spec.with_overrides(
        bg_velocity=(0.0, 0.0),
        el_velocity=(0.0, 0.0),
        el_scale=ScaleTrajectory.sinusoidal(base=1.0, amplitude=0.1, period_frames=4),
    )
    f0 = composite_frame(still, bg, el, default_mask, 0)
    f1 = composite_frame(still, bg, el, default_mask, 1)  # scale 1.1
    outside = default_mask == 0
    assert np.array_equal(f0[outside], f1[outside])
    assert not np.array_equal(f0[~outside], f1[~outside])
