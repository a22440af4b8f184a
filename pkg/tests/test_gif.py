import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dotdrift import ChallengeError, ChallengeSpec, FormatLimitError, encode_gif, render_sequence
from dotdrift.gifenc import _lzw_encode_py, delay_centiseconds, lzw_encode
from dotdrift.render import FrameSequence

from gif_tools import decode_frames, walk_structure


def make_seq(frames, delay_ms=50):
    return FrameSequence(frames=frames, frame_delay_ms=delay_ms, spec_digest="test")


def test_minimal_document_structure():
    gif = encode_gif(make_seq([np.zeros((1, 1), dtype=np.uint8)]))
    assert gif.startswith(b"GIF89a")
    assert gif.endswith(b"\x3b")
    doc = walk_structure(gif)
    assert doc["screen"] == (1, 1)
    assert doc["palette"] == [(0, 0, 0), (255, 255, 255)]
    assert len(doc["frames"]) == 1
    frame = doc["frames"][0]
    assert frame["rect"] == (0, 0, 1, 1)
    assert frame["min_code_size"] == 2
    assert not frame["local_table"] and not frame["interlaced"]


def test_netscape_loop_extension_present():
    gif = encode_gif(make_seq([np.zeros((2, 2), dtype=np.uint8)]))
    doc = walk_structure(gif)
    app = [e for e in doc["extensions"] if e["label"] == 0xFF]
    assert len(app) == 1
    payload = app[0]["payload"]
    assert payload.startswith(b"NETSCAPE2.0")
    assert payload[11:] == b"\x01\x00\x00"  # sub-block id 1, loop count 0


def test_every_frame_has_control_extension(small_sequence):
    doc = walk_structure(encode_gif(small_sequence))
    assert len(doc["frames"]) == len(small_sequence.frames)
    for frame in doc["frames"]:
        assert frame["gce"] is not None
        assert frame["gce"]["disposal"] == 1
        assert frame["gce"]["delay_cs"] == 5  # 50 ms
        assert not frame["gce"]["transparent"]
        assert frame["rect"] == (0, 0, small_sequence.width, small_sequence.height)


@pytest.mark.parametrize("ms,cs", [(50, 5), (20, 2), (19, 2), (9, 2), (1000, 100), (25, 2)])
def test_delay_quantization_floor_min_two(ms, cs):
    assert delay_centiseconds(ms) == cs


def test_deterministic_bytes(small_sequence):
    assert encode_gif(small_sequence) == encode_gif(small_sequence)


def test_identical_frames_identical_payloads():
    frame = (np.arange(64).reshape(8, 8) % 2).astype(np.uint8)
    doc = walk_structure(encode_gif(make_seq([frame, frame.copy()])))
    assert doc["frames"][0]["lzw"] == doc["frames"][1]["lzw"]


def test_roundtrip_default_sequence(default_sequence):
    gif = encode_gif(default_sequence)
    frames, info = decode_frames(gif)
    assert len(frames) == len(default_sequence.frames)
    for got, want in zip(frames, default_sequence.frames):
        assert np.array_equal(got, want)
    assert info.get("loop") == 0
    assert info.get("duration") == 50


def test_roundtrip_small_random_sequences():
    rng = np.random.default_rng(7)
    for _ in range(4):
        h, w = int(rng.integers(1, 40)), int(rng.integers(1, 40))
        n = int(rng.integers(1, 5))
        frames = [rng.integers(0, 2, size=(h, w), dtype=np.uint8) for _ in range(n)]
        got, _ = decode_frames(encode_gif(make_seq(frames)))
        assert len(got) == n
        for a, b in zip(got, frames):
            assert np.array_equal(a, b)


def test_size_sanity_default_challenge(default_sequence):
    assert len(encode_gif(default_sequence)) < 2 * 1024 * 1024


def test_empty_sequence_rejected():
    with pytest.raises(ChallengeError):
        encode_gif(make_seq([]))


def test_oversized_dimension_rejected():
    frame = np.zeros((1, 0x10000), dtype=np.uint8)
    with pytest.raises(FormatLimitError):
        encode_gif(make_seq([frame]))


def test_mismatched_frame_shapes_rejected():
    frames = [np.zeros((4, 4), dtype=np.uint8), np.zeros((4, 5), dtype=np.uint8)]
    with pytest.raises(ChallengeError):
        encode_gif(make_seq(frames))


@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_lzw_jit_matches_python_reference(data):
    n = data.draw(st.integers(1, 3000))
    seed = data.draw(st.integers(0, 2**32 - 1))
    pixels = np.random.default_rng(seed).integers(0, 2, size=n, dtype=np.uint8)
    assert lzw_encode(pixels) == _lzw_encode_py(pixels, 2)


def test_lzw_equivalence_through_table_resets():
    # enough random binary data to force several 4096-entry table resets
    pixels = np.random.default_rng(0).integers(0, 2, size=200_000, dtype=np.uint8)
    assert lzw_encode(pixels) == _lzw_encode_py(pixels, 2)
