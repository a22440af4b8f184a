import numpy as np
import pytest

from dotdrift import ChallengeSpec, rasterize_glyphs, render_sequence


@pytest.fixture(scope="session")
def default_spec():
    return ChallengeSpec(value="243", seed=1)


@pytest.fixture(scope="session")
def default_sequence(default_spec):
    return render_sequence(default_spec)


@pytest.fixture(scope="session")
def default_mask(default_spec):
    return rasterize_glyphs(
        default_spec.value,
        default_spec.width,
        default_spec.height,
        default_spec.glyph_height_frac,
    )


@pytest.fixture(scope="session")
def small_spec():
    """Fast-rendering spec for tests that only need structure, not statistics."""
    return ChallengeSpec(
        value="51",
        seed=11,
        width=96,
        height=64,
        frame_count=6,
        glyph_height_frac=0.4,
    )


@pytest.fixture(scope="session")
def small_sequence(small_spec):
    return render_sequence(small_spec)


def as_bits(array) -> np.ndarray:
    return np.asarray(array, dtype=np.uint8)
