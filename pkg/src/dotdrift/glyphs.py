"""Digit rasterization: embedded 5x7 bitmap font -> viewport glyph mask."""

from __future__ import annotations

import numpy as np

from .errors import InvalidSpecError, LayoutOverflowError

FONT_WIDTH = 5
FONT_HEIGHT = 7

# Classic public-domain 5x7 LCD digit glyphs, one string row per scanline,
# '1' = pixel belongs to the digit.
DIGIT_FONT: dict[str, tuple[str, ...]] = {
    "0": ("01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    "1": ("00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    "2": ("01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    "3": ("11111", "00010", "00100", "00010", "00001", "10001", "01110"),
    "4": ("00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    "5": ("11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    "6": ("00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    "7": ("11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    "8": ("01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    "9": ("01110", "10001", "10001", "01111", "00001", "00010", "01100"),
}

MAX_VALUE_LENGTH = 6


def font_cell(digit: str) -> np.ndarray:
    """The raw 7x5 uint8 bitmap for one digit."""
    return np.array([[int(c) for c in row] for row in DIGIT_FONT[digit]], dtype=np.uint8)


def validate_value(value: str) -> None:
    if not value or len(value) > MAX_VALUE_LENGTH or not value.isdigit():
        raise InvalidSpecError(
            f"value must be 1-{MAX_VALUE_LENGTH} characters of '0'-'9', got {value!r}"
        )


def glyph_layout(value: str, viewport_w: int, viewport_h: int, height_frac: float):
    """Placement of the scaled digits: (x0, y0, glyph_h, glyph_w, gap).

    Glyphs are scaled to ``floor(height_frac * viewport_h)`` pixels tall by
    integer nearest-neighbor index mapping, separated by one scaled font
    column, and centered both ways; with an odd leftover pixel the extra
    margin goes right/bottom.
    """
    glyph_h = int(height_frac * viewport_h)
    if glyph_h < FONT_HEIGHT:
        raise LayoutOverflowError(
            f"glyph height {glyph_h}px cannot carry a {FONT_HEIGHT}-row font; "
            "raise glyph_height_frac or enlarge the viewport"
        )
    glyph_w = (FONT_WIDTH * glyph_h) // FONT_HEIGHT
    gap = max(1, glyph_w // FONT_WIDTH)
    total_w = len(value) * glyph_w + (len(value) - 1) * gap
    if total_w > viewport_w or glyph_h > viewport_h:
        raise LayoutOverflowError(
            f"value {value!r} needs {total_w}x{glyph_h}px, viewport is "
            f"{viewport_w}x{viewport_h}px; shrink glyph_height_frac or enlarge the viewport"
        )
    x0 = (viewport_w - total_w) // 2
    y0 = (viewport_h - glyph_h) // 2
    return x0, y0, glyph_h, glyph_w, gap


def rasterize_glyphs(value: str, viewport_w: int, viewport_h: int, height_frac: float) -> np.ndarray:
    """Render ``value`` into a (viewport_h, viewport_w) uint8 mask, 1 = digit.

    Purely integer arithmetic: scaled pixel (y, x) of a glyph copies font
    cell (y * 7 // glyph_h, x * 5 // glyph_w).  When the scale factor is a
    whole number this is exact block replication, so glyph coverage equals
    the font's fill ratio exactly.
    """
    validate_value(value)
    if viewport_w <= 0 or viewport_h <= 0:
        raise InvalidSpecError(f"viewport must be positive, got {viewport_w}x{viewport_h}")
    if not 0.0 < height_frac <= 1.0:
        raise InvalidSpecError(f"glyph_height_frac must be in (0, 1], got {height_frac}")

    x0, y0, glyph_h, glyph_w, gap = glyph_layout(value, viewport_w, viewport_h, height_frac)
    rows = (np.arange(glyph_h) * FONT_HEIGHT) // glyph_h
    cols = (np.arange(glyph_w) * FONT_WIDTH) // glyph_w

    mask = np.zeros((viewport_h, viewport_w), dtype=np.uint8)
    for i, digit in enumerate(value):
        scaled = font_cell(digit)[np.ix_(rows, cols)]
        gx = x0 + i * (glyph_w + gap)
        mask[y0 : y0 + glyph_h, gx : gx + glyph_w] = scaled
    return mask
