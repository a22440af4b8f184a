"""Binary PBM (P4) frame dumps for debugging and golden tests.

PBM's bit sense is inverted relative to ours (1 = black ink there, 1 =
white here), so bits are flipped on the way out and back in; round-trips
are lossless.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .render import FrameSequence


def write_pbm(bits: np.ndarray, path: Path) -> None:
    height, width = bits.shape
    header = f"P4\n{width} {height}\n".encode("ascii")
    packed = np.packbits(1 - bits, axis=1)  # row-wise, padded to byte boundary
    path.write_bytes(header + packed.tobytes())


def read_pbm(path: Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if not raw.startswith(b"P4"):
        raise ValueError(f"{path}: not a binary PBM (P4) file")
    # Header: magic, whitespace/comments, width, height, single whitespace.
    pos = 2
    fields = []
    while len(fields) < 2:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(raw[start:pos]))
    pos += 1  # the single whitespace byte after the height
    width, height = fields
    row_bytes = (width + 7) // 8
    data = np.frombuffer(raw[pos : pos + row_bytes * height], dtype=np.uint8)
    rows = np.unpackbits(data.reshape(height, row_bytes), axis=1)[:, :width]
    return (1 - rows).astype(np.uint8)


def dump_frames_pbm(seq: FrameSequence, directory) -> list[Path]:
    """Write one zero-padded-index P4 file per frame; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    digits = max(3, len(str(max(len(seq.frames) - 1, 0))))
    paths = []
    for i, frame in enumerate(seq.frames):
        path = directory / f"{i:0{digits}d}.pbm"
        try:
            write_pbm(frame, path)
        except OSError as exc:
            raise OSError(f"failed writing frame {i} to {path}: {exc}") from exc
        paths.append(path)
    return paths
