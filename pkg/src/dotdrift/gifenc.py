"""Bit-exact GIF89a encoder for 1-bit frame sequences.

Fixed layout, no encoder heuristics, so identical frames give identical
bytes:

  header "GIF89a" | logical screen descriptor | 2-entry global color
  table (black, white) | NETSCAPE2.0 loop-forever extension | per frame:
  graphic control extension (disposal 1, delay in centiseconds, floor,
  min 2) + image descriptor + LZW data (minimum code size 2) | trailer.

Every frame is a full-canvas replace; no inter-frame differencing, no
transparency, no interlacing.  The LZW coder emits an initial clear code,
grows code width when the entry just added reaches the width limit, and
emits clear + resets once the table holds 4096 entries.
"""

from __future__ import annotations

import numpy as np

from .errors import ChallengeError, FormatLimitError
from .render import FrameSequence

GIF_MAX_DIMENSION = 0xFFFF
MIN_CODE_SIZE = 2  # 2-color palette still requires >= 2 by the GIF spec
MIN_DELAY_CS = 2
_MAX_TABLE = 4096

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def _lzw_encode_py(pixels: np.ndarray, min_code_size: int) -> bytes:
    """Reference LZW coder in plain Python; the numba path must match it."""
    clear = 1 << min_code_size
    eoi = clear + 1
    out = bytearray()
    bitbuf = 0
    nbits = 0
    code_size = min_code_size + 1
    next_code = eoi + 1
    table: dict[int, int] = {}

    def emit(code: int) -> None:
        nonlocal bitbuf, nbits
        bitbuf |= code << nbits
        nbits += code_size
        while nbits >= 8:
            out.append(bitbuf & 0xFF)
            bitbuf >>= 8
            nbits -= 8

    emit(clear)
    data = pixels.tolist()
    prefix = data[0]
    for sym in data[1:]:
        key = (prefix << 12) | sym
        nxt = table.get(key)
        if nxt is not None:
            prefix = nxt
            continue
        emit(prefix)
        if next_code < _MAX_TABLE:
            table[key] = next_code
            if next_code == (1 << code_size) and code_size < 12:
                code_size += 1
            next_code += 1
        else:
            emit(clear)
            table.clear()
            code_size = min_code_size + 1
            next_code = eoi + 1
        prefix = sym
    emit(prefix)
    emit(eoi)
    if nbits > 0:
        out.append(bitbuf & 0xFF)
    return bytes(out)


if _HAVE_NUMBA:

    @_njit(cache=True)
    def _lzw_encode_jit(pixels, min_code_size):  # pragma: no cover - exercised via wrapper
        clear = 1 << min_code_size
        eoi = clear + 1
        alphabet = clear
        children = np.zeros(_MAX_TABLE * alphabet, dtype=np.int16)
        out = np.zeros(pixels.size * 2 + 64, dtype=np.uint8)
        nout = 0
        bitbuf = 0
        nbits = 0
        code_size = min_code_size + 1
        next_code = eoi + 1

        prefix = np.int64(pixels[0])
        # initial clear code
        bitbuf |= clear << nbits
        nbits += code_size
        while nbits >= 8:
            out[nout] = bitbuf & 0xFF
            bitbuf >>= 8
            nbits -= 8
            nout += 1

        for i in range(1, pixels.size):
            sym = np.int64(pixels[i])
            nxt = children[prefix * alphabet + sym]
            if nxt != 0:
                prefix = np.int64(nxt)
                continue
            bitbuf |= prefix << nbits
            nbits += code_size
            while nbits >= 8:
                out[nout] = bitbuf & 0xFF
                bitbuf >>= 8
                nbits -= 8
                nout += 1
            if next_code < _MAX_TABLE:
                children[prefix * alphabet + sym] = next_code
                if next_code == (1 << code_size) and code_size < 12:
                    code_size += 1
                next_code += 1
            else:
                bitbuf |= clear << nbits
                nbits += code_size
                while nbits >= 8:
                    out[nout] = bitbuf & 0xFF
                    bitbuf >>= 8
                    nbits -= 8
                    nout += 1
                children[:] = 0
                code_size = min_code_size + 1
                next_code = eoi + 1
            prefix = sym

        for code in (prefix, np.int64(eoi)):
            bitbuf |= code << nbits
            nbits += code_size
            while nbits >= 8:
                out[nout] = bitbuf & 0xFF
                bitbuf >>= 8
                nbits -= 8
                nout += 1
        if nbits > 0:
            out[nout] = bitbuf & 0xFF
            nout += 1
        return out[:nout]


def lzw_encode(pixels: np.ndarray, min_code_size: int = MIN_CODE_SIZE) -> bytes:
    """LZW-compress a flat uint8 pixel array (values < 2**min_code_size)."""
    if pixels.size == 0:
        raise ChallengeError("cannot LZW-encode an empty pixel array")
    flat = np.ascontiguousarray(pixels.reshape(-1), dtype=np.uint8)
    if _HAVE_NUMBA:
        return bytes(_lzw_encode_jit(flat, min_code_size).tobytes())
    return _lzw_encode_py(flat, min_code_size)


def _sub_blocks(data: bytes) -> bytes:
    """Split raw LZW bytes into <=255-byte GIF sub-blocks plus terminator."""
    parts = []
    for i in range(0, len(data), 255):
        chunk = data[i : i + 255]
        parts.append(bytes((len(chunk),)) + chunk)
    parts.append(b"\x00")
    return b"".join(parts)


def delay_centiseconds(frame_delay_ms: int) -> int:
    """GIF delay quantization: centisecond floor, minimum 2 cs."""
    return max(MIN_DELAY_CS, frame_delay_ms // 10)


def encode_gif(seq: FrameSequence) -> bytes:
    """Encode a frame sequence as an infinitely looping 2-color GIF89a.

    Deterministic: equal sequences give equal bytes.  Any conformant
    decoder reproduces the input frames bit-exactly.
    """
    if not seq.frames:
        raise ChallengeError("cannot encode an empty frame sequence")
    height, width = seq.frames[0].shape
    if width > GIF_MAX_DIMENSION or height > GIF_MAX_DIMENSION:
        raise FormatLimitError(
            f"GIF dimensions are 16-bit; {width}x{height} exceeds {GIF_MAX_DIMENSION}"
        )
    for i, frame in enumerate(seq.frames):
        if frame.shape != (height, width):
            raise ChallengeError(f"frame {i} has shape {frame.shape}, expected {(height, width)}")

    delay = delay_centiseconds(seq.frame_delay_ms)
    buf = bytearray()
    buf += b"GIF89a"
    buf += width.to_bytes(2, "little") + height.to_bytes(2, "little")
    # Packed: global color table present, color resolution 0, 2^(0+1)=2 entries.
    buf += bytes((0x80, 0x00, 0x00))
    buf += bytes((0, 0, 0, 255, 255, 255))  # palette: 0 = black, 1 = white
    buf += b"\x21\xff\x0bNETSCAPE2.0\x03\x01\x00\x00\x00"  # loop count 0 = forever
    for frame in seq.frames:
        # Graphic control: disposal 1 (draw on top; frames are full replaces).
        buf += bytes((0x21, 0xF9, 0x04, 0x04))
        buf += delay.to_bytes(2, "little")
        buf += b"\x00\x00"
        buf += b"\x2c" + b"\x00\x00\x00\x00"
        buf += width.to_bytes(2, "little") + height.to_bytes(2, "little")
        buf += b"\x00"
        buf += bytes((MIN_CODE_SIZE,))
        buf += _sub_blocks(lzw_encode(frame))
    buf += b"\x3b"
    return bytes(buf)
