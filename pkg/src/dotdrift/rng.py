"""Deterministic 64-bit noise generator (SplitMix64).

All randomness that affects rendered pixels flows through this module so
that a challenge is a pure function of its spec.  The generator is the
SplitMix64 finalizer chain, chosen because it is a short, well-studied
shift/multiply recipe that is trivial to reimplement in any language:

    state    <- state + 0x9E3779B97F4A7C15          (per draw)
    z        <- state
    z        <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
    z        <- (z XOR (z >> 27)) * 0x94D049BB133111EB
    output   <- z XOR (z >> 31)

with all arithmetic modulo 2**64.  The i-th output (1-based) of a stream
seeded with ``s`` is therefore ``mix64(s + i * GOLDEN_GAMMA)``, which is
what the vectorized path computes directly.

Do NOT use Python's built-in ``hash()`` anywhere in this package — it is
salted per process.
"""

from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MULT_1 = 0xBF58476D1CE4E5B9
_MIX_MULT_2 = 0x94D049BB133111EB
_U64 = (1 << 64) - 1

# Stream tags, XOR-folded into a seed before mixing.  Values are the
# little-endian bytes of the ASCII labels, fixed forever.
TAG_BACKGROUND = int.from_bytes(b"bg.noise", "little")
TAG_ELEMENT = int.from_bytes(b"el.noise", "little")
TAG_VARIANT = int.from_bytes(b"variant.", "little")
TAG_VALUE = int.from_bytes(b"value...", "little")


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= _U64
    z = ((z ^ (z >> 30)) * _MIX_MULT_1) & _U64
    z = ((z ^ (z >> 27)) * _MIX_MULT_2) & _U64
    return (z ^ (z >> 31)) & _U64


def derive_seed(seed: int, tag: int) -> int:
    """Derive an independent stream seed from (seed, tag).

    Used to split one spec seed into decorrelated per-layer and
    per-variant streams; ``mix64`` is a bijection so distinct tags give
    distinct seeds.
    """
    return mix64((seed ^ tag) & _U64)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of the SplitMix64 stream seeded with ``seed``.

    Vectorized closed form; bit-identical to advancing the scalar
    recurrence ``count`` times.
    """
    with np.errstate(over="ignore"):
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(seed & _U64) + idx * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_MULT_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_MULT_2)
        return z ^ (z >> np.uint64(31))


def bernoulli_bits(seed: int, count: int, density: float) -> np.ndarray:
    """``count`` deterministic Bernoulli(density) bits as uint8.

    A draw is 1 iff its 64-bit output is below ``floor(density * 2**64)``,
    so equal seeds give equal bits on every platform.
    """
    threshold = np.uint64(int(density * (1 << 64)))
    return (splitmix64(seed, count) < threshold).astype(np.uint8)
