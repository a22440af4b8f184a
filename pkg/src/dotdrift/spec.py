"""Challenge specs: the full deterministic recipe for one challenge.

A spec plus this package version pins every rendered bit.  The canonical
JSON form (sorted keys, no whitespace, field names as in the dataclass)
is the interchange format for CLI sidecars, pool manifests, and the spec
digest.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

from .errors import InvalidSpecError
from .glyphs import glyph_layout, validate_value

SCALE_KINDS = ("constant", "linear", "sinusoidal")
SCALE_MIN = 0.5
SCALE_MAX = 2.0

# Trajectory evaluation quantum.  Scale factors are snapped to this grid so
# nearest-neighbor sampling cannot flip on last-ulp libm differences.
_SCALE_QUANTUM = 1e-9


@dataclass(frozen=True)
class ScaleTrajectory:
    """Per-frame scale factor of one layer, centered on the viewport.

    kind:
      constant    -> base
      linear      -> base + amplitude * frame / period_frames
      sinusoidal  -> base + amplitude * sin(2*pi*frame / period_frames)
    """

    kind: str = "constant"
    base: float = 1.0
    amplitude: float = 0.0
    period_frames: int = 1

    def value_at(self, frame_index: int) -> float:
        if self.kind == "constant":
            s = self.base
        elif self.kind == "linear":
            s = self.base + self.amplitude * (frame_index / max(self.period_frames, 1))
        elif self.kind == "sinusoidal":
            s = self.base + self.amplitude * math.sin(
                2.0 * math.pi * frame_index / max(self.period_frames, 1)
            )
        else:
            raise InvalidSpecError(f"unknown scale kind {self.kind!r}")
        return round(s / _SCALE_QUANTUM) * _SCALE_QUANTUM

    def series(self, frame_count: int) -> list[float]:
        return [self.value_at(k) for k in range(frame_count)]

    @classmethod
    def constant(cls, base: float = 1.0) -> "ScaleTrajectory":
        return cls(kind="constant", base=base)

    @classmethod
    def linear(cls, base: float, amplitude: float, period_frames: int) -> "ScaleTrajectory":
        return cls(kind="linear", base=base, amplitude=amplitude, period_frames=period_frames)

    @classmethod
    def sinusoidal(cls, base: float, amplitude: float, period_frames: int) -> "ScaleTrajectory":
        return cls(kind="sinusoidal", base=base, amplitude=amplitude, period_frames=period_frames)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "base": self.base,
            "amplitude": self.amplitude,
            "period_frames": self.period_frames,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScaleTrajectory":
        return cls(
            kind=data["kind"],
            base=float(data["base"]),
            amplitude=float(data.get("amplitude", 0.0)),
            period_frames=int(data.get("period_frames", 1)),
        )


IDENTITY_SCALE = ScaleTrajectory.constant(1.0)

# Defaults: ~3 s loop, digits at half the viewport height, and both layers
# in non-identity motion.  The element keeps nonzero velocity on BOTH axes
# and a small scale amplitude: larger wobble (or a frozen axis) lets the
# scale term cancel the translation for some pixels, which re-samples the
# same texel frame after frame and leaks the mask into the temporal
# variance image (measured: amp 0.05 with velocity (-1,0) gives var_corr
# ~0.13; this default gives ~0.04 over 100 seeds).
DEFAULT_WIDTH = 400
DEFAULT_HEIGHT = 200
DEFAULT_FRAME_COUNT = 60
DEFAULT_FRAME_DELAY_MS = 50
DEFAULT_NOISE_DENSITY = 0.5
DEFAULT_BG_VELOCITY = (2.0, 1.0)
DEFAULT_EL_VELOCITY = (-1.0, 1.0)
DEFAULT_BG_SCALE = ScaleTrajectory.constant(1.0)
DEFAULT_EL_SCALE = ScaleTrajectory.sinusoidal(base=1.0, amplitude=0.02, period_frames=40)
DEFAULT_GLYPH_HEIGHT_FRAC = 0.5


@dataclass(frozen=True)
class ChallengeSpec:
    """Deterministic recipe for one challenge."""

    value: str
    seed: int
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT
    frame_count: int = DEFAULT_FRAME_COUNT
    frame_delay_ms: int = DEFAULT_FRAME_DELAY_MS
    noise_density: float = DEFAULT_NOISE_DENSITY
    bg_velocity: tuple[float, float] = DEFAULT_BG_VELOCITY
    el_velocity: tuple[float, float] = DEFAULT_EL_VELOCITY
    bg_scale: ScaleTrajectory = field(default_factory=lambda: DEFAULT_BG_SCALE)
    el_scale: ScaleTrajectory = field(default_factory=lambda: DEFAULT_EL_SCALE)
    glyph_height_frac: float = DEFAULT_GLYPH_HEIGHT_FRAC

    def validate(self) -> "ChallengeSpec":
        """Check every invariant; raise InvalidSpecError on the first violation."""
        validate_value(self.value)
        if self.width <= 0 or self.height <= 0:
            raise InvalidSpecError(f"viewport must be positive, got {self.width}x{self.height}")
        if self.frame_count < 2:
            raise InvalidSpecError(f"frame_count must be >= 2, got {self.frame_count}")
        if self.frame_delay_ms <= 0:
            raise InvalidSpecError(f"frame_delay_ms must be positive, got {self.frame_delay_ms}")
        if not 0.0 < self.noise_density < 1.0:
            raise InvalidSpecError(f"noise_density must be in (0, 1), got {self.noise_density}")
        if not 0.0 < self.glyph_height_frac <= 1.0:
            raise InvalidSpecError(
                f"glyph_height_frac must be in (0, 1], got {self.glyph_height_frac}"
            )
        if not 0 <= self.seed < (1 << 64):
            raise InvalidSpecError("seed must be a 64-bit unsigned integer")
        for name, traj in (("bg_scale", self.bg_scale), ("el_scale", self.el_scale)):
            if traj.kind not in SCALE_KINDS:
                raise InvalidSpecError(f"{name}: unknown kind {traj.kind!r}")
            series = traj.series(self.frame_count)
            if min(series) < SCALE_MIN or max(series) > SCALE_MAX:
                raise InvalidSpecError(
                    f"{name}: scale leaves [{SCALE_MIN}, {SCALE_MAX}] within "
                    f"{self.frame_count} frames (range {min(series):.4f}..{max(series):.4f})"
                )
        if self._layers_locked():
            raise InvalidSpecError(
                "layers rigidly locked: background and element share velocity and "
                "scale trajectory, so the challenge is unsolvable by humans too"
            )
        # Raises LayoutOverflowError if the digits cannot fit.
        glyph_layout(self.value, self.width, self.height, self.glyph_height_frac)
        return self

    def _layers_locked(self) -> bool:
        # Trajectories are compared by their evaluated per-frame values, so
        # e.g. sinusoidal(amplitude=0) equals constant of the same base.
        if tuple(self.bg_velocity) != tuple(self.el_velocity):
            return False
        return self.bg_scale.series(self.frame_count) == self.el_scale.series(self.frame_count)

    # -- canonical JSON ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "width": self.width,
            "height": self.height,
            "frame_count": self.frame_count,
            "frame_delay_ms": self.frame_delay_ms,
            "noise_density": self.noise_density,
            "bg_velocity": [self.bg_velocity[0], self.bg_velocity[1]],
            "el_velocity": [self.el_velocity[0], self.el_velocity[1]],
            "bg_scale": self.bg_scale.to_json_dict(),
            "el_scale": self.el_scale.to_json_dict(),
            "glyph_height_frac": self.glyph_height_frac,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ChallengeSpec":
        try:
            return cls(
                value=str(data["value"]),
                seed=int(data["seed"]),
                width=int(data["width"]),
                height=int(data["height"]),
                frame_count=int(data["frame_count"]),
                frame_delay_ms=int(data["frame_delay_ms"]),
                noise_density=float(data["noise_density"]),
                bg_velocity=(float(data["bg_velocity"][0]), float(data["bg_velocity"][1])),
                el_velocity=(float(data["el_velocity"][0]), float(data["el_velocity"][1])),
                bg_scale=ScaleTrajectory.from_json_dict(data["bg_scale"]),
                el_scale=ScaleTrajectory.from_json_dict(data["el_scale"]),
                glyph_height_frac=float(data["glyph_height_frac"]),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidSpecError(f"malformed spec JSON: {exc}") from exc

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        """SHA-256 hex digest of the canonical JSON form."""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def with_overrides(self, **kwargs) -> "ChallengeSpec":
        return replace(self, **kwargs)


def load_spec(path) -> ChallengeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return ChallengeSpec.from_json_dict(json.load(fh))


def save_spec(spec: ChallengeSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(spec.canonical_json())
        fh.write("\n")


def static_text_variant(spec: ChallengeSpec) -> ChallengeSpec:
    """The literal keep-the-text-still configuration.

    Useful as a counterexample: a motionless element has zero temporal
    variance inside the mask, which the variance attack reads off directly.
    """
    return spec.with_overrides(el_velocity=(0.0, 0.0), el_scale=IDENTITY_SCALE)
