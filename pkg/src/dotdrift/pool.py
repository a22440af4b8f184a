"""Pre-rendered challenge pools: batch generation and the manifest file.

A pool is a directory of GIFs plus a single ``manifest.json`` mapping
value-independent filenames to specs and answers.  The manifest is the
server-side answer key; media filenames never derive from values.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidSpecError
from .gifenc import encode_gif
from .render import render_sequence
from .rng import TAG_VALUE, TAG_VARIANT, derive_seed
from .spec import ChallengeSpec

DEFAULT_POOL_SIZE = 100
DEFAULT_VALUE_LENGTH = 3
SEED_POLICIES = ("derived", "fixed")


@dataclass(frozen=True)
class VariantEntry:
    variant_id: str
    value: str
    spec: ChallengeSpec
    media_file: str

    def to_json_dict(self) -> dict:
        return {
            "variant_id": self.variant_id,
            "value": self.value,
            "spec": self.spec.to_json_dict(),
            "media_file": self.media_file,
        }


@dataclass(frozen=True)
class VariantManifest:
    entries: list[VariantEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def validate(self, base_dir: Path) -> None:
        ids = [e.variant_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise InvalidSpecError("manifest variant_ids are not unique")
        for entry in self.entries:
            if entry.spec.value != entry.value:
                raise InvalidSpecError(
                    f"{entry.variant_id}: manifest value {entry.value!r} "
                    f"disagrees with spec value {entry.spec.value!r}"
                )
            path = base_dir / entry.media_file
            if not path.is_file():
                raise FileNotFoundError(f"{entry.variant_id}: missing media file {path}")

    def to_json_dict(self) -> dict:
        return {"entries": [e.to_json_dict() for e in self.entries]}

    def save(self, path: Path) -> None:
        path = Path(path)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "VariantManifest":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        entries = [
            VariantEntry(
                variant_id=item["variant_id"],
                value=item["value"],
                spec=ChallengeSpec.from_json_dict(item["spec"]),
                media_file=item["media_file"],
            )
            for item in data["entries"]
        ]
        return cls(entries=entries)


def draw_values(count: int, master_seed: int, length: int = DEFAULT_VALUE_LENGTH) -> list[str]:
    """``count`` random digit strings, unique while the space allows.

    Deterministic in ``master_seed``; the value stream is decoupled from
    the per-variant render seeds so either can change independently.
    """
    space = 10**length
    rng = random.Random(derive_seed(master_seed, TAG_VALUE))
    values = []
    if count <= space:
        picks = rng.sample(range(space), count)
    else:
        picks = rng.sample(range(space), space)
        picks += [rng.randrange(space) for _ in range(count - space)]
    for n in picks:
        values.append(f"{n:0{length}d}")
    return values


def variant_seed(master_seed: int, index: int, policy: str = "derived") -> int:
    if policy == "fixed":
        return master_seed
    if policy == "derived":
        return derive_seed(derive_seed(master_seed, TAG_VARIANT), index)
    raise InvalidSpecError(f"unknown seed policy {policy!r}; expected one of {SEED_POLICIES}")


def build_pool(
    out_dir,
    count: int,
    master_seed: int,
    base_spec: ChallengeSpec | None = None,
    seed_policy: str = "derived",
    value_length: int = DEFAULT_VALUE_LENGTH,
) -> VariantManifest:
    """Render ``count`` variants into ``out_dir`` and write the manifest.

    Filenames are index-based (``media/variant_000.gif``): safe to expose,
    value never appears.  Rerunning with the same arguments reproduces
    every byte.
    """
    if count < 1:
        raise InvalidSpecError(f"pool size must be >= 1, got {count}")
    out_dir = Path(out_dir)
    media_dir = out_dir / "media"
    media_dir.mkdir(parents=True, exist_ok=True)
    values = draw_values(count, master_seed, length=value_length)
    digits = max(3, len(str(count - 1)))
    entries = []
    for i, value in enumerate(values):
        spec_fields = dict(value=value, seed=variant_seed(master_seed, i, seed_policy))
        spec = (
            base_spec.with_overrides(**spec_fields)
            if base_spec is not None
            else ChallengeSpec(**spec_fields)
        )
        spec.validate()
        media_file = f"media/variant_{i:0{digits}d}.gif"
        (out_dir / media_file).write_bytes(encode_gif(render_sequence(spec)))
        entries.append(
            VariantEntry(
                variant_id=f"v{i:0{digits}d}", value=value, spec=spec, media_file=media_file
            )
        )
    manifest = VariantManifest(entries=entries)
    manifest.save(out_dir / "manifest.json")
    return manifest
