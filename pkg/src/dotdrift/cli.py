"""Command-line entry point.

Subcommands: ``generate`` one challenge GIF (+ spec sidecar), ``batch`` a
pre-rendered pool with manifest, ``analyze`` a spec or pool against the
attack-suite bounds, ``serve`` the verification API.

Exit codes: 0 success/pass, 1 invariant or analysis failure, 2 usage
error, 3 I/O error.  Machine-readable output goes to stdout as canonical
JSON; logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import analyze_spec
from .errors import ChallengeError
from .gifenc import encode_gif
from .pool import DEFAULT_POOL_SIZE, DEFAULT_VALUE_LENGTH, SEED_POLICIES, VariantManifest, build_pool
from .render import render_sequence
from .spec import ChallengeSpec, ScaleTrajectory, load_spec, save_spec

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

_SCALE_KIND_ALIASES = {"const": "constant", "lin": "linear", "sin": "sinusoidal"}


def parse_velocity(text: str) -> tuple[float, float]:
    """Parse 'dx,dy' into a velocity pair."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected dx,dy — got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_scale(text: str) -> ScaleTrajectory:
    """Parse 'kind:base[:amplitude:period]' (kind one of const/linear/sin)."""
    parts = text.split(":")
    kind = _SCALE_KIND_ALIASES.get(parts[0], parts[0])
    try:
        if len(parts) == 2:
            return ScaleTrajectory(kind=kind, base=float(parts[1]))
        if len(parts) == 4:
            return ScaleTrajectory(
                kind=kind,
                base=float(parts[1]),
                amplitude=float(parts[2]),
                period_frames=int(parts[3]),
            )
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    raise argparse.ArgumentTypeError(
        f"expected kind:base or kind:base:amplitude:period — got {text!r}"
    )


def _add_spec_overrides(parser: argparse.ArgumentParser, with_value: bool) -> None:
    if with_value:
        parser.add_argument("--value", required=True, help="digit string to hide (1-6 chars)")
        parser.add_argument("--seed", type=int, default=0, help="64-bit render seed")
    parser.add_argument("--width", type=int)
    parser.add_argument("--height", type=int)
    parser.add_argument("--frames", type=int, dest="frame_count")
    parser.add_argument("--delay-ms", type=int, dest="frame_delay_ms")
    parser.add_argument("--density", type=float, dest="noise_density")
    parser.add_argument("--bg-velocity", type=parse_velocity)
    parser.add_argument("--el-velocity", type=parse_velocity)
    parser.add_argument("--bg-scale", type=parse_scale)
    parser.add_argument("--el-scale", type=parse_scale)
    parser.add_argument("--glyph-height-frac", type=float)


def _spec_from_args(args, value: str, seed: int) -> ChallengeSpec:
    overrides = {
        name: getattr(args, name)
        for name in (
            "width",
            "height",
            "frame_count",
            "frame_delay_ms",
            "noise_density",
            "bg_velocity",
            "el_velocity",
            "bg_scale",
            "el_scale",
            "glyph_height_frac",
        )
        if getattr(args, name, None) is not None
    }
    return ChallengeSpec(value=value, seed=seed, **overrides).validate()


def cmd_generate(args) -> int:
    spec = _spec_from_args(args, args.value, args.seed)
    out = Path(args.out)
    seq = render_sequence(spec)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(encode_gif(seq))
    sidecar = out.with_suffix(".spec.json")
    save_spec(spec, sidecar)
    if args.dump_pbm:
        from .pbm import dump_frames_pbm

        dump_frames_pbm(seq, args.dump_pbm)
    print(json.dumps({"gif": str(out), "spec": str(sidecar), "digest": spec.digest()}))
    return EXIT_OK


def cmd_batch(args) -> int:
    base = None
    non_default = {
        k: getattr(args, k)
        for k in (
            "width",
            "height",
            "frame_count",
            "frame_delay_ms",
            "noise_density",
            "bg_velocity",
            "el_velocity",
            "bg_scale",
            "el_scale",
            "glyph_height_frac",
        )
        if getattr(args, k, None) is not None
    }
    if non_default:
        base = ChallengeSpec(value="0", seed=0, **non_default)
    manifest = build_pool(
        args.out_dir,
        count=args.count,
        master_seed=args.master_seed,
        base_spec=base,
        seed_policy=args.seed_policy,
        value_length=args.value_length,
    )
    print(
        json.dumps(
            {
                "out_dir": str(args.out_dir),
                "count": len(manifest),
                "manifest": str(Path(args.out_dir) / "manifest.json"),
            }
        )
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.spec:
        report = analyze_spec(load_spec(args.spec).validate())
        print(json.dumps(report.to_json_dict(), sort_keys=True))
        for problem in report.failures():
            print(f"analysis bound violated: {problem}", file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_FAILURE
    manifest_path = Path(args.pool)
    if manifest_path.is_dir():
        manifest_path = manifest_path / "manifest.json"
    manifest = VariantManifest.load(manifest_path)
    reports = []
    ok = True
    for entry in manifest.entries:
        report = analyze_spec(entry.spec.validate())
        reports.append({"variant_id": entry.variant_id, "report": report.to_json_dict()})
        ok = ok and report.passed
        for problem in report.failures():
            print(f"{entry.variant_id}: {problem}", file=sys.stderr)
    print(json.dumps({"variants": reports, "passed": ok}, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.config import load_config

    config = load_config(args.config)
    if args.host:
        config = config.__class__(**{**config.to_json_dict(), "bind_host": args.host})
    if args.port:
        config = config.__class__(**{**config.to_json_dict(), "bind_port": args.port})
    app = create_app(config)
    uvicorn.run(app, host=config.bind_host, port=config.bind_port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dotdrift",
        description="Generate, analyze, and serve motion-revealed digit challenges.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="render one challenge GIF plus its spec sidecar")
    _add_spec_overrides(p_gen, with_value=True)
    p_gen.add_argument("-o", "--out", required=True, help="output GIF path")
    p_gen.add_argument("--dump-pbm", help="also dump per-frame PBM files into this directory")
    p_gen.set_defaults(func=cmd_generate)

    p_batch = sub.add_parser("batch", help="pre-render a challenge pool with manifest")
    p_batch.add_argument("--count", type=int, default=DEFAULT_POOL_SIZE)
    p_batch.add_argument("--out-dir", required=True)
    p_batch.add_argument("--master-seed", type=int, default=0)
    p_batch.add_argument("--value-length", type=int, default=DEFAULT_VALUE_LENGTH)
    p_batch.add_argument("--seed-policy", choices=SEED_POLICIES, default="derived")
    _add_spec_overrides(p_batch, with_value=False)
    p_batch.set_defaults(func=cmd_batch)

    p_an = sub.add_parser("analyze", help="run the attack suite; exit 0 iff all bounds hold")
    group = p_an.add_mutually_exclusive_group(required=True)
    group.add_argument("--spec", help="spec JSON path")
    group.add_argument("--pool", help="pool directory or manifest path")
    p_an.set_defaults(func=cmd_analyze)

    p_serve = sub.add_parser("serve", help="run the challenge HTTP service")
    p_serve.add_argument("--config", help="service config JSON path")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChallengeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
