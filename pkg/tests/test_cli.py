import json
import signal
import socket
import subprocess
import sys
import time

import httpx
import pytest

from dotdrift import ChallengeSpec, load_spec, render_sequence, encode_gif
from dotdrift.cli import main, parse_scale, parse_velocity
from dotdrift.spec import static_text_variant

FAST_ARGS = ["--width", "96", "--height", "64", "--frames", "6", "--glyph-height-frac", "0.4"]


def run_cli(argv):
    return main(argv)


def test_parse_velocity():
    assert parse_velocity("2,1") == (2.0, 1.0)
    assert parse_velocity("-1.5,0") == (-1.5, 0.0)
    with pytest.raises(Exception):
        parse_velocity("2")


def test_parse_scale():
    traj = parse_scale("sin:1:0.05:40")
    assert (traj.kind, traj.base, traj.amplitude, traj.period_frames) == (
        "sinusoidal",
        1.0,
        0.05,
        40,
    )
    assert parse_scale("const:1").kind == "constant"
    assert parse_scale("linear:1:0.2:60").kind == "linear"
    with pytest.raises(Exception):
        parse_scale("sin:1:2")


def test_generate_writes_gif_and_sidecar(tmp_path, capsys):
    out = tmp_path / "out.gif"
    code = run_cli(["generate", "--value", "243", "--seed", "1", "-o", str(out), *FAST_ARGS])
    assert code == 0
    sidecar = tmp_path / "out.spec.json"
    assert out.is_file() and sidecar.is_file()
    info = json.loads(capsys.readouterr().out)
    assert info["gif"] == str(out)

    # the sidecar regenerates the GIF bit-exactly
    spec = load_spec(sidecar)
    assert encode_gif(render_sequence(spec)) == out.read_bytes()


def test_generate_rerun_byte_identical(tmp_path):
    a = tmp_path / "a.gif"
    b = tmp_path / "b.gif"
    argv = ["generate", "--value", "243", "--seed", "1", *FAST_ARGS]
    assert run_cli(argv + ["-o", str(a)]) == 0
    assert run_cli(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.spec.json").read_bytes() == (tmp_path / "b.spec.json").read_bytes()


def test_generate_dump_pbm(tmp_path):
    out = tmp_path / "out.gif"
    pbm_dir = tmp_path / "frames"
    code = run_cli(
        ["generate", "--value", "7", "--seed", "2", "-o", str(out), "--dump-pbm", str(pbm_dir), *FAST_ARGS]
    )
    assert code == 0
    assert len(list(pbm_dir.glob("*.pbm"))) == 6


def test_generate_rejects_overlong_value(tmp_path, capsys):
    code = run_cli(["generate", "--value", "12345678901", "-o", str(tmp_path / "x.gif")])
    assert code == 1
    assert "value" in capsys.readouterr().err


def test_generate_rejects_locked_layers(tmp_path, capsys):
    code = run_cli(
        [
            "generate",
            "--value",
            "243",
            "-o",
            str(tmp_path / "x.gif"),
            "--bg-velocity",
            "0,0",
            "--el-velocity",
            "0,0",
            "--bg-scale",
            "const:1",
            "--el-scale",
            "const:1",
        ]
    )
    assert code == 1
    assert "rigidly locked" in capsys.readouterr().err


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as excinfo:
        run_cli(["generate"])  # missing required arguments
    assert excinfo.value.code == 2


def test_batch_and_rerun(tmp_path, capsys):
    a_dir = tmp_path / "a"
    argv = ["batch", "--count", "2", "--master-seed", "5", *FAST_ARGS]
    assert run_cli(argv + ["--out-dir", str(a_dir)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["count"] == 2
    manifest = json.loads((a_dir / "manifest.json").read_text())
    assert len(manifest["entries"]) == 2

    b_dir = tmp_path / "b"
    assert run_cli(argv + ["--out-dir", str(b_dir)]) == 0
    assert (a_dir / "manifest.json").read_bytes() == (b_dir / "manifest.json").read_bytes()
    for media in sorted((a_dir / "media").iterdir()):
        assert media.read_bytes() == (b_dir / "media" / media.name).read_bytes()


def test_batch_single_entry(tmp_path):
    out = tmp_path / "single"
    assert run_cli(["batch", "--count", "1", "--out-dir", str(out), *FAST_ARGS]) == 0
    assert len(json.loads((out / "manifest.json").read_text())["entries"]) == 1


def test_analyze_default_spec_passes(tmp_path, capsys, default_spec):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(default_spec.canonical_json())
    code = run_cli(["analyze", "--spec", str(spec_path)])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    assert report["per_frame_corr"] < 0.05
    assert report["oracle_iou"] >= 0.8


def test_analyze_static_text_fails(tmp_path, capsys, default_spec):
    spec_path = tmp_path / "static.json"
    spec_path.write_text(static_text_variant(default_spec).canonical_json())
    code = run_cli(["analyze", "--spec", str(spec_path)])
    captured = capsys.readouterr()
    assert code == 1
    report = json.loads(captured.out)
    assert report["temporal_var_corr"] >= 0.9
    assert "temporal_var_corr" in captured.err


def test_analyze_locked_spec_rejected_before_analysis(tmp_path, capsys, default_spec):
    locked = default_spec.with_overrides(
        el_velocity=default_spec.bg_velocity, el_scale=default_spec.bg_scale
    )
    spec_path = tmp_path / "locked.json"
    spec_path.write_text(locked.canonical_json())
    assert run_cli(["analyze", "--spec", str(spec_path)]) == 1
    assert "rigidly locked" in capsys.readouterr().err


def test_analyze_missing_file_is_io_error(tmp_path):
    assert run_cli(["analyze", "--spec", str(tmp_path / "nope.json")]) == 3


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def serve_pool(tmp_path_factory):
    pool = tmp_path_factory.mktemp("servepool")
    base = ChallengeSpec(value="0", seed=0, width=96, height=64, frame_count=6)
    from dotdrift import build_pool

    build_pool(pool, count=2, master_seed=13, base_spec=base)
    return pool


def test_serve_lifecycle(tmp_path, serve_pool):
    port = _free_port()
    journal = tmp_path / "journal.jsonl"
    config_path = tmp_path / "service.json"
    config_path.write_text(
        json.dumps(
            {
                "pool_path": str(serve_pool),
                "bind_port": port,
                "rate_limit_per_minute": 0,
                "journal_path": str(journal),
            }
        )
    )
    proc = subprocess.Popen(
        [sys.executable, "-m", "dotdrift.cli", "serve", "--config", str(config_path)],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
    )
    try:
        base_url = f"http://127.0.0.1:{port}"
        deadline = time.time() + 30
        last_error = None
        while time.time() < deadline:
            try:
                if httpx.get(f"{base_url}/v1/healthz", timeout=1.0).status_code == 200:
                    break
            except httpx.HTTPError as exc:
                last_error = exc
                time.sleep(0.2)
        else:
            raise AssertionError(f"service never became healthy: {last_error}")
        issued = httpx.post(f"{base_url}/v1/challenges", timeout=5.0)
        assert issued.status_code == 201
        media = httpx.get(base_url + issued.json()["media_url"], timeout=5.0)
        assert media.status_code == 200 and media.content.startswith(b"GIF89a")
    finally:
        proc.send_signal(signal.SIGTERM)
        code = proc.wait(timeout=15)
    output = proc.stdout.read().decode()
    # uvicorn re-raises the signal after graceful shutdown, so -SIGTERM is
    # the clean exit signature (0 on older versions)
    assert code in (0, -signal.SIGTERM)
    assert "Application shutdown complete" in output
    journal_events = [json.loads(line) for line in journal.read_text().splitlines()]
    assert any(event["event"] == "issue" for event in journal_events)


def test_serve_rejects_port_in_use(tmp_path, serve_pool):
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        sock.listen(1)
        port = sock.getsockname()[1]
        config_path = tmp_path / "service.json"
        config_path.write_text(json.dumps({"pool_path": str(serve_pool), "bind_port": port}))
        proc = subprocess.run(
            [sys.executable, "-m", "dotdrift.cli", "serve", "--config", str(config_path)],
            capture_output=True,
            timeout=60,
        )
        assert proc.returncode != 0


def test_serve_missing_pool_errors(tmp_path, capsys):
    config_path = tmp_path / "service.json"
    config_path.write_text(json.dumps({"pool_path": str(tmp_path / "absent")}))
    code = run_cli(["serve", "--config", str(config_path)])
    assert code != 0
    assert "absent" in capsys.readouterr().err
