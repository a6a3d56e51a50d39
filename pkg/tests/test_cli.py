"""Command-line tests: every command through main(), NDJSON on stdout."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from xpcc.cloud.model import PointCloud
from xpcc.cloud.ply import load_ply, save_ply
from xpcc.codec import read_header
from xpcc.main import main
from xpcc.metrics import PSNR_CAP, read_metrics_csv


def _events(out: str) -> list[dict]:
    return [json.loads(line) for line in out.splitlines() if line.strip()]


@pytest.fixture
def shell_ply(tmp_path: Path, shell: PointCloud) -> Path:
    path = tmp_path / "shell_0000.ply"
    save_ply(shell, path)
    return path


@pytest.fixture
def encoded(tmp_path: Path, shell_ply: Path, capsys: pytest.CaptureFixture[str]) -> Path:
    stream = tmp_path / "shell.xpcc"
    assert main(["encode", str(shell_ply), "-o", str(stream)]) == 0
    capsys.readouterr()
    return stream


def test_encode_reports_each_frame(tmp_path: Path, shell_ply: Path, capsys: pytest.CaptureFixture[str]) -> None:
    stream = tmp_path / "out.xpcc"
    assert main(["encode", str(shell_ply), "-o", str(stream), "--inter-period", "4"]) == 0
    events = _events(capsys.readouterr().out)
    assert [e["event"] for e in events] == ["status", "frame_encoded", "done"]
    assert events[1]["data"]["points"] == 10080
    assert events[1]["data"]["lost_points"] == 0
    done = events[-1]["data"]
    assert done["bytes"] == stream.stat().st_size
    assert done["lossless"] is True
    header, _ = read_header(stream.read_bytes())
    assert header.params.inter_period == 4


def test_config_file_is_overridden_by_flags(
    tmp_path: Path, shell_ply: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    config = tmp_path / "xpcc.cfg"
    config.write_text("geometry_qstep=4\nattribute_qstep=8\n")
    stream = tmp_path / "out.xpcc"
    args = ["--quiet", "encode", str(shell_ply), "-o", str(stream), "--config", str(config)]
    assert main([*args, "--qstep-geom", "2"]) == 0
    assert capsys.readouterr().out == ""
    params = read_header(stream.read_bytes())[0].params
    assert (params.geometry_qstep, params.attribute_qstep) == (2, 8)


def test_decode_rebuilds_the_frame(
    tmp_path: Path, encoded: Path, shell: PointCloud, capsys: pytest.CaptureFixture[str]
) -> None:
    out_dir = tmp_path / "decoded"
    assert main(["decode", str(encoded), "-o", str(out_dir)]) == 0
    events = _events(capsys.readouterr().out)
    assert [e["event"] for e in events] == ["frame_decoded", "done"]
    assert events[-1]["data"] == {"frames": 1, "dedup_radius": 0}
    assert load_ply(out_dir / "frame_0000.ply").as_set() == shell.as_set()


def test_decode_rejects_a_bad_stream(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    junk = tmp_path / "junk.xpcc"
    junk.write_bytes(b"not a stream at all")
    out_dir = tmp_path / "decoded"
    assert main(["decode", str(junk), "-o", str(out_dir)]) == 1
    captured = capsys.readouterr()
    assert "xpcc decode: not an XPCC stream" in captured.err
    (error,) = _events(captured.out)
    assert error["event"] == "error"
    assert error["data"]["kind"] == "BadMagicError"
    assert not list(out_dir.glob("*.ply"))


def test_unreadable_input_leaves_no_output(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    broken = tmp_path / "broken.ply"
    broken.write_text("this is not a ply file\n")
    stream = tmp_path / "out.xpcc"
    assert main(["encode", str(broken), "-o", str(stream)]) == 1
    assert "xpcc encode:" in capsys.readouterr().err
    assert not stream.exists()

    assert main(["encode", str(tmp_path / "missing_*.ply"), "-o", str(stream)]) == 1
    assert not stream.exists()


def test_unexpected_error_removes_partial_output(
    tmp_path: Path, shell_ply: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    def broken_bitrate(stream: object) -> tuple[float, float]:
        raise RuntimeError("rate table exploded")

    monkeypatch.setattr("xpcc.cli.commands.encode.bitrate", broken_bitrate)
    stream = tmp_path / "out.xpcc"
    assert main(["encode", str(shell_ply), "-o", str(stream)]) == 1
    captured = capsys.readouterr()
    assert "xpcc encode: rate table exploded" in captured.err
    error = _events(captured.out)[-1]
    assert error["event"] == "error"
    assert error["data"]["kind"] == "RuntimeError"
    assert not stream.exists()


def test_unwritable_output_is_reported(tmp_path: Path, shell_ply: Path, capsys: pytest.CaptureFixture[str]) -> None:
    target = tmp_path / "no" / "such" / "dir" / "out.xpcc"
    assert main(["encode", str(shell_ply), "-o", str(target)]) == 1
    assert "cannot write" in capsys.readouterr().err


def test_analyze_prints_json_report(shell_ply: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["analyze", str(shell_ply)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["source"] == str(shell_ply)
    assert report["points"] == 10080
    assert report["axis"] == "Y"
    assert report["section_count"] == 1
    assert report["sections"][0]["slab"] == [100, 183]


def test_analyze_writes_report_and_dumps(
    tmp_path: Path, shell_ply: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    report_path = tmp_path / "report.json"
    dump_dir = tmp_path / "maps"
    args = ["analyze", str(shell_ply), "-o", str(report_path), "--dump-dir", str(dump_dir)]
    assert main([*args, "--sections", "2"]) == 0
    report = json.loads(report_path.read_text())
    assert report["section_count"] == 2
    events = _events(capsys.readouterr().out)
    assert [e["event"] for e in events] == ["section", "section", "done"]
    names = {p.name for p in dump_dir.iterdir()}
    assert {"section_000_occupancy.pgm", "section_001_d1.pgm", "atlas_a0.ppm"} <= names
    assert (dump_dir / "section_000_occupancy.pgm").read_bytes().startswith(b"P5\n")
    assert (dump_dir / "atlas_a0.ppm").read_bytes().startswith(b"P6\n")


def test_evaluate_decoded_frames(
    tmp_path: Path, shell_ply: Path, encoded: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    out_dir = tmp_path / "decoded"
    assert main(["--quiet", "decode", str(encoded), "-o", str(out_dir)]) == 0
    csv_path = tmp_path / "metrics.csv"
    args = ["evaluate", "--original", str(shell_ply), "--decoded", str(out_dir / "*.ply"), "--stream", str(encoded)]
    assert main([*args, "--csv", str(csv_path)]) == 0
    events = _events(capsys.readouterr().out)
    assert events[0]["data"]["status"] == "stream_rate"
    assert [e["event"] for e in events[1:]] == ["metrics", "done"]
    (row,) = read_metrics_csv(csv_path)
    assert row.sequence == "shell_0000"
    assert row.d1_psnr == PSNR_CAP
    assert row.color_psnr == PSNR_CAP
    assert row.geom_bits > 0 and row.attr_bits > 0
    assert 0 < row.occupancy_ratio <= 1


def test_evaluate_ladder_writes_csv_and_svg(
    tmp_path: Path, shell_ply: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    csv_path, svg_path = tmp_path / "rd.csv", tmp_path / "rd.svg"
    args = ["evaluate", "--original", str(shell_ply), "--ladder", "1,4,16", "--sequence", "shell"]
    assert main([*args, "--csv", str(csv_path), "--svg", str(svg_path)]) == 0
    rungs = [e["data"] for e in _events(capsys.readouterr().out) if e["data"].get("status") == "ladder_rung"]
    assert [r["qstep"] for r in rungs] == [1, 4, 16]
    assert rungs[0]["bytes"] >= rungs[1]["bytes"] >= rungs[2]["bytes"]
    rows = read_metrics_csv(csv_path)
    assert [r.qstep for r in rows] == [1, 4, 16]
    assert {r.sequence for r in rows} == {"shell"}
    assert "<svg" in svg_path.read_text()


def test_evaluate_rejects_mismatched_frame_counts(
    tmp_path: Path, shell: PointCloud, shell_ply: Path, encoded: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    second = tmp_path / "shell_0001.ply"
    save_ply(shell.translated((1, 0, 0)), second)
    csv_path = tmp_path / "metrics.csv"
    args = ["evaluate", "--original", str(shell_ply), str(second), "--decoded", str(shell_ply)]
    args += ["--stream", str(encoded)]
    assert main([*args, "--csv", str(csv_path)]) == 1
    assert "frame counts differ" in capsys.readouterr().err
    assert not csv_path.exists()


def test_evaluate_needs_a_mode(shell_ply: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["evaluate", "--original", str(shell_ply)]) == 1
    assert "--ladder" in capsys.readouterr().err


def test_argument_errors_exit_through_argparse(shell_ply: Path) -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["evaluate", "--original", str(shell_ply), "--ladder", "4,0"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
