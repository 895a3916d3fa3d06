import csv
import io
import json

import pytest

from ppcflow.cli import main
from ppcflow.twolevel import pla_read


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_gen_tt_dc_fraction(capsys, tmp_path):
    path = tmp_path / "t.pla"
    rc, _, _ = run(capsys, "gen-tt", "--op", "add", "--wl", "4", "--pre", "both=ds:2", "--out", str(path))
    assert rc == 0
    fn = pla_read(path)
    assert fn.num_inputs == 8 and fn.num_outputs == 5
    rc, out, _ = run(capsys, "dc-stats", "--op", "add", "--wl", "4", "--pre", "ds:2", "--format", "json")
    data = json.loads(out)
    assert data["dc_fraction"] == 0.75 and data["dc_formula"] == data["dc_rows"] == 192


def test_gen_tt_km(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "gen-tt", "--op", "mul", "--wl", "2,3", "--pre", "both=ds:2", "--format", "km",
                     "--bit", "2")
    assert rc == 0
    assert out == (fixtures_dir / "km_2x3_ds2_bit2.txt").read_text()


def test_minimize_then_verify(capsys, tmp_path):
    cover = tmp_path / "c.pla"
    rc, out, _ = run(capsys, "minimize", "--op", "mul", "--wl", "2", "--mode", "exact", "--out", str(cover),
                     "--format", "json")
    assert rc == 0
    assert json.loads(out)["literals"] == 22
    rc, out, _ = run(capsys, "verify", "--op", "mul", "--wl", "2", "--cover", str(cover), "--format", "json")
    assert rc == 0 and json.loads(out)["ok"] is True
    # drop one cube: the cover no longer implements the product
    lines = cover.read_text().splitlines()
    cubes = [i for i, ln in enumerate(lines) if ln[:1] in "01-"]
    del lines[cubes[0]]
    lines = [f".p {len(cubes) - 1}" if ln.startswith(".p ") else ln for ln in lines]
    cover.write_text("\n".join(lines) + "\n")
    rc, out, _ = run(capsys, "verify", "--op", "mul", "--wl", "2", "--cover", str(cover), "--format", "json")
    assert rc == 1 and json.loads(out)["ok"] is False
    rc, _, err = run(capsys, "verify", "--op", "add", "--wl", "2", "--cover", str(cover))
    assert rc == 1 and "table" in err


def test_verify_espresso_fixture(capsys, fixtures_dir):
    rc, _, _ = run(capsys, "verify", "--op", "mul", "--wl", "2", "--cover",
                   str(fixtures_dir / "mul2x2_espresso.pla"))
    assert rc == 0


def test_error_json(capsys):
    rc, out, _ = run(capsys, "error", "--op", "add", "--wl", "4", "--pre", "both=ds:2", "--format", "json")
    d = json.loads(out)
    assert rc == 0 and d["pe"] == 0.75 and d["me"] == 1
    rc, out, _ = run(capsys, "error", "--op", "mul", "--wl", "3", "--pre", "both=ds:2", "--method", "published",
                     "--family", "ds-mul", "--format", "json")
    d = json.loads(out)
    assert d["entries"][0]["printed"] == 0.625


def test_error_published_th_forms_require_m(capsys):
    rc, _, err = run(capsys, "error", "--op", "add", "--wl", "3", "--pre", "both=th:5:0", "--method", "published",
                     "--family", "th-add")
    assert rc != 0 and "M" in err


def test_gaussian_and_blend(capsys, fixtures_dir, tmp_path):
    cam = str(fixtures_dir / "camera.pgm")
    ast = str(fixtures_dir / "astronaut_gray.pgm")
    out_img = tmp_path / "g.pgm"
    rc, out, _ = run(capsys, "gaussian", "--in", cam, "--pre", "ds:16", "--psnr-against-precise", "--out",
                     str(out_img), "--format", "json")
    assert rc == 0 and 28 <= json.loads(out)["psnr_db"] <= 34
    assert out_img.read_bytes().startswith(b"P5")
    rc, out, _ = run(capsys, "blend", "--in1", cam, "--in2", ast, "--alpha", "0.5", "--psnr-against-precise",
                     "--format", "json")
    assert rc == 0 and json.loads(out)["psnr_db"] == "inf"


def test_mac(capsys):
    rc, out, _ = run(capsys, "mac", "--pixels", "10,100", "--weights", "2,1", "--pre", "th:48:48",
                     "--format", "json")
    assert rc == 0 and json.loads(out)["acc"] == 196
    rc, _, err = run(capsys, "mac", "--pixels", "10,200", "--weights", "1,1", "--natural", "0:159", "--strict")
    assert rc == 1 and err


def test_trace_csv(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "trace", "--app", "gaussian", "--in", str(fixtures_dir / "camera.pgm"),
                     "--pre", "ds:2", "--format", "csv")
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and "signal" in rows[0]


def test_report_and_figure(capsys, fixtures_dir, tmp_path):
    cam = str(fixtures_dir / "camera.pgm")
    fig = tmp_path / "f.png"
    rc, out, _ = run(capsys, "report", "--app", "gaussian", "--in", cam, "--sweep", "ds:4,ds:16",
                     "--fig", str(fig))
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["sparsity_spec"] for r in rows] == ["precise", "ds:4", "ds:16"]
    assert rows[0]["psnr_db"] == "inf" and float(rows[0]["normalized_literals"]) == 1.0
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    rc2, out2, _ = run(capsys, "report", "--app", "gaussian", "--in", cam, "--sweep", "ds:4,ds:16")
    assert out2 == out
    rc, out, _ = run(capsys, "report", "--app", "gaussian", "--in", cam, "--sweep", "")
    assert rc == 0 and out.strip() == "sparsity_spec,psnr_db,literals,normalized_literals"


@pytest.mark.parametrize("argv", [
    ["gen-tt", "--op", "mul", "--wl", "4", "--pre", "c=ds:2"],
    ["gen-tt", "--op", "div", "--wl", "4"],
    ["gen-tt", "--op", "mul", "--wl", "x"],
    ["nosuch"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as ei:
        rc = main(argv)
        raise SystemExit(rc)
    assert ei.value.code == 2


def test_domain_errors_exit_1(capsys, tmp_path):
    rc, _, err = run(capsys, "gaussian", "--in", str(tmp_path / "none.pgm"))
    assert rc == 1 and err
    rc, _, err = run(capsys, "gen-tt", "--op", "mul", "--wl", "4", "--pre", "a=ds:3")
    assert rc == 1 and "ds:3" in err
