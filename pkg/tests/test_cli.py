import json
import re
import subprocess
import sys

import numpy as np
import pytest

from kdecomp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result_of(stdout):
    return json.loads(stdout)["result"]


def test_estimate_generated_constant(capsys, golden):
    code, out, _ = run(capsys, "estimate", "--generate", "constant:2^20")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["k_hat"] == golden["staircase"]["constant"]["k_hat"]
    assert doc["result"]["backend_id"] == "lzma:1"
    assert doc["manifest"]["command"] == "estimate"
    assert doc["manifest"]["params"]["backend"] == "lzma" and doc["manifest"]["params"]["level"] == 1
    assert re.fullmatch(r"[0-9a-f]{64}", doc["manifest"]["input_sha256"])


def test_estimate_is_reproducible(capsys):
    _, a, _ = run(capsys, "estimate", "--generate", "random:4096", "--seed", "3")
    _, b, _ = run(capsys, "estimate", "--generate", "random:4096", "--seed", "3")
    _, c, _ = run(capsys, "estimate", "--generate", "random:4096", "--seed", "4")
    assert a == b
    assert json.loads(a)["manifest"]["input_sha256"] != json.loads(c)["manifest"]["input_sha256"]


def test_estimate_csv_and_json_agree(tmp_path, capsys):
    (tmp_path / "d.csv").write_text("a,b\n1,2\n3,4.5\n")
    (tmp_path / "d.json").write_text("[[1, 2], [3, 4.5]]")
    _, from_csv, _ = run(capsys, "estimate", str(tmp_path / "d.csv"), "--header")
    _, from_json, _ = run(capsys, "estimate", str(tmp_path / "d.json"))
    assert result_of(from_csv) == result_of(from_json)


def test_missing_file_exits_2(capsys, tmp_path):
    code, out, err = run(capsys, "estimate", str(tmp_path / "missing.csv"))
    assert code == 2 and out == "" and "missing.csv" in err


def test_malformed_input_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3\n")
    assert run(capsys, "estimate", str(path))[0] == 2
    path.write_text("1,5e9\n")
    assert run(capsys, "estimate", str(path))[0] == 2


def test_input_and_generate_conflict(capsys, tmp_path):
    assert run(capsys, "estimate")[0] == 2
    assert run(capsys, "estimate", "x.csv", "--generate", "constant:8")[0] == 2
    assert run(capsys, "estimate", "--generate", "nonsense:3")[0] == 2


def test_unknown_backend_exits_3(capsys):
    code, _, err = run(capsys, "estimate", "--generate", "constant:8", "--backend", "brotli")
    assert code == 3 and "brotli" in err


def test_backend_env_override(capsys, monkeypatch):
    monkeypatch.setenv("KDECOMP_BACKEND", "zlib")
    _, out, _ = run(capsys, "estimate", "--generate", "constant:64")
    assert result_of(out)["backend_id"] == "zlib:9"
    _, out, _ = run(capsys, "estimate", "--generate", "constant:64", "--backend", "bz2")
    assert result_of(out)["backend_id"] == "bz2:9"


def test_decompose_report(capsys, tmp_path):
    csv_path = tmp_path / "per.csv"
    code, out, _ = run(capsys, "decompose", "--generate", "hypercube:n=4,m=400", "--seed", "2", "--csv", str(csv_path))
    assert code == 0
    result = result_of(out)
    assert result["n"] == 4 and result["m"] == 400 and result["lower_ok"] is True
    assert result["upper_ok"] is None
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 5 and lines[0].startswith("dropped_cols,")


def test_decompose_zero_coefficient_exits_2(capsys):
    code, out, err = run(capsys, "decompose", "--generate", "hypercube:n=3,m=50", "--coeffs", "1,0,1")
    assert code == 2 and out == "" and "coefficient" in err


def test_decompose_violation_exits_1(capsys):
    code, out, _ = run(capsys, "decompose", "--generate", "hypercube:n=3,m=500", "--slack", "0,-1e9")
    assert code == 1
    assert result_of(out)["lower_ok"] is False


def test_decompose_program_bound(capsys):
    code, out, _ = run(capsys, "decompose", "--generate", "hypercube:n=3,m=200", "--program-bound", "4096")
    assert code == 0 and result_of(out)["upper_ok"] is True


def test_decompose_csv_input(capsys, tmp_path):
    path = tmp_path / "d.csv"
    rng = np.random.default_rng(0)
    path.write_text("".join(f"{a:.6f},{b:.6f},{c:.6f}\n" for a, b, c in rng.uniform(-1, 1, (300, 3))))
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 0 and result_of(out)["n"] == 3


def test_decompose_periodic_input_reports_violation(capsys, tmp_path):
    # tiny periodic tables compress to mostly framing, so (n-1) K(full) overshoots
    path = tmp_path / "d.csv"
    path.write_text("".join(f"{i % 7},{i % 5},{i % 3}\n" for i in range(300)))
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 1 and result_of(out)["lower_ok"] is False


def test_lightcone_empty_region_exits_4(capsys):
    code, out, err = run(capsys, "lightcone", "--m", "4", "--seed", "1", "--regions", "on", "--epsilon", "0")
    assert code == 4 and out == "" and "'on'" in err


def test_lightcone_unknown_region_exits_2(capsys):
    assert run(capsys, "lightcone", "--m", "10", "--regions", "nowhere")[0] == 2


def _circles(svg):
    return [(float(x), float(y)) for x, y in re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)"', svg)]


def test_lightcone_plot_inside_xt(capsys, tmp_path):
    code, out, _ = run(capsys, "lightcone", "--m", "2000", "--seed", "5", "--plot", str(tmp_path))
    assert code == 0
    reports = result_of(out)["reports"]
    assert [r["region"]["tag"] for r in reports] == ["full", "inside", "outside"]
    assert len(list(tmp_path.glob("*.svg"))) == 18
    scatter = (tmp_path / "inside_xt.csv").read_text().splitlines()
    assert scatter[0] == "x,t" and len(scatter) == reports[1]["m_region"] + 1
    pts = _circles((tmp_path / "inside_xt.svg").read_text())
    assert len(pts) == reports[1]["m_region"]
    # inside the cone |x| < |t|; the centre pixel is at (210, 210)
    assert all(abs(x - 210) <= abs(y - 210) + 0.02 for x, y in pts)
    out_pts = _circles((tmp_path / "outside_xt.svg").read_text())
    assert any(abs(x - 210) > abs(y - 210) + 1 for x, y in out_pts)


def test_filter_cli(capsys):
    code, out, _ = run(capsys, "filter", "--mode", "high", "--threshold", "1", "--m", "500")
    assert code == 0
    assert result_of(out)["passed"] == ["full", "inside", "outside"]
    code, out, _ = run(capsys, "filter", "--mode", "low", "--threshold", "1", "--m", "500")
    assert result_of(out)["passed"] == []


def test_filter_zero_threshold_exits_2(capsys):
    code, out, _ = run(capsys, "filter", "--mode", "low", "--threshold", "0", "--m", "100")
    assert code == 2 and out == ""


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kdecomp", "estimate", "--generate", "alternating:1024"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    # 1024 rows of "(d.dddddd)", comma separated, in outer parens, after the 8-byte header
    assert json.loads(proc.stdout)["result"]["raw_len"] == 8 + 2 + 1024 * 10 + 1023


@pytest.mark.parametrize("argv", [["--version"], ["estimate", "--help"]])
def test_help_and_version(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
