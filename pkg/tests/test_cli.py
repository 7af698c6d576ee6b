import json
import subprocess
import sys
from pathlib import Path

import pytest

from clustercocycle.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, build_parser, main, resolve

FIXTURES = Path(__file__).parent / "fixtures"


def test_quiver_writes_json_and_dot(tmp_path, capsys):
    assert main(["quiver", "--type", "A", "--rank", "2", "--out", str(tmp_path)]) == EXIT_OK
    doc = json.loads((tmp_path / "quiver_A2_121.json").read_text())
    assert len(doc["vertices"]) == 7
    assert (tmp_path / "quiver_A2_121.dot").read_text().startswith("digraph")
    assert "7 vertices, 1 unfrozen" in capsys.readouterr().out


def test_quiver_with_explicit_word(tmp_path):
    assert main(["quiver", "--type", "B", "--rank", "3", "--word", "3,2,1,2,3,2,1,2,1",
                 "--out", str(tmp_path)]) == EXIT_OK
    assert main(["quiver", "--type", "A", "--rank", "2", "--word", "2,1,2", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "quiver_A2_212.json").exists()


@pytest.mark.parametrize("argv,needle", [
    (["quiver", "--type", "A", "--rank", "2", "--word", "1,1,2"], "not reduced"),
    (["quiver", "--type", "A", "--rank", "2", "--word", "1,2"], "reduced but has length"),
    (["quiver", "--type", "E", "--rank", "6"], "explicit reduced word"),
    (["verify", "--only", "nonsense"], "unknown criteria"),
    (["verify", "--trials", "0"], "at least 1"),
])
def test_usage_errors(argv, needle, capsys, tmp_path):
    assert main(argv + ["--out", str(tmp_path)]) == EXIT_USAGE
    assert needle in capsys.readouterr().err


def test_cocycle_output(tmp_path, capsys):
    assert main(["cocycle", "--type", "A", "--rank", "1", "--out", str(tmp_path)]) == EXIT_OK
    text = (tmp_path / "cocycle_A1_1.txt").read_text()
    for section in ("[C2]", "[C3]", "[C1]", "[labels]"):
        assert section in text
    assert "path a.1:0" in text


def test_cocycle_non_sl_type_has_no_c1(tmp_path):
    assert main(["cocycle", "--type", "G", "--rank", "2", "--out", str(tmp_path)]) == EXIT_OK
    text = next(tmp_path.glob("cocycle_G2_*.txt")).read_text()
    assert "[C3]" in text and "[C1]" not in text


def test_verify_subset_writes_report(tmp_path, capsys):
    assert main(["verify", "--only", "structure,killing", "--out", str(tmp_path)]) == EXIT_OK
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert [d["key"] for d in doc] == ["structure", "killing"] and all(d["passed"] for d in doc)
    assert "2/2 passed" in capsys.readouterr().out


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\ntype = B\nrank = 3\nseed = 4\ntorsion-mode = keep\n")
    args = build_parser().parse_args(["quiver", "--config", str(cfg), "--rank", "2"])
    rc = resolve(args)
    assert (rc.type, rc.rank, rc.seed, rc.torsion_mode) == ("B", 2, 4, "keep")


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["quiver", "--config", str(cfg)]) == EXIT_USAGE
    assert "unknown key" in capsys.readouterr().err


def test_volume_complex_fixture(capsys):
    assert main(["volume", str(FIXTURES / "two_tetrahedra.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "volume (sum of D): 2.029883212819" in out


def test_volume_closed_rational_fixture(capsys):
    assert main(["volume", str(FIXTURES / "closed_double.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "boundary faces: 0" in out and "delta matches boundary: True" in out


def test_volume_malformed_gluing(capsys):
    assert main(["volume", str(FIXTURES / "malformed_gluing.json")]) == EXIT_USAGE
    assert "malformed gluing" in capsys.readouterr().err


def test_volume_missing_file(tmp_path):
    assert main(["volume", str(tmp_path / "absent.json")]) == EXIT_USAGE


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_FAIL, EXIT_USAGE}) == 3


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "clustercocycle", "quiver", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "quiver_A1_1.dot").exists()
