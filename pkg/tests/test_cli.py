import subprocess
import sys

import pytest

from dimscale.cli import main
from dimscale.espalier import boolean_espalier
from dimscale.textio import emit, parse


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def glued_file(tmp_path):
    def key(m):
        return "glued" if m in (0b001, 0b110) else bin(m).count("1")
    path = tmp_path / "glued.esp"
    path.write_text(emit(boolean_espalier(["1", "2", "3"], key)))
    return path


def test_gen_equipotency(capsys):
    code, out, _ = run(capsys, "gen", "equipotency", "3")
    assert code == 0 and out.startswith("esp v1\n")
    assert len(parse(out).labels) == 8


def test_gen_other_generators(capsys):
    code, out, _ = run(capsys, "gen", "two-gamma", "1")
    assert code == 0 and parse(out).labels == ("0", "a0", "a1")
    code, out, _ = run(capsys, "gen", "subspace", "2", "2")
    assert code == 0 and parse(out).n == 5
    code, out, _ = run(capsys, "gen", "product", "chain/1", "two-gamma/0")
    assert code == 0 and parse(out).n == 4
    code, out, _ = run(capsys, "gen", "function", "I:N=2", "III:g=1")
    assert code == 0 and parse(out).n == 9
    code, out, _ = run(capsys, "gen", "group-action", "2", "full", "2")
    assert code == 0 and parse(out).n == 16


def test_gen_is_byte_stable(capsys):
    first = run(capsys, "gen", "subspace", "3", "2")[1]
    assert run(capsys, "gen", "subspace", "3", "2")[1] == first
    assert emit(parse(first)) == first


@pytest.mark.parametrize("argv", [
    ("gen", "nonsense"),
    ("gen", "equipotency", "x"),
    ("gen", "equipotency", "0"),
    ("gen", "function", "IV"),
    ("gen", "function", "II:N=1"),
    ("gen", "product", "equipotency/2"),
    ("gen", "group-action", "3", "full"),
])
def test_gen_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_check_passes(capsys, tmp_path):
    path = tmp_path / "eq3.esp"
    path.write_text(run(capsys, "gen", "equipotency", "3")[1])
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0
    lines = out.splitlines()
    assert "L6 PASS" in lines and "drng-M1 PASS" in lines and lines[-1] == "result PASS"


def test_check_reports_refinement_failure(capsys, glued_file):
    code, out, _ = run(capsys, "check", str(glued_file))
    assert code == 1
    l6 = [line for line in out.splitlines() if line.startswith("L6")]
    assert l6 and l6[0].startswith("L6 FAIL: ")


def test_check_failing_pcm(capsys, tmp_path):
    path = tmp_path / "cross.pcm"
    path.write_text("pcm v1\nelements: 0 a b c d t\nsum: a b t\nsum: b a t\nsum: c d t\nsum: d c t\n")
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1 and "M1 FAIL: " in out


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("# only a comment\n", 1),
    ("pcm v2\n", 1),
    ("pcm v1\nelements: 0 a\nsum a a a\n", 3),
    ("pcm v1\nelements: 0 a\nsum: a a b\n", 3),
    ("pcm v1\nsum: 0 0 0\n", 2),
    ("esp v1\nelements: 0\nelements: 0\n", 3),
    ("esp v1\nelements: 0 x\nsum: 0 x x\n", 3),
])
def test_parse_errors_exit_two(capsys, tmp_path, text, line):
    path = tmp_path / "bad.pcm"
    path.write_text(text)
    code, out, err = run(capsys, "check", str(path))
    assert code == 2 and out == ""
    assert f"line {line}:" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "absent.pcm"))
    assert code == 2 and err


def test_represent(capsys, tmp_path):
    path = tmp_path / "p.pcm"
    path.write_text(run(capsys, "gen", "product", "chain/1", "two-gamma/1")[1])
    code, out, _ = run(capsys, "represent", str(path))
    assert code == 0
    lines = out.splitlines()
    assert "atoms 2" in lines and "roundtrip PASS" in lines and lines[-1] == "result PASS"
    assert sum(1 for line in lines if line.startswith("element ")) == 6


def test_represent_espalier_uses_its_range(capsys, tmp_path):
    path = tmp_path / "eq3.esp"
    path.write_text(run(capsys, "gen", "equipotency", "3")[1])
    code, out, _ = run(capsys, "represent", str(path))
    assert code == 0 and "atoms 1" in out.splitlines()
    assert sum(1 for line in out.splitlines() if line.startswith("element ")) == 4


def test_represent_refuses_broken_input(capsys, glued_file):
    code, out, _ = run(capsys, "represent", str(glued_file))
    assert code == 1 and out.splitlines()[-1] == "result FAIL"


def test_sample(capsys):
    code, out, _ = run(capsys, "sample", "I:g=1", "II:g=1", "--samples", "300", "--seed", "5")
    assert code == 0
    assert "refinement checked 300 violations 0" in out
    assert "M2 not checked" in out


def test_corpus_runs_are_identical(capsys, tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    code, first, _ = run(capsys, "corpus", str(d), "--write")
    assert code == 0
    code, second, _ = run(capsys, "corpus", str(d))
    assert code == 0 and first == second
    assert first.splitlines()[-1].endswith("result PASS")


def test_empty_corpus_directory(capsys, tmp_path):
    code, _, err = run(capsys, "corpus", str(tmp_path))
    assert code == 2 and err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dimscale", "gen", "chain", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("pcm v1\n")
