import pytest

from satsweep.aig import parse_aiger, write_aiger
from satsweep.circuits import CORPUS
from satsweep.cli import main
from satsweep.fraig import MiterVerdict, doubled, miter_check, sweep


@pytest.fixture
def write(tmp_path):
    def _write(name, g):
        path = tmp_path / f"{name}.aag"
        path.write_text(write_aiger(g))
        return str(path)

    return _write


def test_stats(write, capsys):
    assert main(["stats", write("and2", CORPUS["and2"]())]) == 0
    assert capsys.readouterr().out.startswith("1 and, 2 inputs, 1 output")


def test_stats_empty(tmp_path, capsys):
    p = tmp_path / "e.aag"
    p.write_text("aag 0 0 0 0 0\n")
    assert main(["stats", str(p)]) == 0
    assert capsys.readouterr().out.startswith("0 ands")


def test_bad_file(tmp_path):
    p = tmp_path / "bad.aag"
    p.write_text("aag 1 1 0 1 0\n")
    assert main(["stats", str(p)]) == 2
    assert main(["fraig", str(p), str(tmp_path / "o.aag")]) == 2


def test_missing_file(tmp_path):
    assert main(["stats", str(tmp_path / "none.aag")]) == 3


def test_unwritable_output(write, tmp_path):
    assert main(["fraig", write("x", CORPUS["xor2"]()), str(tmp_path / "no" / "dir" / "o.aag")]) == 3


def test_fraig_doubled(write, tmp_path, capsys):
    g = CORPUS["mult3"]()
    src = write("d", doubled(g))
    out = tmp_path / "out.aag"
    assert main(["fraig", src, str(out)]) == 0
    stats = dict(line.split("=") for line in capsys.readouterr().out.split())
    assert int(stats["ands_before"]) == 2 * g.num_ands
    # Half of the doubled graph, less any redundancy inside g itself.
    assert int(stats["ands_after"]) == sweep(g).graph.num_ands <= g.num_ands
    swept = parse_aiger(out.read_text())
    assert miter_check(doubled(g), swept).verdict is MiterVerdict.EQUIVALENT
    assert main(["check-equiv", src, str(out)]) == 0


def test_check_equiv_self(write):
    p = write("m", CORPUS["mult4"]())
    assert main(["check-equiv", p, p]) == 0


def test_check_equiv_differ(write, capsys):
    assert main(["check-equiv", write("a", CORPUS["and2"]()), write("o", CORPUS["or2"]())]) == 1
    lines = capsys.readouterr().out.split()
    assert lines[0] == "DIFFER"
    bits = dict(line.split("=") for line in lines[1:])
    x, y = int(bits["x"]), int(bits["y"])
    assert (x & y) != (x | y)


def test_check_equiv_arity(write):
    assert main(["check-equiv", write("a", CORPUS["and2"]()), write("m", CORPUS["mult3"]())]) == 2


def test_check_equiv_undecided(write):
    a, b = write("m", CORPUS["mult4"]()), write("s", CORPUS["mult4_swapped"]())
    assert main(["check-equiv", a, b, "--limit", "0"]) == 4
    assert main(["check-equiv", a, b, "--limit", "none"]) == 0


def test_external_engine_needs_library(write, monkeypatch):
    monkeypatch.delenv("IPASIR_SHARED_LIBRARY", raising=False)
    p = write("a", CORPUS["and2"]())
    assert main(["check-equiv", p, p, "--engine", "external"]) == 2


def test_external_engine(write, monkeypatch, mini_ipasir):
    monkeypatch.setenv("IPASIR_SHARED_LIBRARY", mini_ipasir)
    a, b = write("r", CORPUS["adder4_ripple"]()), write("l", CORPUS["adder4_lookahead"]())
    assert main(["check-equiv", a, b, "--engine", "external", "--limit", "none"]) == 0


def test_bad_limit(write):
    with pytest.raises(SystemExit):
        main(["stats", write("a", CORPUS["and2"]()), "--limit", "-3"])


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_fraig_self_consistent(name, corpus_dir, tmp_path):
    src = corpus_dir / f"{name}.aag"
    assert write_aiger(parse_aiger(src.read_text())) == write_aiger(CORPUS[name]())
    out = tmp_path / "o.aag"
    assert main(["fraig", str(src), str(out)]) == 0
    assert main(["check-equiv", str(src), str(out), "--limit", "none"]) == 0
