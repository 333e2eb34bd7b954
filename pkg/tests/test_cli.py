import json

import pytest

from pitreduce.cli import main
from pitreduce.sat3 import mini_profile, one_n


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pipeline_mini(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "pipeline", "--n", "1", "--profile", "mini", "--field", "2^1",
                       "--tester", "exhaustive", "--decider", "synth", "--json", str(report))
    assert code == 0
    assert "IdenticallyZero" in out
    assert json.loads(report.read_text())["verdicts"][0]["verdict"]["outcome"] == "IdenticallyZero"


def test_pipeline_mutant_finds_witness(capsys):
    code, out, _ = run(capsys, "pipeline", "--n", "1", "--profile", "mini", "--field", "3",
                       "--mutate", "negate_output")
    assert code == 0
    assert "NonzeroWitness" in out


def test_pit_symbolic(capsys, tmp_path):
    net = tmp_path / "a.net"
    net.write_text("arith 2^1 inputs=1\ng0 = MUL x0, x0\ng1 = SUB g0, x0\noutputs: g1\n")
    code, out, _ = run(capsys, "pit", "--circuit", str(net), "--tester", "symbolic")
    assert code == 0
    assert "canonical form: 0" in out
    assert '"IdenticallyZero"' in out


def test_decode_malformed(capsys, tmp_path):
    enc = tmp_path / "bad.txt"
    enc.write_text(str(one_n(mini_profile())) + "\n110000\n")
    code, _, err = run(capsys, "decode", "--n", "1", "--profile", "mini", str(enc))
    assert code == 1
    assert "encoding 2" in err and "tag" in err


def test_decode_wrong_length(capsys, tmp_path):
    enc = tmp_path / "bad.txt"
    enc.write_text("0101\n")
    code, _, err = run(capsys, "decode", "--n", "1", "--profile", "mini", str(enc))
    assert code == 1 and "length" in err


def test_encode_decode_roundtrip(capsys, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 -2 0\n2 0\n")
    code, out, _ = run(capsys, "encode", str(cnf))
    assert code == 0 and len(out.strip()) == 128
    enc = tmp_path / "f.enc"
    enc.write_text(out)
    code, out, _ = run(capsys, "decode", str(enc))
    assert code == 0
    assert out.splitlines()[1:] == ["1 -2 0", "2 0"]


def test_synth_arithmetize_mutate(capsys, tmp_path):
    dec = tmp_path / "dec.net"
    assert run(capsys, "synth-decider", "--n", "1", "--profile", "mini", "--out", str(dec))[0] == 0
    arith = tmp_path / "a.net"
    rep = tmp_path / "rep.json"
    code, _, _ = run(capsys, "arithmetize", "--circuit", str(dec), "--field", "3", "--out", str(arith), "--report", str(rep))
    assert code == 0
    assert json.loads(rep.read_text())["within_bounds"]
    assert arith.read_text().startswith("arith 3^1 inputs=6")
    code, out, _ = run(capsys, "mutate", "--n", "1", "--profile", "mini", "--circuit", str(dec),
                       "--op", "negate_output", "--classify", "--out", str(tmp_path / "m.net"))
    assert code == 0
    assert json.loads(out)["classification"]["kind"] == "BEHAVIORAL"


def test_build_reduction(capsys, tmp_path):
    code, out, _ = run(capsys, "build-reduction", "--n", "1", "--profile", "mini", "--field", "2", "--out", str(tmp_path / "b"))
    assert code == 0
    assert json.loads(out)["circuits"]["A_star"]["inputs"] == 9
    assert (tmp_path / "b" / "A_star.net").exists()


def test_bad_field(capsys):
    code, _, err = run(capsys, "pipeline", "--n", "1", "--profile", "mini", "--field", "4^1")
    assert code == 1 and "not prime" in err


def test_demo(capsys):
    code, out, _ = run(capsys, "demo", "--mutants", "3")
    assert code == 0
    assert "equivalence holds in both directions" in out


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
