import csv
import io
import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from gmseq import TwoSidedSequence, make_example, read_sequence, write_sequence
from gmseq.cli import main


@pytest.fixture
def seq_file(tmp_path):
    path = tmp_path / "a.json"
    write_sequence(make_example("prop-6-compensated", 7), path)
    return path


def run(argv, capsys):
    code = main([str(x) for x in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_norms_json(seq_file, capsys):
    code, out, _ = run(["norms", "--input", seq_file, "--p", "1.5,2"], capsys)
    assert code == 0
    reps = json.loads(out)
    assert [r["p"] for r in reps] == [1.5, 2.0]
    assert set(reps[0]["ratios"]) == {"lp/jP", "lp/jPStar", "lp/iP", "netNorm/lp"}


def test_norms_delta_csv_input(tmp_path, capsys):
    path = tmp_path / "d.csv"
    path.write_text("k,re,im\n0,1,0\n")
    code, out, _ = run(["norms", "--input", path, "--p", "2"], capsys)
    assert code == 0
    assert json.loads(out)[0]["ratios"]["lp/jP"] == pytest.approx(math.sqrt(2 * math.pi))


def test_outputs_are_byte_identical(seq_file, tmp_path, capsys):
    outs = []
    for i in range(2):
        target = tmp_path / f"o{i}.json"
        assert run(["norms", "--input", seq_file, "--p", "3", "--out", target], capsys)[0] == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    for i in range(2):
        target = tmp_path / f"e{i}.csv"
        run(["equivalence", "--family", "random:seed=2", "--p", "2", "--sizes", "32,64", "--out", target], capsys)
        outs.append(target.read_bytes())
    assert outs[2] == outs[3]


def test_grid_dump(seq_file, tmp_path, capsys):
    dump = tmp_path / "grid.csv"
    run(["norms", "--input", seq_file, "--p", "2", "--grid-dump", dump, "--sample-count", "256"], capsys)
    rows = list(csv.reader(io.StringIO(dump.read_text())))
    assert rows[0] == ["x", "re", "im"]
    a = read_sequence(seq_file)
    x = np.array([float(r[0]) for r in rows[1:]])
    f = np.array([complex(float(r[1]), float(r[2])) for r in rows[1:]])
    assert x[0] == -math.pi and len(x) >= 256
    assert np.allclose(f[:5], [sum(c * np.exp(1j * k * xi) for k, c in zip(a.indices, a.values)) for xi in x[:5]])


def test_classify_formats(seq_file, capsys):
    code, out, _ = run(["classify", "--input", seq_file, "--classes", "gm-star,gm-bar,gm,wm,gm-real-inclusion"], capsys)
    assert code == 0
    diags = json.loads(out)
    assert [d["class_name"] for d in diags] == ["gm-star", "gm-bar", "gm", "wm", "gm-real-inclusion"]
    assert diags[1]["verdict"] == "bounded"
    code, out, _ = run(["classify", "--input", seq_file, "--classes", "gm", "--lambda", "3", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert lines[0].startswith("# gm verdict=") and lines[1] == "n,numerator,denominator,ratio"


def test_reproduce_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, err = run(["reproduce", "prop-7-lacunary", "--nmax", "8", "--out", out], capsys)
    assert code == 0 and "0 FAIL" in err
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert {r["status"] for r in rows} == {"PASS"}
    # 17 significant digits in numeric cells
    v = next(r["value"] for r in rows if r["check"] == "P7-neg-hat" and r["n"] == "3")
    assert len(v.replace(".", "").replace("-", "").lstrip("0").split("e")[0]) >= 15


def test_reproduce_fail_exit_code(monkeypatch, capsys):
    import gmseq.experiments as ex
    real = ex.load_frozen

    def broken():
        d = real()
        d["prop6_growth_rate"]["value"] = 10.0
        return d
    monkeypatch.setattr(ex, "load_frozen", broken)
    code, out, err = run(["reproduce", "prop-6-compensated", "--nmax", "7"], capsys)
    assert code == 1 and ",FAIL," in out and "FAIL" in err


@pytest.mark.parametrize("argv", [
    ["reproduce", "prop-5-gap", "--nmax", "30"],
    ["reproduce", "prop-9", "--nmax", "8"],
    ["reproduce", "prop-5-gap", "--nmax", "x"],
    ["equivalence", "--family", "power:alpha=1,scale=0", "--p", "2", "--sizes", "8"],
    ["equivalence", "--family", "power:alpha=1", "--p", "1", "--sizes", "8"],
    ["equivalence", "--family", "power:alpha=1", "--p", "2", "--sizes", "16,8"],
    ["norms", "--input", "/nonexistent.json", "--p", "2"],
    ["norms", "--p", "2"],
    ["multiplier", "--input", "x.json", "--kind", "rotate"],
    [],
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err


def test_bad_inputs_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"offset": 0, "re": [1, 2], "im": [0]}')
    assert run(["norms", "--input", bad, "--p", "2"], capsys)[0] == 2
    zero = tmp_path / "zero.json"
    write_sequence(TwoSidedSequence(0, [0.0, 0.0]), zero)
    assert run(["norms", "--input", zero, "--p", "2"], capsys)[0] == 2
    assert run(["classify", "--input", zero, "--classes", "gm-star"], capsys)[0] == 2
    assert run(["multiplier", "--input", zero, "--kind", "alternating"], capsys)[0] == 2
    ok = tmp_path / "ok.json"
    write_sequence(TwoSidedSequence.delta(), ok)
    assert run(["classify", "--input", ok, "--classes", "gm-star,bogus"], capsys)[0] == 2
    assert run(["classify", "--input", ok, "--classes", "gm", "--lambda", "1"], capsys)[0] == 2
    assert run(["norms", "--input", ok, "--p", "2", "--sample-count", "100"], capsys)[0] == 2


def test_equivalence_warning_goes_to_stderr(capsys):
    code, out, err = run(["equivalence", "--family", "power:alpha=0.6,multiplier=alternating",
                          "--p", "2", "--sizes", "2^4..2^6"], capsys)
    assert code == 0 and "warning:" in err
    assert out.splitlines()[0] == "size,p,lp,jP,ratio,min,max"


def test_multiplier(seq_file, tmp_path, capsys):
    saved = tmp_path / "m.csv"
    code, out, _ = run(["multiplier", "--input", seq_file, "--kind", "alternating",
                        "--write-sequence", saved], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["p"]) for r in rows] == [1.5, 2.0, 3.0]
    for r in rows:
        assert r["jP"] == r["jP_multiplied"]
        assert float(r["lp_rel_change"]) < 1e-6
    a, b = read_sequence(seq_file), read_sequence(saved)
    assert np.array_equal(b.values, a.values * (-1.0) ** a.indices)


@pytest.mark.skipif(shutil.which("gmseq") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["gmseq", "reproduce", "prop-5-gap", "--nmax", "6"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("check,n,value,bound,status,note\n")
    res = subprocess.run(["gmseq", "reproduce", "prop-5-gap", "--nmax", "99"], capture_output=True, text=True)
    assert res.returncode == 2
