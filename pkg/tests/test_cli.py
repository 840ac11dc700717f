import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from perfscore import load_csv
from perfscore.cli import main
from perfscore.report import dumps, format_float


def _sim(tmp_path, *extra, name="sim.csv"):
    out = tmp_path / name
    assert main(["simulate", "--n", "200", "--p", "17", "--rho", "0", "--seed", "1",
                 "--out", str(out), *extra]) == 0
    return out


def test_simulate_shape_and_bytes(tmp_path):
    a = _sim(tmp_path)
    b = _sim(tmp_path, name="again.csv")
    assert a.read_bytes() == b.read_bytes()
    with a.open() as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 201 and len(rows[0]) == 18 and rows[0][-1] == "y"
    side = json.loads((tmp_path / "sim.csv.manifest.json").read_text())
    assert side["command"] == "simulate" and side["config"]["p"] == 17
    assert "duration_seconds" in side


def test_simulate_noiseless(tmp_path):
    f = _sim(tmp_path, "--noise-sd", "0", "--coef", "1:0.5,2:-1", "--intercept", "2")
    ds = load_csv(f, "y")
    X = ds.features
    np.testing.assert_allclose(ds.response, 2 + 0.5 * X[:, 0] - X[:, 1], rtol=1e-12)


def test_simulate_bad_flags(tmp_path, capsys):
    assert main(["simulate", "--p", "5", "--out", str(tmp_path / "x.csv")]) == 4
    err = capsys.readouterr().err.strip()
    assert err.startswith("error[config]:") and "\n" not in err
    assert main(["simulate", "--coef", "3=2", "--out", str(tmp_path / "x.csv")]) == 2
    assert "--coef" in capsys.readouterr().err


def test_score_report(tmp_path):
    data = _sim(tmp_path)
    out, plot, table = tmp_path / "r.json", tmp_path / "r.svg", tmp_path / "r.csv"
    assert main(["score", "--data", str(data), "--target", "y", "--learner", "ols", "--B", "500",
                 "--d", "4", "--seed", "1", "--out", str(out), "--plot", str(plot),
                 "--csv", str(table)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"variables", "config", "manifest"}
    rows = doc["variables"]
    assert [r["name"] for r in rows] == [f"x{j}" for j in range(1, 18)]
    assert set(rows[0]) == {"name", "perf", "vi", "b_j", "selected", "rank"}
    assert sum(r["b_j"] for r in rows) == 500 * 4
    assert all(r["selected"] == (r["perf"] > 0) for r in rows)
    assert sorted(r["rank"] for r in rows) == list(range(1, 18))
    assert doc["config"]["B"] == 500 and doc["config"]["d"] == 4
    with table.open() as fh:
        crow = list(csv.DictReader(fh))
    assert [float(r["perf"]) for r in crow] == [r["perf"] for r in rows]
    svg = ET.fromstring(plot.read_text())
    assert svg.get("width") == "800" and int(svg.get("height")) == 24 * 17 + 84
    assert len(svg.findall("{http://www.w3.org/2000/svg}line")) == 1


def test_score_full_subspace_and_vi_off(tmp_path):
    data = _sim(tmp_path)
    out = tmp_path / "r.json"
    assert main(["score", "--data", str(data), "--B", "20", "--d", "17", "--vi", "off",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert all(r["perf"] == 0 and not r["selected"] for r in doc["variables"])
    assert all("vi" not in r for r in doc["variables"])


def test_score_rejects_ols_classification(tmp_path, capsys):
    f = tmp_path / "c.csv"
    f.write_text("a,y\n" + "\n".join(f"{i},{1 + i % 2}" for i in range(20)) + "\n")
    assert main(["score", "--data", str(f), "--learner", "ols", "--out", str(tmp_path / "o.json")]) == 4
    assert "error[config]" in capsys.readouterr().err
    assert main(["score", "--data", str(f), "--task", "clf", "--B", "10",
                 "--out", str(tmp_path / "o.json")]) == 0
    doc = json.loads((tmp_path / "o.json").read_text())
    assert doc["config"]["learner"]["kind"] == "tree" and doc["config"]["loss"] == "zero-one"


def test_score_input_errors(tmp_path, capsys):
    assert main(["score", "--data", str(tmp_path / "none.csv"), "--out", str(tmp_path / "o")]) == 3
    assert capsys.readouterr().err.startswith("error[input]:")
    assert main(["score", "--out", "x"]) == 2
    assert capsys.readouterr().err.startswith("error[usage]:")


def test_replay_reproduces(tmp_path):
    data = _sim(tmp_path)
    out = tmp_path / "r.json"
    main(["score", "--data", str(data), "--B", "50", "--d", "3", "--seed", "4", "--out", str(out)])
    first = out.read_bytes()
    out.unlink()
    assert main(["replay", str(tmp_path / "r.json.manifest.json")]) == 0
    assert out.read_bytes() == first


def test_avte_command(tmp_path, capsys):
    data = _sim(tmp_path)
    base = ["avte", "--data", str(data), "--learner", "ols", "--R", "5", "--seed", "2"]
    assert main(base) == 0
    full = json.loads(capsys.readouterr().out)
    assert len(full["avte"]["replicates"]) == 5
    assert full["avte"]["value"] == pytest.approx(np.mean(full["avte"]["replicates"]), abs=1e-12)
    names = ",".join(f"x{j}" for j in range(1, 18))
    assert main(base + ["--subset", names]) == 0
    assert json.loads(capsys.readouterr().out)["avte"] == full["avte"]
    assert main(base + ["--subset", "3,7,9"]) == 0
    sub = json.loads(capsys.readouterr().out)
    assert sub["config"]["variables"] == ["x3", "x7", "x9"]
    assert sub["avte"]["value"] < full["avte"]["value"]
    assert main(base + ["--subset", "x3,bogus"]) == 3
    assert "bogus" in capsys.readouterr().err


def test_avte_memorizing_duplicates(tmp_path, capsys):
    # every row appears twice; a depth-unlimited tree with min_leaf=1 memorizes the data
    rows = [(i, i * 0.5 + (i % 3)) for i in range(15)] * 5
    f = tmp_path / "dup.csv"
    f.write_text("a,y\n" + "\n".join(f"{a},{y}" for a, y in rows) + "\n")
    assert main(["avte", "--data", str(f), "--task", "reg", "--learner", "tree", "--R", "3",
                 "--min-leaf", "1", "--max-depth", "30", "--test-fraction", "0.1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["avte"]["value"] == 0.0


def test_float_format():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(float("nan")) is None
    assert json.loads(dumps({"a": [1, 2.5, None, True], "b": {}})) == {"a": [1, 2.5, None, True], "b": {}}


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "perfscore", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()
