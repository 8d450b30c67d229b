import csv
import json

import numpy as np
import pytest

from dftrft.binning import BinningConfig
from dftrft.cli import EXIT_DATA, EXIT_USAGE, main
from dftrft.data import CATEGORICAL, load_csv
from dftrft.evaluation import SyntheticSpec, generate_classification
from dftrft.methods import score_features
from dftrft.ranking import detect_elbow


@pytest.fixture
def toy(tmp_path):
    # f1 separates the classes perfectly, f0 alternates, f2 is constant.
    p = tmp_path / "toy.csv"
    p.write_text("f0,f1,f2,label\n0,0,5,a\n1,1,5,b\n2,0,5,a\n3,1,5,b\n")
    return p


@pytest.fixture
def synth(tmp_path):
    m, t = generate_classification(SyntheticSpec(n_informative=3, n_noise=7, n_samples_per_class=60, seed=9))
    p = tmp_path / "synth.csv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*m.names, "cls"])
        for row, lab in zip(m.values, t.labels):
            w.writerow([*(repr(float(v)) for v in row), ["neg", "pos"][lab]])
    return p


def read_rows(text):
    return list(csv.DictReader(text.splitlines()))


def test_score_toy(toy, capsys):
    assert main(["score", str(toy), "--method", "dft", "--bins", "16"]) == 0
    rows = read_rows(capsys.readouterr().out)
    assert rows[0]["feature"] == "f1" and float(rows[0]["value"]) == 0.0
    assert rows[-1]["feature"] == "f2" and rows[-1]["degenerate"] == "True"


def test_rft_on_categorical_labels(toy, capsys):
    assert main(["score", str(toy), "--method", "rft"]) == EXIT_USAGE
    assert "rft requires continuous target" in capsys.readouterr().err
    assert main(["score", str(toy), "--method", "dft", "--target", "continuous"]) == EXIT_USAGE


def test_bins_below_two(toy, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["score", str(toy), "--bins", "1"])
    assert exc.value.code == EXIT_USAGE
    assert "bins must be ≥ 2" in capsys.readouterr().err


def test_data_error_exit_and_no_partial_output(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("f0,label\n1,a\nnan,b\n")
    out = tmp_path / "out.csv"
    assert main(["score", str(bad), "-o", str(out)]) == EXIT_DATA
    assert "non-finite value at (1,0)" in capsys.readouterr().err
    assert not out.exists()
    assert list(tmp_path.iterdir()) == [bad]
    assert main(["score", str(tmp_path / "missing.csv")]) == EXIT_DATA


def test_score_json_provenance(synth, tmp_path):
    out = tmp_path / "s.json"
    assert main(["score", str(synth), "--method", "anova", "--format", "json", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    prov = doc["provenance"]
    assert prov["tool"] == "dftrft" and prov["method"] == "anova" and prov["bins"] == 16
    assert prov["version"] and prov["elbow"]["late"] >= prov["elbow"]["early"]
    assert len(doc["features"]) == 10


@pytest.mark.parametrize("method", ["dft", "anova", "corr", "var"])
def test_every_method_scores(synth, capsys, method):
    assert main(["score", str(synth), "--method", method]) == 0
    assert len(read_rows(capsys.readouterr().out)) == 10


def test_rft_and_corr_on_numeric_target(tmp_path, capsys):
    p = tmp_path / "reg.csv"
    p.write_text("a,b,y\n0,5,0\n1,3,2\n2,9,10\n3,1,12\n")
    assert main(["score", str(p), "--method", "rft", "--bins", "4"]) == 0
    rows = read_rows(capsys.readouterr().out)
    assert rows[0]["feature"] == "a" and float(rows[0]["value"]) == pytest.approx(1.0)
    assert float(rows[0]["threshold"]) == 1.5
    assert main(["score", str(p), "--method", "corr"]) == 0


def test_curve_nesting_and_ranked_curve(synth, tmp_path):
    out = tmp_path / "c.json"
    assert main(["curve", str(synth), "--feature", "0", "--bins", "16", "64",
                 "--format", "json", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    c16, c64 = doc["feature_curves"]
    assert (c16["bins"], c64["bins"]) == (16, 64)
    assert set(c16["thresholds"]) < set(c64["thresholds"])
    ranked = doc["ranked_curve"]
    assert len(ranked["order"]) == len(ranked["values"]) == 10
    m, t = load_csv(synth, "cls", CATEGORICAL)
    elbow = detect_elbow(score_features("dft", m, t, BinningConfig(16)).ranked())
    assert (ranked["elbow"]["early"], ranked["elbow"]["late"]) == (elbow.early_index, elbow.late_index)


def test_curve_csv_annotations(synth, capsys):
    assert main(["curve", str(synth), "--feature", "1", "--bins", "8"]) == 0
    rows = read_rows(capsys.readouterr().out)
    thr = [r for r in rows if r["kind"] == "threshold"]
    ranked = [r for r in rows if r["kind"] == "ranked"]
    assert len(thr) == 7 and len(ranked) == 10
    assert sum(r["annotation"] == "optimal" for r in thr) >= 1
    assert any("late" in r["annotation"] for r in ranked)


def test_curve_rejects_threshold_curve_for_baseline(synth):
    assert main(["curve", str(synth), "--method", "anova", "--feature", "0"]) == EXIT_USAGE


def test_select_k(toy, tmp_path, capsys):
    out = tmp_path / "sel.csv"
    assert main(["select", str(toy), "--k", "2", "-o", str(out)]) == 0
    assert "k=2" in capsys.readouterr().out
    assert out.read_text() == "f0,f1,label\n0,0,a\n1,1,b\n2,0,a\n3,1,b\n"
    m, t = load_csv(out, "label", CATEGORICAL)
    assert m.n_features == 2 and t.labels.tolist() == [0, 1, 0, 1]


def test_select_k_out_of_range(toy, tmp_path):
    assert main(["select", str(toy), "--k", "4", "-o", str(tmp_path / "x.csv")]) == EXIT_USAGE
    assert not (tmp_path / "x.csv").exists()


def test_select_late_elbow_matches_detector(synth, tmp_path, capsys):
    out = tmp_path / "sel.csv"
    assert main(["select", str(synth), "--elbow", "late", "-o", str(out)]) == 0
    m, t = load_csv(synth, "cls", CATEGORICAL)
    elbow = detect_elbow(score_features("dft", m, t, BinningConfig(16)).ranked())
    assert f"k={elbow.late_index}" in capsys.readouterr().out
    m2, t2 = load_csv(out, "cls", CATEGORICAL)
    assert m2.n_features == elbow.late_index
    src = [row["cls"] for row in csv.DictReader(open(synth))]
    got = [row["cls"] for row in csv.DictReader(open(out))]
    assert got == src
    for name in m2.names:
        np.testing.assert_array_equal(m2.column(m2.names.index(name)), m.column(m.names.index(name)))


def test_commands_are_deterministic(synth, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["curve", str(synth), "--format", "json", "-o", str(a)])
    main(["curve", str(synth), "--format", "json", "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_bench_classification(tmp_path):
    out = tmp_path / "bench.json"
    assert main(["bench", "--task", "classification", "--format", "json", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    rows = doc["report"]["rows"]
    assert [r["method"] for r in rows] == ["dft", "anova", "corr", "var"]
    dft = rows[0]
    assert dft["recovers_informative_clean"]
    assert doc["report"]["clean"]["top_sets"]["dft"] == [0, 1, 2, 3, 4]
    # zero noise: clean and noisy columns coincide
    for r in rows:
        for col in ("early", "late", "full"):
            assert r[f"{col}_clean"] == r[f"{col}_noisy"]
    assert doc["provenance"]["elbow"]["clean"] == doc["provenance"]["elbow"]["noisy"]


def test_bench_regression_csv(capsys):
    assert main(["bench", "--task", "regression", "--noise-sigma", "0.3", "--seed", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# metric=mse")
    rows = read_rows("\n".join(lines[1:]))
    assert [r["method"] for r in rows] == ["rft", "corr", "var"]


def test_bench_from_files(synth, tmp_path, capsys):
    assert main(["bench", "--train", str(synth), "--test", str(synth), "--label-column", "cls"]) == 0
    assert main(["bench", "--train", str(synth)]) == EXIT_USAGE
