import json

import pytest

from geoclassify.cli import main
from geoclassify.classifiers.serialize import load_model

from conftest import make_gdelt_csv


@pytest.fixture()
def raw_csv(tmp_path):
    rows = [
        "REF,2013,IZ,36.19,44.01,036",
        "REF,2014,IZ,36.20,44.02,043",
        "REF,2014,IZ,35.10,44.90,036",
        ",2014,IZ,33.42,43.30,194",
        ",2013,IZ,33.40,43.28,194",
        "GOV,2015,IZ,33.50,43.10,194",
        ",2012,IZ,30.10,47.50,073",
        ",2013,IZ,31.20,45.90,073",
        "REF,2013,IZ,,44.01,036",  # rejected row
    ]
    path = tmp_path / "raw.csv"
    path.write_bytes(make_gdelt_csv(rows))
    return path


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenQuery:
    def test_prints_reference_query(self, capsys):
        code, out, _ = run(
            ["gen-query", "--event", "REF", "--year-min", "2012", "--year-max", "2015"], capsys
        )
        assert code == 0
        assert 'Actor1Type1Code="REF"' in out
        assert "(Year > 2011 AND Year < 2016)" in out

    def test_event_by_label(self, capsys):
        code, out, _ = run(["gen-query", "--event", "194"], capsys)
        assert code == 0
        assert 'EventCode="194"' in out

    def test_bad_year_range_fails_with_diagnostic(self, capsys):
        code, out, err = run(
            ["gen-query", "--event", "REF", "--year-min", "2015", "--year-max", "2012"], capsys
        )
        assert code == 1
        assert err.startswith("error:")

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run(["gen-query", "--event", "REF", "--deterministic"], capsys)
        _, second, _ = run(["gen-query", "--event", "REF", "--deterministic"], capsys)
        assert first == second


class TestIngest:
    def test_writes_dataset_and_report(self, raw_csv, tmp_path, capsys):
        out_csv = tmp_path / "points.csv"
        report_json = tmp_path / "report.json"
        code, out, _ = run(
            ["ingest", "--input", str(raw_csv), "--output", str(out_csv),
             "--report-json", str(report_json)],
            capsys,
        )
        assert code == 0
        assert out_csv.read_text().startswith("lat,lon,label\n")
        assert "rejected:           1" in out
        payload = json.loads(report_json.read_text())
        assert payload["kept"] == 8
        assert payload["class_counts"] == {"0": 3, "73": 2, "194": 3}

    def test_missing_input_fails_cleanly(self, tmp_path, capsys):
        code, _, err = run(
            ["ingest", "--input", str(tmp_path / "nope.csv"), "--output", str(tmp_path / "o.csv")],
            capsys,
        )
        assert code == 1
        assert "error:" in err
        assert not (tmp_path / "o.csv").exists()


class TestCombos:
    def test_writes_all_subsets_and_manifest(self, raw_csv, tmp_path, capsys):
        out_dir = tmp_path / "combos"
        code, out, _ = run(
            ["combos", "--input", str(raw_csv), "--out-dir", str(out_dir), "--sizes", "2,3"],
            capsys,
        )
        assert code == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert len(manifest) == 4  # C(3,2) + C(3,3)
        assert (out_dir / "0-73.csv").exists()
        assert (out_dir / "0-73-194.csv").exists()


class TestTrainEvalClassify:
    def test_train_then_classify(self, raw_csv, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        code, out, err = run(
            ["train", "--input", str(raw_csv), "--classes", "0,194",
             "--algorithm", "decision_tree", "--output", str(model_path),
             "--train-ratio", "0.7", "--deterministic"],
            capsys,
        )
        assert code == 0, err
        assert model_path.exists()
        assert "accuracy:" in out

        model = load_model(model_path)
        assert model.metadata.model_id == "dt-0-194"
        assert model.metadata.trained_at is None  # deterministic mode

        code, out, _ = run(
            ["classify", "--model", str(model_path), "--lat", "36.19", "--lon", "44.01"],
            capsys,
        )
        assert code == 0
        label, name = out.strip().split(maxsplit=1)
        assert label in ("0", "194")
        if label == "0":
            assert name == "Refugees"

    def test_train_single_class_input_fails(self, tmp_path, capsys):
        rows = ["REF,2013,IZ,36.19,44.01,036", "REF,2014,IZ,36.20,44.02,043"]
        path = tmp_path / "one.csv"
        path.write_bytes(make_gdelt_csv(rows))
        model_path = tmp_path / "m.json"
        code, _, err = run(
            ["train", "--input", str(path), "--algorithm", "decision_tree",
             "--output", str(model_path)],
            capsys,
        )
        assert code == 1
        assert "error:" in err
        assert not model_path.exists()  # no partial output

    def test_deterministic_training_is_byte_identical(self, raw_csv, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for path in paths:
            code, _, _ = run(
                ["train", "--input", str(raw_csv), "--classes", "0,194",
                 "--algorithm", "knn", "--hyper", "k=2", "--output", str(path),
                 "--deterministic"],
                capsys,
            )
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_eval_subcommand(self, raw_csv, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        run(
            ["train", "--input", str(raw_csv), "--classes", "0,194",
             "--algorithm", "naive_bayes", "--output", str(model_path)],
            capsys,
        )
        code, out, _ = run(
            ["eval", "--model", str(model_path), "--input", str(raw_csv),
             "--classes", "0,194"],
            capsys,
        )
        assert code == 0
        assert "accuracy:" in out

    def test_cv_subcommand(self, raw_csv, capsys):
        code, out, _ = run(
            ["cv", "--input", str(raw_csv), "--algorithm", "knn", "--folds", "2",
             "--hyper", "k=1"],
            capsys,
        )
        assert code == 0
        assert "mean accuracy:" in out


class TestGridCommand:
    def test_small_grid_runs_and_reports(self, synthetic_csv_2k, tmp_path, capsys):
        out_dir = tmp_path / "grid"
        code, out, err = run(
            ["grid", "--input", str(synthetic_csv_2k), "--sizes", "2",
             "--algorithms", "naive_bayes,decision_tree", "--out-dir", str(out_dir),
             "--deterministic"],
            capsys,
        )
        assert code == 0, err
        assert "selected:" in out
        results = json.loads((out_dir / "results.json").read_text())
        assert len(results["results"]) == 20
        assert (out_dir / "report.txt").exists()
        assert all(r["duration"] == 0.0 for r in results["results"])


class TestSynth:
    def test_generator_subcommand(self, tmp_path, capsys):
        out = tmp_path / "synth.csv"
        code, stdout, _ = run(
            ["synth", "--output", str(out), "--n", "500", "--seed", "7"], capsys
        )
        assert code == 0
        assert out.exists()
        assert "wrote 500 rows" in stdout
