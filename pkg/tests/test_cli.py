import json

import pytest

from dmcnet.cli import main


@pytest.fixture()
def manifest_file(manifest, tmp_path):
    p = tmp_path / "manifest.json"
    manifest.save(p)
    return p


class TestScan:
    def test_scan_writes_manifest(self, corpus_root, tmp_path, capsys):
        out = tmp_path / "m.json"
        assert main(["scan", "--root", str(corpus_root), "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        assert obj["counts"] == {"0": 6, "1": 30, "2": 24}

    def test_scan_missing_root_is_validation_error(self, tmp_path):
        assert main(["scan", "--root", str(tmp_path / "nope"), "--out", str(tmp_path / "m.json")]) == 2


class TestRun:
    def test_run_hog_svm(self, manifest_file, tmp_path, capsys):
        out_dir = tmp_path / "out"
        rc = main([
            "run", "--manifest", str(manifest_file), "--method", "hog_svm",
            "--repeats", "2", "--seed", "3", "--out", str(out_dir),
        ])
        assert rc == 0
        assert (out_dir / "report.json").exists()
        assert (out_dir / "boxplot.csv").read_text().count("\n") == 3

    def test_missing_manifest_is_io_error(self, tmp_path):
        rc = main([
            "run", "--manifest", str(tmp_path / "nope.json"), "--method", "hog_svm",
            "--out", str(tmp_path / "o"),
        ])
        assert rc == 3

    def test_bad_overrides_is_validation_error(self, manifest_file, tmp_path):
        rc = main([
            "run", "--manifest", str(manifest_file), "--method", "hog_svm",
            "--overrides", "{bad json", "--out", str(tmp_path / "o"),
        ])
        assert rc == 2

    def test_config_file_supplies_flags(self, manifest_file, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"repeats": 2, "seed": 9}))
        out_dir = tmp_path / "out"
        rc = main([
            "--config", str(config),
            "run", "--manifest", str(manifest_file), "--method", "hog_svm",
            "--out", str(out_dir),
        ])
        assert rc == 0
        obj = json.loads((out_dir / "report.json").read_text())
        assert obj["methods"][0]["repeats"] == 2
        assert obj["methods"][0]["base_seed"] == 9

    def test_explicit_flag_beats_config(self, manifest_file, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"repeats": 5}))
        out_dir = tmp_path / "out"
        rc = main([
            "--config", str(config),
            "run", "--manifest", str(manifest_file), "--method", "hog_svm",
            "--repeats", "1", "--out", str(out_dir),
        ])
        assert rc == 0
        obj = json.loads((out_dir / "report.json").read_text())
        assert obj["methods"][0]["repeats"] == 1


class TestRunAll:
    def test_runs_all_eight_methods(self, manifest_file, tmp_path, monkeypatch, capsys):
        # stub the per-run pipeline: run-all's job here is orchestration
        from dmcnet.harness import experiments
        from dmcnet.harness.methods import METHOD_IDS, RunResult
        from dmcnet.metrics import evaluate_method

        def fake_run(method, seed, manifest, store=None, overrides=None):
            y = [0, 1, 2, 0, 1, 2]
            scores = [[1, 0, 0], [0, 1, 0], [0, 0, 1]] * 2
            report = evaluate_method(y, scores, y, method=method)
            return RunResult(seed=seed, report=report, wall_seconds=0.0)

        monkeypatch.setattr(experiments, "run_method", fake_run)
        out_dir = tmp_path / "all"
        rc = main([
            "run-all", "--manifest", str(manifest_file), "--repeats", "2",
            "--seed", "0", "--out", str(out_dir),
        ])
        assert rc == 0
        obj = json.loads((out_dir / "report.json").read_text())
        assert [m["method"] for m in obj["methods"]] == list(METHOD_IDS)
        csv_lines = (out_dir / "report.csv").read_text().splitlines()
        assert len(csv_lines) == 1 + 24


class TestReduce:
    def test_pca_embedding(self, manifest_file, tmp_path):
        out = tmp_path / "emb.csv"
        rc = main(["reduce", "--manifest", str(manifest_file), "--algo", "pca", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x,y,label"
        assert len(lines) == 1 + 18  # balanced pool of 6 per class

    def test_tsne_embedding(self, manifest_file, tmp_path):
        out = tmp_path / "emb.csv"
        rc = main([
            "reduce", "--manifest", str(manifest_file), "--algo", "tsne",
            "--perplexity", "5", "--iterations", "60", "--out", str(out),
        ])
        assert rc == 0
        assert len(out.read_text().splitlines()) == 19

    def test_bad_perplexity_is_validation_error(self, manifest_file, tmp_path):
        rc = main([
            "reduce", "--manifest", str(manifest_file), "--algo", "tsne",
            "--perplexity", "100", "--out", str(tmp_path / "e.csv"),
        ])
        assert rc == 2
