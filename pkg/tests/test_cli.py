import csv
import json

import pytest

from conftest import DATA, write_csv
from impactshift.cli import main


def read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def tree_bytes(directory, skip=("manifest.json",)):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir()) if p.name not in skip}


class TestScore:
    def test_tiny(self, tiny_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["score", str(tiny_dir), "--out-dir", str(out)]) == 0
        rows = read(out / "scores.csv")
        assert [(r["professor_id"], r["variant"]) for r in rows] == [
            ("p1", "C"), ("p1", "WC"), ("p2", "C"), ("p2", "WC")]
        assert (out / "baselines.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "score"
        assert set(manifest["inputs"]) == {"professors", "publications", "bylines",
                                           "taxonomy", "weights"}

    def test_variant_filter(self, tiny_dir, tmp_path):
        assert main(["score", str(tiny_dir), "--variant", "c", "--out-dir", str(tmp_path)]) == 0
        assert {r["variant"] for r in read(tmp_path / "scores.csv")} == {"C"}

    def test_missing_weights_exit_2(self, tiny_dir, tmp_path, capsys):
        write_csv(tiny_dir / "weights.csv", ("sc_id", "window_years", "w_citation", "w_if"),
                  [("SC1", 2, 0.8, 0.2)])
        assert main(["score", str(tiny_dir), "--out-dir", str(tmp_path)]) == 2
        err = capsys.readouterr().err
        assert "missing-weights" in err and "'SC1'" in err and "window 4" in err

    def test_c_only_ignores_weights_gap(self, tiny_dir, tmp_path):
        write_csv(tiny_dir / "weights.csv", ("sc_id", "window_years", "w_citation", "w_if"),
                  [("SC1", 2, 0.8, 0.2)])
        assert main(["score", str(tiny_dir), "--variant", "c", "--out-dir", str(tmp_path)]) == 0

    def test_schema_error_exit_1(self, tiny_dir, tmp_path, capsys):
        write_csv(tiny_dir / "bylines.csv",
                  ("pub_id", "position", "author_key", "university_id", "professor_id"),
                  [("w1", 2, "a", "U1", "p1")])
        assert main(["score", str(tiny_dir), "--out-dir", str(tmp_path)]) == 1
        assert "error[byline]" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["score", str(tmp_path / "nothing"), "--out-dir", str(tmp_path)]) == 1

    def test_deterministic(self, tiny_dir, tmp_path):
        for name in ("a", "b"):
            assert main(["score", str(tiny_dir), "--out-dir", str(tmp_path / name)]) == 0
        assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")
        ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
        mb = json.loads((tmp_path / "b" / "manifest.json").read_text())
        ma.pop("timestamp"), mb.pop("timestamp")
        assert ma == mb

    def test_rank_split_flag(self, tiny_dir, tmp_path):
        assert main(["score", str(tiny_dir), "--cohort-key", "sds_and_rank",
                     "--out-dir", str(tmp_path)]) == 0
        assert {r["cohort"] for r in read(tmp_path / "scores.csv")} == {
            "ING-IND/07|full", "ING-IND/07|associate"}


def _golden_scores(path, column_c="ti_c", column_wc="ti_wc"):
    rows = read(DATA / "golden_ranking.csv")
    write_csv(path, ("professor_id", "variant", "value"),
              [(r["professor_id"], "C", r[column_c]) for r in rows]
              + [(r["professor_id"], "WC", r[column_wc]) for r in rows])
    return rows


class TestRank:
    def test_golden(self, tmp_path):
        rows = _golden_scores(tmp_path / "scores.csv", "score_c", "score_wc")
        assert main(["rank", str(tmp_path / "scores.csv"), "--variant", "c",
                     "--out-dir", str(tmp_path)]) == 0
        ranked = {r["professor_id"]: r for r in read(tmp_path / "ranking.csv")}
        for r in rows:
            got = ranked[r["professor_id"]]
            assert int(got["rank"]) == int(r["rank_c"])
            assert float(got["percentile"]) == float(r["percentile_c"])

    def test_single_professor(self, tmp_path):
        write_csv(tmp_path / "s.csv", ("professor_id", "variant", "value"), [("x", "C", "0.4")])
        assert main(["rank", str(tmp_path / "s.csv"), "--out-dir", str(tmp_path)]) == 0
        assert read(tmp_path / "ranking.csv")[0]["percentile"] == "100.0"

    def test_empty(self, tmp_path, capsys):
        write_csv(tmp_path / "s.csv", ("professor_id", "variant", "value"), [("x", "C", "0.4")])
        assert main(["rank", str(tmp_path / "s.csv"), "--variant", "wc",
                     "--out-dir", str(tmp_path)]) == 1
        assert "empty-cohort" in capsys.readouterr().err


class TestCompare:
    def test_golden(self, tmp_path):
        rows = _golden_scores(tmp_path / "scores.csv")
        assert main(["rank", str(tmp_path / "scores.csv"), "--full-precision",
                     "--out-dir", str(tmp_path)]) == 0
        assert main(["compare", str(tmp_path / "ranking.csv"), "--out-dir", str(tmp_path)]) == 0
        got = {r["professor_id"]: r for r in read(tmp_path / "comparison.csv")}
        for r in rows:
            g = got[r["professor_id"]]
            assert g["delta_score_pct"] == r["delta_score"]
            assert g["delta_rank_label"] == r["delta_rank"]
            assert g["percentile_wc"] == r["percentile_wc"]

    def test_identical_sets(self, tmp_path):
        _golden_scores(tmp_path / "scores.csv")
        main(["rank", str(tmp_path / "scores.csv"), "--variant", "c", "--out-dir", str(tmp_path)])
        path = str(tmp_path / "ranking.csv")
        assert main(["compare", path, path, "--out-dir", str(tmp_path / "cmp")]) == 0
        assert {r["delta_rank"] for r in read(tmp_path / "cmp" / "comparison.csv")} == {"0"}
        stats = read(tmp_path / "cmp" / "cohort_stats.csv")[0]
        assert stats["pearson_scores"] == stats["spearman_ranks"] == "1.000"

    def test_mismatch(self, tmp_path, capsys):
        write_csv(tmp_path / "a.csv", ("professor_id", "variant", "value"),
                  [("x", "C", "1"), ("y", "C", "2")])
        write_csv(tmp_path / "b.csv", ("professor_id", "variant", "value"),
                  [("x", "WC", "1"), ("z", "WC", "2")])
        main(["rank", str(tmp_path / "a.csv"), "--out-dir", str(tmp_path / "a")])
        main(["rank", str(tmp_path / "b.csv"), "--out-dir", str(tmp_path / "b")])
        code = main(["compare", str(tmp_path / "a" / "ranking.csv"),
                     str(tmp_path / "b" / "ranking.csv"), "--out-dir", str(tmp_path)])
        assert code == 1
        assert "cohort-mismatch" in capsys.readouterr().err


class TestSynth:
    def test_roundtrip(self, tmp_path):
        spec = tmp_path / "spec.txt"
        spec.write_text("n_sds=3\nprofessors_per_sds=12\n")
        for name in ("a", "b"):
            assert main(["synth", "--spec", str(spec), "--seed", "42",
                         "--out-dir", str(tmp_path / name)]) == 0
        assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")
        assert main(["score", str(tmp_path / "a"), "--out-dir", str(tmp_path / "s")]) == 0
        assert main(["pipeline", str(tmp_path / "a"), "--out-dir", str(tmp_path / "p")]) == 0

    def test_bad_spec(self, tmp_path, capsys):
        spec = tmp_path / "spec.txt"
        spec.write_text("uncited_share=1.2\n")
        assert main(["synth", "--spec", str(spec), "--out-dir", str(tmp_path)]) == 1
        assert "error[spec]" in capsys.readouterr().err

    def test_malformed_spec(self, tmp_path):
        spec = tmp_path / "spec.txt"
        spec.write_text("not a key value line\n")
        assert main(["synth", "--spec", str(spec), "--out-dir", str(tmp_path)]) == 1


def test_pipeline_outputs(tiny_dir, tmp_path):
    assert main(["pipeline", str(tiny_dir), "--out-dir", str(tmp_path)]) == 0
    expected = {"scores.csv", "baselines.csv", "ranking.csv", "comparison.csv",
                "cohort_stats.csv", "uda_stats.csv", "contingency.csv", "scatter.csv",
                "shift_histogram.csv", "boxplot.csv", "summary.csv", "manifest.json"}
    assert expected <= {p.name for p in tmp_path.iterdir()}
    assert len(list(tmp_path.glob("manifest*"))) == 1


@pytest.mark.parametrize("argv", [["--version"], ["score", "--help"]])
def test_help(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
