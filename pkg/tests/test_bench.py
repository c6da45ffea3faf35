import json

import colorsig.engine
import colorsig.stree
from colorsig import PipelineConfig, build_index, generate_corpus, run_bench, write_bench_report
from colorsig.fhd import fhd_pairwise as real_fhd_pairwise

CONFIG = PipelineConfig()


def make_corpus(tmp_path, count=80, seed=5):
    paths = generate_corpus(tmp_path / "corpus", count, seed)
    built = build_index(paths, config=CONFIG)
    return built, paths


def test_bench_rows_and_recall_bounds(tmp_path):
    built, paths = make_corpus(tmp_path)
    queries = generate_corpus(tmp_path / "queries", 10, 99)
    report = run_bench(built.tree, built.records, queries, 5, config=CONFIG, beam_width=1)
    assert report.corpus_size == 80
    assert len(report.rows) == 10
    for row in report.rows:
        assert row.linear_fhd_evals == 80
        assert 0.0 <= row.recall_vs_oracle <= 1.0
        assert row.tree_fhd_evals < 80
        assert row.tree_ms >= 0 and row.linear_ms >= 0


def test_unbounded_beam_gives_full_recall(tmp_path):
    built, paths = make_corpus(tmp_path, count=50, seed=11)
    queries = generate_corpus(tmp_path / "queries", 6, 12)
    report = run_bench(built.tree, built.records, queries, 5, config=CONFIG, beam_width=None)
    assert all(row.recall_vs_oracle == 1.0 for row in report.rows)


def test_bench_report_json_shape(tmp_path):
    built, paths = make_corpus(tmp_path, count=30, seed=2)
    queries = generate_corpus(tmp_path / "queries", 3, 3)
    report = run_bench(
        built.tree, built.records, queries, 4, config=CONFIG,
        build_fhd_evals=built.fhd_evaluations, build_ms=built.elapsed_ms,
    )
    out = tmp_path / "report.json"
    write_bench_report(report, out)
    data = json.loads(out.read_text())
    assert data["corpus_size"] == 30
    assert data["build_fhd_evals"] == built.fhd_evaluations
    assert data["k"] == 4
    assert len(data["queries"]) == 3
    assert set(data["queries"][0]) == {
        "query_id", "tree_fhd_evals", "tree_ms", "linear_fhd_evals", "linear_ms", "recall_vs_oracle",
    }


def test_reported_counters_match_actual_evaluations(tmp_path, monkeypatch):
    """Counters must equal the number of distance evaluations really performed."""
    tally = {"n": 0}

    def spy(x, ys, params):
        tally["n"] += len(ys)
        return real_fhd_pairwise(x, ys, params)

    monkeypatch.setattr(colorsig.engine, "fhd_pairwise", spy)
    monkeypatch.setattr(colorsig.stree, "fhd_pairwise", spy)

    paths = generate_corpus(tmp_path / "corpus", 40, 21)
    tally["n"] = 0
    built = build_index(paths, config=CONFIG)
    assert built.fhd_evaluations == tally["n"]

    from colorsig import linear_scan_topk, query_topk

    tally["n"] = 0
    out = query_topk(built.tree, built.records, paths[0], 5, beam_width=1, config=CONFIG)
    assert out.fhd_evaluations == tally["n"]

    tally["n"] = 0
    lin = linear_scan_topk(built.records, paths[0], 5, config=CONFIG)
    assert lin.fhd_evaluations == tally["n"] == len(built.records)
