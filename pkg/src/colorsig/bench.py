"""Tree-vs-linear benchmark: comparison counts, wall times, recall.

Comparison counts are the portable measurement; wall times are recorded
for orientation but are hardware-dependent and never asserted.
"""

import json
import time
from dataclasses import asdict, dataclass

from .engine import ImageRecord, PipelineConfig, linear_scan_topk, query_topk
from .stree import STree


@dataclass
class BenchRow:
    query_id: str
    tree_fhd_evals: int
    tree_ms: float
    linear_fhd_evals: int
    linear_ms: float
    recall_vs_oracle: float


@dataclass
class BenchReport:
    corpus_size: int
    build_fhd_evals: int
    build_ms: float
    k: int
    rows: list[BenchRow]

    def to_dict(self) -> dict:
        return {
            "corpus_size": self.corpus_size,
            "build_fhd_evals": self.build_fhd_evals,
            "build_ms": self.build_ms,
            "k": self.k,
            "queries": [asdict(r) for r in self.rows],
        }


def run_bench(
    tree: STree,
    records: list[ImageRecord],
    query_paths,
    k: int,
    config: PipelineConfig | None = None,
    beam_width: int | None = 1,
    build_fhd_evals: int = 0,
    build_ms: float = 0.0,
) -> BenchReport:
    """Run every query through both search paths and score the tree's recall.

    Recall is the fraction of the linear oracle's top-K ids that the tree
    search also returned at the same K.
    """
    config = config or PipelineConfig()
    rows = []
    for qp in query_paths:
        t0 = time.perf_counter()
        tree_res = query_topk(tree, records, qp, k, beam_width=beam_width, config=config)
        t1 = time.perf_counter()
        lin_res = linear_scan_topk(records, qp, k, config=config, fhd_params=tree.params.fhd_params)
        t2 = time.perf_counter()
        oracle_ids = {h.image_id for h in lin_res.ranked}
        tree_ids = {h.image_id for h in tree_res.ranked}
        rows.append(
            BenchRow(
                query_id=str(qp),
                tree_fhd_evals=tree_res.fhd_evaluations,
                tree_ms=(t1 - t0) * 1000.0,
                linear_fhd_evals=lin_res.fhd_evaluations,
                linear_ms=(t2 - t1) * 1000.0,
                recall_vs_oracle=len(tree_ids & oracle_ids) / len(oracle_ids),
            )
        )
    return BenchReport(
        corpus_size=len(records),
        build_fhd_evals=build_fhd_evals,
        build_ms=build_ms,
        k=k,
        rows=rows,
    )


def write_bench_report(report: BenchReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
