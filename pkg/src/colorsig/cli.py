"""Command-line interface.

Subcommands: ``index build``, ``query``, ``bench``, ``audit``,
``gen-fixtures``. Exit codes: 0 success, 1 usage error, 2 IO/format
error, 3 invariant or audit failure.

``index build`` writes three files: the binary index at --out, the
manifest at --out.manifest.jsonl (referenced from the index header), and
--out.meta.json holding the build counters and the pipeline settings
that queries must reuse.
"""

import argparse
import json
import sys
from pathlib import Path

from .bench import run_bench, write_bench_report
from .engine import (
    PipelineConfig,
    build_index,
    query_topk,
    read_manifest,
    write_manifest,
)
from .errors import (
    ColorsigError,
    CorruptFile,
    CorruptIndex,
    DimensionMismatch,
    DuplicateId,
    EmptyImage,
    EmptyIndex,
    FormatVersionMismatch,
    UnsupportedFormat,
)
from .fhd import FhdParams
from .fixtures import generate_corpus
from .palette import DEFAULT_PALETTE, Palette, load_palette
from .report import emit_html_report
from .storage import load_index, save_index
from .stree import STreeParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVARIANT = 3

_IO_ERRORS = (
    UnsupportedFormat,
    CorruptFile,
    CorruptIndex,
    FormatVersionMismatch,
    EmptyIndex,
    EmptyImage,
    OSError,
)
_INVARIANT_ERRORS = (DuplicateId, DimensionMismatch)

IMAGE_SUFFIXES = {".ppm", ".png", ".jpg", ".jpeg", ".bmp"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _collect_images(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise _UsageError(f"not a directory: {directory}")
    paths = [p for p in directory.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES]
    return sorted(paths, key=lambda p: p.as_posix())


def _parse_beam(text: str):
    if text == "all":
        return None
    try:
        beam = int(text)
    except ValueError:
        raise _UsageError(f"--beam must be a positive integer or 'all', got {text!r}")
    if beam < 1:
        raise _UsageError("--beam must be >= 1")
    return beam


def _manifest_file(index_path: Path) -> Path:
    return index_path.with_name(index_path.name + ".manifest.jsonl")


def _meta_file(index_path: Path) -> Path:
    return index_path.with_name(index_path.name + ".meta.json")


def _config_from_meta(index_path: Path) -> PipelineConfig:
    meta_path = _meta_file(index_path)
    try:
        with open(meta_path, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except OSError as exc:
        raise CorruptIndex(
            f"missing index metadata {meta_path} (created by 'index build'): {exc}"
        ) from exc
    from .palette import PaletteColor

    palette = Palette(
        [PaletteColor(str(c["name"]), tuple(int(v) for v in c["rgb"])) for c in meta["palette"]]
    )
    return PipelineConfig(
        palette=palette,
        colorspace=meta["colorspace"],
        dominance_threshold=meta["threshold"],
        sig_len=meta["sig_len"],
    )


def _load(index_path: Path):
    loaded = load_index(index_path)
    manifest_path = index_path.parent / (loaded.manifest_path or _manifest_file(index_path).name)
    records = read_manifest(manifest_path, loaded.tree.n, loaded.tree.sig_len)
    config = _config_from_meta(index_path)
    return loaded.tree, records, config


def _cmd_index_build(args) -> int:
    palette = load_palette(args.palette) if args.palette else DEFAULT_PALETTE
    config = PipelineConfig(
        palette=palette,
        colorspace=args.colorspace,
        dominance_threshold=args.threshold,
        sig_len=args.sig_len,
    )
    params = STreeParams(
        min_fill=args.min_fill,
        max_fill=args.max_fill,
        fhd_params=FhdParams(alpha=args.alpha, normalize=args.normalize_fhd),
    )
    images = _collect_images(Path(args.images))
    if not images:
        raise EmptyIndex(f"no supported images under {args.images}")
    result = build_index(images, config=config, params=params)
    for path, reason in result.skipped:
        print(f"skipped {path}: {reason}", file=sys.stderr)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    manifest = _manifest_file(out)
    save_index(result.tree, out, manifest_path=manifest.name)
    write_manifest(result.records, manifest)
    meta = {
        "corpus_size": len(result.records),
        "build_fhd_evals": result.fhd_evaluations,
        "build_ms": result.elapsed_ms,
        "skipped": result.skipped,
        "sig_len": config.sig_len,
        "colorspace": config.colorspace,
        "threshold": config.dominance_threshold,
        "alpha": params.fhd_params.alpha,
        "normalize": params.fhd_params.normalize,
        "palette": [{"name": c.name, "rgb": list(c.rgb)} for c in palette.colors],
    }
    with open(_meta_file(out), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    print(
        f"indexed {len(result.records)} images ({len(result.skipped)} skipped), "
        f"{result.fhd_evaluations} distance evaluations, {result.elapsed_ms:.1f} ms"
    )
    print(f"wrote {out}, {manifest.name}, {_meta_file(out).name}")
    return EXIT_OK


def _cmd_query(args) -> int:
    tree, records, config = _load(Path(args.index))
    beam = _parse_beam(args.beam)
    result = query_topk(tree, records, args.image, args.k, beam_width=beam, config=config)
    print(f"query {args.image}: {result.candidates_examined} candidates, "
          f"{result.fhd_evaluations} distance evaluations")
    for rank, hit in enumerate(result.ranked, start=1):
        print(
            f"{rank:3d}. id={hit.image_id:<6d} k*={hit.distance.k_star:<3d} "
            f"sigma={hit.distance.sigma_count:<12.6f} {hit.path}"
        )
    if args.html:
        emit_html_report(result, args.image, args.html)
        print(f"wrote {args.html}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    index_path = Path(args.index)
    tree, records, config = _load(index_path)
    queries = _collect_images(Path(args.queries))
    if not queries:
        raise _UsageError(f"no supported images under {args.queries}")
    try:
        with open(_meta_file(index_path), "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        build_evals, build_ms = meta["build_fhd_evals"], meta["build_ms"]
    except (OSError, KeyError):
        build_evals, build_ms = 0, 0.0
    report = run_bench(
        tree,
        records,
        queries,
        args.k,
        config=config,
        beam_width=_parse_beam(args.beam),
        build_fhd_evals=build_evals,
        build_ms=build_ms,
    )
    write_bench_report(report, args.out)
    rows = report.rows
    med = sorted(r.tree_fhd_evals for r in rows)[len(rows) // 2]
    print(
        f"benchmarked {len(rows)} queries over {report.corpus_size} images: "
        f"median tree evals {med} vs linear {report.corpus_size}; "
        f"mean recall {sum(r.recall_vs_oracle for r in rows) / len(rows):.3f}"
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_audit(args) -> int:
    loaded = load_index(Path(args.index))
    report = loaded.tree.audit()
    print(
        f"nodes={report.node_count} entries={report.leaf_entry_count} "
        f"height={report.height} bound={report.height_bound}"
    )
    if report.violations:
        for v in report.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_INVARIANT
    print("audit clean")
    return EXIT_OK


def _cmd_gen_fixtures(args) -> int:
    paths = generate_corpus(args.out, args.count, args.seed)
    print(f"wrote {len(paths)} images to {args.out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="colorsig", description="Fuzzy color-signature image retrieval.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="index maintenance")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)
    p_build = index_sub.add_parser("build", help="build an index from an image directory")
    p_build.add_argument("--images", required=True, help="directory of images")
    p_build.add_argument("--out", required=True, help="index file to write")
    p_build.add_argument("--sig-len", type=int, default=10)
    p_build.add_argument("--alpha", type=float, default=1.0)
    p_build.add_argument("--min-fill", type=int, default=2)
    p_build.add_argument("--max-fill", type=int, default=8)
    p_build.add_argument("--colorspace", choices=["hsv", "rgb"], default="hsv")
    p_build.add_argument("--threshold", type=float, default=0.0,
                         help="drop bins below this fraction before renormalizing")
    p_build.add_argument("--palette", default=None, help="JSON palette file")
    p_build.add_argument("--normalize-fhd", action="store_true",
                         help="rescale weight differences by the weight span")
    p_build.set_defaults(func=_cmd_index_build)

    p_query = sub.add_parser("query", help="rank indexed images against a query image")
    p_query.add_argument("--index", required=True)
    p_query.add_argument("--image", required=True)
    p_query.add_argument("--k", type=int, default=10)
    p_query.add_argument("--beam", default="1", help="children per node: positive integer or 'all'")
    p_query.add_argument("--html", default=None, help="also write an HTML gallery here")
    p_query.set_defaults(func=_cmd_query)

    p_bench = sub.add_parser("bench", help="compare tree search against linear scan")
    p_bench.add_argument("--index", required=True)
    p_bench.add_argument("--queries", required=True, help="directory of query images")
    p_bench.add_argument("--k", type=int, default=10)
    p_bench.add_argument("--out", required=True, help="JSON report path")
    p_bench.add_argument("--beam", default="1")
    p_bench.set_defaults(func=_cmd_bench)

    p_audit = sub.add_parser("audit", help="verify index structural invariants")
    p_audit.add_argument("--index", required=True)
    p_audit.set_defaults(func=_cmd_audit)

    p_gen = sub.add_parser("gen-fixtures", help="generate a deterministic synthetic corpus")
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--count", type=int, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.set_defaults(func=_cmd_gen_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _INVARIANT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except _IO_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ColorsigError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
