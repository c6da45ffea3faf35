"""Content-based image retrieval with fuzzy color signatures.

Images are reduced to palette histograms, encoded as fuzzy signatures,
compared with a fuzzy Hamming distance over block weights, and indexed
in a balanced signature tree for sub-linear top-K search.
"""

from .bench import BenchReport, BenchRow, run_bench, write_bench_report
from .engine import (
    BuildResult,
    ImageRecord,
    PipelineConfig,
    QueryResult,
    RankedHit,
    build_index,
    linear_scan_topk,
    query_topk,
    read_manifest,
    signature_for_image,
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
from .fhd import (
    FhdDistribution,
    FhdParams,
    comparison_counter,
    difference_memberships,
    fhd,
    fhd_compare,
    fhd_pairwise,
    fuzzy_cardinality,
)
from .fixtures import generate_corpus
from .histogram import ColorHistogram, compute_histogram
from .images import decode_image, write_ppm
from .palette import (
    DEFAULT_PALETTE,
    Palette,
    PaletteColor,
    load_palette,
    quantize_pixel,
    quantize_pixels,
    rgb_to_hsv,
)
from .report import emit_html_report
from .signature import (
    FuzzySignature,
    conjunction,
    contains,
    disjunction,
    pack_signature,
    signature_from_histogram,
    unpack_signature,
    weight_vector,
)
from .storage import LoadedIndex, load_index, save_index
from .stree import AuditReport, STree, STreeEntry, STreeNode, STreeParams

__all__ = [
    "AuditReport",
    "BenchReport",
    "BenchRow",
    "BuildResult",
    "ColorHistogram",
    "ColorsigError",
    "CorruptFile",
    "CorruptIndex",
    "DEFAULT_PALETTE",
    "DimensionMismatch",
    "DuplicateId",
    "EmptyImage",
    "EmptyIndex",
    "FhdDistribution",
    "FhdParams",
    "FormatVersionMismatch",
    "FuzzySignature",
    "ImageRecord",
    "LoadedIndex",
    "Palette",
    "PaletteColor",
    "PipelineConfig",
    "QueryResult",
    "RankedHit",
    "STree",
    "STreeEntry",
    "STreeNode",
    "STreeParams",
    "UnsupportedFormat",
    "build_index",
    "comparison_counter",
    "compute_histogram",
    "conjunction",
    "contains",
    "decode_image",
    "difference_memberships",
    "disjunction",
    "emit_html_report",
    "fhd",
    "fhd_compare",
    "fhd_pairwise",
    "fuzzy_cardinality",
    "generate_corpus",
    "linear_scan_topk",
    "load_index",
    "load_palette",
    "pack_signature",
    "quantize_pixel",
    "quantize_pixels",
    "query_topk",
    "read_manifest",
    "rgb_to_hsv",
    "run_bench",
    "save_index",
    "signature_for_image",
    "signature_from_histogram",
    "unpack_signature",
    "weight_vector",
    "write_bench_report",
    "write_manifest",
    "write_ppm",
]

__version__ = "0.1.0"
