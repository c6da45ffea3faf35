"""End-to-end retrieval: build an index from images, answer top-K queries.

The build phase decodes each image, reduces it to a palette histogram,
encodes the histogram as a fuzzy signature, and inserts the signature
into the tree. The query phase signs the query image the same way,
gathers candidate leaves from the tree, ranks them by fuzzy Hamming
distance, and truncates to K. ``linear_scan_topk`` ranks the whole
manifest instead and serves as the exhaustive oracle.

Ranking is deterministic: candidates sort by (k_star, sigma_count,
image_id) ascending, so equal distances resolve by id.
"""

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ColorsigError, EmptyIndex
from .fhd import FhdDistribution, FhdParams, comparison_counter, distribution_row, fhd_pairwise
from .histogram import compute_histogram
from .images import decode_image
from .palette import DEFAULT_PALETTE, Palette
from .signature import FuzzySignature, signature_from_histogram, weight_vector
from .stree import _FROM_PARAMS, STree, STreeParams


@dataclass(frozen=True)
class PipelineConfig:
    """Everything needed to turn an image file into a signature."""

    palette: Palette = DEFAULT_PALETTE
    colorspace: str = "hsv"
    dominance_threshold: float = 0.0
    sig_len: int = 10


def signature_for_image(path, config: PipelineConfig) -> FuzzySignature:
    """Decode, histogram, and sign one image."""
    pixels = decode_image(path)
    hist = compute_histogram(
        pixels, config.palette, config.colorspace, config.dominance_threshold
    )
    return signature_from_histogram(hist, config.sig_len)


@dataclass
class ImageRecord:
    """One indexed image: id, source path, signature, cached weights."""

    image_id: int
    path: str
    signature: FuzzySignature
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        self.weights = weight_vector(self.signature)


@dataclass(frozen=True)
class RankedHit:
    image_id: int
    path: str
    distance: FhdDistribution


@dataclass
class QueryResult:
    """Ranked hits plus the work counters behind them."""

    ranked: list[RankedHit]
    candidates_examined: int
    fhd_evaluations: int


@dataclass
class BuildResult:
    tree: STree
    records: list[ImageRecord]
    skipped: list[tuple[str, str]]
    fhd_evaluations: int
    elapsed_ms: float


def build_index(
    image_paths,
    config: PipelineConfig | None = None,
    params: STreeParams | None = None,
) -> BuildResult:
    """Sign every readable image and insert it into a fresh tree.

    Images that fail to decode are skipped with a reason and do not get
    ids; an empty usable set is an error.
    """
    config = config or PipelineConfig()
    params = params or STreeParams()
    t0 = time.perf_counter()
    c0 = comparison_counter.value
    tree = STree(len(config.palette), config.sig_len, params)
    records: list[ImageRecord] = []
    skipped: list[tuple[str, str]] = []
    for path in image_paths:
        try:
            sig = signature_for_image(path, config)
        except (ColorsigError, ValueError) as exc:
            skipped.append((str(path), f"{type(exc).__name__}: {exc}"))
            continue
        image_id = len(records)
        tree.insert(sig, image_id, path=str(path))
        records.append(ImageRecord(image_id=image_id, path=str(path), signature=sig))
    if not records:
        raise EmptyIndex("no usable images in the input set")
    return BuildResult(
        tree=tree,
        records=records,
        skipped=skipped,
        fhd_evaluations=comparison_counter.value - c0,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )


def _rank(query_weights, ids, paths, weights_matrix, k, fhd_params: FhdParams):
    mu, card, k_star, sigma = fhd_pairwise(query_weights, weights_matrix, fhd_params)
    order = sorted(range(len(ids)), key=lambda i: (k_star[i], sigma[i], ids[i]))
    return [
        RankedHit(
            image_id=ids[i],
            path=paths[i],
            distance=distribution_row(mu, card, k_star, sigma, i),
        )
        for i in order[:k]
    ]


def query_topk(
    tree: STree,
    records: list[ImageRecord],
    query_image_path,
    k: int,
    beam_width=_FROM_PARAMS,
    config: PipelineConfig | None = None,
) -> QueryResult:
    """Search the tree for candidates, rank them, return the best K."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not records or len(tree) == 0:
        raise EmptyIndex("query against an empty index")
    config = config or PipelineConfig()
    c0 = comparison_counter.value
    query_sig = signature_for_image(query_image_path, config)
    candidates = tree.search(query_sig, beam_width)
    path_by_id = {r.image_id: r.path for r in records}
    ids = [e.image_id for e in candidates]
    paths = [path_by_id.get(e.image_id, e.path) for e in candidates]
    ranked = _rank(
        weight_vector(query_sig),
        ids,
        paths,
        np.stack([e.weights for e in candidates]),
        k,
        tree.params.fhd_params,
    )
    return QueryResult(
        ranked=ranked,
        candidates_examined=len(candidates),
        fhd_evaluations=comparison_counter.value - c0,
    )


def linear_scan_topk(
    records: list[ImageRecord],
    query_image_path,
    k: int,
    config: PipelineConfig | None = None,
    fhd_params: FhdParams | None = None,
) -> QueryResult:
    """Rank every record against the query: the exhaustive baseline."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not records:
        raise EmptyIndex("query against an empty manifest")
    config = config or PipelineConfig()
    fhd_params = fhd_params or FhdParams()
    c0 = comparison_counter.value
    query_sig = signature_for_image(query_image_path, config)
    ranked = _rank(
        weight_vector(query_sig),
        [r.image_id for r in records],
        [r.path for r in records],
        np.stack([r.weights for r in records]),
        k,
        fhd_params,
    )
    return QueryResult(
        ranked=ranked,
        candidates_examined=len(records),
        fhd_evaluations=comparison_counter.value - c0,
    )


# -- manifest persistence ----------------------------------------------------


def write_manifest(records: list[ImageRecord], path) -> None:
    """One JSON object per line: {"id", "path", "signature"}."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {"id": r.image_id, "path": r.path, "signature": r.signature.values.tolist()}
                )
            )
            fh.write("\n")


def read_manifest(path, n: int, sig_len: int) -> list[ImageRecord]:
    """Load manifest records; (n, sig_len) come from the index header."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                sig = FuzzySignature(np.array(obj["signature"], dtype=np.float64), n, sig_len)
                records.append(
                    ImageRecord(image_id=int(obj["id"]), path=str(obj["path"]), signature=sig)
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad manifest record: {exc}") from exc
    return records
