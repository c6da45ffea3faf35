"""Self-contained HTML galleries for query results.

The output references result images by relative path, carries no
external assets, and is byte-identical for identical inputs.
"""

import html
import os

from .engine import QueryResult

_STYLE = """
body { font-family: sans-serif; margin: 2em; background: #fafafa; }
figure { display: inline-block; margin: 0.5em; padding: 0.5em; background: #fff;
         border: 1px solid #ddd; text-align: center; vertical-align: top; }
img { max-width: 160px; max-height: 160px; image-rendering: pixelated; }
figcaption { font-size: 0.8em; color: #333; max-width: 160px; word-break: break-all; }
.rank { font-weight: bold; }
"""


def _cell(rank: int, path: str, caption: str, base_dir: str) -> str:
    rel = os.path.relpath(path, start=base_dir)
    return (
        "<figure>"
        f'<img src="{html.escape(rel, quote=True)}" alt="result {rank}">'
        f'<figcaption><span class="rank">#{rank}</span> {html.escape(caption)}</figcaption>'
        "</figure>"
    )


def emit_html_report(result: QueryResult, query_image_path, out_path) -> None:
    """Write the ranked-result gallery for one query."""
    if not result.ranked:
        raise ValueError("refusing to render an empty query result")
    base_dir = os.path.dirname(os.path.abspath(out_path)) or "."
    query_rel = os.path.relpath(str(query_image_path), start=base_dir)

    parts = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8">',
        "<title>colorsig query report</title>",
        f"<style>{_STYLE}</style>",
        "</head><body>",
        "<h1>Query</h1>",
        "<figure>"
        f'<img src="{html.escape(query_rel, quote=True)}" alt="query image">'
        f"<figcaption>{html.escape(str(query_image_path))}</figcaption></figure>",
        f"<h2>Top {len(result.ranked)} results "
        f"({result.candidates_examined} candidates, "
        f"{result.fhd_evaluations} distance evaluations)</h2>",
        "<div>",
    ]
    for rank, hit in enumerate(result.ranked, start=1):
        caption = (
            f"id={hit.image_id} k*={hit.distance.k_star} "
            f"sigma={hit.distance.sigma_count:.6f} {hit.path}"
        )
        parts.append(_cell(rank, hit.path, caption, base_dir))
    parts.append("</div></body></html>")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
