"""Deterministic synthetic PPM corpora for tests and benchmarks.

Images are either solid palette colors or two palette colors split at a
seeded row, which gives full control over histogram structure. The same
seed always produces byte-identical files.
"""

import random
from pathlib import Path

import numpy as np

from .images import write_ppm
from .palette import DEFAULT_PALETTE, Palette

SOLID_FRACTION = 0.3


def generate_corpus(
    out_dir,
    count: int,
    seed: int,
    width: int = 32,
    height: int = 32,
    palette: Palette = DEFAULT_PALETTE,
) -> list[Path]:
    """Write ``count`` synthetic PPM images into ``out_dir``; returns paths."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if width < 1 or height < 2:
        raise ValueError("images must be at least 1x2 for two-color splits")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    paths = []
    for i in range(count):
        pixels = np.zeros((height, width, 3), dtype=np.uint8)
        if rng.random() < SOLID_FRACTION:
            pixels[:, :] = palette[rng.randrange(len(palette))].rgb
        else:
            a = rng.randrange(len(palette))
            b = rng.randrange(len(palette) - 1)
            if b >= a:
                b += 1
            split = rng.randrange(1, height)  # both bands nonempty
            pixels[:split, :] = palette[a].rgb
            pixels[split:, :] = palette[b].rgb
        path = out_dir / f"img_{i:05d}.ppm"
        write_ppm(path, pixels)
        paths.append(path)
    return paths
