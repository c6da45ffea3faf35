"""Normalized palette-bin color histograms."""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyImage
from .palette import Palette, quantize_pixels


@dataclass(frozen=True)
class ColorHistogram:
    """Per-palette-color pixel fractions; bins sum to 1 for nonempty images."""

    bins: np.ndarray
    pixel_count: int

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.float64)
        bins.flags.writeable = False
        object.__setattr__(self, "bins", bins)

    def __len__(self) -> int:
        return len(self.bins)


def compute_histogram(
    image: np.ndarray,
    palette: Palette,
    space: str = "hsv",
    dominance_threshold: float = 0.0,
) -> ColorHistogram:
    """Quantize an image's pixels and bin them into palette fractions.

    Bins whose raw fraction falls below ``dominance_threshold`` are zeroed
    (those colors are not considered dominant); the surviving bins are
    renormalized to sum to 1.
    """
    if not 0.0 <= dominance_threshold <= 1.0:
        raise ValueError("dominance_threshold must be in [0, 1]")
    pixels = np.asarray(image).reshape(-1, 3)
    if pixels.shape[0] == 0:
        raise EmptyImage("image has no pixels")
    indices = quantize_pixels(pixels, palette, space)
    counts = np.bincount(indices, minlength=len(palette)).astype(np.float64)
    fractions = counts / pixels.shape[0]
    kept = np.where(fractions >= dominance_threshold, fractions, 0.0)
    # threshold == 0 keeps every nonzero bin, so the zero-threshold case
    # degenerates to plain normalized counts.
    total = kept.sum()
    if total == 0.0:
        raise ValueError(
            f"dominance_threshold {dominance_threshold} leaves no colors "
            f"(largest bin fraction is {fractions.max():.6f})"
        )
    return ColorHistogram(bins=kept / total, pixel_count=pixels.shape[0])
