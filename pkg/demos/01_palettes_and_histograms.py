"""
Palettes, pixel quantization, and color histograms
===================================================

Every image in this library is summarized by how its pixels distribute
over a small named palette. This script walks that first stage: map
pixels to their nearest palette color, then bin a whole image into a
normalized histogram.
"""

import numpy as np

from colorsig import DEFAULT_PALETTE, compute_histogram, quantize_pixel

# The default palette has 16 named colors in a fixed order; that order
# defines histogram bin order everywhere downstream.
print("palette:")
for i, color in enumerate(DEFAULT_PALETTE.colors):
    h, s, v = color.hsv
    print(f"  {i:2d} {color.name:<10} rgb={color.rgb}  hue={h:6.1f} sat={s:.2f} val={v:.2f}")

# Quantization picks the nearest palette color. Two metrics are
# available: plain Euclidean distance in RGB, or a hue-weighted distance
# in HSV (the default) that treats hue circularly, so 359 degrees sits
# next to 1 degree.
samples = [(250, 5, 5), (10, 10, 10), (0, 100, 170), (255, 0, 4), (100, 240, 220)]
print("\npixel -> nearest palette color:")
for pixel in samples:
    by_rgb = DEFAULT_PALETTE.names[quantize_pixel(pixel, DEFAULT_PALETTE, "rgb")]
    by_hsv = DEFAULT_PALETTE.names[quantize_pixel(pixel, DEFAULT_PALETTE, "hsv")]
    print(f"  {str(pixel):<15} rgb-metric={by_rgb:<10} hsv-metric={by_hsv}")

# A histogram counts quantized pixels per bin and normalizes to sum 1.
# Build a toy image: 60% red-ish, 30% blue-ish, 10% white.
rng = np.random.default_rng(0)
image = np.zeros((10, 10, 3), dtype=np.uint8)
image[:6] = (230, 20, 20)
image[6:9] = (20, 20, 230)
image[9:] = (250, 250, 250)

hist = compute_histogram(image, DEFAULT_PALETTE, "hsv", dominance_threshold=0.0)
print(f"\nhistogram over {hist.pixel_count} pixels:")
for name, value in zip(DEFAULT_PALETTE.names, hist.bins):
    if value > 0:
        print(f"  {name:<10} {value:.2f}")

# A dominance threshold drops rare colors before renormalizing: with
# threshold 0.2 the 10% white band no longer counts as a dominant color.
dominant = compute_histogram(image, DEFAULT_PALETTE, "hsv", dominance_threshold=0.2)
print("\nwith dominance threshold 0.2:")
for name, value in zip(DEFAULT_PALETTE.names, dominant.bins):
    if value > 0:
        print(f"  {name:<10} {value:.3f}")
