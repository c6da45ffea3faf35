"""
Fuzzy signatures: encoding histograms by position and magnitude
================================================================

A histogram bin h lands in a block of sig_len slots at the 1-based slot
ceil(h * sig_len), carrying the value h. The slot says roughly *how
much* of the image is that color; the stored value keeps the exact
fraction. Signatures form a lattice under componentwise min and max,
which is what lets a tree node summarize its whole subtree.
"""

import numpy as np

from colorsig import (
    ColorHistogram,
    conjunction,
    contains,
    disjunction,
    signature_from_histogram,
    weight_vector,
)

# Encode a two-color histogram (35% / 65%) with blocks of 10 slots.
hist = ColorHistogram(bins=np.array([0.35, 0.65, 0.0]), pixel_count=400)
sig = signature_from_histogram(hist, sig_len=10)
print("blocks (one row per color):")
print(sig.blocks())

# 0.35 went to slot ceil(3.5) = 4, 0.65 to slot 7; the zero bin stays empty.

# Each block collapses to a scalar weight: value + (slot / sig_len) * 100.
# Position dominates, so the weight mostly tells you the slot.
print("\nweights:", weight_vector(sig))

# The lattice operations work componentwise.
other = signature_from_histogram(
    ColorHistogram(bins=np.array([0.8, 0.0, 0.2]), pixel_count=400), sig_len=10
)
both = disjunction(sig, other)
meet = conjunction(sig, other)
print("\ndisjunction nonzeros:", np.count_nonzero(both.values))
print("conjunction nonzeros:", np.count_nonzero(meet.values))

# Disjunction is the subtree summary: it contains everything it was
# built from. That containment test is the search-pruning predicate.
print("\ndisjunction contains sig:  ", contains(both, sig))
print("disjunction contains other:", contains(both, other))
print("sig contains other:        ", contains(sig, other))
