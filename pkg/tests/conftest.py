import numpy as np
import pytest

from colorsig import ColorHistogram, FuzzySignature, comparison_counter, signature_from_histogram


@pytest.fixture(autouse=True)
def _reset_comparison_counter():
    comparison_counter.reset()
    yield


def random_histogram(rng: np.random.Generator, n: int = 16, max_colors: int = 5) -> ColorHistogram:
    """Random normalized histogram touching 1..max_colors bins."""
    k = int(rng.integers(1, min(max_colors, n) + 1))
    bins = np.zeros(n)
    idx = rng.choice(n, size=k, replace=False)
    vals = rng.random(k) + 1e-3
    bins[idx] = vals / vals.sum()
    return ColorHistogram(bins=bins, pixel_count=1000)


def random_signature(rng: np.random.Generator, n: int = 16, sig_len: int = 10) -> FuzzySignature:
    return signature_from_histogram(random_histogram(rng, n), sig_len)
