"""Fuzzy Hamming distance between weight vectors.

The distance between two vectors is built in three steps: a per-component
difference membership 1 - exp(-alpha * (x_i - y_i)^2), the fuzzy
cardinality of that membership set (a fuzzy number over 0..n grading "how
many components differ"), and a defuzzified level k_star (the smallest
cardinality level of maximal grade). Ranking uses (k_star, sigma_count)
lexicographically; sigma_count, the plain sum of memberships, breaks ties
between equal integer levels.

Every distance evaluation bumps a process-wide counter so callers can
report exact comparison counts; the counter is lock-protected and exact
once concurrent work has finished.
"""

import threading
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

# Weight components top out near 101 (membership 1 at the last slot of a
# sig_len block); the normalized mode rescales differences by that span.
WEIGHT_SPAN = 101.0


@dataclass(frozen=True)
class FhdParams:
    """Spread parameter for the difference membership, plus normalization.

    With ``normalize`` set, component differences are divided by the weight
    span before the membership is applied, which keeps memberships from
    saturating on full-scale weight vectors.
    """

    alpha: float = 1.0
    normalize: bool = False

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class FhdDistribution:
    """Distance between two vectors, kept as a full fuzzy cardinality.

    ``card[k]`` grades the claim "exactly k components differ" for
    k = 0..n; ``k_star`` is the smallest k of maximal grade and acts as
    the crisp distance value.
    """

    memberships: np.ndarray
    card: np.ndarray
    k_star: int
    sigma_count: float

    def __post_init__(self):
        for name in ("memberships", "card"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def sort_key(self) -> tuple[int, float]:
        return (self.k_star, self.sigma_count)


class ComparisonCounter:
    """Process-wide tally of FHD evaluations."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    @property
    def value(self) -> int:
        with self._lock:
            return self._value

    def add(self, k: int) -> None:
        with self._lock:
            self._value += k

    def reset(self) -> None:
        with self._lock:
            self._value = 0


comparison_counter = ComparisonCounter()


def _membership_matrix(xs: np.ndarray, y: np.ndarray, params: FhdParams) -> np.ndarray:
    diff = xs - y
    if params.normalize:
        diff = diff / WEIGHT_SPAN
    return 1.0 - np.exp(-params.alpha * diff * diff)


def _cardinality_matrix(mu: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fuzzy cardinality per row of a membership matrix.

    Returns (card, k_star, sigma_count) where card[:, k] is
    min(mu_(k), 1 - mu_(k+1)) over the descending-sorted memberships with
    the boundary conventions mu_(0) = 1 and mu_(n+1) = 0.
    """
    m, n = mu.shape
    desc = np.sort(mu, axis=1)[:, ::-1]
    padded = np.concatenate([np.ones((m, 1)), desc, np.zeros((m, 1))], axis=1)
    card = np.minimum(padded[:, :-1], 1.0 - padded[:, 1:])
    k_star = np.argmax(card, axis=1)  # first maximum = smallest k
    sigma = mu.sum(axis=1)
    return card, k_star, sigma


def _as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D weight vector, got shape {arr.shape}")
    return arr


def difference_memberships(x, y, params: FhdParams) -> np.ndarray:
    """Per-component difference membership 1 - exp(-alpha * (x - y)^2)."""
    x, y = _as_vector(x), _as_vector(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"vector lengths differ: {x.shape[0]} vs {y.shape[0]}")
    return _membership_matrix(x[None, :], y, params)[0]


def fuzzy_cardinality(memberships) -> FhdDistribution:
    """Fuzzy cardinality of a membership list, defuzzified to k_star."""
    mu = _as_vector(memberships)
    card, k_star, sigma = _cardinality_matrix(mu[None, :])
    return FhdDistribution(
        memberships=mu, card=card[0], k_star=int(k_star[0]), sigma_count=float(sigma[0])
    )


def fhd(x, y, params: FhdParams) -> FhdDistribution:
    """Fuzzy Hamming distance between two weight vectors (one evaluation)."""
    dist = fuzzy_cardinality(difference_memberships(x, y, params))
    comparison_counter.add(1)
    return dist


def fhd_pairwise(x, ys: np.ndarray, params: FhdParams):
    """Distances from ``x`` to every row of ``ys`` in one shot.

    Returns (memberships, card, k_star, sigma_count) arrays with one row
    per candidate and counts len(ys) evaluations. Row i equals
    fhd(x, ys[i], params) field for field.
    """
    x = _as_vector(x)
    ys = np.asarray(ys, dtype=np.float64)
    if ys.ndim != 2 or ys.shape[1] != x.shape[0]:
        raise DimensionMismatch(f"candidate matrix {ys.shape} does not match vector ({x.shape[0]},)")
    mu = _membership_matrix(ys, x, params)
    card, k_star, sigma = _cardinality_matrix(mu)
    comparison_counter.add(ys.shape[0])
    return mu, card, k_star, sigma


def distribution_row(mu, card, k_star, sigma, i: int) -> FhdDistribution:
    """Package row ``i`` of a pairwise result as an FhdDistribution."""
    return FhdDistribution(
        memberships=mu[i], card=card[i], k_star=int(k_star[i]), sigma_count=float(sigma[i])
    )


def fhd_compare(a: FhdDistribution, b: FhdDistribution) -> int:
    """Total preorder on distances: k_star first, sigma_count as tiebreak."""
    if a.sort_key < b.sort_key:
        return -1
    if a.sort_key > b.sort_key:
        return 1
    return 0
