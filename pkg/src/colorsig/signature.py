"""Fuzzy color signatures and their lattice operations.

A signature concatenates one block per palette color. Each block has
``sig_len`` slots; a histogram bin ``h`` places the value ``h`` at the
1-based slot ``ceil(h * sig_len)`` and leaves the rest zero, so a block
encodes a bin by both magnitude and position. Blocks built by
disjunction can hold several nonzero slots.

Signatures form a lattice under componentwise min (conjunction) and max
(disjunction); ``contains`` is the induced partial order and is the
pruning predicate of the tree search.
"""

import math
import struct

import numpy as np

from .errors import CorruptIndex, DimensionMismatch
from .histogram import ColorHistogram


class FuzzySignature:
    """Flat vector of n * sig_len membership values in [0, 1]."""

    __slots__ = ("values", "n", "sig_len")

    def __init__(self, values: np.ndarray, n: int, sig_len: int):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (n * sig_len,):
            raise DimensionMismatch(
                f"expected {n * sig_len} values for n={n}, sig_len={sig_len}, got {values.shape}"
            )
        if values.size and not ((values >= 0.0) & (values <= 1.0)).all():
            raise ValueError("signature components must lie in [0, 1]")
        values = values.copy()
        values.flags.writeable = False
        self.values = values
        self.n = n
        self.sig_len = sig_len

    def __eq__(self, other) -> bool:
        if not isinstance(other, FuzzySignature):
            return NotImplemented
        return (
            self.n == other.n
            and self.sig_len == other.sig_len
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.n, self.sig_len, self.values.tobytes()))

    def __repr__(self) -> str:
        nonzero = int(np.count_nonzero(self.values))
        return f"FuzzySignature(n={self.n}, sig_len={self.sig_len}, nonzero={nonzero})"

    def blocks(self) -> np.ndarray:
        """View of the values as an (n, sig_len) matrix, one row per color."""
        return self.values.reshape(self.n, self.sig_len)

    @classmethod
    def zeros(cls, n: int, sig_len: int) -> "FuzzySignature":
        return cls(np.zeros(n * sig_len), n, sig_len)


def _check_same_shape(a: FuzzySignature, b: FuzzySignature) -> None:
    if a.n != b.n or a.sig_len != b.sig_len:
        raise DimensionMismatch(
            f"signature shapes differ: ({a.n}, {a.sig_len}) vs ({b.n}, {b.sig_len})"
        )


def signature_from_histogram(h: ColorHistogram, sig_len: int) -> FuzzySignature:
    """Encode each nonzero histogram bin at slot ceil(h * sig_len) of its block."""
    if sig_len < 1:
        raise ValueError("sig_len must be >= 1")
    n = len(h.bins)
    values = np.zeros((n, sig_len))
    for j, hj in enumerate(h.bins):
        if hj > 0.0:
            pos = math.ceil(hj * sig_len)  # 1-based, in 1..sig_len since 0 < hj <= 1
            values[j, pos - 1] = hj
    return FuzzySignature(values.reshape(-1), n, sig_len)


def conjunction(a: FuzzySignature, b: FuzzySignature) -> FuzzySignature:
    """Componentwise minimum."""
    _check_same_shape(a, b)
    return FuzzySignature(np.minimum(a.values, b.values), a.n, a.sig_len)


def disjunction(a: FuzzySignature, b: FuzzySignature) -> FuzzySignature:
    """Componentwise maximum."""
    _check_same_shape(a, b)
    return FuzzySignature(np.maximum(a.values, b.values), a.n, a.sig_len)


def contains(outer: FuzzySignature, inner: FuzzySignature) -> bool:
    """True iff inner <= outer componentwise (conjunction leaves inner intact)."""
    _check_same_shape(outer, inner)
    return bool(np.all(inner.values <= outer.values))


def weight_vector(sig: FuzzySignature) -> np.ndarray:
    """Collapse each block to a scalar weight.

    A nonzero slot k (1-based) of value f contributes f + (k / sig_len) * 100,
    so the slot position dominates the membership magnitude.
    """
    blocks = sig.blocks()
    k = np.arange(1, sig.sig_len + 1, dtype=np.float64)
    contrib = np.where(blocks != 0.0, blocks + (k / sig.sig_len) * 100.0, 0.0)
    return contrib.sum(axis=1)


# Binary layout: (n, sig_len) as u32 little-endian, then n * sig_len f64.
_SIG_HEADER = struct.Struct("<II")


def pack_signature(sig: FuzzySignature) -> bytes:
    """Serialize a signature for embedding into an index file."""
    return _SIG_HEADER.pack(sig.n, sig.sig_len) + sig.values.astype("<f8").tobytes()


def unpack_signature(buf: bytes, offset: int = 0) -> tuple[FuzzySignature, int]:
    """Read one packed signature from ``buf``; returns (signature, next offset)."""
    if offset + _SIG_HEADER.size > len(buf):
        raise CorruptIndex("truncated signature header")
    n, sig_len = _SIG_HEADER.unpack_from(buf, offset)
    offset += _SIG_HEADER.size
    nbytes = n * sig_len * 8
    if offset + nbytes > len(buf):
        raise CorruptIndex("truncated signature values")
    values = np.frombuffer(buf, dtype="<f8", count=n * sig_len, offset=offset)
    try:
        sig = FuzzySignature(values.astype(np.float64), n, sig_len)
    except ValueError as exc:
        raise CorruptIndex(f"signature values out of range: {exc}") from exc
    return sig, offset + nbytes
