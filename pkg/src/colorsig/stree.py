"""Balanced multiway tree over fuzzy signatures.

Every internal entry keeps the disjunction (componentwise max) of the
signatures in its child node, so an ancestor entry always contains every
leaf signature beneath it. Inserts descend toward the entry at minimum
fuzzy Hamming distance, update the unions on the way back up, and split
overflowing nodes around the two entries that are farthest apart. Search
descends preferring entries whose signature contains the query, with a
configurable beam width per node.

Concurrency contract: one writer at a time; concurrent readers are fine
as long as no insert runs.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DuplicateId
from .fhd import FhdParams, fhd_pairwise
from .signature import FuzzySignature, contains, weight_vector

_FROM_PARAMS = object()


@dataclass(frozen=True)
class STreeParams:
    """Node occupancy bounds, distance parameters, and default beam width.

    ``beam_width`` is the number of children followed per internal node
    during search; None means unbounded (visit everything).
    """

    min_fill: int = 2
    max_fill: int = 8
    fhd_params: FhdParams = field(default_factory=FhdParams)
    beam_width: int | None = 1

    def __post_init__(self):
        if self.min_fill < 1 or self.min_fill * 2 > self.max_fill:
            raise ValueError(
                f"need 1 <= min_fill <= max_fill / 2, got {self.min_fill}, {self.max_fill}"
            )
        if self.beam_width is not None and self.beam_width < 1:
            raise ValueError("beam_width must be >= 1 or None")


class STreeEntry:
    """Signature plus either a child node (internal) or an image id (leaf).

    Leaf entries may also carry the source image path; it rides along into
    the index file but plays no role in tree logic.
    """

    __slots__ = ("signature", "weights", "child", "image_id", "path")

    def __init__(self, signature: FuzzySignature, *, child=None, image_id=None, path=""):
        if (child is None) == (image_id is None):
            raise ValueError("entry needs exactly one of child / image_id")
        self.signature = signature
        self.weights = weight_vector(signature)
        self.child = child
        self.image_id = image_id
        self.path = path

    def replace_signature(self, signature: FuzzySignature) -> None:
        self.signature = signature
        self.weights = weight_vector(signature)


class STreeNode:
    __slots__ = ("entries", "is_leaf", "parent")

    def __init__(self, is_leaf: bool, parent=None):
        self.entries: list[STreeEntry] = []
        self.is_leaf = is_leaf
        self.parent = parent


@dataclass
class AuditReport:
    violations: list[str]
    height: int
    node_count: int
    leaf_entry_count: int
    height_bound: int | None

    @property
    def ok(self) -> bool:
        return not self.violations


class STree:
    """Signature tree for (n, sig_len)-shaped fuzzy signatures."""

    def __init__(self, n: int, sig_len: int, params: STreeParams | None = None):
        self.n = n
        self.sig_len = sig_len
        self.params = params or STreeParams()
        self.root = STreeNode(is_leaf=True)
        self._ids: set[int] = set()

    def __len__(self) -> int:
        return len(self._ids)

    def _check_signature(self, signature: FuzzySignature) -> None:
        if signature.n != self.n or signature.sig_len != self.sig_len:
            raise DimensionMismatch(
                f"signature ({signature.n}, {signature.sig_len}) does not match "
                f"tree ({self.n}, {self.sig_len})"
            )

    # -- insertion ---------------------------------------------------------

    def insert(self, signature: FuzzySignature, image_id: int, path: str = "") -> None:
        """Add one ⟨signature, image id⟩ pair, splitting nodes as needed."""
        self._check_signature(signature)
        image_id = int(image_id)
        if not 0 <= image_id < 2**64:
            raise ValueError("image_id must be a non-negative integer below 2**64")
        if image_id in self._ids:
            raise DuplicateId(f"image_id {image_id} already indexed")
        entry = STreeEntry(signature, image_id=image_id, path=path)
        leaf = self._choose_leaf(entry.weights)
        leaf.entries.append(entry)
        self._ids.add(image_id)
        self.union_signature(leaf)
        if len(leaf.entries) > self.params.max_fill:
            self._split(leaf)

    def _choose_leaf(self, weights: np.ndarray) -> STreeNode:
        v = self.root
        while not v.is_leaf:
            stacked = np.stack([e.weights for e in v.entries])
            _, _, k_star, sigma = fhd_pairwise(weights, stacked, self.params.fhd_params)
            best = min(range(len(v.entries)), key=lambda i: (k_star[i], sigma[i], i))
            v = v.entries[best].child
        return v

    def _disjunction_of(self, entries: list[STreeEntry]) -> FuzzySignature:
        if not entries:
            return FuzzySignature.zeros(self.n, self.sig_len)
        values = np.maximum.reduce([e.signature.values for e in entries])
        return FuzzySignature(values, self.n, self.sig_len)

    def union_signature(self, node: STreeNode) -> None:
        """Refresh the parent entry of ``node`` and of every ancestor."""
        while node.parent is not None:
            parent = node.parent
            entry = self._entry_for_child(parent, node)
            entry.replace_signature(self._disjunction_of(node.entries))
            node = parent

    @staticmethod
    def _entry_for_child(parent: STreeNode, child: STreeNode) -> STreeEntry:
        for entry in parent.entries:
            if entry.child is child:
                return entry
        raise RuntimeError("node is not referenced by its parent")

    # -- splitting ---------------------------------------------------------

    def _split(self, node: STreeNode) -> None:
        entries = node.entries
        params = self.params
        i_a, i_b = self._pick_seeds(entries)
        group_a = [entries[i_a]]
        group_b = [entries[i_b]]
        seed_weights = np.stack([entries[i_a].weights, entries[i_b].weights])
        remaining = [e for i, e in enumerate(entries) if i != i_a and i != i_b]
        while remaining:
            # If one side needs every leftover entry to reach min_fill,
            # distance no longer gets a vote.
            if params.min_fill - len(group_a) >= len(remaining):
                group_a.extend(remaining)
                break
            if params.min_fill - len(group_b) >= len(remaining):
                group_b.extend(remaining)
                break
            e = remaining.pop(0)
            _, _, k_star, sigma = fhd_pairwise(e.weights, seed_weights, params.fhd_params)
            if (k_star[0], sigma[0]) <= (k_star[1], sigma[1]):
                group_a.append(e)
            else:
                group_b.append(e)

        node_a = STreeNode(is_leaf=node.is_leaf)
        node_a.entries = group_a
        node_b = STreeNode(is_leaf=node.is_leaf)
        node_b.entries = group_b
        if not node.is_leaf:
            for e in group_a:
                e.child.parent = node_a
            for e in group_b:
                e.child.parent = node_b
        entry_a = STreeEntry(self._disjunction_of(group_a), child=node_a)
        entry_b = STreeEntry(self._disjunction_of(group_b), child=node_b)

        parent = node.parent
        if parent is None:
            new_root = STreeNode(is_leaf=False)
            new_root.entries = [entry_a, entry_b]
            node_a.parent = new_root
            node_b.parent = new_root
            self.root = new_root
            return
        idx = next(i for i, e in enumerate(parent.entries) if e.child is node)
        parent.entries[idx] = entry_a
        parent.entries.insert(idx + 1, entry_b)
        node_a.parent = parent
        node_b.parent = parent
        if len(parent.entries) > params.max_fill:
            self._split(parent)

    def _pick_seeds(self, entries: list[STreeEntry]) -> tuple[int, int]:
        """Quadratic pick: the pair at maximum FHD, lowest indices on ties."""
        weights = np.stack([e.weights for e in entries])
        best = (0, 1)
        best_key = None
        for i in range(len(entries) - 1):
            _, _, k_star, sigma = fhd_pairwise(weights[i], weights[i + 1 :], self.params.fhd_params)
            for off in range(len(k_star)):
                key = (k_star[off], sigma[off])
                if best_key is None or key > best_key:
                    best_key = key
                    best = (i, i + 1 + off)
        return best

    # -- search ------------------------------------------------------------

    def search(self, query: FuzzySignature, beam_width=_FROM_PARAMS) -> list[STreeEntry]:
        """Collect candidate leaf entries for a query signature.

        At each internal node, entries whose signature contains the query
        are preferred; if none qualifies the nearest entry overall is
        followed so a near-miss query still reaches a leaf. A beam of b
        follows the b best entries; None visits the whole tree.
        """
        self._check_signature(query)
        if beam_width is _FROM_PARAMS:
            beam_width = self.params.beam_width
        if beam_width is not None and beam_width < 1:
            raise ValueError("beam_width must be >= 1 or None")
        out: list[STreeEntry] = []
        query_weights = weight_vector(query)
        stack = [self.root]
        while stack:
            v = stack.pop()
            if v.is_leaf:
                out.extend(v.entries)
                continue
            for i in self._beam_indices(v.entries, query, query_weights, beam_width):
                stack.append(v.entries[i].child)
        return out

    def _beam_indices(self, entries, query, query_weights, beam_width) -> list[int]:
        if beam_width is None or beam_width >= len(entries):
            return list(range(len(entries)))
        qualifying = [i for i, e in enumerate(entries) if contains(e.signature, query)]
        if len(qualifying) >= beam_width:
            chosen = self._best_of(entries, qualifying, query_weights, beam_width)
        else:
            rest = [i for i in range(len(entries)) if i not in qualifying]
            chosen = qualifying + self._best_of(
                entries, rest, query_weights, beam_width - len(qualifying)
            )
        return chosen

    def _best_of(self, entries, indices: list[int], query_weights, count: int) -> list[int]:
        if count >= len(indices):
            return indices
        stacked = np.stack([entries[i].weights for i in indices])
        _, _, k_star, sigma = fhd_pairwise(query_weights, stacked, self.params.fhd_params)
        order = sorted(range(len(indices)), key=lambda j: (k_star[j], sigma[j], j))
        return [indices[j] for j in order[:count]]

    # -- audit -------------------------------------------------------------

    def audit(self) -> AuditReport:
        """Walk the whole tree and verify its structural invariants."""
        violations: list[str] = []
        leaf_depths: list[int] = []
        seen_ids: list[int] = []
        node_count = 0

        def walk(node: STreeNode, depth: int, is_root: bool):
            nonlocal node_count
            node_count += 1
            count = len(node.entries)
            if is_root:
                if node.is_leaf:
                    if count > self.params.max_fill:
                        violations.append(f"root leaf overfull: {count}")
                elif not 2 <= count <= self.params.max_fill:
                    violations.append(f"root has {count} entries, expected 2..{self.params.max_fill}")
            elif not self.params.min_fill <= count <= self.params.max_fill:
                violations.append(
                    f"node at depth {depth} has {count} entries, expected "
                    f"{self.params.min_fill}..{self.params.max_fill}"
                )
            if node.is_leaf:
                leaf_depths.append(depth)
                for e in node.entries:
                    if e.image_id is None or e.child is not None:
                        violations.append(f"leaf entry at depth {depth} is not an id entry")
                    else:
                        seen_ids.append(e.image_id)
                return
            for e in node.entries:
                if e.child is None:
                    violations.append(f"internal entry at depth {depth} has no child")
                    continue
                if e.child.parent is not node:
                    violations.append(f"broken parent link at depth {depth}")
                expected = self._disjunction_of(e.child.entries)
                if not np.array_equal(e.signature.values, expected.values):
                    violations.append(
                        f"entry signature at depth {depth} is not the disjunction of its child"
                    )
                walk(e.child, depth + 1, False)

        walk(self.root, 0, True)

        if len(set(seen_ids)) != len(seen_ids):
            violations.append("duplicate image ids in leaves")
        if set(seen_ids) != self._ids:
            violations.append("leaf ids do not match the tracked id set")
        if len(set(leaf_depths)) > 1:
            violations.append(f"leaves at unequal depths: {sorted(set(leaf_depths))}")

        height = max(leaf_depths) if leaf_depths else 0
        n_entries = len(seen_ids)
        bound = None
        if n_entries >= 2 and self.params.min_fill >= 2:
            bound = math.ceil(math.log(n_entries) / math.log(self.params.min_fill))
            if height > bound:
                violations.append(f"height {height} exceeds bound {bound}")
        return AuditReport(
            violations=violations,
            height=height,
            node_count=node_count,
            leaf_entry_count=n_entries,
            height_bound=bound,
        )

    # -- iteration helpers ---------------------------------------------------

    def leaf_entries(self) -> list[STreeEntry]:
        """All leaf entries in depth-first order."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.extend(node.entries)
            else:
                stack.extend(e.child for e in reversed(node.entries))
        return out
