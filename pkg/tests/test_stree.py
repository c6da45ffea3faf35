import numpy as np
import pytest

from colorsig import (
    ColorHistogram,
    DimensionMismatch,
    DuplicateId,
    FuzzySignature,
    STree,
    STreeParams,
    comparison_counter,
    contains,
    signature_from_histogram,
)
from conftest import random_signature


def build_random_tree(seed, count, n=16, sig_len=10, params=None):
    rng = np.random.default_rng(seed)
    tree = STree(n, sig_len, params or STreeParams())
    sigs = []
    for i in range(count):
        sig = random_signature(rng, n, sig_len)
        tree.insert(sig, i)
        sigs.append(sig)
    return tree, sigs


def single_bin_signature(bin_index, h, n=16, sig_len=10):
    bins = np.zeros(n)
    bins[bin_index] = h
    # unnormalized histogram fine for tree tests; bins stay in [0, 1]
    return signature_from_histogram(ColorHistogram(bins=bins, pixel_count=10), sig_len)


# -- insertion ----------------------------------------------------------------


def test_first_insert_makes_single_entry_root_leaf():
    tree = STree(4, 5)
    tree.insert(random_signature(np.random.default_rng(0), 4, 5), 99)
    assert tree.root.is_leaf
    assert len(tree.root.entries) == 1
    assert tree.root.entries[0].image_id == 99
    assert len(tree) == 1


def test_overflow_split_creates_two_children():
    params = STreeParams(min_fill=2, max_fill=4)
    rng = np.random.default_rng(7)
    tree = STree(16, 10, params)
    for i in range(params.max_fill + 1):
        tree.insert(random_signature(rng), i)
    assert not tree.root.is_leaf
    assert len(tree.root.entries) == 2
    for entry in tree.root.entries:
        assert entry.child.is_leaf
        assert len(entry.child.entries) >= params.min_fill
    assert tree.audit().ok


def test_no_loss_of_ids():
    tree, _ = build_random_tree(3, 500)
    ids = sorted(e.image_id for e in tree.leaf_entries())
    assert ids == list(range(500))


def test_duplicate_id_rejected():
    tree = STree(16, 10)
    sig = random_signature(np.random.default_rng(1))
    tree.insert(sig, 5)
    with pytest.raises(DuplicateId):
        tree.insert(sig, 5)


def test_image_id_range_validated():
    tree = STree(16, 10)
    sig = random_signature(np.random.default_rng(1))
    with pytest.raises(ValueError):
        tree.insert(sig, -1)
    with pytest.raises(ValueError):
        tree.insert(sig, 2**64)


def test_dimension_mismatch_on_insert_and_search():
    tree = STree(16, 10)
    wrong = FuzzySignature.zeros(4, 10)
    with pytest.raises(DimensionMismatch):
        tree.insert(wrong, 0)
    with pytest.raises(DimensionMismatch):
        tree.search(wrong)


def test_params_validation():
    with pytest.raises(ValueError):
        STreeParams(min_fill=0, max_fill=8)
    with pytest.raises(ValueError):
        STreeParams(min_fill=5, max_fill=8)
    with pytest.raises(ValueError):
        STreeParams(beam_width=0)


# -- union maintenance ----------------------------------------------------------


def test_parent_signature_is_disjunction_of_children():
    params = STreeParams(min_fill=1, max_fill=2)
    tree = STree(2, 1, params)
    tree.insert(FuzzySignature(np.array([0.2, 0.0]), 2, 1), 0)
    tree.insert(FuzzySignature(np.array([0.0, 0.5]), 2, 1), 1)
    assert tree.root.is_leaf
    tree.insert(FuzzySignature(np.array([0.1, 0.1]), 2, 1), 2)
    assert not tree.root.is_leaf
    for entry in tree.root.entries:
        expected = np.maximum.reduce([e.signature.values for e in entry.child.entries])
        assert np.array_equal(entry.signature.values, expected)


def test_containment_chain_for_every_stored_signature():
    tree, sigs = build_random_tree(11, 300)

    def leaf_path(node, target_id, path):
        if node.is_leaf:
            if any(e.image_id == target_id for e in node.entries):
                return path
            return None
        for e in node.entries:
            found = leaf_path(e.child, target_id, path + [e])
            if found is not None:
                return found
        return None

    for i in (0, 17, 123, 299):
        path = leaf_path(tree.root, i, [])
        assert path, f"id {i} missing"
        for entry in path:
            assert contains(entry.signature, sigs[i])


# -- splitting -----------------------------------------------------------------


def test_split_separates_tight_clusters():
    params = STreeParams(min_fill=2, max_fill=4)
    tree = STree(16, 10, params)
    cluster_a = [single_bin_signature(0, h) for h in (0.91, 0.93, 0.97)]
    cluster_b = [single_bin_signature(8, h) for h in (0.92, 0.96)]
    sigs = [cluster_a[0], cluster_b[0], cluster_a[1], cluster_b[1], cluster_a[2]]
    for i, sig in enumerate(sigs):
        tree.insert(sig, i)
    assert not tree.root.is_leaf
    sides = []
    for entry in tree.root.entries:
        ids = {e.image_id for e in entry.child.entries}
        sides.append(ids)
    assert {0, 2, 4} in sides  # all of cluster a together
    assert {1, 3} in sides


def test_root_split_increases_height_by_one():
    params = STreeParams(min_fill=2, max_fill=4)
    tree, _ = build_random_tree(13, 200, params=params)
    report = tree.audit()
    assert report.ok
    assert report.height >= 2  # multiple root splits happened on the way


def test_split_respects_min_fill_with_identical_signatures():
    params = STreeParams(min_fill=3, max_fill=6)
    tree = STree(16, 10, params)
    sig = single_bin_signature(2, 0.5)
    for i in range(50):
        tree.insert(sig, i)
    report = tree.audit()
    assert report.ok, report.violations


# -- search ---------------------------------------------------------------------


def test_search_empty_tree_returns_nothing():
    tree = STree(16, 10)
    assert tree.search(FuzzySignature.zeros(16, 10), beam_width=None) == []


def test_search_single_leaf_returns_all_entries():
    tree = STree(16, 10)
    rng = np.random.default_rng(2)
    for i in range(4):
        tree.insert(random_signature(rng), i)
    got = {e.image_id for e in tree.search(random_signature(rng), beam_width=1)}
    assert got == {0, 1, 2, 3}


def test_unbounded_beam_is_exhaustive():
    tree, sigs = build_random_tree(17, 300)
    cands = tree.search(sigs[42], beam_width=None)
    assert sorted(e.image_id for e in cands) == list(range(300))


def test_unbounded_beam_always_contains_stored_signature():
    tree, sigs = build_random_tree(19, 150)
    for i in (0, 75, 149):
        cands = tree.search(sigs[i], beam_width=None)
        assert any(e.image_id == i for e in cands)


def test_beam_one_lands_on_exactly_one_leaf():
    params = STreeParams(min_fill=2, max_fill=8)
    tree, sigs = build_random_tree(23, 400, params=params)
    for i in (3, 99, 250):
        cands = tree.search(sigs[i], beam_width=1)
        assert 2 <= len(cands) <= params.max_fill


def test_search_defaults_to_params_beam_width():
    params = STreeParams(beam_width=None)
    tree, sigs = build_random_tree(27, 120, params=params)
    assert len(tree.search(sigs[0])) == 120  # exhaustive per params
    assert len(tree.search(sigs[0], beam_width=1)) <= params.max_fill


def test_boundary_min_fill_half_of_max():
    tree, _ = build_random_tree(28, 200, params=STreeParams(min_fill=4, max_fill=8))
    report = tree.audit()
    assert report.ok, report.violations


def test_beam_candidate_sets_are_nested():
    tree, sigs = build_random_tree(29, 400)
    query = sigs[10]
    previous = set()
    for beam in (1, 2, 3, None):
        got = {e.image_id for e in tree.search(query, beam_width=beam)}
        assert previous <= got
        previous = got


def test_search_falls_back_when_nothing_contains_query():
    tree, _ = build_random_tree(31, 200)
    # all bins at full membership: no stored union can contain this
    query = FuzzySignature(np.ones(160), 16, 10)
    cands = tree.search(query, beam_width=1)
    assert cands, "near-miss query must still reach a leaf"


# -- audit ------------------------------------------------------------------------


def test_audit_clean_after_random_build():
    tree, _ = build_random_tree(37, 1000)
    report = tree.audit()
    assert report.ok, report.violations
    assert report.leaf_entry_count == 1000
    assert report.height <= 10  # ceil(log2(1000))


def test_audit_flags_corrupted_parent_signature():
    tree, _ = build_random_tree(41, 100)
    entry = tree.root.entries[0]
    entry.signature = FuzzySignature(np.zeros(160), 16, 10)
    report = tree.audit()
    assert len(report.violations) == 1
    assert "disjunction" in report.violations[0]


def test_audit_flags_unbalanced_fill():
    tree, _ = build_random_tree(43, 100)
    # steal entries from a leaf until it dips under min_fill
    leaf = tree.root.entries[0].child
    while not leaf.is_leaf:
        leaf = leaf.entries[0].child
    while len(leaf.entries) >= tree.params.min_fill:
        removed = leaf.entries.pop()
        tree._ids.discard(removed.image_id)
    tree.union_signature(leaf)
    report = tree.audit()
    assert any("entries, expected" in v for v in report.violations)


# -- insert cost -------------------------------------------------------------------


def test_descent_cost_bounded_by_fill_times_height():
    params = STreeParams(min_fill=2, max_fill=8)
    tree, _ = build_random_tree(47, 400, params=params)
    rng = np.random.default_rng(48)
    checked = 0
    for i in range(60):
        nodes_before = tree.audit().node_count
        height = tree.audit().height
        c0 = comparison_counter.value
        tree.insert(random_signature(rng), 1000 + i)
        delta = comparison_counter.value - c0
        if tree.audit().node_count == nodes_before:  # no split: descent cost only
            assert delta <= params.max_fill * (height + 1)
            checked += 1
    assert checked > 0
