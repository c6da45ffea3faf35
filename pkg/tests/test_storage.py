import numpy as np
import pytest

from colorsig import (
    CorruptIndex,
    FhdParams,
    FormatVersionMismatch,
    STree,
    STreeParams,
    load_index,
    save_index,
)
from conftest import random_signature
from test_stree import build_random_tree


def trees_equal(a, b) -> bool:
    if (a.is_leaf, len(a.entries)) != (b.is_leaf, len(b.entries)):
        return False
    for ea, eb in zip(a.entries, b.entries):
        if ea.signature != eb.signature:
            return False
        if a.is_leaf:
            if (ea.image_id, ea.path) != (eb.image_id, eb.path):
                return False
        elif not trees_equal(ea.child, eb.child):
            return False
    return True


def test_empty_tree_roundtrip(tmp_path):
    tree = STree(16, 10)
    path = tmp_path / "empty.idx"
    save_index(tree, path)
    loaded = load_index(path)
    assert loaded.tree.root.is_leaf
    assert loaded.tree.root.entries == []
    assert len(loaded.tree) == 0
    assert loaded.manifest_path == ""


def test_random_tree_roundtrip(tmp_path):
    params = STreeParams(
        min_fill=3, max_fill=7, fhd_params=FhdParams(alpha=0.5, normalize=True)
    )
    tree, sigs = build_random_tree(51, 300, params=params)
    path = tmp_path / "t.idx"
    save_index(tree, path, manifest_path="manifest.jsonl")
    loaded = load_index(path)

    assert loaded.manifest_path == "manifest.jsonl"
    assert loaded.tree.n == 16 and loaded.tree.sig_len == 10
    assert loaded.tree.params.min_fill == 3
    assert loaded.tree.params.max_fill == 7
    assert loaded.tree.params.fhd_params.alpha == 0.5
    assert loaded.tree.params.fhd_params.normalize is True
    assert trees_equal(tree.root, loaded.tree.root)
    assert loaded.tree.audit().ok

    for i in (0, 100, 299):
        got = sorted(e.image_id for e in loaded.tree.search(sigs[i], beam_width=1))
        want = sorted(e.image_id for e in tree.search(sigs[i], beam_width=1))
        assert got == want


def test_save_is_byte_deterministic(tmp_path):
    tree, _ = build_random_tree(53, 120)
    p1, p2 = tmp_path / "a.idx", tmp_path / "b.idx"
    save_index(tree, p1, manifest_path="m")
    save_index(tree, p2, manifest_path="m")
    assert p1.read_bytes() == p2.read_bytes()


def test_truncated_file_is_corrupt(tmp_path):
    tree, _ = build_random_tree(57, 50)
    path = tmp_path / "t.idx"
    save_index(tree, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(CorruptIndex):
        load_index(path)


def test_bitflip_fails_checksum(tmp_path):
    tree, _ = build_random_tree(59, 50)
    path = tmp_path / "t.idx"
    save_index(tree, path)
    data = bytearray(path.read_bytes())
    data[len(data) // 2] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(CorruptIndex):
        load_index(path)


def test_trailing_garbage_is_corrupt(tmp_path):
    tree, _ = build_random_tree(61, 20)
    path = tmp_path / "t.idx"
    save_index(tree, path)
    path.write_bytes(path.read_bytes() + b"extra")
    with pytest.raises(CorruptIndex):
        load_index(path)


def test_bad_magic_and_version(tmp_path):
    tree, _ = build_random_tree(63, 20)
    path = tmp_path / "t.idx"
    save_index(tree, path)
    data = bytearray(path.read_bytes())
    wrong_magic = bytearray(data)
    wrong_magic[:4] = b"NOPE"
    path.write_bytes(bytes(wrong_magic))
    with pytest.raises(FormatVersionMismatch):
        load_index(path)
    wrong_version = bytearray(data)
    wrong_version[4] = 99
    path.write_bytes(bytes(wrong_version))
    with pytest.raises(FormatVersionMismatch):
        load_index(path)


def test_header_shorter_than_header_struct(tmp_path):
    path = tmp_path / "t.idx"
    path.write_bytes(b"FSTR\x01")
    with pytest.raises(CorruptIndex):
        load_index(path)


def test_insert_after_load_keeps_tree_healthy(tmp_path):
    tree, _ = build_random_tree(67, 150)
    path = tmp_path / "t.idx"
    save_index(tree, path)
    loaded = load_index(path).tree
    rng = np.random.default_rng(68)
    for i in range(150, 250):
        loaded.insert(random_signature(rng), i)
    report = loaded.audit()
    assert report.ok, report.violations
    assert report.leaf_entry_count == 250


def test_leaf_paths_survive_roundtrip(tmp_path):
    tree = STree(16, 10)
    rng = np.random.default_rng(9)
    tree.insert(random_signature(rng), 0, path="images/red.ppm")
    tree.insert(random_signature(rng), 1, path="images/ünïcode.ppm")
    path = tmp_path / "t.idx"
    save_index(tree, path)
    entries = {e.image_id: e.path for e in load_index(path).tree.leaf_entries()}
    assert entries == {0: "images/red.ppm", 1: "images/ünïcode.ppm"}
