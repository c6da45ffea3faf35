"""Binary index file format: save and load signature trees.

Layout (all little-endian):

  header: magic "FSTR", version u32, n u32, sig_len u32, min_fill u32,
          max_fill u32, alpha f64, node count u64, checksum u32
          (CRC32 of everything after the header).
  extension block: normalize flag u8, manifest path length u32,
          manifest path UTF-8 bytes.
  nodes, pre-order: is_leaf u8, entry count u32, then per entry a packed
          signature followed by image id u64 + length-prefixed UTF-8 path
          (leaf) or child node ordinal u64 (internal). Ordinals index the
          pre-order sequence, root first.
"""

import struct
import zlib
from dataclasses import dataclass

from .errors import CorruptIndex, FormatVersionMismatch
from .fhd import FhdParams
from .signature import pack_signature, unpack_signature
from .stree import STree, STreeEntry, STreeNode, STreeParams

MAGIC = b"FSTR"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sIIIIIdQI")
_U8 = struct.Struct("<B")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


@dataclass
class LoadedIndex:
    tree: STree
    manifest_path: str


class _UnlinkedChild:
    """Stands in for a child node until ordinals are resolved."""

    parent = None


_UNLINKED = _UnlinkedChild()


def _preorder(root: STreeNode) -> list[STreeNode]:
    order = []
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        if not node.is_leaf:
            stack.extend(e.child for e in reversed(node.entries))
    return order


def save_index(tree: STree, path, manifest_path: str = "") -> None:
    """Write the tree to ``path``; byte output is a pure function of the tree."""
    nodes = _preorder(tree.root)
    ordinal = {id(node): i for i, node in enumerate(nodes)}

    parts = [_U8.pack(1 if tree.params.fhd_params.normalize else 0)]
    manifest_bytes = manifest_path.encode("utf-8")
    parts.append(_U32.pack(len(manifest_bytes)))
    parts.append(manifest_bytes)
    for node in nodes:
        parts.append(_U8.pack(1 if node.is_leaf else 0))
        parts.append(_U32.pack(len(node.entries)))
        for e in node.entries:
            parts.append(pack_signature(e.signature))
            if node.is_leaf:
                parts.append(_U64.pack(e.image_id))
                path_bytes = (e.path or "").encode("utf-8")
                parts.append(_U32.pack(len(path_bytes)))
                parts.append(path_bytes)
            else:
                parts.append(_U64.pack(ordinal[id(e.child)]))
    payload = b"".join(parts)

    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        tree.n,
        tree.sig_len,
        tree.params.min_fill,
        tree.params.max_fill,
        tree.params.fhd_params.alpha,
        len(nodes),
        zlib.crc32(payload) & 0xFFFFFFFF,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.offset = 0

    def unpack(self, st: struct.Struct):
        if self.offset + st.size > len(self.buf):
            raise CorruptIndex("unexpected end of index file")
        values = st.unpack_from(self.buf, self.offset)
        self.offset += st.size
        return values

    def read_bytes(self, count: int) -> bytes:
        if self.offset + count > len(self.buf):
            raise CorruptIndex("unexpected end of index file")
        out = self.buf[self.offset : self.offset + count]
        self.offset += count
        return out

    def read_signature(self):
        sig, self.offset = unpack_signature(self.buf, self.offset)
        return sig


def load_index(path) -> LoadedIndex:
    """Read an index file back into a tree, verifying checksum and structure."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise CorruptIndex(f"{path}: file shorter than header")
    magic, version, n, sig_len, min_fill, max_fill, alpha, node_count, checksum = _HEADER.unpack_from(
        data, 0
    )
    if magic != MAGIC:
        raise FormatVersionMismatch(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    payload = data[_HEADER.size :]
    if zlib.crc32(payload) & 0xFFFFFFFF != checksum:
        raise CorruptIndex(f"{path}: checksum mismatch")

    reader = _Reader(payload)
    (normalize,) = reader.unpack(_U8)
    (manifest_len,) = reader.unpack(_U32)
    manifest_path = reader.read_bytes(manifest_len).decode("utf-8")

    try:
        params = STreeParams(
            min_fill=min_fill,
            max_fill=max_fill,
            fhd_params=FhdParams(alpha=alpha, normalize=bool(normalize)),
        )
    except ValueError as exc:
        raise CorruptIndex(f"{path}: bad tree parameters: {exc}") from exc
    tree = STree(n, sig_len, params)

    nodes: list[STreeNode] = []
    child_refs: list[list[int]] = []
    for _ in range(node_count):
        (is_leaf,) = reader.unpack(_U8)
        (entry_count,) = reader.unpack(_U32)
        node = STreeNode(is_leaf=bool(is_leaf))
        refs: list[int] = []
        for _ in range(entry_count):
            sig = reader.read_signature()
            if sig.n != n or sig.sig_len != sig_len:
                raise CorruptIndex(f"{path}: entry signature shape does not match header")
            if node.is_leaf:
                (image_id,) = reader.unpack(_U64)
                (path_len,) = reader.unpack(_U32)
                entry_path = reader.read_bytes(path_len).decode("utf-8")
                node.entries.append(STreeEntry(sig, image_id=image_id, path=entry_path))
            else:
                (ref,) = reader.unpack(_U64)
                node.entries.append(STreeEntry(sig, child=_UNLINKED))
                refs.append(ref)
        nodes.append(node)
        child_refs.append(refs)
    if reader.offset != len(payload):
        raise CorruptIndex(f"{path}: {len(payload) - reader.offset} trailing bytes")
    if not nodes:
        raise CorruptIndex(f"{path}: no nodes")

    referenced = set()
    for i, node in enumerate(nodes):
        refs = child_refs[i]
        if node.is_leaf:
            continue
        for entry, ref in zip(node.entries, refs):
            if not 0 < ref < len(nodes):
                raise CorruptIndex(f"{path}: child ordinal {ref} out of range")
            if ref in referenced:
                raise CorruptIndex(f"{path}: node {ref} referenced twice")
            referenced.add(ref)
            entry.child = nodes[ref]
            nodes[ref].parent = node
    if len(referenced) != len(nodes) - 1:
        raise CorruptIndex(f"{path}: {len(nodes) - 1 - len(referenced)} orphan nodes")

    tree.root = nodes[0]
    ids = [e.image_id for e in tree.leaf_entries()]
    if len(set(ids)) != len(ids):
        raise CorruptIndex(f"{path}: duplicate image ids")
    tree._ids = set(ids)
    return LoadedIndex(tree=tree, manifest_path=manifest_path)
