"""On-disk cache of overlap graphs.

Layout, little-endian::

    b"OMGA" | version u32 | n u32 | vertex count u64 | edge count u64
    row offsets i64 x (V + 1)
    neighbour ids u32 x 2E
    checksum u64

The checksum is an 8-byte BLAKE2b digest of every byte before it. Loading
memory-maps the file and validates magic, version, size and checksum.
"""

from __future__ import annotations

import hashlib
import mmap
import os
import struct
from pathlib import Path

import numpy as np

from biaslab.cycles import catalog_for
from biaslab.overlap import OverlapGraph, build_overlap

MAGIC = b"OMGA"
VERSION = 1
HEADER = struct.Struct("<4sIIQQ")
CHECKSUM = struct.Struct("<Q")
ENV_CACHE_DIR = "BIASLAB_CACHE_DIR"


class CacheError(ValueError):
    pass


def _digest(data) -> int:
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def cache_save(omega: OverlapGraph, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    V = omega.vertex_count
    body = b"".join(
        [
            HEADER.pack(MAGIC, VERSION, omega.n, V, omega.edge_count),
            np.ascontiguousarray(omega.offsets, dtype="<i8").tobytes(),
            np.ascontiguousarray(omega.neighbors, dtype="<u4").tobytes(),
        ]
    )
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as f:
        f.write(body)
        f.write(CHECKSUM.pack(_digest(body)))
    os.replace(tmp, path)
    return path


def cache_load(path) -> OverlapGraph:
    path = Path(path)
    with open(path, "rb") as f:
        size = os.fstat(f.fileno()).st_size
        if size < HEADER.size + CHECKSUM.size:
            raise CacheError(f"{path}: truncated header")
        mm = mmap.mmap(f.fileno(), 0, access=mmap.ACCESS_READ)
    magic, version, n, V, E = HEADER.unpack_from(mm, 0)
    if magic != MAGIC:
        raise CacheError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheError(f"{path}: unsupported format version {version}")
    expected = HEADER.size + 8 * (V + 1) + 4 * 2 * E + CHECKSUM.size
    if size != expected:
        raise CacheError(f"{path}: size {size} does not match header (expected {expected})")
    body_len = size - CHECKSUM.size
    (stored,) = CHECKSUM.unpack_from(mm, body_len)
    if _digest(memoryview(mm)[:body_len]) != stored:
        raise CacheError(f"{path}: checksum mismatch")
    offsets = np.frombuffer(mm, dtype="<i8", count=V + 1, offset=HEADER.size)
    nbrs = np.frombuffer(mm, dtype="<u4", count=2 * E, offset=HEADER.size + 8 * (V + 1))
    catalog = catalog_for(n)
    if len(catalog) != V:
        raise CacheError(f"{path}: vertex count {V} does not match K_{n}")
    return OverlapGraph(catalog, offsets, nbrs)


def cache_dir(explicit=None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "biaslab"


def cache_path(n: int, directory=None) -> Path:
    return cache_dir(directory) / f"omega_{n}.bin"


def load_or_build(n: int, directory=None, use_cache: bool = True, max_n: int | None = None) -> OverlapGraph:
    """Overlap graph of order n, through the cache when enabled."""
    kwargs = {} if max_n is None else {"max_n": max_n}
    if not use_cache:
        return build_overlap(catalog_for(n), **kwargs)
    path = cache_path(n, directory)
    if path.exists():
        try:
            return cache_load(path)
        except CacheError:
            pass
    omega = build_overlap(catalog_for(n), **kwargs)
    cache_save(omega, path)
    return omega
