"""Binary tensor file format used repo-wide.

Layout: 8-byte magic, u32 rank, u32 dims (little-endian), then the
float32 payload in row-major order. Complex tensors use their own magic
and store interleaved (re, im) float32 pairs.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC_REAL = b"SETATF32"
MAGIC_COMPLEX = b"SETATC64"


class TensorFormatError(IOError):
    """Raised when a tensor file is malformed or truncated."""


def save_tensor(path: str | Path, arr: np.ndarray) -> None:
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        magic = MAGIC_COMPLEX
        payload = np.ascontiguousarray(arr, dtype=np.complex64)
        flat = payload.view(np.float32).reshape(-1)
    else:
        magic = MAGIC_REAL
        payload = np.ascontiguousarray(arr, dtype=np.float32)
        flat = payload.reshape(-1)
    header = magic + struct.pack("<I", arr.ndim)
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(flat.astype("<f4", copy=False).tobytes())


def load_tensor(path: str | Path) -> np.ndarray:
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12:
        raise TensorFormatError(f"{path}: truncated header")
    magic = raw[:8]
    if magic not in (MAGIC_REAL, MAGIC_COMPLEX):
        raise TensorFormatError(f"{path}: bad magic {magic!r}")
    (rank,) = struct.unpack_from("<I", raw, 8)
    dims_end = 12 + 4 * rank
    if len(raw) < dims_end:
        raise TensorFormatError(f"{path}: truncated dims")
    dims = struct.unpack_from(f"<{rank}I", raw, 12)
    count = int(np.prod(dims, dtype=np.int64)) if rank else 1
    scalars = count * (2 if magic == MAGIC_COMPLEX else 1)
    expected = dims_end + 4 * scalars
    if len(raw) != expected:
        raise TensorFormatError(
            f"{path}: payload size {len(raw) - dims_end} != expected {4 * scalars}"
        )
    flat = np.frombuffer(raw, dtype="<f4", offset=dims_end)
    if magic == MAGIC_COMPLEX:
        return flat.view(np.complex64).reshape(dims).copy()
    return flat.reshape(dims).copy()
