"""EXFL binary field dumps.

Layout: magic b"EXFL", format version (u32 LE), dim (u32 LE), one u32 LE
size per direction, then the physical samples as little-endian float64 in
row-major order.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .spectral import GridSpec, SpectralField, to_physical, to_spectral

MAGIC = b"EXFL"
VERSION = 1


def write_field(path, field: SpectralField) -> None:
    samples = to_physical(field)
    write_samples(path, samples)


def write_samples(path, samples: np.ndarray) -> None:
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim not in (1, 2):
        raise ValueError(f"only 1D/2D fields supported, got ndim={samples.ndim}")
    header = MAGIC + struct.pack("<II", VERSION, samples.ndim)
    header += struct.pack(f"<{samples.ndim}I", *samples.shape)
    payload = np.ascontiguousarray(samples).astype("<f8").tobytes()
    Path(path).write_bytes(header + payload)


def read_samples(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError(f"{path}: not an EXFL file (bad magic {raw[:4]!r})")
    version, dim = struct.unpack_from("<II", raw, 4)
    if version != VERSION:
        raise ValueError(f"{path}: unsupported EXFL version {version}")
    if dim not in (1, 2):
        raise ValueError(f"{path}: unsupported dim {dim}")
    shape = struct.unpack_from(f"<{dim}I", raw, 12)
    offset = 12 + 4 * dim
    count = int(np.prod(shape))
    data = np.frombuffer(raw, dtype="<f8", count=count, offset=offset)
    return data.reshape(shape).astype(np.float64)


def read_field(path, *, dealias_fraction: float = 2.0 / 3.0,
               zero_mean: bool = False) -> SpectralField:
    samples = read_samples(path)
    grid = GridSpec(dim=samples.ndim, n=samples.shape[0],
                    dealias_fraction=dealias_fraction)
    return to_spectral(samples, grid, zero_mean=zero_mean)
