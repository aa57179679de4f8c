"""Binary field checkpoints.

Layout (all integers little-endian):

  bytes 0..3   magic b"NLSF"
  byte  4      format version (1)
  byte  5      grid dimension (1..3)
  byte  6      representation: 0 physical, 1 frequency
  byte  7      reserved (0)
  bytes 8..11  points per axis, uint32
  bytes 12..19 box length, float64
  remainder    n^dim complex values as interleaved (re, im) float64 pairs,
               C order
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .field import Repr, SpectralField
from .grid import make_grid

MAGIC = b"NLSF"
VERSION = 1
_HEADER = struct.Struct("<4sBBBBId")


def save_checkpoint(f: SpectralField, path: Path | str) -> None:
    repr_code = 0 if f.repr is Repr.PHYSICAL else 1
    header = _HEADER.pack(MAGIC, VERSION, f.grid.dim, repr_code, 0, f.grid.n, f.grid.box_length)
    flat = np.ascontiguousarray(f.values, dtype=np.complex128)
    payload = flat.astype("<c16").tobytes()
    Path(path).write_bytes(header + payload)


def load_checkpoint(path: Path | str) -> SpectralField:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError("truncated checkpoint header")
    magic, version, dim, repr_code, _, n, box_length = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    grid = make_grid(dim, n, box_length)
    expected = grid.size * 16
    payload = raw[_HEADER.size:]
    if len(payload) != expected:
        raise ValueError(f"payload size {len(payload)} != expected {expected}")
    values = np.frombuffer(payload, dtype="<c16").astype(np.complex128).reshape(grid.shape)
    repr_ = Repr.PHYSICAL if repr_code == 0 else Repr.FREQUENCY
    return SpectralField(grid, values, repr_)
