"""
Recorded snapshot source: BFSN binary files.

Layout (little-endian):
    0   4s   magic b"BFSN"
    4   u16  format version (1)
    6   u16  M, number of sensors
    8   u32  K, number of snapshots
    12  u32  reserved (0)
    16  K*M complex samples, float64 (real, imag) pairs, sensor-major within each snapshot
"""
import logging
import struct
from pathlib import Path

import numpy as np

from src.array_model import SnapshotMatrix
from src.errors import DomainError, FormatError

logger = logging.getLogger(__name__)

MAGIC = b"BFSN"
VERSION = 1
HEADER = struct.Struct("<4sHHII")
SAMPLE_BYTES = 16


def write_recorded_snapshots(path: str | Path, snapshots: SnapshotMatrix) -> int:
    """Write an M x K snapshot matrix. Returns the file size in bytes."""
    X = np.asarray(snapshots, dtype=complex)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DomainError(f"snapshot matrix must be M x K with M, K >= 1, got shape {X.shape}")
    M, K = X.shape
    if M > 0xFFFF or K > 0xFFFFFFFF:
        raise DomainError(f"M={M}, K={K} do not fit the header fields")
    body = np.ascontiguousarray(X.T).astype("<c16").tobytes()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, M, K, 0))
        f.write(body)
    logger.info("Wrote %d x %d snapshots to %s", M, K, path)
    return HEADER.size + len(body)


def parse_recorded_snapshots(data: bytes, expected_sensors: int | None = None) -> SnapshotMatrix:
    if len(data) < HEADER.size:
        raise FormatError(f"file has {len(data)} bytes, the header needs {HEADER.size}", offset=len(data))
    magic, version, M, K, _reserved = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}", offset=4)
    if M == 0:
        raise FormatError("header declares M = 0 sensors", offset=6)
    if expected_sensors is not None and M != expected_sensors:
        raise FormatError(f"file has M={M} sensors, the array has {expected_sensors}", offset=6)
    if K == 0:
        raise FormatError("header declares K = 0 snapshots", offset=8)
    expected = HEADER.size + K * M * SAMPLE_BYTES
    if len(data) < expected:
        raise FormatError(
            f"truncated body: expected {expected} bytes for M={M}, K={K}, got {len(data)}", offset=len(data)
        )
    if len(data) > expected:
        raise FormatError(
            f"trailing data: expected {expected} bytes for M={M}, K={K}, got {len(data)}", offset=expected
        )
    samples = np.frombuffer(data, dtype="<c16", count=K * M, offset=HEADER.size)
    return samples.reshape(K, M).T.astype(complex)


def load_recorded_snapshots(path: str | Path, expected_sensors: int | None = None) -> SnapshotMatrix:
    """M x K snapshot matrix from a BFSN file."""
    with open(path, "rb") as f:
        data = f.read()
    X = parse_recorded_snapshots(data, expected_sensors)
    logger.info("Loaded %d x %d snapshots from %s", X.shape[0], X.shape[1], path)
    return X
