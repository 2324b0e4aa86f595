"""Low-level helpers for the little-endian binary file formats.

Files end with a CRC-32 (zlib) of every preceding byte.  Readers check the
magic first (wrong producer -> FormatError), then the checksum (truncation or
corruption -> ChecksumError), then parse the payload.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import ChecksumError, FormatError

_CRC_LEN = 4


class Writer:
    def __init__(self) -> None:
        self._chunks: list[bytes] = []

    def raw(self, data: bytes) -> None:
        self._chunks.append(data)

    def u8(self, value: int) -> None:
        self.raw(struct.pack("<B", value))

    def u16(self, value: int) -> None:
        self.raw(struct.pack("<H", value))

    def u32(self, value: int) -> None:
        self.raw(struct.pack("<I", value))

    def u64(self, value: int) -> None:
        self.raw(struct.pack("<Q", value))

    def text(self, value: str) -> None:
        data = value.encode("utf-8")
        self.u32(len(data))
        self.raw(data)

    def f64_array(self, arr: np.ndarray) -> None:
        self.raw(np.ascontiguousarray(arr, dtype="<f8").tobytes())

    def c128_array(self, arr: np.ndarray) -> None:
        self.raw(np.ascontiguousarray(arr, dtype="<c16").tobytes())

    def finish(self) -> bytes:
        payload = b"".join(self._chunks)
        return payload + struct.pack("<I", zlib.crc32(payload))


class Reader:
    """Sequential reader over a checksum-verified payload."""

    def __init__(self, payload: bytes) -> None:
        self._buf = payload
        self._pos = 0

    def _take(self, count: int) -> bytes:
        end = self._pos + count
        if end > len(self._buf):
            raise FormatError("payload ended before the declared content")
        data = self._buf[self._pos:end]
        self._pos = end
        return data

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def u16(self) -> int:
        return struct.unpack("<H", self._take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def text(self) -> str:
        length = self.u32()
        return self._take(length).decode("utf-8")

    def f64_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(count * 8), dtype="<f8").astype(np.float64)

    def c128_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(count * 16), dtype="<c16").astype(np.complex128)

    def at_end(self) -> bool:
        return self._pos == len(self._buf)


def open_payload(data: bytes, magic: bytes) -> Reader:
    """Validate magic and checksum, return a reader over the payload after magic."""
    if len(data) >= len(magic) and data[: len(magic)] != magic:
        raise FormatError(
            f"bad magic {data[:len(magic)]!r}; expected {magic.decode('ascii')!r}"
        )
    if len(data) < len(magic) + _CRC_LEN:
        raise ChecksumError("file truncated: shorter than magic plus checksum")
    payload, trailer = data[:-_CRC_LEN], data[-_CRC_LEN:]
    expected = struct.unpack("<I", trailer)[0]
    actual = zlib.crc32(payload)
    if actual != expected:
        raise ChecksumError(
            f"CRC-32 mismatch: file says {expected:#010x}, content is {actual:#010x}"
        )
    return Reader(payload[len(magic):])
