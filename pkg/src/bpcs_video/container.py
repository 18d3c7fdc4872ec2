"""The embedded bitstream: a 14-byte header, the payload, and 63-bit blocks.

Header layout (big-endian)::

    offset  size  field
    0       4     magic  b"BPCS"
    4       1     version (1)
    5       1     flags  (bit 0 set = Gray-coded planes, bits 1-7 zero)
    6       4     payload length in bytes
    10      4     CRC-32 of the payload

The container is emitted most-significant bit first and cut into blocks of 63
bits. Each block fills a patch in row-major order after the reserved
conjugation flag at ``(0, 0)``.
"""

from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .bitplane import PATCH, Coding
from .errors import CorruptionError, FormatError, NoPayloadError, VersionError

MAGIC = b"BPCS"
VERSION = 1
HEADER_SIZE = 14
BLOCK_BITS = PATCH * PATCH - 1
FLAG_GRAY = 0x01

_HEADER = struct.Struct(">4sBBII")


@dataclass(frozen=True)
class ContainerHeader:
    payload_length: int
    payload_crc32: int
    coding: Coding = Coding.BINARY
    version: int = VERSION

    @property
    def flags(self) -> int:
        return FLAG_GRAY if self.coding is Coding.GRAY else 0

    def to_bytes(self) -> bytes:
        return _HEADER.pack(MAGIC, self.version, self.flags, self.payload_length, self.payload_crc32)

    @classmethod
    def from_bytes(cls, data: bytes) -> "ContainerHeader":
        if len(data) < HEADER_SIZE:
            raise FormatError(f"header: need {HEADER_SIZE} bytes, got {len(data)}")
        magic, version, flags, length, crc = _HEADER.unpack(bytes(data[:HEADER_SIZE]))
        if magic != MAGIC:
            raise NoPayloadError("no payload found (magic mismatch)")
        if version != VERSION:
            raise VersionError(f"unsupported container version {version}")
        if flags & ~FLAG_GRAY:
            raise CorruptionError(f"reserved header flag bits set: 0x{flags:02x}")
        coding = Coding.GRAY if flags & FLAG_GRAY else Coding.BINARY
        return cls(length, crc, coding, version)

    @property
    def total_blocks(self) -> int:
        return blocks_needed(self.payload_length)


def crc32(data: bytes) -> int:
    """IEEE 802.3 CRC-32 (reflected 0xEDB88320, init and final XOR 0xFFFFFFFF)."""
    return zlib.crc32(bytes(data)) & 0xFFFFFFFF


def blocks_needed(payload_length: int) -> int:
    return math.ceil(8 * (HEADER_SIZE + payload_length) / BLOCK_BITS)


def payload_capacity(blocks: int) -> int:
    """Largest payload, in bytes, that fits into ``blocks`` blocks."""
    return max(0, (BLOCK_BITS * blocks) // 8 - HEADER_SIZE)


def build_container(payload: bytes, coding: Coding = Coding.BINARY) -> bytes:
    payload = bytes(payload)
    if len(payload) >= 2**32:
        raise FormatError(f"payload_length: {len(payload)} bytes does not fit in 32 bits")
    header = ContainerHeader(len(payload), crc32(payload), Coding(coding))
    return header.to_bytes() + payload


def parse_container(data: bytes) -> tuple[ContainerHeader, bytes]:
    """Split a container into header and payload, verifying length and CRC."""
    header = ContainerHeader.from_bytes(data)
    end = HEADER_SIZE + header.payload_length
    if len(data) < end:
        raise FormatError(
            f"payload_length: header claims {header.payload_length} bytes, "
            f"only {len(data) - HEADER_SIZE} present"
        )
    payload = bytes(data[HEADER_SIZE:end])
    if crc32(payload) != header.payload_crc32:
        raise CorruptionError(
            f"CRC mismatch: header 0x{header.payload_crc32:08x}, payload 0x{crc32(payload):08x}"
        )
    return header, payload


def pack_blocks(container: bytes) -> np.ndarray:
    """Cut a byte string into zero-padded 63-bit blocks, shape ``(n, 63)``."""
    bits = np.unpackbits(np.frombuffer(bytes(container), dtype=np.uint8))
    n = -(-bits.size // BLOCK_BITS)
    padded = np.zeros(n * BLOCK_BITS, dtype=np.uint8)
    padded[: bits.size] = bits
    return padded.reshape(n, BLOCK_BITS)


def unpack_blocks(blocks: np.ndarray, bit_length: int) -> bytes:
    """Inverse of :func:`pack_blocks` keeping the first ``bit_length`` bits."""
    bits = np.asarray(blocks, dtype=np.uint8).reshape(-1)
    if bit_length > bits.size or bit_length % 8:
        raise FormatError(f"bit_length: cannot take {bit_length} bits from {bits.size}")
    return np.packbits(bits[:bit_length]).tobytes()


def blocks_to_patches(blocks: np.ndarray) -> np.ndarray:
    """Place each block behind a zero flag bit; ``(n, 63) -> (n, 8, 8)``."""
    blocks = np.asarray(blocks, dtype=np.uint8).reshape(-1, BLOCK_BITS)
    flat = np.zeros((blocks.shape[0], PATCH * PATCH), dtype=np.uint8)
    flat[:, 1:] = blocks
    return flat.reshape(-1, PATCH, PATCH)


def patches_to_blocks(patches: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(flags, blocks)`` read from a stack of patches."""
    flat = np.asarray(patches, dtype=np.uint8).reshape(-1, PATCH * PATCH)
    return flat[:, 0].copy(), flat[:, 1:].copy()


def block_to_patch(block) -> np.ndarray:
    block = np.asarray(block, dtype=np.uint8)
    if block.shape != (BLOCK_BITS,):
        raise FormatError(f"block: expected {BLOCK_BITS} bits, got shape {block.shape}")
    return blocks_to_patches(block[None, :])[0]


def patch_to_block(patch) -> tuple[int, np.ndarray]:
    flags, blocks = patches_to_blocks(np.asarray(patch)[None, ...])
    return int(flags[0]), blocks[0]
