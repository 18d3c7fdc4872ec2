"""Bit-plane decomposition, Gray coding, 8x8 patches and the complexity measure.

Planes are indexed 0 (least significant) to 7 (most significant). A patch is
an ``(8, 8)`` uint8 array of 0/1 values indexed ``[row, column]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

PATCH = 8
NUM_PLANES = 8
MAX_COMPLEXITY = 112


class Coding(str, enum.Enum):
    """How pixel values are coded before slicing into planes."""

    BINARY = "binary"
    GRAY = "gray"


_VALUES = np.arange(256, dtype=np.uint8)
GRAY_LUT = _VALUES ^ (_VALUES >> 1)
INVERSE_GRAY_LUT = np.empty(256, dtype=np.uint8)
INVERSE_GRAY_LUT[GRAY_LUT] = _VALUES

_LANE_ONES = np.uint64(0x0101010101010101)
_LOW_SEVEN_BITS = np.uint64(0x7F7F7F7F7F7F7F7F)
_NO_TOP_LANE = np.uint64(0x00FFFFFFFFFFFFFF)


def to_gray(b):
    """Gray-code an 8-bit value (or array of them): ``b ^ (b >> 1)``."""
    return GRAY_LUT[b] if isinstance(b, np.ndarray) else int(GRAY_LUT[int(b) & 0xFF])


def from_gray(g):
    """Inverse of :func:`to_gray`."""
    return INVERSE_GRAY_LUT[g] if isinstance(g, np.ndarray) else int(INVERSE_GRAY_LUT[int(g) & 0xFF])


def encode_values(values: np.ndarray, coding: Coding) -> np.ndarray:
    """Map raw uint8 samples into the coded domain the planes are sliced from."""
    values = np.asarray(values, dtype=np.uint8)
    return GRAY_LUT[values] if Coding(coding) is Coding.GRAY else values.copy()


def decode_values(coded: np.ndarray, coding: Coding) -> np.ndarray:
    coded = np.asarray(coded, dtype=np.uint8)
    return INVERSE_GRAY_LUT[coded] if Coding(coding) is Coding.GRAY else coded.copy()


@dataclass
class BitPlaneStack:
    """Eight bit planes of one channel; ``planes[p, y, x]``."""

    planes: np.ndarray
    coding: Coding = Coding.BINARY

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]


def decompose(channel, coding: Coding = Coding.BINARY) -> BitPlaneStack:
    """Slice a ``(height, width)`` grid of 8-bit values into 8 bit planes."""
    channel = np.asarray(channel)
    if channel.ndim != 2 or channel.size == 0:
        raise DimensionError(f"channel must be a non-empty 2-D grid, got shape {channel.shape}")
    if channel.dtype != np.uint8:
        if channel.min() < 0 or channel.max() > 255:
            raise DimensionError("channel values must lie in [0, 255]")
        channel = channel.astype(np.uint8)
    coded = encode_values(channel, coding)
    shifts = np.arange(NUM_PLANES, dtype=np.uint8)[:, None, None]
    planes = (coded[None, :, :] >> shifts) & 1
    return BitPlaneStack(planes.astype(np.uint8), Coding(coding))


def recompose(stack: BitPlaneStack) -> np.ndarray:
    """Rebuild the 8-bit channel from its planes (exact inverse of decompose)."""
    planes = np.asarray(stack.planes, dtype=np.uint8)
    coded = np.zeros(planes.shape[1:], dtype=np.uint8)
    for p in range(NUM_PLANES):
        coded |= (planes[p] & 1) << p
    return decode_values(coded, stack.coding)


def complexity(patch) -> int:
    """Number of horizontally or vertically adjacent bit pairs that differ.

    Only pairs inside the patch count, so an 8x8 patch scores 0..112.
    """
    patch = np.asarray(patch, dtype=np.uint8)
    return int(np.count_nonzero(patch[:, 1:] != patch[:, :-1])
               + np.count_nonzero(patch[1:, :] != patch[:-1, :]))


def patch_complexities(patches: np.ndarray) -> np.ndarray:
    """Vectorized :func:`complexity` over a ``(..., 8, 8)`` stack of patches."""
    patches = np.ascontiguousarray(patches, dtype=np.uint8)
    # one byte per patch row, one 64-bit word per patch (row i in byte lane i)
    words = np.packbits(patches.reshape(-1)).view("<u8").reshape(patches.shape[:-2])
    horizontal = (words ^ (words >> np.uint64(1))) & _LOW_SEVEN_BITS
    vertical = (words ^ (words >> np.uint64(8))) & _NO_TOP_LANE
    return np.bitwise_count(horizontal).astype(np.int64) + np.bitwise_count(vertical)


def max_complexity(side: int) -> int:
    """Upper bound of the complexity of a ``side x side`` patch: 2*s*(s-1)."""
    if side < 1:
        raise DimensionError(f"patch side must be >= 1, got {side}")
    return 2 * side * (side - 1)


_rows, _cols = np.indices((PATCH, PATCH))
CHECKERBOARD = ((_rows + _cols) % 2 == 0).astype(np.uint8)
CHECKERBOARD.setflags(write=False)
del _rows, _cols


def checkerboard() -> np.ndarray:
    """The conjugation pattern: 1 where ``row + column`` is even (top-left set)."""
    return CHECKERBOARD.copy()


def conjugate(patch) -> np.ndarray:
    """XOR with the checkerboard. Maps complexity ``a`` to ``112 - a``."""
    return np.asarray(patch, dtype=np.uint8) ^ CHECKERBOARD


def patch_grid(width: int, height: int) -> tuple[int, int]:
    """Whole patches along each axis as ``(columns, rows)``; partial edges are dropped."""
    return width // PATCH, height // PATCH


def _check_patch_coords(plane: np.ndarray, px: int, py: int) -> None:
    cols, rows = patch_grid(plane.shape[1], plane.shape[0])
    if not (0 <= px < cols and 0 <= py < rows):
        raise DimensionError(
            f"patch ({px}, {py}) outside {cols}x{rows} patch grid of a "
            f"{plane.shape[1]}x{plane.shape[0]} plane"
        )


def extract_patch(plane: np.ndarray, px: int, py: int) -> np.ndarray:
    _check_patch_coords(plane, px, py)
    y, x = PATCH * py, PATCH * px
    return np.array(plane[y:y + PATCH, x:x + PATCH], dtype=np.uint8)


def write_patch(plane: np.ndarray, px: int, py: int, patch) -> None:
    """Overwrite the patch at grid position ``(px, py)`` in place."""
    _check_patch_coords(plane, px, py)
    patch = np.asarray(patch, dtype=np.uint8)
    if patch.shape != (PATCH, PATCH):
        raise DimensionError(f"patch must be 8x8, got {patch.shape}")
    y, x = PATCH * py, PATCH * px
    plane[y:y + PATCH, x:x + PATCH] = patch


def to_patch_major(coded: np.ndarray) -> np.ndarray:
    """Rearrange ``(..., height, width, channels)`` samples into whole patches.

    Returns a contiguous ``(..., channels, rows, cols, 8, 8)`` copy; partial
    patches at the right and bottom edges are dropped.
    """
    coded = np.asarray(coded, dtype=np.uint8)
    *lead, height, width, channels = coded.shape
    cols, rows = patch_grid(width, height)
    k = len(lead)
    blocks = coded[..., : rows * PATCH, : cols * PATCH, :].reshape(*lead, rows, PATCH, cols, PATCH, channels)
    order = list(range(k)) + [k + 4, k, k + 2, k + 1, k + 3]
    return np.ascontiguousarray(blocks.transpose(order))


def from_patch_major(blocks: np.ndarray, out: np.ndarray) -> None:
    """Write patch-major samples back into the covered region of ``out`` in place."""
    *lead, channels, rows, cols, _, _ = blocks.shape
    k = len(lead)
    order = list(range(k)) + [k + 1, k + 3, k + 2, k + 4, k]
    out[..., : rows * PATCH, : cols * PATCH, :] = blocks.transpose(order).reshape(
        *lead, rows * PATCH, cols * PATCH, channels
    )


def patch_major_complexity(blocks: np.ndarray, planes=range(NUM_PLANES)) -> np.ndarray:
    """Complexity of every patch for several planes at once.

    ``blocks`` has shape ``(..., 8, 8)`` of coded samples; the result has
    shape ``(len(planes), ...)``.
    """
    blocks = np.ascontiguousarray(blocks, dtype=np.uint8)
    # word per patch row, column c in byte lane c
    words = blocks.view("<u8")[..., 0]
    rows = [np.ascontiguousarray(words[..., i]) for i in range(PATCH)]
    planes = list(planes)
    out = np.empty((len(planes),) + blocks.shape[:-2], dtype=np.uint8)
    for k, p in enumerate(planes):
        # gather plane p into one word per patch: bit 8*c + r holds pixel (r, c)
        plane = np.zeros(blocks.shape[:-2], dtype=np.uint64)
        for r in range(PATCH):
            plane |= ((rows[r] >> np.uint64(p)) & _LANE_ONES) << np.uint64(r)
        horizontal = (plane ^ (plane >> np.uint64(8))) & _NO_TOP_LANE
        vertical = (plane ^ (plane >> np.uint64(1))) & _LOW_SEVEN_BITS
        out[k] = np.bitwise_count(horizontal) + np.bitwise_count(vertical)
    return out


def complexity_map(coded: np.ndarray) -> np.ndarray:
    """Complexity of every whole patch, for all eight planes at once.

    Parameters
    ----------
    coded : ndarray of uint8, shape ``(..., height, width, channels)``
        Samples already in the coded (binary or Gray) domain.

    Returns
    -------
    ndarray of uint8, shape ``(..., channels, 8, rows, cols)``
        ``out[..., c, p, py, px]`` is the complexity of patch ``(px, py)`` in
        plane ``p`` of channel ``c``.
    """
    per_plane = patch_major_complexity(to_patch_major(coded))  # (8, ..., C, rows, cols)
    k = per_plane.ndim - 4
    return np.moveaxis(per_plane, 0, k + 1)
