"""Frame selection, slot planning, embedding and extraction.

Slots are visited in one canonical order: selected frames in selection order,
then channels (R, G, B or the single gray channel), then the planes of the
mask in ascending order, then patches row by row. A slot is any patch whose
complexity is at least the threshold. The first two slots carry the
container header; the extractor re-derives the same slots from the stego
frames alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitplane import (
    CHECKERBOARD,
    MAX_COMPLEXITY,
    NUM_PLANES,
    PATCH,
    Coding,
    decode_values,
    encode_values,
    from_patch_major,
    patch_complexities,
    patch_major_complexity,
    to_patch_major,
)
from .container import (
    HEADER_SIZE,
    ContainerHeader,
    blocks_needed,
    blocks_to_patches,
    build_container,
    crc32,
    pack_blocks,
    patches_to_blocks,
    payload_capacity,
    unpack_blocks,
)
from .errors import (
    CapacityError,
    ConfigError,
    CorruptionError,
    NoPayloadError,
    TruncationError,
)
from .frames import Frame, FrameSequence

DEFAULT_THRESHOLD = 34
MAX_THRESHOLD = MAX_COMPLEXITY // 2

_LCG_MULTIPLIER = 6364136223846793005
_LCG_INCREMENT = 1442695040888963407
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class EmbedConfig:
    """The stego key. ``end_frame=None`` means the last frame of the sequence."""

    threshold: int = DEFAULT_THRESHOLD
    start_frame: int = 0
    end_frame: int | None = None
    stride: int = 1
    shuffle_seed: int | None = None
    plane_mask: tuple[int, ...] = tuple(range(NUM_PLANES))
    coding: Coding = Coding.BINARY

    def __post_init__(self):
        object.__setattr__(self, "coding", Coding(self.coding))
        mask = tuple(sorted(set(int(p) for p in self.plane_mask)))
        object.__setattr__(self, "plane_mask", mask)
        if not 1 <= self.threshold <= MAX_THRESHOLD:
            raise ConfigError(f"threshold must be in 1..{MAX_THRESHOLD}, got {self.threshold}")
        if not mask or mask[0] < 0 or mask[-1] >= NUM_PLANES:
            raise ConfigError(f"plane_mask must be a nonempty subset of 0..7, got {self.plane_mask}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if self.start_frame < 0:
            raise ConfigError(f"start_frame must be >= 0, got {self.start_frame}")
        if self.end_frame is not None and self.end_frame < self.start_frame:
            raise ConfigError(f"end_frame {self.end_frame} precedes start_frame {self.start_frame}")
        if self.shuffle_seed is not None and not 0 <= self.shuffle_seed <= _U64:
            raise ConfigError(f"shuffle_seed must be an unsigned 64-bit integer, got {self.shuffle_seed}")

    def last_frame(self, sequence_length: int) -> int:
        end = sequence_length - 1 if self.end_frame is None else self.end_frame
        if end >= sequence_length or self.start_frame >= sequence_length:
            raise ConfigError(
                f"frame range {self.start_frame}..{end} outside sequence of {sequence_length} frames"
            )
        return end


@dataclass
class SlotPlan:
    """Usable patches in canonical order.

    ``slots`` is an ``(n, 5)`` integer array with columns
    ``(frame, channel, plane, patch_x, patch_y)``; ``frame`` indexes the full
    sequence.
    """

    slots: np.ndarray

    @property
    def capacity_blocks(self) -> int:
        return int(self.slots.shape[0])

    def __len__(self) -> int:
        return self.capacity_blocks

    def as_tuples(self) -> list[tuple[int, int, int, int, int]]:
        return [tuple(int(v) for v in row) for row in self.slots]


@dataclass
class EmbedReport:
    blocks_written: int
    blocks_conjugated: int
    frames_touched: int
    capacity_blocks: int
    per_plane_usage: dict[int, int] = field(default_factory=dict)

    def summary(self) -> str:
        planes = ", ".join(f"{p}:{n}" for p, n in sorted(self.per_plane_usage.items()))
        return (
            f"{self.blocks_written} blocks written ({self.blocks_conjugated} conjugated) "
            f"of {self.capacity_blocks} available, {self.frames_touched} frames touched; "
            f"per plane {{{planes}}}"
        )


class Lcg64:
    """64-bit LCG (Knuth MMIX constants) yielding the top 32 bits of each step."""

    def __init__(self, seed: int):
        self.state = seed & _U64

    def next_word(self) -> int:
        self.state = (self.state * _LCG_MULTIPLIER + _LCG_INCREMENT) & _U64
        return self.state >> 32


def shuffle(items: list, seed: int) -> list:
    """Seeded Fisher-Yates shuffle, reproducible across platforms.

    For ``i`` from ``n - 1`` down to 1 the generator is stepped once and
    ``j = word % (i + 1)`` is swapped with ``i``.
    """
    out = list(items)
    rng = Lcg64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.next_word() % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def select_frames(sequence_length: int, config: EmbedConfig) -> list[int]:
    end = config.last_frame(sequence_length)
    frames = list(range(config.start_frame, end + 1, config.stride))
    if config.shuffle_seed is not None:
        frames = shuffle(frames, config.shuffle_seed)
    return frames


@dataclass
class _FrameScan:
    """Coded patches and usable slots of one selected frame."""

    frame: int
    blocks: np.ndarray  # (channels, rows, cols, 8, 8), coded samples
    slots: np.ndarray  # (n, 5) in canonical order

    def patch_index(self, slots: np.ndarray) -> np.ndarray:
        _, rows, cols = self.blocks.shape[:3]
        return (slots[:, 1] * rows + slots[:, 4]) * cols + slots[:, 3]

    def read(self, slots: np.ndarray) -> np.ndarray:
        samples = self.blocks.reshape(-1, PATCH, PATCH)[self.patch_index(slots)]
        return (samples >> slots[:, 2, None, None].astype(np.uint8)) & 1

    def write(self, slots: np.ndarray, patches: np.ndarray) -> None:
        flat = self.blocks.reshape(-1, PATCH, PATCH)
        index = self.patch_index(slots)
        # One plane at a time: a patch position may hold slots in several planes.
        for p in np.unique(slots[:, 2]):
            sel = slots[:, 2] == p
            keep = np.uint8(0xFF ^ (1 << int(p)))
            flat[index[sel]] = (flat[index[sel]] & keep) | (patches[sel] << np.uint8(p))


def _scan(sequence: FrameSequence, selected: list[int], config: EmbedConfig):
    """Yield a :class:`_FrameScan` per selected frame, in selection order."""
    mask = np.asarray(config.plane_mask, dtype=np.int64)
    for frame in selected:
        blocks = to_patch_major(encode_values(sequence[frame].pixels, config.coding))
        comp = patch_major_complexity(blocks, config.plane_mask)  # (planes, C, rows, cols)
        channel, plane_pos, py, px = np.nonzero(comp.transpose(1, 0, 2, 3) >= config.threshold)
        slots = np.empty((channel.size, 5), dtype=np.int64)
        slots[:, 0] = frame
        slots[:, 1] = channel
        slots[:, 2] = mask[plane_pos]
        slots[:, 3] = px
        slots[:, 4] = py
        yield _FrameScan(frame, blocks, slots)


def plan_slots(sequence: FrameSequence, config: EmbedConfig) -> SlotPlan:
    """Every patch with complexity >= threshold over the selected frames, in canonical order."""
    selected = select_frames(len(sequence), config)
    slots = [scan.slots for scan in _scan(sequence, selected, config)]
    return SlotPlan(np.concatenate(slots) if slots else np.empty((0, 5), dtype=np.int64))


def capacity(sequence: FrameSequence, config: EmbedConfig) -> tuple[int, int]:
    """``(blocks, payload_bytes)`` available under ``config``."""
    blocks = plan_slots(sequence, config).capacity_blocks
    return blocks, payload_capacity(blocks)


def _count_slots(frames: list[Frame], config: EmbedConfig) -> int:
    total = 0
    for frame in frames:
        blocks = to_patch_major(encode_values(frame.pixels, config.coding))
        total += int(np.count_nonzero(patch_major_complexity(blocks, config.plane_mask) >= config.threshold))
    return total


def embed(sequence: FrameSequence, payload: bytes, config: EmbedConfig) -> tuple[FrameSequence, EmbedReport]:
    """Hide ``payload`` in the selected frames; returns the stego sequence and a report.

    Frames are scanned in selection order only until the container fits.
    Raises :class:`CapacityError` when it does not fit at all; nothing is
    written in that case.
    """
    selected = select_frames(len(sequence), config)
    data_blocks = pack_blocks(build_container(payload, config.coding))
    needed = len(data_blocks)

    used, found = [], 0
    for scan in _scan(sequence, selected, config):
        if found < needed:
            used.append((found, scan))
        found += len(scan.slots)
        if found >= needed:
            break
    if found < needed:
        raise CapacityError(needed, found)
    capacity_blocks = found + _count_slots([sequence[f] for f in selected[len(used):]], config)

    patches = blocks_to_patches(data_blocks)
    simple = patch_complexities(patches) < config.threshold
    patches[simple] ^= CHECKERBOARD

    frames = list(sequence.frames)
    usage: dict[int, int] = {}
    for offset, scan in used:
        slots = scan.slots[: needed - offset]
        scan.write(slots, patches[offset : offset + len(slots)])
        coded = np.array(encode_values(sequence[scan.frame].pixels, config.coding))
        from_patch_major(scan.blocks, coded)
        frames[scan.frame] = Frame(decode_values(coded, config.coding))
        for p, n in zip(*np.unique(slots[:, 2], return_counts=True)):
            usage[int(p)] = usage.get(int(p), 0) + int(n)

    report = EmbedReport(
        blocks_written=needed,
        blocks_conjugated=int(np.count_nonzero(simple)),
        frames_touched=len(used),
        capacity_blocks=capacity_blocks,
        per_plane_usage=dict(sorted(usage.items())),
    )
    return FrameSequence(frames, list(sequence.names)), report


def _decode_blocks(patches: np.ndarray) -> np.ndarray:
    flags, _ = patches_to_blocks(patches)
    patches[flags == 1] ^= CHECKERBOARD
    return patches_to_blocks(patches)[1]


def extract(sequence: FrameSequence, config: EmbedConfig) -> bytes:
    """Recover the payload hidden with the same ``config``.

    Raises
    ------
    NoPayloadError
        The first two slots do not start with the container magic.
    VersionError, CorruptionError
        Unknown container version, reserved bits set, coding mismatch or a
        failed CRC.
    TruncationError
        The header asks for more blocks than the frames provide.
    """
    selected = select_frames(len(sequence), config)
    header_blocks = blocks_needed(0)
    header = None
    needed = header_blocks
    collected: list[np.ndarray] = []
    count = 0
    for scan in _scan(sequence, selected, config):
        pos = 0
        while pos < len(scan.slots) and count < needed:
            take = scan.slots[pos : pos + needed - count]
            collected.append(_decode_blocks(scan.read(take)))
            pos += len(take)
            count += len(take)
            if header is None and count >= header_blocks:
                head = np.concatenate(collected)[:header_blocks]
                header = ContainerHeader.from_bytes(unpack_blocks(head, 8 * HEADER_SIZE))
                if header.coding is not config.coding:
                    raise CorruptionError(
                        f"container was written with {header.coding.value} coding, "
                        f"extracting with {config.coding.value}"
                    )
                needed = header.total_blocks
        if header is not None and count >= needed:
            break

    if header is None:
        raise NoPayloadError(f"no payload found (only {count} usable patches)")
    if count < needed:
        raise TruncationError(
            f"header announces {header.payload_length} bytes ({needed} blocks), "
            f"only {count} usable patches"
        )
    data = unpack_blocks(np.concatenate(collected), 8 * (HEADER_SIZE + header.payload_length))
    payload = data[HEADER_SIZE:]
    if crc32(payload) != header.payload_crc32:
        raise CorruptionError(
            f"CRC mismatch: header 0x{header.payload_crc32:08x}, payload 0x{crc32(payload):08x}"
        )
    return payload
