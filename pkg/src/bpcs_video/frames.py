"""Binary PPM/PGM frames and ordered frame sequences.

Video decoding happens elsewhere: dump the frames of a clip as ``P6``/``P5``
files (for instance ``ffmpeg -i clip.mp4 frames/f%04d.ppm``) and point
:func:`load_sequence` at the directory or at a manifest listing them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, SequenceError

FRAME_SUFFIXES = (".ppm", ".pgm", ".pnm")
_WHITESPACE = b" \t\n\r\v\f"
_MAGIC_CHANNELS = {b"P5": 1, b"P6": 3}


@dataclass(eq=False)
class Frame:
    """One raster frame; ``pixels`` has shape ``(height, width, channels)``."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim == 2:
            pixels = pixels[:, :, None]
        if pixels.ndim != 3 or pixels.shape[2] not in (1, 3):
            raise FormatError(f"pixels: expected (height, width, 1|3), got {pixels.shape}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise FormatError(f"dimensions: frame must be non-empty, got {pixels.shape[1]}x{pixels.shape[0]}")
        if pixels.dtype != np.uint8:
            if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
                raise FormatError("samples: values must lie in [0, 255]")
            pixels = pixels.astype(np.uint8)
        self.pixels = pixels

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(self.pixels, other.pixels)

    def copy(self) -> "Frame":
        return Frame(self.pixels.copy())


@dataclass
class FrameSequence:
    frames: list[Frame]
    names: list[str | None] = field(default_factory=list)

    def __post_init__(self):
        if not self.names:
            self.names = [None] * len(self.frames)
        if len(self.names) != len(self.frames):
            raise SequenceError("names: one name per frame required")
        check_uniform(self.frames, self.names)

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, index) -> Frame:
        return self.frames[index]

    def __iter__(self):
        return iter(self.frames)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.frames[0].shape

    def display_name(self, index: int) -> str:
        return self.names[index] or f"frame_{index:06d}"

    def stack(self, indices=None) -> np.ndarray:
        """Frames as one ``(n, height, width, channels)`` array (a copy)."""
        if indices is None:
            indices = range(len(self.frames))
        return np.stack([self.frames[i].pixels for i in indices])


def check_uniform(frames, names=None) -> None:
    if not frames:
        raise SequenceError("sequence is empty")
    names = names or [None] * len(frames)
    reference = frames[0].shape
    for i, frame in enumerate(frames):
        if frame.shape != reference:
            label = names[i] or f"#{i}"
            raise SequenceError(
                f"frame {label} has shape {frame.width}x{frame.height}x{frame.channels}, "
                f"expected {reference[1]}x{reference[0]}x{reference[2]}"
            )


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        if data[pos] in _WHITESPACE:
            pos += 1
        elif data[pos] == ord("#"):
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _read_header_int(data: bytes, pos: int, name: str) -> tuple[int, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos : pos + 1].isdigit():
        pos += 1
    if start == pos:
        raise FormatError(f"{name}: expected a decimal integer at byte {start}")
    return int(data[start:pos]), pos


def read_frame(data: bytes) -> Frame:
    """Decode a binary PGM (``P5``) or PPM (``P6``) image with maxval 255."""
    data = bytes(data)
    magic = data[:2]
    if magic not in _MAGIC_CHANNELS:
        raise FormatError(f"magic: expected P5 or P6, got {magic!r}")
    channels = _MAGIC_CHANNELS[magic]
    width, pos = _read_header_int(data, 2, "width")
    height, pos = _read_header_int(data, pos, "height")
    maxval, pos = _read_header_int(data, pos, "maxval")
    if width <= 0:
        raise FormatError(f"width: must be positive, got {width}")
    if height <= 0:
        raise FormatError(f"height: must be positive, got {height}")
    if maxval != 255:
        raise FormatError(f"maxval: unsupported value {maxval} (only 255)")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError("header: missing whitespace after maxval")
    pos += 1
    size = width * height * channels
    samples = data[pos : pos + size]
    if len(samples) < size:
        raise FormatError(f"samples: truncated, expected {size} bytes, got {len(samples)}")
    pixels = np.frombuffer(samples, dtype=np.uint8).reshape(height, width, channels)
    return Frame(pixels.copy())


def write_frame(frame: Frame) -> bytes:
    """Canonical encoding: ``P5|P6\\n<w> <h>\\n255\\n`` followed by raw samples."""
    magic = "P6" if frame.channels == 3 else "P5"
    header = f"{magic}\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(frame.pixels, dtype=np.uint8).tobytes()


def _bytewise(name: str) -> bytes:
    return os.fsencode(name)


def _read_manifest(path: Path) -> list[Path]:
    entries = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        entries.append(path.parent / line)
    return entries


def load_sequence(path) -> FrameSequence:
    """Load frames from a directory (sorted by byte-wise file name) or a manifest.

    A manifest is a UTF-8 text file with one frame path per line, relative to
    the manifest's own directory; blank lines and ``#`` comments are skipped
    and the listed order is kept.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(
            (p for p in path.iterdir() if p.is_file() and p.suffix.lower() in FRAME_SUFFIXES),
            key=lambda p: _bytewise(p.name),
        )
    elif path.is_file():
        files = _read_manifest(path)
    else:
        raise SequenceError(f"{path}: no such directory or manifest")
    if not files:
        raise SequenceError(f"{path}: no frames found")

    frames = []
    for file in files:
        try:
            frames.append(read_frame(file.read_bytes()))
        except FormatError as exc:
            raise FormatError(f"{file}: {exc}") from exc
        except OSError as exc:
            raise SequenceError(f"{file}: {exc.strerror or exc}") from exc
    return FrameSequence(frames, [f.name for f in files])


def save_sequence(sequence: FrameSequence, directory) -> list[Path]:
    """Write every frame into ``directory``; existing files of the same name are overwritten."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for i, frame in enumerate(sequence.frames):
        name = sequence.names[i] or f"frame_{i:06d}" + (".ppm" if frame.channels == 3 else ".pgm")
        target = directory / name
        try:
            target.write_bytes(write_frame(frame))
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write frame: {exc.strerror}", str(target)) from exc
        written.append(target)
    return written
