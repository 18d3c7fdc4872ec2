"""Bit-plane complexity segmentation steganography for video frame sequences."""

from .analysis import ComparisonReport, compare_report, complexity_profile, histogram, mse, psnr
from .bitplane import Coding, checkerboard, complexity, conjugate, decompose, max_complexity, recompose
from .container import build_container, crc32, parse_container
from .engine import EmbedConfig, EmbedReport, SlotPlan, capacity, embed, extract, plan_slots, select_frames
from .errors import (
    CapacityError,
    CorruptionError,
    FormatError,
    NoPayloadError,
    SequenceError,
    StegoError,
    TruncationError,
    VersionError,
)
from .frames import Frame, FrameSequence, load_sequence, read_frame, save_sequence, write_frame

__version__ = "0.1.0"
