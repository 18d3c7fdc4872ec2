"""Before/after comparison of cover and stego frames.

Per-channel histograms, histogram distances, MSE/PSNR and per-plane
complexity profiles, collected into a JSON report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bitplane import MAX_COMPLEXITY, NUM_PLANES, Coding, complexity_map, encode_values
from .errors import ComparisonError
from .frames import Frame, FrameSequence

REPORT_VERSION = 1
PSNR_INFINITE = "inf"
PEAK = 255.0


def histogram(frame: Frame, channel: int) -> np.ndarray:
    """256-bin count of the sample values in one channel."""
    if not 0 <= channel < frame.channels:
        raise ComparisonError(f"channel {channel} out of range for a {frame.channels}-channel frame")
    return np.bincount(frame.pixels[:, :, channel].ravel(), minlength=256).astype(np.int64)


def _check_totals(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != (256,) or b.shape != (256,):
        raise ComparisonError("histograms must have 256 bins")
    if a.sum() != b.sum():
        raise ComparisonError(f"histogram totals differ: {a.sum()} vs {b.sum()}")


def l1_distance(a, b) -> int:
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    _check_totals(a, b)
    return int(np.abs(a - b).sum())


def chi_square(a, b) -> float:
    """Symmetric chi-square: sum of (a-b)^2/(a+b) over bins where a+b > 0."""
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    _check_totals(a, b)
    total = a + b
    used = total > 0
    diff = (a - b)[used].astype(np.float64)
    return float(np.sum(diff * diff / total[used]))


def _check_shapes(a: Frame, b: Frame) -> None:
    if a.shape != b.shape:
        raise ComparisonError(f"frame shapes differ: {a.shape} vs {b.shape}")


def mse(a: Frame, b: Frame) -> float:
    _check_shapes(a, b)
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return float(np.mean(diff * diff))


def psnr(a: Frame, b: Frame) -> float:
    """PSNR in dB; ``math.inf`` for identical frames."""
    error = mse(a, b)
    if error == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / error)


def complexity_profile(frame: Frame, coding: Coding = Coding.BINARY, plane_mask=range(NUM_PLANES)) -> np.ndarray:
    """Count patches by exact complexity; shape ``(len(plane_mask), 113)``.

    Row ``i`` describes plane ``plane_mask[i]`` summed over all channels.
    """
    planes = list(plane_mask)
    comp = complexity_map(encode_values(frame.pixels, coding))  # (C, 8, rows, cols)
    profile = np.zeros((len(planes), MAX_COMPLEXITY + 1), dtype=np.int64)
    for i, p in enumerate(planes):
        profile[i] = np.bincount(comp[:, p].ravel(), minlength=MAX_COMPLEXITY + 1)
    return profile


@dataclass
class FrameComparison:
    name: str
    l1: list[int]
    chi2: list[float]
    mse: float
    psnr: float


@dataclass
class ComparisonReport:
    frames: list[FrameComparison]
    aggregate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "frames": [
                {
                    "name": f.name,
                    "l1": f.l1,
                    "chi2": f.chi2,
                    "mse": f.mse,
                    "psnr": _psnr_value(f.psnr),
                }
                for f in self.frames
            ],
            "aggregate": {k: _psnr_value(v) if k.startswith("psnr") else v for k, v in self.aggregate.items()},
        }

    def to_json(self) -> str:
        # json emits floats with repr(), i.e. full round-trip precision (17 significant digits max)
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


def _psnr_value(value: float):
    return PSNR_INFINITE if math.isinf(value) else value


def compare_frames(name: str, before: Frame, after: Frame) -> FrameComparison:
    _check_shapes(before, after)
    l1, chi2 = [], []
    for c in range(before.channels):
        ha, hb = histogram(before, c), histogram(after, c)
        l1.append(l1_distance(ha, hb))
        chi2.append(chi_square(ha, hb))
    return FrameComparison(name, l1, chi2, mse(before, after), psnr(before, after))


def compare_report(before: FrameSequence, after: FrameSequence) -> ComparisonReport:
    if len(before) != len(after):
        raise ComparisonError(f"sequence lengths differ: {len(before)} vs {len(after)}")
    if before.shape != after.shape:
        raise ComparisonError(f"sequence frame shapes differ: {before.shape} vs {after.shape}")
    frames = [
        compare_frames(before.display_name(i), before[i], after[i]) for i in range(len(before))
    ]
    mses = [f.mse for f in frames]
    l1s = [v for f in frames for v in f.l1]
    chis = [v for f in frames for v in f.chi2]
    aggregate = {
        "frames": len(frames),
        "mse_mean": float(np.mean(mses)),
        "mse_max": float(np.max(mses)),
        "psnr_min": min(f.psnr for f in frames),
        "psnr_of_mean_mse": math.inf if max(mses) == 0 else 10.0 * math.log10(PEAK * PEAK / float(np.mean(mses))),
        "l1_mean": float(np.mean(l1s)),
        "l1_max": int(np.max(l1s)),
        "chi2_mean": float(np.mean(chis)),
        "chi2_max": float(np.max(chis)),
        "frames_changed": sum(1 for m in mses if m > 0),
    }
    return ComparisonReport(frames, aggregate)
