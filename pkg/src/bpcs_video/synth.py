"""Synthetic covers with natural-image-like statistics.

Frames are a slowly panning scene built from smooth colour fields, soft edges
and fine texture, plus per-frame sensor noise. Flat regions and busy
regions both occur, which is what makes them useful for exercising
complexity segmentation without shipping real video.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .frames import Frame, FrameSequence


def _scene(rng: np.random.Generator, height: int, width: int, channels: int) -> np.ndarray:
    base = np.zeros((height, width, channels))
    for sigma, amplitude in ((24.0, 60.0), (6.0, 25.0), (1.2, 10.0)):
        field = ndimage.gaussian_filter(rng.standard_normal((height, width, 1)), (sigma, sigma, 0))
        field /= field.std() + 1e-12
        tint = 0.6 + 0.4 * rng.random(channels)
        base += amplitude * field * tint

    # a few hard-edged objects give informative (low-complexity) regions
    yy, xx = np.mgrid[0:height, 0:width]
    for _ in range(4):
        cy, cx = rng.uniform(0, height), rng.uniform(0, width)
        radius = rng.uniform(0.08, 0.25) * min(height, width)
        disc = (yy - cy) ** 2 + (xx - cx) ** 2 < radius**2
        base[disc] = base[disc] * 0.3 + rng.uniform(-60, 60, channels)

    gradient = np.linspace(-30, 30, width)[None, :, None]
    return 128.0 + base + gradient


def natural_frames(
    count: int = 15,
    height: int = 240,
    width: int = 320,
    channels: int = 3,
    seed: int = 0,
    noise: float = 2.5,
    pan: int = 2,
) -> FrameSequence:
    """A ``count``-frame sequence of synthetic natural-looking frames.

    Each frame is a window into a larger scene shifted ``pan`` pixels per frame,
    with independent Gaussian noise of standard deviation ``noise``.
    """
    rng = np.random.default_rng(seed)
    margin = pan * max(count - 1, 0)
    scene = _scene(rng, height, width + margin, channels)
    frames = []
    for i in range(count):
        view = scene[:, i * pan : i * pan + width]
        sample = view + rng.normal(0.0, noise, view.shape)
        frames.append(Frame(np.clip(np.rint(sample), 0, 255).astype(np.uint8)))
    return FrameSequence(frames, [f"frame_{i:04d}.{'ppm' if channels == 3 else 'pgm'}" for i in range(count)])


def flat_frames(count: int = 3, height: int = 64, width: int = 64, channels: int = 3, value: int = 128) -> FrameSequence:
    pixels = np.full((height, width, channels), value, dtype=np.uint8)
    return FrameSequence([Frame(pixels.copy()) for _ in range(count)])
