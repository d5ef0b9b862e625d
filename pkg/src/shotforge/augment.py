"""Offline augmentations burned into rendered videos; labels never change.

Two families: a subtitle block (wrapped text anchored bottom-center, constant
across one shot span) and smooth lighting rides (gain/gamma/contrast ramps,
color wash, spotlight).  All helpers take and return uint8 frame stacks and
are deterministic given their RNG.
"""

from __future__ import annotations

import textwrap

import numpy as np

from .compositor import quantize
from .core import Annotation

_WORDS = (
    "river", "summit", "echo", "harbor", "violet", "ember", "north", "signal",
    "meadow", "drift", "falcon", "quartz", "lantern", "orbit", "cedar", "plume",
    "marble", "tundra", "willow", "spark", "canyon", "mosaic", "anchor", "zephyr",
)


def random_caption(rng: np.random.Generator, min_words: int = 2, max_words: int = 6) -> str:
    n = int(rng.integers(min_words, max_words + 1))
    return " ".join(_WORDS[int(rng.integers(len(_WORDS)))] for _ in range(n))


def burn_subtitle(
    frames: np.ndarray,
    start: int,
    end: int,
    text: str,
) -> np.ndarray:
    """Draw a wrapped subtitle block onto frames[start..end] (inclusive)."""
    from PIL import Image, ImageDraw, ImageFont

    out = frames.copy()
    height, width = frames.shape[1:3]
    font = ImageFont.load_default()
    # default bitmap font is ~6 px/char; wrap to ~80% of the frame width
    wrap_chars = max(4, int(width * 0.8) // 6)
    lines = textwrap.wrap(text, width=wrap_chars) or [text]
    margin = max(2, int(0.04 * height))
    line_h = 11
    for idx in range(start, end + 1):
        img = Image.fromarray(out[idx])
        draw = ImageDraw.Draw(img)
        y = height - margin - line_h * len(lines)
        for line in lines:
            line_w = draw.textlength(line, font=font)
            draw.text(((width - line_w) / 2, y), line, fill=(255, 255, 255), font=font)
            y += line_h
        out[idx] = np.asarray(img)
    return out


def apply_gain_ramp(frames: np.ndarray, gain_start: float, gain_end: float) -> np.ndarray:
    """Multiply each frame by a linearly interpolated gain (endpoints included)."""
    gains = np.linspace(gain_start, gain_end, frames.shape[0])
    out = np.empty_like(frames)
    for i, g in enumerate(gains):
        out[i] = quantize(frames[i].astype(np.float64) * g)
    return out


def apply_gamma_ramp(frames: np.ndarray, gamma_start: float, gamma_end: float) -> np.ndarray:
    gammas = np.linspace(gamma_start, gamma_end, frames.shape[0])
    out = np.empty_like(frames)
    for i, g in enumerate(gammas):
        out[i] = quantize(255.0 * (frames[i].astype(np.float64) / 255.0) ** g)
    return out


def apply_contrast_ramp(frames: np.ndarray, c_start: float, c_end: float) -> np.ndarray:
    factors = np.linspace(c_start, c_end, frames.shape[0])
    out = np.empty_like(frames)
    for i, c in enumerate(factors):
        out[i] = quantize((frames[i].astype(np.float64) - 128.0) * c + 128.0)
    return out


def apply_color_wash(frames: np.ndarray, tint: tuple[int, int, int], peak: float) -> np.ndarray:
    """Blend a tint in with weight ramping 0 -> peak across the clip."""
    weights = np.linspace(0.0, peak, frames.shape[0])
    tint_arr = np.asarray(tint, dtype=np.float64)
    out = np.empty_like(frames)
    for i, wgt in enumerate(weights):
        out[i] = quantize(frames[i].astype(np.float64) * (1 - wgt) + tint_arr * wgt)
    return out


def apply_spotlight(
    frames: np.ndarray, center: tuple[float, float], strength: float
) -> np.ndarray:
    """Radial falloff darkening toward the edges, strength ramping up."""
    height, width = frames.shape[1:3]
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = center[0] * (width - 1), center[1] * (height - 1)
    r2 = ((xs - cx) ** 2 + (ys - cy) ** 2)
    r2 /= max(r2.max(), 1.0)
    strengths = np.linspace(0.0, strength, frames.shape[0])
    out = np.empty_like(frames)
    for i, s in enumerate(strengths):
        out[i] = quantize(frames[i].astype(np.float64) * (1.0 - s * r2)[..., None])
    return out


def apply_random_lighting(frames: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One randomly parameterized lighting ride over the whole clip."""
    variant = ("gain", "gamma", "contrast", "color_wash", "spotlight")[int(rng.integers(5))]
    if variant == "gain":
        return apply_gain_ramp(frames, float(rng.uniform(0.85, 1.0)), float(rng.uniform(1.0, 1.25)))
    if variant == "gamma":
        return apply_gamma_ramp(frames, float(rng.uniform(0.85, 1.0)), float(rng.uniform(1.0, 1.3)))
    if variant == "contrast":
        return apply_contrast_ramp(frames, float(rng.uniform(0.85, 1.0)), float(rng.uniform(1.0, 1.3)))
    if variant == "color_wash":
        tint = tuple(int(v) for v in rng.integers(0, 256, size=3))
        return apply_color_wash(frames, tint, float(rng.uniform(0.08, 0.25)))
    center = (float(rng.uniform(0.3, 0.7)), float(rng.uniform(0.3, 0.7)))
    return apply_spotlight(frames, center, float(rng.uniform(0.2, 0.5)))


def apply_random_subtitle(
    frames: np.ndarray, annotation: Annotation, rng: np.random.Generator
) -> np.ndarray:
    """Burn a random caption over one randomly chosen shot span."""
    shot = annotation.shots[int(rng.integers(len(annotation.shots)))]
    return burn_subtitle(frames, shot.start, shot.end, random_caption(rng))
