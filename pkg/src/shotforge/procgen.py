"""Procedural clip generators so the pipeline runs with zero external assets.

Every generator is a pure function of ``(kind, seed, params)``: the same call
returns byte-identical frames.  Consecutive frames differ only by bounded
motion (no internal cuts), and an optional palette constrains all pixels to a
chosen hue region so histogram-based tests can build separable clips.
"""

from __future__ import annotations

import numpy as np

from .media import Clip, MediaError

GENERATOR_KINDS = ("gradient_drift", "bouncing_shapes", "value_noise_pan", "checker_zoom")

# Base hues used when no palette is given; spread over distinct coarse
# histogram bins so default pools have natural cluster structure.
_HUE_GROUPS = (
    (208, 48, 48),    # red
    (224, 144, 48),   # orange
    (208, 208, 48),   # yellow
    (48, 192, 64),    # green
    (48, 200, 200),   # cyan
    (48, 80, 208),    # blue
    (150, 60, 200),   # purple
    (208, 64, 160),   # magenta
)


def default_palette(rng: np.random.Generator) -> list[tuple[int, int, int]]:
    """Three stops around one of eight base hues: dark, base, bright variant."""
    base = np.array(_HUE_GROUPS[int(rng.integers(len(_HUE_GROUPS)))], dtype=np.float64)
    dark = base * float(rng.uniform(0.30, 0.45))
    bright = np.clip(base + rng.uniform(24, 48, size=3), 0, 255)
    return [tuple(int(v) for v in c) for c in (dark, base, bright)]


def _palette_rgb(values: np.ndarray, palette: list[tuple[int, int, int]]) -> np.ndarray:
    """Map a scalar field in [0, 1] through the palette stops (per channel)."""
    stops = np.linspace(0.0, 1.0, len(palette))
    pal = np.asarray(palette, dtype=np.float64)
    out = np.empty(values.shape + (3,), dtype=np.float64)
    flat = values.ravel()
    for c in range(3):
        out[..., c] = np.interp(flat, stops, pal[:, c]).reshape(values.shape)
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def _fold(x: np.ndarray | float, lo: float, hi: float) -> np.ndarray | float:
    """Reflect positions into [lo, hi] (analytic bouncing, no drift)."""
    span = hi - lo
    if span <= 0:
        return np.full_like(np.asarray(x, dtype=np.float64), lo)
    y = np.mod(np.asarray(x, dtype=np.float64) - lo, 2.0 * span)
    return lo + np.where(y <= span, y, 2.0 * span - y)


def _value_noise(xs: np.ndarray, ys: np.ndarray, lattice: np.ndarray, cell: float) -> np.ndarray:
    """Wrapped bilinear value noise sampled at float coordinates."""
    n = lattice.shape[0]
    gx = xs / cell
    gy = ys / cell
    x0 = np.floor(gx).astype(np.int64)
    y0 = np.floor(gy).astype(np.int64)
    fx = gx - x0
    fy = gy - y0
    # smoothstep the fractional part for C1 continuity
    fx = fx * fx * (3.0 - 2.0 * fx)
    fy = fy * fy * (3.0 - 2.0 * fy)
    x0 %= n
    y0 %= n
    x1 = (x0 + 1) % n
    y1 = (y0 + 1) % n
    v00 = lattice[y0, x0]
    v01 = lattice[y0, x1]
    v10 = lattice[y1, x0]
    v11 = lattice[y1, x1]
    top = v00 * (1 - fx) + v01 * fx
    bot = v10 * (1 - fx) + v11 * fx
    return top * (1 - fy) + bot * fy


def procgen_clip(
    kind: str,
    seed: int,
    frames: int,
    width: int,
    height: int,
    fps: float = 24.0,
    palette: list[tuple[int, int, int]] | None = None,
    motion_px_per_frame: float = 1.0,
) -> Clip:
    """Generate a deterministic cut-free clip.

    ``motion_px_per_frame`` sets the dominant apparent motion: pan speed for
    the drifting/panning kinds, shape velocity and background pan for
    ``bouncing_shapes``, and approximate edge speed for ``checker_zoom``.
    """
    if kind not in GENERATOR_KINDS:
        raise MediaError(
            f"unknown generator kind '{kind}'; valid kinds: {', '.join(GENERATOR_KINDS)}"
        )
    if frames < 1:
        raise MediaError("frames must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    if palette is None:
        palette = default_palette(rng)
    motion = float(motion_px_per_frame)

    if kind == "gradient_drift":
        out = _gradient_drift(rng, frames, width, height, palette, motion)
    elif kind == "bouncing_shapes":
        out = _bouncing_shapes(rng, frames, width, height, palette, motion)
    elif kind == "value_noise_pan":
        out = _value_noise_pan(rng, frames, width, height, palette, motion)
    else:
        out = _checker_zoom(rng, frames, width, height, palette, motion)

    return Clip(frames=out, fps=fps, source_id=f"{kind}-{seed & 0xFFFFFFFFFFFFFFFF:016x}")


def _grid(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    return xs, ys


def _gradient_drift(rng, frames, width, height, palette, motion) -> np.ndarray:
    # Smooth multi-wave color field translating rigidly; enough local
    # structure for block matchers to lock onto.
    n_waves = 3
    angles = rng.uniform(0, 2 * np.pi, n_waves)
    wavelengths = rng.uniform(0.4, 1.2, n_waves) * max(8.0, min(width, height))
    phases = rng.uniform(0, 2 * np.pi, n_waves)
    weights = rng.uniform(0.5, 1.0, n_waves)
    pan_angle = rng.uniform(0, 2 * np.pi)
    dx, dy = np.cos(pan_angle), np.sin(pan_angle)

    xs, ys = _grid(width, height)
    out = np.empty((frames, height, width, 3), dtype=np.uint8)
    for t in range(frames):
        ox = t * motion * dx
        oy = t * motion * dy
        acc = np.zeros((height, width), dtype=np.float64)
        for k in range(n_waves):
            kx = np.cos(angles[k]) / wavelengths[k]
            ky = np.sin(angles[k]) / wavelengths[k]
            acc += weights[k] * np.sin(
                2 * np.pi * (kx * (xs + ox) + ky * (ys + oy)) + phases[k]
            )
        v = 0.5 + acc / (2.0 * weights.sum())
        out[t] = _palette_rgb(v, palette)
    return out


def _bouncing_shapes(rng, frames, width, height, palette, motion) -> np.ndarray:
    lattice = rng.random((48, 48))
    cell = max(6.0, min(width, height) / 6.0)
    bg_angle = rng.uniform(0, 2 * np.pi)
    bgx, bgy = np.cos(bg_angle), np.sin(bg_angle)

    n_shapes = int(rng.integers(2, 5))
    size_lo = max(4.0, 0.12 * min(width, height))
    size_hi = max(size_lo + 1.0, 0.22 * min(width, height))
    radii = rng.uniform(size_lo, size_hi, n_shapes)
    px0 = rng.uniform(radii, width - radii)
    py0 = rng.uniform(radii, height - radii)
    angles = rng.uniform(0, 2 * np.pi, n_shapes)
    vx = motion * np.cos(angles)
    vy = motion * np.sin(angles)
    is_rect = rng.random(n_shapes) < 0.5
    # shape colors come from the palette extremes so hues stay in-palette
    shape_vals = rng.uniform(0.75, 1.0, n_shapes)

    xs, ys = _grid(width, height)
    out = np.empty((frames, height, width, 3), dtype=np.uint8)
    for t in range(frames):
        v = 0.15 + 0.55 * _value_noise(xs + t * motion * bgx, ys + t * motion * bgy, lattice, cell)
        frame = _palette_rgb(v, palette)
        for s in range(n_shapes):
            cx = _fold(px0[s] + vx[s] * t, radii[s], width - radii[s])
            cy = _fold(py0[s] + vy[s] * t, radii[s], height - radii[s])
            if is_rect[s]:
                mask = (np.abs(xs - cx) <= radii[s]) & (np.abs(ys - cy) <= radii[s] * 0.7)
            else:
                mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= radii[s] ** 2
            color = _palette_rgb(np.array([shape_vals[s]]), palette)[0]
            frame[mask] = color
        out[t] = frame
    return out


def _value_noise_pan(rng, frames, width, height, palette, motion) -> np.ndarray:
    lattice1 = rng.random((64, 64))
    lattice2 = rng.random((64, 64))
    cell = max(5.0, min(width, height) / 5.0)
    pan_angle = rng.uniform(0, 2 * np.pi)
    dx, dy = np.cos(pan_angle), np.sin(pan_angle)

    xs, ys = _grid(width, height)
    out = np.empty((frames, height, width, 3), dtype=np.uint8)
    for t in range(frames):
        sx = xs + t * motion * dx
        sy = ys + t * motion * dy
        v = (2.0 * _value_noise(sx, sy, lattice1, cell) + _value_noise(sx, sy, lattice2, cell / 2.3)) / 3.0
        out[t] = _palette_rgb(v, palette)
    return out


def _checker_zoom(rng, frames, width, height, palette, motion) -> np.ndarray:
    tile = max(4.0, min(width, height) / 4.0)
    cx = width / 2.0 + rng.uniform(-0.1, 0.1) * width
    cy = height / 2.0 + rng.uniform(-0.1, 0.1) * height
    # scale rate chosen so the frame-edge apparent speed is ~motion px/frame
    rate = 2.0 * motion / max(1.0, min(width, height))

    xs, ys = _grid(width, height)
    out = np.empty((frames, height, width, 3), dtype=np.uint8)
    for t in range(frames):
        s = 1.0 + rate * t
        u = (xs - cx) / s
        v = (ys - cy) / s
        parity = (np.floor(u / tile) + np.floor(v / tile)) % 2
        # soften values slightly off the extremes so both map inside the palette
        field = 0.18 + 0.64 * parity
        out[t] = _palette_rgb(field, palette)
    return out
