"""Transition operators: pure functions of two frames, a progress value, and
a parameter set.

Conventions fixed across the module:

* Frames are ``(H, W, 3)`` uint8 arrays; masks are ``(H, W)`` float arrays in
  [0, 1] where 1 means "show B".
* All blending happens in float64 and is quantized once per output frame with
  round-half-up (``floor(x + 0.5)``), the global rounding rule.
* Progress ``t`` runs 0 -> 1 from A to B.  Composite operators return A
  bit-exact at ``t=0`` and B bit-exact at ``t=1`` (fades excluded: they blend
  a single source toward black/white).
* Rendered transitions sample only strictly interior progress values, so the
  held boundary frames are never duplicated into the transition.
* Warps use bilinear sampling; out-of-source coordinates clamp to the edge.

Direction semantics: for wipes the direction names the edge where B first
appears (``wipe.left`` fills the leftmost columns first); for pushes and
slides it names the direction of motion (``push.left`` moves A out through
the left edge while B follows from the right).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Callable

import numpy as np
from scipy import ndimage

from .core import IntraLabel, InterLabel, Shot
from .media import Clip


class CompositorError(ValueError):
    """Invalid transition spec or operands."""


# ---------------------------------------------------------------------------
# catalog

CATALOG: dict[IntraLabel, tuple[str, ...]] = {
    IntraLabel.DISSOLVE: ("transparent", "cross_blur", "ripple"),
    IntraLabel.WIPE: (
        "left", "right", "up", "down", "diagonal",
        "circle_open", "circle_close", "bar", "ripple", "page_curl", "mosaic",
    ),
    IntraLabel.PUSH: ("left", "right", "up", "down", "puzzle"),
    IntraLabel.SLIDE: ("left", "right", "up", "down", "whip_pan", "cube"),
    IntraLabel.ZOOM: ("in", "out", "spin_in", "spin_out", "cross", "swap"),
    IntraLabel.FADE: (
        "to_black", "to_white", "from_black", "from_white", "dip_black", "dip_white",
    ),
    IntraLabel.DOORWAY: ("open",),
}

ALL_SUBTYPES: tuple[str, ...] = tuple(
    f"{family.value}.{name}" for family, names in CATALOG.items() for name in names
)

FADE_SUBTYPES: tuple[str, ...] = tuple(
    s for s in ALL_SUBTYPES if s.startswith("fade.")
)

_UNI_DIRECTIONS = ("left", "right", "up", "down")
_DIAG_DIRECTIONS = ("diag_tl", "diag_tr", "diag_bl", "diag_br")

EASINGS = ("linear", "smoothstep", "constant_hold")


def split_subtype(subtype: str) -> tuple[IntraLabel, str]:
    """Split a dotted catalog name into (family, short name)."""
    if "." not in subtype:
        raise CompositorError(f"subtype '{subtype}' is not a dotted catalog name")
    fam_s, short = subtype.split(".", 1)
    try:
        family = IntraLabel(fam_s)
    except ValueError:
        raise CompositorError(f"unknown transition family '{fam_s}'") from None
    if short not in CATALOG.get(family, ()):
        raise CompositorError(f"'{subtype}' is not in the transition catalog")
    return family, short


# ---------------------------------------------------------------------------
# transition spec

@dataclass
class TransitionSpec:
    """Full parameter set for one rendered transition.

    Optional fields left as ``None`` are filled with per-subtype defaults by
    :meth:`normalized`; parameters that have no sensible default (the tile
    grid for mosaic/bar/puzzle) must be supplied.
    """

    subtype: str
    duration_frames: int
    easing: str = "linear"
    direction: str | None = None
    edge: str = "hard"              # "hard" | "soft"
    feather_px: int = 0
    center: tuple[float, float] | None = None
    grid: tuple[int, int] | None = None
    seam: str | None = None         # "vertical" | "horizontal"
    zoom_mag: float | None = None
    blur_sigma_max: float | None = None
    fade_target: str | None = None  # "black" | "white"
    dip: bool | None = None
    seed: int = 0

    @property
    def family(self) -> IntraLabel:
        return split_subtype(self.subtype)[0]

    @property
    def short(self) -> str:
        return split_subtype(self.subtype)[1]

    def normalized(self) -> "TransitionSpec":
        """Return a copy with defaults filled and parameters validated."""
        family, short = split_subtype(self.subtype)
        if self.duration_frames < 1:
            raise CompositorError("duration_frames must be >= 1")
        if self.easing not in EASINGS:
            raise CompositorError(
                f"unknown easing '{self.easing}'; valid: {', '.join(EASINGS)}"
            )
        if self.edge not in ("hard", "soft"):
            raise CompositorError(f"edge must be 'hard' or 'soft', got '{self.edge}'")
        if self.edge == "soft" and self.feather_px < 0:
            raise CompositorError("feather_px must be >= 0")

        spec = replace(self)
        if family in (IntraLabel.WIPE, IntraLabel.PUSH, IntraLabel.SLIDE):
            if short in _UNI_DIRECTIONS:
                spec.direction = short
            elif short == "diagonal":
                spec.direction = spec.direction or "diag_tl"
                if spec.direction not in _DIAG_DIRECTIONS:
                    raise CompositorError(
                        f"wipe.diagonal needs a diagonal direction, got '{spec.direction}'"
                    )
            elif short == "page_curl":
                spec.direction = spec.direction or "diag_br"
                if spec.direction not in _DIAG_DIRECTIONS:
                    raise CompositorError(
                        f"wipe.page_curl needs a diagonal direction, got '{spec.direction}'"
                    )
            elif short in ("whip_pan", "cube", "puzzle"):
                spec.direction = spec.direction or "left"
                if spec.direction not in _UNI_DIRECTIONS:
                    raise CompositorError(
                        f"{self.subtype} direction must be one of {_UNI_DIRECTIONS}"
                    )
        if short in ("mosaic", "bar", "puzzle"):
            if spec.grid is None:
                raise CompositorError(f"{self.subtype} requires a grid (rows, cols)")
            rows, cols = spec.grid
            if rows < 1 or cols < 1:
                raise CompositorError(f"grid must be positive, got {spec.grid}")
        if short in ("circle_open", "circle_close", "ripple") or family is IntraLabel.ZOOM:
            spec.center = spec.center or (0.5, 0.5)
        if family is IntraLabel.DISSOLVE and short == "ripple":
            spec.center = spec.center or (0.5, 0.5)
        if spec.center is not None:
            cx, cy = spec.center
            if not (0.0 <= cx <= 1.0 and 0.0 <= cy <= 1.0):
                raise CompositorError(f"center must lie in [0,1]^2, got {spec.center}")
        if family is IntraLabel.ZOOM:
            spec.zoom_mag = spec.zoom_mag if spec.zoom_mag is not None else 1.6
            if spec.zoom_mag <= 1.0:
                raise CompositorError(f"zoom_mag must be > 1, got {spec.zoom_mag}")
        if short == "cross_blur":
            spec.blur_sigma_max = spec.blur_sigma_max if spec.blur_sigma_max is not None else 4.0
        if short == "whip_pan":
            spec.blur_sigma_max = spec.blur_sigma_max if spec.blur_sigma_max is not None else 6.0
        if spec.blur_sigma_max is not None and spec.blur_sigma_max < 0:
            raise CompositorError("blur_sigma_max must be >= 0")
        if family is IntraLabel.FADE:
            spec.fade_target = "white" if short.endswith("white") else "black"
            spec.dip = short.startswith("dip")
        if family is IntraLabel.DOORWAY:
            spec.seam = spec.seam or "vertical"
            if spec.seam not in ("vertical", "horizontal"):
                raise CompositorError(f"seam must be vertical or horizontal, got '{spec.seam}'")
        return spec

    def to_params(self) -> dict[str, Any]:
        """JSON-safe record of the spec, embedded in emitted Shot params."""
        out: dict[str, Any] = {
            "family": self.family.value,
            "subtype": self.subtype,
            "duration_frames": int(self.duration_frames),
            "easing": self.easing,
            "edge": self.edge,
            "seed": int(self.seed),
        }
        if self.edge == "soft":
            out["feather_px"] = int(self.feather_px)
        if self.direction is not None:
            out["direction"] = self.direction
        if self.center is not None:
            out["center"] = [float(self.center[0]), float(self.center[1])]
        if self.grid is not None:
            out["grid"] = [int(self.grid[0]), int(self.grid[1])]
        if self.seam is not None:
            out["seam"] = self.seam
        if self.zoom_mag is not None:
            out["zoom_mag"] = float(self.zoom_mag)
        if self.blur_sigma_max is not None:
            out["blur_sigma_max"] = float(self.blur_sigma_max)
        if self.fade_target is not None:
            out["fade_target"] = self.fade_target
        if self.dip is not None:
            out["dip"] = bool(self.dip)
        return out

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> "TransitionSpec":
        return cls(
            subtype=params["subtype"],
            duration_frames=int(params["duration_frames"]),
            easing=params.get("easing", "linear"),
            direction=params.get("direction"),
            edge=params.get("edge", "hard"),
            feather_px=int(params.get("feather_px", 0)),
            center=tuple(params["center"]) if params.get("center") else None,
            grid=tuple(params["grid"]) if params.get("grid") else None,
            seam=params.get("seam"),
            zoom_mag=params.get("zoom_mag"),
            blur_sigma_max=params.get("blur_sigma_max"),
            fade_target=params.get("fade_target"),
            dip=params.get("dip"),
            seed=int(params.get("seed", 0)),
        )


# ---------------------------------------------------------------------------
# numeric helpers

def quantize(values: np.ndarray) -> np.ndarray:
    """Round-half-up to uint8; the one rounding rule used everywhere."""
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise CompositorError(f"frame dimensions differ: {a.shape} vs {b.shape}")
    if a.ndim != 3 or a.shape[2] != 3:
        raise CompositorError(f"expected (H, W, 3) frames, got {a.shape}")


def _ease(u: np.ndarray | float, easing: str):
    if easing == "linear":
        return u
    if easing == "smoothstep":
        return 3.0 * u * u - 2.0 * u * u * u
    if easing == "constant_hold":
        return np.clip((u - 0.2) / 0.6, 0.0, 1.0)
    raise CompositorError(f"unknown easing '{easing}'")


def progress_schedule(duration_frames: int, easing: str = "linear") -> list[float]:
    """Strictly interior progress values for a rendered transition.

    Raw positions are ``(i + 1) / (L + 1)`` so t never touches 0 or 1: the
    held endpoint frames are never duplicated inside the transition.
    """
    if duration_frames < 1:
        raise CompositorError("duration_frames must be >= 1")
    u = (np.arange(duration_frames, dtype=np.float64) + 1.0) / (duration_frames + 1.0)
    return [float(v) for v in np.asarray(_ease(u, easing))]


def _pixel_grid(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    return xs, ys


def sample_bilinear(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Bilinear sample with clamp-to-edge; exact at integer coordinates."""
    h, w = img.shape[:2]
    xs = np.clip(xs, 0.0, w - 1.0)
    ys = np.clip(ys, 0.0, h - 1.0)
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (xs - x0)[..., None]
    fy = (ys - y0)[..., None]
    img_f = img.astype(np.float64)
    top = img_f[y0, x0] * (1 - fx) + img_f[y0, x1] * fx
    bot = img_f[y1, x0] * (1 - fx) + img_f[y1, x1] * fx
    return top * (1 - fy) + bot * fy


def _centre_px(center: tuple[float, float], width: int, height: int) -> tuple[float, float]:
    return center[0] * (width - 1), center[1] * (height - 1)


# ---------------------------------------------------------------------------
# dissolves

def dissolve(
    a: np.ndarray,
    b: np.ndarray,
    t: float,
    variant: str = "transparent",
    blur_sigma_max: float = 4.0,
    center: tuple[float, float] = (0.5, 0.5),
) -> np.ndarray:
    """Blend A into B: plain, cross-blurred, or ripple-modulated."""
    _check_pair(a, b)
    if t <= 0.0:
        return a.copy()
    if t >= 1.0:
        return b.copy()
    af = a.astype(np.float64)
    bf = b.astype(np.float64)
    if variant == "transparent":
        return quantize((1.0 - t) * af + t * bf)
    if variant == "cross_blur":
        sigma = blur_sigma_max * math.sin(math.pi * t)
        if sigma > 1e-8:
            af = ndimage.gaussian_filter(af, sigma=(sigma, sigma, 0), mode="nearest")
            bf = ndimage.gaussian_filter(bf, sigma=(sigma, sigma, 0), mode="nearest")
        return quantize((1.0 - t) * af + t * bf)
    if variant == "ripple":
        h, w = a.shape[:2]
        xs, ys = _pixel_grid(w, h)
        cx, cy = _centre_px(center, w, h)
        r_max = max(_corner_radius(cx, cy, w, h), 1.0)
        r_norm = np.hypot(xs - cx, ys - cy) / r_max
        amp = 0.35 * math.sin(math.pi * t)
        weights = np.clip(t + amp * np.sin(2 * np.pi * (3.0 * r_norm - 1.2 * t)), 0.0, 1.0)
        return quantize((1.0 - weights[..., None]) * af + weights[..., None] * bf)
    raise CompositorError(f"unknown dissolve variant '{variant}'")


def _corner_radius(cx: float, cy: float, width: int, height: int) -> float:
    corners = ((0, 0), (width - 1, 0), (0, height - 1), (width - 1, height - 1))
    return max(math.hypot(px - cx, py - cy) for px, py in corners)


# ---------------------------------------------------------------------------
# wipe masks

def wipe_mask(
    subtype: str,
    t: float,
    width: int,
    height: int,
    direction: str | None = None,
    edge: str = "hard",
    feather_px: int = 0,
    center: tuple[float, float] | None = None,
    grid: tuple[int, int] | None = None,
    seed: int = 0,
) -> np.ndarray:
    """Alpha mask for a wipe at progress t (1 = show B).

    Unidirectional and diagonal wipes cover exactly ``round(t * pixels)``
    pixels at hard edge, so mean coverage tracks t to within half a pixel
    row/column.  Soft edges box-filter the hard mask, giving a linear ramp of
    roughly ``feather_px`` across the moving front; a soft mask is still
    all-0 at t=0 and all-1 at t=1.
    """
    short = subtype.split(".", 1)[1] if "." in subtype else subtype
    if short not in CATALOG[IntraLabel.WIPE]:
        raise CompositorError(f"'{subtype}' is not a wipe subtype")
    t = float(np.clip(t, 0.0, 1.0))
    if short in _UNI_DIRECTIONS:
        direction = short
    if short == "diagonal" and direction not in _DIAG_DIRECTIONS:
        direction = "diag_tl"
    if short == "page_curl" and direction not in _DIAG_DIRECTIONS:
        direction = "diag_br"

    if short in _UNI_DIRECTIONS or short in ("diagonal", "page_curl"):
        mask = _rank_sweep_mask(direction, t, width, height)
    elif short == "circle_open":
        mask = _circle_mask(t, width, height, center or (0.5, 0.5), opening=True)
    elif short == "circle_close":
        mask = _circle_mask(t, width, height, center or (0.5, 0.5), opening=False)
    elif short == "bar":
        if grid is None:
            raise CompositorError("wipe.bar requires a grid (rows set the bar count)")
        mask = _bar_mask(t, width, height, grid[0])
    elif short == "ripple":
        mask = _ripple_mask(t, width, height, center or (0.5, 0.5))
    elif short == "mosaic":
        if grid is None:
            raise CompositorError("wipe.mosaic requires a grid (rows, cols)")
        mask = _mosaic_mask(t, width, height, grid, seed)
    else:  # pragma: no cover - every catalog entry is handled above
        raise CompositorError(f"unhandled wipe subtype '{subtype}'")

    if edge == "soft" and feather_px > 0:
        size = int(feather_px) | 1  # odd kernel keeps the front centered
        mask = np.clip(ndimage.uniform_filter(mask, size=size, mode="nearest"), 0.0, 1.0)
    return mask


def _sweep_field(direction: str, width: int, height: int) -> np.ndarray:
    xs, ys = _pixel_grid(width, height)
    if direction == "left":
        return xs
    if direction == "right":
        return (width - 1) - xs
    if direction == "up":
        return ys
    if direction == "down":
        return (height - 1) - ys
    if direction == "diag_tl":
        return xs + ys
    if direction == "diag_tr":
        return (width - 1) - xs + ys
    if direction == "diag_bl":
        return xs + (height - 1) - ys
    if direction == "diag_br":
        return (width - 1) - xs + (height - 1) - ys
    raise CompositorError(f"unknown direction '{direction}'")


def _rank_sweep_mask(direction: str, t: float, width: int, height: int) -> np.ndarray:
    # Exactly round(t * N) pixels flip, in sweep order; stable sort keeps the
    # fill column/row-contiguous when the field has ties.
    field = _sweep_field(direction, width, height)
    n = width * height
    k = int(math.floor(t * n + 0.5))
    mask = np.zeros(n, dtype=np.float64)
    if k > 0:
        order = np.argsort(field.ravel(), kind="stable")
        mask[order[:k]] = 1.0
    return mask.reshape(height, width)


def _circle_mask(
    t: float, width: int, height: int, center: tuple[float, float], opening: bool
) -> np.ndarray:
    xs, ys = _pixel_grid(width, height)
    cx, cy = _centre_px(center, width, height)
    r = np.hypot(xs - cx, ys - cy)
    r_max = _corner_radius(cx, cy, width, height)
    if opening:
        # slight overshoot so the farthest corner flips exactly at t=1
        return (r < t * (r_max + 0.5)).astype(np.float64)
    return (r > r_max - t * (r_max + 0.5)).astype(np.float64)


def _bar_mask(t: float, width: int, height: int, rows: int) -> np.ndarray:
    n_bars = max(1, 2 * rows)
    ys = np.arange(height)
    band = np.minimum((ys * n_bars) // height, n_bars - 1)
    k = int(math.floor(t * width + 0.5))
    from_left = np.arange(width) < k
    from_right = np.arange(width) >= width - k
    mask = np.where((band[:, None] % 2) == 0, from_left[None, :], from_right[None, :])
    return mask.astype(np.float64)


def _ripple_mask(t: float, width: int, height: int, center: tuple[float, float]) -> np.ndarray:
    xs, ys = _pixel_grid(width, height)
    cx, cy = _centre_px(center, width, height)
    r = np.hypot(xs - cx, ys - cy)
    theta = np.arctan2(ys - cy, xs - cx)
    r_max = _corner_radius(cx, cy, width, height)
    amp = max(2.0, 0.08 * min(width, height))
    front = t * (r_max + amp + 0.5) - amp * (0.5 + 0.5 * np.sin(6.0 * theta))
    return (r < front).astype(np.float64)


def _mosaic_mask(
    t: float, width: int, height: int, grid: tuple[int, int], seed: int
) -> np.ndarray:
    rows, cols = grid
    n_tiles = rows * cols
    k = int(math.floor(t * n_tiles + 0.5))
    order = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed))).permutation(n_tiles)
    chosen = np.zeros(n_tiles, dtype=bool)
    chosen[order[:k]] = True
    ys = np.minimum((np.arange(height) * rows) // height, rows - 1)
    xs = np.minimum((np.arange(width) * cols) // width, cols - 1)
    tile_idx = ys[:, None] * cols + xs[None, :]
    return chosen[tile_idx].astype(np.float64)


def apply_mask(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Per-pixel blend ``(1 - m) * A + m * B`` with the global rounding rule."""
    _check_pair(a, b)
    if mask.shape != a.shape[:2]:
        raise CompositorError(
            f"mask shape {mask.shape} does not match frames {a.shape[:2]}"
        )
    m = mask[..., None]
    return quantize((1.0 - m) * a.astype(np.float64) + m * b.astype(np.float64))


def _compose_wipe(a: np.ndarray, b: np.ndarray, t: float, spec: TransitionSpec) -> np.ndarray:
    mask = wipe_mask(
        spec.subtype,
        t,
        a.shape[1],
        a.shape[0],
        direction=spec.direction,
        edge=spec.edge,
        feather_px=spec.feather_px,
        center=spec.center,
        grid=spec.grid,
        seed=spec.seed,
    )
    m = mask[..., None]
    out = (1.0 - m) * a.astype(np.float64) + m * b.astype(np.float64)
    if spec.short == "page_curl":
        # cylindrical highlight band riding the curl line; vanishes at t=0/1
        h, w = a.shape[:2]
        field = _sweep_field(spec.direction or "diag_br", w, h)
        front = np.quantile(field, t)
        sigma = max(2.0, 0.05 * (w + h))
        gain = 1.0 + 0.45 * math.sin(math.pi * t) * np.exp(-((field - front) / sigma) ** 2)
        out = out * gain[..., None]
    return quantize(out)


# ---------------------------------------------------------------------------
# geometric operators

def geometric(a: np.ndarray, b: np.ndarray, t: float, spec: TransitionSpec) -> np.ndarray:
    """Push / slide / zoom / doorway family warps."""
    _check_pair(a, b)
    spec = spec.normalized()
    if t <= 0.0:
        return a.copy()
    if t >= 1.0:
        return b.copy()
    family, short = split_subtype(spec.subtype)
    if family is IntraLabel.PUSH:
        if short == "puzzle":
            out = _puzzle_push(a, b, t, spec)
        else:
            out = _push(a, b, t, short)
    elif family is IntraLabel.SLIDE:
        if short == "whip_pan":
            out = _whip_pan(a, b, t, spec)
        elif short == "cube":
            out = _cube(a, b, t, spec.direction or "left")
        else:
            out = _slide(a, b, t, short)
    elif family is IntraLabel.ZOOM:
        out = _zoom(a, b, t, spec)
    elif family is IntraLabel.DOORWAY:
        out = _doorway(a, b, t, spec.seam or "vertical")
    else:
        raise CompositorError(f"'{spec.subtype}' is not a geometric subtype")
    return quantize(out)


def _push(a: np.ndarray, b: np.ndarray, t: float, direction: str) -> np.ndarray:
    h, w = a.shape[:2]
    xs, ys = _pixel_grid(w, h)
    if direction in ("left", "right"):
        virtual = np.concatenate((a, b) if direction == "left" else (b, a), axis=1)
        shift = t * w if direction == "left" else w - t * w
        return sample_bilinear(virtual, xs + shift, ys)
    virtual = np.concatenate((a, b) if direction == "up" else (b, a), axis=0)
    shift = t * h if direction == "up" else h - t * h
    return sample_bilinear(virtual, xs, ys + shift)


def _slide(a: np.ndarray, b: np.ndarray, t: float, direction: str) -> np.ndarray:
    h, w = a.shape[:2]
    xs, ys = _pixel_grid(w, h)
    out = a.astype(np.float64).copy()
    if direction == "left":      # B enters from the right edge, moving left
        d = t * w
        region = (xs + 0.5) >= (w - d)
        incoming = sample_bilinear(b, xs - (w - d), ys)
    elif direction == "right":   # B enters from the left edge
        d = t * w
        region = (xs + 0.5) < d
        incoming = sample_bilinear(b, xs + (w - d), ys)
    elif direction == "up":      # B enters from the bottom edge
        d = t * h
        region = (ys + 0.5) >= (h - d)
        incoming = sample_bilinear(b, xs, ys - (h - d))
    else:                        # down: B enters from the top edge
        d = t * h
        region = (ys + 0.5) < d
        incoming = sample_bilinear(b, xs, ys + (h - d))
    out[region] = incoming[region]
    return out


def _whip_pan(a: np.ndarray, b: np.ndarray, t: float, spec: TransitionSpec) -> np.ndarray:
    out = _slide(a, b, t, spec.direction or "left")
    sigma = (spec.blur_sigma_max or 0.0) * math.sin(math.pi * t)
    if sigma > 1e-8:
        out = ndimage.gaussian_filter1d(out, sigma=sigma, axis=1, mode="nearest")
    return out


def _cube(a: np.ndarray, b: np.ndarray, t: float, direction: str) -> np.ndarray:
    h, w = a.shape[:2]
    xs, ys = _pixel_grid(w, h)
    theta = t * math.pi / 2.0
    c, s = math.cos(theta), math.sin(theta)
    denom = c + s
    gain_a = 1.0 - 0.35 * s
    gain_b = 1.0 - 0.35 * c
    horizontal = direction in ("left", "right", None)
    extent = w if horizontal else h
    axis = xs if horizontal else ys
    face_a = extent * c / denom
    if direction in ("left", "up"):
        in_a = (axis + 0.5) <= face_a
        src_a = axis * (denom / max(c, 1e-12))
        src_b = (axis - face_a) * (denom / max(s, 1e-12))
    else:
        face_b = extent - face_a
        in_a = (axis + 0.5) > face_b
        src_a = (axis - face_b) * (denom / max(c, 1e-12))
        src_b = axis * (denom / max(s, 1e-12))
    if horizontal:
        samp_a = sample_bilinear(a, src_a, ys) * gain_a
        samp_b = sample_bilinear(b, src_b, ys) * gain_b
    else:
        samp_a = sample_bilinear(a, xs, src_a) * gain_a
        samp_b = sample_bilinear(b, xs, src_b) * gain_b
    return np.where(in_a[..., None], samp_a, samp_b)


def _warp_scale_rotate(
    img: np.ndarray,
    scale: float,
    center: tuple[float, float],
    angle: float = 0.0,
    out_center: tuple[float, float] | None = None,
) -> np.ndarray:
    h, w = img.shape[:2]
    xs, ys = _pixel_grid(w, h)
    ocx, ocy = out_center if out_center is not None else center
    dx = (xs - ocx) / scale
    dy = (ys - ocy) / scale
    if angle != 0.0:
        ca, sa = math.cos(-angle), math.sin(-angle)
        dx, dy = ca * dx - sa * dy, sa * dx + ca * dy
    return sample_bilinear(img, center[0] + dx, center[1] + dy)


def _zoom(a: np.ndarray, b: np.ndarray, t: float, spec: TransitionSpec) -> np.ndarray:
    h, w = a.shape[:2]
    mag = spec.zoom_mag or 1.6
    centre = _centre_px(spec.center or (0.5, 0.5), w, h)
    short = spec.short
    if short in ("in", "spin_in"):
        scale = 1.0 + t * (mag - 1.0)
        angle = t * 2.0 * math.pi if short == "spin_in" else 0.0
        warped = _warp_scale_rotate(a, scale, centre, angle)
        weight = min(max((t - 0.5) / 0.5, 0.0), 1.0)
        return (1.0 - weight) * warped + weight * b.astype(np.float64)
    if short in ("out", "spin_out"):
        scale = 1.0 + (1.0 - t) * (mag - 1.0)
        angle = (1.0 - t) * 2.0 * math.pi if short == "spin_out" else 0.0
        warped = _warp_scale_rotate(b, scale, centre, angle)
        weight = min(2.0 * t, 1.0)
        return (1.0 - weight) * a.astype(np.float64) + weight * warped
    if short == "cross":
        scale_a = 1.0 + t * (mag - 1.0)
        scale_b = 1.0 + (1.0 - t) * (mag - 1.0)
        warped_a = _warp_scale_rotate(a, scale_a, centre)
        warped_b = _warp_scale_rotate(b, scale_b, centre)
        return (1.0 - t) * warped_a + t * warped_b
    if short == "swap":
        return _swap(a, b, t)
    raise CompositorError(f"unknown zoom subtype '{spec.subtype}'")


def _swap(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    h, w = a.shape[:2]
    xs, ys = _pixel_grid(w, h)
    scale_a = 1.0 - 0.45 * t
    scale_b = 1.0 - 0.45 * (1.0 - t)
    ca = ((0.5 - 0.2 * t) * w, 0.5 * h)
    cb = ((0.5 + 0.2 * (1.0 - t)) * w, 0.5 * h)
    src_centre = (0.5 * w, 0.5 * h)
    warp_a = _warp_scale_rotate(a, scale_a, src_centre, out_center=ca)
    warp_b = _warp_scale_rotate(b, scale_b, src_centre, out_center=cb)
    in_a = (np.abs(xs - ca[0]) <= scale_a * w / 2.0) & (np.abs(ys - ca[1]) <= scale_a * h / 2.0)
    in_b = (np.abs(xs - cb[0]) <= scale_b * w / 2.0) & (np.abs(ys - cb[1]) <= scale_b * h / 2.0)
    if t < 0.5:  # A in front until the crossing point
        out = warp_b
        out = np.where(in_a[..., None], warp_a, out)
    else:
        out = warp_a
        out = np.where(in_b[..., None], warp_b, out)
    return out


def _doorway(a: np.ndarray, b: np.ndarray, t: float, seam: str) -> np.ndarray:
    h, w = a.shape[:2]
    xs, ys = _pixel_grid(w, h)
    scale = 1.0 - 0.1 * (1.0 - t)  # B reveals from 0.9 to exactly 1.0
    out = _warp_scale_rotate(b, scale, (0.5 * w, 0.5 * h))
    if seam == "vertical":
        half = w / 2.0
        shift = t * half
        left = (xs + 0.5) < (half - shift)
        right = (xs + 0.5) >= (half + shift)
        a_left = sample_bilinear(a, xs + shift, ys)
        a_right = sample_bilinear(a, xs - shift, ys)
    else:
        half = h / 2.0
        shift = t * half
        left = (ys + 0.5) < (half - shift)
        right = (ys + 0.5) >= (half + shift)
        a_left = sample_bilinear(a, xs, ys + shift)
        a_right = sample_bilinear(a, xs, ys - shift)
    out = np.where(left[..., None], a_left, out)
    out = np.where(right[..., None], a_right, out)
    return out


def _puzzle_push(a: np.ndarray, b: np.ndarray, t: float, spec: TransitionSpec) -> np.ndarray:
    h, w = a.shape[:2]
    rows, cols = spec.grid or (3, 4)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    phases = rng.random((rows, cols)) * 0.3
    out = np.empty((h, w, 3), dtype=np.float64)
    row_edges = [round(r * h / rows) for r in range(rows + 1)]
    col_edges = [round(c * w / cols) for c in range(cols + 1)]
    direction = spec.direction or "left"
    for r in range(rows):
        for c in range(cols):
            y0, y1 = row_edges[r], row_edges[r + 1]
            x0, x1 = col_edges[c], col_edges[c + 1]
            if y1 <= y0 or x1 <= x0:
                continue
            local_t = min(max((t - phases[r, c]) / 0.7, 0.0), 1.0)
            out[y0:y1, x0:x1] = _push(a[y0:y1, x0:x1], b[y0:y1, x0:x1], local_t, direction)
    return out


# ---------------------------------------------------------------------------
# fades

def fade(frame: np.ndarray, t: float, target: str = "black", mode: str = "out") -> np.ndarray:
    """Blend one frame toward black or white.

    ``out`` mode weights the target by t (t=1 is fully faded); ``in`` mode
    weights it by 1-t (t=1 shows the frame unchanged).
    """
    if target not in ("black", "white"):
        raise CompositorError(f"fade target must be black or white, got '{target}'")
    if mode not in ("out", "in"):
        raise CompositorError(f"fade mode must be out or in, got '{mode}'")
    value = 0.0 if target == "black" else 255.0
    weight = float(np.clip(t if mode == "out" else 1.0 - t, 0.0, 1.0))
    return quantize((1.0 - weight) * frame.astype(np.float64) + weight * value)


# ---------------------------------------------------------------------------
# composition entry points

def compose(a: np.ndarray, b: np.ndarray, t: float, spec: TransitionSpec) -> np.ndarray:
    """Render one frame of a two-source transition at progress t.

    Returns A unchanged at t<=0 and B unchanged at t>=1 for every subtype.
    Fade subtypes are single-source effects and are composed by
    :func:`render_transition`, not here.
    """
    _check_pair(a, b)
    spec = spec.normalized()
    family = spec.family
    if family is IntraLabel.FADE:
        raise CompositorError("fade subtypes are single-source; use render_transition")
    if t <= 0.0:
        return a.copy()
    if t >= 1.0:
        return b.copy()
    if family is IntraLabel.DISSOLVE:
        return dissolve(
            a, b, t,
            variant=spec.short,
            blur_sigma_max=spec.blur_sigma_max or 4.0,
            center=spec.center or (0.5, 0.5),
        )
    if family is IntraLabel.WIPE:
        return _compose_wipe(a, b, t, spec)
    return geometric(a, b, t, spec)


def fade_consumption(spec: TransitionSpec) -> tuple[int, int]:
    """Frames a fade spec consumes from (tail of A, head of B)."""
    family, short = split_subtype(spec.subtype)
    if family is not IntraLabel.FADE:
        return 1, 1
    length = spec.duration_frames
    if short.startswith("to_"):
        return length, 0
    if short.startswith("from_"):
        return 0, length
    return (length + 1) // 2, length // 2  # dips split ceil/floor


def _fade_frames(
    spec: TransitionSpec, a_material: np.ndarray, b_material: np.ndarray
) -> list[np.ndarray]:
    """Fade-family frames from live source material (motion keeps running)."""
    spec = spec.normalized()
    length = spec.duration_frames
    target = spec.fade_target or "black"
    short = spec.short
    frames: list[np.ndarray] = []
    u = (np.arange(length, dtype=np.float64) + 1.0) / length
    eased = np.asarray(_ease(u, spec.easing))
    if short.startswith("to_"):
        for j in range(length):
            frames.append(fade(a_material[j], float(eased[j]), target, "out"))
    elif short.startswith("from_"):
        for j in range(length):
            frames.append(fade(b_material[j], float(eased[j]), target, "in"))
    else:  # dip: fade A out over the first half, fade B in over the second
        first = (length + 1) // 2
        for j in range(length):
            if j < first:
                t_out = min(2.0 * float(eased[j]), 1.0)
                frames.append(fade(a_material[j], t_out, target, "out"))
            else:
                t_in = max(2.0 * float(eased[j]) - 1.0, 0.0)
                frames.append(fade(b_material[j - first], t_in, target, "in"))
    return frames


def render_transition(
    clip_a: Clip, clip_b: Clip, spec: TransitionSpec
) -> tuple[np.ndarray, list[Shot]]:
    """Render a full transition between two clips.

    Two-source subtypes hold the last frame of A and the first frame of B as
    frozen endpoints; fade subtypes instead consume trailing/leading frames
    of the sources so motion continues while fading.  Returns exactly
    ``duration_frames`` frames and one Shot fragment (0-based within the
    rendered region) carrying the labels and the serialized spec.
    """
    spec = spec.normalized()
    if spec.duration_frames < 3:
        raise CompositorError(
            f"transition of {spec.duration_frames} frames is below the 3-frame minimum; "
            "the planner must downgrade it to a hard cut"
        )
    if clip_a.frames.shape[1:] != clip_b.frames.shape[1:]:
        raise CompositorError(
            f"clip dimensions differ: {clip_a.frames.shape[1:]} vs {clip_b.frames.shape[1:]}"
        )
    need_a, need_b = fade_consumption(spec)
    if clip_a.frame_count < need_a or clip_b.frame_count < need_b:
        raise CompositorError(
            f"{spec.subtype} consumes {need_a}+{need_b} frames but clips have "
            f"{clip_a.frame_count}+{clip_b.frame_count}"
        )

    if spec.family is IntraLabel.FADE:
        a_mat = clip_a.frames[clip_a.frame_count - need_a:] if need_a else clip_a.frames[:0]
        b_mat = clip_b.frames[:need_b]
        frames = _fade_frames(spec, a_mat, b_mat)
    else:
        hold_a = clip_a.frames[-1]
        hold_b = clip_b.frames[0]
        frames = [
            compose(hold_a, hold_b, t, spec)
            for t in progress_schedule(spec.duration_frames, spec.easing)
        ]

    stack = np.stack(frames)
    fragment = Shot(
        start=0,
        end=spec.duration_frames - 1,
        intra=spec.family,
        inter=InterLabel.TRANSITION,
        confidence=1.0,
        subtype=spec.subtype,
        params=spec.to_params(),
    )
    return stack, [fragment]
