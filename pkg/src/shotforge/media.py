"""Frame container I/O: a raw RGB24 on-disk layout plus a PNG import path.

A frame is a ``(height, width, 3)`` uint8 numpy array, row-major interleaved
RGB.  A clip is a stack of equally sized frames.  The on-disk container is a
directory holding ``meta.json`` and ``frames.rgb24`` (all frames concatenated
in order); the byte layout is normative so stored clips are bit-exact across
runs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

META_NAME = "meta.json"
FRAMES_NAME = "frames.rgb24"
_PNG_PATTERN = re.compile(r"^\d{6}\.png$")


class MediaError(Exception):
    """Raised for malformed or unreadable clip containers."""


@dataclass
class ClipMeta:
    width: int
    height: int
    fps: float
    frame_count: int
    source_id: str = ""

    def to_dict(self) -> dict:
        return {
            "width": int(self.width),
            "height": int(self.height),
            "fps": float(self.fps),
            "frame_count": int(self.frame_count),
            "source_id": self.source_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClipMeta":
        try:
            return cls(
                width=int(data["width"]),
                height=int(data["height"]),
                fps=float(data["fps"]),
                frame_count=int(data["frame_count"]),
                source_id=str(data.get("source_id", "")),
            )
        except KeyError as exc:
            raise MediaError(f"meta.json missing field {exc}") from None


@dataclass
class Clip:
    """A decoded frame sequence; immutable by convention after construction."""

    frames: np.ndarray  # (frame, height, width, 3) uint8
    fps: float
    source_id: str = ""

    def __post_init__(self) -> None:
        f = self.frames
        if f.ndim != 4 or f.shape[3] != 3:
            raise MediaError(f"frames must have shape (n, h, w, 3), got {f.shape}")
        if f.dtype != np.uint8:
            raise MediaError(f"frames must be uint8, got {f.dtype}")
        if f.shape[0] < 1:
            raise MediaError("a clip needs at least one frame")
        if self.fps <= 0:
            raise MediaError(f"fps must be > 0, got {self.fps}")

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])

    @property
    def height(self) -> int:
        return int(self.frames.shape[1])

    @property
    def width(self) -> int:
        return int(self.frames.shape[2])

    @property
    def meta(self) -> ClipMeta:
        return ClipMeta(
            width=self.width,
            height=self.height,
            fps=self.fps,
            frame_count=self.frame_count,
            source_id=self.source_id,
        )


def store_clip(clip: Clip, path: str | Path) -> None:
    """Write ``meta.json`` and ``frames.rgb24`` under ``path`` (created if needed)."""
    directory = Path(path)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        (directory / META_NAME).write_text(
            json.dumps(clip.meta.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        (directory / FRAMES_NAME).write_bytes(
            np.ascontiguousarray(clip.frames).tobytes()
        )
    except OSError as exc:
        raise MediaError(f"cannot write clip to {directory}: {exc}") from exc


def load_clip(path: str | Path) -> Clip:
    """Load a clip container from ``path``.

    Accepts either the raw layout (``meta.json`` + ``frames.rgb24``) or an
    import layout of ``meta.json`` plus zero-padded numbered PNGs
    (``000000.png``, ``000001.png``, ...) for bringing in real footage.
    """
    directory = Path(path)
    meta_path = directory / META_NAME
    if not meta_path.is_file():
        raise MediaError(f"missing {META_NAME} in {directory}")
    try:
        meta = ClipMeta.from_dict(json.loads(meta_path.read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise MediaError(f"{meta_path} is not valid JSON: {exc}") from None

    raw_path = directory / FRAMES_NAME
    if raw_path.is_file():
        data = raw_path.read_bytes()
        expected = meta.frame_count * meta.height * meta.width * 3
        if len(data) != expected:
            raise MediaError(
                f"{raw_path}: expected {expected} bytes, found {len(data)}"
            )
        frames = (
            np.frombuffer(data, dtype=np.uint8)
            .reshape(meta.frame_count, meta.height, meta.width, 3)
            .copy()
        )
        return Clip(frames=frames, fps=meta.fps, source_id=meta.source_id)

    return _load_png_dir(directory, meta)


def _load_png_dir(directory: Path, meta: ClipMeta) -> Clip:
    from PIL import Image

    pngs = sorted(p for p in directory.iterdir() if _PNG_PATTERN.match(p.name))
    if not pngs:
        raise MediaError(
            f"{directory} has neither {FRAMES_NAME} nor numbered PNG frames"
        )
    if len(pngs) != meta.frame_count:
        raise MediaError(
            f"{directory}: meta says {meta.frame_count} frames, found {len(pngs)} PNGs"
        )
    for i, p in enumerate(pngs):
        if p.name != f"{i:06d}.png":
            raise MediaError(f"{directory}: expected frame {i:06d}.png, found {p.name}")
    frames = np.empty((meta.frame_count, meta.height, meta.width, 3), dtype=np.uint8)
    for i, p in enumerate(pngs):
        img = np.asarray(Image.open(p).convert("RGB"), dtype=np.uint8)
        if img.shape != (meta.height, meta.width, 3):
            raise MediaError(
                f"{p}: frame shape {img.shape[1]}x{img.shape[0]} does not match "
                f"meta {meta.width}x{meta.height}"
            )
        frames[i] = img
    return Clip(frames=frames, fps=meta.fps, source_id=meta.source_id)
