"""Static review strips: one PNG per video with shot ranges and labels burned
in, for eyeballing synthesis and detection output."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import Annotation, IntraLabel
from .media import Clip

_LABEL_COLORS = {
    "general": (90, 90, 90),
    "dissolve": (214, 93, 14),
    "wipe": (69, 133, 136),
    "push": (152, 151, 26),
    "slide": (177, 98, 134),
    "zoom": (104, 157, 106),
    "fade": (215, 153, 33),
    "doorway": (204, 36, 29),
    "unlabeled": (60, 60, 60),
}

_HEADER_H = 14
_PAD = 2


def render_strip(clip: Clip, annotation: Annotation, frames_per_shot: int = 8, scale: int = 1):
    """Build a PIL image: one row per shot, header text above each row."""
    from PIL import Image, ImageDraw, ImageFont

    font = ImageFont.load_default()
    thumb_w = clip.width * scale
    thumb_h = clip.height * scale
    row_h = _HEADER_H + thumb_h + _PAD
    width = max(320, frames_per_shot * (thumb_w + _PAD) + _PAD)
    height = row_h * len(annotation.shots) + _PAD
    canvas = Image.new("RGB", (width, height), (24, 24, 24))
    draw = ImageDraw.Draw(canvas)

    for row, shot in enumerate(annotation.shots):
        y0 = row * row_h + _PAD
        intra = shot.intra.value if shot.intra is not None else "unlabeled"
        inter = shot.inter.value if shot.inter is not None else "?"
        color = _LABEL_COLORS.get(intra, _LABEL_COLORS["unlabeled"])
        text = f"shot {row}  [{shot.start},{shot.end}]  {intra}/{inter}"
        if shot.subtype:
            text += f"  {shot.subtype}"
        draw.rectangle([0, y0, width, y0 + _HEADER_H - 2], fill=color)
        draw.text((4, y0 + 1), text, fill=(255, 255, 255), font=font)

        n = min(frames_per_shot, shot.length)
        picks = np.linspace(shot.start, shot.end, n).round().astype(int)
        for col, frame_idx in enumerate(picks):
            frame = clip.frames[frame_idx]
            img = Image.fromarray(frame)
            if scale != 1:
                img = img.resize((thumb_w, thumb_h), Image.NEAREST)
            canvas.paste(img, (_PAD + col * (thumb_w + _PAD), y0 + _HEADER_H))
    return canvas


def save_strip(
    clip: Clip,
    annotation: Annotation,
    out_dir: str | Path,
    frames_per_shot: int = 8,
    scale: int = 1,
) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{annotation.video_id}.png"
    render_strip(clip, annotation, frames_per_shot, scale).save(path)
    return path
