"""Non-learning baseline detector: histogram-difference cuts with a minimum
scene length, plus helpers shared with the evaluation harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Annotation, Prediction, Shot
from .media import Clip


class DetectorError(ValueError):
    """Invalid detector input or configuration."""


@dataclass
class DetectorConfig:
    hist_bins: int = 8
    threshold: float = 0.5          # L1 distance on normalized histograms, in (0, 2]
    min_scene_frames: int = 6

    def validate(self) -> None:
        if self.hist_bins < 2 or 256 % self.hist_bins:
            raise DetectorError(f"hist_bins must divide 256, got {self.hist_bins}")
        if not (0.0 < self.threshold <= 2.0):
            raise DetectorError(f"threshold must be in (0, 2], got {self.threshold}")
        if self.min_scene_frames < 1:
            raise DetectorError("min_scene_frames must be >= 1")


def _histogram(frame: np.ndarray, bins: int) -> np.ndarray:
    div = 256 // bins
    idx = (
        (frame[..., 0] // div).astype(np.int64) * bins * bins
        + (frame[..., 1] // div).astype(np.int64) * bins
        + (frame[..., 2] // div).astype(np.int64)
    )
    hist = np.bincount(idx.ravel(), minlength=bins**3).astype(np.float64)
    return hist / hist.sum()


def hist_distance(f1: np.ndarray, f2: np.ndarray, bins: int = 8) -> float:
    """L1 distance between L1-normalized RGB histograms; ranges over [0, 2]."""
    if f1.shape != f2.shape:
        raise DetectorError(f"frame dimensions differ: {f1.shape} vs {f2.shape}")
    return float(np.abs(_histogram(f1, bins) - _histogram(f2, bins)).sum())


def frame_pair_distances(clip: Clip, bins: int = 8) -> np.ndarray:
    """Histogram distance between each consecutive frame pair (length n-1)."""
    hists = np.stack([_histogram(clip.frames[i], bins) for i in range(clip.frame_count)])
    return np.abs(np.diff(hists, axis=0)).sum(axis=1)


def detect_cuts(clip: Clip, config: DetectorConfig | None = None) -> Prediction:
    """Detect hard boundaries where consecutive-frame histogram distance
    exceeds the threshold; a cut is only placed once the running scene has at
    least ``min_scene_frames`` frames.  The output is a contiguity-valid,
    label-free prediction document."""
    config = config or DetectorConfig()
    config.validate()
    if clip.frame_count < 2:
        return Prediction(
            video_id=clip.source_id,
            fps=clip.fps,
            frame_count=clip.frame_count,
            shots=[Shot(0, clip.frame_count - 1, confidence=None)],
        )
    distances = frame_pair_distances(clip, config.hist_bins)
    cuts: list[int] = []
    last_cut = -1
    for i in range(clip.frame_count - 1):
        if distances[i] > config.threshold and (i - last_cut) >= config.min_scene_frames:
            cuts.append(i)
            last_cut = i
    return cuts_to_prediction(cuts, clip.source_id, clip.fps, clip.frame_count)


def cuts_to_prediction(
    cuts: list[int], video_id: str, fps: float, frame_count: int
) -> Prediction:
    """Wrap sorted cut indices into a label-free prediction document."""
    starts = [0] + [c + 1 for c in cuts]
    ends = cuts + [frame_count - 1]
    shots = [Shot(s, e, confidence=None) for s, e in zip(starts, ends)]
    return Annotation(video_id=video_id, fps=fps, frame_count=frame_count, shots=shots)
