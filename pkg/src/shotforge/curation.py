"""Pool-construction algorithms over abstract embedding/track inputs.

The similarity segmentation, semantic dedup, and hierarchical k-means work on
any unit-norm embeddings; the built-in providers (color-histogram embeddings
and block-matching tracks) are cheap stand-ins that let the whole pipeline
run at desk scale.  Real feature extractors can be swapped in by importing
``*.emb.json`` / ``*.trk.json`` files instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .media import Clip


class CurationError(ValueError):
    """Invalid curation input or configuration."""


@dataclass
class CurationConfig:
    eps_sim: float = 0.9
    eps_dup: float = 0.05
    max_clip_seconds: float = 60.0
    cluster_target: int = 32
    min_cluster_size: int = 5
    motion_percentile_window: tuple[float, float] = (25.0, 60.0)

    def validate(self) -> None:
        if not (0.0 < self.eps_sim < 1.0):
            raise CurationError(f"eps_sim must be in (0,1), got {self.eps_sim}")
        if not (0.0 < self.eps_dup < 1.0):
            raise CurationError(f"eps_dup must be in (0,1), got {self.eps_dup}")
        if self.max_clip_seconds <= 0:
            raise CurationError("max_clip_seconds must be positive")
        if self.cluster_target < 1 or self.min_cluster_size < 1:
            raise CurationError("cluster_target and min_cluster_size must be >= 1")


@dataclass
class EmbeddingSequence:
    """Unit-norm embeddings sampled every ``sample_interval_frames`` frames."""

    vectors: np.ndarray  # (n, d)
    sample_interval_frames: int
    video_id: str = ""

    def __post_init__(self) -> None:
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] < 1:
            raise CurationError(
                f"embeddings must be a (n, d) matrix with n >= 1, got {self.vectors.shape}"
            )
        if self.sample_interval_frames < 1:
            raise CurationError("sample_interval_frames must be >= 1")
        norms = np.linalg.norm(self.vectors, axis=1)
        off = np.abs(norms - 1.0)
        if off.max() > 1e-6:
            raise CurationError(
                f"embedding {int(off.argmax())} has norm {norms[off.argmax()]:.8f}, "
                "expected unit norm within 1e-6"
            )


@dataclass
class TrackSet:
    """Tracked point positions: (track_frame, point, xy)."""

    points: np.ndarray
    grid_density: int
    frame_stride: int

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 3 or self.points.shape[2] != 2:
            raise CurationError(
                f"points must have shape (frames, n, 2), got {self.points.shape}"
            )


def segment_by_similarity(
    seq: EmbeddingSequence, config: CurationConfig, fps: float = 24.0
) -> list[tuple[int, int]]:
    """Greedy left-to-right growth of temporally coherent segments.

    A segment extends while consecutive embeddings stay at cosine similarity
    >= eps_sim; a drop closes it at the current sample and the next sample
    starts a fresh one.  Segments also close on reaching max_clip_seconds.
    Segments shorter than two samples are discarded.  Returned ranges are
    inclusive frame indices; each sample covers its following interval.
    """
    config.validate()
    vectors = seq.vectors
    n = vectors.shape[0]
    interval = seq.sample_interval_frames
    cos = np.sum(vectors[:-1] * vectors[1:], axis=1) if n > 1 else np.empty(0)
    max_samples = max(1, int(config.max_clip_seconds * fps / interval))

    raw: list[tuple[int, int]] = []
    seg_start = 0
    for i in range(n):
        size = i - seg_start + 1
        if size >= max_samples or i == n - 1 or cos[i] < config.eps_sim:
            raw.append((seg_start, i))
            seg_start = i + 1
    return [
        (s * interval, e * interval + interval - 1)
        for s, e in raw
        if e - s + 1 >= 2
    ]


def motion_strength(tracks: TrackSet) -> float:
    """Mean per-step displacement magnitude over all tracked points."""
    points = tracks.points
    if points.shape[0] < 2:
        raise CurationError("motion strength needs at least two track frames")
    deltas = np.diff(points, axis=0)
    return float(np.linalg.norm(deltas, axis=2).mean())


def semantic_dedup(
    vectors: np.ndarray, eps_dup: float
) -> tuple[list[int], dict[int, int]]:
    """Greedy near-duplicate filter in input order.

    A vector is kept iff its cosine distance (1 - cos) to every previously
    kept vector exceeds eps_dup.  Returns the kept indices plus a map from
    each removed index to its most similar kept representative.
    """
    mat = np.asarray(vectors, dtype=np.float64)
    if mat.ndim != 2:
        raise CurationError(f"expected a (n, d) matrix, got shape {mat.shape}")
    kept: list[int] = []
    duplicate_of: dict[int, int] = {}
    for i in range(mat.shape[0]):
        if not kept:
            kept.append(i)
            continue
        sims = np.asarray(mat[kept] @ mat[i])
        nearest = int(np.argmax(sims))
        if 1.0 - sims[nearest] <= eps_dup:
            duplicate_of[i] = kept[nearest]
        else:
            kept.append(i)
    return kept, duplicate_of


DISCARDED = -1


def hierarchical_kmeans(
    vectors: np.ndarray,
    branching: int,
    depth: int,
    seed: int,
    min_cluster_size: int = 5,
) -> np.ndarray:
    """Recursive k-means on cosine-normalized vectors; path-encoded leaf ids.

    Each level runs k-means++ seeding plus Lloyd iterations (tolerance 1e-6,
    at most 100 sweeps); assignment ties break toward the lowest centroid
    index, so results are independent of evaluation order.  Empty children
    are pruned.  Leaves holding fewer than ``min_cluster_size`` members are
    marked ``DISCARDED`` (-1).
    """
    mat = np.asarray(vectors, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] == 0:
        raise CurationError("hierarchical_kmeans needs a non-empty (n, d) matrix")
    if branching < 1 or depth < 1:
        raise CurationError("branching and depth must be >= 1")
    norms = np.linalg.norm(mat, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    mat = mat / norms

    labels = np.zeros(mat.shape[0], dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    def recurse(indices: np.ndarray, level: int, path_id: int) -> None:
        if level == depth:
            labels[indices] = path_id
            return
        k = min(branching, len(indices))
        if k <= 1:
            recurse(indices, level + 1, path_id * branching)
            return
        assignment = _lloyd(mat[indices], k, rng)
        for child in range(k):
            members = indices[assignment == child]
            if len(members):
                recurse(members, level + 1, path_id * branching + child)

    recurse(np.arange(mat.shape[0]), 0, 0)

    ids, counts = np.unique(labels, return_counts=True)
    small = {int(i) for i, c in zip(ids, counts) if c < min_cluster_size}
    if small:
        labels = np.where(np.isin(labels, list(small)), DISCARDED, labels)
    return labels


def _lloyd(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centroids = _kmeans_pp(points, k, rng)
    assignment = np.zeros(points.shape[0], dtype=np.int64)
    for _ in range(100):
        d2 = (
            np.sum(points**2, axis=1, keepdims=True)
            - 2.0 * points @ centroids.T
            + np.sum(centroids**2, axis=1)
        )
        assignment = np.argmin(d2, axis=1)  # argmin takes the lowest index on ties
        new_centroids = centroids.copy()
        for c in range(k):
            members = points[assignment == c]
            if len(members):
                new_centroids[c] = members.mean(axis=0)
        shift = float(np.linalg.norm(new_centroids - centroids, axis=1).max())
        centroids = new_centroids
        if shift <= 1e-6:
            break
    return assignment


def _kmeans_pp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[int(rng.integers(n))]
    for c in range(1, k):
        d2 = np.min(
            ((points[:, None, :] - centroids[None, :c, :]) ** 2).sum(axis=2), axis=1
        )
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centroids[c] = points[idx]
    return centroids


# ---------------------------------------------------------------------------
# built-in providers

def histogram_embedding(frame: np.ndarray, bins: int = 8) -> np.ndarray:
    """L2-normalized bins^3 RGB histogram of one frame."""
    if frame.ndim != 3 or frame.shape[2] != 3:
        raise CurationError(f"expected an (H, W, 3) frame, got {frame.shape}")
    div = 256 // bins
    idx = (
        (frame[..., 0] // div).astype(np.int64) * bins * bins
        + (frame[..., 1] // div).astype(np.int64) * bins
        + (frame[..., 2] // div).astype(np.int64)
    )
    hist = np.bincount(idx.ravel(), minlength=bins**3).astype(np.float64)
    return hist / np.linalg.norm(hist)


_BLOCK = 16
_SEARCH = 8
_MARGIN = _BLOCK // 2 + _SEARCH


def block_motion_tracks(clip: Clip, grid_density: int = 5, stride: int = 3) -> TrackSet:
    """Exhaustive block-matching displacements on a fixed point grid.

    For each grid point, a 16x16 block is matched (sum of absolute
    differences, +-8 px search) between frames ``t`` and ``t + stride``; the
    returned positions integrate those displacements, so consecutive track
    frames are one tracked step (= ``stride`` video frames) apart.
    """
    if clip.width < 2 * _MARGIN or clip.height < 2 * _MARGIN:
        raise CurationError(
            f"clip {clip.width}x{clip.height} is too small for {_BLOCK}x{_BLOCK} "
            f"block matching with +-{_SEARCH} px search"
        )
    if clip.frame_count < stride + 1:
        raise CurationError(
            f"need at least {stride + 1} frames at stride {stride}, "
            f"got {clip.frame_count}"
        )
    gx = np.round(np.linspace(_MARGIN, clip.width - _MARGIN, grid_density)).astype(int)
    gy = np.round(np.linspace(_MARGIN, clip.height - _MARGIN, grid_density)).astype(int)
    anchors = np.array([(x, y) for y in gy for x in gx])  # (P, 2) as (x, y)

    steps = (clip.frame_count - 1) // stride
    positions = np.empty((steps + 1, len(anchors), 2), dtype=np.float64)
    positions[0] = anchors
    frames = clip.frames.astype(np.int32)
    half = _BLOCK // 2
    for k in range(steps):
        ref = frames[k * stride]
        nxt = frames[(k + 1) * stride]
        blocks = np.stack(
            [ref[y - half:y + half, x - half:x + half] for x, y in anchors]
        )
        best_sad = np.full(len(anchors), np.iinfo(np.int64).max, dtype=np.int64)
        best_disp = np.zeros((len(anchors), 2), dtype=np.float64)
        for dy in range(-_SEARCH, _SEARCH + 1):
            for dx in range(-_SEARCH, _SEARCH + 1):
                cands = np.stack(
                    [
                        nxt[y + dy - half:y + dy + half, x + dx - half:x + dx + half]
                        for x, y in anchors
                    ]
                )
                sad = np.abs(cands - blocks).sum(axis=(1, 2, 3))
                better = sad < best_sad  # strict: first-visited offset wins ties
                best_sad[better] = sad[better]
                best_disp[better] = (dx, dy)
        positions[k + 1] = positions[k] + best_disp
    return TrackSet(points=positions, grid_density=grid_density, frame_stride=stride)


# ---------------------------------------------------------------------------
# import formats

def load_embedding_file(path: str | Path) -> EmbeddingSequence:
    """Read a ``*.emb.json`` file: {video_id, sample_interval_frames, vectors}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return EmbeddingSequence(
            vectors=np.asarray(data["vectors"], dtype=np.float64),
            sample_interval_frames=int(data["sample_interval_frames"]),
            video_id=str(data["video_id"]),
        )
    except KeyError as exc:
        raise CurationError(f"{path}: missing field {exc}") from None


def load_track_file(path: str | Path) -> TrackSet:
    """Read a ``*.trk.json`` file: {video_id, grid_density, frame_stride, points}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return TrackSet(
            points=np.asarray(data["points"], dtype=np.float64),
            grid_density=int(data.get("grid_density", 0)),
            frame_stride=int(data["frame_stride"]),
        )
    except KeyError as exc:
        raise CurationError(f"{path}: missing field {exc}") from None
