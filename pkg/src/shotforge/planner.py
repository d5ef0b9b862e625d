"""Composition planning and rendering: the synthetic dataset factory.

A plan is sampled per seed: number of clips (clamped Poisson), per-clip
durations (Gaussian, clamped), cluster-coherent clip selection, one boundary
event between consecutive segments drawn from a probability table over hard
cuts and transition subtypes, sudden-jump upgrades of hard cuts from
middle-motion sources, an optional leading fade-in, and offline augmentation
flags.  Rendering a plan yields the video frames plus a frame-accurate
annotation; annotation derivation and pixel rendering share one layout pass
so the labels cannot drift from the pixels.

Frame accounting: frames a transition consumes (held endpoints, fade
material) are charged to the adjacent segments, which shrink accordingly;
each segment always keeps at least one free frame.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Callable

import numpy as np

from . import augment
from .compositor import (
    CompositorError,
    TransitionSpec,
    compose,
    fade_consumption,
    progress_schedule,
    _fade_frames,
)
from .core import Annotation, InterLabel, IntraLabel, Shot
from .media import Clip, load_clip


class PlannerError(ValueError):
    """Invalid plan configuration, pool, or an unrenderable plan."""


def _round(x: float) -> int:
    return int(math.floor(x + 0.5))


# ---------------------------------------------------------------------------
# configuration

def default_type_table() -> dict[str, float]:
    """Boundary-type probabilities (not yet normalized; they sum to ~1.006).

    Directional families spread their mass evenly over the four directions;
    paired variants (circle open/close, spin in/out, the black/white fade
    targets) split their mass evenly.
    """
    table: dict[str, float] = {"hard_cut": 0.35}
    table["dissolve.transparent"] = 0.094
    table["dissolve.cross_blur"] = 0.024
    table["dissolve.ripple"] = 0.018
    for d in ("left", "right", "up", "down"):
        table[f"wipe.{d}"] = 0.047 / 4
    table["wipe.diagonal"] = 0.012
    table["wipe.page_curl"] = 0.012
    table["wipe.circle_open"] = 0.012
    table["wipe.circle_close"] = 0.012
    table["wipe.bar"] = 0.012
    table["wipe.ripple"] = 0.012
    table["wipe.mosaic"] = 0.012
    for d in ("left", "right", "up", "down"):
        table[f"push.{d}"] = 0.047 / 4
    table["push.puzzle"] = 0.018
    for d in ("left", "right", "up", "down"):
        table[f"slide.{d}"] = 0.047 / 4
    table["slide.whip_pan"] = 0.041
    table["slide.cube"] = 0.018
    table["zoom.in"] = 0.024
    table["zoom.out"] = 0.024
    table["zoom.spin_in"] = 0.012
    table["zoom.spin_out"] = 0.012
    table["zoom.cross"] = 0.012
    table["zoom.swap"] = 0.018
    for name in ("to_black", "to_white", "from_black", "from_white", "dip_black", "dip_white"):
        table[f"fade.{name}"] = 0.029 / 2
    table["doorway.open"] = 0.029
    return table


@dataclass
class PlanConfig:
    """All sampling hyperparameters for the synthesis pipeline."""

    poisson_lambda: float = 7.0
    clip_count_range: tuple[int, int] = (1, 28)
    clip_dur_gauss: tuple[float, float] = (2.8, 1.6)      # seconds (mean, sd)
    single_clip_gauss: tuple[float, float] = (8.0, 1.0)   # seconds (mean, sd)
    clip_dur_clamp: tuple[float, float] = (0.3, 60.0)     # seconds
    same_cluster_prob: float = 0.75
    short_dense_prob: float = 0.25
    short_dense_clip_count: int = 28
    short_dense_clip_dur: tuple[float, float] = (0.15, 1.0)
    transition_dur: tuple[float, float] = (0.15, 2.5)
    whip_pan_dur: tuple[float, float] = (0.15, 0.4)
    min_transition_frames: int = 3
    sudden_jump_prob_on_hardcut: float = 0.90
    sudden_jump_cut_frames: tuple[int, int] = (24, 40)
    sudden_jump_motion_percentiles: tuple[float, float] = (25.0, 60.0)
    min_segment_frames: int = 12    # slack kept on each side of a standalone jump cut
    leading_fade_in_prob: float = 0.25
    leading_fade_in_dur: tuple[float, float] = (0.33, 1.5)
    subtitle_prob: float = 0.05
    lighting_prob: float = 0.075
    type_table: dict[str, float] = field(default_factory=default_type_table)

    def validate(self) -> None:
        for name in ("poisson_lambda",):
            if getattr(self, name) <= 0:
                raise PlannerError(f"{name} must be > 0")
        lo, hi = self.clip_count_range
        if not (1 <= lo <= hi):
            raise PlannerError(f"clip_count_range {self.clip_count_range} is degenerate")
        for name in ("clip_dur_gauss", "single_clip_gauss"):
            if getattr(self, name)[1] <= 0:
                raise PlannerError(f"{name} needs a positive sd")
        for name in ("short_dense_clip_dur", "transition_dur", "whip_pan_dur",
                     "leading_fade_in_dur", "clip_dur_clamp"):
            a, b = getattr(self, name)
            if not (0 < a < b):
                raise PlannerError(f"{name} {getattr(self, name)} is degenerate")
        for name in ("same_cluster_prob", "short_dense_prob", "sudden_jump_prob_on_hardcut",
                     "leading_fade_in_prob", "subtitle_prob", "lighting_prob"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise PlannerError(f"{name} must be a probability, got {p}")
        if self.sudden_jump_cut_frames[0] > self.sudden_jump_cut_frames[1]:
            raise PlannerError("sudden_jump_cut_frames range is inverted")
        total = sum(self.type_table.values())
        if total <= 0 or any(v < 0 for v in self.type_table.values()):
            raise PlannerError("type_table must hold nonnegative weights with positive sum")

    def normalized_type_table(self) -> dict[str, float]:
        """Type table rescaled to sum to exactly 1 (the published weights sum
        slightly over 1, so normalization is applied once here)."""
        total = sum(self.type_table.values())
        return {k: v / total for k, v in self.type_table.items()}

    def to_json_dict(self) -> dict:
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, tuple):
                out[key] = list(value)
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "PlanConfig":
        kwargs = {}
        defaults = cls()
        for key, value in data.items():
            if not hasattr(defaults, key):
                raise PlannerError(f"unknown config field '{key}'")
            current = getattr(defaults, key)
            if isinstance(current, tuple):
                kwargs[key] = tuple(value)
            else:
                kwargs[key] = value
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "PlanConfig":
        return cls.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )


# ---------------------------------------------------------------------------
# clip pool

@dataclass
class PoolEntry:
    path: str
    cluster_id: int
    motion_score: float
    percentile: float = 50.0
    frame_count: int = 0
    fps: float = 24.0
    width: int = 0
    height: int = 0

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "cluster_id": int(self.cluster_id),
            "motion_score": float(self.motion_score),
            "percentile": float(self.percentile),
            "frame_count": int(self.frame_count),
            "fps": float(self.fps),
            "width": int(self.width),
            "height": int(self.height),
        }


def motion_percentiles(scores: list[float] | np.ndarray) -> np.ndarray:
    """Percentile rank of each score in [0, 100]; ties keep input order.

    A single-entry pool ranks at 50 so the middle-motion window still applies.
    """
    scores = np.asarray(scores, dtype=np.float64)
    n = len(scores)
    if n == 0:
        return np.empty(0)
    if n == 1:
        return np.array([50.0])
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.arange(n, dtype=np.float64)
    return 100.0 * ranks / (n - 1)


@dataclass
class ClipPool:
    entries: list[PoolEntry]

    def save(self, path: str | Path) -> None:
        payload = {"entries": [e.to_dict() for e in self.entries]}
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ClipPool":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        entries = []
        for raw in data.get("entries", []):
            entries.append(
                PoolEntry(
                    path=raw["path"],
                    cluster_id=int(raw["cluster_id"]),
                    motion_score=float(raw["motion_score"]),
                    percentile=float(raw.get("percentile", 50.0)),
                    frame_count=int(raw.get("frame_count", 0)),
                    fps=float(raw.get("fps", 24.0)),
                    width=int(raw.get("width", 0)),
                    height=int(raw.get("height", 0)),
                )
            )
        return cls(entries=entries)

    def check_uniform(self) -> tuple[int, int, float]:
        """All entries must share frame geometry and rate for compositing."""
        if not self.entries:
            raise PlannerError("clip pool is empty")
        first = self.entries[0]
        for e in self.entries[1:]:
            if (e.width, e.height, e.fps) != (first.width, first.height, first.fps):
                raise PlannerError(
                    f"pool mixes geometries: {e.path} is {e.width}x{e.height}@{e.fps}, "
                    f"expected {first.width}x{first.height}@{first.fps}"
                )
        return first.width, first.height, first.fps


# ---------------------------------------------------------------------------
# plan structure

@dataclass
class Segment:
    entry_index: int
    offset: int
    duration_frames: int


@dataclass
class BoundaryEvent:
    kind: str                       # "hard_cut" | "sudden_jump" | "transition"
    drawn_type: str                 # the raw table key drawn for this boundary
    cut_len: int | None = None
    spec: TransitionSpec | None = None


@dataclass
class CompositionPlan:
    seed: int
    video_id: str
    fps: float
    width: int
    height: int
    short_dense: bool
    segments: list[Segment]
    events: list[BoundaryEvent]
    leading_fade: TransitionSpec | None
    subtitle: bool
    lighting: bool
    augment_seed: int
    warnings: dict[str, int] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# sampling

def sample_clip_count(rng: np.random.Generator, config: PlanConfig) -> int:
    lo, hi = config.clip_count_range
    return int(min(max(rng.poisson(config.poisson_lambda), lo), hi))


def _duration_frames(seconds: float, fps: float, clamp: tuple[float, float]) -> int:
    seconds = min(max(seconds, clamp[0]), clamp[1])
    return max(1, _round(seconds * fps))


def _sample_transition_spec(
    rng: np.random.Generator,
    subtype: str,
    duration_frames: int,
    width: int,
    height: int,
) -> TransitionSpec:
    easing = ("linear", "smoothstep", "constant_hold")[int(rng.integers(3))]
    soft = bool(rng.random() < 0.5)
    feather = int(rng.integers(2, max(4, min(width, height) // 10))) if soft else 0
    spec = TransitionSpec(
        subtype=subtype,
        duration_frames=duration_frames,
        easing=easing,
        edge="soft" if soft else "hard",
        feather_px=feather,
        seed=int(rng.integers(2**31)),
    )
    short = subtype.split(".", 1)[1]
    if short in ("circle_open", "circle_close", "ripple") or subtype.startswith("zoom."):
        spec.center = (float(rng.uniform(0.3, 0.7)), float(rng.uniform(0.3, 0.7)))
    if short == "diagonal" or short == "page_curl":
        spec.direction = ("diag_tl", "diag_tr", "diag_bl", "diag_br")[int(rng.integers(4))]
    if short == "whip_pan" or short == "cube":
        spec.direction = ("left", "right")[int(rng.integers(2))]
    if short == "puzzle":
        spec.direction = ("left", "right", "up", "down")[int(rng.integers(4))]
        spec.grid = (int(rng.integers(2, 5)), int(rng.integers(2, 6)))
    if short == "mosaic":
        spec.grid = (int(rng.integers(3, 7)), int(rng.integers(3, 7)))
    if short == "bar":
        spec.grid = (int(rng.integers(2, 6)), 1)
    if subtype.startswith("zoom."):
        spec.zoom_mag = float(rng.uniform(1.3, 2.2))
    if short == "cross_blur":
        spec.blur_sigma_max = float(rng.uniform(2.0, 6.0))
    if short == "whip_pan":
        spec.blur_sigma_max = float(rng.uniform(4.0, 10.0))
    if subtype.startswith("doorway."):
        spec.seam = ("vertical", "horizontal")[int(rng.integers(2))]
    return spec


def sample_plan(
    config: PlanConfig,
    pool: ClipPool,
    seed: int,
    video_id: str | None = None,
) -> CompositionPlan:
    """Deterministically sample one composition for ``(config, pool, seed)``."""
    config.validate()
    width, height, fps = pool.check_uniform()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    entries = pool.entries
    n_pool = len(entries)

    cluster_members: dict[int, list[int]] = {}
    for idx, entry in enumerate(entries):
        cluster_members.setdefault(entry.cluster_id, []).append(idx)

    warnings = {"sudden_jump_degraded": 0}

    short_dense = bool(rng.random() < config.short_dense_prob)
    if short_dense:
        count = config.short_dense_clip_count
        lo, hi = config.short_dense_clip_dur
        durations = [max(1, _round(float(rng.uniform(lo, hi)) * fps)) for _ in range(count)]
    else:
        count = sample_clip_count(rng, config)
        if count == 1:
            mean, sd = config.single_clip_gauss
            durations = [_duration_frames(float(rng.normal(mean, sd)), fps, config.clip_dur_clamp)]
        else:
            mean, sd = config.clip_dur_gauss
            durations = [
                _duration_frames(float(rng.normal(mean, sd)), fps, config.clip_dur_clamp)
                for _ in range(count)
            ]

    # clip selection: cluster-coherent chain with uniform fallback
    segments: list[Segment] = []
    prev_idx: int | None = None
    for i in range(count):
        if prev_idx is not None and rng.random() < config.same_cluster_prob:
            members = cluster_members[entries[prev_idx].cluster_id]
            idx = members[int(rng.integers(len(members)))]
        else:
            idx = int(rng.integers(n_pool))
        dur = min(durations[i], entries[idx].frame_count) if entries[idx].frame_count else durations[i]
        max_off = max(0, entries[idx].frame_count - dur)
        offset = int(rng.integers(0, max_off + 1)) if max_off > 0 else 0
        segments.append(Segment(entry_index=idx, offset=offset, duration_frames=dur))
        prev_idx = idx

    head_taken = [0] * count
    tail_taken = [0] * count

    # optional leading fade-in, charged to the first segment's head
    leading_fade: TransitionSpec | None = None
    if not short_dense and rng.random() < config.leading_fade_in_prob:
        lo, hi = config.leading_fade_in_dur
        length = _round(float(rng.uniform(lo, hi)) * fps)
        reserve = 2 if count > 1 else 1  # keep >=1 frame plus tail slack
        length = min(length, segments[0].duration_frames - reserve)
        if length >= config.min_transition_frames:
            target = ("from_black", "from_white")[int(rng.integers(2))]
            leading_fade = TransitionSpec(
                subtype=f"fade.{target}",
                duration_frames=length,
                seed=int(rng.integers(2**31)),
            )
            head_taken[0] = length

    table = config.normalized_type_table()
    type_keys = list(table.keys())
    type_cum = np.cumsum([table[k] for k in type_keys])
    jump_lo, jump_hi = config.sudden_jump_cut_frames
    pct_lo, pct_hi = config.sudden_jump_motion_percentiles
    locked = [False] * count

    events: list[BoundaryEvent] = []
    for j in range(count - 1):
        if short_dense:
            events.append(BoundaryEvent(kind="hard_cut", drawn_type="hard_cut"))
            continue
        drawn = type_keys[int(np.searchsorted(type_cum, rng.random(), side="right"))]
        event = _sample_boundary(
            rng, config, drawn, segments, j, head_taken, tail_taken,
            fps, width, height,
        )
        if event.kind == "hard_cut" and not short_dense:
            event = _maybe_sudden_jump(
                rng, config, event, entries, segments, locked, j,
                jump_lo, jump_hi, pct_lo, pct_hi, warnings,
            )
        events.append(event)

    subtitle = bool(rng.random() < config.subtitle_prob)
    lighting = bool(rng.random() < config.lighting_prob)
    augment_seed = int(rng.integers(2**63))

    return CompositionPlan(
        seed=seed,
        video_id=video_id or f"plan-{seed:016x}",
        fps=fps,
        width=width,
        height=height,
        short_dense=short_dense,
        segments=segments,
        events=events,
        leading_fade=leading_fade,
        subtitle=subtitle,
        lighting=lighting,
        augment_seed=augment_seed,
        warnings=warnings,
    )


def _sample_boundary(
    rng: np.random.Generator,
    config: PlanConfig,
    drawn: str,
    segments: list[Segment],
    j: int,
    head_taken: list[int],
    tail_taken: list[int],
    fps: float,
    width: int,
    height: int,
) -> BoundaryEvent:
    """Turn a drawn table key into an event, shrinking or downgrading
    transitions that do not fit the adjacent segments' frame budgets."""
    if drawn == "hard_cut":
        return BoundaryEvent(kind="hard_cut", drawn_type=drawn)

    dur_range = config.whip_pan_dur if drawn == "slide.whip_pan" else config.transition_dur
    length = _round(float(rng.uniform(*dur_range)) * fps)
    if length < config.min_transition_frames:
        return BoundaryEvent(kind="hard_cut", drawn_type=drawn)

    last = len(segments) - 1
    avail_tail = segments[j].duration_frames - head_taken[j] - 1
    avail_head = segments[j + 1].duration_frames - 1 - (1 if j + 1 < last else 0)

    if drawn.startswith("fade."):
        short = drawn.split(".", 1)[1]
        if short.startswith("to_"):
            length = min(length, avail_tail)
        elif short.startswith("from_"):
            length = min(length, avail_head)
        else:  # dip splits ceil/floor across the boundary
            while length >= config.min_transition_frames and (
                (length + 1) // 2 > avail_tail or length // 2 > avail_head
            ):
                length -= 1
        if length < config.min_transition_frames:
            return BoundaryEvent(kind="hard_cut", drawn_type=drawn)
    else:
        if avail_tail < 1 or avail_head < 1:
            return BoundaryEvent(kind="hard_cut", drawn_type=drawn)

    spec = _sample_transition_spec(rng, drawn, length, width, height)
    take_a, take_b = fade_consumption(spec)
    tail_taken[j] += take_a
    head_taken[j + 1] += take_b
    return BoundaryEvent(kind="transition", drawn_type=drawn, spec=spec)


def _maybe_sudden_jump(
    rng: np.random.Generator,
    config: PlanConfig,
    event: BoundaryEvent,
    entries: list[PoolEntry],
    segments: list[Segment],
    locked: list[bool],
    j: int,
    jump_lo: int,
    jump_hi: int,
    pct_lo: float,
    pct_hi: float,
    warnings: dict[str, int],
) -> BoundaryEvent:
    """Upgrade a hard cut to a sudden jump by splitting one middle-motion
    source across the boundary; falls back to a plain hard cut when no
    eligible source fits."""
    if rng.random() >= config.sudden_jump_prob_on_hardcut:
        return event
    cut = int(rng.integers(jump_lo, jump_hi + 1))
    d_j = segments[j].duration_frames
    d_next = segments[j + 1].duration_frames

    if locked[j]:
        # chain: segment j already belongs to a jump source; extend it
        entry_idx = segments[j].entry_index
        new_offset = segments[j].offset + d_j + cut
        if new_offset + d_next <= entries[entry_idx].frame_count:
            segments[j + 1] = Segment(entry_idx, new_offset, d_next)
            locked[j + 1] = True
            return BoundaryEvent(kind="sudden_jump", drawn_type=event.drawn_type, cut_len=cut)
        warnings["sudden_jump_degraded"] += 1
        return event

    need = d_j + cut + d_next
    eligible = [
        k for k, e in enumerate(entries)
        if pct_lo <= e.percentile <= pct_hi and e.frame_count >= need
    ]
    if not eligible:
        warnings["sudden_jump_degraded"] += 1
        return event
    pick = eligible[int(rng.integers(len(eligible)))]
    offset = int(rng.integers(0, entries[pick].frame_count - need + 1))
    segments[j] = Segment(pick, offset, d_j)
    segments[j + 1] = Segment(pick, offset + d_j + cut, d_next)
    locked[j] = True
    locked[j + 1] = True
    return BoundaryEvent(kind="sudden_jump", drawn_type=event.drawn_type, cut_len=cut)


# ---------------------------------------------------------------------------
# standalone sudden-jump construction

def make_sudden_jump(
    clip: Clip, config: PlanConfig, rng: np.random.Generator
) -> tuple[Clip, Clip, int]:
    """Remove a random interior block of frames, returning (head, tail, cut).

    Both remaining pieces keep at least ``min_segment_frames`` frames so each
    half is still a plausible shot.
    """
    lo, hi = config.sudden_jump_cut_frames
    cut = int(rng.integers(lo, hi + 1))
    margin = config.min_segment_frames
    if clip.frame_count < cut + 2 * margin:
        raise PlannerError(
            f"clip of {clip.frame_count} frames is too short for a {cut}-frame jump cut "
            f"with {margin}-frame margins"
        )
    pos = int(rng.integers(margin, clip.frame_count - cut - margin + 1))
    head = Clip(clip.frames[:pos].copy(), clip.fps, clip.source_id + "-head")
    tail = Clip(clip.frames[pos + cut:].copy(), clip.fps, clip.source_id + "-tail")
    return head, tail, cut


# ---------------------------------------------------------------------------
# layout and rendering

def _consumption(plan: CompositionPlan) -> tuple[list[int], list[int]]:
    n = len(plan.segments)
    head = [0] * n
    tail = [0] * n
    if plan.leading_fade is not None:
        head[0] += plan.leading_fade.duration_frames
    for j, event in enumerate(plan.events):
        if event.kind == "transition":
            take_a, take_b = fade_consumption(event.spec)
            tail[j] += take_a
            head[j + 1] += take_b
    return head, tail


_INTER_FOR_EVENT = {
    "hard_cut": InterLabel.HARD_CUT,
    "sudden_jump": InterLabel.SUDDEN_JUMP,
    "transition": InterLabel.TRANSITION,
}


def plan_layout(plan: CompositionPlan) -> tuple[Annotation, list[tuple]]:
    """Shared frame-accounting pass: the annotation plus render instructions.

    The transition shot and the vanilla shot immediately after it both carry
    the transition inter label, so the relation is recoverable from either
    side of the boundary.
    """
    head, tail = _consumption(plan)
    shots: list[Shot] = []
    ops: list[tuple] = []
    pos = 0

    if plan.leading_fade is not None:
        spec = plan.leading_fade
        length = spec.duration_frames
        shots.append(
            Shot(pos, pos + length - 1, IntraLabel.FADE, InterLabel.NEW_START,
                 1.0, spec.subtype, spec.to_params())
        )
        ops.append(("lead_fade",))
        pos += length

    n = len(plan.segments)
    for i, seg in enumerate(plan.segments):
        kept = seg.duration_frames - head[i] - tail[i]
        if kept < 1:
            raise PlannerError(
                f"segment {i} over-consumed: duration {seg.duration_frames}, "
                f"head {head[i]}, tail {tail[i]}"
            )
        if i == 0:
            inter = InterLabel.TRANSITION if plan.leading_fade else InterLabel.NEW_START
        else:
            inter = _INTER_FOR_EVENT[plan.events[i - 1].kind]
        shots.append(Shot(pos, pos + kept - 1, IntraLabel.GENERAL, inter, 1.0))
        ops.append(("body", i, head[i], kept))
        pos += kept
        if i < n - 1 and plan.events[i].kind == "transition":
            spec = plan.events[i].spec
            length = spec.duration_frames
            shots.append(
                Shot(pos, pos + length - 1, spec.family, InterLabel.TRANSITION,
                     1.0, spec.subtype, spec.to_params())
            )
            ops.append(("transition", i))
            pos += length

    annotation = Annotation(
        video_id=plan.video_id, fps=plan.fps, frame_count=pos, shots=shots
    )
    return annotation, ops


def derive_annotation(plan: CompositionPlan) -> Annotation:
    """Frame-accurate labels for a plan without touching any pixels."""
    return plan_layout(plan)[0]


class _WindowCache:
    """Loads pool clips lazily, keeping a bounded number in memory."""

    def __init__(self, pool: ClipPool, loader: Callable[[str], Clip] | None, limit: int = 32):
        self._pool = pool
        self._loader = loader or (lambda p: load_clip(p))
        self._cache: dict[int, Clip] = {}
        self._limit = limit

    def window(self, segment: Segment) -> np.ndarray:
        clip = self._cache.get(segment.entry_index)
        if clip is None:
            if len(self._cache) >= self._limit:
                self._cache.pop(next(iter(self._cache)))
            clip = self._loader(self._pool.entries[segment.entry_index].path)
            self._cache[segment.entry_index] = clip
        end = segment.offset + segment.duration_frames
        if end > clip.frame_count:
            raise PlannerError(
                f"segment window [{segment.offset}, {end}) exceeds clip "
                f"'{clip.source_id}' of {clip.frame_count} frames"
            )
        return clip.frames[segment.offset:end]


def render_plan(
    plan: CompositionPlan,
    config: PlanConfig,
    pool: ClipPool,
    clip_loader: Callable[[str], Clip] | None = None,
) -> tuple[Clip, Annotation]:
    """Materialize a plan into frames plus its annotation."""
    annotation, ops = plan_layout(plan)
    cache = _WindowCache(pool, clip_loader)
    pieces: list[np.ndarray] = []

    for op in ops:
        if op[0] == "lead_fade":
            spec = plan.leading_fade
            window = cache.window(plan.segments[0])
            material = window[: spec.duration_frames]
            pieces.append(np.stack(_fade_frames(spec.normalized(), window[:0], material)))
        elif op[0] == "body":
            _, i, start, kept = op
            window = cache.window(plan.segments[i])
            pieces.append(window[start : start + kept])
        else:
            _, j = op
            spec = plan.events[j].spec.normalized()
            win_a = cache.window(plan.segments[j])
            win_b = cache.window(plan.segments[j + 1])
            try:
                pieces.append(_render_event(spec, win_a, win_b))
            except CompositorError as exc:
                raise PlannerError(f"boundary {j} ({spec.subtype}): {exc}") from exc

    frames = np.concatenate(pieces, axis=0)
    if frames.shape[0] != annotation.frame_count:
        raise PlannerError(
            f"rendered {frames.shape[0]} frames but annotation expects "
            f"{annotation.frame_count}"
        )

    if plan.subtitle or plan.lighting:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(plan.augment_seed)))
        if plan.subtitle:
            frames = augment.apply_random_subtitle(frames, annotation, rng)
        if plan.lighting:
            frames = augment.apply_random_lighting(frames, rng)

    clip = Clip(frames=np.ascontiguousarray(frames), fps=plan.fps, source_id=plan.video_id)
    return clip, annotation


def _render_event(spec: TransitionSpec, win_a: np.ndarray, win_b: np.ndarray) -> np.ndarray:
    if spec.family is IntraLabel.FADE:
        take_a, take_b = fade_consumption(spec)
        material_a = win_a[len(win_a) - take_a:] if take_a else win_a[:0]
        material_b = win_b[:take_b]
        return np.stack(_fade_frames(spec, material_a, material_b))
    hold_a = win_a[-1]
    hold_b = win_b[0]
    return np.stack(
        [compose(hold_a, hold_b, t, spec)
         for t in progress_schedule(spec.duration_frames, spec.easing)]
    )


def augment_offline(
    clip: Clip,
    annotation: Annotation,
    config: PlanConfig,
    rng: np.random.Generator,
) -> Clip:
    """Independently roll the offline augmentations on a rendered clip.

    With ``subtitle_prob`` a wrapped caption is burned over one shot span;
    with ``lighting_prob`` a smooth lighting ride is applied.  Labels are
    unaffected either way.
    """
    frames = clip.frames
    if rng.random() < config.subtitle_prob:
        frames = augment.apply_random_subtitle(frames, annotation, rng)
    if rng.random() < config.lighting_prob:
        frames = augment.apply_random_lighting(frames, rng)
    if frames is clip.frames:
        return clip
    return Clip(frames=frames, fps=clip.fps, source_id=clip.source_id)
