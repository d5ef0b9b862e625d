"""Shared domain types, the annotation/prediction JSON schema, and validation.

An annotation describes one video as an ordered list of contiguous,
non-overlapping shots.  Each shot carries an intra label (what the shot is:
vanilla footage or a transition family) and an inter label (how it relates to
the previous shot).  Predictions use the same document shape; their labels
and confidence may be absent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any


class SchemaError(ValueError):
    """A document violates the annotation schema or its invariants."""


class IntraLabel(str, Enum):
    """What a shot is: vanilla content or a specific transition family."""

    GENERAL = "general"
    DISSOLVE = "dissolve"
    WIPE = "wipe"
    PUSH = "push"
    SLIDE = "slide"
    ZOOM = "zoom"
    FADE = "fade"
    DOORWAY = "doorway"


class InterLabel(str, Enum):
    """How a shot's start relates to its predecessor."""

    NEW_START = "new_start"
    TRANSITION = "transition"
    HARD_CUT = "hard_cut"
    SUDDEN_JUMP = "sudden_jump"


#: Intra labels that denote a gradual transition region.
TRANSITION_FAMILIES = frozenset(
    label for label in IntraLabel if label is not IntraLabel.GENERAL
)


@dataclass
class Shot:
    """One shot: an inclusive frame range plus optional labels.

    ``confidence`` is ``None`` for predictions (which carry no confidence)
    and defaults to 1.0 for ground truth.  ``subtype`` and ``params`` are
    populated for synthesized transition shots only.
    """

    start: int
    end: int
    intra: IntraLabel | None = None
    inter: InterLabel | None = None
    confidence: float | None = 1.0
    subtype: str | None = None
    params: dict[str, Any] | None = None

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"start": int(self.start), "end": int(self.end)}
        if self.intra is not None:
            out["intra"] = self.intra.value
        if self.inter is not None:
            out["inter"] = self.inter.value
        if self.confidence is not None:
            out["confidence"] = float(self.confidence)
        if self.subtype is not None:
            out["subtype"] = self.subtype
        if self.params is not None:
            out["params"] = self.params
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Shot":
        try:
            start = int(data["start"])
            end = int(data["end"])
        except KeyError as exc:
            raise SchemaError(f"shot missing required field {exc}") from None
        intra = data.get("intra")
        inter = data.get("inter")
        try:
            intra_label = IntraLabel(intra) if intra is not None else None
            inter_label = InterLabel(inter) if inter is not None else None
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
        confidence = data.get("confidence")
        return cls(
            start=start,
            end=end,
            intra=intra_label,
            inter=inter_label,
            confidence=float(confidence) if confidence is not None else None,
            subtype=data.get("subtype"),
            params=data.get("params"),
        )


@dataclass
class Annotation:
    """A full shot decomposition of one video.

    The same class also represents predictions; see :class:`Shot` for which
    fields may be absent there.
    """

    video_id: str
    fps: float
    frame_count: int
    shots: list[Shot] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "video_id": self.video_id,
            "fps": float(self.fps),
            "frame_count": int(self.frame_count),
            "shots": [s.to_dict() for s in self.shots],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Annotation":
        # Unknown top-level fields are ignored on read by design.
        try:
            video_id = str(data["video_id"])
            fps = float(data["fps"])
            frame_count = int(data["frame_count"])
            shots_raw = data["shots"]
        except KeyError as exc:
            raise SchemaError(f"document missing required field {exc}") from None
        if not isinstance(shots_raw, list):
            raise SchemaError("'shots' must be a list")
        shots = [Shot.from_dict(s) for s in shots_raw]
        return cls(video_id=video_id, fps=fps, frame_count=frame_count, shots=shots)


#: Alias: predictions share the document shape with annotations.
Prediction = Annotation


def validate_annotation(doc: Annotation) -> list[str]:
    """Check every schema invariant; return one description per violation.

    An empty list means the document is valid.  Violations are data, not
    errors: malformed documents are reported, never raised here.  Label rules
    apply only when the document carries labels (unlabeled predictions are
    exempt from them but not from contiguity).
    """
    problems: list[str] = []
    if doc.fps <= 0:
        problems.append(f"fps must be > 0, got {doc.fps}")
    if doc.frame_count <= 0:
        problems.append(f"frame_count must be > 0, got {doc.frame_count}")
    if not doc.shots:
        problems.append("document has no shots")
        return problems

    for i, shot in enumerate(doc.shots):
        if shot.start < 0:
            problems.append(f"shot {i} start {shot.start} is negative")
        if shot.end < shot.start:
            problems.append(f"shot {i} start {shot.start} > end {shot.end}")
        if shot.confidence is not None and not (0.0 < shot.confidence <= 1.0):
            problems.append(
                f"shot {i} confidence {shot.confidence} outside (0, 1]"
            )

    if doc.shots[0].start != 0:
        problems.append(f"first shot starts at {doc.shots[0].start}, expected 0")
    for i in range(len(doc.shots) - 1):
        cur, nxt = doc.shots[i], doc.shots[i + 1]
        if nxt.start > cur.end + 1:
            problems.append(f"gap between shot {i} and shot {i + 1}")
        elif nxt.start < cur.end + 1:
            problems.append(f"overlap between shot {i} and shot {i + 1}")
    last = doc.shots[-1]
    if last.end != doc.frame_count - 1:
        problems.append(
            f"last shot ends at {last.end}, expected {doc.frame_count - 1}"
        )

    labeled = any(s.inter is not None for s in doc.shots)
    if labeled:
        for i, shot in enumerate(doc.shots):
            if shot.inter is None:
                problems.append(f"shot {i} missing inter label")
            elif i == 0 and shot.inter is not InterLabel.NEW_START:
                problems.append(
                    f"first shot inter is {shot.inter.value}, expected new_start"
                )
            elif i > 0 and shot.inter is InterLabel.NEW_START:
                problems.append(f"new_start at non-first shot {i}")
    if any(s.intra is not None for s in doc.shots):
        for i, shot in enumerate(doc.shots):
            if shot.intra is None:
                problems.append(f"shot {i} missing intra label")
    return problems


def boundaries_of(doc: Annotation) -> list[int]:
    """Return the sorted cut indices of a valid document.

    A cut index ``k`` means the cut lies between frame ``k`` and ``k + 1``,
    so the boundary set is each shot's ``end`` except the last shot's.

    Raises:
        SchemaError: if the document fails :func:`validate_annotation`.
    """
    problems = validate_annotation(doc)
    if problems:
        raise SchemaError(
            f"invalid document '{doc.video_id}': " + "; ".join(problems)
        )
    return [shot.end for shot in doc.shots[:-1]]


def dumps_document(doc: Annotation) -> str:
    """Serialize to the canonical JSON form (stable bytes for golden tests)."""
    return json.dumps(doc.to_dict(), indent=2) + "\n"


def loads_document(text: str) -> Annotation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SchemaError("document root must be a JSON object")
    return Annotation.from_dict(data)


def save_annotation(doc: Annotation, path: str | Path) -> None:
    Path(path).write_text(dumps_document(doc), encoding="utf-8")


def load_annotation(path: str | Path) -> Annotation:
    return loads_document(Path(path).read_text(encoding="utf-8"))
