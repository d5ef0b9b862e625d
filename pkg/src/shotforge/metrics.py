"""Evaluation suite: boundary P/R/F1, transition IoU, sudden-jump accuracy,
and relation accuracies, micro-averaged across videos.

All counts are accumulated over every video before any rate is computed, so
videos with many cuts weigh proportionally more than sparse ones.
Degenerate-count conventions (documented because they appear in reports):
precision is 0 when there are no predicted cuts but ground truth has some,
recall is 1 when ground truth has no cuts, and F1 is 0 when P + R is 0.
Metrics whose denominator population is empty (no transition shots, no
sudden jumps, unlabeled predictions) are reported as null rather than 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .core import (
    Annotation,
    InterLabel,
    TRANSITION_FAMILIES,
    boundaries_of,
    validate_annotation,
)


class MetricsError(ValueError):
    """Mismatched or invalid evaluation inputs."""


@dataclass
class EvalConfig:
    range_tolerance_frames: int = 2
    transition_tol_scale: int = 4   # dilation frames per side at confidence 0
    sudden_jump_tolerance: int = 0

    def validate(self) -> None:
        if min(self.range_tolerance_frames, self.transition_tol_scale,
               self.sudden_jump_tolerance) < 0:
            raise MetricsError("tolerances must be >= 0")


@dataclass
class EvalReport:
    transition_iou: float | None
    sudden_jump_acc: float | None
    range_precision: float
    range_recall: float
    range_f1: float
    intra_acc: float | None
    inter_acc: float | None
    counts: dict

    def to_dict(self) -> dict:
        return {
            "transition_iou": self.transition_iou,
            "sudden_jump_acc": self.sudden_jump_acc,
            "range_precision": self.range_precision,
            "range_recall": self.range_recall,
            "range_f1": self.range_f1,
            "intra_acc": self.intra_acc,
            "inter_acc": self.inter_acc,
            "counts": self.counts,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8"
        )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _as_doc_map(docs) -> dict[str, Annotation]:
    if isinstance(docs, dict):
        return docs
    out: dict[str, Annotation] = {}
    for doc in docs:
        if doc.video_id in out:
            raise MetricsError(f"duplicate video id '{doc.video_id}'")
        out[doc.video_id] = doc
    return out


def _paired(gt_set, pred_set) -> list[tuple[Annotation, Annotation]]:
    gt_map = _as_doc_map(gt_set)
    pred_map = _as_doc_map(pred_set)
    missing_pred = sorted(set(gt_map) - set(pred_map))
    missing_gt = sorted(set(pred_map) - set(gt_map))
    if missing_pred or missing_gt:
        raise MetricsError(
            "video id mismatch between ground truth and predictions; "
            f"missing predictions for {missing_pred}, missing ground truth for {missing_gt}"
        )
    for vid in gt_map:
        for name, doc in (("ground truth", gt_map[vid]), ("prediction", pred_map[vid])):
            problems = validate_annotation(doc)
            if problems:
                raise MetricsError(f"invalid {name} '{vid}': " + "; ".join(problems))
    return [(gt_map[vid], pred_map[vid]) for vid in sorted(gt_map)]


# ---------------------------------------------------------------------------
# boundary matching

def match_cuts(
    gt_cuts: list[int], pred_cuts: list[int], tol: int
) -> tuple[int, int, int]:
    """One-to-one greedy matching of sorted cut lists; returns (tp, fp, fn).

    Each ground-truth cut takes the nearest still-unmatched prediction within
    the tolerance; on equal distance the earlier prediction wins.
    """
    preds = sorted(pred_cuts)
    matched = [False] * len(preds)
    tp = 0
    for g in sorted(gt_cuts):
        best = -1
        best_dist = tol + 1
        for idx, p in enumerate(preds):
            if matched[idx]:
                continue
            dist = abs(p - g)
            if dist < best_dist:  # strict: earlier prediction wins ties
                best = idx
                best_dist = dist
        if best >= 0:
            matched[best] = True
            tp += 1
    fp = len(pred_cuts) - tp
    fn = len(gt_cuts) - tp
    return tp, fp, fn


def _rates(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision = 1.0 if fn == 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def range_prf(gt_set, pred_set, tol: int = 2) -> tuple[float, float, float, dict]:
    """Micro boundary precision/recall/F1 at +-tol frames."""
    tp = fp = fn = 0
    for gt, pred in _paired(gt_set, pred_set):
        a, b, c = match_cuts(boundaries_of(gt), boundaries_of(pred), tol)
        tp += a
        fp += b
        fn += c
    precision, recall, f1 = _rates(tp, fp, fn)
    return precision, recall, f1, {"tp": tp, "fp": fp, "fn": fn}


# ---------------------------------------------------------------------------
# transition IoU

def _overlap(s1: int, e1: int, s2: int, e2: int) -> int:
    return max(0, min(e1, e2) - max(s1, s2) + 1)


def shot_iou(s1: int, e1: int, s2: int, e2: int) -> float:
    inter = _overlap(s1, e1, s2, e2)
    union = (e1 - s1 + 1) + (e2 - s2 + 1) - inter
    return inter / union if union > 0 else 0.0


def transition_iou(gt_set, pred_set, config: EvalConfig | None = None) -> tuple[float | None, dict]:
    """Mean confidence-tolerant IoU over ground-truth transition shots.

    Low-confidence shots get a slack band of ``round(scale * (1 - conf))``
    frames per side: the intersection is measured against the dilated
    interval while the union stays on the original extents, so relaxing the
    tolerance can only raise a shot's score.  The best-overlapping predicted
    shot is taken per ground-truth shot; no overlap scores 0.
    """
    config = config or EvalConfig()
    config.validate()
    total = 0.0
    count = 0
    per_type: dict[str, dict] = {}
    for gt, pred in _paired(gt_set, pred_set):
        for shot in gt.shots:
            if shot.intra not in TRANSITION_FAMILIES:
                continue
            conf = shot.confidence if shot.confidence is not None else 1.0
            tol = _round_half_up(config.transition_tol_scale * (1.0 - conf))
            lo = max(0, shot.start - tol)
            hi = min(gt.frame_count - 1, shot.end + tol)
            best = 0.0
            for p in pred.shots:
                inter = _overlap(lo, hi, p.start, p.end)
                if inter == 0:
                    continue
                union = shot.length + p.length - _overlap(shot.start, shot.end, p.start, p.end)
                best = max(best, inter / union)
            total += best
            count += 1
            bucket = per_type.setdefault(
                shot.intra.value, {"count": 0, "iou_sum": 0.0}
            )
            bucket["count"] += 1
            bucket["iou_sum"] += best
    for bucket in per_type.values():
        bucket["mean_iou"] = bucket["iou_sum"] / bucket["count"]
    mean = total / count if count else None
    return mean, {"count": count, "iou_sum": total, "per_type": per_type}


# ---------------------------------------------------------------------------
# sudden jumps and relation labels

def sudden_jump_acc(gt_set, pred_set, tol: int = 0) -> tuple[float | None, dict]:
    """Fraction of ground-truth sudden jumps whose cut index is predicted
    exactly (zero tolerance by default).  Null when there are no jumps."""
    correct = 0
    total = 0
    for gt, pred in _paired(gt_set, pred_set):
        pred_cuts = boundaries_of(pred)
        for shot in gt.shots:
            if shot.inter is not InterLabel.SUDDEN_JUMP:
                continue
            total += 1
            want = shot.start - 1
            if any(abs(c - want) <= tol for c in pred_cuts):
                correct += 1
    acc = correct / total if total else None
    return acc, {"total": total, "correct": correct}


def relation_acc(gt_set, pred_set) -> tuple[float | None, float | None, dict]:
    """Intra/inter label accuracy over max-IoU-matched prediction shots.

    Reported as null when the prediction documents carry no labels of the
    corresponding kind at all (range-only baselines).
    """
    pairs = _paired(gt_set, pred_set)
    preds_have_intra = any(p.intra is not None for _, pred in pairs for p in pred.shots)
    preds_have_inter = any(p.inter is not None for _, pred in pairs for p in pred.shots)
    total = 0
    intra_correct = 0
    inter_correct = 0
    for gt, pred in pairs:
        for shot in gt.shots:
            best_idx = 0
            best = -1.0
            for idx, p in enumerate(pred.shots):
                iou = shot_iou(shot.start, shot.end, p.start, p.end)
                if iou > best:  # first maximum wins: earlier prediction on ties
                    best = iou
                    best_idx = idx
            match = pred.shots[best_idx]
            total += 1
            if shot.intra is not None and match.intra is shot.intra:
                intra_correct += 1
            if shot.inter is not None and match.inter is shot.inter:
                inter_correct += 1
    intra = intra_correct / total if (preds_have_intra and total) else None
    inter = inter_correct / total if (preds_have_inter and total) else None
    counts = {
        "shots": total,
        "intra_correct": intra_correct if preds_have_intra else None,
        "inter_correct": inter_correct if preds_have_inter else None,
    }
    return intra, inter, counts


# ---------------------------------------------------------------------------
# assembled report

def evaluate(gt_set, pred_set, config: EvalConfig | None = None) -> EvalReport:
    """Compute every metric family over matched document sets."""
    config = config or EvalConfig()
    config.validate()
    precision, recall, f1, range_counts = range_prf(
        gt_set, pred_set, config.range_tolerance_frames
    )
    t_iou, t_counts = transition_iou(gt_set, pred_set, config)
    sj_acc, sj_counts = sudden_jump_acc(gt_set, pred_set, config.sudden_jump_tolerance)
    intra, inter, rel_counts = relation_acc(gt_set, pred_set)
    return EvalReport(
        transition_iou=t_iou,
        sudden_jump_acc=sj_acc,
        range_precision=precision,
        range_recall=recall,
        range_f1=f1,
        intra_acc=intra,
        inter_acc=inter,
        counts={
            "range": range_counts,
            "transition": t_counts,
            "sudden_jump": sj_counts,
            "relation": rel_counts,
        },
    )


def report_csv(report: EvalReport) -> str:
    """Per-transition-type IoU breakdown as CSV text."""
    lines = ["type,count,mean_iou"]
    per_type = report.counts["transition"]["per_type"]
    for name in sorted(per_type):
        bucket = per_type[name]
        lines.append(f"{name},{bucket['count']},{bucket['mean_iou']:.6f}")
    return "\n".join(lines) + "\n"
