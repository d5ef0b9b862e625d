"""Independent reference implementations used to verify the real code paths.

Everything here is written in the most literal style possible (python sets,
nested loops, no shared helpers with the package) so a bug in the package is
unlikely to be mirrored here.
"""

from __future__ import annotations

import math

import numpy as np


# ---------------------------------------------------------------------------
# clamped Poisson mean (planner clip counts)

def clamped_poisson_mean(lam: float, lo: int, hi: int) -> float:
    """E[min(max(X, lo), hi)] for X ~ Poisson(lam), by direct summation."""
    from scipy import stats

    mean = 0.0
    # beyond hi the value is constant, so sum the head and add the tail mass
    for k in range(0, hi + 1):
        mean += min(max(k, lo), hi) * stats.poisson.pmf(k, lam)
    mean += hi * stats.poisson.sf(hi, lam)
    return mean


# ---------------------------------------------------------------------------
# exhaustive block matching (media motion oracle)

def exhaustive_motion_estimate(frames: np.ndarray, points: int = 9) -> float:
    """Mean best-match displacement between consecutive frames.

    Deliberately separate from the curation provider: different block size,
    plain triple loops, stride 1.
    """
    f = frames.astype(np.int64)
    n, h, w, _ = f.shape
    block = 10
    search = 7
    margin = block // 2 + search
    side = int(math.sqrt(points))
    xs = np.linspace(margin, w - margin, side).round().astype(int)
    ys = np.linspace(margin, h - margin, side).round().astype(int)
    mags = []
    for t in range(n - 1):
        for cy in ys:
            for cx in xs:
                ref = f[t, cy - 5:cy + 5, cx - 5:cx + 5]
                best = None
                best_d = (0, 0)
                for dy in range(-search, search + 1):
                    for dx in range(-search, search + 1):
                        cand = f[t + 1, cy + dy - 5:cy + dy + 5, cx + dx - 5:cx + dx + 5]
                        sad = int(np.abs(cand - ref).sum())
                        if best is None or sad < best:
                            best = sad
                            best_d = (dx, dy)
                mags.append(math.hypot(*best_d))
    return float(np.mean(mags))


# ---------------------------------------------------------------------------
# brute-force metric suite

def _cuts(doc) -> list[int]:
    ends = [s.end for s in doc.shots]
    return ends[:-1]


def oracle_range_counts(gt_docs: dict, pred_docs: dict, tol: int) -> tuple[int, int, int]:
    tp = 0
    fp = 0
    fn = 0
    for vid in gt_docs:
        g_list = sorted(_cuts(gt_docs[vid]))
        p_list = sorted(_cuts(pred_docs[vid]))
        used = set()
        for g in g_list:
            candidates = []
            for i, p in enumerate(p_list):
                if i in used:
                    continue
                if abs(p - g) <= tol:
                    candidates.append((abs(p - g), i))
            if candidates:
                candidates.sort()  # (distance, index): earlier index breaks ties
                used.add(candidates[0][1])
                tp += 1
            else:
                fn += 1
        fp += len(p_list) - len(used)
    return tp, fp, fn


def oracle_rates(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    if tp + fp > 0:
        p = tp / (tp + fp)
    elif fn == 0:
        p = 1.0
    else:
        p = 0.0
    r = tp / (tp + fn) if tp + fn > 0 else 1.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f1


_TRANSITION_NAMES = {"dissolve", "wipe", "push", "slide", "zoom", "fade", "doorway"}


def oracle_transition_iou(gt_docs: dict, pred_docs: dict, scale: int) -> tuple:
    """Per-shot best IoU via literal python frame sets."""
    total = 0.0
    count = 0
    for vid in gt_docs:
        gt = gt_docs[vid]
        pred = pred_docs[vid]
        for shot in gt.shots:
            if shot.intra is None or shot.intra.value not in _TRANSITION_NAMES:
                continue
            conf = 1.0 if shot.confidence is None else shot.confidence
            tol = int(math.floor(scale * (1.0 - conf) + 0.5))
            lo = max(0, shot.start - tol)
            hi = min(gt.frame_count - 1, shot.end + tol)
            dilated = set(range(lo, hi + 1))
            original = set(range(shot.start, shot.end + 1))
            best = 0.0
            for p in pred.shots:
                p_set = set(range(p.start, p.end + 1))
                inter = len(dilated & p_set)
                union = len(original | p_set)
                if inter and union:
                    best = max(best, inter / union)
            total += best
            count += 1
    return (total / count if count else None), count


def oracle_sudden_jump_acc(gt_docs: dict, pred_docs: dict, tol: int) -> tuple:
    correct = 0
    total = 0
    for vid in gt_docs:
        preds = set(_cuts(pred_docs[vid]))
        for shot in gt_docs[vid].shots:
            if shot.inter is None or shot.inter.value != "sudden_jump":
                continue
            total += 1
            want = shot.start - 1
            hit = False
            for c in preds:
                if abs(c - want) <= tol:
                    hit = True
            if hit:
                correct += 1
    return (correct / total if total else None), total


def oracle_relation_acc(gt_docs: dict, pred_docs: dict) -> tuple:
    any_intra = False
    any_inter = False
    for vid in pred_docs:
        for p in pred_docs[vid].shots:
            if p.intra is not None:
                any_intra = True
            if p.inter is not None:
                any_inter = True
    total = 0
    ok_intra = 0
    ok_inter = 0
    for vid in gt_docs:
        gt = gt_docs[vid]
        pred = pred_docs[vid]
        for shot in gt.shots:
            g_set = set(range(shot.start, shot.end + 1))
            best_iou = -1.0
            best_shot = None
            for p in pred.shots:
                p_set = set(range(p.start, p.end + 1))
                union = len(g_set | p_set)
                iou = len(g_set & p_set) / union if union else 0.0
                if iou > best_iou:
                    best_iou = iou
                    best_shot = p
            total += 1
            if shot.intra is not None and best_shot.intra is not None \
                    and best_shot.intra.value == shot.intra.value:
                ok_intra += 1
            if shot.inter is not None and best_shot.inter is not None \
                    and best_shot.inter.value == shot.inter.value:
                ok_inter += 1
    intra = ok_intra / total if (any_intra and total) else None
    inter = ok_inter / total if (any_inter and total) else None
    return intra, inter
