"""Random valid document generator shared by metric tests."""

from __future__ import annotations

import numpy as np

from shotforge.core import Annotation, InterLabel, IntraLabel, Shot

_NON_FIRST_INTER = [InterLabel.TRANSITION, InterLabel.HARD_CUT, InterLabel.SUDDEN_JUMP]


def random_doc(
    rng: np.random.Generator,
    video_id: str,
    frame_count: int,
    max_shots: int = 10,
    labeled: bool = True,
) -> Annotation:
    n_shots = int(rng.integers(1, max_shots + 1))
    n_cuts = min(n_shots - 1, frame_count - 1)
    cuts = sorted(rng.choice(frame_count - 1, size=n_cuts, replace=False).tolist()) if n_cuts else []
    starts = [0] + [c + 1 for c in cuts]
    ends = cuts + [frame_count - 1]
    shots = []
    for i, (s, e) in enumerate(zip(starts, ends)):
        if labeled:
            intra = list(IntraLabel)[int(rng.integers(len(IntraLabel)))]
            inter = InterLabel.NEW_START if i == 0 else _NON_FIRST_INTER[int(rng.integers(3))]
            conf = round(float(rng.uniform(0.25, 1.0)), 3)
            shots.append(Shot(s, e, intra, inter, confidence=conf))
        else:
            shots.append(Shot(s, e, confidence=None))
    return Annotation(video_id=video_id, fps=24.0, frame_count=frame_count, shots=shots)


def random_doc_pair(rng: np.random.Generator, video_id: str, pred_labeled: bool | None = None):
    frame_count = int(rng.integers(10, 201))
    gt = random_doc(rng, video_id, frame_count, labeled=True)
    if pred_labeled is None:
        pred_labeled = bool(rng.random() < 0.5)
    pred = random_doc(rng, video_id, frame_count, labeled=pred_labeled)
    return gt, pred
