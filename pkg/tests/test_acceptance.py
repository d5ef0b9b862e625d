"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion lines.
"""

import time

import numpy as np
import pytest

from shotforge.cli import main as cli_main
from shotforge.compositor import ALL_SUBTYPES, CATALOG, TransitionSpec, compose, wipe_mask
from shotforge.core import IntraLabel, validate_annotation
from shotforge.curation import (
    CurationConfig,
    EmbeddingSequence,
    hierarchical_kmeans,
    segment_by_similarity,
    semantic_dedup,
)
from shotforge.detect import DetectorConfig, detect_cuts
from shotforge.metrics import EvalConfig, evaluate, transition_iou
from shotforge.planner import (
    ClipPool,
    PlanConfig,
    PoolEntry,
    derive_annotation,
    make_sudden_jump,
    motion_percentiles,
    render_plan,
    sample_plan,
)
from shotforge.procgen import procgen_clip
from shotforge.media import Clip, store_clip

from tests.docgen import random_doc_pair
from tests.oracles import (
    clamped_poisson_mean,
    oracle_range_counts,
    oracle_rates,
    oracle_relation_acc,
    oracle_sudden_jump_acc,
    oracle_transition_iou,
)

W, H, FPS = 48, 36, 24.0


def criterion(name: str, ok: bool, detail: str = "") -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"{name}: {detail}"


def metadata_pool(n=16, frame_count=2400) -> ClipPool:
    """Entries only; enough for sampling paths that never touch pixels."""
    scores = [float(i) for i in range(n)]
    pcts = motion_percentiles(scores)
    return ClipPool(entries=[
        PoolEntry(path=f"mem://{i}", cluster_id=i % 4, motion_score=scores[i],
                  percentile=float(pcts[i]), frame_count=frame_count, fps=FPS,
                  width=W, height=H)
        for i in range(n)
    ])


@pytest.fixture(scope="module")
def rendered_pool():
    """Real procgen-backed pool with an in-memory loader."""
    clips = {}
    entries = []
    scores = []
    for i in range(8):
        clip = procgen_clip(
            "value_noise_pan" if i % 2 else "bouncing_shapes",
            5000 + i, 400, W, H, fps=FPS, motion_px_per_frame=1.0 + 0.3 * i,
        )
        clips[f"mem://{i}"] = clip
        scores.append(float(i))
    pcts = motion_percentiles(scores)
    for i in range(8):
        entries.append(
            PoolEntry(path=f"mem://{i}", cluster_id=i % 3, motion_score=scores[i],
                      percentile=float(pcts[i]), frame_count=400, fps=FPS,
                      width=W, height=H)
        )
    return ClipPool(entries=entries), clips.__getitem__


class TestAnnotationSoundness:
    def test_thousand_seeded_videos(self, rendered_pool):
        start = time.time()
        config = PlanConfig()
        pool = metadata_pool()
        failures = 0
        for seed in range(1000):
            ann = derive_annotation(sample_plan(config, pool, seed))
            if validate_annotation(ann):
                failures += 1
        # a rendered subset confirms pixels and labels share one accounting
        real_pool, loader = rendered_pool
        for seed in range(40):
            plan = sample_plan(config, real_pool, seed, video_id=f"r{seed}")
            clip, ann = render_plan(plan, config, real_pool, loader)
            assert clip.frame_count == ann.frame_count
            assert ann == derive_annotation(plan)
            if validate_annotation(ann):
                failures += 1
        elapsed = time.time() - start
        criterion(
            "annotation-soundness",
            failures == 0 and elapsed < 600,
            f"0 invalid of 1040 required (got {failures} invalid, {elapsed:.1f}s)",
        )


class TestCompositorEndpoints:
    def test_endpoint_identity_and_coverage(self):
        rng = np.random.default_rng(99)
        a = rng.integers(0, 256, size=(H, W, 3), dtype=np.uint8)
        b = rng.integers(0, 256, size=(H, W, 3), dtype=np.uint8)
        bad = []
        non_fade = [s for s in ALL_SUBTYPES if not s.startswith("fade.")]
        for subtype in non_fade:
            kwargs = {}
            short = subtype.split(".", 1)[1]
            if short in ("mosaic", "puzzle"):
                kwargs["grid"] = (3, 4)
            if short == "bar":
                kwargs["grid"] = (3, 1)
            for edge in ("hard", "soft"):
                spec = TransitionSpec(subtype, 8, edge=edge, feather_px=5, seed=4, **kwargs)
                if not np.array_equal(compose(a, b, 0.0, spec), a):
                    bad.append(f"{subtype}/{edge}@t=0")
                if not np.array_equal(compose(a, b, 1.0, spec), b):
                    bad.append(f"{subtype}/{edge}@t=1")
        criterion(
            "compositor-endpoint-identity",
            len(bad) == 0 and len(non_fade) == 32,
            f"{len(non_fade)} non-fade subtypes x 2 edges bit-exact (failures: {bad})",
        )

    def test_wipe_coverage(self):
        worst = 0.0
        monotone_ok = True
        for name in CATALOG[IntraLabel.WIPE]:
            subtype = f"wipe.{name}"
            means = []
            for t in np.linspace(0.0, 1.0, 21):
                mask = wipe_mask(subtype, float(t), W, H, grid=(3, 4), seed=2)
                means.append(float(mask.mean()))
                if name in ("left", "right", "up", "down"):
                    worst = max(worst, abs(means[-1] - float(t)))
            if means[0] != 0.0 or means[-1] != 1.0:
                monotone_ok = False
            if any(y < x - 1e-12 for x, y in zip(means, means[1:])):
                monotone_ok = False
        bound = 1.0 / min(W, H)
        criterion(
            "wipe-coverage",
            monotone_ok and worst <= bound,
            f"monotone, |mean-t| worst {worst:.5f} <= {bound:.5f} for unidirectional",
        )


class TestSynthDeterminism:
    def test_repeated_seed_byte_identical(self, tmp_path, rendered_pool):
        real_pool, loader = rendered_pool
        clips_dir = tmp_path / "clips"
        for i, entry in enumerate(real_pool.entries):
            clip = loader(entry.path)
            clip.source_id = f"clip-{i:05d}"
            store_clip(clip, clips_dir / clip.source_id)
            entry.path = str(clips_dir / clip.source_id)
        pool_path = tmp_path / "pool.json"
        real_pool.save(pool_path)

        outs = []
        for name in ("one", "two"):
            out = tmp_path / name
            code = cli_main(["synth", "--pool", str(pool_path), "--out", str(out),
                             "--count", "3", "--seed", "7"])
            assert code == 0
            outs.append(out)
        same = (outs[0] / "manifest.json").read_bytes() == (outs[1] / "manifest.json").read_bytes()
        for ann in sorted(outs[0].glob("*.ann.json")):
            same &= ann.read_bytes() == (outs[1] / ann.name).read_bytes()
        for raw in sorted(outs[0].glob("*/frames.rgb24")):
            same &= raw.read_bytes() == (outs[1] / raw.parent.name / raw.name).read_bytes()
        criterion("synth-determinism", same, "seed 7 twice: manifest, annotations, frames identical")


class TestSamplerConformance:
    def test_hundred_thousand_draws(self):
        config = PlanConfig(short_dense_prob=0.0)
        pool = metadata_pool()
        window = config.sudden_jump_motion_percentiles
        counts = []
        drawn_hard = 0
        drawn_total = 0
        jump_cut_violations = 0
        jump_window_violations = 0
        jumps = 0
        for seed in range(100_000):
            plan = sample_plan(config, pool, seed)
            counts.append(len(plan.segments))
            for j, event in enumerate(plan.events):
                drawn_total += 1
                if event.drawn_type == "hard_cut":
                    drawn_hard += 1
                if event.kind == "sudden_jump":
                    jumps += 1
                    if not (24 <= event.cut_len <= 40):
                        jump_cut_violations += 1
                    pct = pool.entries[plan.segments[j].entry_index].percentile
                    if not (window[0] <= pct <= window[1]):
                        jump_window_violations += 1

        mean = float(np.mean(counts))
        target = clamped_poisson_mean(config.poisson_lambda, *config.clip_count_range)
        hard_freq = drawn_hard / drawn_total

        rng = np.random.default_rng(0)
        clip = Clip(np.zeros((300, 8, 8, 3), dtype=np.uint8), FPS, "jump-src")
        standalone_ok = all(
            24 <= make_sudden_jump(clip, config, rng)[2] <= 40 for _ in range(10_000)
        )

        criterion(
            "sampler-clip-count",
            abs(mean - target) <= 0.1,
            f"mean {mean:.4f} vs analytic {target:.4f} over 100k plans",
        )
        criterion(
            "sampler-hard-cut-frequency",
            abs(hard_freq - 0.35) <= 0.01,
            f"drawn hard-cut frequency {hard_freq:.4f} over {drawn_total} boundaries",
        )
        criterion(
            "sampler-sudden-jump-bounds",
            jumps > 0 and jump_cut_violations == 0 and standalone_ok,
            f"{jumps} jump events, cut lengths always in [24,40] (plus 10k direct draws)",
        )
        criterion(
            "sampler-sudden-jump-window",
            jump_window_violations == 0,
            f"all {jumps} jump sources inside the [25,60] motion-percentile window",
        )


class TestMetricsOracle:
    def test_hand_worked_cases(self):
        from tests.test_metrics import TestTransitionIoU

        helper = TestTransitionIoU()
        mean, _ = transition_iou(*helper.wrap((20, 40), [(25, 45)]))
        criterion(
            "metrics-hand-case",
            mean == pytest.approx(16 / 26),
            f"IoU([20,40],[25,45]) = {mean:.6f} == 16/26",
        )

    def test_ten_thousand_randomized_pairs(self):
        start = time.time()
        rng = np.random.default_rng(20_26)
        config = EvalConfig()
        mismatches = 0
        for trial in range(10_000):
            gt, pred = random_doc_pair(rng, f"v{trial}")
            gt_set, pred_set = {gt.video_id: gt}, {pred.video_id: pred}
            report = evaluate(gt_set, pred_set, config)

            tp, fp, fn = oracle_range_counts(gt_set, pred_set, config.range_tolerance_frames)
            p, r, f1 = oracle_rates(tp, fp, fn)
            ok = report.counts["range"] == {"tp": tp, "fp": fp, "fn": fn}
            ok &= (report.range_precision, report.range_recall, report.range_f1) == (p, r, f1)

            o_iou, o_count = oracle_transition_iou(gt_set, pred_set, config.transition_tol_scale)
            ok &= report.counts["transition"]["count"] == o_count
            if o_iou is None:
                ok &= report.transition_iou is None
            else:
                ok &= abs(report.transition_iou - o_iou) < 1e-12

            o_sj, _ = oracle_sudden_jump_acc(gt_set, pred_set, config.sudden_jump_tolerance)
            ok &= report.sudden_jump_acc == o_sj

            o_intra, o_inter = oracle_relation_acc(gt_set, pred_set)
            ok &= report.intra_acc == o_intra and report.inter_acc == o_inter
            if not ok:
                mismatches += 1
        elapsed = time.time() - start
        criterion(
            "metrics-oracle-equivalence",
            mismatches == 0,
            f"10k randomized pairs, all five families exact ({elapsed:.1f}s)",
        )


class TestEndToEndBaseline:
    def test_hard_cut_recall_precision(self):
        start = time.time()
        # 50 clips, each confined to its own coarse histogram bin
        triples = [(i, j, k) for i in range(8) for j in range(8) for k in range(8)][7::10][:50]
        clips = {}
        entries = []
        for idx, (i, j, k) in enumerate(triples):
            base = (32 * i + 8, 32 * j + 8, 32 * k + 8)
            hi = (base[0] + 14, base[1] + 14, base[2] + 14)
            clip = procgen_clip(
                "value_noise_pan", 9000 + idx, 220, W, H, fps=FPS,
                palette=[base, hi], motion_px_per_frame=1.5,
            )
            clips[f"mem://{idx}"] = clip
            entries.append(
                PoolEntry(path=f"mem://{idx}", cluster_id=idx, motion_score=1.5,
                          percentile=50.0, frame_count=220, fps=FPS, width=W, height=H)
            )
        pool = ClipPool(entries=entries)
        config = PlanConfig(
            short_dense_prob=0.0,
            same_cluster_prob=0.0,
            sudden_jump_prob_on_hardcut=0.0,
            leading_fade_in_prob=0.0,
            subtitle_prob=0.0,
            lighting_prob=0.0,
            type_table={"hard_cut": 1.0},
        )
        gt_docs = {}
        pred_docs = {}
        detector = DetectorConfig()
        for index in range(100):
            vid = f"e2e{index:03d}"
            plan = sample_plan(config, pool, 31_000 + index, video_id=vid)
            clip, ann = render_plan(plan, config, pool, clips.__getitem__)
            gt_docs[vid] = ann
            pred = detect_cuts(clip, detector)
            pred.video_id = vid
            pred_docs[vid] = pred
        report = evaluate(gt_docs, pred_docs, EvalConfig(range_tolerance_frames=2))
        elapsed = time.time() - start
        criterion(
            "e2e-baseline",
            report.range_recall >= 0.95 and report.range_precision >= 0.90 and elapsed < 300,
            f"recall {report.range_recall:.4f} >= 0.95, precision "
            f"{report.range_precision:.4f} >= 0.90 on 100 videos ({elapsed:.1f}s)",
        )


class TestCurationCorrectness:
    def test_segmentation_exact_cuts(self):
        e = np.eye(3)

        def mix(c):  # unit vector at cosine c from e0
            return c * e[0] + np.sqrt(1 - c * c) * e[1]

        rows = [e[0]] * 10 + [mix(0.85)] * 10  # joint cosine 0.85 < 0.9
        rows += [np.sqrt(1 - 0.85**2) * e[1] + 0.0 * e[0] + 0.0 * e[2]] * 0
        seq = EmbeddingSequence(np.stack([r / np.linalg.norm(r) for r in rows]), 8, "s")
        got = segment_by_similarity(seq, CurationConfig(), fps=24.0)
        ok = got == [(0, 9 * 8 + 7), (10 * 8, 19 * 8 + 7)]
        criterion("curation-segmentation", ok, f"cut exactly at the sub-0.9 dip: {got}")

    def test_dedup_exact_removals(self):
        rng = np.random.default_rng(6)
        bases = []
        for _ in range(10):
            v = rng.normal(size=12)
            bases.append(v / np.linalg.norm(v))
        # keep bases well separated so only the planted copies collide
        kept_bases = []
        for v in bases:
            if all(abs(v @ u) < 0.7 for u in kept_bases):
                kept_bases.append(v)
        vectors = []
        planted = []
        for i, v in enumerate(kept_bases):
            vectors.append(v)
            if i % 2 == 0:  # plant a near-duplicate at cosine >= 0.95
                ortho = rng.normal(size=12)
                ortho -= (ortho @ v) * v
                ortho /= np.linalg.norm(ortho)
                c = 0.97
                dup = c * v + np.sqrt(1 - c * c) * ortho
                planted.append(len(vectors))
                vectors.append(dup)
        kept, dups = semantic_dedup(np.stack(vectors), 0.05)
        ok = sorted(dups.keys()) == planted and len(kept) == len(vectors) - len(planted)
        criterion(
            "curation-dedup",
            ok,
            f"removed exactly the {len(planted)} planted near-duplicates",
        )

    def test_kmeans_blob_purity(self):
        rng = np.random.default_rng(0)
        centers = [np.array(c, dtype=float) for c in
                   ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))]
        points = []
        truth = []
        for b, c in enumerate(centers):
            c = c / np.linalg.norm(c)
            for _ in range(40):
                v = c + rng.normal(scale=0.05, size=3)
                points.append(v / np.linalg.norm(v))
                truth.append(b)
        labels = hierarchical_kmeans(np.stack(points), branching=2, depth=2, seed=3,
                                     min_cluster_size=5)
        truth = np.array(truth)
        pure = all(len(set(labels[truth == b])) == 1 for b in range(4))
        distinct = len({int(labels[truth == b][0]) for b in range(4)}) == 4
        criterion(
            "curation-kmeans-purity",
            pure and distinct and (labels >= 0).all(),
            "4 separated blobs recovered with assignment purity 1.0",
        )
