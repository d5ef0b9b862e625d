"""Command-line surface tying the pipeline together.

Subcommands: ``procgen`` (emit procedural clips), ``curate`` (clips or
imported embeddings/tracks -> pool.json), ``synth`` (pool -> videos +
annotations + manifest), ``detect`` (videos -> predictions),
``import-predictions`` (validate external prediction files), ``eval``
(ground truth + predictions -> report), and ``inspect`` (render review
strips).  All randomness flows from ``--seed``; no wall clock or OS entropy
reaches any artifact, so identical invocations produce identical bytes.

Exit codes: 0 success, 1 validation failure, 2 I/O failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .compositor import CompositorError
from .core import (
    SchemaError,
    dumps_document,
    load_annotation,
    save_annotation,
    validate_annotation,
)
from .curation import (
    CurationConfig,
    CurationError,
    block_motion_tracks,
    hierarchical_kmeans,
    histogram_embedding,
    load_embedding_file,
    motion_strength,
    semantic_dedup,
)
from .detect import DetectorConfig, DetectorError, detect_cuts
from .media import MediaError, load_clip, store_clip
from .metrics import EvalConfig, MetricsError, evaluate, report_csv
from .planner import (
    ClipPool,
    PlanConfig,
    PlannerError,
    PoolEntry,
    derive_annotation,
    motion_percentiles,
    render_plan,
    sample_plan,
)
from .procgen import GENERATOR_KINDS, procgen_clip
from .strips import save_strip

log = logging.getLogger("shotforge")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def child_seed(master: int, index: int) -> int:
    """Stable per-item seed; independent of worker count and ordering."""
    ss = np.random.SeedSequence(entropy=master, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# procgen

def cmd_procgen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = child_seed(args.seed, i)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
        kind = GENERATOR_KINDS[int(rng.integers(len(GENERATOR_KINDS)))]
        motion = float(rng.uniform(0.5, 4.0))
        clip = procgen_clip(
            kind,
            seed,
            frames=args.frames,
            width=args.width,
            height=args.height,
            fps=args.fps,
            motion_px_per_frame=motion,
        )
        clip.source_id = f"clip-{i:05d}"
        store_clip(clip, out / clip.source_id)
        log.info("procgen %s (%s, motion %.2f)", clip.source_id, kind, motion)
    print(f"wrote {args.count} clips to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# curate

def _clip_dirs(root: Path) -> list[Path]:
    dirs = sorted(p for p in root.iterdir() if (p / "meta.json").is_file())
    if not dirs:
        raise CurationError(f"no clip containers (meta.json) found under {root}")
    return dirs


def cmd_curate(args) -> int:
    config = CurationConfig(
        eps_dup=args.eps_dup,
        cluster_target=args.clusters,
        min_cluster_size=args.min_cluster_size,
    )
    config.validate()
    clip_dirs = _clip_dirs(Path(args.clips))

    embeddings_by_id: dict[str, np.ndarray] = {}
    if args.embeddings:
        for path in sorted(Path(args.embeddings).glob("*.emb.json")):
            seq = load_embedding_file(path)
            embeddings_by_id[seq.video_id] = seq.vectors[0]

    vectors = []
    motions = []
    metas = []
    for clip_dir in clip_dirs:
        clip = load_clip(clip_dir)
        name = clip_dir.name
        vec = embeddings_by_id.get(name)
        if vec is None:
            vec = histogram_embedding(clip.frames[0])
        tracks = block_motion_tracks(clip, grid_density=args.grid_density, stride=args.stride)
        vectors.append(vec)
        motions.append(motion_strength(tracks))
        metas.append((name, clip))
        log.info("curate %s: motion %.3f", name, motions[-1])

    kept, _dups = semantic_dedup(np.stack(vectors), config.eps_dup)
    log.info("dedup kept %d of %d clips", len(kept), len(vectors))

    branching = max(2, int(np.ceil(np.sqrt(config.cluster_target))))
    labels = hierarchical_kmeans(
        np.stack([vectors[i] for i in kept]),
        branching=branching,
        depth=2,
        seed=args.seed,
        min_cluster_size=config.min_cluster_size,
    )

    surviving = [(kept[i], int(labels[i])) for i in range(len(kept)) if labels[i] >= 0]
    if args.min_motion_percentile is not None:
        pcts_all = motion_percentiles([motions[i] for i, _ in surviving])
        surviving = [
            pair for pair, pct in zip(surviving, pcts_all)
            if pct >= args.min_motion_percentile
        ]
    if not surviving:
        raise CurationError(
            "curation discarded every clip; lower --min-cluster-size or --clusters"
        )
    pcts = motion_percentiles([motions[i] for i, _ in surviving])
    entries = []
    for (idx, cluster), pct in zip(surviving, pcts):
        name, clip = metas[idx]
        entries.append(
            PoolEntry(
                path=str(Path(args.clips) / name),
                cluster_id=cluster,
                motion_score=motions[idx],
                percentile=float(pct),
                frame_count=clip.frame_count,
                fps=clip.fps,
                width=clip.width,
                height=clip.height,
            )
        )
    ClipPool(entries=entries).save(args.out)
    print(f"pool of {len(entries)} clips ({len(clip_dirs) - len(entries)} dropped) -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# synth

def _synth_one(task) -> dict:
    index, master_seed, pool_path, config_dict, out_dir, annotations_only = task
    pool = ClipPool.load(pool_path)
    config = PlanConfig.from_json_dict(config_dict)
    seed = child_seed(master_seed, index)
    video_id = f"v{index:05d}"
    plan = sample_plan(config, pool, seed, video_id=video_id)
    out = Path(out_dir)
    if annotations_only:
        annotation = derive_annotation(plan)
    else:
        clip, annotation = render_plan(plan, config, pool)
        store_clip(clip, out / video_id)
    save_annotation(annotation, out / f"{video_id}.ann.json")
    return {
        "video_id": video_id,
        "seed": seed,
        "frame_count": annotation.frame_count,
        "shot_count": len(annotation.shots),
        "short_dense": plan.short_dense,
        "warnings": plan.warnings,
    }


def cmd_synth(args) -> int:
    config = PlanConfig.load(args.config) if args.config else PlanConfig()
    config.validate()
    pool = ClipPool.load(args.pool)
    width, height, fps = pool.check_uniform()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    tasks = [
        (i, args.seed, args.pool, config.to_json_dict(), str(out), args.annotations_only)
        for i in range(args.count)
    ]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool_exec:
            rows = list(pool_exec.map(_synth_one, tasks))
    else:
        rows = [_synth_one(t) for t in tasks]

    manifest = {
        "seed": args.seed,
        "count": args.count,
        "fps": fps,
        "width": width,
        "height": height,
        "type_table": config.normalized_type_table(),
        "videos": rows,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    print(f"synthesized {args.count} videos -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# detect / import / eval / inspect

def _detect_one(task) -> str:
    video_dir, out_dir, threshold, min_scene = task
    clip = load_clip(video_dir)
    config = DetectorConfig(threshold=threshold, min_scene_frames=min_scene)
    pred = detect_cuts(clip, config)
    pred.video_id = Path(video_dir).name
    path = Path(out_dir) / f"{pred.video_id}.pred.json"
    save_annotation(pred, path)
    return pred.video_id


def cmd_detect(args) -> int:
    videos = _clip_dirs(Path(args.videos))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(str(v), str(out), args.threshold, args.min_scene) for v in videos]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool_exec:
            done = list(pool_exec.map(_detect_one, tasks))
    else:
        done = [_detect_one(t) for t in tasks]
    print(f"detected cuts in {len(done)} videos -> {out}")
    return EXIT_OK


def cmd_import_predictions(args) -> int:
    src = Path(args.src)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = sorted(src.glob("*.json"))
    if not files:
        raise MediaError(f"no prediction files found under {src}")
    for path in files:
        doc = load_annotation(path)
        problems = validate_annotation(doc)
        if problems:
            raise SchemaError(f"{path}: " + "; ".join(problems))
        (out / f"{doc.video_id}.pred.json").write_text(
            dumps_document(doc), encoding="utf-8"
        )
    print(f"imported {len(files)} prediction files -> {out}")
    return EXIT_OK


def _load_doc_dir(root: Path, suffix: str) -> dict:
    docs = {}
    for path in sorted(root.glob(f"*{suffix}")):
        doc = load_annotation(path)
        docs[doc.video_id] = doc
    if not docs:
        raise MediaError(f"no *{suffix} documents found under {root}")
    return docs


def cmd_eval(args) -> int:
    gt = _load_doc_dir(Path(args.gt), ".ann.json")
    pred = _load_doc_dir(Path(args.pred), ".pred.json")
    config = EvalConfig(range_tolerance_frames=args.tolerance)
    report = evaluate(gt, pred, config)
    report.save(args.out)
    if args.csv:
        Path(args.csv).write_text(report_csv(report), encoding="utf-8")

    def fmt(v):
        return "null" if v is None else f"{v:.4f}"

    print(f"transition_iou   {fmt(report.transition_iou)}")
    print(f"sudden_jump_acc  {fmt(report.sudden_jump_acc)}")
    print(f"range_precision  {fmt(report.range_precision)}")
    print(f"range_recall     {fmt(report.range_recall)}")
    print(f"range_f1         {fmt(report.range_f1)}")
    print(f"intra_acc        {fmt(report.intra_acc)}")
    print(f"inter_acc        {fmt(report.inter_acc)}")
    print(f"report -> {args.out}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    clip = load_clip(args.video)
    annotation = load_annotation(args.ann)
    problems = validate_annotation(annotation)
    if problems:
        raise SchemaError(f"{args.ann}: " + "; ".join(problems))
    path = save_strip(clip, annotation, args.out, frames_per_shot=args.frames_per_shot,
                      scale=args.scale)
    print(f"strip -> {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    parser = _Parser(prog="shotforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("procgen", help="emit procedural clips")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=48)
    p.add_argument("--frames", type=int, default=360)
    p.add_argument("--fps", type=float, default=24.0)
    p.set_defaults(func=cmd_procgen)

    p = sub.add_parser("curate", help="build pool.json from clips")
    p.add_argument("--clips", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embeddings", help="directory of *.emb.json overriding the built-in provider")
    p.add_argument("--clusters", type=int, default=32)
    p.add_argument("--min-cluster-size", type=int, default=1)
    p.add_argument("--eps-dup", type=float, default=0.05)
    p.add_argument("--grid-density", type=int, default=5)
    p.add_argument("--stride", type=int, default=3)
    p.add_argument("--min-motion-percentile", type=float, default=None,
                   help="optionally drop the slowest clips globally")
    p.set_defaults(func=cmd_curate)

    p = sub.add_parser("synth", help="render synthetic multi-shot videos")
    p.add_argument("--pool", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="synth.config.json overriding defaults")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--annotations-only", action="store_true",
                   help="emit labels without rendering pixels")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("detect", help="run the histogram baseline detector")
    p.add_argument("--videos", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--min-scene", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("import-predictions", help="validate and normalize external predictions")
    p.add_argument("--src", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_import_predictions)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("--gt", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out", default="eval.report.json")
    p.add_argument("--csv", help="also write the per-type IoU breakdown")
    p.add_argument("--tolerance", type=int, default=2)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect", help="render a review strip for one video")
    p.add_argument("--video", required=True)
    p.add_argument("--ann", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--frames-per-shot", type=int, default=8)
    p.add_argument("--scale", type=int, default=1)
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("SHOTFORGE_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, PlannerError, CompositorError, CurationError,
            DetectorError, MetricsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (MediaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
