"""Synthetic multi-shot video synthesis with frame-accurate shot, transition,
and relation labels, plus curation, baseline detection, and evaluation."""

from .core import (
    Annotation,
    InterLabel,
    IntraLabel,
    Prediction,
    SchemaError,
    Shot,
    TRANSITION_FAMILIES,
    boundaries_of,
    load_annotation,
    save_annotation,
    validate_annotation,
)
from .media import Clip, ClipMeta, MediaError, load_clip, store_clip
from .procgen import GENERATOR_KINDS, procgen_clip
from .compositor import (
    CATALOG,
    ALL_SUBTYPES,
    CompositorError,
    TransitionSpec,
    apply_mask,
    compose,
    dissolve,
    fade,
    geometric,
    progress_schedule,
    render_transition,
    wipe_mask,
)
from .planner import (
    ClipPool,
    CompositionPlan,
    PlanConfig,
    PlannerError,
    PoolEntry,
    augment_offline,
    derive_annotation,
    make_sudden_jump,
    render_plan,
    sample_plan,
)
from .curation import (
    CurationConfig,
    CurationError,
    EmbeddingSequence,
    TrackSet,
    block_motion_tracks,
    hierarchical_kmeans,
    histogram_embedding,
    motion_strength,
    segment_by_similarity,
    semantic_dedup,
)
from .detect import DetectorConfig, DetectorError, detect_cuts, hist_distance
from .metrics import (
    EvalConfig,
    EvalReport,
    MetricsError,
    evaluate,
    range_prf,
    relation_acc,
    sudden_jump_acc,
    transition_iou,
)

__version__ = "0.1.0"
