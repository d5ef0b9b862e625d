import pytest
from hypothesis import given, strategies as st

from shotforge.core import (
    Annotation,
    InterLabel,
    IntraLabel,
    SchemaError,
    Shot,
    boundaries_of,
    dumps_document,
    load_annotation,
    loads_document,
    save_annotation,
    validate_annotation,
)


def make_annotation(lengths, frame_count=None, video_id="vid"):
    shots = []
    pos = 0
    for i, n in enumerate(lengths):
        shots.append(
            Shot(
                start=pos,
                end=pos + n - 1,
                intra=IntraLabel.GENERAL,
                inter=InterLabel.NEW_START if i == 0 else InterLabel.HARD_CUT,
            )
        )
        pos += n
    return Annotation(video_id=video_id, fps=24.0, frame_count=frame_count or pos, shots=shots)


class TestValidate:
    def test_minimal_valid(self):
        ann = Annotation(
            "v", 24.0, 100,
            [Shot(0, 99, IntraLabel.GENERAL, InterLabel.NEW_START)],
        )
        assert validate_annotation(ann) == []

    def test_gap(self):
        ann = Annotation(
            "v", 24.0, 21,
            [
                Shot(0, 10, IntraLabel.GENERAL, InterLabel.NEW_START),
                Shot(12, 20, IntraLabel.GENERAL, InterLabel.HARD_CUT),
            ],
        )
        assert any("gap between shot 0 and shot 1" in p for p in validate_annotation(ann))

    def test_overlap(self):
        ann = Annotation(
            "v", 24.0, 21,
            [
                Shot(0, 10, IntraLabel.GENERAL, InterLabel.NEW_START),
                Shot(9, 20, IntraLabel.GENERAL, InterLabel.HARD_CUT),
            ],
        )
        assert any("overlap between shot 0 and shot 1" in p for p in validate_annotation(ann))

    def test_new_start_at_non_first(self):
        ann = Annotation(
            "v", 24.0, 21,
            [
                Shot(0, 10, IntraLabel.GENERAL, InterLabel.NEW_START),
                Shot(11, 20, IntraLabel.GENERAL, InterLabel.NEW_START),
            ],
        )
        assert any("new_start at non-first shot 1" in p for p in validate_annotation(ann))

    def test_first_shot_must_be_new_start(self):
        ann = Annotation(
            "v", 24.0, 10,
            [Shot(0, 9, IntraLabel.GENERAL, InterLabel.HARD_CUT)],
        )
        assert any("expected new_start" in p for p in validate_annotation(ann))

    def test_unlabeled_prediction_passes_contiguity_only(self):
        ann = Annotation("v", 24.0, 10, [Shot(0, 4, confidence=None), Shot(5, 9, confidence=None)])
        assert validate_annotation(ann) == []

    def test_bad_confidence(self):
        ann = Annotation(
            "v", 24.0, 10,
            [Shot(0, 9, IntraLabel.GENERAL, InterLabel.NEW_START, confidence=0.0)],
        )
        assert any("confidence" in p for p in validate_annotation(ann))

    def test_wrong_last_end(self):
        ann = make_annotation([10, 10], frame_count=30)
        assert any("last shot ends" in p for p in validate_annotation(ann))

    def test_inverted_range(self):
        ann = Annotation(
            "v", 24.0, 10,
            [Shot(0, 9, IntraLabel.GENERAL, InterLabel.NEW_START)],
        )
        ann.shots[0].start, ann.shots[0].end = 5, 3
        problems = validate_annotation(ann)
        assert any("start 5 > end 3" in p for p in problems)


class TestBoundaries:
    def test_last_end_excluded(self):
        ann = make_annotation([11, 40, 49])  # ends at 10, 50, 99
        assert boundaries_of(ann) == [10, 50]

    def test_single_shot_no_cuts(self):
        ann = make_annotation([50])
        assert boundaries_of(ann) == []

    def test_four_shots(self):
        ann = make_annotation([4, 4, 4, 4])  # ends 3, 7, 11, 15
        assert boundaries_of(ann) == [3, 7, 11]

    def test_invalid_doc_rejected(self):
        ann = make_annotation([10, 10], frame_count=30)
        with pytest.raises(SchemaError):
            boundaries_of(ann)

    def test_strictly_increasing_within_range(self):
        ann = make_annotation([7, 9, 13, 21])
        cuts = boundaries_of(ann)
        assert cuts == sorted(set(cuts))
        assert all(0 <= c <= ann.frame_count - 2 for c in cuts)


class TestSerialization:
    def test_round_trip_file(self, tmp_path):
        ann = make_annotation([10, 20, 30])
        ann.shots[1].intra = IntraLabel.DISSOLVE
        ann.shots[1].subtype = "dissolve.transparent"
        ann.shots[1].params = {"duration_frames": 20}
        path = tmp_path / "v.ann.json"
        save_annotation(ann, path)
        assert load_annotation(path) == ann

    def test_unknown_fields_ignored(self):
        doc = loads_document(
            '{"video_id": "v", "fps": 24.0, "frame_count": 10, "future_field": 1,'
            ' "shots": [{"start": 0, "end": 9, "mystery": true}]}'
        )
        assert doc.frame_count == 10
        assert doc.shots[0].confidence is None
        assert "future_field" not in dumps_document(doc)

    def test_prediction_omits_confidence(self):
        pred = Annotation("v", 24.0, 10, [Shot(0, 9, confidence=None)])
        assert "confidence" not in dumps_document(pred)

    def test_missing_field_raises(self):
        with pytest.raises(SchemaError):
            loads_document('{"video_id": "v", "fps": 24.0, "shots": []}')


@st.composite
def annotations(draw):
    lengths = draw(st.lists(st.integers(min_value=1, max_value=40), min_size=1, max_size=8))
    shots = []
    pos = 0
    intras = list(IntraLabel)
    for i, n in enumerate(lengths):
        intra = draw(st.sampled_from(intras))
        inter = InterLabel.NEW_START if i == 0 else draw(
            st.sampled_from([InterLabel.TRANSITION, InterLabel.HARD_CUT, InterLabel.SUDDEN_JUMP])
        )
        conf = draw(st.floats(min_value=0.05, max_value=1.0))
        shots.append(Shot(pos, pos + n - 1, intra, inter, confidence=round(conf, 3)))
        pos += n
    return Annotation("fuzz", 24.0, pos, shots)


class TestProperties:
    @given(annotations())
    def test_round_trip_identity(self, ann):
        assert loads_document(dumps_document(ann)) == ann

    @given(annotations())
    def test_lengths_sum_to_frame_count(self, ann):
        assert validate_annotation(ann) == []
        assert sum(s.length for s in ann.shots) == ann.frame_count

    @given(annotations())
    def test_boundary_positions(self, ann):
        cuts = boundaries_of(ann)
        assert cuts == sorted(cuts)
        assert len(set(cuts)) == len(cuts)
        assert all(0 <= c <= ann.frame_count - 2 for c in cuts)
