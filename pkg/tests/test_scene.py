import json

import numpy as np
import pytest

from humanscene.errors import MissingObjectError, PreconditionError, SchemaError
from humanscene.geometry import ObjectBox, PointCloud
from humanscene.scene import Scene, SceneObject, load_scene, scene_from_dict, scene_to_dict
from humanscene.scenegraph import (
    Predicate,
    RelationTriplet,
    build_scene_graph,
    refer_expression,
)


def box_object(oid, label, center, size):
    center = np.asarray(center, dtype=float)
    return SceneObject(
        id=oid,
        label=label,
        box=ObjectBox(center=center, size=np.asarray(size, dtype=float)),
        cloud=PointCloud(center.reshape(1, 3)),
    )


class TestIngestion:
    def test_fixture_loads(self, demo_scene):
        assert demo_scene.id == "demo_room"
        assert len(demo_scene) == 7
        assert demo_scene.get("tv1").rgb is not None

    def test_duplicate_ids_rejected(self):
        a = box_object("x", "chair", (0, 0, 0.5), (1, 1, 1))
        b = box_object("x", "table", (2, 0, 0.5), (1, 1, 1))
        with pytest.raises(PreconditionError):
            Scene(id="s", objects=(a, b))

    def test_empty_scene_rejected(self):
        with pytest.raises(PreconditionError):
            Scene(id="s", objects=())

    def test_offending_object_named(self):
        payload = {
            "id": "s",
            "objects": [
                {
                    "id": "bad_one",
                    "label": "chair",
                    "box": {"center": [0, 0, 0], "size": [1, 1, 1]},
                    "points": [],
                }
            ],
        }
        with pytest.raises(SchemaError) as excinfo:
            scene_from_dict(payload)
        assert "bad_one" in str(excinfo.value)

    def test_color_length_mismatch_rejected(self):
        payload = {
            "id": "s",
            "objects": [
                {
                    "id": "tv",
                    "label": "tv",
                    "box": {"center": [0, 0, 0.5], "size": [1, 1, 1]},
                    "points": [[0, 0, 0], [1, 1, 1]],
                    "colors": [[0, 0, 0]],
                }
            ],
        }
        with pytest.raises(SchemaError):
            scene_from_dict(payload)

    def test_round_trip(self, tmp_path, demo_scene):
        path = tmp_path / "scene.json"
        path.write_text(json.dumps(scene_to_dict(demo_scene)))
        again = load_scene(path)
        assert [o.id for o in again.objects] == [o.id for o in demo_scene.objects]
        assert np.array_equal(again.get("chair1").cloud.points,
                              demo_scene.get("chair1").cloud.points)


class TestSceneGraph:
    def test_near_pair_emitted_once_lexicographic(self):
        scene = Scene(
            id="s",
            objects=(
                box_object("b_box", "box", (0.5, 0, 0.5), (1, 1, 1)),
                box_object("a_box", "box", (0, 0, 0.5), (1, 1, 1)),
            ),
        )
        triplets = build_scene_graph(scene)
        assert triplets == [RelationTriplet("a_box", Predicate.NEAR, "b_box")]

    def test_stacked_boxes_directed_pair(self):
        scene = Scene(
            id="s",
            objects=(
                box_object("base", "table", (0, 0, 0.5), (1, 1, 1)),
                box_object("top", "box", (0, 0, 1.5), (1, 1, 1)),
            ),
        )
        triplets = build_scene_graph(scene)
        assert RelationTriplet("top", Predicate.ABOVE, "base") in triplets
        assert RelationTriplet("base", Predicate.BELOW, "top") in triplets
        assert len(triplets) == 2

    def test_distant_boxes_unrelated(self):
        scene = Scene(
            id="s",
            objects=(
                box_object("a", "box", (0, 0, 0.5), (1, 1, 1)),
                box_object("b", "box", (10, 0, 0.5), (1, 1, 1)),
            ),
        )
        assert build_scene_graph(scene) == []

    def test_single_object_scene_empty(self):
        scene = Scene(id="s", objects=(box_object("a", "box", (0, 0, 0.5), (1, 1, 1)),))
        assert build_scene_graph(scene) == []

    def test_deterministic_and_well_formed(self, demo_scene):
        first = build_scene_graph(demo_scene)
        second = build_scene_graph(demo_scene)
        assert first == second
        ids = {obj.id for obj in demo_scene.objects}
        near_pairs = []
        for triplet in first:
            assert triplet.subject_id != triplet.object_id
            assert triplet.subject_id in ids and triplet.object_id in ids
            if triplet.predicate is Predicate.NEAR:
                assert triplet.subject_id < triplet.object_id
                near_pairs.append((triplet.subject_id, triplet.object_id))
        assert len(near_pairs) == len(set(near_pairs))
        above = {(t.subject_id, t.object_id) for t in first if t.predicate is Predicate.ABOVE}
        below = {(t.object_id, t.subject_id) for t in first if t.predicate is Predicate.BELOW}
        assert above == below

    def test_fixture_relations(self, demo_scene):
        triplets = set(
            (t.subject_id, t.predicate.value, t.object_id)
            for t in build_scene_graph(demo_scene)
        )
        assert ("tv1", "above", "cabinet1") in triplets
        assert ("cabinet1", "below", "tv1") in triplets
        assert ("chair1", "near", "table1") in triplets


class TestReferExpression:
    def test_near_sentence(self):
        scene = Scene(
            id="s",
            objects=(
                box_object("sofa1", "sofa", (0, 0, 0.5), (1, 1, 1)),
                box_object("chair9", "chair", (1, 0, 0.5), (1, 1, 1)),
            ),
        )
        triplet = RelationTriplet("sofa1", Predicate.NEAR, "chair9")
        assert refer_expression(triplet, scene) == "The sofa is near the chair."

    def test_above_sentence(self):
        scene = Scene(
            id="s",
            objects=(
                box_object("box1", "box", (0, 0, 1.5), (1, 1, 1)),
                box_object("table1", "table", (0, 0, 0.5), (1, 1, 1)),
            ),
        )
        triplet = RelationTriplet("box1", Predicate.ABOVE, "table1")
        assert refer_expression(triplet, scene) == "The box is above the table."

    def test_absent_id_rejected(self):
        scene = Scene(id="s", objects=(box_object("a", "box", (0, 0, 0.5), (1, 1, 1)),))
        with pytest.raises(MissingObjectError):
            refer_expression(RelationTriplet("a", Predicate.NEAR, "ghost"), scene)
