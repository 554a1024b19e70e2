import math

import numpy as np
import pytest

from humanscene.annotate import annotate_frame, detect_contacts
from humanscene.auxlabels import (
    ActivityVocab,
    AuxLabels,
    SpatialRelation8,
    activity_label,
    aux_labels_from_json,
    aux_labels_to_json,
    build_aux_labels,
    contact_label_matrix,
    knearest_object_indices,
    knn_matrix,
    spatial_relation_label,
    spatial_relation_matrix,
)
from humanscene.config import EngineConfig
from humanscene.errors import PreconditionError, UnknownActivityError
from humanscene.geometry import horizontal_distance
from humanscene.motion import JointId, MotionSequence, PoseFrame, frame_location

from test_annotate import center_object
from test_motion import make_frame
from humanscene.scene import Scene


class TestSpatialRelationLabel:
    def test_front_near(self):
        frame = make_frame()
        label = spatial_relation_label(frame, center_object("o", [1.0, 0.0, 0.5]))
        assert label is SpatialRelation8.FRONT_NEAR

    def test_back_far(self):
        frame = make_frame()
        label = spatial_relation_label(frame, center_object("o", [-5.0, 0.0, 0.5]))
        assert label is SpatialRelation8.BACK_FAR

    def test_matches_sector_times_bucket_oracle(self):
        rng = np.random.default_rng(43)
        config = EngineConfig()
        frame = make_frame()  # pelvis at origin (xy), facing +x
        quarter = math.pi / 4
        for _ in range(1000):
            theta = rng.uniform(-math.pi, math.pi)
            radius = rng.uniform(0.05, 6.0)
            center = [radius * math.cos(theta), radius * math.sin(theta), 0.5]
            got = spatial_relation_label(frame, center_object("o", center), config)
            # Independent recomputation from raw angle and distance.
            if -quarter < theta <= quarter:
                sector = "front"
            elif quarter < theta <= 3 * quarter:
                sector = "left"
            elif -3 * quarter < theta <= -quarter:
                sector = "right"
            else:
                sector = "back"
            bucket = "near" if radius <= config.theta_prox_m else "far"
            assert got.name.lower() == f"{sector}_{bucket}"

    def test_direction_marginal_is_uniform(self):
        rng = np.random.default_rng(47)
        frame = make_frame()
        config = EngineConfig()
        counts = {name: 0 for name in ("front", "left", "right", "back")}
        samples = 100_000
        radius = 3.0
        angles = rng.uniform(-math.pi, math.pi, size=samples)
        for theta in angles:
            label = spatial_relation_label(
                frame,
                center_object("o", [radius * math.cos(theta), radius * math.sin(theta), 0.5]),
                config,
            )
            counts[label.name.split("_")[0].lower()] += 1
        for name, count in counts.items():
            assert abs(count / samples - 0.25) <= 0.02, name


class TestContactLabelMatrix:
    def test_all_zero_when_nothing_close(self):
        motion = MotionSequence(
            id="m", frames=tuple(make_frame(t) for t in range(4)), fps=30.0
        )
        scene = Scene(id="s", objects=(center_object("far", [9.0, 9.0, 9.0]),))
        bits = contact_label_matrix([], scene, motion)
        assert bits.shape == (1, 4, 22)
        assert not bits.any()

    def test_single_bit(self):
        frames = []
        for t in range(8):
            frame = make_frame(t)
            if t == 7:
                joints = frame.joints.copy()
                joints[JointId.LEFT_WRIST] = [5.0, 5.0, 1.0]
                frame = PoseFrame(joints, t)
            frames.append(frame)
        motion = MotionSequence(id="m", frames=tuple(frames), fps=30.0)
        scene = Scene(id="s", objects=(center_object("obj3", [5.0, 5.0, 1.05]),))
        bits = contact_label_matrix([], scene, motion)
        assert bits.sum() == 1
        assert bits[0, 7, int(JointId.LEFT_WRIST)]

    def test_consistent_with_per_frame_recomputation(self, demo_scene, demo_motion,
                                                      default_config):
        annotations = [
            annotate_frame(demo_motion[t], demo_scene, default_config)
            for t in (0, 30, 39)
        ]
        bits = contact_label_matrix(annotations, demo_scene, demo_motion, default_config)
        object_index = {obj.id: i for i, obj in enumerate(demo_scene.objects)}
        total = 0
        for t in range(len(demo_motion)):
            contacts = detect_contacts(demo_motion[t], demo_scene,
                                       default_config.epsilon_m)
            total += len(contacts)
            expected = np.zeros((len(demo_scene), 22), dtype=bool)
            for contact in contacts:
                expected[object_index[contact.object_id], int(contact.joint)] = True
            assert np.array_equal(bits[:, t, :], expected), f"frame {t}"
        assert bits.sum() == total

    def test_out_of_range_annotation_rejected(self, demo_scene, demo_motion):
        annotation = annotate_frame(demo_motion[0], demo_scene)
        bad = type(annotation)(
            frame_index=len(demo_motion),
            contacts=annotation.contacts,
            positions=annotation.positions,
            betweens=annotation.betweens,
        )
        with pytest.raises(PreconditionError):
            contact_label_matrix([bad], demo_scene, demo_motion)


class TestKNearest:
    def test_two_of_three(self):
        frame = make_frame()
        scene = Scene(
            id="s",
            objects=(
                center_object("a", [1.0, 0.0, 0.5]),
                center_object("b", [2.0, 0.0, 0.5]),
                center_object("c", [3.0, 0.0, 0.5]),
            ),
        )
        assert knearest_object_indices(frame, scene, 2) == [0, 1]

    def test_clamped_to_scene_size(self):
        frame = make_frame()
        scene = Scene(
            id="s",
            objects=tuple(center_object(f"o{i}", [i + 1.0, 0.0, 0.5]) for i in range(3)),
        )
        assert knearest_object_indices(frame, scene, 10) == [0, 1, 2]

    def test_ties_break_lexicographically(self):
        frame = make_frame()
        scene = Scene(
            id="s",
            objects=(
                center_object("zeta", [0.0, 2.0, 0.5]),
                center_object("alpha", [2.0, 0.0, 0.5]),
            ),
        )
        assert knearest_object_indices(frame, scene, 2) == [1, 0]

    def test_matches_full_sort_oracle(self):
        rng = np.random.default_rng(53)
        for trial in range(50):
            frame = make_frame(pelvis=tuple(rng.uniform(-2, 2, size=2)) + (0.95,))
            objects = tuple(
                center_object(f"o{i}", [*rng.uniform(-4, 4, size=2), 0.5])
                for i in range(rng.integers(1, 9))
            )
            scene = Scene(id="s", objects=objects)
            k = int(rng.integers(1, 6))
            pelvis = frame_location(frame)
            ranked = sorted(
                range(len(objects)),
                key=lambda i: (
                    horizontal_distance(pelvis, objects[i].box.center),
                    objects[i].id,
                ),
            )
            got = knearest_object_indices(frame, scene, k)
            assert got == ranked[: min(k, len(objects))]
            distances = [
                horizontal_distance(pelvis, objects[i].box.center) for i in got
            ]
            assert distances == sorted(distances)
            assert len(set(got)) == len(got)


class TestActivityLabel:
    def test_exact_match(self):
        vocab = ActivityVocab(("walk", "sit"))
        assert activity_label("sit", vocab) == 1

    def test_unknown_with_suggestions(self):
        vocab = ActivityVocab(("walk", "sit", "stand"))
        with pytest.raises(UnknownActivityError) as excinfo:
            activity_label("sat", vocab)
        assert "sit" in excinfo.value.suggestions

    def test_round_trip_identity(self):
        vocab = ActivityVocab(("walk", "sit", "stand up", "lie down"))
        for index, name in enumerate(vocab.names):
            assert activity_label(vocab.name(index), vocab) == index

    def test_vocab_invariants(self):
        with pytest.raises(PreconditionError):
            ActivityVocab(())
        with pytest.raises(PreconditionError):
            ActivityVocab(("a", "a"))


class TestAuxLabelsBundle:
    def test_shapes_and_serialization_round_trip(self, demo_scene, demo_motion,
                                                 default_config):
        vocab = ActivityVocab(("walk", "sit"))
        labels = build_aux_labels("sit", vocab, demo_motion, demo_scene, default_config)
        n, t = len(demo_scene), len(demo_motion)
        assert labels.spatial.shape == (n, t)
        assert labels.contact.shape == (n, t, 22)
        assert labels.knn.shape == (t, default_config.k_nearest)
        assert labels.activity == 1

        text = aux_labels_to_json(labels, default_config.content_hash())
        again, config_hash = aux_labels_from_json(text)
        assert config_hash == default_config.content_hash()
        assert again.activity == labels.activity
        assert np.array_equal(again.spatial, labels.spatial)
        assert np.array_equal(again.contact, labels.contact)
        assert np.array_equal(again.knn, labels.knn)

    def test_spatial_matrix_matches_scalar_calls(self, demo_scene, demo_motion,
                                                 default_config):
        matrix = spatial_relation_matrix(demo_motion, demo_scene, default_config)
        for t in (0, 17, 39):
            for i, obj in enumerate(demo_scene.objects):
                assert matrix[i, t] == int(
                    spatial_relation_label(demo_motion[t], obj, default_config)
                )

    def test_bad_knn_rows_rejected(self):
        with pytest.raises(PreconditionError):
            AuxLabels(
                activity=0,
                spatial=np.zeros((2, 3), dtype=np.int64),
                contact=np.zeros((2, 3, 22), dtype=bool),
                knn=np.array([[0, 0], [0, 1], [1, 0]]),
            )

    def test_knn_matrix_rows(self, demo_scene, demo_motion, default_config):
        matrix = knn_matrix(demo_motion, demo_scene, default_config.k_nearest)
        assert matrix.shape == (len(demo_motion), default_config.k_nearest)
