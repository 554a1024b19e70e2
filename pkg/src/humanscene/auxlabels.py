"""Auxiliary supervision targets: activity index, 8-way spatial relation per
object/frame, per-joint contact bits, and k-nearest object indices.

The 8 spatial categories are the four facing sectors crossed with a near/far
proximity split (near is <= ``theta_prox_m``); the taxonomy is versioned in
config so regenerated training targets stay reproducible.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .annotate import (
    FrameAnnotation,
    OrientationCategory,
    bearing,
    detect_contacts,
    directional_category,
)
from .config import EngineConfig
from .errors import PreconditionError, SchemaError, UnknownActivityError
from .geometry import horizontal_distance
from .motion import JOINT_COUNT, MotionSequence, PoseFrame, frame_location
from .scene import Scene, SceneObject

AUXLABELS_SCHEMA_VERSION = "1"


class SpatialRelation8(IntEnum):
    FRONT_NEAR = 0
    FRONT_FAR = 1
    LEFT_NEAR = 2
    LEFT_FAR = 3
    RIGHT_NEAR = 4
    RIGHT_FAR = 5
    BACK_NEAR = 6
    BACK_FAR = 7


_SECTOR_BASE = {
    OrientationCategory.FACING_TOWARDS: SpatialRelation8.FRONT_NEAR,
    OrientationCategory.ON_LEFT: SpatialRelation8.LEFT_NEAR,
    OrientationCategory.ON_RIGHT: SpatialRelation8.RIGHT_NEAR,
    OrientationCategory.FACING_AWAY: SpatialRelation8.BACK_NEAR,
}


@dataclass(frozen=True)
class ActivityVocab:
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise PreconditionError("activity vocabulary must be non-empty")
        if len(set(self.names)) != len(self.names):
            raise PreconditionError("activity names must be unique")

    def __len__(self) -> int:
        return len(self.names)

    def name(self, index: int) -> str:
        return self.names[index]


def _edit_distance(a: str, b: str) -> int:
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def activity_label(name: str, vocab: ActivityVocab) -> int:
    """Exact-match index; unknown names raise with the closest vocab entries."""
    try:
        return vocab.names.index(name)
    except ValueError:
        ranked = sorted(vocab.names, key=lambda entry: (_edit_distance(name, entry), entry))
        raise UnknownActivityError(name, ranked[:3]) from None


def spatial_relation_label(
    frame: PoseFrame, obj: SceneObject, config: EngineConfig | None = None
) -> SpatialRelation8:
    """Facing sector crossed with a near/far split; the AT disk is disabled here.

    An object centered exactly on the pelvis has no bearing; it counts as
    front by convention (and is trivially near).
    """
    config = config or EngineConfig()
    pelvis = frame_location(frame)
    distance = horizontal_distance(pelvis, obj.box.center)
    if distance == 0.0:
        return SpatialRelation8.FRONT_NEAR
    angle, _ = bearing(frame, obj, config)
    base = _SECTOR_BASE[directional_category(angle)]
    near = distance <= config.theta_prox_m
    return SpatialRelation8(int(base) + (0 if near else 1))


def spatial_relation_matrix(
    motion: MotionSequence, scene: Scene, config: EngineConfig | None = None
) -> np.ndarray:
    """(N, T) int matrix of :class:`SpatialRelation8` values."""
    config = config or EngineConfig()
    matrix = np.empty((len(scene), len(motion)), dtype=np.int64)
    for t, frame in enumerate(motion):
        for i, obj in enumerate(scene.objects):
            matrix[i, t] = int(spatial_relation_label(frame, obj, config))
    return matrix


def contact_label_matrix(
    annotations: list[FrameAnnotation],
    scene: Scene,
    motion: MotionSequence,
    config: EngineConfig | None = None,
) -> np.ndarray:
    """(N, T, 22) contact bits; frames missing from ``annotations`` are computed."""
    config = config or EngineConfig()
    total = len(motion)
    by_frame = {a.frame_index: a for a in annotations}
    for annotation in annotations:
        if not 0 <= annotation.frame_index < total:
            raise PreconditionError(
                f"annotation frame {annotation.frame_index} outside motion of length {total}"
            )
    object_index = {obj.id: i for i, obj in enumerate(scene.objects)}
    bits = np.zeros((len(scene), total, JOINT_COUNT), dtype=bool)
    for t in range(total):
        annotation = by_frame.get(t)
        contacts = (
            annotation.contacts
            if annotation is not None
            else detect_contacts(motion[t], scene, config.epsilon_m)
        )
        for contact in contacts:
            try:
                i = object_index[contact.object_id]
            except KeyError:
                raise PreconditionError(
                    f"frame {t}: contact references unknown object {contact.object_id!r}"
                ) from None
            bits[i, t, int(contact.joint)] = True
    return bits


def knearest_object_indices(frame: PoseFrame, scene: Scene, k: int) -> list[int]:
    """Indices of the min(k, N) horizontally closest objects, by distance then id."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    pelvis = frame_location(frame)
    ranked = sorted(
        range(len(scene)),
        key=lambda i: (
            horizontal_distance(pelvis, scene.objects[i].box.center),
            scene.objects[i].id,
        ),
    )
    return ranked[: min(k, len(scene))]


def knn_matrix(motion: MotionSequence, scene: Scene, k: int) -> np.ndarray:
    """(T, min(k, N)) object-index matrix, one row per frame."""
    return np.array(
        [knearest_object_indices(frame, scene, k) for frame in motion], dtype=np.int64
    )


@dataclass(frozen=True, eq=False)
class AuxLabels:
    activity: int  # index into the vocabulary
    spatial: np.ndarray  # (N, T) SpatialRelation8 values
    contact: np.ndarray  # (N, T, 22) bits
    knn: np.ndarray  # (T, k) object indices

    def __post_init__(self):
        n, t = self.spatial.shape
        if self.contact.shape != (n, t, JOINT_COUNT):
            raise PreconditionError(
                f"contact shape {self.contact.shape} != {(n, t, JOINT_COUNT)}"
            )
        if self.knn.ndim != 2 or self.knn.shape[0] != t:
            raise PreconditionError(f"knn shape {self.knn.shape} must be (T={t}, k)")
        for row in self.knn:
            if len(set(row.tolist())) != len(row) or row.min() < 0 or row.max() >= n:
                raise PreconditionError("knn rows must hold distinct valid object indices")


def build_aux_labels(
    activity_name: str,
    vocab: ActivityVocab,
    motion: MotionSequence,
    scene: Scene,
    config: EngineConfig | None = None,
    annotations: list[FrameAnnotation] | None = None,
) -> AuxLabels:
    config = config or EngineConfig()
    return AuxLabels(
        activity=activity_label(activity_name, vocab),
        spatial=spatial_relation_matrix(motion, scene, config),
        contact=contact_label_matrix(annotations or [], scene, motion, config),
        knn=knn_matrix(motion, scene, config.k_nearest),
    )


def aux_labels_to_json(labels: AuxLabels, config_hash: str) -> str:
    """Single JSON record; the contact bit tensor is base64-packed."""
    n, t = labels.spatial.shape
    packed = np.packbits(labels.contact.reshape(-1).astype(np.uint8))
    payload = {
        "schema_version": AUXLABELS_SCHEMA_VERSION,
        "config_hash": config_hash,
        "activity": int(labels.activity),
        "spatial": {"shape": [n, t], "values": labels.spatial.reshape(-1).tolist()},
        "contact": {
            "shape": [n, t, JOINT_COUNT],
            "bits_base64": base64.b64encode(packed.tobytes()).decode("ascii"),
        },
        "knn": {"shape": list(labels.knn.shape), "values": labels.knn.reshape(-1).tolist()},
    }
    return json.dumps(payload, separators=(",", ":"))


def aux_labels_from_json(text: str) -> tuple[AuxLabels, str]:
    """Inverse of :func:`aux_labels_to_json`; returns (labels, config_hash)."""
    payload = json.loads(text)
    if payload.get("schema_version") != AUXLABELS_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported aux-labels schema version {payload.get('schema_version')!r}"
        )
    n, t = payload["spatial"]["shape"]
    spatial = np.asarray(payload["spatial"]["values"], dtype=np.int64).reshape(n, t)
    contact_shape = tuple(payload["contact"]["shape"])
    raw = np.frombuffer(base64.b64decode(payload["contact"]["bits_base64"]), dtype=np.uint8)
    flat = np.unpackbits(raw)[: int(np.prod(contact_shape))]
    contact = flat.reshape(contact_shape).astype(bool)
    knn_shape = tuple(payload["knn"]["shape"])
    knn = np.asarray(payload["knn"]["values"], dtype=np.int64).reshape(knn_shape)
    labels = AuxLabels(
        activity=int(payload["activity"]), spatial=spatial, contact=contact, knn=knn
    )
    return labels, str(payload["config_hash"])
