"""Frame-level human-scene annotations: contacts, positions, between pairs.

Contact detection is the hot loop (22 joints x N objects x key frames), so
joint queries run batched against each object's point-cloud index; the index
is exact, never an approximation. Orientation uses four half-open quarter
sectors around the facing direction, with an inner ``at`` disk overriding
them; the antipodal angle resolves to +pi so the back sector never double
assigns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import EngineConfig
from .errors import PreconditionError
from .geometry import horizontal_distance, signed_heading_angle
from .motion import JointId, MotionSequence, PoseFrame, facing_direction, frame_location
from .scene import Scene, SceneObject

QUARTER = np.pi / 4


class OrientationCategory(str, Enum):
    """Single-anchor orientation classes; `between` is a separate two-anchor record."""

    FACING_TOWARDS = "facing_towards"
    ON_LEFT = "on_left"
    ON_RIGHT = "on_right"
    FACING_AWAY = "facing_away"
    AT = "at"


@dataclass(frozen=True)
class ContactTuple:
    joint: JointId
    object_id: str
    distance: float


@dataclass(frozen=True)
class PositionTriplet:
    orientation: OrientationCategory
    distance: float  # horizontal, pelvis to object center, meters
    object_id: str


@dataclass(frozen=True)
class BetweenPair:
    left_object_id: str
    right_object_id: str

    def __post_init__(self):
        if self.left_object_id == self.right_object_id:
            raise PreconditionError("between pair must name two distinct objects")


@dataclass(frozen=True)
class FrameAnnotation:
    frame_index: int
    contacts: tuple[ContactTuple, ...]
    positions: tuple[PositionTriplet, ...]
    betweens: tuple[BetweenPair, ...]


def detect_contacts(
    frame: PoseFrame, scene: Scene, epsilon_m: float = 0.1
) -> list[ContactTuple]:
    """All (joint, object, distance) tuples with distance strictly below epsilon.

    Output is sorted by (joint index, object id). Strict ``<`` keeps the
    threshold boundary unambiguous: a distance exactly at epsilon is not a
    contact.
    """
    if epsilon_m <= 0:
        raise PreconditionError(f"epsilon_m must be > 0, got {epsilon_m}")
    contacts = []
    for obj in scene.objects:
        distances = obj.cloud.nearest_distances(frame.joints)
        for j in np.nonzero(distances < epsilon_m)[0]:
            contacts.append(ContactTuple(JointId(int(j)), obj.id, float(distances[j])))
    contacts.sort(key=lambda c: (int(c.joint), c.object_id))
    return contacts


def bearing(frame: PoseFrame, obj: SceneObject, config: EngineConfig) -> tuple[float, float]:
    """(signed heading angle, horizontal pelvis-to-center distance) for one object."""
    pelvis = frame_location(frame)
    distance = horizontal_distance(pelvis, obj.box.center)
    facing = facing_direction(frame, config.hip_degeneracy_m)
    target = np.array(
        [float(obj.box.center[0]) - float(pelvis[0]), float(obj.box.center[1]) - float(pelvis[1])]
    )
    angle = signed_heading_angle(facing, target)
    return angle, distance


def directional_category(angle: float) -> OrientationCategory:
    """Quarter-plane sector for an angle in (-pi, pi]; half-open at each boundary."""
    if -QUARTER < angle <= QUARTER:
        return OrientationCategory.FACING_TOWARDS
    if QUARTER < angle <= 3 * QUARTER:
        return OrientationCategory.ON_LEFT
    if -3 * QUARTER < angle <= -QUARTER:
        return OrientationCategory.ON_RIGHT
    return OrientationCategory.FACING_AWAY


def classify_position(
    frame: PoseFrame, obj: SceneObject, config: EngineConfig | None = None
) -> PositionTriplet:
    """Orientation category plus horizontal distance for one anchor object.

    Objects inside the ``r_at_m`` disk classify as AT regardless of bearing.
    """
    config = config or EngineConfig()
    pelvis = frame_location(frame)
    distance = horizontal_distance(pelvis, obj.box.center)
    if distance < config.r_at_m:
        return PositionTriplet(OrientationCategory.AT, distance, obj.id)
    angle, _ = bearing(frame, obj, config)
    return PositionTriplet(directional_category(angle), distance, obj.id)


def detect_between(
    frame: PoseFrame, scene: Scene, config: EngineConfig | None = None
) -> list[BetweenPair]:
    """Pairs (left object, right object) flanking the person at mirrored bearings.

    Both anchors must classify as ON_LEFT / ON_RIGHT within ``r_between_m``,
    with bearing angles summing to within ``alpha_sym_rad`` of zero. Output
    is sorted by combined distance.
    """
    config = config or EngineConfig()
    lefts, rights = [], []
    for obj in scene.objects:
        triplet = classify_position(frame, obj, config)
        if triplet.distance >= config.r_between_m:
            continue
        if triplet.orientation is OrientationCategory.ON_LEFT:
            lefts.append((obj.id, *bearing(frame, obj, config)))
        elif triplet.orientation is OrientationCategory.ON_RIGHT:
            rights.append((obj.id, *bearing(frame, obj, config)))
    pairs = []
    for left_id, left_angle, left_dist in lefts:
        for right_id, right_angle, right_dist in rights:
            if abs(left_angle + right_angle) < config.alpha_sym_rad:
                pairs.append((left_dist + right_dist, BetweenPair(left_id, right_id)))
    pairs.sort(key=lambda item: (item[0], item[1].left_object_id, item[1].right_object_id))
    return [pair for _, pair in pairs]


def annotate_frame(
    frame: PoseFrame, scene: Scene, config: EngineConfig | None = None
) -> FrameAnnotation:
    """Compose contacts, per-object position triplets, and between pairs."""
    config = config or EngineConfig()
    try:
        contacts = detect_contacts(frame, scene, config.epsilon_m)
        positions = [
            classify_position(frame, obj, config)
            for obj in sorted(scene.objects, key=lambda o: o.id)
        ]
        betweens = detect_between(frame, scene, config)
    except PreconditionError as exc:
        raise PreconditionError(f"frame {frame.frame_index}: {exc}") from exc
    return FrameAnnotation(
        frame_index=frame.frame_index,
        contacts=tuple(contacts),
        positions=tuple(positions),
        betweens=tuple(betweens),
    )


def contact_change_frames(
    motion: MotionSequence, scene: Scene, epsilon_m: float = 0.1
) -> list[int]:
    """Frames whose contact set differs from the previous frame's."""
    changed = []
    previous: set[tuple[int, str]] = set()
    for t, frame in enumerate(motion):
        current = {
            (int(c.joint), c.object_id) for c in detect_contacts(frame, scene, epsilon_m)
        }
        if t > 0 and current != previous:
            changed.append(t)
        previous = current
    return changed


def annotation_to_record(
    annotation: FrameAnnotation, scene_id: str, motion_id: str, config_hash: str
) -> dict:
    """Wire-format dict for one annotated frame (JSONL row)."""
    return {
        "scene": scene_id,
        "motion": motion_id,
        "frame": annotation.frame_index,
        "contacts": [
            {"joint": c.joint.label, "object": c.object_id, "distance": c.distance}
            for c in annotation.contacts
        ],
        "positions": [
            {"object": p.object_id, "orientation": p.orientation.value, "distance": p.distance}
            for p in annotation.positions
        ],
        "betweens": [
            {"left": b.left_object_id, "right": b.right_object_id} for b in annotation.betweens
        ],
        "config_hash": config_hash,
    }


def annotation_from_record(record: dict) -> FrameAnnotation:
    return FrameAnnotation(
        frame_index=int(record["frame"]),
        contacts=tuple(
            ContactTuple(JointId.from_label(c["joint"]), c["object"], float(c["distance"]))
            for c in record["contacts"]
        ),
        positions=tuple(
            PositionTriplet(
                OrientationCategory(p["orientation"]), float(p["distance"]), p["object"]
            )
            for p in record["positions"]
        ),
        betweens=tuple(BetweenPair(b["left"], b["right"]) for b in record["betweens"]),
    )


def record_to_json_line(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"), ensure_ascii=False)
