"""Skeletal motion representation: 22-joint poses, facing direction, key frames.

Joints arrive in scene coordinates and stay there; all downstream annotations
are scene-relative, so no root normalization is applied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegeneratePoseError, PreconditionError, SchemaError
from .geometry import Vec3


class JointId(IntEnum):
    """The 22 body joints, in wire order. Pelvis is index 0."""

    PELVIS = 0
    LEFT_HIP = 1
    RIGHT_HIP = 2
    LOWER_SPINE = 3
    LEFT_KNEE = 4
    RIGHT_KNEE = 5
    MIDDLE_SPINE = 6
    LEFT_ANKLE = 7
    RIGHT_ANKLE = 8
    UPPER_SPINE = 9
    LEFT_FOOT = 10
    RIGHT_FOOT = 11
    NECK = 12
    LEFT_COLLAR = 13
    RIGHT_COLLAR = 14
    HEAD = 15
    LEFT_SHOULDER = 16
    RIGHT_SHOULDER = 17
    LEFT_ELBOW = 18
    RIGHT_ELBOW = 19
    LEFT_WRIST = 20
    RIGHT_WRIST = 21

    @property
    def label(self) -> str:
        """Human-readable name, e.g. ``left wrist``."""
        return self.name.lower().replace("_", " ")

    @classmethod
    def from_label(cls, label: str) -> "JointId":
        try:
            return cls[label.strip().upper().replace(" ", "_")]
        except KeyError:
            raise PreconditionError(f"unknown joint label {label!r}") from None


JOINT_COUNT = 22
assert len(JointId) == JOINT_COUNT


@dataclass(frozen=True, eq=False)
class PoseFrame:
    """One motion frame: 22 joint positions (meters, scene coordinates)."""

    joints: np.ndarray  # (22, 3) float64
    frame_index: int

    def __post_init__(self):
        joints = np.asarray(self.joints, dtype=np.float64)
        if joints.shape != (JOINT_COUNT, 3):
            raise PreconditionError(f"expected ({JOINT_COUNT}, 3) joints, got {joints.shape}")
        if not np.all(np.isfinite(joints)):
            raise PreconditionError(f"frame {self.frame_index}: non-finite joint coordinates")
        if self.frame_index < 0:
            raise PreconditionError(f"frame_index must be >= 0, got {self.frame_index}")
        object.__setattr__(self, "joints", joints)

    def joint(self, j: JointId) -> Vec3:
        return self.joints[int(j)]

    def translated(self, offset) -> "PoseFrame":
        return PoseFrame(self.joints + np.asarray(offset, dtype=np.float64), self.frame_index)


@dataclass(frozen=True, eq=False)
class MotionSequence:
    id: str
    frames: tuple[PoseFrame, ...]
    fps: float

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if len(self.frames) < 1:
            raise PreconditionError("motion sequence must contain at least one frame")
        if self.fps <= 0:
            raise PreconditionError(f"fps must be positive, got {self.fps}")
        for expected, frame in enumerate(self.frames):
            if frame.frame_index != expected:
                raise PreconditionError(
                    f"frame_index must increase from 0, got {frame.frame_index} at {expected}"
                )

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, index: int) -> PoseFrame:
        return self.frames[index]


def frame_location(frame: PoseFrame) -> Vec3:
    """Per-frame human location: the pelvis joint position."""
    return frame.joint(JointId.PELVIS)


def _horizontal_facing(left: Vec3, right: Vec3, min_separation: float) -> np.ndarray | None:
    """up x (right - left), projected to xy and normalized; None when degenerate."""
    dx = float(right[0]) - float(left[0])
    dy = float(right[1]) - float(left[1])
    # up x (dx, dy, dz) = (-dy, dx, 0)
    fx, fy = -dy, dx
    norm = math.sqrt(fx * fx + fy * fy)
    if norm <= min_separation:
        return None
    return np.array([fx / norm, fy / norm])


def facing_direction(frame: PoseFrame, hip_degeneracy_m: float = 1e-3) -> np.ndarray:
    """Horizontal unit facing vector derived from the hip line.

    Hips are primary; when their horizontal separation is below the
    degeneracy threshold the shoulders are used instead. Both pairs
    degenerate raises :class:`DegeneratePoseError`.
    """
    facing = _horizontal_facing(
        frame.joint(JointId.LEFT_HIP), frame.joint(JointId.RIGHT_HIP), hip_degeneracy_m
    )
    if facing is None:
        facing = _horizontal_facing(
            frame.joint(JointId.LEFT_SHOULDER),
            frame.joint(JointId.RIGHT_SHOULDER),
            hip_degeneracy_m,
        )
    if facing is None:
        raise DegeneratePoseError(
            f"frame {frame.frame_index}: hip and shoulder pairs are both degenerate"
        )
    return facing


def select_key_frames(
    motion: MotionSequence, stride: int, extra_frames: Iterable[int] = ()
) -> list[int]:
    """Strided frame indices plus the final frame, ascending and deduplicated.

    ``extra_frames`` lets callers add event frames (e.g. contact changes);
    out-of-range extras are rejected.
    """
    if stride < 1:
        raise PreconditionError(f"stride must be >= 1, got {stride}")
    total = len(motion)
    selected = set(range(0, total, stride))
    selected.add(total - 1)
    for index in extra_frames:
        if not 0 <= index < total:
            raise PreconditionError(f"extra key frame {index} outside [0, {total})")
        selected.add(int(index))
    return sorted(selected)


def load_motion(path: str | Path) -> MotionSequence:
    """Load a motion file: {"id", "fps", "joints": [[[x,y,z] * 22] * T]}."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"motion file is not valid JSON: {exc}", offender=str(path)) from exc
    return motion_from_dict(payload, offender=str(path))


def motion_from_dict(payload: dict, offender: str = "<motion>") -> MotionSequence:
    for key in ("id", "fps", "joints"):
        if key not in payload:
            raise SchemaError(f"motion record missing key {key!r}", offender=offender)
    raw_frames: Sequence = payload["joints"]
    if not raw_frames:
        raise SchemaError("motion has no frames", offender=offender)
    frames = []
    for t, raw in enumerate(raw_frames):
        if len(raw) != JOINT_COUNT:
            raise SchemaError(
                f"frame {t} has {len(raw)} joints, expected {JOINT_COUNT}",
                offender=offender,
            )
        try:
            frames.append(PoseFrame(np.asarray(raw, dtype=np.float64), t))
        except (PreconditionError, ValueError) as exc:
            raise SchemaError(f"frame {t}: {exc}", offender=offender) from exc
    try:
        return MotionSequence(id=str(payload["id"]), frames=tuple(frames), fps=float(payload["fps"]))
    except PreconditionError as exc:
        raise SchemaError(str(exc), offender=offender) from exc


def motion_to_dict(motion: MotionSequence) -> dict:
    return {
        "id": motion.id,
        "fps": motion.fps,
        "joints": [[list(map(float, joint)) for joint in frame.joints] for frame in motion],
    }
