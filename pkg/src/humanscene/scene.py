"""Scene data model and ingestion.

A scene is a set of segmented objects, each carrying a semantic label, an
axis-aligned bounding box, and a sampled point cloud. RGB colors are carried
through when present but never used by geometry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MissingObjectError, PreconditionError, SchemaError
from .geometry import ObjectBox, PointCloud


@dataclass(frozen=True, eq=False)
class SceneObject:
    id: str
    label: str
    box: ObjectBox
    cloud: PointCloud
    rgb: np.ndarray | None = None  # (n, 3) uint8, aligned with cloud

    def __post_init__(self):
        if not self.id:
            raise PreconditionError("object id must be non-empty")
        if self.rgb is not None:
            rgb = np.asarray(self.rgb, dtype=np.uint8)
            if rgb.shape != (len(self.cloud), 3):
                raise PreconditionError(
                    f"object {self.id}: colors shape {rgb.shape} does not match "
                    f"{len(self.cloud)} points"
                )
            object.__setattr__(self, "rgb", rgb)


@dataclass(frozen=True, eq=False)
class Scene:
    id: str
    objects: tuple[SceneObject, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        if len(self.objects) < 1:
            raise PreconditionError("scene must contain at least one object")
        ids = [obj.id for obj in self.objects]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise PreconditionError(f"scene {self.id}: duplicate object ids {dupes}")

    def __len__(self) -> int:
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)

    def get(self, object_id: str) -> SceneObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise MissingObjectError(f"scene {self.id} has no object {object_id!r}")

    def has(self, object_id: str) -> bool:
        return any(obj.id == object_id for obj in self.objects)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Axis-aligned (min, max) corners over all object clouds."""
        lo = np.min([obj.cloud.points.min(axis=0) for obj in self.objects], axis=0)
        hi = np.max([obj.cloud.points.max(axis=0) for obj in self.objects], axis=0)
        return lo, hi


def load_scene(path: str | Path) -> Scene:
    """Load and validate a scene file; fails fast naming the offending object."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"scene file is not valid JSON: {exc}", offender=str(path)) from exc
    return scene_from_dict(payload, offender=str(path))


def scene_from_dict(payload: dict, offender: str = "<scene>") -> Scene:
    if "id" not in payload or "objects" not in payload:
        raise SchemaError("scene record needs 'id' and 'objects'", offender=offender)
    objects = []
    for raw in payload["objects"]:
        oid = str(raw.get("id", ""))
        try:
            box = ObjectBox(
                center=np.asarray(raw["box"]["center"], dtype=np.float64),
                size=np.asarray(raw["box"]["size"], dtype=np.float64),
            )
            cloud = PointCloud(np.asarray(raw["points"], dtype=np.float64))
            rgb = None
            if raw.get("colors") is not None:
                rgb = np.asarray(raw["colors"], dtype=np.uint8)
            objects.append(
                SceneObject(id=oid, label=str(raw["label"]), box=box, cloud=cloud, rgb=rgb)
            )
        except (KeyError, TypeError, ValueError, PreconditionError) as exc:
            raise SchemaError(f"invalid object: {exc}", offender=oid or offender) from exc
    try:
        return Scene(id=str(payload["id"]), objects=tuple(objects))
    except PreconditionError as exc:
        raise SchemaError(str(exc), offender=offender) from exc


def scene_to_dict(scene: Scene) -> dict:
    out = {"id": scene.id, "objects": []}
    for obj in scene.objects:
        record = {
            "id": obj.id,
            "label": obj.label,
            "box": {
                "center": [float(c) for c in obj.box.center],
                "size": [float(s) for s in obj.box.size],
            },
            "points": [[float(c) for c in p] for p in obj.cloud.points],
        }
        if obj.rgb is not None:
            record["colors"] = [[int(c) for c in row] for row in obj.rgb]
        out["objects"].append(record)
    return out
