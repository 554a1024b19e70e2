"""Scene-graph construction: relation triplets and referring expressions.

The predicate set is {near, above, below}, all decided by box geometry so
every emitted expression is testable. Thresholds are config keys and get
recorded into output metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import PreconditionError
from .geometry import horizontal_distance
from .scene import Scene, SceneObject


class Predicate(str, Enum):
    NEAR = "near"
    ABOVE = "above"
    BELOW = "below"


PREDICATE_PHRASES = {
    Predicate.NEAR: "near",
    Predicate.ABOVE: "above",
    Predicate.BELOW: "below",
}


@dataclass(frozen=True)
class RelationTriplet:
    subject_id: str
    predicate: Predicate
    object_id: str

    def __post_init__(self):
        if self.subject_id == self.object_id:
            raise PreconditionError(f"triplet relates {self.subject_id!r} to itself")


def _stacked(a: SceneObject, b: SceneObject, theta_overlap: float) -> bool:
    """True when the two boxes overlap in footprint and are vertically separated."""
    inter = a.box.footprint_intersection_area(b.box)
    smaller = min(a.box.footprint_area, b.box.footprint_area)
    if smaller <= 0 or inter / smaller <= theta_overlap:
        return False
    gap = abs(float(a.box.center[2]) - float(b.box.center[2]))
    return gap > 0.5 * (float(a.box.size[2]) + float(b.box.size[2])) / 2


def build_scene_graph(
    scene: Scene, theta_near_m: float = 1.5, theta_overlap: float = 0.3
) -> list[RelationTriplet]:
    """Deterministic relation triplets for all object pairs.

    above/below: footprint overlap ratio (against the smaller footprint)
    above ``theta_overlap`` plus a vertical center gap beyond half the mean
    z-extent; emitted in both directed forms. near: horizontal center
    distance under ``theta_near_m`` and not stacked; emitted once with the
    lexicographically smaller id as subject.
    """
    triplets: list[RelationTriplet] = []
    ordered = sorted(scene.objects, key=lambda o: o.id)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            if _stacked(a, b, theta_overlap):
                upper, lower = (a, b) if a.box.center[2] > b.box.center[2] else (b, a)
                triplets.append(RelationTriplet(upper.id, Predicate.ABOVE, lower.id))
                triplets.append(RelationTriplet(lower.id, Predicate.BELOW, upper.id))
            elif horizontal_distance(a.box.center, b.box.center) < theta_near_m:
                triplets.append(RelationTriplet(a.id, Predicate.NEAR, b.id))
    return triplets


def refer_expression(triplet: RelationTriplet, scene: Scene) -> str:
    """Render a triplet as text, e.g. ``The sofa is near the chair.``"""
    subject = scene.get(triplet.subject_id)
    anchor = scene.get(triplet.object_id)
    phrase = PREDICATE_PHRASES[triplet.predicate]
    return f"The {subject.label} is {phrase} the {anchor.label}."


def scene_expressions(
    scene: Scene, theta_near_m: float = 1.5, theta_overlap: float = 0.3
) -> list[str]:
    return [
        refer_expression(t, scene)
        for t in build_scene_graph(scene, theta_near_m=theta_near_m, theta_overlap=theta_overlap)
    ]
