"""Pipeline orchestration shared by the CLI commands and the HTTP server.

Every writer here is deterministic: identical inputs and config produce
byte-identical output files (no timestamps, stable ordering, shortest
round-trip float formatting via ``json``).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .annotate import (
    FrameAnnotation,
    annotate_frame,
    annotation_to_record,
    contact_change_frames,
    record_to_json_line,
)
from .auxlabels import ActivityVocab, aux_labels_to_json, build_aux_labels
from .config import EngineConfig
from .errors import SchemaError
from .kernels import (
    ProjectionWeights,
    normalize_to_unit_box,
    object_pos_encoding,
    motion_pos_encoding,
    save_projection,
)
from .motion import MotionSequence, frame_location, select_key_frames
from .scene import Scene

PIPELINE_SCHEMA_VERSION = "1"


def annotate_sequence(
    scene: Scene, motion: MotionSequence, config: EngineConfig
) -> tuple[list[int], list[FrameAnnotation]]:
    """Key-frame selection plus per-frame annotation."""
    extra = (
        contact_change_frames(motion, scene, config.epsilon_m)
        if config.contact_change_frames
        else ()
    )
    key_frames = select_key_frames(motion, config.stride, extra)
    annotations = [annotate_frame(motion[t], scene, config) for t in key_frames]
    return key_frames, annotations


def write_annotations(
    out_path: str | Path,
    scene: Scene,
    motion: MotionSequence,
    key_frames: list[int],
    annotations: list[FrameAnnotation],
    config: EngineConfig,
) -> Path:
    """Write the annotation JSONL plus its sidecar metadata file."""
    out_path = Path(out_path)
    config_hash = config.content_hash()
    lines = [
        record_to_json_line(annotation_to_record(a, scene.id, motion.id, config_hash))
        for a in annotations
    ]
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = {
        "schema_version": PIPELINE_SCHEMA_VERSION,
        "scene": scene.id,
        "motion": motion.id,
        "config_hash": config_hash,
        "config": config.to_dict(),
        "key_frames": key_frames,
        "counts": {
            "frames": len(annotations),
            "contacts": sum(len(a.contacts) for a in annotations),
            "positions": sum(len(a.positions) for a in annotations),
            "betweens": sum(len(a.betweens) for a in annotations),
        },
    }
    meta_path = out_path.with_suffix(out_path.suffix + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return meta_path


def write_aux_labels(
    out_path: str | Path,
    activity_name: str,
    vocab: ActivityVocab,
    scene: Scene,
    motion: MotionSequence,
    config: EngineConfig,
) -> None:
    labels = build_aux_labels(activity_name, vocab, motion, scene, config)
    Path(out_path).write_text(
        aux_labels_to_json(labels, config.content_hash()) + "\n", encoding="utf-8"
    )


def load_activity_vocab(path: str | Path) -> ActivityVocab:
    payload = json.loads(Path(path).read_text())
    if isinstance(payload, dict):
        payload = payload.get("activities")
    if not isinstance(payload, list) or not all(isinstance(n, str) for n in payload):
        raise SchemaError(
            "vocabulary must be a JSON array of names or {'activities': [...]}",
            offender=str(path),
        )
    return ActivityVocab(tuple(payload))


def ltp_projections(config: EngineConfig) -> tuple[ProjectionWeights, ProjectionWeights]:
    """Spatial (3 -> d/2) and temporal (1 -> d/2) projections; seeds derive
    from the config seed so a config hash pins the encodings."""
    half = config.embed_dim // 2
    return (
        ProjectionWeights.initialize(3, half, config.seed),
        ProjectionWeights.initialize(1, half, config.seed + 1),
    )


def encode_scene_and_motion(
    scene: Scene, motion: MotionSequence, config: EngineConfig
) -> dict:
    """Position encodings for every object and frame as a JSON-ready dict.

    Coordinates are normalized to the scene's axis-aligned bounds so Fourier
    frequencies are scale-free across scenes.
    """
    sf_weights, tf_weights = ltp_projections(config)
    lo, hi = scene.bounds()
    total = len(motion)
    objects = {}
    for obj in sorted(scene.objects, key=lambda o: o.id):
        mu = normalize_to_unit_box(np.asarray(obj.box.center), lo, hi)
        objects[obj.id] = object_pos_encoding(mu, total, sf_weights, tf_weights).tolist()
    frames = []
    for t, frame in enumerate(motion, start=1):
        mu = normalize_to_unit_box(np.asarray(frame_location(frame)), lo, hi)
        frames.append(motion_pos_encoding(t, mu, sf_weights, tf_weights, total).tolist())
    return {
        "schema_version": PIPELINE_SCHEMA_VERSION,
        "config_hash": config.content_hash(),
        "dim": config.embed_dim,
        "scene": scene.id,
        "motion": motion.id,
        "objects": objects,
        "frames": frames,
    }


def write_encodings(
    out_path: str | Path,
    scene: Scene,
    motion: MotionSequence,
    config: EngineConfig,
    weights_dir: str | Path | None = None,
) -> None:
    payload = encode_scene_and_motion(scene, motion, config)
    Path(out_path).write_text(
        json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8"
    )
    if weights_dir is not None:
        weights_dir = Path(weights_dir)
        weights_dir.mkdir(parents=True, exist_ok=True)
        sf_weights, tf_weights = ltp_projections(config)
        save_projection(weights_dir / "spatial_fourier.bin", sf_weights)
        save_projection(weights_dir / "temporal_fourier.bin", tf_weights)
