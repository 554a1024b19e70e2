#!/usr/bin/env python3
"""Generate the deterministic demo fixtures under tests/data/.

The scene is a small room (chair, table, sofa, cabinet with a tv on top,
floor lamp, shelf); the motion walks from the room center to the chair,
sits down at frame 30, and rests the left wrist on the table top from frame
34 on. Every number is exact arithmetic on literals, so regeneration is
byte-stable.
"""

import json
from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

GRID = 10  # samples per box-face axis


def box_surface_points(center, size, grid=GRID):
    cx, cy, cz = center
    sx, sy, sz = size
    lo = np.array([cx - sx / 2, cy - sy / 2, cz - sz / 2])
    hi = np.array([cx + sx / 2, cy + sy / 2, cz + sz / 2])
    points = []
    axes = [(1, 2), (0, 2), (0, 1)]
    for axis, (a, b) in enumerate(axes):
        ua = np.linspace(lo[a], hi[a], grid)
        ub = np.linspace(lo[b], hi[b], grid)
        for fixed in (lo[axis], hi[axis]):
            for va in ua:
                for vb in ub:
                    p = [0.0, 0.0, 0.0]
                    p[axis] = float(fixed)
                    p[a] = float(va)
                    p[b] = float(vb)
                    points.append(p)
    return points


OBJECTS = [
    ("chair1", "chair", [1.8, 0.0, 0.225], [0.5, 0.5, 0.45]),
    ("table1", "table", [2.0, 1.2, 0.375], [1.2, 0.8, 0.75]),
    ("sofa1", "sofa", [-1.5, 2.0, 0.4], [1.8, 0.9, 0.8]),
    ("cabinet1", "cabinet", [-1.5, 3.2, 0.4], [1.6, 0.5, 0.8]),
    ("tv1", "tv", [-1.5, 3.2, 1.1], [1.0, 0.2, 0.6]),
    ("lamp1", "lamp", [0.2, -1.0, 0.75], [0.3, 0.3, 1.5]),
    ("shelf1", "shelf", [-0.2, 1.0, 0.9], [0.8, 0.25, 1.8]),
]

# Joint offsets relative to the pelvis for a standing pose facing +x
# (x forward, y left, z up), in JointId wire order.
STANDING = [
    (0.00, 0.00, 0.00),    # pelvis
    (0.00, 0.10, -0.05),   # left hip
    (0.00, -0.10, -0.05),  # right hip
    (0.00, 0.00, 0.10),    # lower spine
    (0.00, 0.11, -0.45),   # left knee
    (0.00, -0.11, -0.45),  # right knee
    (0.00, 0.00, 0.22),    # middle spine
    (0.00, 0.11, -0.85),   # left ankle
    (0.00, -0.11, -0.85),  # right ankle
    (0.00, 0.00, 0.34),    # upper spine
    (0.12, 0.11, -0.90),   # left foot
    (0.12, -0.11, -0.90),  # right foot
    (0.00, 0.00, 0.50),    # neck
    (0.00, 0.07, 0.45),    # left collar
    (0.00, -0.07, 0.45),   # right collar
    (0.00, 0.00, 0.65),    # head
    (0.00, 0.18, 0.45),    # left shoulder
    (0.00, -0.18, 0.45),   # right shoulder
    (0.00, 0.22, 0.20),    # left elbow
    (0.00, -0.22, 0.20),   # right elbow
    (0.00, 0.24, -0.05),   # left wrist
    (0.00, -0.24, -0.05),  # right wrist
]

# Seated overrides: bent legs forward, hands resting on the lap.
SEATED_OVERRIDES = {
    4: (0.40, 0.11, -0.02),   # left knee
    5: (0.40, -0.11, -0.02),  # right knee
    7: (0.45, 0.11, -0.41),   # left ankle
    8: (0.45, -0.11, -0.41),  # right ankle
    10: (0.57, 0.11, -0.44),  # left foot
    11: (0.57, -0.11, -0.44), # right foot
    18: (0.10, 0.22, 0.25),   # left elbow
    19: (0.10, -0.22, 0.25),  # right elbow
    20: (0.25, 0.15, 0.12),   # left wrist
    21: (0.25, -0.15, 0.12),  # right wrist
}


def table_top_sample_near(x, y):
    """The table-top cloud point closest to (x, y); the wrist lands above it."""
    best, best_d2 = None, None
    for p in box_surface_points([2.0, 1.2, 0.375], [1.2, 0.8, 0.75]):
        if p[2] != 0.75:
            continue
        d2 = (p[0] - x) ** 2 + (p[1] - y) ** 2
        if best_d2 is None or d2 < best_d2:
            best, best_d2 = p, d2
    return best


def build_motion():
    frames = []
    wrist_target = table_top_sample_near(2.0, 0.85)
    wrist_target = [wrist_target[0], wrist_target[1], wrist_target[2] + 0.04]
    for t in range(40):
        if t < 30:
            base = [t * 1.5 / 29, 0.0, 0.95]
            offsets = STANDING
        else:
            base = [1.8, 0.0, 0.48]
            offsets = [SEATED_OVERRIDES.get(j, STANDING[j]) for j in range(22)]
        frame = [[base[0] + o[0], base[1] + o[1], base[2] + o[2]] for o in offsets]
        if t >= 34:
            frame[20] = list(wrist_target)
        frames.append(frame)
    return {"id": "demo_walk_sit", "fps": 30.0, "joints": frames}


def build_scene():
    objects = []
    for oid, label, center, size in OBJECTS:
        record = {
            "id": oid,
            "label": label,
            "box": {"center": center, "size": size},
            "points": box_surface_points(center, size),
        }
        if oid == "tv1":
            record["colors"] = [[20, 20, 20] for _ in record["points"]]
        objects.append(record)
    return {"id": "demo_room", "objects": objects}


def build_scores():
    rows = []
    # 10 interacting_object records summing to 12 -> task score 60.0.
    for i, score in enumerate([2, 2, 2, 1, 1, 1, 1, 1, 1, 0]):
        rows.append({"question_id": f"io-{i}", "subtask": "interacting_object",
                     "score": score})
    # Parsed judge replies for a second dimension.
    for i, reply in enumerate([
        "The candidate matches the reference.\nScore: 2",
        "Partially correct, the object is wrong.\nScore: 1",
        "Wrong activity.\nScore: 0",
        "Matches.\nScore: 2",
    ]):
        rows.append({"question_id": f"sa-{i}", "subtask": "single_activity",
                     "judge_text": reply})
    # One malformed judge reply: counted as a parse failure, never imputed.
    rows.append({"question_id": "sa-bad", "subtask": "single_activity",
                 "judge_text": "I would rate this somewhere in the middle."})
    return rows


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    (DATA_DIR / "demo_scene.json").write_text(json.dumps(build_scene()) + "\n")
    (DATA_DIR / "demo_motion.json").write_text(json.dumps(build_motion()) + "\n")
    (DATA_DIR / "activity_vocab.json").write_text(
        json.dumps({"activities": ["walk", "sit", "stand up", "lie down", "reach"]}) + "\n"
    )
    (DATA_DIR / "demo_scores.jsonl").write_text(
        "\n".join(json.dumps(row) for row in build_scores()) + "\n"
    )
    for name in ("demo_scene.json", "demo_motion.json", "activity_vocab.json",
                 "demo_scores.jsonl"):
        print(f"wrote {DATA_DIR / name}")


if __name__ == "__main__":
    main()
