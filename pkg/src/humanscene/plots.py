"""Figure rendering for CLI reports: score bar charts and top-down scene views.

Matplotlib runs on the Agg backend; everything here writes files and never
opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Rectangle

from .annotate import FrameAnnotation
from .evaluate import ScoreReport
from .motion import JointId, MotionSequence, frame_location
from .scene import Scene


def save_score_figure(report: ScoreReport, path: str | Path) -> None:
    """Horizontal bar chart of per-task scores with the average marked."""
    tasks = sorted(report.per_task)
    values = [report.per_task[t] for t in tasks]
    fig, ax = plt.subplots(figsize=(8, max(2.0, 0.4 * len(tasks) + 1.2)))
    ax.barh(tasks, values, color="#4878b0")
    ax.axvline(report.average, color="#c44e52", linestyle="--", linewidth=1.2,
               label=f"average {report.average:.1f}")
    ax.set_xlim(0, 100)
    ax.set_xlabel("score (0-100)")
    ax.invert_yaxis()
    ax.legend(loc="lower right")
    if report.parse_failures:
        ax.set_title(f"{report.parse_failures} judge output(s) failed to parse")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_annotation_figure(
    scene: Scene,
    motion: MotionSequence,
    annotations: list[FrameAnnotation],
    path: str | Path,
) -> None:
    """Top-down overview: object footprints, pelvis trajectory, contact joints."""
    fig, ax = plt.subplots(figsize=(8, 8))
    for obj in scene.objects:
        cx, cy = float(obj.box.center[0]), float(obj.box.center[1])
        sx, sy = float(obj.box.size[0]), float(obj.box.size[1])
        ax.add_patch(
            Rectangle((cx - sx / 2, cy - sy / 2), sx, sy,
                      fill=True, facecolor="#dddddd", edgecolor="#555555")
        )
        ax.annotate(obj.label, (cx, cy), ha="center", va="center", fontsize=8)

    trajectory = np.array([frame_location(frame)[:2] for frame in motion])
    ax.plot(trajectory[:, 0], trajectory[:, 1], color="#4878b0", linewidth=1.2,
            label="pelvis trajectory")
    ax.plot(trajectory[0, 0], trajectory[0, 1], "o", color="#55a868", label="start")
    ax.plot(trajectory[-1, 0], trajectory[-1, 1], "s", color="#c44e52", label="end")

    contact_points = []
    for annotation in annotations:
        frame = motion[annotation.frame_index]
        for contact in annotation.contacts:
            contact_points.append(frame.joint(JointId(int(contact.joint)))[:2])
    if contact_points:
        pts = np.array(contact_points)
        ax.scatter(pts[:, 0], pts[:, 1], marker="x", color="#dd8452", s=30,
                   label="contact joints", zorder=3)

    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend(loc="best", fontsize=8)
    ax.autoscale_view()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
