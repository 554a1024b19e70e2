"""Geometry primitives and spatial queries used by every annotator.

All geometry runs in 64-bit floats: contact thresholds (0.1 m) sit close to
float32 noise after long pipelines. Distances are computed with a single
canonical formula (``sqrt`` of an explicit sum of squares, never ``hypot``)
so results are bit-identical across platforms and against brute-force
re-computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateDirectionError, PreconditionError

# A Vec3 is a (3,) float64 array, z up, meters.
Vec3 = np.ndarray

UP = np.array([0.0, 0.0, 1.0])


def vec3(x: float, y: float, z: float) -> Vec3:
    v = np.array([x, y, z], dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise PreconditionError(f"Vec3 components must be finite, got {v}")
    return v


def as_vec3(value) -> Vec3:
    v = np.asarray(value, dtype=np.float64)
    if v.shape != (3,):
        raise PreconditionError(f"expected 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise PreconditionError(f"Vec3 components must be finite, got {v}")
    return v


def euclidean_distance(a: Vec3, b: Vec3) -> float:
    """Canonical 3D distance: sqrt((dx^2 + dy^2) + dz^2), left-to-right."""
    dx = float(a[0]) - float(b[0])
    dy = float(a[1]) - float(b[1])
    dz = float(a[2]) - float(b[2])
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def horizontal_distance(a: Vec3, b: Vec3) -> float:
    """Distance on the xy-plane; z is ignored."""
    dx = float(a[0]) - float(b[0])
    dy = float(a[1]) - float(b[1])
    return math.sqrt(dx * dx + dy * dy)


def signed_heading_angle(facing: np.ndarray, target_dir: np.ndarray) -> float:
    """Counter-clockwise signed angle from ``facing`` to ``target_dir`` about +z.

    ``facing`` must be a unit 2-vector; ``target_dir`` any non-zero 2-vector.
    Returns radians in (-pi, pi]; the antipodal tie resolves to +pi so the
    back sector stays a half-open interval with no double assignment.
    """
    fx, fy = float(facing[0]), float(facing[1])
    norm = math.sqrt(fx * fx + fy * fy)
    if abs(norm - 1.0) > 1e-6:
        raise PreconditionError(f"facing must have unit norm, got {norm}")
    tx, ty = float(target_dir[0]), float(target_dir[1])
    if tx == 0.0 and ty == 0.0:
        raise DegenerateDirectionError("target direction has zero length")
    dot = fx * tx + fy * ty
    cross = fx * ty - fy * tx
    angle = math.atan2(cross, dot)
    if angle == -math.pi:
        angle = math.pi
    return angle


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Non-empty set of 3D points with an exact nearest-neighbor index.

    The k-d tree is an accelerator only: it locates the nearest stored point,
    and the reported distance is then recomputed with the canonical scalar
    formula, so queries match an exhaustive scan bit-for-bit.
    """

    points: np.ndarray  # (n, 3) float64
    _index: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] == 0:
            raise PreconditionError(f"point cloud must be (n, 3) with n >= 1, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise PreconditionError("point cloud contains non-finite coordinates")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def kdtree(self) -> cKDTree:
        # Built once per cloud, before any concurrent sharing.
        if not self._index:
            self._index.append(cKDTree(self.points))
        return self._index[0]

    def nearest_index(self, p: Vec3) -> int:
        _, idx = self.kdtree.query(np.asarray(p, dtype=np.float64))
        return int(idx)

    def nearest_distance(self, p: Vec3) -> float:
        """Exact minimum Euclidean distance from ``p`` to the stored points."""
        return euclidean_distance(as_vec3(p), self.points[self.nearest_index(p)])

    def nearest_distances(self, ps: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`nearest_distance` over an (m, 3) query array."""
        ps = np.asarray(ps, dtype=np.float64)
        _, idx = self.kdtree.query(ps)
        nearest = self.points[idx]
        return np.array(
            [euclidean_distance(p, q) for p, q in zip(ps, nearest)], dtype=np.float64
        )


@dataclass(frozen=True, eq=False)
class ObjectBox:
    """Axis-aligned box: center plus full extents, meters."""

    center: Vec3
    size: Vec3

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec3(self.center))
        object.__setattr__(self, "size", as_vec3(self.size))
        if not np.all(self.size > 0):
            raise PreconditionError(f"box size components must be > 0, got {self.size}")

    @property
    def footprint_area(self) -> float:
        return float(self.size[0] * self.size[1])

    def footprint_intersection_area(self, other: "ObjectBox") -> float:
        """Area of the xy overlap of the two boxes (0.0 when disjoint)."""
        ox = min(self.center[0] + self.size[0] / 2, other.center[0] + other.size[0] / 2) - max(
            self.center[0] - self.size[0] / 2, other.center[0] - other.size[0] / 2
        )
        oy = min(self.center[1] + self.size[1] / 2, other.center[1] + other.size[1] / 2) - max(
            self.center[1] - self.size[1] / 2, other.center[1] - other.size[1] / 2
        )
        if ox <= 0 or oy <= 0:
            return 0.0
        return float(ox * oy)


def nearest_distance(p: Vec3, cloud: PointCloud) -> float:
    """Module-level alias for :meth:`PointCloud.nearest_distance`."""
    return cloud.nearest_distance(p)
