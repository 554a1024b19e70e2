"""Reference numerical kernels: layout/trajectory position encodings, scene
context fusion, and the three auxiliary losses with analytic gradients.

Everything is plain float64 numpy; gradients are derived by hand and checked
against central finite differences in the test suite. The product between
the paired projections in the relation and contact losses is elementwise,
which is the simplest reading that yields logit vectors of the class count.
Timestamps are normalized to t/T before the Fourier argument so encodings
are scale-free across sequence lengths (raw integer timestamps would alias:
sin/cos of 2-pi times an integer multiple is constant).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from .errors import PreconditionError, SchemaError

WEIGHTS_SEMANTICS_VERSION = "1"


@dataclass(frozen=True, eq=False)
class ProjectionWeights:
    """A seeded linear map; the seed is provenance recorded at init time."""

    matrix: np.ndarray  # (in_dim, out_dim) float64
    seed: int

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise PreconditionError(f"projection matrix must be 2D, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise PreconditionError("projection matrix contains non-finite values")
        object.__setattr__(self, "matrix", matrix)

    @property
    def in_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def out_dim(self) -> int:
        return self.matrix.shape[1]

    @classmethod
    def initialize(cls, in_dim: int, out_dim: int, seed: int) -> "ProjectionWeights":
        """Seeded Gaussian init, std 1/sqrt(in_dim)."""
        rng = np.random.default_rng(seed)
        matrix = rng.normal(0.0, 1.0 / math.sqrt(in_dim), size=(in_dim, out_dim))
        return cls(matrix=matrix, seed=seed)


@dataclass(frozen=True)
class LossWeights:
    lambda_act: float = 0.5
    lambda_spa: float = 0.5
    lambda_cont: float = 0.1

    def __post_init__(self):
        for name in ("lambda_act", "lambda_spa", "lambda_cont"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise PreconditionError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class MlpHead:
    """One-hidden-layer classifier head: d -> hidden (relu) -> classes."""

    hidden: ProjectionWeights
    output: ProjectionWeights

    def __post_init__(self):
        if self.hidden.out_dim != self.output.in_dim:
            raise PreconditionError(
                f"head dims mismatch: hidden out {self.hidden.out_dim} "
                f"!= output in {self.output.in_dim}"
            )

    @classmethod
    def initialize(cls, in_dim: int, hidden_dim: int, classes: int, seed: int) -> "MlpHead":
        return cls(
            hidden=ProjectionWeights.initialize(in_dim, hidden_dim, seed),
            output=ProjectionWeights.initialize(hidden_dim, classes, seed + 1),
        )


def sincos(y: np.ndarray) -> np.ndarray:
    """Concatenate sine and cosine of ``y`` along the last axis."""
    return np.concatenate([np.sin(y), np.cos(y)], axis=-1)


def normalize_to_unit_box(p: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Map a point into [0,1]^3 by axis-aligned bounds; clipped at the edges."""
    p = np.asarray(p, dtype=np.float64)
    span = np.asarray(hi, dtype=np.float64) - np.asarray(lo, dtype=np.float64)
    out = np.full(3, 0.5)
    valid = span > 0
    out[valid] = np.clip((p[valid] - np.asarray(lo)[valid]) / span[valid], 0.0, 1.0)
    return out


def sf_encode(mu: np.ndarray, sf_weights: ProjectionWeights) -> np.ndarray:
    """Spatial Fourier encoding of a [0,1]^3 coordinate; output length 2 * out_dim."""
    mu = np.asarray(mu, dtype=np.float64)
    if mu.shape != (3,) or sf_weights.in_dim != 3:
        raise PreconditionError(
            f"sf_encode needs a 3-vector and a 3xD/2 projection, "
            f"got {mu.shape} and {sf_weights.matrix.shape}"
        )
    return sincos((2.0 * np.pi * mu) @ sf_weights.matrix)


def tf_encode(t: int, num_frames: int, tf_weights: ProjectionWeights) -> np.ndarray:
    """Temporal Fourier encoding of timestamp t in [1, T], normalized to t/T."""
    if tf_weights.in_dim != 1:
        raise PreconditionError(f"tf projection must be 1xD/2, got {tf_weights.matrix.shape}")
    if not 1 <= t <= num_frames:
        raise PreconditionError(f"timestamp {t} outside [1, {num_frames}]")
    return sincos(2.0 * np.pi * (t / num_frames) * tf_weights.matrix[0])


def motion_pos_encoding(
    t: int,
    mu_t: np.ndarray,
    sf_weights: ProjectionWeights,
    tf_weights: ProjectionWeights,
    num_frames: int,
) -> np.ndarray:
    """Per-frame position encoding: spatial term plus temporal term."""
    return sf_encode(mu_t, sf_weights) + tf_encode(t, num_frames, tf_weights)


def tf_mean(num_frames: int, tf_weights: ProjectionWeights) -> np.ndarray:
    """Mean of the temporal encodings over t = 1..T."""
    if tf_weights.in_dim != 1:
        raise PreconditionError(f"tf projection must be 1xD/2, got {tf_weights.matrix.shape}")
    args = 2.0 * np.pi * (np.arange(1, num_frames + 1) / num_frames)
    return sincos(np.outer(args, tf_weights.matrix[0])).mean(axis=0)


def object_pos_encoding(
    mu_i: np.ndarray,
    num_frames: int,
    sf_weights: ProjectionWeights,
    tf_weights: ProjectionWeights,
) -> np.ndarray:
    """Per-object encoding: the object persists through the whole sequence, so
    the temporal term is averaged over every timestamp."""
    return sf_encode(mu_i, sf_weights) + tf_mean(num_frames, tf_weights)


def apply_position(x: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Aggregate a position encoding into a latent embedding (elementwise sum)."""
    x = np.asarray(x, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    if x.shape != e.shape:
        raise PreconditionError(f"embedding shapes differ: {x.shape} vs {e.shape}")
    return x + e


def fuse_context(m_t: np.ndarray, neighbors: list[np.ndarray] | np.ndarray) -> np.ndarray:
    """Fuse a motion embedding with the mean of its nearest object embeddings."""
    stack = np.asarray(neighbors, dtype=np.float64)
    if stack.ndim != 2 or stack.shape[0] == 0:
        raise PreconditionError("fuse_context needs at least one neighbor embedding")
    m_t = np.asarray(m_t, dtype=np.float64)
    if stack.shape[1] != m_t.shape[0]:
        raise PreconditionError(
            f"neighbor dim {stack.shape[1]} != motion dim {m_t.shape[0]}"
        )
    return m_t + stack.mean(axis=0)


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(_log_softmax(logits))


def act_loss(
    fused: np.ndarray, target: int, head: MlpHead
) -> tuple[float, dict[str, np.ndarray]]:
    """Cross-entropy of the activity head over time-averaged fused embeddings.

    Returns the scalar loss and analytic gradients w.r.t. the fused inputs
    and both head matrices.
    """
    fused = np.asarray(fused, dtype=np.float64)
    if fused.ndim != 2:
        raise PreconditionError(f"fused embeddings must be (T, d), got {fused.shape}")
    w1, w2 = head.hidden.matrix, head.output.matrix
    classes = w2.shape[1]
    if not 0 <= target < classes:
        raise PreconditionError(f"target {target} outside [0, {classes})")

    frames = fused.shape[0]
    pooled = fused.mean(axis=0)
    pre_act = pooled @ w1
    rectified = np.maximum(pre_act, 0.0)
    logits = rectified @ w2
    log_probs = _log_softmax(logits)
    loss = -float(log_probs[target])

    d_logits = np.exp(log_probs)
    d_logits[target] -= 1.0
    d_w2 = np.outer(rectified, d_logits)
    d_rect = w2 @ d_logits
    d_pre = d_rect * (pre_act > 0)
    d_w1 = np.outer(pooled, d_pre)
    d_pooled = w1 @ d_pre
    d_fused = np.tile(d_pooled / frames, (frames, 1))
    return loss, {"fused": d_fused, "hidden": d_w1, "output": d_w2}


def spa_loss(
    scene_emb: np.ndarray,
    motion_emb: np.ndarray,
    targets: np.ndarray,
    w_s: ProjectionWeights,
    w_m: ProjectionWeights,
) -> tuple[float, dict[str, np.ndarray]]:
    """Summed cross-entropy over all (object, frame) spatial-relation pairs.

    Pair logits are the elementwise product of the two projected embeddings.
    """
    scene_emb = np.asarray(scene_emb, dtype=np.float64)
    motion_emb = np.asarray(motion_emb, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.int64)
    n, t = scene_emb.shape[0], motion_emb.shape[0]
    classes = w_s.out_dim
    if targets.shape != (n, t):
        raise PreconditionError(f"targets shape {targets.shape} != {(n, t)}")
    if w_m.out_dim != classes:
        raise PreconditionError("both spatial projections must share out_dim")
    if targets.min() < 0 or targets.max() >= classes:
        raise PreconditionError(f"targets must lie in [0, {classes})")

    u = scene_emb @ w_s.matrix  # (N, C)
    v = motion_emb @ w_m.matrix  # (T, C)
    logits = u[:, None, :] * v[None, :, :]  # (N, T, C)
    log_probs = _log_softmax(logits)
    ii, tt = np.meshgrid(np.arange(n), np.arange(t), indexing="ij")
    loss = -float(log_probs[ii, tt, targets].sum())

    d_logits = np.exp(log_probs)
    d_logits[ii, tt, targets] -= 1.0
    d_u = np.einsum("itc,tc->ic", d_logits, v)
    d_v = np.einsum("itc,ic->tc", d_logits, u)
    return loss, {
        "scene": d_u @ w_s.matrix.T,
        "motion": d_v @ w_m.matrix.T,
        "w_s": scene_emb.T @ d_u,
        "w_m": motion_emb.T @ d_v,
    }


def cont_loss(
    scene_emb: np.ndarray,
    motion_emb: np.ndarray,
    targets: np.ndarray,
    w_s: ProjectionWeights,
    w_m: ProjectionWeights,
) -> tuple[float, dict[str, np.ndarray]]:
    """Summed binary cross-entropy over per-joint contact logits.

    One logit per (object, frame, joint), again from elementwise products of
    the paired projections; BCE is computed from logits for stability.
    """
    scene_emb = np.asarray(scene_emb, dtype=np.float64)
    motion_emb = np.asarray(motion_emb, dtype=np.float64)
    n, t = scene_emb.shape[0], motion_emb.shape[0]
    joints = w_s.out_dim
    bits = np.asarray(targets, dtype=np.float64)
    if bits.shape != (n, t, joints):
        raise PreconditionError(f"targets shape {bits.shape} != {(n, t, joints)}")
    if w_m.out_dim != joints:
        raise PreconditionError("both contact projections must share out_dim")

    u = scene_emb @ w_s.matrix  # (N, J)
    v = motion_emb @ w_m.matrix  # (T, J)
    logits = u[:, None, :] * v[None, :, :]  # (N, T, J)
    # BCE from logits: max(z, 0) - z*b + log(1 + exp(-|z|))
    loss = float(
        (np.maximum(logits, 0.0) - logits * bits + np.log1p(np.exp(-np.abs(logits)))).sum()
    )

    d_logits = expit(logits) - bits
    d_u = np.einsum("itj,tj->ij", d_logits, v)
    d_v = np.einsum("itj,ij->tj", d_logits, u)
    return loss, {
        "scene": d_u @ w_s.matrix.T,
        "motion": d_v @ w_m.matrix.T,
        "w_s": scene_emb.T @ d_u,
        "w_m": motion_emb.T @ d_v,
    }


def combine_losses(
    l_act: float, l_spa: float, l_cont: float, weights: LossWeights
) -> float:
    return (
        weights.lambda_act * l_act + weights.lambda_spa * l_spa + weights.lambda_cont * l_cont
    )


def central_difference_gradient(func, x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Numeric gradient of a scalar function by central differences."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        bumped = x.copy()
        bumped[index] = x[index] + step
        above = func(bumped)
        bumped[index] = x[index] - step
        below = func(bumped)
        grad[index] = (above - below) / (2.0 * step)
    return grad


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """Max elementwise |a - n| / max(|a|, |n|, floor)."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float((np.abs(analytic - numeric) / denom).max())


def save_projection(path: str | Path, weights: ProjectionWeights) -> None:
    """Write a projection: one JSON header line, then little-endian float64 data."""
    header = {
        "in_dim": weights.in_dim,
        "out_dim": weights.out_dim,
        "seed": int(weights.seed),
        "semantics_version": WEIGHTS_SEMANTICS_VERSION,
    }
    with open(path, "wb") as handle:
        handle.write(json.dumps(header, separators=(",", ":")).encode("ascii") + b"\n")
        handle.write(np.ascontiguousarray(weights.matrix, dtype="<f8").tobytes())


def load_projection(path: str | Path) -> ProjectionWeights:
    with open(path, "rb") as handle:
        header_line = handle.readline()
        blob = handle.read()
    try:
        header = json.loads(header_line)
        in_dim, out_dim = int(header["in_dim"]), int(header["out_dim"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad projection header: {exc}", offender=str(path)) from exc
    if header.get("semantics_version") != WEIGHTS_SEMANTICS_VERSION:
        raise SchemaError(
            f"unsupported weights semantics version {header.get('semantics_version')!r}",
            offender=str(path),
        )
    expected = in_dim * out_dim * 8
    if len(blob) != expected:
        raise SchemaError(
            f"projection payload has {len(blob)} bytes, expected {expected}",
            offender=str(path),
        )
    matrix = np.frombuffer(blob, dtype="<f8").reshape(in_dim, out_dim).astype(np.float64)
    return ProjectionWeights(matrix=matrix, seed=int(header["seed"]))
