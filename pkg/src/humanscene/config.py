"""Engine configuration: every geometric threshold, loss weight, and seed.

Key names carry units where a bare number would be ambiguous (``epsilon_m``
is meters). A content hash of the configuration is stamped into every output
record so downstream consumers can detect mixed-config datasets.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import PreconditionError, SchemaError

CONFIG_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class LLMSettings:
    endpoint: str = ""
    auth_env: str = "HUMANSCENE_LLM_TOKEN"
    timeout_s: float = 60.0
    retries: int = 3
    backoff_s: float = 1.0
    max_in_flight: int = 4

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise PreconditionError("llm timeout_s must be > 0")
        if self.retries < 0 or self.max_in_flight < 1:
            raise PreconditionError("llm retries must be >= 0 and max_in_flight >= 1")


@dataclass(frozen=True)
class EngineConfig:
    # Contact and position annotation thresholds.
    epsilon_m: float = 0.1
    r_at_m: float = 0.8
    r_between_m: float = 2.0
    alpha_sym_rad: float = math.pi / 6
    hip_degeneracy_m: float = 1e-3
    # Spatial-relation proximity split and scene-graph thresholds.
    theta_prox_m: float = 2.0
    theta_near_m: float = 1.5
    theta_overlap: float = 0.3
    # Key-frame selection.
    stride: int = 30
    contact_change_frames: bool = False
    # Supervision labels and encodings.
    k_nearest: int = 3
    embed_dim: int = 64
    mlp_hidden: int = 64
    seed: int = 0
    lambda_act: float = 0.5
    lambda_spa: float = 0.5
    lambda_cont: float = 0.1
    llm: LLMSettings = field(default_factory=LLMSettings)

    def __post_init__(self):
        positive = (
            "epsilon_m",
            "r_at_m",
            "r_between_m",
            "alpha_sym_rad",
            "hip_degeneracy_m",
            "theta_prox_m",
            "theta_near_m",
            "theta_overlap",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise PreconditionError(f"config {name} must be > 0")
        if self.stride < 1 or self.k_nearest < 1:
            raise PreconditionError("stride and k_nearest must be >= 1")
        if self.embed_dim < 2 or self.embed_dim % 2 != 0:
            raise PreconditionError("embed_dim must be even and >= 2")
        if self.mlp_hidden < 1:
            raise PreconditionError("mlp_hidden must be >= 1")
        for name in ("lambda_act", "lambda_spa", "lambda_cont"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise PreconditionError(f"config {name} must be finite and >= 0")

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload["schema_version"] = CONFIG_SCHEMA_VERSION
        return payload

    def content_hash(self) -> str:
        """Stable 16-hex-digit digest of the full configuration."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def replace(self, **overrides) -> "EngineConfig":
        payload = asdict(self)
        llm = payload.pop("llm")
        payload.update({k: v for k, v in overrides.items() if k != "llm"})
        payload["llm"] = overrides.get("llm", LLMSettings(**llm))
        return EngineConfig(**payload)


def load_config(path: str | Path) -> EngineConfig:
    """Read a JSON config file; unknown keys are rejected, missing keys default."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config file is not valid JSON: {exc}", offender=str(path)) from exc
    payload.pop("schema_version", None)
    known = {f.name for f in fields(EngineConfig)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise SchemaError(f"unknown config keys {unknown}", offender=str(path))
    if "llm" in payload:
        llm_known = {f.name for f in fields(LLMSettings)}
        llm_unknown = sorted(set(payload["llm"]) - llm_known)
        if llm_unknown:
            raise SchemaError(f"unknown llm config keys {llm_unknown}", offender=str(path))
        payload["llm"] = LLMSettings(**payload["llm"])
    try:
        return EngineConfig(**payload)
    except PreconditionError as exc:
        raise SchemaError(str(exc), offender=str(path)) from exc
