"""Text generation: annotation lines, QA-generation prompts, the judge prompt,
and LLM response parsing.

Prompt templates live as versioned asset files next to this module so the
byte-exact prompt tests compare data, not code literals. External LLM access
goes through the :class:`LLMClient` interface; the engine itself never hosts
a model.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Protocol, Sequence

import requests

from .annotate import FrameAnnotation, OrientationCategory, annotate_frame
from .config import EngineConfig, LLMSettings
from .errors import (
    LLMClientError,
    NotGeneratableError,
    PreconditionError,
    ResponseParseError,
)
from .motion import MotionSequence, PoseFrame, select_key_frames
from .scene import Scene
from .scenegraph import scene_expressions

# The 16 sub-task tags. Three require human annotators and are never
# GPT-generated; the UI flow owns those.
SUBTASKS = (
    "single_activity",
    "sequential_activity",
    "human_position",
    "body_orientation",
    "object_orientation",
    "interaction_type",
    "interacting_object",
    "contact_part",
    "focus_analysis",
    "situated_analysis",
    "intent_prediction",
    "movement_prediction",
    "situated_dialogue",
    "high_level_task",
    "low_level_task",
    "navigation",
)

HUMAN_ANNOTATED_SUBTASKS = frozenset({"focus_analysis", "situated_analysis", "navigation"})

GENERATABLE_SUBTASKS = tuple(t for t in SUBTASKS if t not in HUMAN_ANNOTATED_SUBTASKS)

# Instruction templates for corpus assembly; [REPLACE] is substituted with
# serialized scene/motion content by downstream training tooling.
INSTRUCTION_SCENE_ONLY = "Examine the indoor scene. Object information in the scene: [REPLACE]."
INSTRUCTION_MOTION_ONLY = "Examine the human motion sequence. Motion sequence: [REPLACE]."
INSTRUCTION_SCENE_MOTION_STAGE1 = (
    "Examine the indoor scene and a human motion sequence in the scene. "
    "Object information in scene: [REPLACE]. Motion sequence in scene:[REPLACE]."
)
INSTRUCTION_SCENE_MOTION_STAGE2 = (
    "The conversation centers around an indoor scene and a human motion sequence. "
    "Object information in scene: [REPLACE]. Motion sequence: [REPLACE]. "
    "Based on the provided information, give an accurate answer to the following "
    "question raised by the user:"
)

ORIENTATION_PHRASES = {
    OrientationCategory.FACING_TOWARDS: "in front of",
    OrientationCategory.ON_LEFT: "on the left of",
    OrientationCategory.ON_RIGHT: "on the right of",
    OrientationCategory.FACING_AWAY: "behind",
    OrientationCategory.AT: "at",
}


def _load_template(name: str) -> str:
    return (resources.files("humanscene") / "templates" / name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class QARecord:
    question: str
    answer: str
    subtask: str
    scene_id: str
    motion_id: str
    start_frame: int
    end_frame: int

    def __post_init__(self):
        if self.subtask not in SUBTASKS:
            raise PreconditionError(f"unknown subtask tag {self.subtask!r}")
        if not self.question.strip() or not self.answer.strip():
            raise PreconditionError("question and answer must be non-empty")
        if not 0 <= self.start_frame <= self.end_frame:
            raise PreconditionError(
                f"need 0 <= start_frame <= end_frame, got "
                f"{self.start_frame}..{self.end_frame}"
            )

    def check_frame_range(self, num_frames: int) -> None:
        if self.end_frame >= num_frames:
            raise PreconditionError(
                f"end_frame {self.end_frame} outside motion of {num_frames} frames"
            )

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "answer": self.answer,
            "subtask": self.subtask,
            "scene": self.scene_id,
            "motion": self.motion_id,
            "start_frame": self.start_frame,
            "end_frame": self.end_frame,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "QARecord":
        return cls(
            question=str(payload["question"]),
            answer=str(payload["answer"]),
            subtask=str(payload["subtask"]),
            scene_id=str(payload["scene"]),
            motion_id=str(payload["motion"]),
            start_frame=int(payload["start_frame"]),
            end_frame=int(payload["end_frame"]),
        )


@dataclass(frozen=True)
class AnnotationBundle:
    """Everything the QA prompt needs: scene expressions, activity, frame texts."""

    scene_id: str
    motion_id: str
    scene_lines: tuple[str, ...]
    activity: str | None
    frame_texts: tuple[tuple[int, tuple[str, ...]], ...]  # (frame index, lines), ascending
    num_frames: int


def render_frame_text(annotation: FrameAnnotation, scene: Scene) -> list[str]:
    """Fixed-template lines for one annotated frame: contacts, positions, betweens."""
    lines = []
    for contact in annotation.contacts:
        label = scene.get(contact.object_id).label
        lines.append(f"The person's {contact.joint.label} is in contact with the {label}.")
    for position in annotation.positions:
        label = scene.get(position.object_id).label
        phrase = ORIENTATION_PHRASES[position.orientation]
        lines.append(
            f"The {label} is {phrase} the person, about {position.distance:.1f} meters away."
        )
    for between in annotation.betweens:
        left = scene.get(between.left_object_id).label
        right = scene.get(between.right_object_id).label
        lines.append(f"The person is between the {left} and the {right}.")
    return lines


PoseNarrator = Callable[[PoseFrame], str]


def build_bundle(
    scene: Scene,
    motion: MotionSequence,
    config: EngineConfig | None = None,
    activity: str | None = None,
    annotations: Sequence[FrameAnnotation] | None = None,
    narrator: PoseNarrator | None = None,
) -> AnnotationBundle:
    """Assemble the annotation bundle for prompt construction.

    ``narrator`` is the optional pose-narration hook (an external model);
    when absent, bundles simply carry no pose lines.
    """
    config = config or EngineConfig()
    if annotations is None:
        key_frames = select_key_frames(motion, config.stride)
        annotations = [annotate_frame(motion[t], scene, config) for t in key_frames]
    frame_texts = []
    for annotation in sorted(annotations, key=lambda a: a.frame_index):
        lines = render_frame_text(annotation, scene)
        if narrator is not None:
            lines.insert(0, narrator(motion[annotation.frame_index]))
        frame_texts.append((annotation.frame_index, tuple(lines)))
    return AnnotationBundle(
        scene_id=scene.id,
        motion_id=motion.id,
        scene_lines=tuple(
            scene_expressions(scene, config.theta_near_m, config.theta_overlap)
        ),
        activity=activity,
        frame_texts=tuple(frame_texts),
        num_frames=len(motion),
    )


def _bundle_block(bundle: AnnotationBundle) -> str:
    parts = ["Scene layout:"]
    if bundle.scene_lines:
        parts.extend(f"- {line}" for line in bundle.scene_lines)
    else:
        parts.append("- (no object relations detected)")
    if bundle.activity is not None:
        parts.append(f"Activity: {bundle.activity}")
    for frame_index, lines in bundle.frame_texts:
        parts.append(f"Frame {frame_index}:")
        parts.extend(f"- {line}" for line in lines)
    return "\n".join(parts)


def build_qa_prompt(bundle: AnnotationBundle, subtask: str) -> str:
    """Fill the general QA template with a sub-task instruction block.

    Byte-deterministic. Raises :class:`NotGeneratableError` for the three
    human-annotated sub-tasks (those flow through the annotation UI).
    """
    if subtask not in SUBTASKS:
        raise PreconditionError(f"unknown subtask tag {subtask!r}")
    if subtask in HUMAN_ANNOTATED_SUBTASKS:
        raise NotGeneratableError(
            f"sub-task {subtask!r} is human-annotated; author it in the annotation UI"
        )
    general = _load_template("qa_general.txt")
    instructions = _load_template(f"qa_tasks/{subtask}.txt").rstrip("\n")
    return general.replace("{TASK_INSTRUCTIONS}", instructions).replace(
        "{ANNOTATIONS}", _bundle_block(bundle)
    )


def build_judge_prompt(question: str, ground_truth: str, candidate_answer: str) -> str:
    """Fill the judge template; the reply must end with an integer score in {0,1,2}."""
    template = _load_template("judge.txt")
    return (
        template.replace("[QUESTION]", question)
        .replace("[REFERENCE]", ground_truth)
        .replace("[CANDIDATE]", candidate_answer)
    )


def parse_llm_qa(
    response: str,
    *,
    subtask: str,
    scene_id: str,
    motion_id: str,
    start_frame: int,
    end_frame: int,
    num_frames: int,
) -> list[QARecord]:
    """Parse the mandated JSON-array response into QA records.

    Question/answer text is taken verbatim from the payload; sub-task, ids,
    and the frame span come from the generation context. Any deviation from
    the contract raises :class:`ResponseParseError` carrying the raw text.
    """
    try:
        payload = json.loads(response)
    except json.JSONDecodeError as exc:
        raise ResponseParseError(f"response is not valid JSON: {exc}", response) from exc
    if not isinstance(payload, list):
        raise ResponseParseError("response must be a JSON array", response)
    records = []
    for item in payload:
        if not isinstance(item, dict) or set(item) != {"question", "answer"}:
            raise ResponseParseError(
                "each element must be an object with exactly 'question' and 'answer'",
                response,
            )
        if not isinstance(item["question"], str) or not isinstance(item["answer"], str):
            raise ResponseParseError("'question' and 'answer' must be strings", response)
        try:
            record = QARecord(
                question=item["question"],
                answer=item["answer"],
                subtask=subtask,
                scene_id=scene_id,
                motion_id=motion_id,
                start_frame=start_frame,
                end_frame=end_frame,
            )
            record.check_frame_range(num_frames)
        except PreconditionError as exc:
            raise ResponseParseError(f"record violates invariants: {exc}", response) from exc
        records.append(record)
    return records


def qa_records_to_response(records: Sequence[QARecord]) -> str:
    """Serialize records back into the response wire shape (tests use this)."""
    return json.dumps(
        [{"question": r.question, "answer": r.answer} for r in records],
        ensure_ascii=False,
    )


class LLMClient(Protocol):
    def send(self, prompt: str) -> str: ...


class HttpLLMClient:
    """POSTs {"prompt": ...} to the configured endpoint, expects {"text": ...}.

    Retries with exponential backoff on transport errors and 5xx; failures
    surface as :class:`LLMClientError`, never as empty strings.
    """

    def __init__(self, settings: LLMSettings):
        if not settings.endpoint:
            raise PreconditionError("LLM endpoint is not configured")
        self.settings = settings

    def send(self, prompt: str) -> str:
        headers = {}
        token = os.environ.get(self.settings.auth_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        last_error: Exception | None = None
        for attempt in range(self.settings.retries + 1):
            if attempt > 0:
                time.sleep(self.settings.backoff_s * 2 ** (attempt - 1))
            try:
                response = requests.post(
                    self.settings.endpoint,
                    json={"prompt": prompt},
                    headers=headers,
                    timeout=self.settings.timeout_s,
                )
                if response.status_code >= 500:
                    last_error = LLMClientError(f"server error {response.status_code}")
                    continue
                response.raise_for_status()
                text = response.json().get("text", "")
                if not isinstance(text, str) or not text:
                    raise LLMClientError("LLM endpoint returned an empty response")
                return text
            except requests.RequestException as exc:
                last_error = exc
        raise LLMClientError(
            f"LLM call failed after {self.settings.retries + 1} attempts: {last_error}"
        )


def send_many(client: LLMClient, prompts: Sequence[str], max_in_flight: int = 4) -> list[str]:
    """Issue calls concurrently up to the in-flight limit; results in input order."""
    if max_in_flight < 1:
        raise PreconditionError("max_in_flight must be >= 1")
    if not prompts:
        return []
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(client.send, prompts))


class TranscriptWriter:
    """Appends prompt/response pairs as JSONL for audit."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def record(self, prompt: str, response: str) -> None:
        line = json.dumps({"prompt": prompt, "response": response}, ensure_ascii=False)
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(line + "\n")
