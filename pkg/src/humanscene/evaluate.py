"""Scoring for open-ended QA: judge-output parsing, per-task aggregation on
the 100-point scale, and evaluator-consistency statistics.

Judge parse failures are counted and reported separately, never imputed as a
zero score: silent zeroing would bias every aggregate downward.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import JudgeFormatError, PreconditionError, UndefinedCorrelationError
from .textgen import SUBTASKS, LLMClient, build_judge_prompt, send_many

VALID_SCORES = (0, 1, 2)

# Standalone integers: not adjacent to letters, digits, '.', '-' (so "0.5",
# "v2", "3-1" never shed score tokens).
_INT_TOKEN = re.compile(r"(?<![\w.\-])(\d+)(?![\w.])")


@dataclass(frozen=True)
class ScoreRecord:
    question_id: str
    score: int
    subtask: str

    def __post_init__(self):
        if self.score not in VALID_SCORES:
            raise PreconditionError(f"score must be in {VALID_SCORES}, got {self.score}")
        if self.subtask not in SUBTASKS:
            raise PreconditionError(f"unknown subtask tag {self.subtask!r}")


def parse_judge_score(judge_output: str) -> int:
    """Extract the score from a judge reply.

    The last standalone integer token on the final non-empty line must be
    0, 1 or 2; anything else raises, with the raw text attached. There is no
    silent defaulting.
    """
    lines = [line for line in judge_output.splitlines() if line.strip()]
    if not lines:
        raise JudgeFormatError("judge output is empty", judge_output)
    tokens = _INT_TOKEN.findall(lines[-1])
    if not tokens:
        raise JudgeFormatError("final line carries no integer token", judge_output)
    value = int(tokens[-1])
    if value not in VALID_SCORES:
        raise JudgeFormatError(f"score token {value} outside {VALID_SCORES}", judge_output)
    return value


def task_score(records: Sequence[ScoreRecord]) -> float:
    """Scale summed scores so a full-mark set maps to 100.

    With the benchmark's 50 questions x 2 points this reproduces the
    100-point scale exactly; smaller desk-scale sets scale proportionally.
    """
    if not records:
        raise PreconditionError("task_score needs at least one record")
    tags = {record.subtask for record in records}
    if len(tags) != 1:
        raise PreconditionError(f"records span multiple sub-tasks: {sorted(tags)}")
    total = sum(record.score for record in records)
    return total * 100.0 / (2 * len(records))


def average_score(task_scores: Mapping[str, float]) -> float:
    """Unweighted mean over the provided sub-task scores (equal per dimension)."""
    if not task_scores:
        raise PreconditionError("average_score needs at least one task score")
    return sum(task_scores.values()) / len(task_scores)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient in [-1, 1]."""
    if len(x) != len(y):
        raise PreconditionError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise PreconditionError("pearson needs at least two samples")
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    dx = [value - mean_x for value in x]
    dy = [value - mean_y for value in y]
    var_x = sum(d * d for d in dx)
    var_y = sum(d * d for d in dy)
    if var_x == 0 or var_y == 0:
        raise UndefinedCorrelationError("correlation undefined for constant input")
    r = sum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class ScoreReport:
    per_task: dict[str, float]
    average: float
    parse_failures: int
    record_counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "per_task": dict(sorted(self.per_task.items())),
            "average": self.average,
            "parse_failures": self.parse_failures,
            "record_counts": dict(sorted(self.record_counts.items())),
        }


def build_report(records: Iterable[ScoreRecord], parse_failures: int = 0) -> ScoreReport:
    """Group records by sub-task, score each, and average across dimensions."""
    by_task: dict[str, list[ScoreRecord]] = {}
    for record in records:
        by_task.setdefault(record.subtask, []).append(record)
    if not by_task:
        raise PreconditionError("no score records to aggregate")
    per_task = {tag: task_score(group) for tag, group in by_task.items()}
    return ScoreReport(
        per_task=per_task,
        average=average_score(per_task),
        parse_failures=parse_failures,
        record_counts={tag: len(group) for tag, group in by_task.items()},
    )


def load_score_records(path: str | Path) -> tuple[list[ScoreRecord], int]:
    """Read a JSONL score file; returns (records, parse_failure_count).

    Rows carry either a pre-parsed "score" or a raw "judge_text" to parse.
    Unparseable judge text counts as a failure; structurally invalid rows
    raise.
    """
    records: list[ScoreRecord] = []
    failures = 0
    for line_number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        row = json.loads(line)
        if "score" in row:
            score = int(row["score"])
        elif "judge_text" in row:
            try:
                score = parse_judge_score(str(row["judge_text"]))
            except JudgeFormatError:
                failures += 1
                continue
        else:
            raise PreconditionError(
                f"{path}:{line_number}: row needs either 'score' or 'judge_text'"
            )
        records.append(
            ScoreRecord(
                question_id=str(row.get("question_id", f"row-{line_number}")),
                score=score,
                subtask=str(row["subtask"]),
            )
        )
    return records, failures


_JUDGE_ROW_KEYS = ("question_id", "subtask", "question", "reference", "candidate")


def load_judge_rows(path: str | Path) -> list[dict]:
    """Read answer triples for online judging: question, reference, candidate."""
    rows = []
    for line_number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        row = json.loads(line)
        missing = [key for key in _JUDGE_ROW_KEYS if key not in row]
        if missing:
            raise PreconditionError(f"{path}:{line_number}: row missing keys {missing}")
        rows.append(row)
    return rows


def judge_answers(
    client: LLMClient, rows: Sequence[dict], max_in_flight: int = 4
) -> tuple[list[ScoreRecord], int]:
    """Judge answer triples via the LLM client; returns (records, parse failures)."""
    prompts = [
        build_judge_prompt(str(r["question"]), str(r["reference"]), str(r["candidate"]))
        for r in rows
    ]
    responses = send_many(client, prompts, max_in_flight)
    records: list[ScoreRecord] = []
    failures = 0
    for row, response in zip(rows, responses):
        try:
            score = parse_judge_score(response)
        except JudgeFormatError:
            failures += 1
            continue
        records.append(ScoreRecord(str(row["question_id"]), score, str(row["subtask"])))
    return records, failures
