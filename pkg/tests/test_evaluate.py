import math
import random

import numpy as np
import pytest

from humanscene.errors import (
    JudgeFormatError,
    PreconditionError,
    UndefinedCorrelationError,
)
from humanscene.evaluate import (
    ScoreRecord,
    average_score,
    build_report,
    judge_answers,
    load_score_records,
    parse_judge_score,
    pearson,
    task_score,
)


class TestParseJudgeScore:
    def test_score_line(self):
        assert parse_judge_score("The answer is fine.\nScore: 2") == 2

    def test_bare_integer(self):
        assert parse_judge_score("1") == 1

    def test_word_rejected(self):
        with pytest.raises(JudgeFormatError):
            parse_judge_score("three")

    def test_out_of_range_rejected(self):
        with pytest.raises(JudgeFormatError):
            parse_judge_score("Score: 3")

    def test_decimal_not_a_token(self):
        with pytest.raises(JudgeFormatError):
            parse_judge_score("I rate it 0.5")

    def test_last_token_wins(self):
        assert parse_judge_score("2 points of 2 -> final 1") == 1

    def test_trailing_blank_lines_ignored(self):
        assert parse_judge_score("reasoning...\nScore: 0\n\n  \n") == 0

    def test_empty_rejected(self):
        with pytest.raises(JudgeFormatError):
            parse_judge_score("   \n  ")

    def test_raw_text_attached(self):
        with pytest.raises(JudgeFormatError) as excinfo:
            parse_judge_score("no score here")
        assert excinfo.value.raw == "no score here"


def records(subtask, scores):
    return [ScoreRecord(f"q{i}", s, subtask) for i, s in enumerate(scores)]


class TestTaskScore:
    def test_fifty_full_marks_is_hundred(self):
        assert task_score(records("navigation", [2] * 50)) == 100.0

    def test_all_zero(self):
        assert task_score(records("navigation", [0] * 50)) == 0.0

    def test_ten_records_sum_twelve(self):
        assert task_score(records("contact_part", [2, 2, 2, 1, 1, 1, 1, 1, 1, 0])) == 60.0

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            task_score([])

    def test_mixed_subtasks_rejected(self):
        mixed = records("navigation", [2]) + records("contact_part", [2])
        with pytest.raises(PreconditionError):
            task_score(mixed)

    def test_monotone_and_bounded(self):
        rng = random.Random(3)
        for _ in range(50):
            scores = [rng.randint(0, 2) for _ in range(20)]
            base = task_score(records("navigation", scores))
            assert 0.0 <= base <= 100.0
            for i in range(20):
                if scores[i] < 2:
                    bumped = list(scores)
                    bumped[i] += 1
                    assert task_score(records("navigation", bumped)) >= base

    def test_invalid_score_rejected(self):
        with pytest.raises(PreconditionError):
            ScoreRecord("q", 3, "navigation")


class TestAverageScore:
    def test_constant_tasks(self):
        assert average_score({t: 50.0 for t in ("navigation", "contact_part")}) == 50.0

    def test_single_task(self):
        assert average_score({"navigation": 73.5}) == 73.5

    def test_matches_independent_mean(self):
        rng = random.Random(11)
        values = {f"t{i}": rng.uniform(0, 100) for i in range(16)}
        total = 0.0
        for v in values.values():
            total += v
        assert abs(average_score(values) - total / 16) < 1e-12

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            average_score({})


def pearson_textbook(x, y):
    # Oracle: the raw-sums formulation, scalar arithmetic only.
    n = len(x)
    sx = sum(x)
    sy = sum(y)
    sxx = sum(v * v for v in x)
    syy = sum(v * v for v in y)
    sxy = sum(a * b for a, b in zip(x, y))
    return (n * sxy - sx * sy) / math.sqrt((n * sxx - sx * sx) * (n * syy - sy * sy))


class TestPearson:
    def test_identity_correlation(self):
        rng = random.Random(5)
        x = [rng.uniform(-10, 10) for _ in range(100)]
        assert pearson(x, x) == pytest.approx(1.0, abs=1e-12)

    def test_negated_correlation(self):
        rng = random.Random(7)
        x = [rng.uniform(-10, 10) for _ in range(100)]
        assert pearson(x, [-v for v in x]) == pytest.approx(-1.0, abs=1e-12)

    def test_matches_textbook_formula(self):
        rng = random.Random(13)
        for _ in range(50):
            n = rng.randint(2, 40)
            x = [rng.uniform(-5, 5) for _ in range(n)]
            y = [rng.uniform(-5, 5) for _ in range(n)]
            if len(set(x)) == 1 or len(set(y)) == 1:
                continue
            assert pearson(x, y) == pytest.approx(pearson_textbook(x, y), abs=1e-9)

    def test_affine_invariance(self):
        rng = random.Random(17)
        x = [rng.uniform(0, 1) for _ in range(60)]
        y = [rng.uniform(0, 1) for _ in range(60)]
        base = pearson(x, y)
        scaled = pearson([3.0 * v + 7.0 for v in x], [0.5 * v - 2.0 for v in y])
        assert scaled == pytest.approx(base, abs=1e-9)

    def test_constant_input_rejected(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            pearson([1.0, 2.0], [1.0])

    def test_bounded(self):
        rng = random.Random(19)
        for _ in range(100):
            x = [rng.gauss(0, 1) for _ in range(10)]
            y = [rng.gauss(0, 1) for _ in range(10)]
            assert -1.0 <= pearson(x, y) <= 1.0


class TestReport:
    def test_order_independence(self):
        rng = random.Random(23)
        rows = records("navigation", [2, 1, 0, 2, 1]) + records("contact_part", [1, 1, 2])
        base = build_report(rows)
        shuffled = list(rows)
        rng.shuffle(shuffled)
        assert build_report(shuffled).to_dict() == base.to_dict()

    def test_fixture_file(self, data_dir):
        rows, failures = load_score_records(data_dir / "demo_scores.jsonl")
        assert failures == 1
        report = build_report(rows, failures)
        assert report.per_task["interacting_object"] == 60.0
        assert report.per_task["single_activity"] == pytest.approx(62.5)
        assert report.average == pytest.approx((60.0 + 62.5) / 2)
        assert report.parse_failures == 1
        assert report.record_counts == {"interacting_object": 10, "single_activity": 4}

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            build_report([])


class ScriptedJudge:
    def __init__(self):
        self.prompts = []

    def send(self, prompt: str) -> str:
        self.prompts.append(prompt)
        if "bad candidate" in prompt:
            return "I cannot give a numeric judgement."
        if "perfect candidate" in prompt:
            return "Matches fully.\nScore: 2"
        return "Partially right.\nScore: 1"


class TestJudgeAnswers:
    def test_scores_and_failures(self):
        rows = [
            {"question_id": "a", "subtask": "navigation", "question": "Q1",
             "reference": "R1", "candidate": "perfect candidate"},
            {"question_id": "b", "subtask": "navigation", "question": "Q2",
             "reference": "R2", "candidate": "meh candidate"},
            {"question_id": "c", "subtask": "navigation", "question": "Q3",
             "reference": "R3", "candidate": "bad candidate"},
        ]
        client = ScriptedJudge()
        scored, failures = judge_answers(client, rows, max_in_flight=2)
        assert failures == 1
        assert [(r.question_id, r.score) for r in scored] == [("a", 2), ("b", 1)]
        assert len(client.prompts) == 3
        assert all("Scoring rules:" in p for p in client.prompts)
