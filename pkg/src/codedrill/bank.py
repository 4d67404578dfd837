"""Question bank: domain types and JSON loading.

Bank document format:

    {
      "questions": [
        {
          "id": 18,
          "language": "python",
          "level": "easy" | "standard" | "difficult",
          "concept_tags": ["conditionals", ...],
          "prompt_en": "...",
          "prompt_th": "...",            # optional
          "test_cases": [
            {"stdin": ["0.1", "1"], "expected_stdout": ["False"]}
          ],
          "reference_solution": "..."    # optional
        }
      ],
      "pretests": {                      # optional; rating-inert questions
        "conditionals": [ {question object}, ... ]
      }
    }
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError
from .scheduler import Level


@dataclass(frozen=True)
class TestCase:
    stdin_lines: tuple[str, ...]
    expected_stdout_lines: tuple[str, ...]


@dataclass
class Question:
    id: int
    language: str
    concept_tags: list[str]
    level: Level
    prompt_en: str
    test_cases: list[TestCase]
    prompt_th: str | None = None
    reference_solution: str | None = None


@dataclass
class QuestionBank:
    """Questions indexed by id, with per-concept/per-level pools and pretests."""

    questions: dict[int, Question] = field(default_factory=dict)
    pretests: dict[str, list[Question]] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.questions.values())

    def __len__(self) -> int:
        return len(self.questions)

    def __getitem__(self, question_id: int) -> Question:
        return self.questions[question_id]

    def concept_pool(self, concept_id: str) -> list[int]:
        """All question ids tagged with the concept, ascending."""
        return sorted(q.id for q in self if concept_id in q.concept_tags)

    def level_pool(self, concept_id: str, level: Level) -> list[int]:
        """Question ids tagged with the concept at one difficulty level, ascending."""
        return sorted(q.id for q in self if concept_id in q.concept_tags and q.level is level)


def _parse_question(raw: dict) -> Question:
    try:
        cases = [
            TestCase(tuple(c.get("stdin", [])), tuple(c["expected_stdout"]))
            for c in raw["test_cases"]
        ]
        # duplicate tags would break hint emphasis; drop repeats, keep order
        tags = list(dict.fromkeys(raw["concept_tags"]))
        return Question(
            id=int(raw["id"]),
            language=raw.get("language", "python"),
            concept_tags=tags,
            level=Level(raw["level"]),
            prompt_en=raw.get("prompt_en", ""),
            prompt_th=raw.get("prompt_th"),
            test_cases=cases,
            reference_solution=raw.get("reference_solution"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad question entry {raw.get('id', '?')}: {exc}") from exc


def parse_bank(doc: dict) -> QuestionBank:
    """Build a QuestionBank from a parsed bank document."""
    if not isinstance(doc, dict) or "questions" not in doc:
        raise ParseError('bank document must be an object with a "questions" list')
    bank = QuestionBank()
    for raw in doc["questions"]:
        q = _parse_question(raw)
        if q.id in bank.questions:
            raise ParseError(f"duplicate question id {q.id}")
        if not q.test_cases:
            raise ParseError(f"question {q.id} has no test cases")
        if not q.concept_tags:
            raise ParseError(f"question {q.id} has no concept tags")
        bank.questions[q.id] = q
    for concept, raws in doc.get("pretests", {}).items():
        bank.pretests[concept] = [_parse_question(r) for r in raws]
    return bank


def load_bank(path: "str | Path") -> QuestionBank:
    """Load and parse a bank JSON file."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read bank {path}: {exc}") from exc
    return parse_bank(doc)
