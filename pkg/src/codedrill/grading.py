"""Submission grading against per-question test cases.

The default grader compares recorded program output (transcripts) against
each test case's expected stdout; an optional executor adapter runs an
external command per case instead. Output comparison is exact per line after
trailing-whitespace/final-newline normalization. A crashed or missing run
renders the actual output as null and the case as Incorrect.
"""

import logging
import re
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from .bank import Question
from .errors import ExecutorFailure, MissingTranscript
from .ontology import ConceptGraph

logger = logging.getLogger(__name__)

VERDICT_CORRECT = "Correct"
VERDICT_INCORRECT = "Incorrect"


@dataclass
class Submission:
    source: str
    outputs: "list[list[str] | str | None] | None" = None
    timestamp: float = field(default_factory=time.time)
    elapsed_seconds: float = 0.0


@dataclass(frozen=True)
class CaseResult:
    verdict: str
    input_shown: tuple[str, ...]
    expected_shown: tuple[str, ...]
    actual_shown: "tuple[str, ...] | None"  # None renders as null
    executor_failed: bool = False

    @property
    def correct(self) -> bool:
        return self.verdict == VERDICT_CORRECT


@dataclass(frozen=True)
class GradeReport:
    per_case: tuple[CaseResult, ...]

    @property
    def all_correct(self) -> bool:
        return all(c.correct for c in self.per_case)

    @property
    def executor_failures(self) -> int:
        return sum(1 for c in self.per_case if c.executor_failed)


@dataclass(frozen=True)
class GradeOptions:
    """Comparison knobs; everything beyond normalization defaults off."""

    case_insensitive: bool = False
    numeric_tolerance: float | None = None


class CommandExecutor:
    """Runs an external command per test case, feeding stdin, capturing stdout.

    The command is a template list; "{source}" expands to a temp file holding
    the submission. Nonzero exit or timeout yields None (the null marker).
    """

    def __init__(self, command: list[str], timeout: float = 5.0, suffix: str = ".py"):
        self.command = command
        self.timeout = timeout
        self.suffix = suffix

    def run_case(self, source: str, stdin_lines: "tuple[str, ...]") -> str | None:
        with tempfile.NamedTemporaryFile(
            "w", suffix=self.suffix, delete=False, encoding="utf-8"
        ) as fh:
            fh.write(source)
            src_path = fh.name
        argv = [a.replace("{source}", src_path) for a in self.command]
        stdin_text = "".join(line + "\n" for line in stdin_lines)
        try:
            proc = subprocess.run(
                argv,
                input=stdin_text,
                capture_output=True,
                text=True,
                timeout=self.timeout,
            )
        except subprocess.TimeoutExpired:
            logger.warning("executor timeout after %.1fs", self.timeout)
            return None
        except OSError as exc:
            raise ExecutorFailure(f"cannot run executor {argv[0]!r}: {exc}") from exc
        finally:
            Path(src_path).unlink(missing_ok=True)
        if proc.returncode != 0:
            return None
        return proc.stdout


def normalize_output(output: "list[str] | str | None") -> "tuple[str, ...] | None":
    """Split into lines, strip trailing whitespace, drop trailing blank lines."""
    if output is None:
        return None
    lines = output.splitlines() if isinstance(output, str) else list(output)
    lines = [line.rstrip() for line in lines]
    while lines and lines[-1] == "":
        lines.pop()
    return tuple(lines)


def _lines_equal(
    actual: "tuple[str, ...]", expected: "tuple[str, ...]", options: GradeOptions
) -> bool:
    if len(actual) != len(expected):
        return False
    for a, e in zip(actual, expected):
        if options.case_insensitive:
            a, e = a.lower(), e.lower()
        if a == e:
            continue
        if options.numeric_tolerance is not None:
            try:
                if abs(float(a) - float(e)) <= options.numeric_tolerance:
                    continue
            except ValueError:
                pass
        return False
    return True


def grade(
    submission: Submission,
    question: Question,
    executor: CommandExecutor | None = None,
    options: GradeOptions = GradeOptions(),
) -> GradeReport:
    """Grade a submission case by case.

    Transcript mode needs one recorded output per test case (null entries mark
    crashed runs); execution mode runs the executor per case. Incorrect cases
    carry the input, expected, and actual blocks for feedback.
    """
    n = len(question.test_cases)
    if executor is None:
        if submission.outputs is None:
            raise MissingTranscript("no recorded outputs and no executor configured")
        if len(submission.outputs) != n:
            raise MissingTranscript(
                f"expected {n} transcripts, got {len(submission.outputs)}"
            )
        raw_outputs = submission.outputs
        failures = [False] * n
    else:
        raw_outputs = []
        failures = []
        for case in question.test_cases:
            out = executor.run_case(submission.source, case.stdin_lines)
            raw_outputs.append(out)
            failures.append(out is None)

    results = []
    for case, raw, failed in zip(question.test_cases, raw_outputs, failures):
        actual = normalize_output(raw)
        expected = normalize_output(list(case.expected_stdout_lines))
        correct = actual is not None and _lines_equal(actual, expected, options)
        results.append(
            CaseResult(
                verdict=VERDICT_CORRECT if correct else VERDICT_INCORRECT,
                input_shown=case.stdin_lines,
                expected_shown=expected,
                actual_shown=actual,
                executor_failed=failed,
            )
        )
    return GradeReport(per_case=tuple(results))


def strip_comments(source: str, graph: ConceptGraph, language: str) -> str:
    """Remove comments using the language's delimiters from the ontology."""
    spec = graph.language_spec(language)
    text = source
    for opener, closer in spec.block_comments:
        pattern = re.escape(opener) + r".*?" + re.escape(closer)
        text = re.sub(pattern, " ", text, flags=re.DOTALL)
    if spec.line_comment:
        text = re.sub(re.escape(spec.line_comment) + r"[^\n]*", " ", text)
    return text


def _marker_present(marker: str, text: str) -> bool:
    if re.fullmatch(r"[\w]+", marker):
        return re.search(rf"\b{re.escape(marker)}\b", text) is not None
    return marker in text


def detect_missing_logic(
    source: str,
    question: Question,
    graph: ConceptGraph,
    *,
    all_correct: bool,
) -> bool:
    """Flag a failing submission that shows none of the required concepts.

    True only when the grade was not all-correct and, for every tagged
    concept that declares markers for the question's language, no marker
    appears as a token in the comment-stripped source. Abstains (False) when
    no tagged concept declares markers.
    """
    if all_correct:
        return False
    marker_sets = [
        graph.markers_for(tag, question.language) for tag in question.concept_tags
    ]
    marker_sets = [m for m in marker_sets if m]
    if not marker_sets:
        return False
    text = strip_comments(source, graph, question.language)
    for markers in marker_sets:
        if any(_marker_present(m, text) for m in markers):
            return False
    return True


def render_feedback(report: GradeReport) -> dict:
    """Feedback document: ordered per-case blocks, inputs/expected/actual on failures."""
    cases = []
    for result in report.per_case:
        block: dict = {"verdict": result.verdict}
        if not result.correct:
            block["input"] = list(result.input_shown)
            block["expected"] = list(result.expected_shown)
            block["actual"] = None if result.actual_shown is None else list(result.actual_shown)
        cases.append(block)
    return {"cases": cases, "all_correct": report.all_correct}
