"""Log-derived practice analytics.

Six features per learner from the event stream: correct / incorrect /
missing-logic submission rates (percentages partitioning all submissions),
skip count, and successful vs unsuccessful (selected but never completed)
concept counts. Aggregation is deterministic and CSV-exportable so any stats
package can take it from there.
"""

import csv
import io
import statistics
from dataclasses import dataclass, fields
from typing import Iterable

from .errors import CorruptLog
from .session import (
    KIND_CONCEPT_COMPLETED,
    KIND_CONCEPT_SELECTED,
    KIND_SKIPPED,
    KIND_SUBMITTED,
    LogEvent,
)

FEATURE_NAMES = (
    "correct_submission_rate",
    "incorrect_submission_rate",
    "missing_logic_rate",
    "skip_count",
    "successful_concepts",
    "unsuccessful_concepts",
)


@dataclass(frozen=True)
class SixFeatures:
    correct_submission_rate: float  # percent of submissions
    incorrect_submission_rate: float
    missing_logic_rate: float
    skip_count: int
    successful_concepts: int
    unsuccessful_concepts: int

    def as_row(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


ZERO_FEATURES = SixFeatures(0.0, 0.0, 0.0, 0, 0, 0)


def _coerce(events: Iterable["LogEvent | dict"]) -> list[LogEvent]:
    out = []
    for ev in events:
        if isinstance(ev, LogEvent):
            out.append(ev)
        elif isinstance(ev, dict):
            out.append(LogEvent.from_dict(ev))
        else:
            raise CorruptLog(f"not an event: {ev!r}")
    return out


def compute_features(
    log: Iterable["LogEvent | dict"], learner_id: str | None = None
) -> SixFeatures:
    """Fold an event stream into the six features, optionally for one learner.

    Submissions partition three ways: all-correct, missing-logic flagged, and
    the incorrect remainder. A concept counts as unsuccessful when it was
    selected but never completed by stream end.
    """
    events = _coerce(log)
    if learner_id is not None:
        events = [ev for ev in events if ev.learner_id == learner_id]

    submissions = correct = missing = skips = completed = 0
    selected: set[tuple[str, str]] = set()
    completed_concepts: set[tuple[str, str]] = set()
    for ev in events:
        if ev.kind == KIND_SUBMITTED:
            submissions += 1
            if ev.payload.get("all_correct"):
                correct += 1
            elif ev.payload.get("missing_logic"):
                missing += 1
        elif ev.kind == KIND_SKIPPED:
            skips += 1
        elif ev.kind == KIND_CONCEPT_SELECTED:
            selected.add((ev.learner_id, ev.payload["concept"]))
        elif ev.kind == KIND_CONCEPT_COMPLETED:
            completed += 1
            completed_concepts.add((ev.learner_id, ev.payload["concept"]))

    incorrect = submissions - correct - missing
    pct = (lambda n: 100.0 * n / submissions) if submissions else (lambda n: 0.0)
    return SixFeatures(
        correct_submission_rate=pct(correct),
        incorrect_submission_rate=pct(incorrect),
        missing_logic_rate=pct(missing),
        skip_count=skips,
        successful_concepts=completed,
        unsuccessful_concepts=len(selected - completed_concepts),
    )


def submission_count(log: Iterable["LogEvent | dict"]) -> int:
    return sum(1 for ev in _coerce(log) if ev.kind == KIND_SUBMITTED)


def learner_ids(log: Iterable["LogEvent | dict"]) -> list[str]:
    return sorted({ev.learner_id for ev in _coerce(log)})


def per_learner_table(
    log: Iterable["LogEvent | dict"], group: str = ""
) -> list[dict]:
    """One row per learner: the six features plus denominators and both
    count/rate forms of the concept outcomes."""
    events = _coerce(log)
    rows = []
    for learner in learner_ids(events):
        feats = compute_features(events, learner)
        n_selected = feats.successful_concepts + feats.unsuccessful_concepts
        row = {"learner_id": learner, "group": group}
        row.update(feats.as_row())
        row["concepts_selected"] = n_selected
        row["successful_concept_rate"] = (
            feats.successful_concepts / n_selected if n_selected else 0.0
        )
        row["unsuccessful_concept_rate"] = (
            feats.unsuccessful_concepts / n_selected if n_selected else 0.0
        )
        rows.append(row)
    return rows


CSV_COLUMNS = (
    "learner_id",
    "group",
    *FEATURE_NAMES,
    "concepts_selected",
    "successful_concept_rate",
    "unsuccessful_concept_rate",
)


def write_csv(rows: list[dict], fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def summarize_groups(logs: "dict[str, Iterable[LogEvent | dict]]") -> list[dict]:
    """Per-group mean and population standard deviation of every feature."""
    table = []
    for group in sorted(logs):
        rows = per_learner_table(logs[group], group)
        summary: dict = {"group": group, "learners": len(rows)}
        for name in FEATURE_NAMES:
            values = [row[name] for row in rows]
            summary[f"{name}_mean"] = statistics.fmean(values) if values else 0.0
            summary[f"{name}_sd"] = statistics.pstdev(values) if values else 0.0
        table.append(summary)
    return table


def summary_to_csv(table: list[dict]) -> str:
    if not table:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(table[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in table:
        writer.writerow(row)
    return buf.getvalue()
