"""Concept ontology: loading, validation, hints, and next-concept suggestion.

The ontology is a tree of programming-language concepts shared across
languages. Hints surface a question's tagged concepts (with parents in
brackets); next-concept suggestions come from question-bank co-occurrence:
concepts that pair one-to-one with the current concept and co-occur with it
more than once.
"""

import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from .errors import CycleError, DanglingParent, ParseError, UnknownConcept

if TYPE_CHECKING:
    from .bank import Question

_ID_RE = re.compile(r"^[a-z0-9_-]+$")


@dataclass(frozen=True)
class Concept:
    id: str
    display_name: str
    parent: str | None = None
    languages: frozenset[str] = frozenset()
    markers: "dict[str, tuple[str, ...]]" = field(default_factory=dict)


@dataclass(frozen=True)
class LanguageSpec:
    """Comment delimiters used when stripping source before marker search."""

    line_comment: str | None = "#"
    block_comments: tuple[tuple[str, str], ...] = (('"""', '"""'), ("'''", "'''"))


DEFAULT_LANGUAGE_SPECS = {
    "python": LanguageSpec(),
    "java": LanguageSpec(line_comment="//", block_comments=(("/*", "*/"),)),
    "csharp": LanguageSpec(line_comment="//", block_comments=(("/*", "*/"),)),
}


class ConceptStatus(enum.Enum):
    NOT_STARTED = "not_started"
    IN_PROGRESS = "in_progress"
    COMPLETE = "complete"


@dataclass(frozen=True)
class HintItem:
    concept_id: str
    parent_id: str | None
    emphasized: bool


@dataclass(frozen=True)
class FrequencyTable:
    anchor: str
    rows: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, int]:
        return dict(self.rows)


@dataclass(frozen=True)
class ConceptGraph:
    concepts: "dict[str, Concept]"
    roots: tuple[str, ...]
    languages: "dict[str, LanguageSpec]" = field(default_factory=dict)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self.concepts

    def get(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise UnknownConcept(f"unknown concept {concept_id!r}") from None

    def parent(self, concept_id: str) -> str | None:
        return self.get(concept_id).parent

    def markers_for(self, concept_id: str, language: str) -> tuple[str, ...]:
        return self.get(concept_id).markers.get(language, ())

    def language_spec(self, language: str) -> LanguageSpec:
        if language in self.languages:
            return self.languages[language]
        return DEFAULT_LANGUAGE_SPECS.get(language, LanguageSpec())

    def for_language(self, language: str) -> "list[Concept]":
        return [c for c in self.concepts.values() if language in c.languages]


def load_ontology(doc: "dict | str | Path") -> ConceptGraph:
    """Parse and validate an ontology document (dict, JSON text, or file path).

    Validation is eager: malformed entries, unknown parents, and parent
    cycles are rejected at load time so downstream queries never see them.
    """
    if isinstance(doc, (str, Path)):
        try:
            if isinstance(doc, Path) or not str(doc).lstrip().startswith("{"):
                doc = json.loads(Path(doc).read_text(encoding="utf-8"))
            else:
                doc = json.loads(doc)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot parse ontology: {exc}") from exc
    if not isinstance(doc, dict) or "concepts" not in doc:
        raise ParseError('ontology document must be an object with a "concepts" list')

    concepts: dict[str, Concept] = {}
    for raw in doc["concepts"]:
        try:
            cid = raw["id"]
            concept = Concept(
                id=cid,
                display_name=raw.get("display_name", cid),
                parent=raw.get("parent"),
                languages=frozenset(raw.get("languages", [])),
                markers={
                    lang: tuple(marks) for lang, marks in raw.get("markers", {}).items()
                },
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad concept entry: {exc}") from exc
        if not _ID_RE.match(cid):
            raise ParseError(f"concept id {cid!r} is not [a-z0-9_-]+")
        if cid in concepts:
            raise ParseError(f"duplicate concept id {cid!r}")
        concepts[cid] = concept

    for concept in concepts.values():
        if concept.parent is not None and concept.parent not in concepts:
            raise DanglingParent(f"{concept.id!r} names unknown parent {concept.parent!r}")

    # walk every parent chain; a revisit within one walk is a cycle
    for cid in concepts:
        seen = set()
        cur: str | None = cid
        while cur is not None:
            if cur in seen:
                raise CycleError(f"parent cycle through {cur!r}")
            seen.add(cur)
            cur = concepts[cur].parent

    languages = {}
    for lang, raw in doc.get("languages", {}).items():
        languages[lang] = LanguageSpec(
            line_comment=raw.get("line_comment"),
            block_comments=tuple((b[0], b[1]) for b in raw.get("block_comments", [])),
        )

    roots = tuple(c.id for c in concepts.values() if c.parent is None)
    return ConceptGraph(concepts=concepts, roots=roots, languages=languages)


def hint_list(question: "Question", graph: ConceptGraph, selected_concept: str) -> list[HintItem]:
    """One hint per tagged concept, in tag order, with parents filled in.

    Only the tag equal to the learner's selected concept is emphasized.
    """
    hints = []
    for tag in question.concept_tags:
        concept = graph.get(tag)  # raises UnknownConcept on a bad tag
        hints.append(
            HintItem(
                concept_id=tag,
                parent_id=concept.parent,
                emphasized=(tag == selected_concept),
            )
        )
    return hints


def cooccurrence_table(bank: "Iterable[Question]", anchor: str) -> FrequencyTable:
    """Count, per concept, how many anchor-tagged questions also carry it."""
    counts: dict[str, int] = {}
    for q in bank:
        if anchor not in q.concept_tags:
            continue
        for tag in q.concept_tags:
            if tag != anchor:
                counts[tag] = counts.get(tag, 0) + 1
    rows = tuple(sorted(counts.items()))
    return FrequencyTable(anchor=anchor, rows=rows)


def one_to_one_partners(bank: "Iterable[Question]", anchor: str) -> set[str]:
    """Concepts that appear with the anchor in a question tagged with exactly the pair."""
    partners = set()
    for q in bank:
        tags = set(q.concept_tags)
        if anchor in tags and len(tags) == 2:
            partners.add((tags - {anchor}).pop())
    return partners


def suggest_next(
    bank: "Iterable[Question]",
    anchor: str,
    progress: "dict[str, ConceptStatus]",
    graph: ConceptGraph | None = None,
) -> list[str]:
    """Next-concept suggestions after completing `anchor`.

    A concept qualifies when it pairs one-to-one with the anchor in some
    question, co-occurs with the anchor more than once overall, and the
    learner has not completed it. Ordered by co-occurrence frequency
    descending, ties by id.
    """
    if graph is not None and anchor not in graph:
        raise UnknownConcept(f"unknown concept {anchor!r}")
    questions = list(bank)
    freq = cooccurrence_table(questions, anchor).as_dict()
    candidates = [
        c
        for c in one_to_one_partners(questions, anchor)
        if freq.get(c, 0) > 1
        and progress.get(c, ConceptStatus.NOT_STARTED) is not ConceptStatus.COMPLETE
    ]
    return sorted(candidates, key=lambda c: (-freq[c], c))


@dataclass
class ValidationReport:
    """Bank-vs-ontology findings. Errors block; warnings are advisory."""

    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def clean(self) -> bool:
        return not self.errors and not self.warnings


def _edit_distance(a: str, b: str) -> int:
    if abs(len(a) - len(b)) > 1:
        return 2  # anything > 1 is equivalent for our purposes
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def validate_bank(graph: ConceptGraph, bank: "Iterable[Question]") -> ValidationReport:
    """Check a question bank against the ontology and authoring guidelines.

    Errors: tags that do not resolve in the ontology. Warnings: tag spellings
    one edit apart (likely singular/plural typos) and (concept, level) pools
    below the recommended four-question minimum.
    """
    report = ValidationReport()
    questions = list(bank)

    used_tags = sorted({t for q in questions for t in q.concept_tags})
    for q in questions:
        for tag in q.concept_tags:
            if tag not in graph:
                report.errors.append(f"question {q.id}: unknown concept tag {tag!r}")

    for i, a in enumerate(used_tags):
        for b in used_tags[i + 1 :]:
            if _edit_distance(a, b) == 1:
                report.warnings.append(f"near-duplicate concept tags {a!r} / {b!r}")

    pools: dict[tuple[str, object], int] = {}
    for q in questions:
        for tag in q.concept_tags:
            key = (tag, q.level)
            pools[key] = pools.get(key, 0) + 1
    for (tag, level), count in sorted(pools.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        if count < 4:
            report.warnings.append(
                f"concept {tag!r} level {level.value}: only {count} question(s), minimum of 4 recommended"
            )
    return report
