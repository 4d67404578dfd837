"""Practice-session orchestration and the append-only event log.

The engine drives the full loop: experience questionnaire, concept selection,
pretest, exercise assignment, grading, skill/difficulty updates, and the
completion page. Every state mutation lands in the event log (JSON Lines);
replaying a log reconstructs learner and item state exactly, so the log is
the source of truth and in-memory state is a cache.
"""

import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from . import grading, rating, scheduler
from .bank import Question, QuestionBank
from .errors import (
    ConceptNotComplete,
    CorruptLog,
    NoPretestPending,
    NotAssigned,
    PoolExhausted,
    StateMismatch,
    UnknownConcept,
)
from .ontology import ConceptGraph, ConceptStatus, hint_list, suggest_next
from .scheduler import AssignmentMode, ItemState, LearnerState, Level

KIND_QUESTIONNAIRE = "questionnaire_answered"
KIND_CONCEPT_SELECTED = "concept_selected"
KIND_PRETEST_SCORED = "pretest_scored"
KIND_EXERCISE_ASSIGNED = "exercise_assigned"
KIND_SUBMITTED = "submitted"
KIND_SKIPPED = "skipped"
KIND_PROMOTED = "promoted"
KIND_DEMOTED = "demoted"
KIND_CONCEPT_COMPLETED = "concept_completed"

ALL_KINDS = {
    KIND_QUESTIONNAIRE,
    KIND_CONCEPT_SELECTED,
    KIND_PRETEST_SCORED,
    KIND_EXERCISE_ASSIGNED,
    KIND_SUBMITTED,
    KIND_SKIPPED,
    KIND_PROMOTED,
    KIND_DEMOTED,
    KIND_CONCEPT_COMPLETED,
}


@dataclass(frozen=True)
class LogEvent:
    timestamp: float
    learner_id: str
    kind: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "timestamp": self.timestamp,
                "learner_id": self.learner_id,
                "kind": self.kind,
                "payload": self.payload,
            },
            ensure_ascii=False,
            sort_keys=True,
        )

    @classmethod
    def from_dict(cls, raw: dict) -> "LogEvent":
        try:
            kind = raw["kind"]
            if kind not in ALL_KINDS:
                raise CorruptLog(f"unknown event kind {kind!r}")
            return cls(
                timestamp=float(raw["timestamp"]),
                learner_id=str(raw["learner_id"]),
                kind=kind,
                payload=dict(raw.get("payload", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptLog(f"bad event record: {exc}") from exc


def write_log(events: Iterable[LogEvent], path: "str | Path") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(ev.to_json() + "\n")


def read_log(path: "str | Path") -> list[LogEvent]:
    events = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptLog(f"line {lineno}: {exc}") from exc
            events.append(LogEvent.from_dict(raw))
    return events


@dataclass(frozen=True)
class LearnerProfile:
    learner_id: str
    has_programming_experience: bool
    group_mode: AssignmentMode


@dataclass
class SessionView:
    """Learner-facing snapshot. Level stays hidden in random mode."""

    learner_id: str
    mode: str
    recommendation: str | None = None
    concept: str | None = None
    level: str | None = None
    question: dict | None = None
    progress: dict = field(default_factory=dict)
    completed: bool = False

    def to_payload(self) -> dict:
        payload = {
            "learner_id": self.learner_id,
            "mode": self.mode,
            "progress": self.progress,
            "completed": self.completed,
        }
        if self.recommendation is not None:
            payload["recommendation"] = self.recommendation
        if self.concept is not None:
            payload["concept"] = self.concept
        if self.level is not None:
            payload["level"] = self.level
        if self.question is not None:
            payload["question"] = self.question
        return payload


@dataclass(frozen=True)
class SelectResult:
    pretest_required: bool
    resume_level: Level | None = None


class SessionEngine:
    """Single-process engine over one ontology, bank, and assignment mode.

    Callers serialize mutating calls per learner (the HTTP shell holds a
    lock); the engine itself is not thread safe.
    """

    def __init__(
        self,
        graph: ConceptGraph,
        bank: QuestionBank,
        mode: AssignmentMode,
        *,
        language: str = "python",
        initial_concept: str = "variables",
        clock: Callable[[], float] = time.time,
        event_sink: Callable[[LogEvent], None] | None = None,
    ):
        self.graph = graph
        self.bank = bank
        self.mode = mode
        self.language = language
        self.initial_concept = initial_concept
        self.clock = clock
        self.event_sink = event_sink
        self.events: list[LogEvent] = []

        self.profiles: dict[str, LearnerProfile] = {}
        self.states: dict[tuple[str, str], LearnerState] = {}
        self.items: dict[int, ItemState] = {q.id: ItemState(q.id) for q in bank}
        self.statuses: dict[tuple[str, str], ConceptStatus] = {}
        self.assigned: dict[str, tuple[str, int]] = {}
        self._rngs: dict[str, random.Random] = {}

    # -- event plumbing ----------------------------------------------------

    def _emit(self, learner_id: str, kind: str, payload: dict) -> LogEvent:
        ev = LogEvent(self.clock(), learner_id, kind, payload)
        self.events.append(ev)
        if self.event_sink is not None:
            self.event_sink(ev)
        return ev

    def _rng_for(self, learner_id: str) -> random.Random:
        if learner_id not in self._rngs:
            base = self.mode.seed if self.mode.seed is not None else 0
            self._rngs[learner_id] = random.Random(f"{base}:{learner_id}")
        return self._rngs[learner_id]

    # -- lookups -----------------------------------------------------------

    def _state(self, learner_id: str, concept_id: str) -> LearnerState:
        key = (learner_id, concept_id)
        if key not in self.states:
            raise UnknownConcept(f"learner {learner_id!r} has not selected {concept_id!r}")
        return self.states[key]

    def status_of(self, learner_id: str, concept_id: str) -> ConceptStatus:
        return self.statuses.get((learner_id, concept_id), ConceptStatus.NOT_STARTED)

    def progress_map(self, learner_id: str) -> dict[str, ConceptStatus]:
        return {
            cid: self.status_of(learner_id, cid)
            for cid in self.graph.concepts
        }

    def progress_payload(self, learner_id: str) -> dict[str, str]:
        return {cid: st.value for cid, st in self.progress_map(learner_id).items()}

    def concepts_snapshot(self, learner_id: str) -> dict:
        """GET /concepts payload: the tree plus the learner's statuses."""
        nodes = []
        for concept in self.graph.for_language(self.language):
            nodes.append(
                {
                    "id": concept.id,
                    "display_name": concept.display_name,
                    "parent": concept.parent,
                    "status": self.status_of(learner_id, concept.id).value,
                }
            )
        nodes.sort(key=lambda n: n["id"])
        return {"learner_id": learner_id, "language": self.language, "concepts": nodes}

    # -- step 1-2: questionnaire and concept selection ----------------------

    def start_session(self, learner_id: str, has_programming_experience: bool) -> SessionView:
        """Answer the experience questionnaire (first visit only) and open a view.

        Learners without prior experience get the configured starting-concept
        recommendation; experienced learners pick freely.
        """
        if learner_id not in self.profiles:
            profile = LearnerProfile(learner_id, has_programming_experience, self.mode)
            self.profiles[learner_id] = profile
            self._emit(
                learner_id,
                KIND_QUESTIONNAIRE,
                {
                    "has_programming_experience": has_programming_experience,
                    "mode": self.mode.kind,
                },
            )
        profile = self.profiles[learner_id]
        recommendation = None
        if not profile.has_programming_experience:
            recommendation = self.initial_concept
            if recommendation not in self.graph and self.graph.roots:
                recommendation = self.graph.roots[0]
        return SessionView(
            learner_id=learner_id,
            mode=self.mode.kind,
            recommendation=recommendation,
            progress=self.progress_payload(learner_id),
        )

    def select_concept(self, learner_id: str, concept_id: str) -> SelectResult:
        """First selection demands a pretest; later ones resume at the stored level."""
        if learner_id not in self.profiles:
            raise StateMismatch("questionnaire not answered; open a session first")
        if concept_id not in self.graph:
            raise UnknownConcept(f"unknown concept {concept_id!r}")
        key = (learner_id, concept_id)
        first_time = key not in self.states
        if first_time:
            self.states[key] = LearnerState(
                learner_id=learner_id, language=self.language, concept_id=concept_id
            )
            if self.status_of(learner_id, concept_id) is ConceptStatus.NOT_STARTED:
                self.statuses[key] = ConceptStatus.IN_PROGRESS
        self._emit(
            learner_id, KIND_CONCEPT_SELECTED, {"concept": concept_id, "first_time": first_time}
        )
        state = self.states[key]
        if not state.pretest_done:
            return SelectResult(pretest_required=True)
        return SelectResult(pretest_required=False, resume_level=state.current_level)

    # -- step 3: pretest -----------------------------------------------------

    def submit_pretest(self, learner_id: str, concept_id: str, answers: list) -> Level:
        """Grade the concept's pretest questions and fix the starting level.

        `answers` holds, per pretest question, a list of recorded per-case
        transcripts (a missing tail counts as unanswered). Pretests never
        touch item ratings.
        """
        state = self._state(learner_id, concept_id)
        if state.pretest_done:
            raise NoPretestPending(f"pretest already scored for {concept_id!r}")
        pretest_questions = self.bank.pretests.get(concept_id, [])
        if pretest_questions:
            points = 0
            for i, q in enumerate(pretest_questions):
                transcripts = answers[i] if i < len(answers) else None
                if transcripts is None:
                    transcripts = [None] * len(q.test_cases)
                report = grading.grade(
                    grading.Submission(source="", outputs=list(transcripts)), q
                )
                points += 1 if report.all_correct else 0
            score = points / len(pretest_questions)
        else:
            score = 0.0
        level = scheduler.initial_level_from_pretest(score)
        state.current_level = level
        state.pretest_done = True
        self._emit(
            learner_id,
            KIND_PRETEST_SCORED,
            {"concept": concept_id, "score": score, "level": level.value},
        )
        return level

    # -- step 4: exercise assignment ----------------------------------------

    def _question_payload(self, question: Question, concept_id: str) -> dict:
        hints = []
        for h in hint_list(question, self.graph, concept_id):
            hint = {
                "concept_id": h.concept_id,
                "display_name": self.graph.get(h.concept_id).display_name,
                "emphasized": h.emphasized,
            }
            if h.parent_id is not None:
                hint["parent_id"] = h.parent_id
                hint["parent_display_name"] = self.graph.get(h.parent_id).display_name
            hints.append(hint)
        payload = {
            "id": question.id,
            "language": question.language,
            "prompt_en": question.prompt_en,
            "hints": hints,
            "test_case_count": len(question.test_cases),
        }
        if question.prompt_th is not None:
            payload["prompt_th"] = question.prompt_th
        return payload

    def _assign(
        self, learner_id: str, concept_id: str, question_id: int, recycled: list[int]
    ) -> None:
        question = self.bank[question_id]
        payload: dict = {
            "concept": concept_id,
            "question_id": question_id,
            "level": question.level.value,
        }
        if recycled:
            payload["recycled_ids"] = sorted(recycled)
        self.assigned[learner_id] = (concept_id, question_id)
        self._emit(learner_id, KIND_EXERCISE_ASSIGNED, payload)

    def request_exercise(
        self, learner_id: str, concept_id: str, question_id: int | None = None
    ) -> SessionView:
        """Assign the next exercise and return the learner-facing view.

        On a completed concept: with `question_id`, re-enter that question
        from the completion lists; without one, draw uniformly from the
        never-tried and incomplete lists; with nothing left, return the
        completion view. Adaptive exhaustion recycles skipped questions once
        before surfacing.
        """
        state = self._state(learner_id, concept_id)
        if not state.pretest_done:
            raise NoPretestPending(f"pretest outstanding for {concept_id!r}")
        status = self.status_of(learner_id, concept_id)
        concept_pool = self.bank.concept_pool(concept_id)
        recycled: list[int] = []

        if status is ConceptStatus.COMPLETE:
            never_tried, incomplete = scheduler.completion_lists(state, concept_pool)
            candidates = sorted(set(never_tried) | set(incomplete))
            if question_id is not None:
                if question_id not in concept_pool:
                    raise UnknownConcept(f"question {question_id} not in {concept_id!r}")
                chosen = question_id
            elif candidates:
                chosen = self._rng_for(learner_id).choice(candidates)
            else:
                return self._view_for(learner_id, concept_id, None, completed=True)
        elif self.mode.is_random:
            chosen = scheduler.next_question_random(state, concept_pool, self._rng_for(learner_id))
        else:
            level_pool = self.bank.level_pool(concept_id, state.current_level)
            try:
                chosen = scheduler.next_question_adaptive(state, self.items, level_pool)
            except PoolExhausted:
                recycled = [q for q in level_pool if q in state.skipped_qs]
                if not recycled:
                    raise
                for q in recycled:
                    state.skipped_qs.discard(q)
                chosen = scheduler.next_question_adaptive(state, self.items, level_pool)

        self._assign(learner_id, concept_id, chosen, recycled)
        return self._view_for(learner_id, concept_id, chosen)

    def _view_for(
        self, learner_id: str, concept_id: str, question_id: int | None, completed: bool = False
    ) -> SessionView:
        state = self._state(learner_id, concept_id)
        view = SessionView(
            learner_id=learner_id,
            mode=self.mode.kind,
            concept=concept_id,
            progress=self.progress_payload(learner_id),
            completed=completed,
        )
        if not self.mode.is_random:
            # badge the assigned question's own level: completion-page
            # re-entry can hand out questions below the current level
            if question_id is not None:
                view.level = self.bank[question_id].level.value
            else:
                view.level = state.current_level.value
        if question_id is not None:
            view.question = self._question_payload(self.bank[question_id], concept_id)
        return view

    # -- step 5: submission, skip, completion ---------------------------------

    def _select_k(self, concept_id: str, level: Level) -> float:
        count = len(self.bank.level_pool(concept_id, level))
        return rating.select_k(max(count, 1))

    def _check_assignment(self, learner_id: str, question_id: int) -> str:
        assigned = self.assigned.get(learner_id)
        if assigned is None or assigned[1] != question_id:
            raise NotAssigned(f"question {question_id} is not assigned to {learner_id!r}")
        return assigned[0]

    def _complete_concept(self, learner_id: str, concept_id: str, rule: str) -> bool:
        key = (learner_id, concept_id)
        if self.statuses.get(key) is ConceptStatus.COMPLETE:
            return False
        self.statuses[key] = ConceptStatus.COMPLETE
        self._emit(learner_id, KIND_CONCEPT_COMPLETED, {"concept": concept_id, "rule": rule})
        return True

    def submit_code(
        self,
        learner_id: str,
        question_id: int,
        submission: grading.Submission,
        executor: grading.CommandExecutor | None = None,
    ) -> tuple[dict, rating.Transition, bool]:
        """Grade an assigned submission and apply its outcome.

        Returns (feedback document, rating transition, concept completed now).
        """
        concept_id = self._check_assignment(learner_id, question_id)
        state = self._state(learner_id, concept_id)
        question = self.bank[question_id]
        # completed-concept re-entry grades any level without moving levels
        reentry = self.status_of(learner_id, concept_id) is ConceptStatus.COMPLETE
        transitions = not self.mode.is_random and not reentry
        if transitions and question.level is not state.current_level:
            raise StateMismatch(
                f"assigned question level {question.level.value} != {state.current_level.value}"
            )

        report = grading.grade(submission, question, executor)
        outcome = 1 if report.all_correct else 0
        missing = grading.detect_missing_logic(
            submission.source, question, self.graph, all_correct=report.all_correct
        )
        level = state.current_level if transitions else question.level
        k = self._select_k(concept_id, level)
        item = self.items[question_id]
        theta_before = state.skills[level]
        d_before = item.difficulty

        _, _, transition, events = scheduler.apply_outcome(
            state,
            item,
            outcome,
            k,
            level=level,
            transitions=transitions,
        )
        del self.assigned[learner_id]
        self._emit(
            learner_id,
            KIND_SUBMITTED,
            {
                "concept": concept_id,
                "question_id": question_id,
                "level": level.value,
                "all_correct": report.all_correct,
                "missing_logic": missing,
                "verdicts": [c.verdict for c in report.per_case],
                "theta_before": theta_before,
                "theta_after": state.skills[level],
                "d_before": d_before,
                "d_after": item.difficulty,
                "k": k,
                "transition": transition.value,
                "elapsed_seconds": submission.elapsed_seconds,
            },
        )
        completed = False
        for ev in events:
            if ev["kind"] == "promoted":
                self._emit(
                    learner_id,
                    KIND_PROMOTED,
                    {
                        "concept": concept_id,
                        "from_level": ev["from_level"].value,
                        "to_level": ev["to_level"].value,
                    },
                )
            elif ev["kind"] == "demoted":
                self._emit(
                    learner_id,
                    KIND_DEMOTED,
                    {
                        "concept": concept_id,
                        "from_level": ev["from_level"].value,
                        "to_level": ev["to_level"].value,
                        "capped_skill": ev["capped_skill"],
                    },
                )
            elif ev["kind"] == "completed":
                completed = self._complete_concept(learner_id, concept_id, "difficult_level_passed")
        if self.mode.is_random and scheduler.concept_complete_random(
            state, len(self.bank.concept_pool(concept_id))
        ):
            completed = self._complete_concept(learner_id, concept_id, "over_60_percent")
        return grading.render_feedback(report), transition, completed

    def skip_exercise(self, learner_id: str, question_id: int) -> SessionView:
        """Skip the assigned question (penalized like incorrect) and assign the next."""
        concept_id = self._check_assignment(learner_id, question_id)
        state = self._state(learner_id, concept_id)
        question = self.bank[question_id]
        reentry = self.status_of(learner_id, concept_id) is ConceptStatus.COMPLETE
        transitions = not self.mode.is_random and not reentry
        level = state.current_level if transitions else question.level
        k = self._select_k(concept_id, level)
        item = self.items[question_id]
        theta_before = state.skills[level]
        d_before = item.difficulty

        _, _, transition, events = scheduler.apply_skip(
            state,
            item,
            k,
            level=level,
            transitions=transitions,
        )
        del self.assigned[learner_id]
        self._emit(
            learner_id,
            KIND_SKIPPED,
            {
                "concept": concept_id,
                "question_id": question_id,
                "level": level.value,
                "theta_before": theta_before,
                "theta_after": state.skills[level],
                "d_before": d_before,
                "d_after": item.difficulty,
                "k": k,
                "transition": transition.value,
            },
        )
        for ev in events:
            if ev["kind"] == "demoted":
                self._emit(
                    learner_id,
                    KIND_DEMOTED,
                    {
                        "concept": concept_id,
                        "from_level": ev["from_level"].value,
                        "to_level": ev["to_level"].value,
                        "capped_skill": ev["capped_skill"],
                    },
                )
        try:
            return self.request_exercise(learner_id, concept_id)
        except PoolExhausted:
            return self._view_for(learner_id, concept_id, None)

    def completion_page(self, learner_id: str, concept_id: str) -> dict:
        """Suggestions plus the never-tried and incomplete question-id lists."""
        if self.status_of(learner_id, concept_id) is not ConceptStatus.COMPLETE:
            raise ConceptNotComplete(f"{concept_id!r} is not complete")
        state = self._state(learner_id, concept_id)
        never_tried, incomplete = scheduler.completion_lists(
            state, self.bank.concept_pool(concept_id)
        )
        suggestions = suggest_next(
            list(self.bank), concept_id, self.progress_map(learner_id), self.graph
        )
        prompts = {
            q: self.bank[q].prompt_en for q in never_tried + incomplete if q in self.bank.questions
        }
        return {
            "concept": concept_id,
            "suggestions": suggestions,
            "never_tried": never_tried,
            "incomplete": incomplete,
            "question_prompts": prompts,
        }


def replay(
    events: Iterable[LogEvent],
    graph: ConceptGraph,
    bank: QuestionBank,
    mode: AssignmentMode,
    **engine_kwargs,
) -> SessionEngine:
    """Rebuild an engine's state from its event log.

    Events carry post-update values, so replay applies them directly instead
    of re-deciding; the result matches the live engine field for field.
    """
    engine = SessionEngine(graph, bank, mode, **engine_kwargs)
    for ev in events:
        learner, payload = ev.learner_id, ev.payload
        kind = ev.kind
        if kind == KIND_QUESTIONNAIRE:
            engine.profiles[learner] = LearnerProfile(
                learner, payload["has_programming_experience"], mode
            )
        elif kind == KIND_CONCEPT_SELECTED:
            key = (learner, payload["concept"])
            if payload.get("first_time"):
                engine.states[key] = LearnerState(
                    learner_id=learner, language=engine.language, concept_id=payload["concept"]
                )
                if engine.statuses.get(key) is not ConceptStatus.COMPLETE:
                    engine.statuses[key] = ConceptStatus.IN_PROGRESS
        elif kind == KIND_PRETEST_SCORED:
            state = engine.states[(learner, payload["concept"])]
            state.current_level = Level(payload["level"])
            state.pretest_done = True
        elif kind == KIND_EXERCISE_ASSIGNED:
            state = engine.states[(learner, payload["concept"])]
            for q in payload.get("recycled_ids", []):
                state.skipped_qs.discard(q)
            engine.assigned[learner] = (payload["concept"], payload["question_id"])
        elif kind in (KIND_SUBMITTED, KIND_SKIPPED):
            state = engine.states[(learner, payload["concept"])]
            qid = payload["question_id"]
            item = engine.items[qid]
            state.skills[Level(payload["level"])] = payload["theta_after"]
            item.difficulty = payload["d_after"]
            item.attempt_count += 1
            if kind == KIND_SUBMITTED:
                if payload["all_correct"]:
                    state.correct_qs.add(qid)
                    state.incorrect_qs.discard(qid)
                    state.skipped_qs.discard(qid)
                elif qid not in state.correct_qs:
                    state.incorrect_qs.add(qid)
                    state.skipped_qs.discard(qid)
            elif qid not in state.correct_qs:
                state.skipped_qs.add(qid)
                state.incorrect_qs.discard(qid)
            engine.assigned.pop(learner, None)
        elif kind in (KIND_PROMOTED, KIND_DEMOTED):
            state = engine.states[(learner, payload["concept"])]
            to_level = Level(payload["to_level"])
            state.current_level = to_level
            if kind == KIND_PROMOTED:
                state.skills[to_level] = 0.0
            else:
                state.skills[to_level] = payload["capped_skill"]
        elif kind == KIND_CONCEPT_COMPLETED:
            engine.statuses[(learner, payload["concept"])] = ConceptStatus.COMPLETE
        engine.events.append(ev)
    return engine
