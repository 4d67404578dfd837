"""Exercise selection and learner/item state transitions.

Adaptive mode picks the eligible question whose difficulty sits closest to
the learner's current skill; random mode draws uniformly from everything the
learner has not yet solved. Outcomes feed the rating updates and drive level
promotion/demotion and concept completion.

Mutations on a LearnerState must be serialized per learner, and ItemState
difficulty updates linearized per question id (the HTTP shell holds a lock
across both); selection reads tolerate slightly stale difficulties.
"""

import enum
import random
from dataclasses import dataclass, field

from . import rating
from .errors import PoolExhausted, StateMismatch


class Level(enum.Enum):
    EASY = "easy"
    STANDARD = "standard"
    DIFFICULT = "difficult"

    @property
    def rank(self) -> int:
        return _LEVEL_ORDER.index(self)

    def next_up(self) -> "Level | None":
        i = self.rank
        return _LEVEL_ORDER[i + 1] if i + 1 < len(_LEVEL_ORDER) else None

    def next_down(self) -> "Level | None":
        i = self.rank
        return _LEVEL_ORDER[i - 1] if i > 0 else None


_LEVEL_ORDER = [Level.EASY, Level.STANDARD, Level.DIFFICULT]


@dataclass
class LearnerState:
    """Per (learner, language, concept) practice state."""

    learner_id: str
    language: str
    concept_id: str
    current_level: Level = Level.EASY
    skills: dict[Level, float] = field(default_factory=lambda: {lv: 0.0 for lv in Level})
    correct_qs: set[int] = field(default_factory=set)
    incorrect_qs: set[int] = field(default_factory=set)
    skipped_qs: set[int] = field(default_factory=set)
    pretest_done: bool = False


@dataclass
class ItemState:
    """Shared per-question rating state."""

    question_id: int
    difficulty: float = 0.0
    attempt_count: int = 0


@dataclass(frozen=True)
class AssignmentMode:
    """How exercises are chosen: skill-matched or uniformly at random (seeded)."""

    kind: str  # "adaptive" | "random"
    seed: int | None = None

    @classmethod
    def adaptive(cls) -> "AssignmentMode":
        return cls("adaptive")

    @classmethod
    def random(cls, seed: int) -> "AssignmentMode":
        return cls("random", seed)

    @property
    def is_random(self) -> bool:
        return self.kind == "random"


def initial_level_from_pretest(
    score_fraction: float,
    *,
    standard_cut: float = 1.0 / 3.0,
    difficult_cut: float = 2.0 / 3.0,
) -> Level:
    """Map a pretest score fraction onto the starting level (thirds by default)."""
    if not 0.0 <= score_fraction <= 1.0:
        raise ValueError(f"score_fraction must be in [0, 1], got {score_fraction}")
    if score_fraction < standard_cut:
        return Level.EASY
    if score_fraction < difficult_cut:
        return Level.STANDARD
    return Level.DIFFICULT


def next_question_adaptive(
    state: LearnerState,
    items: dict[int, ItemState],
    pool: "list[int] | set[int]",
) -> int:
    """Pick the eligible question with difficulty nearest the current skill.

    Solved and skipped questions are excluded; ties break toward the lowest
    question id. Raises PoolExhausted when nothing is eligible.
    """
    skill = state.skills[state.current_level]
    eligible = [q for q in pool if q not in state.correct_qs and q not in state.skipped_qs]
    if not eligible:
        raise PoolExhausted(f"no eligible question at {state.current_level.value}")
    return min(eligible, key=lambda q: (abs(skill - items[q].difficulty), q))


def next_question_random(
    state: LearnerState,
    pool: "list[int] | set[int]",
    rng: "random.Random | int",
) -> int:
    """Seeded uniform draw over the concept's questions the learner has not solved."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    eligible = sorted(q for q in pool if q not in state.correct_qs)
    if not eligible:
        raise PoolExhausted("all questions in the concept already solved")
    return rng.choice(eligible)


def _record_outcome_sets(state: LearnerState, question_id: int, correct: bool) -> None:
    # the three id sets stay pairwise disjoint; a correct answer wins permanently
    if correct:
        state.correct_qs.add(question_id)
        state.incorrect_qs.discard(question_id)
        state.skipped_qs.discard(question_id)
    elif question_id not in state.correct_qs:
        state.incorrect_qs.add(question_id)
        state.skipped_qs.discard(question_id)


def _apply_rating(
    state: LearnerState,
    item: ItemState,
    outcome: int,
    k: float,
    level: Level,
) -> tuple[float, float]:
    before = state.skills[level]
    new_skill, new_d = rating.update(before, item.difficulty, k, outcome)
    state.skills[level] = new_skill
    item.difficulty = new_d
    item.attempt_count += 1
    return before, new_skill


def _apply_transition(
    state: LearnerState, k: float, threshold: float
) -> tuple[rating.Transition, list[dict]]:
    level = state.current_level
    transition = rating.check_transition(state.skills[level], threshold)
    events: list[dict] = []
    if transition is rating.Transition.PROMOTE:
        up = level.next_up()
        if up is None:
            events.append({"kind": "completed"})
        else:
            state.current_level = up
            state.skills[up] = 0.0
            events.append({"kind": "promoted", "from_level": level, "to_level": up})
    elif transition is rating.Transition.DEMOTE:
        down = level.next_down()
        if down is not None:
            # cap the retained skill so one correct answer at near-even odds
            # re-crosses the threshold instead of re-promoting for free
            cap = threshold - k * 0.5 * 0.9
            capped = min(state.skills[down], cap)
            state.current_level = down
            state.skills[down] = capped
            events.append(
                {"kind": "demoted", "from_level": level, "to_level": down, "capped_skill": capped}
            )
    return transition, events


def apply_outcome(
    state: LearnerState,
    item: ItemState,
    outcome: int,
    k: float,
    *,
    level: Level | None = None,
    transitions: bool = True,
    threshold: float = rating.MASTERY_THRESHOLD,
) -> tuple[LearnerState, ItemState, rating.Transition, list[dict]]:
    """Apply a graded outcome: rating update, answer bookkeeping, level moves.

    `level` defaults to the learner's current level (adaptive mode); random
    mode passes the question's own level and suppresses transitions, since
    level movement is adaptive reasoning. Returns the (mutated) state and
    item, the rating transition, and promotion/demotion/completion events.
    """
    target_level = level or state.current_level
    if transitions and target_level is not state.current_level:
        raise StateMismatch(
            f"question level {target_level.value} != learner level {state.current_level.value}"
        )
    _apply_rating(state, item, outcome, k, target_level)
    _record_outcome_sets(state, item.question_id, correct=bool(outcome))
    if not transitions:
        return state, item, rating.Transition.STAY, []
    transition, events = _apply_transition(state, k, threshold)
    return state, item, transition, events


def apply_skip(
    state: LearnerState,
    item: ItemState,
    k: float,
    *,
    level: Level | None = None,
    transitions: bool = True,
    threshold: float = rating.MASTERY_THRESHOLD,
) -> tuple[LearnerState, ItemState, rating.Transition, list[dict]]:
    """Skip: penalized like an incorrect answer, recorded in the skipped set."""
    target_level = level or state.current_level
    if transitions and target_level is not state.current_level:
        raise StateMismatch(
            f"question level {target_level.value} != learner level {state.current_level.value}"
        )
    _apply_rating(state, item, 0, k, target_level)
    if item.question_id not in state.correct_qs:
        state.skipped_qs.add(item.question_id)
        state.incorrect_qs.discard(item.question_id)
    if not transitions:
        return state, item, rating.Transition.STAY, []
    transition, events = _apply_transition(state, k, threshold)
    return state, item, transition, events


def concept_complete_random(state: LearnerState, concept_question_count: int) -> bool:
    """Random-mode completion: strictly more than 60% of the concept solved."""
    if concept_question_count < 1:
        raise ValueError("concept_question_count must be >= 1")
    return len(state.correct_qs) / concept_question_count > 0.6


def completion_lists(
    state: LearnerState, pool: "list[int] | set[int]"
) -> tuple[list[int], list[int]]:
    """(never tried, attempted-but-incomplete) question ids, both sorted."""
    touched = state.correct_qs | state.incorrect_qs | state.skipped_qs
    never_tried = sorted(q for q in pool if q not in touched)
    incomplete = sorted(state.incorrect_qs | state.skipped_qs)
    return never_tried, incomplete
