"""Paired skill/difficulty rating updates.

A learner's skill and an item's difficulty move in opposite directions after
each attempt: one shared delta, scaled by the learning rate and the gap
between the actual outcome and the predicted success probability. Skill is
clamped to [0, 1]; difficulty floats freely.

Everything here is a pure function of its arguments; callers own the
serialization of read-modify-write cycles on stored values.
"""

import enum
import logging
import math

logger = logging.getLogger(__name__)

#: Skill value at or above which a learner is promoted to the next level.
MASTERY_THRESHOLD = 0.85


class Transition(enum.Enum):
    PROMOTE = "promote"
    DEMOTE = "demote"
    STAY = "stay"


def clamp_skill(value: float) -> float:
    """Clamp a raw skill value into [0, 1]."""
    return max(0.0, min(1.0, value))


def probability_correct(theta: float, d: float) -> float:
    """Predicted probability of a correct answer for skill theta vs difficulty d.

    Logistic in (theta - d); 0.5 when the learner and item are evenly matched.
    """
    x = theta - d
    # numerically stable sigmoid: never exponentiate a positive argument
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def update(theta: float, d: float, k: float, outcome: int) -> tuple[float, float]:
    """Apply one paired update and return (new skill, new difficulty).

    outcome is 1 for a correct submission, 0 for incorrect or skip. Both
    sides move by the same delta (k * (outcome - p)) in opposite directions,
    so the pre-clamp pair sum is conserved. Skill is clamped to [0, 1];
    difficulty is returned unclamped.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    p = probability_correct(theta, d)
    delta = k * (outcome - p)
    return clamp_skill(theta + delta), d - delta


def update_raw(theta: float, d: float, k: float, outcome: int) -> tuple[float, float]:
    """Like update() but returns the skill before clamping (for conservation checks)."""
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    p = probability_correct(theta, d)
    delta = k * (outcome - p)
    return theta + delta, d - delta


def select_k(level_question_count: int) -> float:
    """Learning rate for a level, chosen from how many questions the level holds.

    4-5 questions -> 0.7, 6 -> 0.6, 7-8 -> 0.5, 9 or more -> 0.4. Levels with
    fewer than four questions fall back to 0.7 with an authoring warning:
    progression would then demand a near-100% success rate.
    """
    if level_question_count < 1:
        raise ValueError("level_question_count must be >= 1")
    if level_question_count < 4:
        logger.warning(
            "level has only %d question(s); at least 4 recommended", level_question_count
        )
        return 0.7
    if level_question_count <= 5:
        return 0.7
    if level_question_count == 6:
        return 0.6
    if level_question_count <= 8:
        return 0.5
    return 0.4


def check_transition(theta_post: float, threshold: float = MASTERY_THRESHOLD) -> Transition:
    """Level transition implied by a post-update skill value.

    Reaching or exceeding the threshold promotes; a skill at (or driven to)
    zero demotes; anything in between stays put.
    """
    if theta_post >= threshold:
        return Transition.PROMOTE
    if theta_post <= 0.0:
        return Transition.DEMOTE
    return Transition.STAY
