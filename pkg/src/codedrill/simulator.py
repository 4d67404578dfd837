"""Synthetic learners for verifying progression dynamics and generating cohorts.

steps_to_threshold reproduces the learning-rate progression counts under the
fresh-item model (every question starts at difficulty zero); run_cohort
drives the full session engine with policy-controlled learners to produce
replayable event logs.
"""

import math
import random
from dataclasses import dataclass

from . import rating
from .bank import Question, QuestionBank
from .errors import NonTerminating, PoolExhausted
from .ontology import ConceptGraph
from .scheduler import AssignmentMode, ItemState
from .session import LogEvent, SessionEngine
from .grading import Submission

MAX_STEPS = 10_000


@dataclass(frozen=True)
class LearnerPolicy:
    """How a synthetic learner answers.

    kinds: always_correct, always_incorrect, bernoulli (fixed probability p),
    logistic (correct with probability sigmoid(true_ability - item difficulty)).
    pretest_score pins the pretest outcome (None answers it with the policy);
    skip_rate skips instead of answering; sloppy_rate makes an incorrect
    submission omit the concepts' syntax markers.
    """

    kind: str
    p: float = 0.5
    true_ability: float = 0.0
    pretest_score: float | None = None
    skip_rate: float = 0.0
    sloppy_rate: float = 0.0

    @classmethod
    def always_correct(cls, **kw) -> "LearnerPolicy":
        return cls("always_correct", **kw)

    @classmethod
    def always_incorrect(cls, **kw) -> "LearnerPolicy":
        return cls("always_incorrect", **kw)

    @classmethod
    def bernoulli(cls, p: float, **kw) -> "LearnerPolicy":
        return cls("bernoulli", p=p, **kw)

    @classmethod
    def logistic(cls, true_ability: float, **kw) -> "LearnerPolicy":
        return cls("logistic", true_ability=true_ability, **kw)

    def answers_correctly(self, rng: random.Random, item_difficulty: float) -> bool:
        if self.kind == "always_correct":
            return True
        if self.kind == "always_incorrect":
            return False
        if self.kind == "bernoulli":
            return rng.random() < self.p
        if self.kind == "logistic":
            return rng.random() < rating.probability_correct(self.true_ability, item_difficulty)
        raise ValueError(f"unknown policy kind {self.kind!r}")


@dataclass(frozen=True)
class TraceStep:
    question_id: int
    outcome: int
    theta_before: float
    theta_after: float
    d_before: float
    d_after: float
    transition: str


def steps_to_threshold(k: float, threshold: float = rating.MASTERY_THRESHOLD) -> int:
    """Correct answers needed to reach the threshold from zero skill.

    Fresh-item model: every assigned question starts at difficulty zero, so
    each step moves skill by k * (1 - sigmoid(theta)).
    """
    if k <= 0:
        raise ValueError("k must be positive")
    theta = 0.0
    for step in range(1, MAX_STEPS + 1):
        theta, _ = rating.update(theta, 0.0, k, 1)
        if theta >= threshold:
            return step
    raise NonTerminating(f"threshold {threshold} unreached after {MAX_STEPS} steps (k={k})")


def policy_trace(
    policy: LearnerPolicy,
    k: float,
    seed: int = 0,
    threshold: float = rating.MASTERY_THRESHOLD,
    max_steps: int = 200,
) -> list[TraceStep]:
    """Rating-level trajectory against fresh items until promotion or the cap."""
    rng = random.Random(seed)
    theta = 0.0
    trace = []
    for step in range(1, max_steps + 1):
        outcome = 1 if policy.answers_correctly(rng, 0.0) else 0
        new_theta, new_d = rating.update(theta, 0.0, k, outcome)
        transition = rating.check_transition(new_theta, threshold)
        trace.append(
            TraceStep(
                question_id=step,
                outcome=outcome,
                theta_before=theta,
                theta_after=new_theta,
                d_before=0.0,
                d_after=new_d,
                transition=transition.value,
            )
        )
        theta = new_theta
        if transition is rating.Transition.PROMOTE:
            break
    return trace


def difficulty_convergence(
    policy: LearnerPolicy, item: ItemState, trials: int, k: float = 0.7, seed: int = 0
) -> list[float]:
    """Difficulty trajectory as successive fresh learners attempt one item."""
    if trials < 0:
        raise ValueError("trials must be >= 0")
    rng = random.Random(seed)
    trace = []
    for _ in range(trials):
        outcome = 1 if policy.answers_correctly(rng, item.difficulty) else 0
        _, item.difficulty = rating.update(0.0, item.difficulty, k, outcome)
        item.attempt_count += 1
        trace.append(item.difficulty)
    return trace


def _correct_submission(question: Question) -> Submission:
    """Transcripts matching every expected output, source showing the concepts."""
    outputs = [list(case.expected_stdout_lines) for case in question.test_cases]
    return Submission(source="if True:\n    print(run(input()))\n", outputs=outputs)


def _incorrect_submission(question: Question, sloppy: bool) -> Submission:
    outputs: list = [["__wrong_output__"] for _ in question.test_cases]
    source = "x = 1\n" if sloppy else "if True:\n    print(run(input()))\n"
    return Submission(source=source, outputs=outputs)


def _pretest_answers(
    engine: SessionEngine, concept: str, policy: LearnerPolicy, rng: random.Random
) -> list:
    questions = engine.bank.pretests.get(concept, [])
    if policy.pretest_score is not None:
        n_correct = int(policy.pretest_score * len(questions) + 1e-9)
    else:
        n_correct = sum(1 for _ in questions if policy.answers_correctly(rng, 0.0))
    answers = []
    for i, q in enumerate(questions):
        if i < n_correct:
            answers.append([list(case.expected_stdout_lines) for case in q.test_cases])
        else:
            answers.append([["__wrong_output__"] for _ in q.test_cases])
    return answers


def run_learner(
    engine: SessionEngine,
    learner_id: str,
    policy: LearnerPolicy,
    concept: str,
    rng: random.Random,
    max_steps: int = 500,
) -> None:
    """Drive one learner through the practice loop until completion or the cap."""
    engine.start_session(learner_id, has_programming_experience=False)
    result = engine.select_concept(learner_id, concept)
    if result.pretest_required:
        engine.submit_pretest(learner_id, concept, _pretest_answers(engine, concept, policy, rng))
    for _ in range(max_steps):
        try:
            view = engine.request_exercise(learner_id, concept)
        except PoolExhausted:
            break
        if view.question is None:
            break
        qid = view.question["id"]
        if policy.skip_rate and rng.random() < policy.skip_rate:
            engine.skip_exercise(learner_id, qid)
            continue
        question = engine.bank[qid]
        if policy.answers_correctly(rng, engine.items[qid].difficulty):
            submission = _correct_submission(question)
        else:
            sloppy = rng.random() < policy.sloppy_rate
            submission = _incorrect_submission(question, sloppy)
        submission.elapsed_seconds = round(rng.uniform(10.0, 300.0), 1)
        _, _, completed = engine.submit_code(learner_id, qid, submission)
        if completed:
            break


def run_cohort(
    n_learners: int,
    policies: "list[LearnerPolicy]",
    bank: QuestionBank,
    graph: ConceptGraph,
    mode: AssignmentMode,
    seed: int,
    concept: str = "conditionals",
    max_steps: int = 500,
) -> list[LogEvent]:
    """Simulate a cohort (policies assigned round-robin) and return its event log.

    Deterministic for a given seed: the engine clock is a step counter, so
    logs replay byte for byte.
    """
    if n_learners < 0:
        raise ValueError("n_learners must be >= 0")
    if n_learners and not policies:
        raise ValueError("need at least one policy")
    counter = iter(range(1, 10_000_000))
    engine = SessionEngine(
        graph, bank, mode, clock=lambda: float(next(counter)), initial_concept=concept
    )
    master = random.Random(seed)
    for i in range(n_learners):
        policy = policies[i % len(policies)]
        learner_rng = random.Random(master.randrange(2**63))
        run_learner(engine, f"learner-{i + 1:03d}", policy, concept, learner_rng, max_steps)
    return engine.events


def ability_calibration(
    true_ability: float, n_items: int = 400, k: float = 0.1, seed: int = 0
) -> tuple[float, float]:
    """(settled skill estimate, rate-matched expectation) for a logistic learner.

    The learner attempts fresh zero-difficulty items; the settled estimate is
    the mean skill over the final quarter of the run, compared against the
    logit of the empirical correct rate (the skill whose predicted success
    probability matches what the learner actually achieved).
    """
    rng = random.Random(seed)
    policy = LearnerPolicy.logistic(true_ability)
    theta = 0.0
    thetas = []
    corrects = 0
    for _ in range(n_items):
        outcome = 1 if policy.answers_correctly(rng, 0.0) else 0
        corrects += outcome
        theta, _ = rating.update(theta, 0.0, k, outcome)
        thetas.append(theta)
    tail = thetas[-(n_items // 4) :]
    settled = sum(tail) / len(tail)
    rate = corrects / n_items
    rate = min(max(rate, 1e-9), 1 - 1e-9)
    expectation = math.log(rate / (1.0 - rate))
    expectation = max(0.0, min(1.0, expectation))  # skill scale is clamped
    return settled, expectation
