"""Adaptive programming-practice engine.

Skill and exercise difficulty are estimated in real time from submission
outcomes; learners get the exercise whose difficulty sits closest to their
skill, hints from a concept ontology, transcript-based grading, and
next-concept suggestions from question co-occurrence.
"""

from importlib import resources
from pathlib import Path

from .bank import Question, QuestionBank, TestCase, load_bank, parse_bank
from .errors import EngineError
from .grading import GradeReport, Submission, grade, render_feedback
from .ontology import ConceptGraph, ConceptStatus, load_ontology, suggest_next, validate_bank
from .rating import MASTERY_THRESHOLD, Transition, check_transition, probability_correct, select_k, update
from .scheduler import AssignmentMode, ItemState, LearnerState, Level
from .session import LogEvent, SessionEngine, read_log, replay, write_log
from .simulator import LearnerPolicy, run_cohort, steps_to_threshold

__version__ = "0.1.0"


def sample_ontology_path() -> Path:
    """Path to the bundled sample ontology."""
    return Path(str(resources.files("codedrill").joinpath("data/ontology.json")))


def sample_bank_path() -> Path:
    """Path to the bundled sample question bank."""
    return Path(str(resources.files("codedrill").joinpath("data/bank.json")))
