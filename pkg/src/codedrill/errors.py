"""Engine exception family. Every error carries a stable code for the HTTP layer."""


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class ParseError(EngineError):
    code = "parse_error"


class CycleError(EngineError):
    code = "cycle_error"


class DanglingParent(EngineError):
    code = "dangling_parent"


class UnknownConcept(EngineError):
    code = "unknown_concept"


class PoolExhausted(EngineError):
    code = "pool_exhausted"


class StateMismatch(EngineError):
    code = "state_mismatch"


class ExecutorFailure(EngineError):
    code = "executor_failure"


class MissingTranscript(EngineError):
    code = "missing_transcript"


class NotAssigned(EngineError):
    code = "not_assigned"


class NoPretestPending(EngineError):
    code = "no_pretest_pending"


class ConceptNotComplete(EngineError):
    code = "concept_not_complete"


class CorruptLog(EngineError):
    code = "corrupt_log"


class NonTerminating(EngineError):
    code = "non_terminating"
