"""HTTP shell over the session engine.

Stateless above the event log: every mutation appends to DATA_DIR/events.jsonl
and startup replays it, so a restarted service answers reads identically.
Mutating endpoints accept a client request id and are retry-safe. Learner
identity rides the X-Learner-Id header (GETs may use ?learner=).
"""

import json
import logging
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .bank import load_bank
from .errors import EngineError
from .grading import Submission
from .ontology import load_ontology, validate_bank
from .scheduler import AssignmentMode
from .session import LogEvent, read_log, replay

logger = logging.getLogger(__name__)

STATUS_BY_CODE = {
    "unknown_concept": 404,
    "not_assigned": 409,
    "no_pretest_pending": 409,
    "concept_not_complete": 409,
    "pool_exhausted": 409,
    "state_mismatch": 409,
    "missing_transcript": 400,
    "parse_error": 400,
    "cycle_error": 400,
    "dangling_parent": 400,
    "executor_failure": 502,
    "corrupt_log": 500,
    "non_terminating": 500,
    "engine_error": 500,
}


@dataclass
class ServiceConfig:
    ontology_path: str
    bank_path: str
    mode: str = "adaptive"
    seed: int = 0
    data_dir: str = "."
    language: str = "python"
    initial_concept: str = "variables"


class SessionBody(BaseModel):
    learner_id: str
    has_programming_experience: bool
    request_id: str | None = None


class SelectBody(BaseModel):
    request_id: str | None = None


class PretestBody(BaseModel):
    answers: list
    request_id: str | None = None


class SubmissionBody(BaseModel):
    question_id: int
    source: str = ""
    outputs: list | None = None
    elapsed_seconds: float = 0.0
    request_id: str | None = None


class SkipBody(BaseModel):
    question_id: int
    request_id: str | None = None


class AppState:
    """Engine plus the durable log and idempotency cache."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        graph = load_ontology(Path(config.ontology_path))
        bank = load_bank(config.bank_path)
        report = validate_bank(graph, bank)
        if not report.ok:
            raise EngineError("bank validation failed: " + "; ".join(report.errors))
        for warning in report.warnings:
            logger.warning("bank: %s", warning)

        mode = (
            AssignmentMode.random(config.seed)
            if config.mode == "random"
            else AssignmentMode.adaptive()
        )
        self.log_path = Path(config.data_dir) / "events.jsonl"
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        events = read_log(self.log_path) if self.log_path.exists() else []
        self.engine = replay(
            events,
            graph,
            bank,
            mode,
            language=config.language,
            initial_concept=config.initial_concept,
        )
        self.engine.event_sink = self._append
        self._log_fh = open(self.log_path, "a", encoding="utf-8")
        self._log_lock = threading.Lock()
        self._learner_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        # engine-wide mutation lock: linearizes per-learner mutations, shared
        # item-difficulty updates, and log appends in this single process
        self.mutate = threading.Lock()
        self._idempotent: dict[str, tuple[int, dict]] = {}

    def _append(self, ev: LogEvent) -> None:
        with self._log_lock:
            self._log_fh.write(ev.to_json() + "\n")
            self._log_fh.flush()

    def learner_lock(self, learner_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._learner_locks.setdefault(learner_id, threading.Lock())

    def cached(self, request_id: str | None) -> "tuple[int, dict] | None":
        if request_id is None:
            return None
        return self._idempotent.get(request_id)

    def remember(self, request_id: str | None, status: int, body: dict) -> None:
        if request_id is not None:
            self._idempotent[request_id] = (status, body)

    def close(self) -> None:
        with self._log_lock:
            self._log_fh.flush()
            self._log_fh.close()

    def snapshot(self) -> None:
        """Cache of the replayable state for operators; the log stays authoritative."""
        path = Path(self.config.data_dir) / "snapshot.json"
        data = {
            "learners": sorted(self.engine.profiles),
            "statuses": {
                f"{learner}/{concept}": status.value
                for (learner, concept), status in sorted(self.engine.statuses.items())
            },
            "items": {
                str(qid): {"difficulty": item.difficulty, "attempts": item.attempt_count}
                for qid, item in sorted(self.engine.items.items())
            },
            "events": len(self.engine.events),
        }
        path.write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")


def _learner_from(request: Request, header: str | None, query: str | None) -> str:
    learner = header or query
    if not learner:
        raise HTTPException(
            status_code=400, detail="missing learner id (X-Learner-Id header or ?learner=)"
        )
    return learner


def create_app(config: ServiceConfig) -> FastAPI:
    state = AppState(config)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        state.snapshot()
        state.close()

    app = FastAPI(title="codedrill", version="0.1.0", lifespan=lifespan)
    app.state.engine_state = state

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, exc: EngineError):
        status = STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(
            status_code=status, content={"code": exc.code, "message": exc.message}
        )

    def mutating(learner_id: str, request_id, fn):
        cached = state.cached(request_id)
        if cached is not None:
            status, body = cached
            return JSONResponse(status_code=status, content=body)
        with state.learner_lock(learner_id):
            with state.mutate:
                body = fn()
        state.remember(request_id, 200, body)
        return JSONResponse(status_code=200, content=body)

    @app.get("/concepts")
    def get_concepts(
        request: Request,
        learner: str | None = Query(default=None),
        x_learner_id: str | None = Header(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)
        return state.engine.concepts_snapshot(learner_id)

    @app.post("/session")
    def post_session(body: SessionBody):
        def run():
            view = state.engine.start_session(body.learner_id, body.has_programming_experience)
            return view.to_payload()

        return mutating(body.learner_id, body.request_id, run)

    @app.post("/concepts/{concept_id}/select")
    def post_select(
        concept_id: str,
        request: Request,
        body: SelectBody | None = None,
        x_learner_id: str | None = Header(default=None),
        learner: str | None = Query(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)

        def run():
            result = state.engine.select_concept(learner_id, concept_id)
            out = {"concept": concept_id, "pretest_required": result.pretest_required}
            if result.resume_level is not None and not state.engine.mode.is_random:
                out["resume_level"] = result.resume_level.value
            return out

        return mutating(learner_id, body.request_id if body else None, run)

    @app.post("/concepts/{concept_id}/pretest")
    def post_pretest(
        concept_id: str,
        body: PretestBody,
        request: Request,
        x_learner_id: str | None = Header(default=None),
        learner: str | None = Query(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)

        def run():
            level = state.engine.submit_pretest(learner_id, concept_id, body.answers)
            out = {"concept": concept_id, "scored": True}
            if not state.engine.mode.is_random:
                out["level"] = level.value
            return out

        return mutating(learner_id, body.request_id, run)

    @app.get("/exercise/next")
    def get_next(
        request: Request,
        concept: str,
        question_id: int | None = Query(default=None),
        learner: str | None = Query(default=None),
        x_learner_id: str | None = Header(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)

        def run():
            view = state.engine.request_exercise(learner_id, concept, question_id)
            return view.to_payload()

        return mutating(learner_id, None, run)

    @app.post("/submission")
    def post_submission(
        body: SubmissionBody,
        request: Request,
        x_learner_id: str | None = Header(default=None),
        learner: str | None = Query(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)

        def run():
            submission = Submission(
                source=body.source, outputs=body.outputs, elapsed_seconds=body.elapsed_seconds
            )
            feedback, transition, completed = state.engine.submit_code(
                learner_id, body.question_id, submission
            )
            return {
                "feedback": feedback,
                "transition": transition.value,
                "concept_completed": completed,
            }

        return mutating(learner_id, body.request_id, run)

    @app.post("/skip")
    def post_skip(
        body: SkipBody,
        request: Request,
        x_learner_id: str | None = Header(default=None),
        learner: str | None = Query(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)

        def run():
            view = state.engine.skip_exercise(learner_id, body.question_id)
            return view.to_payload()

        return mutating(learner_id, body.request_id, run)

    @app.get("/concepts/{concept_id}/completion")
    def get_completion(
        concept_id: str,
        request: Request,
        learner: str | None = Query(default=None),
        x_learner_id: str | None = Header(default=None),
    ):
        learner_id = _learner_from(request, x_learner_id, learner)
        return state.engine.completion_page(learner_id, concept_id)

    return app
