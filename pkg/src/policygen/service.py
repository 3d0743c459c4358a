"""HTTP facade over the engine, generator and evaluators.

Artifacts (bank, library, template, criteria, checklist, fact rules) are
loaded once at startup and shared read-only. Requests for different
sessions run in parallel; requests for one session are serialized by a
per-session lock. Sessions persist on every mutation and live until
explicitly deleted.

Error responses carry ``{"error": {"code", "message", "detail"}}``; the
codes are the ``code`` attributes of the package's exception classes
(see errors.py) plus FastAPI's standard validation handling.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import data as _data
from .bank import Question, QuestionBank, load_bank_file
from .completeness import evaluate_completeness, load_criteria
from .coverage import evaluate_coverage, load_checklist
from .engine import (
    COMPLETED,
    Session,
    amend_answer,
    session_to_dict,
    start_session,
    submit_answer,
)
from .errors import AnswerError, PolicygenError, SessionStateError
from .generator import PolicyTemplate, document_to_dict, generate, load_template_file, render
from .library import ClauseLibrary, load_library_file
from .presence import build_presence, load_fact_rules, presence_from_session
from .readability import fre_score
from .store import SessionStore

_RENDER_MEDIA_TYPES = {
    "plain": "text/plain; charset=utf-8",
    "markdown": "text/markdown; charset=utf-8",
    "html": "text/html; charset=utf-8",
}


@dataclass
class ServiceConfig:
    bank_path: Any = None
    library_path: Any = None
    template_path: Any = None
    store_dir: Any = "sessions"
    criteria_path: Any = None
    checklist_path: Any = None
    fact_rules_path: Any = None
    ui_dir: Any = None  # optional static bundle mounted at /ui

    def resolved(self) -> "ServiceConfig":
        return ServiceConfig(
            bank_path=self.bank_path or _data.default_bank_path(),
            library_path=self.library_path or _data.default_library_path(),
            template_path=self.template_path or _data.default_template_path(),
            store_dir=self.store_dir,
            criteria_path=self.criteria_path or _data.default_criteria_path(),
            checklist_path=self.checklist_path or _data.default_checklist_path(),
            fact_rules_path=self.fact_rules_path or _data.default_fact_rules_path(),
            ui_dir=self.ui_dir,
        )


class SessionManager:
    """Store access with one lock per session id."""

    def __init__(self, store: SessionStore, bank: QuestionBank):
        self.store = store
        self.bank = bank
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._guard:
            lock = self._locks.get(session_id)
            if lock is None:
                lock = self._locks[session_id] = threading.Lock()
            return lock

    def create(self) -> tuple[str, Session]:
        session = start_session(self.bank)
        session_id = self.store.save(session)
        return session_id, session

    @contextmanager
    def open(self, session_id: str, save: bool = False):
        """Yield the session under its lock; persist on exit when asked."""
        with self._lock(session_id):
            session = self.store.restore(session_id, self.bank)
            yield session
            if save:
                self.store.save(session, session_id)

    def delete(self, session_id: str) -> None:
        with self._lock(session_id):
            self.store.delete(session_id)
        with self._guard:
            self._locks.pop(session_id, None)


class AnswerIn(BaseModel):
    qnum: str
    value: Any


class AmendIn(BaseModel):
    value: Any


class ReadabilityIn(BaseModel):
    text: str
    words_per_minute: float = 275.0


class CompletenessIn(BaseModel):
    presence: dict
    criteria: Optional[Any] = None


class CoverageIn(BaseModel):
    presence: dict
    review_flags: list[str] = []
    checklist: Optional[Any] = None


def _question_view(question: Optional[Question]) -> Optional[dict]:
    if question is None:
        return None
    view = {
        "qnum": question.qnum,
        "section": question.section,
        "text": question.text,
        "qtype": question.qtype,
    }
    if question.options:
        view["options"] = list(question.options)
    if question.placeholder is not None:
        view["placeholder"] = question.placeholder
    return view


def _progress(bank: QuestionBank, session: Session) -> dict:
    answered: dict[str, int] = {letter: 0 for letter in bank.sections}
    for qnum in session.active_qnums():
        letter = bank.questions[qnum].section
        answered[letter] = answered.get(letter, 0) + 1
    return {
        letter: {
            "name": bank.sections[letter].name,
            "answered": answered.get(letter, 0),
        }
        for letter in bank.sections
    }


def _session_view(manager: SessionManager, session_id: str, session: Session) -> dict:
    bank = manager.bank
    current = None if session.completed else bank.questions[session.cursor]
    return {
        "id": session_id,
        "completed": session.completed,
        "question": _question_view(current),
        "active": session.active_qnums(),
        "progress": _progress(bank, session),
        "snapshot": session_to_dict(session),
    }


_ERROR_STATUS = {
    "invalid_answer": 422,
    "session_state": 409,
    "unknown_session": 404,
    "corrupt_snapshot": 500,
    "storage_failure": 500,
    "generation_failed": 409,
    "unresolved_placeholder": 422,
    "invalid_evaluation_input": 422,
    "malformed_placeholder": 422,
    "invalid_bank": 500,
    "invalid_library": 500,
    "invalid_template": 500,
    "invalid_slot": 500,
}


def _error_response(exc: PolicygenError) -> JSONResponse:
    status = _ERROR_STATUS.get(exc.code, 500)
    return JSONResponse(
        status_code=status,
        content={"error": {"code": exc.code, "message": str(exc), "detail": exc.__class__.__name__}},
    )


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    cfg = (config or ServiceConfig()).resolved()
    library: ClauseLibrary = load_library_file(cfg.library_path)
    bank: QuestionBank = load_bank_file(cfg.bank_path)
    template: PolicyTemplate = load_template_file(cfg.template_path, bank)
    with open(cfg.criteria_path, "rb") as fh:
        criteria, fact_registry = load_criteria(fh.read(), library.taxonomy)
    with open(cfg.checklist_path, "rb") as fh:
        checklist = load_checklist(fh.read(), library.taxonomy, fact_registry)
    with open(cfg.fact_rules_path, "rb") as fh:
        fact_rules = load_fact_rules(fh.read(), fact_registry)
    store = SessionStore(Path(cfg.store_dir))
    manager = SessionManager(store, bank)

    app = FastAPI(title="policygen", version="0.1.0")
    app.state.manager = manager
    app.state.library = library
    app.state.template = template

    # The browser bundle may be hosted elsewhere; the API is origin-agnostic.
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    if cfg.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(cfg.ui_dir), html=True), name="ui")

    @app.exception_handler(PolicygenError)
    async def _handle_policygen_error(request: Request, exc: PolicygenError):
        return _error_response(exc)

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "bank_version": bank.version,
            "library_version": library.version,
            "template_version": template.version,
        }

    @app.get("/bank")
    def bank_view():
        return {
            "version": bank.version,
            "entry": bank.entry,
            "sections": [
                {
                    "letter": letter,
                    "name": section.name,
                    "expected_questions": section.expected_questions,
                }
                for letter, section in bank.sections.items()
            ],
            "questions": [_question_view(q) for q in bank.questions.values()],
        }

    @app.post("/sessions", status_code=201)
    def create_session():
        session_id, session = manager.create()
        return _session_view(manager, session_id, session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        with manager.open(session_id) as session:
            return _session_view(manager, session_id, session)

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        manager.delete(session_id)
        return Response(status_code=204)

    @app.get("/sessions/{session_id}/question")
    def get_question(session_id: str):
        with manager.open(session_id) as session:
            if session.completed:
                return {"completed": True, "question": None}
            return {"completed": False, "question": _question_view(bank.questions[session.cursor])}

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerIn):
        with manager.open(session_id, save=True) as session:
            if session.completed:
                raise SessionStateError("session is already completed")
            if body.qnum != session.cursor:
                raise AnswerError(
                    f"answer is for {body.qnum} but the interview is at {session.cursor}"
                )
            result = submit_answer(bank, session, body.value)
            view = _session_view(manager, session_id, session)
            view["next"] = None if result == COMPLETED else _question_view(result)
            return view

    @app.put("/sessions/{session_id}/answers/{qnum}")
    def put_answer(session_id: str, qnum: str, body: AmendIn):
        with manager.open(session_id, save=True) as session:
            amend_answer(bank, session, qnum, body.value)
            return _session_view(manager, session_id, session)

    @app.get("/sessions/{session_id}/preview")
    def preview(session_id: str):
        with manager.open(session_id) as session:
            doc = generate(template, session, library, strict=False)
            return document_to_dict(doc)

    # Registered for GET as well so a plain link can download the policy.
    @app.api_route("/sessions/{session_id}/generate", methods=["GET", "POST"])
    def generate_policy(
        session_id: str,
        format: str = Query("plain"),
        strict: bool = Query(True),
        timestamp: Optional[str] = Query(None),
    ):
        with manager.open(session_id) as session:
            doc = generate(template, session, library, strict=strict, generated_at=timestamp)
            payload = render(doc, format)
            return Response(content=payload, media_type=_RENDER_MEDIA_TYPES.get(format, "text/plain"))

    @app.post("/evaluate/readability")
    def evaluate_readability(body: ReadabilityIn):
        report = fre_score(body.text, words_per_minute=body.words_per_minute)
        return report.to_dict()

    @app.post("/evaluate/completeness")
    def evaluate_completeness_endpoint(body: CompletenessIn):
        active_criteria, registry = criteria, fact_registry
        if body.criteria is not None:
            active_criteria, registry = load_criteria(body.criteria, library.taxonomy, fact_registry)
        presence = build_presence(
            body.presence.get("present", []),
            body.presence.get("conditions", {}),
            library.taxonomy,
            registry,
        )
        return evaluate_completeness(active_criteria, presence).to_dict()

    @app.post("/evaluate/coverage")
    def evaluate_coverage_endpoint(body: CoverageIn):
        active_checklist = checklist
        if body.checklist is not None:
            active_checklist = load_checklist(body.checklist, library.taxonomy, fact_registry)
        presence = build_presence(
            body.presence.get("present", []),
            body.presence.get("conditions", {}),
            library.taxonomy,
            fact_registry,
        )
        return evaluate_coverage(active_checklist, presence, body.review_flags).to_dict()

    @app.get("/sessions/{session_id}/presence")
    def session_presence(session_id: str):
        with manager.open(session_id) as session:
            presence = presence_from_session(session, bank, library, fact_rules)
            return presence.to_dict()

    return app
