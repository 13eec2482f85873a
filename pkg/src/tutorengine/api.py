"""HTTP+JSON API over the engine.

Bearer tokens from a static credentials file carry one of two roles
(teacher, student). Errors are ``{"code", "message"}`` bodies with
matching status codes. No student-facing route ever returns an
unapproved question or draft.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .service import (
    NotAvailableError,
    NotFoundError,
    TutorEngine,
    ValidationFailure,
)


class Credentials:
    """token -> {user, role} from a static JSON file."""

    def __init__(self, tokens: dict[str, dict]):
        self.tokens = tokens

    @classmethod
    def from_file(cls, path: str | Path) -> "Credentials":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(payload.get("tokens", {}))

    def resolve(self, token: str) -> dict | None:
        return self.tokens.get(token)


class ClassBody(BaseModel):
    name: str
    subject: str
    roster: list[str] = Field(default_factory=list)


class QuestionBody(BaseModel):
    title: str
    sources: list[str]


class ConceptEdit(BaseModel):
    action: str
    stems: list[str] = Field(default_factory=list)
    score: float | None = None
    phrase: str | None = None


class ConceptEditsBody(BaseModel):
    edits: list[ConceptEdit]


class ApproveBody(BaseModel):
    drafts: list[int] = Field(default_factory=list)


class AnswerBody(BaseModel):
    transcript: str


class SelfStudyBody(BaseModel):
    title: str
    sources: list[str]
    subject: str | None = None


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def create_app(engine: TutorEngine, credentials: Credentials) -> FastAPI:
    app = FastAPI(title="tutorengine", docs_url=None, redoc_url=None)

    def auth(authorization: str = Header(default="")) -> dict:
        if not authorization.startswith("Bearer "):
            raise _error(401, "unauthenticated", "missing bearer token")
        identity = credentials.resolve(authorization.removeprefix("Bearer "))
        if identity is None:
            raise _error(401, "unauthenticated", "unknown token")
        return identity

    def teacher(identity: dict = Depends(auth)) -> dict:
        if identity["role"] != "teacher":
            raise _error(403, "forbidden", "teacher role required")
        return identity

    @app.exception_handler(NotFoundError)
    async def not_found(_req: Request, exc: NotFoundError):
        return JSONResponse(
            status_code=404,
            content={"code": "not_found", "message": str(exc.args[0])},
        )

    @app.exception_handler(ValidationFailure)
    async def invalid(_req: Request, exc: ValidationFailure):
        return JSONResponse(
            status_code=400, content={"code": "invalid", "message": str(exc)}
        )

    @app.exception_handler(NotAvailableError)
    async def unavailable(_req: Request, exc: NotAvailableError):
        return JSONResponse(
            status_code=403, content={"code": "not_available", "message": str(exc)}
        )

    @app.exception_handler(HTTPException)
    async def http_error(_req: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.post("/classes", status_code=201)
    def create_class(body: ClassBody, _: dict = Depends(teacher)):
        return engine.create_class(body.name, body.subject, body.roster)

    @app.post("/classes/{class_id}/questions", status_code=201)
    def create_question(class_id: str, body: QuestionBody,
                        _: dict = Depends(teacher)):
        return engine.create_question(class_id, body.title, body.sources)

    @app.put("/questions/{question_id}/concepts")
    def update_concepts(question_id: str, body: ConceptEditsBody,
                        _: dict = Depends(teacher)):
        edits = [e.model_dump(exclude_none=True) for e in body.edits]
        return engine.update_concepts(question_id, edits)

    @app.post("/questions/{question_id}/approve")
    def approve(question_id: str, body: ApproveBody | None = None,
                _: dict = Depends(teacher)):
        drafts = body.drafts if body else []
        return engine.approve_question(question_id, drafts)

    @app.get("/classes/{class_id}/questions")
    def list_questions(class_id: str, role: str = Query(default=""),
                       identity: dict = Depends(auth)):
        effective = identity["role"]
        if role == "student":  # teachers may preview the student view
            effective = "student"
        return engine.list_questions(class_id, role=effective)

    @app.post("/questions/{question_id}/answers", status_code=201)
    def submit_answer(question_id: str, body: AnswerBody,
                      identity: dict = Depends(auth)):
        return engine.submit_answer(question_id, identity["user"], body.transcript)

    @app.get("/questions/{question_id}/recommendations")
    def recommendations(question_id: str, _: dict = Depends(auth)):
        return {"recommendations": engine.recommendations(question_id)}

    @app.get("/classes/{class_id}/stats")
    def stats(class_id: str, _: dict = Depends(teacher)):
        return engine.get_stats(class_id)

    @app.post("/selfstudy/questions", status_code=201)
    def self_study(body: SelfStudyBody, identity: dict = Depends(auth)):
        return engine.self_study_create(
            identity["user"], body.title, body.sources, body.subject
        )

    return app
