"""FastAPI application: stateless compute endpoints plus learner sessions.

A session owns one online learner behind a lock (learners are single-writer)
and lives until deleted. Everything else is pure compute on the request body.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from ..core import Hyperparams, PrecomputedScorer, Sample, ZeroScorer
from ..errors import DataError, NumericError
from ..learner import OcscaLearner
from ..model_io import flatten_to_scorer, parse_model, serialize_model
from . import handlers, schemas


class SessionStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, tuple[OcscaLearner, threading.Lock]] = {}

    def create(self, learner: OcscaLearner) -> str:
        session_id = uuid.uuid4().hex
        with self._lock:
            self._sessions[session_id] = (learner, threading.Lock())
        return session_id

    def get(self, session_id: str) -> tuple[OcscaLearner, threading.Lock]:
        with self._lock:
            entry = self._sessions.get(session_id)
        if entry is None:
            raise HTTPException(
                status_code=404,
                detail={"kind": "data", "message": f"no session {session_id!r}"},
            )
        return entry

    def drop(self, session_id: str) -> bool:
        with self._lock:
            return self._sessions.pop(session_id, None) is not None


def create_app() -> FastAPI:
    app = FastAPI(
        title="costadapt",
        description="Online cost-sensitive adaptation of a fixed base classifier",
        version="0.1.0",
    )
    sessions = SessionStore()

    @app.exception_handler(DataError)
    async def data_error(request: Request, exc: DataError):
        return JSONResponse(
            status_code=422, content={"detail": {"kind": "data", "message": str(exc)}}
        )

    @app.exception_handler(NumericError)
    async def numeric_error(request: Request, exc: NumericError):
        return JSONResponse(
            status_code=422, content={"detail": {"kind": "numeric", "message": str(exc)}}
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/train-base", response_model=schemas.TrainBaseResponse)
    def train_base(req: schemas.TrainBaseRequest):
        return handlers.train_base(req)

    @app.post("/adapt", response_model=schemas.AdaptResponse)
    def adapt(req: schemas.AdaptRequest):
        return handlers.adapt(req)

    @app.post("/eval", response_model=schemas.EvalResponse)
    def evaluate_model(req: schemas.EvalRequest):
        return handlers.evaluate_model(req)

    @app.post("/bench", response_model=schemas.BenchResponse)
    def run_bench(req: schemas.BenchRequest):
        return handlers.run_bench(req)

    @app.post("/sessions", response_model=schemas.SessionCreateResponse)
    def create_session(req: schemas.SessionCreateRequest):
        if req.model_text is not None:
            classifier, _, _ = parse_model(req.model_text)
            base = flatten_to_scorer(classifier)
            dimension = classifier.dimension
        else:
            if req.dimension is None or req.dimension < 1:
                raise DataError("a fresh session needs a positive dimension")
            base = ZeroScorer() if req.base_kind == "zero" else PrecomputedScorer()
            dimension = req.dimension
        learner = OcscaLearner(
            base,
            dimension,
            req.schedule.to_domain(),
            Hyperparams(alpha=req.alpha, skip_zero_vectors=req.skip_zero_vectors),
            trace=req.trace,
        )
        session_id = sessions.create(learner)
        return schemas.SessionCreateResponse(session_id=session_id, dimension=dimension)

    @app.post("/sessions/{session_id}/step", response_model=schemas.StepResponse)
    def step(session_id: str, sample: schemas.SamplePayload):
        learner, lock = sessions.get(session_id)
        with lock:
            outcome = learner.process_sample(sample.to_domain())
            return handlers.step_response(outcome, learner.updates_applied)

    @app.post("/sessions/{session_id}/predict", response_model=schemas.PredictResponse)
    def predict(session_id: str, req: schemas.PredictRequest):
        learner, lock = sessions.get(session_id)
        with lock:
            probe = Sample(req.features.to_domain(), 1, req.base_score)
            value = learner.classifier.score_sample(probe)
        return schemas.PredictResponse(score=value, label=1 if value >= 0 else -1)

    @app.get("/sessions/{session_id}/model", response_model=schemas.SessionModelResponse)
    def session_model(session_id: str):
        learner, lock = sessions.get(session_id)
        with lock:
            text = serialize_model(
                learner.classifier, learner.schedule, learner.params.alpha
            )
            return schemas.SessionModelResponse(
                model_text=text, updates_applied=learner.updates_applied
            )

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        if not sessions.drop(session_id):
            raise HTTPException(
                status_code=404,
                detail={"kind": "data", "message": f"no session {session_id!r}"},
            )
        return {"deleted": session_id}

    return app


app = create_app()
