"""HTTP facade: circuit validation and simulation plus streamed training
jobs.  The composer UI consumes exactly this surface; every number it shows
comes from here.

Endpoints: GET /api/gates, POST /api/circuits/validate, POST /api/simulate,
POST /api/train -> {job_id}, GET /api/train/{id}/events (line-delimited JSON
records, terminated by a status record), DELETE /api/train/{id}.
"""

from __future__ import annotations

import json
import threading
import time
import uuid

import numpy as np
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.requests import Request
from fastapi.responses import JSONResponse, StreamingResponse

from . import circuit_json
from .circuit_json import result_payload
from .compiler import Mode, TnOptions, compile, evaluate
from .errors import QtnError, SchemaViolation
from .gates import GateKind, arity, param_count
from .vqa.hamiltonian import parse_pauli_sum
from .vqa.train import TASKS, train


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


class TrainingJob:
    """One background training run with a replayable event log.

    Events are kept in order so a subscriber that connects after the run
    started (or even after it finished) still sees the whole stream.
    """

    def __init__(self, job_id: str, task: str):
        self.id = job_id
        self.task = task
        self.events: list[dict] = []
        self.cond = threading.Condition()
        self.finished = False
        self.cancel_requested = False
        self.status = "running"

    def append(self, event: dict) -> None:
        with self.cond:
            self.events.append(event)
            self.cond.notify_all()

    def finish(self, status: str, extras: dict | None = None) -> None:
        event = {"status": status}
        if extras:
            event["extras"] = {k: _jsonable(v) for k, v in extras.items()}
        with self.cond:
            self.status = status
            self.events.append(event)
            self.finished = True
            self.cond.notify_all()

    def stream(self):
        sent = 0
        while True:
            with self.cond:
                self.cond.wait_for(
                    lambda: len(self.events) > sent or self.finished)
                batch = self.events[sent:]
                sent = len(self.events)
                done = self.finished and sent == len(self.events)
            for event in batch:
                yield json.dumps(event) + "\n"
            if done:
                return


def _train_worker(job: TrainingJob, kwargs: dict) -> None:
    def callback(iteration: int, loss: float):
        job.append({"iter": iteration, "loss": loss})
        return not job.cancel_requested

    try:
        trace = train(job.task, callback=callback, **kwargs)
    except QtnError as exc:
        job.finish("error", {"message": str(exc)})
    except Exception as exc:  # surface bugs to the client, don't hang it
        job.finish("error", {"message": f"{type(exc).__name__}: {exc}"})
    else:
        extras = dict(trace.extras)
        canceled = extras.pop("canceled", False)
        job.finish("canceled" if canceled else "done", extras)


_TRAIN_OPTION_KEYS = ("n_qubits", "depth", "epochs", "seed", "n_train",
                      "n_test", "mode", "grad_method", "lr_decay",
                      "decay_after")


def create_app() -> FastAPI:
    app = FastAPI(title="qtnsim service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    jobs: dict[str, TrainingJob] = {}
    jobs_lock = threading.Lock()

    @app.exception_handler(QtnError)
    async def _qtn_error(request: Request, exc: QtnError):
        body = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, SchemaViolation):
            body["pointer"] = exc.pointer
        return JSONResponse(status_code=400, content=body)

    @app.get("/api/gates")
    def gates():
        return [{"kind": kind.value, "arity": arity(kind),
                 "param_count": param_count(kind)} for kind in GateKind]

    @app.post("/api/circuits/validate")
    def validate(doc: dict):
        try:
            circuit_json.parse(doc)
        except SchemaViolation as exc:
            return {"ok": False,
                    "errors": [{"pointer": exc.pointer, "message": str(exc)}]}
        except QtnError as exc:
            return {"ok": False,
                    "errors": [{"pointer": "", "message": str(exc)}]}
        return {"ok": True}

    @app.post("/api/simulate")
    def simulate(body: dict):
        circuit = circuit_json.parse(body.get("circuit", {}))
        params = body.get("params")
        mode = Mode(body.get("mode", "statevector"))
        tn_options = TnOptions(**body["tn_options"]) \
            if "tn_options" in body else None
        start = time.perf_counter()
        cc = compile(circuit, mode=mode, tn_options=tn_options)
        values = evaluate(cc, params)
        wall_ms = (time.perf_counter() - start) * 1e3
        results = [result_payload(m, v)
                   for m, v in zip(circuit.measurements, values)]
        return {"mode": mode.value, "results": results, "wall_ms": wall_ms}

    @app.post("/api/train")
    def submit_training(body: dict):
        task = str(body.get("task", "")).lower()
        if task not in TASKS:
            return JSONResponse(status_code=400, content={
                "error": "UnknownTask",
                "message": f"task must be one of {TASKS}"})
        options = body.get("options") or {}
        kwargs = {k: options[k] for k in _TRAIN_OPTION_KEYS if k in options}
        if "hamiltonian_text" in options:
            kwargs["hamiltonian"] = parse_pauli_sum(
                options["hamiltonian_text"])
        if task == "vqe" and "hamiltonian" not in kwargs:
            return JSONResponse(status_code=400, content={
                "error": "UnknownTask",
                "message": "vqe needs options.hamiltonian_text"})
        job = TrainingJob(uuid.uuid4().hex, task)
        with jobs_lock:
            jobs[job.id] = job
        worker = threading.Thread(target=_train_worker, args=(job, kwargs),
                                  daemon=True)
        worker.start()
        return {"job_id": job.id}

    def _job_or_none(job_id: str) -> TrainingJob | None:
        with jobs_lock:
            return jobs.get(job_id)

    @app.get("/api/train/{job_id}/events")
    def events(job_id: str):
        job = _job_or_none(job_id)
        if job is None:
            return JSONResponse(status_code=404,
                                content={"error": "unknown job"})
        return StreamingResponse(job.stream(),
                                 media_type="application/x-ndjson")

    @app.delete("/api/train/{job_id}")
    def cancel(job_id: str):
        job = _job_or_none(job_id)
        if job is None:
            return JSONResponse(status_code=404,
                                content={"error": "unknown job"})
        with job.cond:
            if job.finished:
                return {"status": job.status}
            job.cancel_requested = True
        return {"status": "canceling"}

    return app
