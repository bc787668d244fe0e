"""Bounded generation queue: model inference dominates, so work funnels
through a small worker pool; requests past the bound are refused."""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass


class QueueFull(RuntimeError):
    pass


@dataclass
class Job:
    id: str
    future: Future | None = None
    state: str = "queued"
    result: object = None
    error: str | None = None


class JobQueue:
    def __init__(self, workers: int = 1, capacity: int = 8):
        self.capacity = capacity
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def _in_flight(self) -> int:
        return sum(1 for j in self._jobs.values() if j.state in ("queued", "running"))

    def submit(self, fn, *args, **kwargs) -> str:
        with self._lock:
            if self._in_flight() >= self.capacity:
                raise QueueFull(f"queue holds {self.capacity} jobs")
            job_id = uuid.uuid4().hex

            def run():
                job = self._jobs[job_id]
                job.state = "running"
                try:
                    job.result = fn(*args, **kwargs)
                    job.state = "done"
                except Exception as exc:  # reported through the job record
                    job.error = f"{type(exc).__name__}: {exc}"
                    job.state = "failed"

            self._jobs[job_id] = Job(job_id)
            self._jobs[job_id].future = self._pool.submit(run)
        return job_id

    def run_sync(self, fn, *args, timeout: float | None = None, **kwargs):
        """Queue the call and wait for it, still honoring the bound."""
        job_id = self.submit(fn, *args, **kwargs)
        job = self._jobs[job_id]
        job.future.result(timeout=timeout)
        if job.state == "failed":
            raise RuntimeError(job.error)
        return job.result

    def status(self, job_id: str) -> Job:
        if job_id not in self._jobs:
            raise KeyError(job_id)
        return self._jobs[job_id]

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
