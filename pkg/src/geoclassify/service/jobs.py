"""Background training jobs on a bounded worker pool."""

from __future__ import annotations

import threading
import traceback
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Optional


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class Job:
    id: str
    request: dict
    status: str = "queued"  # queued -> running -> done | failed
    model_id: Optional[str] = None
    report: Optional[dict] = None
    error: Optional[str] = None
    submitted_at: str = field(default_factory=_now)
    finished_at: Optional[str] = None


class JobManager:
    """Tracks job state; the actual work runs on a thread pool.

    ``finish`` callbacks run while the manager lock is held so that model
    persistence and the done transition look atomic to API readers.
    """

    def __init__(self, workers: int = 2):
        self._pool = ThreadPoolExecutor(max_workers=max(1, workers))
        self._lock = threading.Lock()
        self._jobs: dict[str, Job] = {}

    def submit(self, request: dict, work: Callable[[], tuple[str, dict]],
               persist: Optional[Callable[[], str]] = None) -> Job:
        job = Job(id=uuid.uuid4().hex[:12], request=request)
        with self._lock:
            self._jobs[job.id] = job

        def run():
            with self._lock:
                job.status = "running"
            try:
                model_id, report = work()
                with self._lock:
                    if persist is not None:
                        model_id = persist()
                    job.model_id = model_id
                    job.report = report
                    job.status = "done"
                    job.finished_at = _now()
            except Exception as exc:
                with self._lock:
                    job.error = f"{type(exc).__name__}: {exc}"
                    job.status = "failed"
                    job.finished_at = _now()
                traceback.print_exc()

        self._pool.submit(run)
        return job

    def get(self, job_id: str) -> Optional[Job]:
        with self._lock:
            return self._jobs.get(job_id)

    def snapshot(self, job_id: str) -> Optional[dict]:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return None
            return {
                "id": job.id,
                "status": job.status,
                "request": job.request,
                "model_id": job.model_id,
                "report": job.report,
                "error": job.error,
                "submitted_at": job.submitted_at,
                "finished_at": job.finished_at,
            }

    def shutdown(self):
        self._pool.shutdown(wait=False, cancel_futures=True)
