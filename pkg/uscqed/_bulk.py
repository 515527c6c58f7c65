"""

Implements a thread pool for running independent solver jobs.

"""

from __future__ import unicode_literals

import typing

import logging
import threading
from six.moves.queue import Queue

from .errors import JobsFailed

if typing.TYPE_CHECKING:
    from typing import Any, Callable, Dict, Hashable, List, Optional, Type

    from types import TracebackType


log = logging.getLogger("uscqed.bulk")


class _Worker(threading.Thread):
    """Worker thread that pulls tasks from a queue."""

    def __init__(self, pool):
        # type: (JobPool) -> None
        self.pool = pool
        super(_Worker, self).__init__()
        self.daemon = True

    def run(self):
        # type: () -> None
        queue = self.pool.queue
        while True:
            task = queue.get(block=True)
            try:
                if task is None:
                    break  # Sentinel to exit thread
                task()
            finally:
                queue.task_done()


class _Job(object):
    """A callable that stores its result, or its error, in the pool."""

    def __init__(self, pool, key, func, args):
        # type: (JobPool, Hashable, Callable[..., Any], tuple) -> None
        self.pool = pool
        self.key = key
        self.func = func
        self.args = args

    def __call__(self):
        # type: () -> None
        try:
            result = self.func(*self.args)
        except Exception as error:
            log.debug("job %r failed: %s", self.key, error)
            self.pool.add_error(self.key, error)
        else:
            self.pool.add_result(self.key, result)


class JobPool(object):
    """Run jobs in worker threads.

    With ``num_workers=0`` jobs run synchronously in `submit`. Results
    and errors are stored by key; the order in which jobs finish has
    no effect on either mapping.

    Arguments:
        num_workers (int): number of worker threads.
        strict (bool): raise `~uscqed.errors.JobsFailed` on exit if
            any job failed.

    """

    def __init__(self, num_workers=0, strict=True):
        # type: (int, bool) -> None
        if num_workers < 0:
            raise ValueError("num_workers must be >= 0")
        self.num_workers = num_workers
        self.strict = strict
        self.queue = None  # type: Optional[Queue[Optional[_Job]]]
        self.workers = []  # type: List[_Worker]
        self.results = {}  # type: Dict[Hashable, Any]
        self.failed = {}  # type: Dict[Hashable, Exception]
        self.running = False
        self._lock = threading.Lock()

    @property
    def errors(self):
        # type: () -> List[Exception]
        """`list`: the errors raised by failed jobs."""
        return list(self.failed.values())

    def start(self):
        """Start the workers."""
        if self.num_workers:
            self.queue = Queue(maxsize=self.num_workers)
            self.workers = [_Worker(self) for _ in range(self.num_workers)]
            for worker in self.workers:
                worker.start()
        self.running = True

    def stop(self):
        """Stop the workers (will block until they are finished)."""
        if self.running and self.num_workers:
            for _worker in self.workers:
                self.queue.put(None)
            for worker in self.workers:
                worker.join()
            # Free up references held by workers
            del self.workers[:]
            self.queue.join()
            self.queue = None
        self.running = False

    def add_result(self, key, result):
        # type: (Hashable, Any) -> None
        """Store the result of a job."""
        with self._lock:
            self.results[key] = result

    def add_error(self, key, error):
        # type: (Hashable, Exception) -> None
        """Store an exception raised by a job."""
        with self._lock:
            self.failed[key] = error

    def __enter__(self):
        self.start()
        return self

    def __exit__(
        self,
        exc_type,  # type: Optional[Type[BaseException]]
        exc_value,  # type: Optional[BaseException]
        traceback,  # type: Optional[TracebackType]
    ):
        self.stop()
        if traceback is None and self.strict and self.failed:
            raise JobsFailed(self.errors)

    def submit(self, key, func, *args):
        # type: (Hashable, Callable[..., Any], *Any) -> None
        """Queue ``func(*args)``, storing the outcome under ``key``."""
        job = _Job(self, key, func, args)
        if self.queue is None:
            job()
        else:
            self.queue.put(job)
