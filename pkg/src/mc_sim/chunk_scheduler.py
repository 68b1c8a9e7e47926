from __future__ import annotations

import asyncio
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Any, Callable, Collection, Dict, List, Optional

from src.utils.logger_utils import Logger, log


@dataclass
class ChunkTask:
    idx: int
    name: str
    func: Callable
    args: Collection[Any]
    observation: Optional[Any] = None
    error: Optional[BaseException] = None

    def __call__(self) -> Any:
        return self.func(*self.args)


class ChunkScheduler:
    """
    Runs independent work units on a thread pool from an asyncio loop.

    Every task gets its own done-event; the scheduler waits for all of them and
    hands back observations ordered by task index, so the caller sees the same
    result whatever the completion order was.
    """

    tasks: Dict[int, ChunkTask]
    tasks_done: Dict[int, asyncio.Event]
    remaining_tasks: set[int]
    max_workers: int
    timings: Logger

    def __init__(self, max_workers: int = 1, timings: Logger | None = None):
        self.tasks = {}
        self.tasks_done = {}
        self.remaining_tasks = set()
        self.max_workers = max_workers
        self.timings = timings or Logger()

    def set_tasks(self, tasks: List[ChunkTask]):
        self.tasks.update({task.idx: task for task in tasks})
        self.tasks_done.update({task.idx: asyncio.Event() for task in tasks})
        self.remaining_tasks.update(task.idx for task in tasks)

    def _timed_call(self, task: ChunkTask) -> Any:
        with self.timings.timed(task.name):
            return task()

    async def _run_task(self, task: ChunkTask, executor: ThreadPoolExecutor):
        loop = asyncio.get_running_loop()
        try:
            task.observation = await loop.run_in_executor(executor, partial(self._timed_call, task))
        except Exception as e:
            # Tasks created with create_task do not propagate exceptions; keep it for schedule() to re-raise.
            task.error = e
        self.tasks_done[task.idx].set()

    async def schedule(self, tasks: List[ChunkTask]) -> List[Any]:
        """Run all tasks, at most max_workers at a time, and return their observations by idx."""
        self.set_tasks(tasks)
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            running = [
                asyncio.create_task(self._run_task(self.tasks[idx], executor)) for idx in sorted(self.remaining_tasks)
            ]
            self.remaining_tasks.clear()
            await asyncio.gather(*(self.tasks_done[idx].wait() for idx in sorted(self.tasks_done)))
            await asyncio.gather(*running)

        failed = [task for task in self.tasks.values() if task.error is not None]
        if failed:
            raise failed[0].error

        for name in sorted({task.name for task in self.tasks.values()}):
            stats = self.timings.get_results(name)
            log(
                f"{name}: {stats['count']} chunks, "
                f"mean {stats['mean_latency']:.4f}s, total {stats['total_latency']:.4f}s"
            )
        return [self.tasks[idx].observation for idx in sorted(self.tasks)]

    def run(self, tasks: List[ChunkTask]) -> List[Any]:
        """Synchronous entry point."""
        return asyncio.run(self.schedule(tasks))
